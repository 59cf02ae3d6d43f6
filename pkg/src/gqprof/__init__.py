"""q-gram profiles of strings compressed as straight-line programs.

Typical use::

    from gqprof import compress_text, build_profile

    slp = compress_text(b"abracadabra" * 1000)
    profile, stats = build_profile(slp, q=4, seed=1)
    profile.query(b"abra")
"""

from .errors import (
    CollisionError,
    CounterOverflowError,
    GqprofError,
    InvalidParameterError,
    SlpFormatError,
)
from .fingerprint import FingerprintParams, hash_string, make_params, roll
from .graph import (
    Cursor,
    QGramGraph,
    build_from_string,
    graph_extend,
    graph_seek,
    graph_start,
    insert_relevant_substring,
)
from .oracle import naive_profile, naive_relevant_check
from .pipeline import (
    BuildStats,
    build_profile,
    build_profile_basic,
    build_profile_improved,
    count_unigrams,
    qgram_distance,
)
from .profile import (
    CollisionReport,
    CsTree,
    Profile,
    ProfileTable,
    build_cstree,
    build_suffix_tree,
    enumerate_profile,
    query,
    read_profile_tsv,
    verify_collision_free,
    write_profile_tsv,
)
from .slp import (
    Pair,
    RelevantSubstring,
    Slp,
    Terminal,
    compress_text,
    compute_lengths,
    compute_occurrences,
    decompress_full,
    decompress_prefix,
    decompress_suffix,
    parse_slp,
    relevant_substring,
    reverse_slp,
    write_slp,
)

__version__ = "0.1.0"
