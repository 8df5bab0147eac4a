"""
Constants for the hopsets package.

Defaults for the command line, the fixed report formats, and the rational
table that keeps every logarithm in the package exact.
"""

import math
from fractions import Fraction
from typing import Tuple

#: Distance to a node that cannot be reached (or lies past a search range).
#: A float infinity compares correctly against ints and Fractions, and adding
#: anything finite to it stays infinite.
INF = math.inf

# ---------------------------------------------------------------------------
# Environment and defaults
# ---------------------------------------------------------------------------

#: Caps the thread pool used for per-source and per-center searches.
THREADS_ENV = "HOPSET_THREADS"

#: Optional JSON file of CLI defaults.
CONFIG_ENV = "HOPSET_CONFIG"

DEFAULT_EPSILON = Fraction(1, 2)

#: ID-width constant of the ruling-set algorithm: IDs use a*ceil(log2 n) bits.
DEFAULT_ID_WIDTH = 1

MODELS = ("sequential", "congest", "clique", "streaming")

#: Named so reports can say which generator produced a graph.
PRNG_NAME = "numpy.random.PCG64"

# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_MODEL_PRECONDITION = 3

# ---------------------------------------------------------------------------
# Report formats
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = ("n", "D", "model", "cost", "hopset_size", "centers", "worst_ratio")

#: Verify all pairs up to this many nodes; sample above it.
ALL_PAIRS_LIMIT = 256

#: Pairs sampled when a graph is too large to check exhaustively.
SAMPLED_PAIRS = 500

#: Segments of exactly ell edges sampled when measuring the witness constant.
WITNESS_PATHS = 32

# ---------------------------------------------------------------------------
# Logarithms
# ---------------------------------------------------------------------------

#: Upper bound on ln 2, rounded up in the seventh decimal.
LN2_UPPER = Fraction(6931472, 10**7)

#: (t, upper bound on ln t) at t = 1, 9/8, ..., 15/8, each rounded up in the
#: seventh decimal. ln is concave, so the tangent from the largest table point
#: at or below y bounds ln y from above on the rest of [1, 2).
LN_TABLE: Tuple[Tuple[Fraction, Fraction], ...] = (
    (Fraction(8, 8), Fraction(0)),
    (Fraction(9, 8), Fraction(1177831, 10**7)),
    (Fraction(10, 8), Fraction(2231436, 10**7)),
    (Fraction(11, 8), Fraction(3184538, 10**7)),
    (Fraction(12, 8), Fraction(4054652, 10**7)),
    (Fraction(13, 8), Fraction(4855079, 10**7)),
    (Fraction(14, 8), Fraction(5596158, 10**7)),
    (Fraction(15, 8), Fraction(6286087, 10**7)),
)
