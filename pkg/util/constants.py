MODE_INIT = "init"
MODE_VERIFY = "verify"
MODE_HANDLES = "handles"
MODE_CUBULATE = "cubulate"

# coordinates are stored as integers in units of 1/RESOLUTION
RESOLUTION = 6

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

CONFIG_ENV = "MULTISECT_CONFIG"
CONFIG_DEFAULT = "multisect.json"
THREADS_ENV = "MULTISECT_THREADS"
SLOW_TESTS_ENV = "MULTISECT_SLOW_TESTS"

# largest dimension for which lattice sweeps are run
EXHAUSTIVE_MAX_N = 7

DEPTHS = ["symbolic", "exhaustive"]
OUTPUT_FORMATS = ["text", "csv", "json"]

VERIFY_SUITES = [
    "cover",
    "membership",
    "xi",
    "identities",
    "negative",
    "efficiency",
    "euler",
    "central",
    "pseudomanifold",
    "attachment",
    "t4",
]

table_columns = [
    "J",
    "i_star",
    "U",
    "V",
    "Vminus",
    "Ucirc",
    "Uminus",
    "rep",
    "classes",
    "h",
    "z",
    "glue_to",
    "copies",
]
