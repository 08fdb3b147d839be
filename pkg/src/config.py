import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        print(f"⚠️ Ignoring non-integer {name}={raw!r}, using {default}")
        return default


# --- LOGGING ---
LOG_LEVEL = os.getenv("SEPALG_LOG_LEVEL", "WARNING").upper()

# --- FILE PATHS ---
FIXTURE_DIR = os.getenv("SEPALG_FIXTURE_DIR", "data/fixtures")

# --- SIZE CAPS ---
FIELD_CAP = _int_env("SEPALG_FIELD_CAP", 2 ** 20)          # largest p^n for FieldCtx
GROUP_CAP = _int_env("SEPALG_GROUP_CAP", 10 ** 5)          # BFS closure limit
POINT_CAP = _int_env("SEPALG_POINT_CAP", 10 ** 6)          # |V(F_{q^e})| for orbit runs
GRADED_PIECE_CAP = _int_env("SEPALG_GRADED_PIECE_CAP", 10 ** 5)   # dim k[V]_d for invariant bases
MODULE_DIM_CAP = _int_env("SEPALG_MODULE_DIM_CAP", 10 ** 4)       # coefficient modules for H^1
BAR_CAP = _int_env("SEPALG_BAR_CAP", 10 ** 5)              # (|G|-1)^n for the bar complex
REGULAR_REP_CAP = _int_env("SEPALG_REGULAR_REP_CAP", 24)
MAX_VARIABLES_DIM = _int_env("SEPALG_MAX_VARIABLES_DIM", 14)      # exhaustive dimension search
FALSIFIER_POINT_CAP = _int_env("SEPALG_FALSIFIER_POINT_CAP", 4096)  # point search before the geometric test
MAX_EXPONENT = 2 ** 31 - 1

# --- ALGORITHM DEFAULTS ---
DEGREE_CAP = _int_env("SEPALG_DEGREE_CAP", 40)
FROBENIUS_MMAX = _int_env("SEPALG_MMAX", 8)
INSEPARABLE_MMAX = _int_env("SEPALG_INSEPARABLE_MMAX", 6)
SEARCH_DEGREE = _int_env("SEPALG_SEARCH_DEGREE", 5)
TRUNCATION_ORDER = _int_env("SEPALG_TRUNCATION_ORDER", 30)

# --- NAMING ---
DEFAULT_GENERATOR = "w"
TAG_PREFIX = "T"          # reserved: tag variables T1..Tm of presented subalgebras
AUX_INTERSECT = "Tint"    # auxiliary variable for ideal intersection
AUX_RABINOWITSCH = "Trab" # auxiliary variable for radical membership
SECOND_COPY_SUFFIX = "_y" # second copy of the variables in the graph-ideal ring

# --- EXIT CODES ---
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3
