import os

# Hard cap on queried tower levels; override with PROACT_LEVEL_CAP.
DEFAULT_LEVEL_CAP = int(os.environ.get("PROACT_LEVEL_CAP", "32"))

# Bound on |A| for hom enumeration and pro-hom computations.
DEFAULT_SIZE_BOUND = int(os.environ.get("PROACT_SIZE_BOUND", "64"))

# Largest table-backed structure we are willing to build at all.
MAX_ORDER = int(os.environ.get("PROACT_MAX_ORDER", "1024"))

# Levels 0..DEFAULT_DEPTH are checked unless a caller says otherwise.
DEFAULT_DEPTH = 8


def level_cap():
    return int(os.environ.get("PROACT_LEVEL_CAP", str(DEFAULT_LEVEL_CAP)))
