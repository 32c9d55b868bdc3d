# FILE: pfgr/config.py
# ==============================================================================
# Runtime settings for the reduction toolkit. Every value can be overridden
# from the environment or a local `.env` file.
# ==============================================================================
import os
from dotenv import load_dotenv

load_dotenv()

# --- Solver Limits ---
MAX_D = int(os.getenv("PFGR_MAX_D", "8"))
SAT_VAR_CAP = int(os.getenv("PFGR_SAT_VAR_CAP", "30"))

# --- Treewidth Diameter Engine ---
DOMINANCE_DIM_CAP = int(os.getenv("PFGR_DOMINANCE_DIM_CAP", "7"))
CROSSOVER_PAIRS = int(os.getenv("PFGR_CROSSOVER_PAIRS", "4096"))
BASE_CASE_MIN = int(os.getenv("PFGR_BASE_CASE_MIN", "16"))
WORKERS = int(os.getenv("PFGR_WORKERS", "1"))

# --- Result Records ---
RESULTS_DATABASE_URL = os.getenv("PFGR_RESULTS_DATABASE_URL")

# --- Application Settings ---
LOG_LEVEL = os.getenv("PFGR_LOG_LEVEL", "INFO").upper()
TIMEZONE = os.getenv("TIMEZONE", "UTC")

# --- Validation ---
if not all(
    [
        MAX_D >= 1,
        SAT_VAR_CAP >= 1,
        DOMINANCE_DIM_CAP >= 0,
        CROSSOVER_PAIRS >= 0,
        BASE_CASE_MIN >= 1,
        WORKERS >= 1,
    ]
):
    raise ValueError(
        "A solver setting is out of range. Check the PFGR_* environment variables."
    )
