"""
Laboratory configuration: budgets, seeds, workers and storage.
Every value can be overridden from the environment or a .env file.
"""
import os
from dotenv import load_dotenv

load_dotenv()

# Reproducibility
DEFAULT_SEED = 20100405

# Exact enumeration budgets
DEFAULT_BUDGET = 10**9  # instances x strings
DEFAULT_PAIR_BUDGET = 2**38  # instances x string pairs for max-collision scans

# Parallelism
DEFAULT_WORKERS = 1
MC_CHUNK_TRIALS = 1024  # Monte-Carlo trials per seeded substream

# Irreducible polynomial enumeration
IRREDUCIBLE_LIMIT = 20

# Transition tables above this many entries fall back to scalar folding
TABLE_ENTRY_LIMIT = 1 << 26

# Storage and logging
DB_PATH = os.getenv("HASHLAB_DB_PATH", "hashlab_results.db")
LOG_LEVEL = os.getenv("HASHLAB_LOG_LEVEL", "INFO")


def _int_env(name, default):
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    try:
        return int(value, 0)
    except ValueError:
        print(f"[WARNING] Ignoring non-integer {name}={value!r}")
        return default


def get_lab_config():
    """Get laboratory configuration (environment variables take precedence)."""
    return {
        "seed": _int_env("HASHLAB_SEED", DEFAULT_SEED),
        "budget": _int_env("HASHLAB_BUDGET", DEFAULT_BUDGET),
        "pair_budget": _int_env("HASHLAB_PAIR_BUDGET", DEFAULT_PAIR_BUDGET),
        "workers": max(1, _int_env("HASHLAB_WORKERS", DEFAULT_WORKERS)),
        "mc_chunk": max(1, _int_env("HASHLAB_MC_CHUNK", MC_CHUNK_TRIALS)),
        "irreducible_limit": _int_env("HASHLAB_IRREDUCIBLE_LIMIT", IRREDUCIBLE_LIMIT),
        "table_entry_limit": _int_env("HASHLAB_TABLE_ENTRY_LIMIT", TABLE_ENTRY_LIMIT),
        "db_path": os.getenv("HASHLAB_DB_PATH", DB_PATH),
        "log_level": os.getenv("HASHLAB_LOG_LEVEL", LOG_LEVEL),
    }
