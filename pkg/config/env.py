import os

from dotenv import load_dotenv

_conf_path = "./config/.dev.env" if os.getenv("DEV_STATUS") else "./config/.env"

load_dotenv(_conf_path)


def _get_env(key: str, default: str = "") -> str:
    if (value := os.getenv(key)) is None:
        return default
    return value


PROJECT_NAME: str = _get_env("PROJECT_NAME", "nvgrid")
LOG_FILE: str = _get_env("LOG_FILE")
DEBUG_MODE: bool = _get_env("DEBUG_MODE").lower() in ("true", "1", "t")

PERMUTATION_CAP: int = int(_get_env("PERMUTATION_CAP", "7"))
REWRITE_MAX_INDEX: int = int(_get_env("REWRITE_MAX_INDEX", "6"))
Q_FAMILY: str = _get_env("Q_FAMILY", "none")
RULES_FILE: str = _get_env("RULES_FILE")
