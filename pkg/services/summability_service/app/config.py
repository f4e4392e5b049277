import os

from dotenv import load_dotenv

load_dotenv()


def _get_int_env(name: str, default: int, minimum: int = 1) -> int:
    value = os.getenv(name)
    if not value:
        return default
    try:
        parsed = int(value)
    except ValueError as exc:
        raise RuntimeError(f"Environment variable {name} must be an integer") from exc
    if parsed < minimum:
        raise RuntimeError(f"Environment variable {name} must be >= {minimum}")
    return parsed


def _get_str_env(name: str, default: str) -> str:
    value = os.getenv(name)
    return value if value else default


# Длина префикса, который проверяется точно (по умолчанию 10^5)
PREFIX_N = _get_int_env("SUMMABILITY_PREFIX_N", 100_000, minimum=2)
# Верхняя граница геометрической сетки n = 1, 2, 4, ... для оценок плотности
N_MAX = _get_int_env("SUMMABILITY_N_MAX", 1 << 20)
# Бюджет проверок принадлежности при подсчёте окон
WINDOW_BUDGET = _get_int_env("SUMMABILITY_WINDOW_BUDGET", 10_000_000)
MAX_SET_DEPTH = _get_int_env("SUMMABILITY_MAX_SET_DEPTH", 32)
MAX_FINITE = _get_int_env("SUMMABILITY_MAX_FINITE", 100_000)
ORACLE_LIMIT = _get_int_env("SUMMABILITY_ORACLE_LIMIT", 10_000_000)
# Набор теорем гоняется на коротком префиксе, иначе 100 прогонов не уложить в минуты
SUITE_PREFIX_N = _get_int_env("SUMMABILITY_SUITE_PREFIX_N", 600, minimum=2)
JOBS = _get_int_env("SUMMABILITY_JOBS", 1)
LOG_LEVEL = _get_str_env("SUMMABILITY_LOG_LEVEL", "WARNING").upper()

REPORT_SCHEMA_VERSION = "1.0"
