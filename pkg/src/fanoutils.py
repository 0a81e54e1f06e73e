import os
import sys
from typing import Optional

THREADS_ENV: str = 'FANONESS_THREADS'


def get_root_dir() -> str:
    if getattr(sys, 'frozen', False):
        return os.path.dirname(sys.executable)
    elif __file__:
        return os.path.dirname(__file__)
    else:
        return './'


def to_decimal(value: float) -> str:
    """Shortest decimal string that parses back to the same float."""
    return repr(float(value))


def get_thread_count(requested: Optional[int] = None) -> int:
    if requested is not None and requested > 0:
        return requested

    from_env: Optional[str] = os.environ.get(THREADS_ENV)
    if from_env:
        try:
            count = int(from_env)
            if count > 0:
                return count
        except ValueError:
            pass
    return 1
