import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def simple_sieve(limit: int) -> list[bool]:
    """Independent reference sieve; deliberately shares no code with the package."""
    flags = [True] * (limit + 1)
    flags[0] = flags[1] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            step = len(range(i * i, limit + 1, i))
            flags[i * i :: i] = [False] * step
    return flags
