from typing import List, Sequence

import numpy as np


def derive_seed(*keys: int) -> int:
    """Counter-based seed: the same keys always give the same 63-bit seed."""
    state = np.random.SeedSequence([int(k) for k in keys]).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])


def parse_int_list(text: str) -> List[int]:
    """Parse ``"1,3,5"`` (spaces allowed) into integers."""
    items = [s.strip() for s in text.split(",")]
    if not items or any(not s for s in items):
        raise ValueError(f"Invalid integer list: {text!r}")
    try:
        return [int(s) for s in items]
    except ValueError as e:
        raise ValueError(f"Invalid integer list: {text!r}") from e


def parse_range(text: str) -> List[int]:
    """Parse an inclusive ``start:stop:step`` range, e.g. ``2:20:2``."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"Invalid range: {text!r}")
    try:
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
    except ValueError as e:
        raise ValueError(f"Invalid range: {text!r}") from e
    if step <= 0 or stop < start:
        raise ValueError(f"Invalid range: {text!r}")
    return list(range(start, stop + 1, step))


def fmt_vector(values: Sequence[int]) -> str:
    """Compact tuple formatting used in tables and log lines, e.g. ``(1,3,1)``."""
    return "(" + ",".join(str(v) for v in values) + ")"
