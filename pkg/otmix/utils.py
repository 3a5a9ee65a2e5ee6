import numpy as np

from .constants import BENCH_METHODS, SQUARE_SAFE_MAX, WINDOW_SIZE


def derive_rng(seed: int, index: int = None) -> np.random.Generator:
    """
    Random generator for instance ``index`` of a seeded run.

    The splitting rule is ``numpy.random.default_rng([seed, index])`` (PCG64
    seeded through SeedSequence), so instances are independent of each other
    and of the order in which they are evaluated. Without an index the
    generator is ``default_rng(seed)``.
    """
    if index is None:
        return np.random.default_rng(seed)
    return np.random.default_rng([seed, index])


def parse_methods(text: str, window: int = None) -> list:
    """
    Split a comma separated method list such as "relaxed,relaxed_window(3),ipot".

    Return (name, window) pairs, where window is only set for relaxed_window.
    """
    window = WINDOW_SIZE if window is None else window
    out = []
    for item in filter(None, (x.strip() for x in text.split(","))):
        name, _, arg = item.partition("(")
        if name not in BENCH_METHODS:
            raise ValueError(f"unknown method {name!r}, expected one of {BENCH_METHODS}")
        if arg:
            if name != "relaxed_window" or not arg.endswith(")"):
                raise ValueError(f"invalid method: {item!r}")
            try:
                size = int(arg[:-1])
            except ValueError:
                raise ValueError(f"invalid window size in {item!r}")
            out.append((name, size))
        else:
            out.append((name, window if name == "relaxed_window" else None))
    if not out:
        raise ValueError("empty method list")
    return out


def method_label(name: str, window: int = None) -> str:
    return f"{name}({window})" if name == "relaxed_window" else name


def overflow_scale(*arrays: np.ndarray) -> float:
    """
    Power of two to divide the arrays by before squaring their entries.

    Returns 1.0 unless the largest magnitude is big enough for squares to
    overflow; otherwise rescaled entries lie below 2 in magnitude. Dividing by a
    power of two is exact.
    """
    peak = max((float(np.abs(x).max()) for x in arrays if x.size), default=0.0)
    if peak < SQUARE_SAFE_MAX:
        return 1.0
    return float(np.ldexp(1.0, np.frexp(peak)[1] - 1))
