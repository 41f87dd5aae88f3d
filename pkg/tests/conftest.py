"""Shared brute-force oracles, deliberately independent of the library's
bitmask kernels: plain sets and loops only."""

import pytest
from hypothesis import settings

settings.register_profile("ci", derandomize=True)
settings.load_profile("ci")


def naive_sumset(elements, n=None):
    out = set()
    for x in elements:
        for y in elements:
            s = x + y
            out.add(s % n if n is not None else s)
    return out


def brute_min_cover(elements, p):
    """Minimal covering AP length by walking every (start, step)."""
    target = set(elements)
    best = p
    for start in range(p):
        for step in range(1, p):
            seen = set()
            covered = set()
            length = 0
            v = start
            while v not in seen:
                seen.add(v)
                covered.add(v)
                length += 1
                if target <= covered:
                    best = min(best, length)
                    break
                v = (v + step) % p
    return best


def brute_canonical(elements, p):
    """Lexicographically least sorted tuple over all affine images."""
    best = None
    for d in range(1, p):
        for u in range(p):
            img = tuple(sorted((d * x + u) % p for x in elements))
            if best is None or img < best:
                best = img
    return best


def brute_window_max(elements, p):
    """Exhaustive best (count, d, u) for half-window capture."""
    w = (p + 1) // 2
    best = (-1, None, None)
    for d in range(1, p):
        dil = {x * d % p for x in elements}
        for u in range(p):
            window = {(u + i) % p for i in range(w)}
            c = len(dil & window)
            if c > best[0]:
                best = (c, d, u)
    return best


@pytest.fixture
def rng():
    import random

    return random.Random(0x5EED)
