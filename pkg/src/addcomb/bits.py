"""Bitmask kernels for subsets of Z_n.

A subset of Z_n is an int whose bit i is set iff i is a member.  Python's
arbitrary-precision ints make these the fastest exact representation at the
moduli this library targets.
"""


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_of(elements, n: int) -> int:
    m = 0
    for e in elements:
        m |= 1 << (e % n)
    return m


def elements_of(mask: int) -> list[int]:
    """Set bits in ascending order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def rotate(mask: int, r: int, n: int) -> int:
    """Cyclic left rotation: element x becomes x + r (mod n)."""
    r %= n
    if r == 0:
        return mask
    return ((mask << r) | (mask >> (n - r))) & full_mask(n)


def dilate_mask(mask: int, d: int, n: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << ((low.bit_length() - 1) * d % n)
        mask ^= low
    return out


def lex_less(a: int, b: int) -> bool:
    """Sorted-element-tuple order: a < b iff the smallest element of the
    symmetric difference belongs to a."""
    diff = a ^ b
    if diff == 0:
        return False
    return bool(a & (diff & -diff))


def longest_zero_run(mask: int, n: int) -> int:
    """Length of the longest circular run of absent residues.  mask must be
    nonzero (full absence has no well-defined run start)."""
    absent = full_mask(n) & ~mask
    if absent == 0:
        return 0
    s = format(absent, f"0{n}b")
    # doubling the string makes wrap-around runs contiguous
    return max(len(run) for run in (s + s).split("0"))


def zero_run_ends(mask: int, n: int, run: int) -> list[int]:
    """Positions immediately after each maximal absent-run of length `run`
    (i.e. candidate interval starts), ascending."""
    els = elements_of(mask)
    out = []
    for i, e in enumerate(els):
        prev = els[i - 1]
        gap = (e - prev - 1) % n  # for a singleton this is n - 1, as wanted
        if gap == run:
            out.append(e)
    return sorted(out)
