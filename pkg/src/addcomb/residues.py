"""Subsets of Z_n with bit-parallel kernels.

ResidueSet is the value type every other module consumes: immutable, backed
by a single int bitmask, with sumset / dilate / translate / negate kernels,
affine canonical forms for exhaustive search, and coset-structure reports for
composite moduli.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import bits, ntt
from .errors import (
    EmptySetError,
    HypothesisNotMetError,
    NonUnitDilationError,
    NotASubgroupError,
    PrimeRequiredError,
)
from .primes import divisors, is_prime

# Above this modulus the shift-OR kernel loses to NTT convolution.
CONVOLUTION_CUTOFF = 1 << 16


@dataclass(frozen=True, order=True)
class ResidueSet:
    """A subset of Z_n.  `mask` bit i is set iff i is a member."""

    modulus: int
    mask: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if self.mask < 0 or self.mask >> self.modulus:
            raise ValueError("mask has bits outside [0, modulus)")

    @classmethod
    def from_elements(cls, modulus: int, elements) -> "ResidueSet":
        m = 0
        for e in elements:
            e %= modulus
            m |= 1 << e
        return cls(modulus, m)

    @property
    def prime_modulus(self) -> bool:
        return is_prime(self.modulus)

    def elements(self) -> list[int]:
        return bits.elements_of(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> (x % self.modulus) & 1)

    def __iter__(self):
        return iter(self.elements())

    def literal(self) -> str:
        body = ",".join(str(e) for e in self.elements())
        return f"n={self.modulus}:{{{body}}}"

    def __repr__(self) -> str:
        return f"ResidueSet({self.literal()!r})"


@dataclass(frozen=True)
class CosetProfile:
    """How a set meets the cosets of the subgroup of a given order."""

    subgroup_order: int
    cosets_met: int
    ap_of_cosets_length: int
    heaviest_coset_fill: Fraction
    heaviest_coset_count: int = field(default=0)


def _sumset_mask_shift_or(mask: int, n: int) -> int:
    out = 0
    rest = mask
    while rest:
        low = rest & -rest
        out |= bits.rotate(mask, low.bit_length() - 1, n)
        rest ^= low
    return out


def _sumset_mask_convolution(mask: int, n: int) -> int:
    coeffs = [mask >> i & 1 for i in range(n)]
    conv = ntt.convolve(coeffs, coeffs)
    out = 0
    for i, c in enumerate(conv):
        if c:
            out |= 1 << (i % n)
    return out


def sumset_mask(mask: int, n: int, method: str = "auto") -> int:
    if method == "auto":
        method = "convolution" if n > CONVOLUTION_CUTOFF else "shift_or"
    if method == "shift_or":
        return _sumset_mask_shift_or(mask, n)
    if method == "convolution":
        return _sumset_mask_convolution(mask, n)
    raise ValueError(f"unknown sumset method {method!r}")


def sumset(a: ResidueSet, method: str = "auto") -> ResidueSet:
    """A + A = {x + y mod n : x, y in A}, x = y allowed."""
    if len(a) == 0:
        raise EmptySetError("sumset of the empty set")
    return ResidueSet(a.modulus, sumset_mask(a.mask, a.modulus, method))


def dilate(a: ResidueSet, d: int) -> ResidueSet:
    """d * A = {d x mod n}; requires gcd(d, n) = 1 so cardinality is kept."""
    n = a.modulus
    d %= n
    if gcd(d, n) != 1:
        raise NonUnitDilationError(f"gcd({d}, {n}) != 1")
    return ResidueSet(n, bits.dilate_mask(a.mask, d, n))


def translate(a: ResidueSet, u: int) -> ResidueSet:
    return ResidueSet(a.modulus, bits.rotate(a.mask, u, a.modulus))


def negate(a: ResidueSet) -> ResidueSet:
    n = a.modulus
    return ResidueSet(n, bits.mask_of((-e % n for e in a.elements()), n))


def affine_canonical_form(a: ResidueSet) -> ResidueSet:
    """Lexicographically least affine image d*A + u (sorted-tuple order).

    Prime modulus only: the affine maps then form a group of order p(p-1)
    acting sharply 2-transitively, and two sets share a canonical form iff
    they are affinely equivalent.  Brute force with an O(1) bitmask compare;
    intended for the enumeration range p <= 64.
    """
    p = a.modulus
    if not a.prime_modulus:
        raise PrimeRequiredError("canonical form requires prime modulus")
    if len(a) == 0:
        return a
    best = None
    for d in range(1, p):
        base = bits.dilate_mask(a.mask, d, p)
        for u in range(p):
            img = bits.rotate(base, u, p)
            if best is None or bits.lex_less(img, best):
                best = img
    return ResidueSet(p, best)


def is_affine_canonical(a: ResidueSet) -> bool:
    """True iff a equals its own canonical form (early-exit check)."""
    p = a.modulus
    if not a.prime_modulus:
        raise PrimeRequiredError("canonical form requires prime modulus")
    if len(a) == 0:
        return True
    for d in range(1, p):
        base = bits.dilate_mask(a.mask, d, p)
        for u in range(p):
            if bits.lex_less(bits.rotate(base, u, p), a.mask):
                return False
    return True


def coset_profile(a: ResidueSet, h_order: int) -> CosetProfile:
    """Profile of a w.r.t. the unique subgroup H of order h_order.

    H = (n/h) * Z_n, so cosets are residue classes mod m = n/h.  The
    AP-of-cosets length is the minimal arithmetic progression in the quotient
    Z_m covering every met coset.
    """
    n = a.modulus
    if h_order < 1 or h_order >= n or n % h_order != 0:
        raise NotASubgroupError(f"no proper subgroup of order {h_order} in Z_{n}")
    if len(a) == 0:
        raise EmptySetError("coset profile of the empty set")
    m = n // h_order
    counts: dict[int, int] = {}
    for x in a.elements():
        counts[x % m] = counts.get(x % m, 0) + 1
    met_mask = bits.mask_of(counts.keys(), m)
    from .covering import min_ap_length_mod  # late import; covering uses ResidueSet

    ell = min_ap_length_mod(met_mask, m)
    heaviest = max(counts.values())
    return CosetProfile(
        subgroup_order=h_order,
        cosets_met=len(counts),
        ap_of_cosets_length=ell,
        heaviest_coset_fill=Fraction(heaviest, h_order),
        heaviest_coset_count=heaviest,
    )


@dataclass(frozen=True)
class CosetCaseReport:
    """Per-subgroup outcome of the coset-progression check."""

    subgroup_order: int
    profile: CosetProfile
    case: int  # 1: single coset, 2: two or >= 4 cosets, 3: exactly three
    inequality_ok: bool
    fill_ok: bool | None  # None when vacuous (ell < 2)
    satisfied: bool


@dataclass(frozen=True)
class CosetProgressionReport:
    doubling_ok: bool
    density_note: str
    entries: tuple[CosetCaseReport, ...]
    satisfying_orders: tuple[int, ...]
    not_found: bool


# Density threshold of the covering theorem for composite moduli; never
# satisfiable at the moduli this library handles, reported as a flag only.
DENSITY_FACTOR = 10**9

# The 2/3-occupancy clause is read as "at least ceil(2|H|/3) elements".
def _fill_threshold(h: int) -> int:
    return -(-2 * h // 3)


def coset_progression_report(a: ResidueSet) -> CosetProgressionReport:
    """For sets with |2A| <= 2.04 |A|: which proper subgroups H structure A
    into a short progression of cosets, case by case.

    Case 1 (one coset met): requires |A| > |H| / 10^9.
    Case 2 (two or at least four cosets): (ell - 1) |H| <= |2A| - |A|.
    Case 3 (exactly three cosets): (min(ell, 4) - 1) |H| <= |2A| - |A|.
    Whenever ell >= 2 a coset must hold at least ceil(2|H|/3) elements of A.
    """
    if len(a) == 0:
        raise EmptySetError("coset progression report of the empty set")
    n = a.modulus
    k = len(a)
    two_a = sumset(a)
    if 100 * len(two_a) > 204 * k:
        raise HypothesisNotMetError(
            f"|2A| = {len(two_a)} exceeds 2.04|A| = {2.04 * k:.2f}"
        )
    slack = len(two_a) - k
    entries = []
    for h in divisors(n):
        if h >= n:
            continue
        prof = coset_profile(a, h)
        met, ell = prof.cosets_met, prof.ap_of_cosets_length
        if met == 1:
            case = 1
            ineq = DENSITY_FACTOR * k > h
        elif met == 3:
            case = 3
            ineq = (min(ell, 4) - 1) * h <= slack
        else:
            case = 2
            ineq = (ell - 1) * h <= slack
        fill = None
        if ell >= 2:
            fill = prof.heaviest_coset_count >= _fill_threshold(h)
        satisfied = ineq and (fill is not False)
        entries.append(
            CosetCaseReport(h, prof, case, ineq, fill, satisfied)
        )
    sat = tuple(e.subgroup_order for e in entries if e.satisfied)
    return CosetProgressionReport(
        doubling_ok=True,
        density_note=(
            f"density hypothesis |A| <= n/{DENSITY_FACTOR} not satisfiable at "
            f"this scale (n = {n}); a NotFound outcome is inconclusive"
        ),
        entries=tuple(entries),
        satisfying_orders=sat,
        not_found=not sat,
    )
