"""Minimal arithmetic-progression covering in Z_p and the covering verdicts.

ell(A) is the least length of an AP containing A.  For prime p the sweep
dilates by each inverse step and reads the longest run of absent residues;
steps range over 1..(p-1)/2 only, since a step-d progression is a reversed
step-(p-d) progression.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import bits
from .errors import (
    ConsistencyError,
    EmptySetError,
    PreconditionFailedError,
    PrimeRequiredError,
)
from .intsets import ApDescriptor
from .primes import divisors
from .residues import ResidueSet, sumset


@dataclass(frozen=True)
class CoverResult:
    length: int
    witness: ApDescriptor
    bound: int  # |2A| - |A| + 1
    within_bound: bool

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "witness": {
                "start": self.witness.start,
                "step": self.witness.step,
                "length": self.witness.length,
                "modulus": self.witness.ambient,
            },
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def _unit_step_min_cover(mask: int, m: int) -> int:
    """Minimal covering length over unit steps in Z_m (nonempty mask)."""
    best = m
    for d in range(1, m // 2 + 1):
        if gcd(d, m) != 1:
            continue
        inv = pow(d, -1, m)
        dil = bits.dilate_mask(mask, inv, m)
        best = min(best, m - bits.longest_zero_run(dil, m))
    return best


def min_ap_length_mod(mask: int, m: int) -> int:
    """Minimal AP covering length in Z_m, any modulus, any step.

    A step with gcd(step, m) = g > 1 stays inside one residue class mod g, so
    it can only cover sets contained in such a class; those reduce to a
    unit-step problem in Z_{m/g}.  Always finite: step 1 covers with length m.
    """
    if mask == 0:
        raise EmptySetError("cannot cover the empty set")
    if m == 1:
        return 1
    count = mask.bit_count()
    if count == 1:
        return 1
    if count == m:
        return m
    best = m
    els = bits.elements_of(mask)
    for g in divisors(m):
        if g == m:
            continue
        if g == 1:
            best = min(best, _unit_step_min_cover(mask, m))
            continue
        r = els[0] % g
        if any(e % g != r for e in els):
            continue
        m2 = m // g
        reduced = bits.mask_of(((e - r) // g for e in els), m2)
        if m2 == 1:
            best = min(best, 1)
        else:
            best = min(best, _unit_step_min_cover(reduced, m2))
    return best


def min_ap_cover(a: ResidueSet) -> CoverResult:
    """Exact ell(A) with a witness AP, prime modulus.

    Witness tie-break: smallest step, then smallest start.  ell(Z_p) = p with
    the degenerate witness of step 1 starting at 0.
    """
    p = a.modulus
    if not a.prime_modulus:
        raise PrimeRequiredError("min_ap_cover requires prime modulus")
    k = len(a)
    if k == 0:
        raise EmptySetError("cannot cover the empty set")
    two_a = sumset(a)
    bound = len(two_a) - k + 1
    if k == p:
        witness = ApDescriptor(0, 1, p, ambient=p)
        return CoverResult(p, witness, bound, p <= bound)
    best_len = p + 1
    best_d = None
    best_start = None
    for d in range(1, max((p - 1) // 2, 1) + 1):
        inv = pow(d, -1, p)
        dil = bits.dilate_mask(a.mask, inv, p)
        run = bits.longest_zero_run(dil, p)
        length = p - run
        if length < best_len:  # strict: ties keep the smallest step
            starts = bits.zero_run_ends(dil, p, run)
            best_len = length
            best_d = d
            best_start = min(s * d % p for s in starts)
    witness = ApDescriptor(best_start, best_d, best_len, ambient=p)
    assert witness.covers(a.elements()), "cover witness failed verification"
    return CoverResult(best_len, witness, bound, best_len <= bound)


def is_arithmetic_progression(a: ResidueSet) -> bool:
    """ell(A) = |A| test, by the same sweep with early exit."""
    p = a.modulus
    if not a.prime_modulus:
        raise PrimeRequiredError("AP test requires prime modulus")
    k = len(a)
    if k == 0:
        raise EmptySetError("empty set")
    if k in (1, p):
        return True
    target = p - k
    for d in range(1, max((p - 1) // 2, 1) + 1):
        inv = pow(d, -1, p)
        dil = bits.dilate_mask(a.mask, inv, p)
        if bits.longest_zero_run(dil, p) == target:
            return True
    return False


@dataclass(frozen=True)
class MainVerdict:
    """Hypothesis flags and covering outcome for the headline criterion
    |2A| <= 2.48|A| - 7 (the density side is never satisfiable here and is
    reported as a flag only)."""

    size: int
    sumset_size: int
    doubling_ok: bool
    density_ok: bool
    density_note: str
    cover: CoverResult
    conclusion_holds: bool

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "sumset_size": self.sumset_size,
            "doubling_ok": self.doubling_ok,
            "density_ok": self.density_ok,
            "density_note": self.density_note,
            "cover": self.cover.to_json(),
            "conclusion_holds": self.conclusion_holds,
        }


DENSITY_DENOMINATOR = 10**10


def covering_bound_verdict(a: ResidueSet) -> MainVerdict:
    if not a.prime_modulus:
        raise PrimeRequiredError("verdict requires prime modulus")
    if len(a) == 0:
        raise EmptySetError("verdict of the empty set")
    p = a.modulus
    k = len(a)
    two_a = sumset(a)
    doubling_ok = 100 * len(two_a) <= 248 * k - 700
    density_ok = DENSITY_DENOMINATOR * k < p
    cover = min_ap_cover(a)
    return MainVerdict(
        size=k,
        sumset_size=len(two_a),
        doubling_ok=doubling_ok,
        density_ok=density_ok,
        density_note="unmet-at-scale" if not density_ok else "met",
        cover=cover,
        conclusion_holds=cover.within_bound,
    )


@dataclass(frozen=True)
class VosperVerdict:
    size: int
    sumset_size: int
    equality_holds: bool  # |2A| = 2|A| - 1
    is_ap: bool
    agree: bool

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "sumset_size": self.sumset_size,
            "equality_holds": self.equality_holds,
            "is_ap": self.is_ap,
            "agree": self.agree,
        }


def vosper_verdict(a: ResidueSet) -> VosperVerdict:
    """Both sides of Vosper's equivalence: |2A| = 2|A| - 1 iff A is an AP,
    for 2 <= |A| and |2A| <= p - 2.  Disagreement would falsify the theorem
    and raises AssertionError."""
    if not a.prime_modulus:
        raise PrimeRequiredError("verdict requires prime modulus")
    k = len(a)
    if k < 2:
        raise PreconditionFailedError("Vosper verdict needs |A| >= 2")
    two_a = sumset(a)
    if len(two_a) > a.modulus - 2:
        raise PreconditionFailedError(
            f"Vosper verdict needs |2A| <= p - 2, got {len(two_a)}"
        )
    eq = len(two_a) == 2 * k - 1
    ap = is_arithmetic_progression(a)
    if eq != ap:
        raise ConsistencyError(f"Vosper equivalence failed on {a.literal()}")
    return VosperVerdict(k, len(two_a), eq, ap, eq == ap)


CONSISTENT = "CONSISTENT"
COUNTEREXAMPLE = "COUNTEREXAMPLE"
SILENT = "SILENT"


@dataclass(frozen=True)
class ConjectureVerdict:
    """Outcome of the combined covering conjecture on one set.

    x = |2A| - (2|A| - 1).  Condition (i): 0 <= x <= min(|A| - 4,
    p - |2A| - 2).  Condition (ii): 0 <= x = |A| - 3 <= p - |2A| - 3.  When
    either holds the conjecture demands ell(A) <= |2A| - |A| + 1; a violation
    is reported as data (COUNTEREXAMPLE), never raised.
    """

    size: int
    sumset_size: int
    x: int
    condition_i: bool
    condition_ii: bool
    status: str
    cover: CoverResult | None

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "sumset_size": self.sumset_size,
            "x": self.x,
            "condition_i": self.condition_i,
            "condition_ii": self.condition_ii,
            "status": self.status,
            "cover": self.cover.to_json() if self.cover else None,
        }


def conjecture_verdict(a: ResidueSet) -> ConjectureVerdict:
    if not a.prime_modulus:
        raise PrimeRequiredError("verdict requires prime modulus")
    if len(a) == 0:
        raise EmptySetError("verdict of the empty set")
    p = a.modulus
    k = len(a)
    two_a = sumset(a)
    s = len(two_a)
    x = s - (2 * k - 1)
    cond_i = 0 <= x <= min(k - 4, p - s - 2)
    cond_ii = 0 <= x and x == k - 3 and x <= p - s - 3
    if not (cond_i or cond_ii):
        return ConjectureVerdict(k, s, x, cond_i, cond_ii, SILENT, None)
    cover = min_ap_cover(a)
    status = CONSISTENT if cover.within_bound else COUNTEREXAMPLE
    return ConjectureVerdict(k, s, x, cond_i, cond_ii, status, cover)
