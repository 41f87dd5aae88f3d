"""Exhaustive and randomized verification campaigns.

Enumeration works over affine-canonical representatives: every class with at
least two elements has a representative containing {0, 1} (map any two
elements there), so the search walks sorted tuples (0, 1, e3 < e4 < ...) and
keeps the sets that equal their own canonical form.  Sumset-size caps prune
prefixes soundly because a prefix sumset only grows.

Reports are deterministic: two runs differ only in wall_time, and results
are independent of the worker count.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from . import SCHEMA_VERSION, __version__, bits
from .covering import (
    COUNTEREXAMPLE,
    conjecture_verdict,
    min_ap_cover,
    vosper_verdict,
)
from .errors import (
    ConsistencyError,
    InvalidParamsError,
    SearchRangeError,
    UnknownSuiteError,
)
from .freiman import additive_dimension_value, dimension_lower_bound_check
from .intsets import IntSet, cover_3k4, sumset as int_sumset
from .primes import is_prime, primes_upto
from .residues import ResidueSet, is_affine_canonical, sumset, sumset_mask

ENUMERATION_MAX_P = 64
HUNT_DEFAULT_MAX_P = 31


@dataclass
class SearchReport:
    campaign: str
    parameters: dict
    classes_examined: int
    counterexamples: list[dict]
    notes: list[str] = field(default_factory=list)
    wall_time: float = 0.0
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @property
    def clean(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "campaign": self.campaign,
            "parameters": self.parameters,
            "classes_examined": self.classes_examined,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
            "wall_time": self.wall_time,
        }

    def write(self, directory: str) -> str:
        import os

        os.makedirs(directory, exist_ok=True)

        def flat(v):
            if isinstance(v, (list, tuple)):
                return "_".join(str(x) for x in v)
            return str(v)

        params = "-".join(
            f"{k}={flat(v)}" for k, v in sorted(self.parameters.items())
        )
        path = os.path.join(directory, f"{self.campaign}-{params}.json")
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")
        return path


def enumerate_canonical(
    p: int, k: int, doubling_cap: int | None = None
) -> Iterator[ResidueSet]:
    """One affine-canonical representative per class of k-subsets of Z_p with
    |2A| <= doubling_cap (None = no cap), in deterministic order."""
    if not is_prime(p):
        raise SearchRangeError(f"{p} is not prime")
    if p > ENUMERATION_MAX_P:
        raise SearchRangeError(f"enumeration capped at p <= {ENUMERATION_MAX_P}")
    if not 1 <= k <= p:
        raise SearchRangeError(f"k = {k} out of range for Z_{p}")
    cap = doubling_cap if doubling_cap is not None else p
    if cap <= 0:
        return
    if k == 1:
        a = ResidueSet.from_elements(p, [0])
        if 1 <= cap:
            yield a
        return
    yield from _canonical_dfs(p, k, cap, prefix_elements=(0, 1))


def _canonical_dfs(
    p: int, k: int, cap: int, prefix_elements: tuple[int, ...]
) -> Iterator[ResidueSet]:
    mask = bits.mask_of(prefix_elements, p)
    summask = 0
    for e in prefix_elements:
        summask |= bits.rotate(mask, e, p)
    if summask.bit_count() > cap:
        return
    yield from _extend(p, k, cap, mask, summask, prefix_elements[-1])


def _extend(
    p: int, k: int, cap: int, mask: int, summask: int, last: int
) -> Iterator[ResidueSet]:
    size = mask.bit_count()
    if size == k:
        a = ResidueSet(p, mask)
        if is_affine_canonical(a):
            yield a
        return
    # need k - size more elements strictly above `last`
    for e in range(last + 1, p - (k - size) + 1):
        new_mask = mask | (1 << e)
        new_sum = summask | bits.rotate(new_mask, e, p)
        if new_sum.bit_count() > cap:
            continue
        yield from _extend(p, k, cap, new_mask, new_sum, e)


def count_canonical_classes(p: int, k: int) -> int:
    return sum(1 for _ in enumerate_canonical(p, k))


def affine_orbit_count(p: int, k: int) -> int:
    """Burnside count of affine classes of k-subsets of Z_p: average over the
    group of the number of invariant k-subsets, via cycle structure."""
    total = 0
    for d in range(1, p):
        for u in range(p):
            cycles = _cycle_lengths(p, d, u)
            total += _invariant_subset_count(cycles, k)
    return total // (p * (p - 1))


def _cycle_lengths(p: int, d: int, u: int) -> list[int]:
    seen = [False] * p
    out = []
    for x0 in range(p):
        if seen[x0]:
            continue
        length = 0
        x = x0
        while not seen[x]:
            seen[x] = True
            x = (d * x + u) % p
            length += 1
        out.append(length)
    return out


def _invariant_subset_count(cycles: list[int], k: int) -> int:
    # knapsack over whole cycles
    dp = [0] * (k + 1)
    dp[0] = 1
    for c in cycles:
        if c > k:
            continue
        for s in range(k, c - 1, -1):
            dp[s] += dp[s - c]
    return dp[k]


def _hunt_one_prime(args: tuple[int, int | None]) -> tuple[int, int, list[dict]]:
    """(p, k_limit) -> (p, classes_examined, counterexamples)."""
    p, _ = args
    examined = 0
    bad: list[dict] = []
    # For 2k - 1 >= p Cauchy-Davenport forces |2A| = p, which silences both
    # conjecture conditions; only k <= (p+1)/2 can produce a verdict.  A
    # verdict also needs |2A| <= 3k - 4 (condition i) or = 3k - 4 (ii) and
    # |2A| <= p - 2, so the enumeration cap below loses no checkable class.
    for k in range(1, p + 1):
        if 2 * k - 1 > p:
            break
        cap = None if k <= 2 else min(3 * k - 4, p - 2)
        for a in enumerate_canonical(p, k, cap):
            examined += 1
            verdict = conjecture_verdict(a)
            if verdict.status == COUNTEREXAMPLE:
                bad.append(
                    {"set": a.literal(), "verdict": verdict.to_json()}
                )
    return p, examined, bad


def hunt_conjecture(
    p_list: list[int],
    threads: int = 1,
    max_p: int = HUNT_DEFAULT_MAX_P,
) -> SearchReport:
    """Exhaustive conjecture check over every canonical class of every
    cardinality for each prime in p_list.  Expected outcome: no
    counterexamples."""
    started = time.monotonic()
    for p in p_list:
        if not is_prime(p):
            raise SearchRangeError(f"{p} is not prime")
        if p > max_p:
            raise SearchRangeError(
                f"p = {p} above the campaign cap {max_p}; raise max_p to override"
            )
    notes = [
        "classes with 2k - 1 > p or |2A| above min(3k-4, p-2) are provably "
        "SILENT and are skipped by the enumeration cap",
    ]
    if any(p > HUNT_DEFAULT_MAX_P for p in p_list):
        notes.append(
            f"runtime warning: primes above {HUNT_DEFAULT_MAX_P} can take long"
        )
    work = [(p, None) for p in sorted(p_list)]
    results = _run_tasks(_hunt_one_prime, work, threads)
    examined = sum(r[1] for r in results)
    bad = [item for r in results for item in r[2]]
    report = SearchReport(
        campaign="hunt-conjecture",
        parameters={"primes": sorted(p_list), "threads": threads},
        classes_examined=examined,
        counterexamples=bad,
        notes=notes,
    )
    report.wall_time = time.monotonic() - started
    return report


def _run_tasks(fn, work, threads):
    if threads <= 1 or len(work) <= 1:
        return [fn(w) for w in work]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, work))


@dataclass(frozen=True)
class FamilyParams:
    """Extremal family parameters.

    example1: set {0} u {x+2, ..., (p+1)/2} in Z_p, p = 2k + 2x - 1 prime,
    k >= 2 and 0 <= x <= k - 3.  example2: set {0..t} minus {t-1} plus {2t}
    in Z_p, p = 4t - 1 prime, t >= 2.
    """

    family: str
    k: int | None = None
    x: int | None = None
    t: int | None = None

    @property
    def p(self) -> int:
        if self.family == "example1":
            return 2 * self.k + 2 * self.x - 1
        return 4 * self.t - 1

    def validate(self) -> None:
        if self.family == "example1":
            if self.k is None or self.x is None:
                raise InvalidParamsError("example1 needs k and x")
            if self.k < 2 or not 0 <= self.x <= self.k - 3:
                raise InvalidParamsError(
                    f"need k >= 2 and 0 <= x <= k - 3, got k={self.k} x={self.x}"
                )
        elif self.family == "example2":
            if self.t is None:
                raise InvalidParamsError("example2 needs t")
            if self.t < 2:
                raise InvalidParamsError("example2 needs t >= 2")
        else:
            raise InvalidParamsError(f"unknown family {self.family!r}")
        if not is_prime(self.p):
            raise InvalidParamsError(f"p = {self.p} is not prime")


def build_family(params: FamilyParams) -> tuple[ResidueSet, dict]:
    """Construct the family instance and its predicted statistics, verifying
    the predictions against direct computation (a mismatch would falsify the
    family's arithmetic and raises ConsistencyError)."""
    params.validate()
    p = params.p
    if params.family == "example1":
        k, x = params.k, params.x
        a = ResidueSet.from_elements(
            p, [0] + list(range(x + 2, (p + 1) // 2 + 1))
        )
        expected = {
            "p": p,
            "size": k,
            "sumset_size": p - x,  # = 2k - 1 + x
            "bound": k + x,
        }
    else:
        t = params.t
        a = ResidueSet.from_elements(
            p, [i for i in range(t + 1) if i != t - 1] + [2 * t]
        )
        expected = {
            "p": p,
            "size": t + 1,
            "sumset_size": 3 * t - 1,
            "bound": 2 * t - 1,
        }
    if len(a) != expected["size"]:
        raise ConsistencyError(f"family size {len(a)} != predicted {expected['size']}")
    s = len(sumset(a))
    if s != expected["sumset_size"]:
        raise ConsistencyError(
            f"family |2A| = {s} != predicted {expected['sumset_size']}"
        )
    return a, expected


def family_instances(family: str, max_p: int) -> list[FamilyParams]:
    out = []
    if family == "example1":
        for p in primes_upto(max_p):
            if p < 5:
                continue
            half = (p + 1) // 2  # = k + x
            for k in range(2, half + 1):
                x = half - k
                if 0 <= x <= k - 3:
                    out.append(FamilyParams("example1", k=k, x=x))
    elif family == "example2":
        for t in range(2, max_p // 4 + 2):
            if is_prime(4 * t - 1) and 4 * t - 1 <= max_p:
                out.append(FamilyParams("example2", t=t))
    else:
        raise InvalidParamsError(f"unknown family {family!r}")
    return out


def verify_family(family: str, max_p: int, threads: int = 1) -> SearchReport:
    """Check predicted sumset sizes and the non-coverability claim
    ell(A) > |2A| - |A| + 1 for every instance with p <= max_p.

    Known deviations, reported as violations with full data: example2 at
    t = 2 (the set is a progression) and t = 3 (ell equals the bound).  The
    smallest t for which the claim holds is 5; t = 4 gives composite p.
    """
    if max_p > 1000:
        raise SearchRangeError("verify_family capped at max_p <= 1000")
    started = time.monotonic()
    instances = family_instances(family, max_p)
    results = _run_tasks(_verify_one_instance, instances, threads)
    violations = [r for r in results if r is not None]
    report = SearchReport(
        campaign=f"family-{family}",
        parameters={"family": family, "max_p": max_p, "threads": threads},
        classes_examined=len(instances),
        counterexamples=violations,
    )
    report.wall_time = time.monotonic() - started
    return report


def _verify_one_instance(params: FamilyParams) -> dict | None:
    a, expected = build_family(params)
    cover = min_ap_cover(a)
    if cover.length > expected["bound"]:
        return None
    return {
        "set": a.literal(),
        "params": {
            "family": params.family,
            "k": params.k,
            "x": params.x,
            "t": params.t,
            "p": params.p,
        },
        "cover_length": cover.length,
        "bound": expected["bound"],
        "claim": "ell(A) > |2A| - |A| + 1 fails",
    }


# --- verification suites ----------------------------------------------------


def _normal_form_subsets(limit: int, min_size: int, max_size: int):
    """All A containing 0 with gcd 1 inside [0, limit], by DFS; sizes in
    [min_size, max_size]."""
    from math import gcd

    def rec(elements: list[int], g: int, nxt: int):
        size = len(elements)
        if size >= min_size and g == 1:
            yield tuple(elements)
        if size == max_size:
            return
        for e in range(nxt, limit + 1):
            elements.append(e)
            yield from rec(elements, gcd(g, e), e + 1)
            elements.pop()

    yield from rec([0], 0, 1)


def _suite_vosper(max_p: int = 17) -> tuple[int, list[dict], list[str]]:
    # Both sides of the equivalence are affine-invariant and every class of
    # size >= 2 has a representative containing {0, 1}, so sweeping those
    # representatives checks every class (some more than once).
    examined = 0
    violations: list[dict] = []
    for p in primes_upto(max_p):
        for rest in range(1 << max(p - 2, 0)):
            mask = 3 | (rest << 2)
            if sumset_mask(mask, p).bit_count() > p - 2:
                continue
            examined += 1
            vosper_verdict(ResidueSet(p, mask))  # ConsistencyError on failure
    return examined, violations, [
        f"exhaustive over representatives containing {{0,1}}, p <= {max_p}"
    ]


def _suite_dim_bound(
    limit: int = 12, min_size: int = 2, max_size: int = 6
) -> tuple[int, list[dict], list[str]]:
    examined = 0
    violations: list[dict] = []
    for elems in _normal_form_subsets(limit, min_size, max_size):
        examined += 1
        a = IntSet(elems)
        if not dimension_lower_bound_check(a):
            raise ConsistencyError(f"dimension lower bound failed on {elems}")
    return examined, violations, [
        f"normal-form sets in [0, {limit}], sizes {min_size}..{max_size}"
    ]


def _suite_3k4(limit: int = 15) -> tuple[int, list[dict], list[str]]:
    examined = 0
    checked = 0
    for elems in _normal_form_subsets(limit, 1, limit + 1):
        examined += 1
        a = IntSet(elems)
        two_a = int_sumset(a)
        if len(two_a) > 3 * len(a) - 4:
            continue
        checked += 1
        nf_max = a.max()  # already normal form
        if nf_max > len(two_a) - len(a):
            raise ConsistencyError(f"3k-4 bound failed on {elems}")
        cover_3k4(a)  # also exercises the covering constructor
    return examined, [], [
        f"normal-form sets in [0, {limit}]; {checked} met the 3k-4 hypothesis"
    ]


def _capped_normal_form_dfs(limit: int, size: int, cap: int):
    """Normal-form sets (0 in A, gcd 1) in [0, limit] with exactly `size`
    elements and |2A| <= cap; prefix sumsets only grow, so the cap prunes."""
    from math import gcd

    def rec(elems: list[int], mask: int, summask: int, g: int, nxt: int):
        t = len(elems)
        if t == size:
            if g == 1:
                yield tuple(elems)
            return
        for e in range(nxt, limit - (size - t) + 2):
            new_mask = mask | (1 << e)
            new_sum = summask | (new_mask << e)
            if new_sum.bit_count() > cap:
                continue
            elems.append(e)
            yield from rec(elems, new_mask, new_sum, gcd(g, e), e + 1)
            elems.pop()

    if cap >= 1:
        yield from rec([0], 1, 1, 0, 1)


def _suite_prop23_variant(limit: int = 24) -> tuple[int, list[dict], list[str]]:
    """Desk-scale analogue of the conjectured covering constant: over
    1-dimensional normal-form sets with |2A| <= 3.04|A| - 3, record whether
    max(A) <= 4|A| and the empirical maximum of max(A)/|A|.

    Findings, not assertions: the true constant is an open question.  Sizes
    with 4|A| > limit cannot violate and only matter for the ratio, so the
    scan stops once larger sizes cannot beat the running maximum.
    """
    examined = 0
    violations: list[dict] = []
    best_ratio = Fraction(0)
    best_set: tuple[int, ...] | None = None
    for size in range(3, limit + 2):
        if best_ratio >= Fraction(limit, size) and 4 * size > limit:
            break  # no violation possible and the ratio cannot improve
        cap = (304 * size - 300) // 100  # |2A| <= 3.04|A| - 3, exactly
        for elems in _capped_normal_form_dfs(limit, size, cap):
            a = IntSet(elems)
            if additive_dimension_value(a) != 1:
                continue
            examined += 1
            ratio = Fraction(a.max(), size)
            if ratio > best_ratio:
                best_ratio = ratio
                best_set = elems
            if a.max() > 4 * size:
                violations.append(
                    {"set": list(elems), "max": a.max(), "size": size}
                )
    notes = [
        f"1-dimensional normal-form sets in [0, {limit}] with |2A| <= 3.04|A| - 3",
        f"empirical max of max(A)/|A|: {best_ratio} at {list(best_set or ())}",
        "violations of max(A) <= 4|A| are findings about an open question, "
        "not errors",
    ]
    return examined, violations, notes


_SUITES = {
    "vosper": _suite_vosper,
    "dim_bound": _suite_dim_bound,
    "3k4": _suite_3k4,
    "prop23_variant": _suite_prop23_variant,
}


def run_suite(name: str, **params) -> SearchReport:
    if name not in _SUITES:
        raise UnknownSuiteError(
            f"unknown suite {name!r}; available: {sorted(_SUITES)}"
        )
    started = time.monotonic()
    examined, violations, notes = _SUITES[name](**params)
    report = SearchReport(
        campaign=f"suite-{name}",
        parameters={"suite": name, **{k: v for k, v in params.items()}},
        classes_examined=examined,
        counterexamples=violations,
        notes=notes,
    )
    report.wall_time = time.monotonic() - started
    return report
