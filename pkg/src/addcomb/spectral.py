"""Discrete Fourier analysis of indicator functions on Z_p.

Conventions: the transform of the indicator of A at frequency d is
sum_{a in A} e^{2 pi i a d / p}.  numpy's FFT uses the conjugate kernel;
magnitudes are unaffected and the one identity that needs phases conjugates
explicitly.  Magnitudes are computed for d <= p/2 and mirrored, so conjugate
symmetry holds exactly.  Inequality assertions on magnitudes use a 1e-6
absolute tolerance; any verdict that compares cardinalities is re-ranked in
exact integers, so floating error never flips it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import bits
from .errors import (
    ConsistencyError,
    EmptySetError,
    PreconditionFailedError,
    PrimeRequiredError,
)
from .residues import ResidueSet, dilate, sumset

MAG_TOL = 1e-6
EXACT_SEARCH_MAX_P = 1 << 14


@dataclass(frozen=True)
class Spectrum:
    modulus: int
    magnitudes: np.ndarray  # |transform| at d = 0 .. p-1
    tolerance: float = MAG_TOL

    def to_json(self) -> dict:
        return {
            "p": self.modulus,
            "magnitudes": [float(x) for x in self.magnitudes],
        }


def _indicator(a: ResidueSet) -> np.ndarray:
    x = np.zeros(a.modulus)
    x[a.elements()] = 1.0
    return x


def _transform_conj(a: ResidueSet) -> np.ndarray:
    """numpy FFT of the indicator = conjugate of the transform used here."""
    return np.fft.fft(_indicator(a))


def spectrum(a: ResidueSet) -> Spectrum:
    if not a.prime_modulus:
        raise PrimeRequiredError("spectrum requires prime modulus")
    p = a.modulus
    half = np.abs(np.fft.rfft(_indicator(a)))
    half[0] = float(len(a))  # the d = 0 value is |A| by definition
    mags = np.concatenate([half, half[(p - 1) // 2 : 0 : -1]])
    assert len(mags) == p
    return Spectrum(p, mags)


@dataclass(frozen=True)
class LargeCoefficient:
    d: int
    magnitude: float
    bound: float  # sqrt((p/|2A| - 1) / (p/|A| - 1)) * |A|

    def to_json(self) -> dict:
        return {"d": self.d, "magnitude": self.magnitude, "bound": self.bound}


def large_coefficient_bound(p: int, size: int, sumset_size: int) -> float:
    num = p / sumset_size - 1.0
    den = p / size - 1.0
    return sqrt(max(num, 0.0) / den) * size


def largest_coefficient(a: ResidueSet) -> LargeCoefficient:
    """The smallest nonzero frequency of maximal magnitude, with the lower
    bound that small doubling forces on it.

    Requires a proper nonempty (the bound degenerates at A = Z_p).  Violation
    of the bound would falsify the guarantee and raises AssertionError.
    """
    p = a.modulus
    k = len(a)
    if k == 0:
        raise EmptySetError("largest coefficient of the empty set")
    if k >= p:
        raise PreconditionFailedError("A must be a proper subset of Z_p")
    mags = spectrum(a).magnitudes
    tail = mags[1:]
    top = float(tail.max())
    # group float-level ties and take the smallest frequency
    d = 1 + int(np.nonzero(tail >= top - 1e-9 * max(1.0, top))[0][0])
    bound = large_coefficient_bound(p, k, len(sumset(a)))
    if mags[d] < bound - MAG_TOL:
        raise ConsistencyError(
            f"max |transform| {mags[d]:.9f} below guaranteed bound {bound:.9f}"
        )
    return LargeCoefficient(d, float(mags[d]), bound)


def energy_identity_residual(a: ResidueSet) -> float:
    """Relative residual of sum_d T_A(d)^2 conj(T_2A(d)) = |A|^2 p.

    The identity is exact in exact arithmetic; in doubles the residual stays
    far below 1e-9 for p up to 1e5.
    """
    if not a.prime_modulus:
        raise PrimeRequiredError("identity requires prime modulus")
    if len(a) == 0:
        raise EmptySetError("identity of the empty set")
    fa = _transform_conj(a)
    f2 = _transform_conj(sumset(a))
    total = np.sum(np.conj(fa) ** 2 * f2)
    target = len(a) ** 2 * a.modulus
    return float(abs(total - target) / target)


@dataclass(frozen=True)
class RectWindow:
    """A half-length window [u, u + (p+1)/2) and the part of a dilate of A it
    captures.  `captured` lives in the dilated coordinates d * A."""

    d: int
    u: int
    captured: ResidueSet
    window_size: int
    mode: str  # "exact" or "fourier"

    def __len__(self) -> int:
        return len(self.captured)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "u": self.u,
            "captured": self.captured.literal(),
            "window_size": self.window_size,
            "mode": self.mode,
        }


def window_capture_counts(a: ResidueSet, d: int) -> np.ndarray:
    """|[u, u + (p+1)/2) ∩ d*A| for every u (one dilation, all starts)."""
    p = a.modulus
    w = (p + 1) // 2
    ind = np.zeros(p)
    ind[[x * d % p for x in a.elements()]] = 1.0
    ext = np.concatenate([ind, ind[: w - 1]])
    cs = np.concatenate([[0.0], np.cumsum(ext)])
    return (cs[w:] - cs[:p]).astype(np.int64)


def best_half_window(a: ResidueSet) -> RectWindow:
    """The (d, u) whose half window captures the most of d * A.

    Exact sweep over every (d, u) for p <= 2^14, smallest d then smallest u
    on ties.  Above that, the d attaining the maximal Fourier magnitude is
    used with its best u; that capture is guaranteed at least
    (|A| + |T_A(d)|)/2 and the mode is recorded as "fourier".
    """
    p = a.modulus
    if not a.prime_modulus:
        raise PrimeRequiredError("window search requires prime modulus")
    if len(a) == 0:
        raise EmptySetError("window of the empty set")
    w = (p + 1) // 2
    if p <= EXACT_SEARCH_MAX_P:
        # Sliding the window start right to the next member never loses a
        # capture, so the maximum count is attained at member-anchored
        # windows; the exact smallest-u tie-break is recovered afterwards
        # for the winning dilation alone.
        members = np.array(a.elements(), dtype=np.int64)
        k = len(members)
        pos = np.sort(np.arange(1, p)[:, None] * members[None, :] % p, axis=1)
        ext = np.concatenate([pos, pos + p], axis=1)
        row_off = (np.arange(p - 1) * 2 * p)[:, None]
        flat = (ext + row_off).ravel()
        queries = (pos + w + row_off).ravel()
        ends = np.searchsorted(flat, queries, side="left")
        counts = ends.reshape(p - 1, k) - np.arange(p - 1)[:, None] * 2 * k
        counts -= np.arange(k)[None, :]
        per_d = counts.max(axis=1)
        count = int(per_d.max())
        d = 1 + int(np.argmax(per_d))  # first row: smallest dilation
        exact_counts = window_capture_counts(a, d)
        assert int(exact_counts.max()) == count
        u = int(np.argmax(exact_counts))  # first index: smallest start
        mode = "exact"
    else:
        lc = largest_coefficient(a)
        d = lc.d
        counts = window_capture_counts(a, d)
        count = int(counts.max())
        u = int(np.argmax(counts))
        if count < (len(a) + lc.magnitude) / 2 - MAG_TOL:
            raise ConsistencyError(
                "window capture below the guaranteed half-plus-coefficient bound"
            )
        mode = "fourier"
    window_mask = bits.rotate((1 << w) - 1, u, p)
    captured = ResidueSet(p, dilate(a, d).mask & window_mask)
    assert len(captured) == count
    return RectWindow(d, u, captured, w, mode)
