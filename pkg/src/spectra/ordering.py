"""Spectral ordering, decay predicates, and large-spectrum sets.

The order enumerates frequencies by descending coefficient magnitude with 0
first and conjugate pairs {a, -a} adjacent.  A pair's magnitude is computed
once, from the smaller-index representative, so floating noise cannot split a
pair; group sorting compares magnitudes after relative quantisation so that
independently computed spectra of the same function (fast vs direct transform)
produce the identical order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, RegimeError
from .field import FieldParams, FieldPoint, index_to_point, neg_perm
from .transform import Spectrum

# Relative quantum for sort keys; stored magnitudes stay full precision.
_SORT_DIGITS = 10


@dataclass(frozen=True, eq=False)
class SpectralOrder:
    """Ranked frequencies: rank r (1-based) is index perm[r-1], |coeff| mags[r-1]."""

    params: FieldParams
    perm: np.ndarray
    mags: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "perm", np.asarray(self.perm, dtype=np.int64))
        object.__setattr__(self, "mags", np.asarray(self.mags, dtype=np.float64))
        if self.perm.shape != (self.params.F,) or self.mags.shape != (self.params.F,):
            raise InputError("perm and mags must both have length F")
        self.perm.setflags(write=False)
        self.mags.setflags(write=False)

    def index_at(self, rank: int) -> int:
        """Canonical index of a_rank, rank 1-based."""
        if not 1 <= rank <= self.params.F:
            raise InputError(f"rank {rank} out of range")
        return int(self.perm[rank - 1])

    def point_at(self, rank: int) -> FieldPoint:
        return index_to_point(self.index_at(rank), self.params)

    def mag_at(self, rank: int) -> float:
        if not 1 <= rank <= self.params.F:
            raise InputError(f"rank {rank} out of range")
        return float(self.mags[rank - 1])

    @property
    def f0(self) -> float:
        return float(self.mags[0])


@dataclass(frozen=True)
class LargeSpectrumSet:
    """R_ell: the first ell ranked frequencies, with O(1) membership."""

    params: FieldParams
    ell: int
    ordered: tuple[int, ...]
    members: frozenset[int]

    def __contains__(self, x: int | FieldPoint) -> bool:
        if isinstance(x, FieldPoint):
            x = x.index
        return x in self.members

    def __len__(self) -> int:
        return self.ell


def spectral_order(s: Spectrum) -> SpectralOrder:
    params = s.params
    F = params.F
    absv = np.abs(s.coeffs)
    f0 = float(s.coeffs[0].real)
    atol = 1e-9 * max(1.0, abs(f0))
    if abs(s.coeffs[0].imag) > atol or f0 < -atol:
        raise InputError("coeff at 0 is not a nonnegative real: not a density spectrum")
    f0 = max(f0, 0.0)
    if absv.max() > f0 + atol:
        raise InputError("dominance |f-hat(a)| <= f-hat(0) fails: not a density spectrum")

    neg = neg_perm(params)
    idx = np.arange(F, dtype=np.int64)
    reps = idx[(idx > 0) & (idx < neg[idx])]
    gmags = np.minimum(absv[reps], f0)  # clamp guards float noise at the top
    if f0 > 0.0:
        keys = np.round(gmags / f0, _SORT_DIGITS)
    else:
        keys = np.zeros_like(gmags)
    order = np.lexsort((reps, -keys))

    perm = np.empty(F, dtype=np.int64)
    mags = np.empty(F, dtype=np.float64)
    perm[0] = 0
    mags[0] = f0
    sel = reps[order]
    perm[1::2] = sel
    perm[2::2] = neg[sel]
    mags[1::2] = gmags[order]
    mags[2::2] = gmags[order]
    return SpectralOrder(params, perm, mags)


def decay_margin(order: SpectralOrder, j: int, theta: float, delta: float) -> float:
    """log(threshold) - log(mags[j]); positive means the decay condition holds.

    Entirely log-domain: theta^(j^(1/2+delta)) underflows for modest j.
    A zero coefficient gives +inf.
    """
    if not 1 <= j <= order.params.F:
        raise InputError(f"rank {j} out of range")
    if theta <= 0.0:
        raise InputError("theta must be positive")
    if theta > 1.0:
        raise InputError("theta must be at most 1")
    if delta <= 0.0:
        raise InputError("delta must be positive")
    log_rhs = (j ** (0.5 + delta)) * math.log(theta) + math.log(order.params.F)
    m = order.mag_at(j)
    if m == 0.0:
        return math.inf
    return log_rhs - math.log(m)


def decay_holds(order: SpectralOrder, j: int, theta: float, delta: float) -> bool:
    """|f-hat(a_j)| < theta^(j^(1/2+delta)) * F, compared in the log domain."""
    return decay_margin(order, j, theta, delta) > 0.0


def benign_index(order: SpectralOrder, j: int) -> int | None:
    """Largest j' < j with mags[j'-1] >= 2*sqrt(F) and mags[j'] < 2*sqrt(F).

    The magnitudes are non-increasing, so the crossing is unique when it
    exists.  Returns None when no rank below j has dropped under the
    threshold.  Requires the rank-1 magnitude to clear the threshold,
    otherwise the crossing is ill-posed (NoCrossing).
    """
    if not 2 <= j <= order.params.F:
        raise InputError(f"rank {j} out of range (need j >= 2)")
    thr = 2.0 * math.sqrt(order.params.F)
    if order.f0 < thr:
        raise RegimeError(f"NoCrossing: rank-1 magnitude {order.f0:.6g} < 2*sqrt(F) = {thr:.6g}")
    for jp in range(j - 1, 1, -1):
        if order.mag_at(jp) < thr and order.mag_at(jp - 1) >= thr:
            return jp
    return None


def large_spectrum(order: SpectralOrder, ell: int) -> LargeSpectrumSet:
    if not 1 <= ell <= order.params.F:
        raise InputError(f"ell = {ell} out of range")
    ordered = tuple(int(v) for v in order.perm[:ell])
    return LargeSpectrumSet(order.params, ell, ordered, frozenset(ordered))
