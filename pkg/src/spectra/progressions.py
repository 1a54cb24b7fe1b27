"""Counting and locating three-term arithmetic progressions.

A triple is (m, m+d, m+2d); it is nontrivial when d != 0 (over odd p this is
the same as the three points being pairwise distinct).  lambda_brute is the
direct-summation oracle; lambda_spectral evaluates the identity
Lambda = F^{-3} sum_a f-hat(a)^2 f-hat(-2a).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ViolationError
from .field import (
    FieldParams,
    FieldPoint,
    all_digits,
    double_perm,
    index_to_point,
    indices_of_digits,
    neg_perm,
)
from .transform import DensityFunction, Spectrum


@dataclass(frozen=True)
class SupportSet:
    """support(f) = {m : f(m) > 0}, held as sorted canonical indices."""

    params: FieldParams
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(not 0 <= i < self.params.F for i in self.indices):
            raise InputError("support index out of range")
        if list(self.indices) != sorted(set(self.indices)):
            raise InputError("support indices must be sorted and unique")

    @classmethod
    def from_density(cls, f: DensityFunction) -> "SupportSet":
        return cls(f.params, tuple(int(i) for i in np.flatnonzero(f.values > 0.0)))

    @classmethod
    def from_indices(cls, indices, params: FieldParams) -> "SupportSet":
        return cls(params, tuple(sorted({int(i) for i in indices})))

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.indices)

    def member_points(self) -> tuple[FieldPoint, ...]:
        return tuple(index_to_point(i, self.params) for i in self.indices)

    def indicator(self) -> DensityFunction:
        v = np.zeros(self.params.F)
        v[list(self.indices)] = 1.0
        return DensityFunction(self.params, v)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, x: int | FieldPoint) -> bool:
        if isinstance(x, FieldPoint):
            x = x.index
        return x in self.members


@dataclass(frozen=True)
class ProgressionWitness:
    """A nontrivial progression (m, m+d, m+2d), d != 0."""

    m: FieldPoint
    d: FieldPoint

    def __post_init__(self) -> None:
        if self.d.params != self.m.params:
            raise InputError("mismatched field parameters")
        if self.d.is_zero():
            raise InputError("witness requires d != 0")

    def points(self) -> tuple[FieldPoint, FieldPoint, FieldPoint]:
        return (self.m, self.m + self.d, self.m + self.d + self.d)

    def verify(self, S: SupportSet) -> bool:
        return all(x.index in S.members for x in self.points())


def lambda_brute(f: DensityFunction) -> float:
    """F^{-2} sum_{m,d} f(m) f(m+d) f(m+2d) by direct summation.

    Outer loop restricted to m in support; the inner sum over d is written as
    sum_y f(y) f(2y - m).
    """
    params = f.params
    F = params.F
    vals = f.values
    supp = np.flatnonzero(vals > 0.0)
    if supp.size == 0:
        return 0.0
    D = all_digits(params).astype(np.int64)
    D2 = (2 * D) % params.p
    total = 0.0
    for m in supp:
        y_to_third = indices_of_digits((D2 - D[m]) % params.p, params)
        total += float(vals[m]) * float(vals @ vals[y_to_third])
    return total / (F * F)


def lambda_spectral(s: Spectrum) -> float:
    """Re(F^{-3} sum_a coeffs[a]^2 coeffs[-2a]); the imaginary part must vanish."""
    params = s.params
    F = params.F
    neg2 = neg_perm(params)[double_perm(params)]
    c = s.coeffs
    acc = np.sum(c * c * c[neg2]) / F**3
    scale = float(np.sum(np.abs(c) ** 2 * np.abs(c[neg2]))) / F**3
    if abs(acc.imag) > 1e-9 * max(scale, 1e-300):
        raise ViolationError(
            f"imaginary residue {acc.imag:.3e} exceeds tolerance at scale {scale:.3e}")
    return float(acc.real)


def find_nontrivial_3ap(S: SupportSet) -> ProgressionWitness | None:
    """Lexicographically smallest (m index, d index) with all three points in S.

    O(|S|^2): for each m the candidate midpoints y = m + d range over S, and
    membership of m + 2d = 2y - m is a table lookup.
    """
    params = S.params
    if len(S) == 0:
        return None
    idx = np.array(S.indices, dtype=np.int64)
    inS = np.zeros(params.F, dtype=bool)
    inS[idx] = True
    D = all_digits(params).astype(np.int64)
    DS = D[idx]
    for m in S.indices:
        third = indices_of_digits((2 * DS - D[m]) % params.p, params)
        ok = inS[third]
        if not ok.any():
            continue
        d_candidates = indices_of_digits((DS[ok] - D[m]) % params.p, params)
        d_candidates = d_candidates[d_candidates > 0]
        if d_candidates.size:
            d = int(d_candidates.min())
            return ProgressionWitness(index_to_point(m, params), index_to_point(d, params))
    return None


def count_3aps(S: SupportSet) -> int:
    """#{(m, d) : m, m+d, m+2d all in S}, trivial d = 0 pairs included."""
    F = S.params.F
    raw = F * F * lambda_brute(S.indicator())
    nearest = round(raw)
    if abs(raw - nearest) >= 1e-6:
        raise ViolationError(f"3AP count {raw!r} is not integral")
    return int(nearest)


def is_3ap_free(S: SupportSet) -> bool:
    return find_nontrivial_3ap(S) is None
