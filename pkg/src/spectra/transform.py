"""Character transform over F_p^n.

The forward transform is unnormalised: coeffs[a] = sum_m f(m) e^{2 pi i (a.m)/p},
with the coordinate dot product in the exponent.  A fast tensor-factored path
(one radix-p contraction per axis, O(F n p) work) is the default; dft_direct is
an independent O(F^2) reference used by the verification suites.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .field import FieldParams, all_digits

_VALUE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityFunction:
    """f : F_p^n -> [0,1], dense over canonical indices."""

    params: FieldParams
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.params.F,):
            raise InputError(f"values must have length F = {self.params.F}")
        if not np.all(np.isfinite(v)):
            raise InputError("values must be finite")
        if v.min(initial=0.0) < -_VALUE_TOL or v.max(initial=0.0) > 1.0 + _VALUE_TOL:
            raise InputError("values must lie in [0, 1]")
        v = np.clip(v, 0.0, 1.0)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def expectation(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True, eq=False)
class ComplexFunction:
    """Arbitrary complex-valued function on F_p^n."""

    params: FieldParams
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.params.F,):
            raise InputError(f"values must have length F = {self.params.F}")
        if not np.all(np.isfinite(v)):
            raise InputError("values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients, coeffs[a] = f-hat(a) over canonical indices."""

    params: FieldParams
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.params.F,):
            raise InputError(f"coeffs must have length F = {self.params.F}")
        if not np.all(np.isfinite(c)):
            raise InputError("coeffs must be finite")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


@functools.lru_cache(maxsize=16)
def _roots(p: int) -> np.ndarray:
    w = np.exp((2j * np.pi / p) * np.arange(p))
    w.setflags(write=False)
    return w


@functools.lru_cache(maxsize=16)
def _kernel(p: int) -> np.ndarray:
    """C[u, v] = e^{2 pi i u v / p}."""
    uv = np.outer(np.arange(p), np.arange(p)) % p
    C = _roots(p)[uv]
    C.setflags(write=False)
    return C


def _contract(values: np.ndarray, params: FieldParams, kernel: np.ndarray) -> np.ndarray:
    p, n = params.p, params.n
    # order="F" matches the little-endian index convention: axis k is digit k.
    T = np.asarray(values, dtype=np.complex128).reshape((p,) * n, order="F")
    for axis in range(n):
        T = np.moveaxis(np.tensordot(kernel, T, axes=([1], [axis])), 0, axis)
    return T.reshape(params.F, order="F")


def dft(f: DensityFunction | ComplexFunction) -> Spectrum:
    """Fast forward transform."""
    return Spectrum(f.params, _contract(f.values, f.params, _kernel(f.params.p)))


def dft_direct(f: DensityFunction | ComplexFunction) -> Spectrum:
    """Direct O(F^2) summation, row-chunked; the reference for the fast path."""
    params = f.params
    D = all_digits(params).astype(np.int64)
    vals = np.asarray(f.values, dtype=np.complex128)
    out = np.empty(params.F, dtype=np.complex128)
    chunk = max(1, (1 << 22) // max(params.F, 1))
    roots = _roots(params.p)
    for lo in range(0, params.F, chunk):
        hi = min(lo + chunk, params.F)
        phases = roots[(D[lo:hi] @ D.T) % params.p]
        out[lo:hi] = phases @ vals
    return Spectrum(params, out)


def idft(s: Spectrum) -> ComplexFunction:
    """Inverse transform: values[m] = F^{-1} sum_a coeffs[a] e^{-2 pi i (a.m)/p}."""
    vals = _contract(s.coeffs, s.params, np.conj(_kernel(s.params.p)))
    return ComplexFunction(s.params, vals / s.params.F)


def expectation(f: DensityFunction) -> float:
    return f.expectation()
