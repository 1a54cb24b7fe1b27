"""Index arithmetic and linear algebra over F_p^n.

Points are identified with integers 0 <= m < p^n through little-endian base-p
digits: coordinate k carries weight p^k, so m = sum(digits[k] * p**k).  All
subspace constructors canonicalise through a deterministic reduced row echelon
form, which makes Subspace values hashable and comparable.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import InputError

# Dense digit tables are memoised per (p, n); keep them small enough that a
# handful of parameter sets cannot exhaust memory.
_TABLE_LIMIT = 1 << 22


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldParams:
    """Ambient group F_p^n, p an odd prime."""

    p: int
    n: int

    def __post_init__(self) -> None:
        if not _is_odd_prime(self.p):
            raise InputError(f"p must be an odd prime, got {self.p}")
        if self.n < 1:
            raise InputError(f"n must be >= 1, got {self.n}")
        if self.p ** self.n > 1 << 34:
            raise InputError(f"p^n = {self.p}^{self.n} exceeds the addressable budget")

    @property
    def F(self) -> int:
        return self.p ** self.n


@dataclass(frozen=True)
class FieldPoint:
    """A point of F_p^n as its digit tuple."""

    params: FieldParams
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.digits) != self.params.n:
            raise InputError("digit count does not match n")
        if any(not 0 <= d < self.params.p for d in self.digits):
            raise InputError("digits out of range")

    @property
    def index(self) -> int:
        p = self.params.p
        m = 0
        for d in reversed(self.digits):
            m = m * p + d
        return m

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.digits)

    def __add__(self, other: "FieldPoint") -> "FieldPoint":
        self._check(other)
        p = self.params.p
        return FieldPoint(self.params, tuple((a + b) % p for a, b in zip(self.digits, other.digits)))

    def __sub__(self, other: "FieldPoint") -> "FieldPoint":
        self._check(other)
        p = self.params.p
        return FieldPoint(self.params, tuple((a - b) % p for a, b in zip(self.digits, other.digits)))

    def __neg__(self) -> "FieldPoint":
        p = self.params.p
        return FieldPoint(self.params, tuple((-a) % p for a in self.digits))

    def __mul__(self, c: int) -> "FieldPoint":
        p = self.params.p
        return FieldPoint(self.params, tuple((c * a) % p for a in self.digits))

    __rmul__ = __mul__

    def _check(self, other: "FieldPoint") -> None:
        if other.params != self.params:
            raise InputError("mismatched field parameters")


def index_to_point(i: int, params: FieldParams) -> FieldPoint:
    if not 0 <= i < params.F:
        raise InputError(f"index {i} out of range for F = {params.F}")
    p = params.p
    digits = []
    for _ in range(params.n):
        digits.append(i % p)
        i //= p
    return FieldPoint(params, tuple(digits))


def point_to_index(x: FieldPoint) -> int:
    return x.index


def dot(a: FieldPoint, b: FieldPoint) -> int:
    if a.params != b.params:
        raise InputError("mismatched field parameters")
    return sum(u * v for u, v in zip(a.digits, b.digits)) % a.params.p


class _IndexTables:
    __slots__ = ("pows", "digits", "neg", "double", "inv2")

    def __init__(self, p: int, n: int) -> None:
        F = p ** n
        self.pows = p ** np.arange(n, dtype=np.int64)
        # digits[m, k] is digit k of index m; int16 keeps the table compact.
        idx = np.arange(F, dtype=np.int64)
        self.digits = ((idx[:, None] // self.pows[None, :]) % p).astype(np.int16)
        self.digits.setflags(write=False)
        d64 = self.digits.astype(np.int64)
        self.neg = ((-d64) % p) @ self.pows
        self.double = ((2 * d64) % p) @ self.pows
        self.neg.setflags(write=False)
        self.double.setflags(write=False)
        self.inv2 = pow(2, p - 2, p)


@functools.lru_cache(maxsize=32)
def _tables(p: int, n: int) -> _IndexTables:
    if p ** n > _TABLE_LIMIT:
        raise InputError(f"dense index tables unavailable for F = {p}^{n}")
    return _IndexTables(p, n)


def all_digits(params: FieldParams) -> np.ndarray:
    """(F, n) read-only digit matrix."""
    return _tables(params.p, params.n).digits


def indices_of_digits(digits: np.ndarray, params: FieldParams) -> np.ndarray:
    """Map an (..., n) digit array (entries already reduced mod p) to indices."""
    pows = _tables(params.p, params.n).pows
    return digits.astype(np.int64) @ pows


def neg_perm(params: FieldParams) -> np.ndarray:
    """perm[m] = index of -m."""
    return _tables(params.p, params.n).neg


def double_perm(params: FieldParams) -> np.ndarray:
    """perm[m] = index of 2m."""
    return _tables(params.p, params.n).double


def inv2_scalar(params: FieldParams) -> int:
    """Multiplicative inverse of 2 mod p."""
    return _tables(params.p, params.n).inv2


def shifted_indices(params: FieldParams, delta: FieldPoint) -> np.ndarray:
    """T[m] = index of (m + delta), as a permutation of 0..F-1."""
    t = _tables(params.p, params.n)
    d = np.asarray(delta.digits, dtype=np.int64)
    return ((t.digits.astype(np.int64) + d) % params.p) @ t.pows


def rref_mod_p(mat: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form over F_p, scanning columns left to right.

    Returns (R, pivots) with zero rows dropped.  Deterministic: the pivot for
    each column is the first eligible row.
    """
    M = np.array(mat, dtype=np.int64) % p
    if M.ndim != 2:
        raise InputError("rref expects a 2-d array")
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for rr in range(r, rows):
            if M[rr, c] % p:
                pivot = rr
                break
        if pivot is None:
            continue
        if pivot != r:
            M[[r, pivot]] = M[[pivot, r]]
        M[r] = (M[r] * pow(int(M[r, c]), p - 2, p)) % p
        for rr in range(rows):
            if rr != r and M[rr, c]:
                M[rr] = (M[rr] - M[rr, c] * M[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M[:r], tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of F_p^n held as canonical RREF basis rows."""

    params: FieldParams
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.params.p ** self.dim

    def basis_matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.params.n)

    def basis_points(self) -> tuple[FieldPoint, ...]:
        return tuple(FieldPoint(self.params, row) for row in self.basis)

    def reduce_digits(self, digits: np.ndarray) -> np.ndarray:
        """Subtract the projection onto the row space; zero iff member."""
        p = self.params.p
        v = np.asarray(digits, dtype=np.int64) % p
        if self.dim:
            coeff = v[..., list(self.pivots)]
            v = (v - coeff @ self.basis_matrix()) % p
        return v

    def contains(self, x: FieldPoint | int) -> bool:
        if isinstance(x, int):
            x = index_to_point(x, self.params)
        if x.params != self.params:
            raise InputError("mismatched field parameters")
        return not self.reduce_digits(np.asarray(x.digits)).any()

    __contains__ = contains

    def member_digits(self) -> np.ndarray:
        """(p^dim, n) digit matrix of all members, ordered by coefficient index."""
        p, n = self.params.p, self.params.n
        if self.dim == 0:
            return np.zeros((1, n), dtype=np.int64)
        coeffs = all_digits(FieldParams(p, self.dim)).astype(np.int64)
        return (coeffs @ self.basis_matrix()) % p

    def member_indices(self) -> np.ndarray:
        """Sorted indices of all members."""
        idx = indices_of_digits(self.member_digits(), self.params)
        idx.sort()
        return idx


def span(points: list[FieldPoint] | tuple[FieldPoint, ...], params: FieldParams) -> Subspace:
    """Canonical subspace spanned by the given points (possibly none)."""
    for x in points:
        if x.params != params:
            raise InputError("mismatched field parameters")
    if points:
        mat = np.array([x.digits for x in points], dtype=np.int64)
    else:
        mat = np.zeros((0, params.n), dtype=np.int64)
    R, piv = rref_mod_p(mat, params.p)
    return Subspace(params, tuple(tuple(int(v) for v in row) for row in R), piv)


def span_digits(mat: np.ndarray, params: FieldParams) -> Subspace:
    R, piv = rref_mod_p(mat, params.p)
    return Subspace(params, tuple(tuple(int(v) for v in row) for row in R), piv)


def kernel_of_functional(t: FieldPoint) -> Subspace:
    """ker(m -> t.m), dimension n-1 for t != 0 (all of F_p^n for t = 0)."""
    params = t.params
    if t.is_zero():
        return span_digits(np.eye(params.n, dtype=np.int64), params)
    return _nullspace_of(np.array([t.digits], dtype=np.int64), params)


def _nullspace_of(mat: np.ndarray, params: FieldParams) -> Subspace:
    """{x : mat @ x = 0 mod p} via the standard free-column construction."""
    p, n = params.p, params.n
    R, piv = rref_mod_p(mat, p)
    free = [c for c in range(n) if c not in piv]
    rows = np.zeros((len(free), n), dtype=np.int64)
    for i, c in enumerate(free):
        rows[i, c] = 1
        for r, pc in enumerate(piv):
            rows[i, pc] = (-R[r, c]) % p
    return span_digits(rows, params)


def orthogonal_complement(V: Subspace) -> Subspace:
    """V-perp under the standard dot product (dimension n - dim V always)."""
    if V.dim == 0:
        return span_digits(np.eye(V.params.n, dtype=np.int64), V.params)
    return _nullspace_of(V.basis_matrix(), V.params)


def complement(V: Subspace) -> Subspace:
    """A canonical direct complement W with V + W = F_p^n, V cap W = {0}.

    Prefers V-perp; when V meets its perp nontrivially (isotropic directions)
    falls back to extending V's basis by standard basis vectors in index order
    and returning the span of the added vectors.
    """
    params = V.params
    n = params.n
    W = orthogonal_complement(V)
    if W.dim == n - V.dim:
        stacked = np.vstack([V.basis_matrix(), W.basis_matrix()]) if V.dim else W.basis_matrix()
        _, piv = rref_mod_p(stacked, params.p)
        if len(piv) == n:
            return W
    base = V.basis_matrix()
    chosen: list[int] = []
    rank = V.dim
    for i in range(n):
        e = np.zeros((1, n), dtype=np.int64)
        e[0, i] = 1
        cand = np.vstack([base, e])
        R, piv = rref_mod_p(cand, params.p)
        if len(piv) > rank:
            base = cand
            rank += 1
            chosen.append(i)
        if rank == n:
            break
    rows = np.zeros((len(chosen), n), dtype=np.int64)
    for j, i in enumerate(chosen):
        rows[j, i] = 1
    return span_digits(rows, params)


@functools.lru_cache(maxsize=64)
def _decompose_inverse(V: Subspace, W: Subspace) -> np.ndarray:
    """Inverse of the n x n row-stack [V basis; W basis] mod p."""
    params = V.params
    if W.params != params:
        raise InputError("mismatched field parameters")
    if V.dim + W.dim != params.n:
        raise InputError("dim V + dim W != n")
    M = np.vstack([V.basis_matrix(), W.basis_matrix()]) if V.dim and W.dim else (
        V.basis_matrix() if V.dim else W.basis_matrix())
    p, n = params.p, params.n
    aug = np.hstack([M, np.eye(n, dtype=np.int64)])
    R, piv = rref_mod_p(aug, p)
    if tuple(piv[:n]) != tuple(range(n)):
        raise InputError("V + W does not span F_p^n")
    return R[:, n:] % p


def decompose(x: FieldPoint, V: Subspace, W: Subspace) -> tuple[FieldPoint, FieldPoint]:
    """Write x = v + w with v in V, w in W (requires V direct-sum W = F_p^n)."""
    v_idx, w_idx = decompose_indices(np.array([x.index]), V, W)
    return (index_to_point(int(v_idx[0]), V.params), index_to_point(int(w_idx[0]), W.params))


def decompose_indices(indices: np.ndarray, V: Subspace, W: Subspace) -> tuple[np.ndarray, np.ndarray]:
    """Batched decompose: returns (v_indices, w_indices) in the ambient group."""
    params = V.params
    p = params.p
    Minv = _decompose_inverse(V, W)
    d = all_digits(params).astype(np.int64)[np.asarray(indices, dtype=np.int64)]
    coeffs = (d @ Minv) % p
    k = V.dim
    vd = (coeffs[:, :k] @ V.basis_matrix()) % p if k else np.zeros_like(d)
    wd = (coeffs[:, k:] @ W.basis_matrix()) % p if W.dim else np.zeros_like(d)
    return indices_of_digits(vd, params), indices_of_digits(wd, params)


@dataclass(frozen=True)
class CoordinateIso:
    """Coordinate isomorphism F_p^k -> V for a k-dimensional subspace V."""

    sub: Subspace

    @property
    def parent_params(self) -> FieldParams:
        return self.sub.params

    @property
    def sub_params(self) -> FieldParams | None:
        """Parameters of the coordinate copy; None for the zero subspace."""
        if self.sub.dim == 0:
            return None
        return FieldParams(self.sub.params.p, self.sub.dim)

    def parent_indices(self) -> np.ndarray:
        """Index m of phi(c) for every coordinate index c, in c order."""
        return indices_of_digits(self.sub.member_digits(), self.sub.params)

    def to_parent(self, c: FieldPoint) -> FieldPoint:
        if self.sub.dim == 0:
            raise InputError("zero subspace has no coordinate points")
        if c.params != self.sub_params:
            raise InputError("mismatched coordinate parameters")
        d = (np.asarray(c.digits, dtype=np.int64) @ self.sub.basis_matrix()) % self.sub.params.p
        return FieldPoint(self.sub.params, tuple(int(v) for v in d))

    def to_sub(self, v: FieldPoint) -> FieldPoint:
        """Inverse map; raises InputError when v is not a member of V."""
        if self.sub.dim == 0:
            raise InputError("zero subspace has no coordinate points")
        if v.params != self.sub.params:
            raise InputError("mismatched field parameters")
        if not self.sub.contains(v):
            raise InputError("point is not in the subspace")
        c = tuple(v.digits[i] for i in self.sub.pivots)
        return FieldPoint(self.sub_params, c)


def coordinate_iso(V: Subspace) -> CoordinateIso:
    return CoordinateIso(V)
