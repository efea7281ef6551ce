"""Sparse complex tensors and the elementary vectors/tensors used to build
logical tensor networks.

A :class:`SparseTensor` stores only its nonzero entries in coordinate form:
an ``(nnz, ndim)`` integer array of multi-indices kept in lexicographic order
and a matching array of complex amplitudes. Explicitly constructed tensors
drop entries whose modulus falls below :data:`ZERO_TOL`; contraction results
drop entries that cancel to below :data:`ZERO_TOL` of the magnitude that
produced them. Equality of two tensors reduces to comparing their coordinate
arrays.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Mapping, Sequence

import numpy as np

ZERO_TOL = 1e-12

_INT64_SAFE = 2**62


class TensorError(ValueError):
    """Base class for tensor construction and contraction errors."""


class InvalidDimension(TensorError):
    pass


class InvalidProjection(TensorError):
    pass


class ShapeError(TensorError):
    pass


class InvalidLegs(TensorError):
    pass


class DegenerateTensor(TensorError):
    """Raised when a tensor with no stored entry must be normalized."""


def _row_codes(rows: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Mixed-radix codes of integer rows; order-preserving (lexicographic)."""
    n = rows.shape[0]
    if rows.shape[1] == 0:
        return np.zeros(n, dtype=np.int64)
    if math.prod(dims) < _INT64_SAFE:
        return np.ravel_multi_index(rows.T, tuple(dims)).astype(np.int64, copy=False)
    # huge dense volume: fall back to ranking rows
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def _joint_codes(a: np.ndarray, b: np.ndarray, dims: Sequence[int]):
    """Codes for two row sets that agree whenever two rows are equal."""
    if a.shape[1] == 0 or math.prod(dims) < _INT64_SAFE:
        return _row_codes(a, dims), _row_codes(b, dims)
    both = np.vstack([a, b])
    _, inv = np.unique(both, axis=0, return_inverse=True)
    inv = inv.reshape(-1).astype(np.int64)
    return inv[: a.shape[0]], inv[a.shape[0]:]


class SparseTensor:
    """Immutable sparse tensor over complex amplitudes.

    Use the constructors (:meth:`from_entries`, :meth:`from_dense`,
    :meth:`from_arrays`) rather than ``__init__`` directly; they bring the
    data into canonical form.
    """

    __slots__ = ("dims", "indices", "values")

    def __init__(self, dims: tuple[int, ...], indices: np.ndarray, values: np.ndarray):
        self.dims = dims
        self.indices = indices
        self.values = values
        self.indices.flags.writeable = False
        self.values.flags.writeable = False

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_arrays(
        cls, dims: Sequence[int], indices, values, *, tol: float = ZERO_TOL, relative: bool = False
    ) -> "SparseTensor":
        """Canonicalize coordinate data: sum duplicates, drop small entries, sort.

        With ``relative=True`` an entry is dropped only when its modulus is
        below ``tol`` times the summed moduli of the duplicates that formed it
        (cancellation residue); small but genuine amplitudes survive.
        """
        dims = tuple(int(d) for d in dims)
        for d in dims:
            if d < 1:
                raise InvalidDimension(f"leg extent must be positive, got {d}")
        ndim = len(dims)
        val = np.asarray(values, dtype=np.complex128).reshape(-1)
        idx = np.asarray(indices, dtype=np.int64)
        idx = idx.reshape(-1, ndim) if ndim else idx.reshape(val.shape[0], 0)
        if idx.shape[0] != val.shape[0]:
            raise ShapeError("indices and values disagree in length")
        if not np.all(np.isfinite(val)):
            raise TensorError("amplitudes must be finite")
        if idx.size and (np.any(idx < 0) or np.any(idx >= np.asarray(dims))):
            raise ShapeError("multi-index out of range for dims %s" % (dims,))
        mass = None
        if idx.shape[0] > 1:
            codes = _row_codes(idx, dims)
            uniq, first, inv = np.unique(codes, return_index=True, return_inverse=True)
            if uniq.shape[0] != codes.shape[0]:
                inv = inv.reshape(-1)
                if relative:
                    mass = np.bincount(inv, weights=np.abs(val), minlength=uniq.shape[0])
                re = np.bincount(inv, weights=val.real, minlength=uniq.shape[0])
                im = np.bincount(inv, weights=val.imag, minlength=uniq.shape[0])
                val = re + 1j * im
            else:
                val = val[first]
            idx = idx[first]
        if relative:
            if mass is None:
                mass = np.abs(val)
            keep = (val != 0) & (np.abs(val) >= tol * mass)
        else:
            keep = np.abs(val) >= tol
        if not np.all(keep):
            idx, val = idx[keep], val[keep]
        return cls(dims, np.ascontiguousarray(idx), np.ascontiguousarray(val))

    @classmethod
    def from_entries(cls, dims: Sequence[int], entries: Mapping[tuple, complex] | Iterable) -> "SparseTensor":
        items = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        ndim = len(dims)
        if not items:
            return cls.from_arrays(dims, np.zeros((0, ndim), dtype=np.int64), np.zeros(0))
        idx = np.array([tuple(k) for k, _ in items], dtype=np.int64).reshape(len(items), ndim)
        val = np.array([v for _, v in items], dtype=np.complex128)
        return cls.from_arrays(dims, idx, val)

    @classmethod
    def from_dense(cls, array) -> "SparseTensor":
        arr = np.asarray(array, dtype=np.complex128)
        if arr.ndim == 0:
            return cls.from_arrays((), np.zeros((1, 0), dtype=np.int64), arr.reshape(1))
        nz = np.argwhere(np.abs(arr) >= ZERO_TOL)
        return cls.from_arrays(arr.shape, nz, arr[tuple(nz.T)])

    @classmethod
    def scalar(cls, value: complex) -> "SparseTensor":
        return cls.from_arrays((), np.zeros((1, 0), dtype=np.int64), [value])

    # -- views ------------------------------------------------------------

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def nnz(self) -> int:
        return int(self.values.shape[0])

    @property
    def entries(self) -> dict[tuple[int, ...], complex]:
        return {tuple(int(i) for i in row): complex(v) for row, v in zip(self.indices, self.values)}

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dims, dtype=np.complex128)
        if self.ndim == 0:
            return np.asarray(self.value(), dtype=np.complex128)
        if self.nnz:
            out[tuple(self.indices.T)] = self.values
        return out

    def value(self) -> complex:
        """Value of a 0-leg tensor."""
        if self.ndim:
            raise ShapeError("value() needs a scalar tensor")
        return complex(self.values[0]) if self.nnz else 0j

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.nnz else 0.0

    def transpose(self, perm: Sequence[int]) -> "SparseTensor":
        perm = list(perm)
        if sorted(perm) != list(range(self.ndim)):
            raise InvalidLegs(f"bad permutation {perm}")
        if perm == list(range(self.ndim)):
            return self
        return SparseTensor.from_arrays(
            [self.dims[p] for p in perm], self.indices[:, perm], self.values, tol=0.0
        )

    def allclose(self, other: "SparseTensor", rtol: float = 1e-9, atol: float = 0.0) -> bool:
        if self.dims != other.dims:
            return False
        a, b = self.to_dense(), other.to_dense()
        scale = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
        return bool(np.all(np.abs(a - b) <= atol + rtol * scale))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return (
            self.dims == other.dims
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.dims, self.indices.tobytes(), self.values.tobytes()))

    def __repr__(self) -> str:
        return f"SparseTensor(dims={self.dims}, nnz={self.nnz})"


# -- algebra -------------------------------------------------------------


def contract_pair(t1: SparseTensor, legs1: Sequence[int], t2: SparseTensor, legs2: Sequence[int]) -> SparseTensor:
    """Sum over matched legs; result legs are free legs of ``t1`` then ``t2``."""
    legs1, legs2 = list(legs1), list(legs2)
    if len(legs1) != len(legs2):
        raise InvalidLegs("leg lists differ in length")
    if len(set(legs1)) != len(legs1) or len(set(legs2)) != len(legs2):
        raise InvalidLegs("duplicate leg in contraction")
    for a, b in zip(legs1, legs2):
        if not (0 <= a < t1.ndim and 0 <= b < t2.ndim):
            raise InvalidLegs(f"leg out of range: {a}, {b}")
        if t1.dims[a] != t2.dims[b]:
            raise ShapeError(f"extent mismatch {t1.dims[a]} != {t2.dims[b]}")

    free1 = [i for i in range(t1.ndim) if i not in legs1]
    free2 = [i for i in range(t2.ndim) if i not in legs2]
    out_dims = [t1.dims[i] for i in free1] + [t2.dims[i] for i in free2]
    if t1.nnz == 0 or t2.nnz == 0:
        return SparseTensor.from_arrays(out_dims, np.zeros((0, len(out_dims))), np.zeros(0))

    matched_dims = [t1.dims[i] for i in legs1]
    k1, k2 = _joint_codes(t1.indices[:, legs1], t2.indices[:, legs2], matched_dims)
    order = np.argsort(k2, kind="stable")
    k2s = k2[order]
    lo = np.searchsorted(k2s, k1, side="left")
    hi = np.searchsorted(k2s, k1, side="right")
    counts = hi - lo
    total = int(counts.sum())
    if total == 0:
        return SparseTensor.from_arrays(out_dims, np.zeros((0, len(out_dims))), np.zeros(0))
    rep1 = np.repeat(np.arange(t1.nnz), counts)
    starts = np.cumsum(counts) - counts
    pos = np.arange(total) - np.repeat(starts, counts) + np.repeat(lo, counts)
    rep2 = order[pos]
    vals = t1.values[rep1] * t2.values[rep2]
    idx = np.hstack([t1.indices[rep1][:, free1], t2.indices[rep2][:, free2]])
    return SparseTensor.from_arrays(out_dims, idx, vals, relative=True)


def scale(t: SparseTensor, factor: complex) -> SparseTensor:
    return SparseTensor.from_arrays(t.dims, t.indices, t.values * factor, relative=True)


def normalize_max(t: SparseTensor) -> tuple[SparseTensor, float]:
    """Divide by the largest entry modulus; return the tensor and log of that modulus."""
    m = t.max_abs()
    if m == 0.0:
        raise DegenerateTensor("cannot normalize a tensor with no stored entries")
    # values are already canonical; avoid re-dropping entries
    return SparseTensor(t.dims, t.indices.copy(), t.values / m), math.log(m)


# -- elementary vectors and tensors --------------------------------------


def _check_dim(dim: int) -> int:
    if int(dim) < 1:
        raise InvalidDimension(f"dimension must be >= 1, got {dim}")
    return int(dim)


def make_plus(dim: int) -> SparseTensor:
    dim = _check_dim(dim)
    return SparseTensor.from_arrays((dim,), np.arange(dim).reshape(-1, 1), np.ones(dim))


def make_minus() -> SparseTensor:
    return SparseTensor.from_arrays((2,), [[0], [1]], [-1.0, 1.0])


def make_projection(dim: int, value: int) -> SparseTensor:
    dim = _check_dim(dim)
    if not 0 <= value < dim:
        raise InvalidProjection(f"projection value {value} outside [0, {dim})")
    return SparseTensor.from_arrays((dim,), [[value]], [1.0])


def make_phase(dim: int) -> SparseTensor:
    dim = _check_dim(dim)
    j = np.arange(dim)
    return SparseTensor.from_arrays((dim,), j.reshape(-1, 1), np.exp(2j * np.pi * j / dim))


def make_step(dim: int, bound: int) -> SparseTensor:
    """Indicator of positions ``j <= bound`` (Heaviside with H(0) = 0)."""
    dim = _check_dim(dim)
    j = np.arange(min(dim, max(bound + 1, 0)))
    return SparseTensor.from_arrays((dim,), j.reshape(-1, 1), np.ones(j.shape[0]))


def make_delta(arity: int, dim: int) -> SparseTensor:
    if arity < 1:
        raise InvalidDimension("delta arity must be >= 1")
    dim = _check_dim(dim)
    j = np.arange(dim)
    return SparseTensor.from_arrays((dim,) * arity, np.repeat(j[:, None], arity, axis=1), np.ones(dim))


def delta_chain(n_legs: int, dim: int) -> list[SparseTensor]:
    """Tensor-train of 3-leg deltas equivalent to ``make_delta(n_legs, dim)``.

    Each element has legs ``(left, external, right)``; element ``k``'s right
    leg bonds with element ``k+1``'s left leg. The open legs of the train are
    the first element's left leg, every external leg, and the last element's
    right leg.
    """
    if n_legs < 3:
        raise InvalidDimension("a delta chain needs at least 3 legs")
    return [make_delta(3, dim) for _ in range(n_legs - 2)]


def make_pass(dim_a: int, dim_b: int) -> SparseTensor:
    """Two crossing wires; legs ``(in_vertical, in_horizontal, out_vertical, out_horizontal)``."""
    a, b = _check_dim(dim_a), _check_dim(dim_b)
    rows = [(i, j, i, j) for i, j in itertools.product(range(a), range(b))]
    return SparseTensor.from_arrays((a, b, a, b), rows, np.ones(len(rows)))


def from_table(table, *, tol: float = ZERO_TOL) -> SparseTensor:
    """Sparse tensor from a dense real/complex array (entries below tol dropped)."""
    arr = np.asarray(table)
    nz = np.argwhere(np.abs(arr) >= tol)
    return SparseTensor.from_arrays(arr.shape, nz, arr[tuple(nz.T)], tol=tol)
