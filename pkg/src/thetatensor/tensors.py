"""Dense tensors, multi-index combinatorics and random low-rank instances.

Multi-indices are 1-based tuples ``a = (a_1, ..., a_d)`` addressing one
entry of a ``n_1 x ... x n_d`` array; they double as polynomial variable
labels elsewhere in the package.  Flattening is row-major lexicographic
(last coordinate fastest) everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class Shape:
    """Tuple of mode sizes (n_1, ..., n_d)."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if len(dims) < 1:
            raise ValueError("shape needs at least one mode")
        if any(n < 1 for n in dims):
            raise ValueError(f"mode sizes must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    def indices(self) -> list[MultiIndex]:
        """All multi-indices in lexicographic (row-major) order."""
        out = [()]
        for n in self.dims:
            out = [a + (i,) for a in out for i in range(1, n + 1)]
        return out

    def offset(self, a: MultiIndex) -> int:
        """Row-major position of a 1-based multi-index."""
        self.check_index(a)
        off = 0
        for ai, ni in zip(a, self.dims):
            off = off * ni + (ai - 1)
        return off

    def check_index(self, a: MultiIndex) -> None:
        if len(a) != self.d:
            raise ValueError(f"index {a} has wrong length for shape {self.dims}")
        if any(not 1 <= ai <= ni for ai, ni in zip(a, self.dims)):
            raise ValueError(f"index {a} out of bounds for shape {self.dims}")

    def __str__(self) -> str:
        return "x".join(str(n) for n in self.dims)


def wedge_vee(a: MultiIndex, b: MultiIndex) -> tuple[MultiIndex, MultiIndex]:
    """Componentwise (min, max) of two multi-indices."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {a} vs {b}")
    lo = tuple(min(ai, bi) for ai, bi in zip(a, b))
    hi = tuple(max(ai, bi) for ai, bi in zip(a, b))
    return lo, hi


def bar_wedge_vee(
    a: MultiIndex, b: MultiIndex, shape: Shape
) -> tuple[MultiIndex, MultiIndex]:
    """Barred variant: coordinates with a_i == b_i map to n_i in both outputs."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {a} vs {b}")
    shape.check_index(a)
    shape.check_index(b)
    lo = tuple(
        min(ai, bi) if ai != bi else ni for ai, bi, ni in zip(a, b, shape.dims)
    )
    hi = tuple(
        max(ai, bi) if ai != bi else ni for ai, bi, ni in zip(a, b, shape.dims)
    )
    return lo, hi


def is_reduced_pair(
    a: MultiIndex, b: MultiIndex, variant: str = "standard", shape: Shape | None = None
) -> bool:
    """Whether the unordered pair {a, b} is fixed by the (barred) rewrite.

    Reduced pairs survive in normal forms; non-reduced pairs are rewritten
    to their wedge/vee image.  ``a == b`` is rejected: reducedness is a
    property of pairs of distinct indices.
    """
    if a == b:
        raise ValueError("reduced-pair test requires a != b")
    if variant == "standard":
        lo, hi = wedge_vee(a, b)
    elif variant == "barred":
        if shape is None:
            raise ValueError("barred variant needs the shape")
        lo, hi = bar_wedge_vee(a, b, shape)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return {a, b} == {lo, hi}


class Tensor:
    """Dense real d-way array; values flat in row-major order."""

    __slots__ = ("shape", "values")

    def __init__(self, shape: Shape | Sequence[int], values):
        if not isinstance(shape, Shape):
            shape = Shape(tuple(shape))
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.size != shape.size:
            raise ValueError(
                f"got {values.size} values for shape {shape.dims} (need {shape.size})"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("tensor entries must be finite")
        values = values.copy()
        values.flags.writeable = False
        self.shape = shape
        self.values = values

    @classmethod
    def zeros(cls, shape: Shape | Sequence[int]) -> "Tensor":
        if not isinstance(shape, Shape):
            shape = Shape(tuple(shape))
        return cls(shape, np.zeros(shape.size))

    @classmethod
    def from_array(cls, arr) -> "Tensor":
        arr = np.asarray(arr, dtype=float)
        return cls(Shape(arr.shape), arr.reshape(-1))

    def to_array(self) -> np.ndarray:
        return self.values.reshape(self.shape.dims).copy()

    def __getitem__(self, a: MultiIndex) -> float:
        return float(self.values[self.shape.offset(a)])

    def __add__(self, other: "Tensor") -> "Tensor":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Tensor(self.shape, self.values + other.values)

    def __sub__(self, other: "Tensor") -> "Tensor":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Tensor(self.shape, self.values - other.values)

    def __mul__(self, c: float) -> "Tensor":
        return Tensor(self.shape, self.values * float(c))

    __rmul__ = __mul__

    def dot(self, other: "Tensor") -> float:
        """Frobenius inner product."""
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return float(self.values @ other.values)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape.dims}, values={self.values!r})"


@dataclass(frozen=True)
class ModeTransform:
    """One square matrix per mode, acting multilinearly on tensors."""

    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(np.asarray(m, dtype=float) for m in self.matrices)
        for m in mats:
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError("every mode matrix must be square")
        object.__setattr__(self, "matrices", mats)

    def matches(self, shape: Shape) -> bool:
        return len(self.matrices) == shape.d and all(
            m.shape[0] == n for m, n in zip(self.matrices, shape.dims)
        )

    def is_orthogonal(self, tol: float = 1e-10) -> bool:
        return all(
            np.allclose(m.T @ m, np.eye(m.shape[0]), atol=tol) for m in self.matrices
        )


def rank1_tensor(factors: Sequence[Sequence[float]]) -> Tensor:
    """Outer product of d factor vectors."""
    if len(factors) == 0:
        raise ValueError("need at least one factor")
    vecs = [np.asarray(f, dtype=float).reshape(-1) for f in factors]
    if any(v.size == 0 for v in vecs):
        raise ValueError("zero-length factor")
    out = vecs[0]
    for v in vecs[1:]:
        out = np.multiply.outer(out, v)
    return Tensor(Shape(tuple(v.size for v in vecs)), out.reshape(-1))


def _wedge_vee_offsets(shape: Shape) -> tuple[np.ndarray, np.ndarray]:
    """Flat positions of (a^b, avb) for every ordered index pair."""
    idx = shape.indices()
    n = len(idx)
    w = np.empty((n, n), dtype=np.intp)
    v = np.empty((n, n), dtype=np.intp)
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            lo, hi = wedge_vee(a, b)
            w[i, j] = shape.offset(lo)
            v[i, j] = shape.offset(hi)
    return w, v


_WEDGE_VEE_CACHE: dict[tuple[int, ...], tuple[np.ndarray, np.ndarray]] = {}


def rank1_residual(x: Tensor) -> float:
    """Max over index pairs of |x_a x_b - x_{a^b} x_{avb}|; 0 iff rank <= 1."""
    key = x.shape.dims
    if key not in _WEDGE_VEE_CACHE:
        _WEDGE_VEE_CACHE[key] = _wedge_vee_offsets(x.shape)
    w, v = _WEDGE_VEE_CACHE[key]
    vals = x.values
    prod = np.multiply.outer(vals, vals)
    return float(np.abs(prod - vals[w] * vals[v]).max())


def random_low_rank(
    shape: Shape | Sequence[int], r: int, kind: str = "gaussian", seed: int = 0
) -> Tensor:
    """Sum of r rank-1 terms, reproducible for a fixed seed.

    ``gaussian`` draws factor entries i.i.d. standard normal; ``signed``
    draws factor entries uniformly from {-1, +1} and combines the r terms
    with i.i.d. standard-normal coefficients.
    """
    if not isinstance(shape, Shape):
        shape = Shape(tuple(shape))
    if r < 1:
        raise ValueError("rank must be >= 1")
    if kind not in ("gaussian", "signed"):
        raise ValueError(f"unknown kind {kind!r}")
    rng = np.random.default_rng(int(seed))
    total = np.zeros(shape.size)
    for _ in range(r):
        if kind == "gaussian":
            factors = [rng.standard_normal(n) for n in shape.dims]
            coeff = 1.0
        else:
            factors = [
                rng.integers(0, 2, size=n).astype(float) * 2.0 - 1.0
                for n in shape.dims
            ]
            coeff = rng.standard_normal()
        total = total + coeff * rank1_tensor(factors).values
    return Tensor(shape, total)


def matricize(x: Tensor, row_modes: Iterable[int]) -> np.ndarray:
    """Flatten modes in ``row_modes`` (1-based) to rows, the rest to columns.

    Both sides use lexicographic flattening in increasing mode order.
    """
    rows = sorted(set(int(m) for m in row_modes))
    d = x.shape.d
    if not rows or len(rows) >= d:
        raise ValueError("row_modes must be a nonempty proper subset of modes")
    if rows[0] < 1 or rows[-1] > d:
        raise ValueError(f"mode out of range 1..{d}: {rows}")
    cols = [m for m in range(1, d + 1) if m not in rows]
    arr = x.values.reshape(x.shape.dims)
    perm = [m - 1 for m in rows + cols]
    nrow = int(np.prod([x.shape.dims[m - 1] for m in rows]))
    return arr.transpose(perm).reshape(nrow, -1).copy()


def mode_transform(x: Tensor, t: ModeTransform) -> Tensor:
    """Apply the multilinear action: mode-i product with each matrix."""
    if not t.matches(x.shape):
        raise ValueError("transform does not match tensor shape")
    arr = x.values.reshape(x.shape.dims)
    d = x.shape.d
    for i, m in enumerate(t.matrices):
        arr = np.moveaxis(np.tensordot(m, arr, axes=([1], [i])), 0, i)
    return Tensor(x.shape, arr.reshape(-1))


def save_tensor(x: Tensor, path: str) -> None:
    """Write a tensor as a JSON document with ``shape`` and ``values``."""
    with open(path, "w") as fh:
        json.dump({"shape": list(x.shape.dims), "values": x.values.tolist()}, fh)
        fh.write("\n")


def load_tensor(path: str) -> Tensor:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "shape" not in doc or "values" not in doc:
        raise ValueError("tensor file needs 'shape' and 'values' fields")
    return Tensor(Shape(tuple(doc["shape"])), doc["values"])


def derive_seed(master: int, *counters: int) -> int:
    """Counter-based u64 seed derivation for independent reproducible draws."""
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=tuple(int(c) for c in counters))
    return int(ss.generate_state(1, np.uint64)[0])
