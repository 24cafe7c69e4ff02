"""Moment-matrix layouts and assembly of the norm / recovery / sos SDPs.

A layout fixes the quotient-ring monomial basis B_k, one free moment
variable per reachable standard monomial of degree <= 2k, and for every
matrix cell (alpha, beta) the linear expansion of l(x^alpha x^beta) in
those variables.  Expansions are computed in exact arithmetic and
converted to float once, here.

Conic problems are posed in the standard form

    min c'x   s.t.   b - Ax in {0}^z x R+^l x PSD-blocks

with PSD blocks carried in scaled vectorized (svec) form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from thetatensor.groebner import (
    GroebnerBasis,
    Monomial,
    MonomialBasis,
    Polynomial,
    monomial_basis,
    reduce_poly,
)
from thetatensor.tensors import Shape, Tensor, bar_wedge_vee, wedge_vee

_SQRT2 = math.sqrt(2.0)


# --- scaled symmetric vectorization -----------------------------------------

def svec_len(dim: int) -> int:
    return dim * (dim + 1) // 2


def svec_pos(i: int, j: int, dim: int) -> int:
    """Position of cell (i, j), i <= j, in row-wise upper-triangle order."""
    if i > j:
        i, j = j, i
    return i * dim - i * (i - 1) // 2 + (j - i)


def svec(S: np.ndarray) -> np.ndarray:
    """Upper triangle of a symmetric matrix, off-diagonals scaled by sqrt(2)."""
    dim = S.shape[0]
    out = np.empty(svec_len(dim))
    pos = 0
    for i in range(dim):
        out[pos] = S[i, i]
        pos += 1
        out[pos : pos + dim - i - 1] = S[i, i + 1 :] * _SQRT2
        pos += dim - i - 1
    return out


def unsvec(v: np.ndarray, dim: int) -> np.ndarray:
    S = np.empty((dim, dim))
    pos = 0
    for i in range(dim):
        S[i, i] = v[pos]
        pos += 1
        row = v[pos : pos + dim - i - 1] / _SQRT2
        S[i, i + 1 :] = row
        S[i + 1 :, i] = row
        pos += dim - i - 1
    return S


# --- conic problem container -------------------------------------------------

@dataclass
class PsdBlock:
    """Affine-in-x symmetric block: mat(b - A x) must be PSD."""

    dim: int
    a: sp.csr_matrix  # svec_len(dim) x n_vars
    b: np.ndarray     # svec_len(dim)


@dataclass
class ConicProblem:
    """Standard-form conic program over free decision variables."""

    n_vars: int
    objective: np.ndarray
    a_zero: sp.csr_matrix
    b_zero: np.ndarray
    a_nonneg: sp.csr_matrix
    b_nonneg: np.ndarray
    psd_blocks: list[PsdBlock] = field(default_factory=list)

    def validate(self) -> None:
        n = self.n_vars
        if self.objective.shape != (n,):
            raise ValueError("objective length mismatch")
        for a, b in [(self.a_zero, self.b_zero), (self.a_nonneg, self.b_nonneg)]:
            if a.shape[1] != n or a.shape[0] != b.shape[0]:
                raise ValueError("constraint block dimension mismatch")
        for blk in self.psd_blocks:
            want = svec_len(blk.dim)
            if blk.a.shape != (want, n) or blk.b.shape != (want,):
                raise ValueError("psd block dimension mismatch")

    @property
    def total_rows(self) -> int:
        return (
            self.a_zero.shape[0]
            + self.a_nonneg.shape[0]
            + sum(svec_len(blk.dim) for blk in self.psd_blocks)
        )

    def dump(self) -> str:
        """Debug text dump: sizes, objective, then triplets per section.

        Format: header ``conic <n_vars> <n_zero> <n_nonneg> <psd dims...>``,
        ``c <i> <value>`` lines, then per section (``zero``, ``nonneg``,
        ``psd<idx>``) triplet lines ``<row> <col> <value>`` and rhs lines
        ``b <row> <value>``.  Zero entries are omitted.
        """
        parts = [
            "conic {} {} {} {}".format(
                self.n_vars,
                self.a_zero.shape[0],
                self.a_nonneg.shape[0],
                " ".join(str(b.dim) for b in self.psd_blocks),
            ).rstrip()
        ]
        for i in np.nonzero(self.objective)[0]:
            parts.append(f"c {i} {self.objective[i]!r}")
        sections = [
            ("zero", self.a_zero, self.b_zero),
            ("nonneg", self.a_nonneg, self.b_nonneg),
        ]
        sections += [(f"psd{k}", blk.a, blk.b) for k, blk in enumerate(self.psd_blocks)]
        for name, a, b in sections:
            parts.append(name)
            coo = a.tocoo()
            for r, c, v in zip(coo.row, coo.col, coo.data):
                parts.append(f"{r} {c} {v!r}")
            for r in np.nonzero(b)[0]:
                parts.append(f"b {r} {b[r]!r}")
        return "\n".join(parts) + "\n"


def _csr(rows, cols, vals, shape) -> sp.csr_matrix:
    return sp.csr_matrix(sp.coo_matrix((vals, (rows, cols)), shape=shape, dtype=float))


# --- moment layouts -----------------------------------------------------------

Expansion = tuple[tuple[int, float], ...]


@dataclass
class MomentLayout:
    """Index structure of the truncated moment matrix on B_k."""

    G: GroebnerBasis
    k: int
    basis: MonomialBasis
    slots: dict[Monomial, int]
    slot_monomials: list[Monomial]
    cells: dict[tuple[int, int], Expansion]

    @property
    def shape(self) -> Shape:
        return self.G.shape

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n_slots(self) -> int:
        return len(self.slot_monomials)

    def cell(self, i: int, j: int) -> Expansion:
        return self.cells[(i, j) if i <= j else (j, i)]

    def variable_slot(self, a) -> int:
        return self.slots[Monomial.variable(tuple(a))]

    def constant_slot(self) -> int:
        return self.slots[Monomial.one()]

    def moment_matrix(self, y: np.ndarray) -> np.ndarray:
        """Dense moment matrix at a moment vector y."""
        dim = self.dim
        M = np.zeros((dim, dim))
        for (i, j), expansion in self.cells.items():
            val = sum(c * y[s] for s, c in expansion)
            M[i, j] = val
            M[j, i] = val
        return M


def build_moment_layout(G: GroebnerBasis, k: int) -> MomentLayout:
    """Reduce every product of two basis monomials to its normal form.

    Slots are assigned lazily in cell order, so the constant monomial
    (from the (1,1) cell) always lands in slot 0.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    basis = monomial_basis(G, k)
    mons = basis.monomials
    slots: dict[Monomial, int] = {}
    slot_monomials: list[Monomial] = []
    cells: dict[tuple[int, int], Expansion] = {}
    reduced: dict[Monomial, Polynomial] = {}
    for i, mi in enumerate(mons):
        for j in range(i, len(mons)):
            prod = mi * mons[j]
            nf = reduced.get(prod)
            if nf is None:
                nf = reduce_poly(Polynomial({prod: 1}), G)
                reduced[prod] = nf
            expansion = []
            for m in sorted(nf.terms, reverse=True):
                if m.degree > 2 * k:
                    raise AssertionError(
                        f"normal form of degree-{prod.degree} product exceeds 2k"
                    )
                slot = slots.get(m)
                if slot is None:
                    slot = len(slot_monomials)
                    slots[m] = slot
                    slot_monomials.append(m)
                expansion.append((slot, float(nf.terms[m])))
            cells[(i, j)] = tuple(expansion)
    return MomentLayout(G, k, basis, slots, slot_monomials, cells)


def theta1_closed_form(shape: Shape, p) -> MomentLayout:
    """The k=1 layout straight from wedge/vee combinatorics (p = 2 or inf).

    No polynomial division is involved: off-diagonal cells are identified
    with their (barred) reduced pair; diagonal cells collapse to the
    constant (p = inf), or tie the top diagonal cell to the constant
    minus the other squares (p = 2, the trace identity solved for the
    cell of the largest variable).  Agrees with ``build_moment_layout``
    on the same basis, which the tests cross-check.
    """
    if p not in (2, math.inf):
        raise ValueError("closed-form layout exists for p in {2, inf} only")
    from thetatensor.groebner import IdealSpec, build_groebner

    G = build_groebner(IdealSpec(shape, p))
    basis = monomial_basis(G, 1)
    mons = basis.monomials
    one = Monomial.one()
    a0 = tuple(1 for _ in shape.dims)

    slots: dict[Monomial, int] = {}
    slot_monomials: list[Monomial] = []

    def slot_of(m: Monomial) -> int:
        s = slots.get(m)
        if s is None:
            s = len(slot_monomials)
            slots[m] = s
            slot_monomials.append(m)
        return s

    cells: dict[tuple[int, int], Expansion] = {}
    pending_a0: tuple[int, int] | None = None
    for i, mi in enumerate(mons):
        for j in range(i, len(mons)):
            mj = mons[j]
            if mi == one and mj == one:
                cells[(i, j)] = ((slot_of(one), 1.0),)
                continue
            if mi == one:
                cells[(i, j)] = ((slot_of(mj), 1.0),)
                continue
            a = mi.indices()[0]
            b = mj.indices()[0]
            if a == b:
                if p == math.inf:
                    cells[(i, j)] = ((slot_of(one), 1.0),)
                elif a == a0:
                    pending_a0 = (i, j)  # filled once every square has a slot
                    cells[(i, j)] = ()
                else:
                    cells[(i, j)] = ((slot_of(Monomial(((a, 2),))), 1.0),)
                continue
            if p == math.inf:
                lo, hi = bar_wedge_vee(a, b, shape)
            else:
                lo, hi = wedge_vee(a, b)
            cells[(i, j)] = ((slot_of(Monomial.from_indices((lo, hi))), 1.0),)
    if p == 2 and pending_a0 is not None:
        expansion = [(slot_of(one), 1.0)]
        for a in shape.indices():
            if a != a0:
                expansion.append((slot_of(Monomial(((a, 2),))), -1.0))
        cells[pending_a0] = tuple(expansion)
    return MomentLayout(G, 1, basis, slots, slot_monomials, cells)


# --- SDP assembly --------------------------------------------------------------

def _psd_block_from_layout(layout: MomentLayout, n_vars: int) -> PsdBlock:
    """PSD block enforcing positivity of the moment matrix over the slots.

    Cached on the layout: reusing the same sparse block lets the solver
    recognize repeated structure and skip refactorization.
    """
    cached = getattr(layout, "_psd_block", None)
    if cached is not None:
        return cached
    dim = layout.dim
    rows, cols, vals = [], [], []
    for (i, j), expansion in layout.cells.items():
        r = svec_pos(i, j, dim)
        scale = 1.0 if i == j else _SQRT2
        for slot, c in expansion:
            rows.append(r)
            cols.append(slot)
            vals.append(-c * scale)
    a = _csr(rows, cols, vals, (svec_len(dim), n_vars))
    block = PsdBlock(dim, a, np.zeros(svec_len(dim)))
    layout._psd_block = block
    return block


def _norm_pin_rows(layout: MomentLayout) -> sp.csr_matrix:
    """Equality pattern pinning the degree-1 slots, shared across tensors."""
    cached = getattr(layout, "_norm_pins", None)
    if cached is not None:
        return cached
    n = layout.n_slots
    rows, cols, vals = [], [], []
    for r, a in enumerate(layout.shape.indices()):
        rows.append(r)
        cols.append(layout.variable_slot(a))
        vals.append(1.0)
    a_zero = _csr(rows, cols, vals, (len(rows), n))
    layout._norm_pins = a_zero
    return a_zero


def assemble_norm_sdp(layout: MomentLayout, x: Tensor) -> ConicProblem:
    """Gauge program: min l(1) with degree-1 moments pinned to x.

    This is the homogenized form: the constant moment is free and
    minimized, the section at l(1) = gauge(x) touches the theta body.
    """
    if x.shape != layout.shape:
        raise ValueError(
            f"tensor shape {x.shape.dims} does not match layout {layout.shape.dims}"
        )
    n = layout.n_slots
    c = np.zeros(n)
    c[layout.constant_slot()] = 1.0
    rhs = np.array([x[a] for a in layout.shape.indices()])
    prob = ConicProblem(
        n_vars=n,
        objective=c,
        a_zero=_norm_pin_rows(layout),
        b_zero=rhs,
        a_nonneg=sp.csr_matrix((0, n)),
        b_nonneg=np.zeros(0),
        psd_blocks=[_psd_block_from_layout(layout, n)],
    )
    prob.validate()
    return prob


def assemble_recovery_sdp(
    layout: MomentLayout, measurements
) -> ConicProblem:
    """Gauge minimization with free degree-1 moments tied by measurements."""
    measurements = list(measurements)
    if not measurements:
        raise ValueError("need at least one measurement")
    for A, _ in measurements:
        if A.shape != layout.shape:
            raise ValueError("measurement tensor shape mismatch")
    n = layout.n_slots
    c = np.zeros(n)
    c[layout.constant_slot()] = 1.0
    var_slots = [layout.variable_slot(a) for a in layout.shape.indices()]
    rows, cols, vals, rhs = [], [], [], []
    for r, (A, b) in enumerate(measurements):
        for pos, slot in enumerate(var_slots):
            v = A.values[pos]
            if v != 0.0:
                rows.append(r)
                cols.append(slot)
                vals.append(float(v))
        rhs.append(float(b))
    a_zero = _csr(rows, cols, vals, (len(rhs), n))
    prob = ConicProblem(
        n_vars=n,
        objective=c,
        a_zero=a_zero,
        b_zero=np.asarray(rhs),
        a_nonneg=sp.csr_matrix((0, n)),
        b_nonneg=np.zeros(0),
        psd_blocks=[_psd_block_from_layout(layout, n)],
    )
    prob.validate()
    return prob


def sos_constraint_rows(layout: MomentLayout):
    """For each standard monomial, the cells feeding its Gram constraint.

    Returns gamma -> [(i, j, coeff)] with i <= j, where coeff already
    carries the symmetric double count of off-diagonal cells.
    """
    out: dict[Monomial, list[tuple[int, int, float]]] = {
        m: [] for m in layout.slot_monomials
    }
    for (i, j), expansion in layout.cells.items():
        mult = 1.0 if i == j else 2.0
        for slot, c in expansion:
            out[layout.slot_monomials[slot]].append((i, j, mult * c))
    return out


def assemble_sos_sdp(f: Polynomial, G: GroebnerBasis, k: int) -> ConicProblem:
    """Feasibility program for: f is congruent to a k-sos modulo G.

    Decision variables are the svec of the Gram matrix Q on B_k.  One
    equality per reachable standard monomial matches the reduction of
    [x^B]' Q [x^B] against the normal form of f.
    """
    fbar = reduce_poly(f, G)
    if fbar.degree > 2 * k:
        raise ValueError(f"normal form has degree {fbar.degree} > 2k = {2 * k}")
    layout = build_moment_layout(G, k)
    for m in fbar.terms:
        if m not in layout.slots:
            raise ValueError(f"monomial {m} not reachable from the degree-{k} basis")
    dim = layout.dim
    n = svec_len(dim)
    rows, cols, vals, rhs = [], [], [], []
    by_gamma = sos_constraint_rows(layout)
    for r, gamma in enumerate(layout.slot_monomials):
        for i, j, coeff in by_gamma[gamma]:
            # q_svec carries sqrt(2) Q_ij off the diagonal
            scale = 1.0 if i == j else 1.0 / _SQRT2
            rows.append(r)
            cols.append(svec_pos(i, j, dim))
            vals.append(coeff * scale)
        rhs.append(float(fbar.terms.get(gamma, 0)))
    a_zero = _csr(rows, cols, vals, (len(rhs), n))
    psd = PsdBlock(dim, sp.csr_matrix(-sp.eye(n, format="coo")), np.zeros(n))
    prob = ConicProblem(
        n_vars=n,
        objective=np.zeros(n),
        a_zero=a_zero,
        b_zero=np.asarray(rhs),
        a_nonneg=sp.csr_matrix((0, n)),
        b_nonneg=np.zeros(0),
        psd_blocks=[psd],
    )
    prob.validate()
    return prob
