"""Normal-cone slice gauge and the Gaussian-width measurement estimate.

At the canonical rank-1 tensor e_(1,...,1), membership of a direction in
the normal cone of the theta-1 body of the 2-norm ideal is a 1-sos
condition; coordinates one step away from the anchor are forced to zero,
and the remaining block is governed by a gauge function whose value is a
small SDP.  Averaging the squared gauge over standard normal draws gives
the upper estimate  |I0| + 1 + E[gamma^2]  for the squared width of the
descent cone, i.e. for the sufficient number of Gaussian measurements up
to an absolute constant.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from thetatensor.groebner import Monomial
from thetatensor.moment import (
    ConicProblem,
    PsdBlock,
    sos_constraint_rows,
    svec_len,
    svec_pos,
)
from thetatensor.recovery import SolverFailure, cached_layout
from thetatensor.solver import OPTIMAL, SolverSettings, solve
from thetatensor.tensors import MultiIndex, Shape, derive_seed

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ConeIndexSets:
    """Partition of [n]: anchor, its one-step neighbours I0, and the rest."""

    shape: Shape
    anchor: MultiIndex
    i0: tuple[MultiIndex, ...]
    i_rest: tuple[MultiIndex, ...]

    @property
    def n_i0(self) -> int:
        return len(self.i0)

    @property
    def n_rest(self) -> int:
        return len(self.i_rest)


def index_sets(shape: Shape) -> ConeIndexSets:
    """anchor = (1,...,1); I0 = indices differing from it in one mode."""
    anchor = tuple(1 for _ in shape.dims)
    i0, rest = [], []
    for a in shape.indices():
        changed = sum(1 for c in a if c != 1)
        if changed == 1:
            i0.append(a)
        elif changed > 1:
            rest.append(a)
    return ConeIndexSets(shape, anchor, tuple(i0), tuple(rest))


def _gauge_problem(shape: Shape) -> tuple[ConicProblem, ConeIndexSets, list[int]]:
    """Template SDP: min r s.t. r(1 + x_anchor) + <g, x_I> is 1-sos mod I_2.

    Variables are svec(Q) plus r (last); the g entries enter only the
    right-hand side, so the template is reused across samples.  Returns
    the row positions carrying the I-block coefficients.
    """
    sets = index_sets(shape)
    layout = cached_layout(shape, 2, 1)
    dim = layout.dim
    nq = svec_len(dim)
    n = nq + 1
    by_gamma = sos_constraint_rows(layout)
    one = layout.slot_monomials[layout.constant_slot()]
    rows, cols, vals, rhs = [], [], [], []
    g_rows: dict[MultiIndex, int] = {}
    anchor_var = Monomial.variable(sets.anchor)
    for r, gamma in enumerate(layout.slot_monomials):
        for i, j, coeff in by_gamma[gamma]:
            scale = 1.0 if i == j else 1.0 / _SQRT2
            rows.append(r)
            cols.append(svec_pos(i, j, dim))
            vals.append(coeff * scale)
        if gamma == one or gamma == anchor_var:
            rows.append(r)
            cols.append(nq)
            vals.append(-1.0)
            rhs.append(0.0)
        elif gamma.degree == 1:
            b = gamma.indices()[0]
            if b in sets.i0:
                rhs.append(0.0)
            else:
                g_rows[b] = r
                rhs.append(0.0)  # overwritten per sample
        else:
            rhs.append(0.0)
    a_zero = sp.csr_matrix(
        sp.coo_matrix((vals, (rows, cols)), shape=(len(rhs), n), dtype=float)
    )
    c = np.zeros(n)
    c[nq] = 1.0
    psd = PsdBlock(
        dim,
        sp.csr_matrix(sp.hstack([-sp.eye(nq, format="coo"), sp.coo_matrix((nq, 1))])),
        np.zeros(nq),
    )
    prob = ConicProblem(
        n_vars=n,
        objective=c,
        a_zero=a_zero,
        b_zero=np.asarray(rhs),
        a_nonneg=sp.csr_matrix((0, n)),
        b_nonneg=np.zeros(0),
        psd_blocks=[psd],
    )
    prob.validate()
    row_of_b = [g_rows[b] for b in sets.i_rest]
    return prob, sets, row_of_b


_TEMPLATE_CACHE: dict[tuple[int, ...], tuple[ConicProblem, ConeIndexSets, list[int]]] = {}


def _cached_template(shape: Shape):
    key = shape.dims
    if key not in _TEMPLATE_CACHE:
        _TEMPLATE_CACHE[key] = _gauge_problem(shape)
    return _TEMPLATE_CACHE[key]


# the gauge SDPs sit on degenerate faces; heavier row weighting starts the
# splitting iteration in the regime the adaptive rescaling would find anyway
_GAUGE_SETTINGS = SolverSettings(rho=10.0)


def gauge_NI(gI: np.ndarray, shape: Shape, settings: SolverSettings | None = None) -> float:
    """Minimal r >= 0 putting r(1 + x_anchor) + <gI, x_I> in the 1-sos cone.

    gI is indexed by ``index_sets(shape).i_rest`` in lexicographic order.
    Finite for every input: the cone slice is full dimensional with the
    origin inside.
    """
    if settings is None:
        settings = _GAUGE_SETTINGS
    template, sets, row_of_b = _cached_template(shape)
    gI = np.asarray(gI, dtype=float).reshape(-1)
    if gI.size != sets.n_rest:
        raise ValueError(f"gI has {gI.size} entries, expected {sets.n_rest}")
    b = template.b_zero.copy()
    for val, row in zip(gI, row_of_b):
        b[row] = val
    prob = ConicProblem(
        n_vars=template.n_vars,
        objective=template.objective,
        a_zero=template.a_zero,
        b_zero=b,
        a_nonneg=template.a_nonneg,
        b_nonneg=template.b_nonneg,
        psd_blocks=template.psd_blocks,
    )
    sol = solve(prob, settings)
    if sol.status != OPTIMAL:
        raise SolverFailure("normal-cone gauge SDP undecided", sol)
    return float(sol.objective)


@dataclass
class WidthEstimate:
    """Monte-Carlo aggregate of gamma^2 and the measurement bound."""

    shape: Shape
    samples: int
    gamma_sq: np.ndarray
    n_i0: int

    @property
    def mean_gamma_sq(self) -> float:
        return float(np.mean(self.gamma_sq))

    @property
    def stderr_gamma_sq(self) -> float:
        if self.samples < 2:
            return 0.0
        return float(np.std(self.gamma_sq, ddof=1) / math.sqrt(self.samples))

    @property
    def bound_mean(self) -> float:
        return self.n_i0 + 1.0 + self.mean_gamma_sq

    def sample_bounds(self) -> np.ndarray:
        return self.n_i0 + 1.0 + self.gamma_sq

    def to_csv(self) -> str:
        """Rows shape,sample,gamma_sq,bound plus mean and stderr rows."""
        lines = ["shape,sample,gamma_sq,bound"]
        name = str(self.shape)
        for i, (g2, bd) in enumerate(zip(self.gamma_sq, self.sample_bounds())):
            lines.append(f"{name},{i},{g2:.10g},{bd:.10g}")
        lines.append(f"{name},mean,{self.mean_gamma_sq:.10g},{self.bound_mean:.10g}")
        lines.append(
            f"{name},stderr,{self.stderr_gamma_sq:.10g},{self.stderr_gamma_sq:.10g}"
        )
        return "\n".join(lines) + "\n"


def estimate_width_bound(
    shape: Shape,
    samples: int,
    seed: int = 0,
    settings: SolverSettings | None = None,
    workers: int = 1,
) -> WidthEstimate:
    """Average gamma^2 over standard normal draws on the I block."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not isinstance(shape, Shape):
        shape = Shape(tuple(shape))
    sets = index_sets(shape)

    def one_sample(i: int) -> float:
        rng = np.random.default_rng(derive_seed(seed, i))
        gI = rng.standard_normal(sets.n_rest)
        return gauge_NI(gI, shape, settings) ** 2

    idx = list(range(samples))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(one_sample, idx))
    else:
        vals = [one_sample(i) for i in idx]
    return WidthEstimate(shape, samples, np.asarray(vals), sets.n_i0)
