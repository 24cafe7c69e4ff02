"""Theta-norm evaluation, tensor recovery, sos certificates, experiments.

The norm of a tensor is the optimal value of the moment-matrix gauge
program; recovery minimizes that gauge subject to linear measurement
equalities; certification solves the Gram feasibility program and
returns a verified PSD witness.  Batch experiments derive per-trial
seeds from a master seed so trials are reproducible independently and
can run in parallel.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from thetatensor.groebner import (
    GroebnerBasis,
    IdealSpec,
    Monomial,
    Polynomial,
    build_groebner,
    reduce_poly,
)
from thetatensor.moment import (
    MomentLayout,
    assemble_norm_sdp,
    assemble_recovery_sdp,
    assemble_sos_sdp,
    build_moment_layout,
    svec_len,
    unsvec,
)
from thetatensor.solver import (
    INFEASIBLE,
    OPTIMAL,
    ConicSolution,
    SolverSettings,
    solve,
)
from thetatensor.tensors import Shape, Tensor, derive_seed, random_low_rank

SUCCESS_THRESHOLD = 1e-3

_NORM_PS = (1, 2, math.inf)


class SolverFailure(RuntimeError):
    """A solve did not reach optimality; carries the solution diagnostics."""

    def __init__(self, message: str, solution: ConicSolution):
        super().__init__(f"{message} (status={solution.status}, "
                         f"iterations={solution.iterations})")
        self.solution = solution


_GROEBNER_CACHE: dict[tuple, GroebnerBasis] = {}
_LAYOUT_CACHE: dict[tuple, MomentLayout] = {}


def cached_groebner(shape: Shape, p) -> GroebnerBasis:
    key = (shape.dims, p)
    G = _GROEBNER_CACHE.get(key)
    if G is None:
        G = build_groebner(IdealSpec(shape, p))
        _GROEBNER_CACHE[key] = G
    return G


def cached_layout(shape: Shape, p, k: int) -> MomentLayout:
    key = (shape.dims, p, k)
    lay = _LAYOUT_CACHE.get(key)
    if lay is None:
        lay = build_moment_layout(cached_groebner(shape, p), k)
        _LAYOUT_CACHE[key] = lay
    return lay


def _check_norm_args(p, k: int) -> None:
    if k < 1:
        raise ValueError("k must be >= 1")
    if p == math.inf or p == 1 or p == 2:
        return
    if isinstance(p, float) and p.is_integer():
        p = int(p)
    if not isinstance(p, int) or p < 2 or p % 2:
        raise ValueError(f"p must be 1, 2, an even integer >= 4, or inf; got {p!r}")
    if 2 * k < p:
        raise ValueError(f"p = {p} needs 2k >= p, got k = {k}")


def theta_norm(
    x: Tensor, p, k: int = 1, settings: SolverSettings | None = None
) -> float:
    """Gauge of x with respect to the theta-k body of the p-norm ideal."""
    _check_norm_args(p, k)
    layout = cached_layout(x.shape, p, k)
    sol = solve(assemble_norm_sdp(layout, x), settings)
    if not sol.optimal:
        raise SolverFailure("theta-norm SDP did not converge", sol)
    return float(sol.objective)


@dataclass
class MeasurementEnsemble:
    """Linear measurements <A_i, x> = b_i with generation metadata."""

    measurements: list[tuple[Tensor, float]]
    shape: Shape
    seed: int | None = None
    ground_truth: Tensor | None = None

    def __post_init__(self):
        if not self.measurements:
            raise ValueError("ensemble needs at least one measurement")
        for A, b in self.measurements:
            if A.shape != self.shape:
                raise ValueError("measurement shape mismatch")
            if not np.isfinite(b):
                raise ValueError("measurement value must be finite")

    @property
    def m(self) -> int:
        return len(self.measurements)

    @classmethod
    def gaussian(cls, x: Tensor, m: int, seed: int) -> "MeasurementEnsemble":
        """m measurement tensors with i.i.d. standard normal entries."""
        if m < 1:
            raise ValueError("m must be >= 1")
        rng = np.random.default_rng(int(seed))
        pairs = []
        for _ in range(m):
            A = Tensor(x.shape, rng.standard_normal(x.shape.size))
            pairs.append((A, A.dot(x)))
        return cls(pairs, x.shape, seed=int(seed), ground_truth=x)


@dataclass
class RecoveryResult:
    recovered: Tensor
    norm_value: float
    rel_error: float | None
    success: bool | None
    solution: ConicSolution

    @property
    def iterations(self) -> int:
        return self.solution.iterations


def recover(
    ensemble: MeasurementEnsemble,
    p,
    k: int = 1,
    settings: SolverSettings | None = None,
) -> RecoveryResult:
    """Minimize the theta-k gauge over the measurement-consistent affine set."""
    _check_norm_args(p, k)
    layout = cached_layout(ensemble.shape, p, k)
    sol = solve(assemble_recovery_sdp(layout, ensemble.measurements), settings)
    if not sol.optimal:
        raise SolverFailure("recovery SDP did not converge", sol)
    vals = np.array(
        [sol.x[layout.variable_slot(a)] for a in ensemble.shape.indices()]
    )
    recovered = Tensor(ensemble.shape, vals)
    rel_error = None
    success = None
    truth = ensemble.ground_truth
    if truth is not None and truth.norm() > 0:
        rel_error = float((recovered - truth).norm() / truth.norm())
        success = rel_error < SUCCESS_THRESHOLD
    return RecoveryResult(recovered, float(sol.objective), rel_error, success, sol)


@dataclass
class GramWitness:
    """PSD Gram matrix over the degree-k basis certifying a k-sos form."""

    basis: tuple[Monomial, ...]
    Q: np.ndarray
    reconstruction_error: float

    def reconstruct(self, G: GroebnerBasis) -> Polynomial:
        """[x^B]' Q [x^B] reduced modulo G."""
        terms: dict[Monomial, float] = {}
        dim = len(self.basis)
        for i in range(dim):
            for j in range(i, dim):
                c = (1.0 if i == j else 2.0) * float(self.Q[i, j])
                if c == 0.0:
                    continue
                m = self.basis[i] * self.basis[j]
                terms[m] = terms.get(m, 0.0) + c
        return reduce_poly(Polynomial(terms), G)


@dataclass
class CertifyResult:
    status: str  # feasible | infeasible | undecided
    witness: GramWitness | None
    solution: ConicSolution

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def certify_sos(
    f: Polynomial,
    shape: Shape,
    p,
    k: int = 1,
    settings: SolverSettings | None = None,
    witness_tol: float = 1e-6,
) -> CertifyResult:
    """Decide whether f is congruent to a k-sos modulo the p-norm ideal.

    A feasible answer carries a PSD Gram witness whose reconstruction,
    reduced modulo the basis, matches the normal form of f within
    ``witness_tol`` coefficientwise; a witness that fails that check
    downgrades the answer to undecided.
    """
    G = cached_groebner(shape, p)
    prob = assemble_sos_sdp(f, G, k)
    sol = solve(prob, settings)
    if sol.status == INFEASIBLE:
        return CertifyResult("infeasible", None, sol)
    if sol.status != OPTIMAL:
        return CertifyResult("undecided", None, sol)
    layout = cached_layout(shape, p, k)
    dim = layout.dim
    # the slack copy of the Gram block is exactly PSD by construction
    Q = unsvec(sol.s[-svec_len(dim):], dim)
    witness = GramWitness(layout.basis.monomials, Q, 0.0)
    recon = witness.reconstruct(G)
    fbar = reduce_poly(f, G)
    dev = 0.0
    for m in set(recon.terms) | set(fbar.terms):
        dev = max(dev, abs(float(recon.terms.get(m, 0.0)) - float(fbar.terms.get(m, 0.0))))
    witness.reconstruction_error = dev
    if dev > witness_tol:
        return CertifyResult("undecided", witness, sol)
    return CertifyResult("feasible", witness, sol)


# --- batch experiments ---------------------------------------------------------

CSV_COLUMNS = (
    "trial,p,k,shape,rank,kind,m,success,rel_error,norm_value,iters,time_ms"
)


@dataclass
class ExperimentConfig:
    """Recovery experiment: sweep fixed m values or search minimal m."""

    shape: Shape
    rank: int
    kind: str = "gaussian"          # gaussian | signed
    p_list: tuple = (2, math.inf)
    k: int = 1
    trials: int = 1
    seed: int = 0
    mode: str = "search"            # search | sweep
    m_values: tuple[int, ...] = ()  # sweep mode only
    vary_rank: bool = False         # draw rank uniformly from 1..rank per trial
    workers: int = 1
    settings: SolverSettings | None = None

    def __post_init__(self):
        if not isinstance(self.shape, Shape):
            self.shape = Shape(tuple(self.shape))
        if self.mode not in ("search", "sweep"):
            raise ValueError("mode must be 'search' or 'sweep'")
        if self.mode == "sweep" and not self.m_values:
            raise ValueError("sweep mode needs m_values")
        if self.kind not in ("gaussian", "signed"):
            raise ValueError("kind must be 'gaussian' or 'signed'")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.trials < 0:
            raise ValueError("trials must be >= 0")


@dataclass
class ExperimentRow:
    trial: int
    p: object
    k: int
    shape: Shape
    rank: int
    kind: str
    m: int
    success: bool
    rel_error: float
    norm_value: float
    iters: int
    time_ms: float


@dataclass
class ExperimentResult:
    rows: list[ExperimentRow]
    minimal_m: dict[tuple[int, object], int] = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [CSV_COLUMNS]
        for r in self.rows:
            lines.append(
                ",".join(
                    [
                        str(r.trial),
                        format_p(r.p),
                        str(r.k),
                        str(r.shape),
                        str(r.rank),
                        r.kind,
                        str(r.m),
                        "1" if r.success else "0",
                        format_float(r.rel_error),
                        format_float(r.norm_value),
                        str(r.iters),
                        format_float(r.time_ms),
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def format_p(p) -> str:
    return "inf" if p == math.inf else str(int(p))


def format_float(v: float) -> str:
    return "%.10g" % float(v)


def _trial_rank(cfg: ExperimentConfig, trial: int) -> int:
    if not cfg.vary_rank or cfg.rank == 1:
        return cfg.rank
    rng = np.random.default_rng(derive_seed(cfg.seed, trial, 10_001))
    return int(rng.integers(1, cfg.rank + 1))


def _trial_truth(cfg: ExperimentConfig, trial: int, rank: int) -> Tensor:
    return random_low_rank(
        cfg.shape, rank, cfg.kind, derive_seed(cfg.seed, trial, 10_000)
    )


def _probe(
    cfg: ExperimentConfig, trial: int, truth: Tensor, rank: int, p, m: int
) -> ExperimentRow:
    ens = MeasurementEnsemble.gaussian(truth, m, derive_seed(cfg.seed, trial, m))
    t0 = time.perf_counter()
    res = recover(ens, p, cfg.k, cfg.settings)
    dt = (time.perf_counter() - t0) * 1000.0
    return ExperimentRow(
        trial=trial,
        p=p,
        k=cfg.k,
        shape=cfg.shape,
        rank=rank,
        kind=cfg.kind,
        m=m,
        success=bool(res.success),
        rel_error=res.rel_error if res.rel_error is not None else float("nan"),
        norm_value=res.norm_value,
        iters=res.iterations,
        time_ms=dt,
    )


def _run_trial(cfg: ExperimentConfig, trial: int):
    rank = _trial_rank(cfg, trial)
    truth = _trial_truth(cfg, trial, rank)
    rows: list[ExperimentRow] = []
    minimal: dict[tuple[int, object], int] = {}
    N = cfg.shape.size
    for p in cfg.p_list:
        if cfg.mode == "sweep":
            for m in cfg.m_values:
                rows.append(_probe(cfg, trial, truth, rank, p, m))
            continue
        # exponential bracket from below, then bisection on [fail, success]
        lo, hi = 0, min(2, N)
        while True:
            row = _probe(cfg, trial, truth, rank, p, hi)
            rows.append(row)
            if row.success:
                break
            lo = hi
            if hi >= N:
                # a determined system recovers exactly; an honest failure
                # row at m = N still terminates the bracket
                break
            hi = min(2 * hi, N)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            row = _probe(cfg, trial, truth, rank, p, mid)
            rows.append(row)
            if row.success:
                hi = mid
            else:
                lo = mid
        minimal[(trial, p)] = hi
    return rows, minimal


def run_recovery_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """One row per solve; in search mode also the per-trial minimal m."""
    result = ExperimentResult(rows=[])
    if cfg.trials == 0:
        return result
    trials = list(range(cfg.trials))
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(lambda t: _run_trial(cfg, t), trials))
    else:
        outcomes = [_run_trial(cfg, t) for t in trials]
    for rows, minimal in outcomes:
        result.rows.extend(rows)
        result.minimal_m.update(minimal)
    return result


def parse_experiment_csv(text: str) -> list[dict]:
    """Round-trip reader for the experiment CSV schema."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != CSV_COLUMNS:
        raise ValueError("missing or wrong CSV header")
    cols = CSV_COLUMNS.split(",")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(cols):
            raise ValueError(f"bad CSV row: {ln!r}")
        rec = dict(zip(cols, parts))
        rec["trial"] = int(rec["trial"])
        rec["p"] = math.inf if rec["p"] == "inf" else int(rec["p"])
        rec["k"] = int(rec["k"])
        rec["rank"] = int(rec["rank"])
        rec["m"] = int(rec["m"])
        rec["success"] = rec["success"] == "1"
        for key in ("rel_error", "norm_value", "time_ms"):
            rec[key] = float(rec[key])
        rec["iters"] = int(rec["iters"])
        out.append(rec)
    return out
