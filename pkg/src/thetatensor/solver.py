"""First-order operator-splitting solver for standard-form conic programs.

ADMM on the homogeneous self-dual embedding: each iteration solves one
quasi-definite linear system (factored once per problem) and projects
onto the cones.  Supports the zero cone, the nonnegative orthant and PSD
blocks in svec form; detects primal/dual infeasibility through
certificate residuals of the embedding.  Fully deterministic.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from thetatensor.moment import ConicProblem, svec, svec_len, unsvec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible_certificate"
UNBOUNDED = "unbounded_certificate"
MAX_ITERS = "max_iters"


@dataclass(frozen=True)
class SolverSettings:
    max_iterations: int = 100_000
    eps_primal: float = 1e-6
    eps_dual: float = 1e-6
    eps_gap: float = 1e-6
    alpha: float = 1.5          # over-relaxation, in (0, 2)
    rho: float = 1.0            # uniform row scaling of the cone constraints
    eps_infeasible: float = 1e-7
    check_every: int = 10
    aa_memory: int = 10         # Anderson acceleration history; 0 disables
    aa_interval: int = 10       # try an accelerated jump every this many steps
    adapt_rho: bool = True      # residual-balancing rho updates (refactorize)
    max_rho_updates: int = 15

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise ValueError("alpha must be in (0, 2)")
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if min(self.eps_primal, self.eps_dual, self.eps_gap) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class ConicSolution:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    objective: float
    status: str
    residual_primal: float
    residual_dual: float
    residual_gap: float
    iterations: int

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def project_psd(S: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Euclidean projection onto the PSD cone by eigenvalue clipping."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("input must be a square matrix")
    skew = np.abs(S - S.T).max() if S.size else 0.0
    if skew > tol * max(1.0, np.abs(S).max()):
        raise ValueError(f"matrix is not symmetric (deviation {skew:.3e})")
    return _psd_clip(0.5 * (S + S.T))


def _psd_clip(S: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(S)
    if w[0] >= 0.0:
        return S
    w = np.maximum(w, 0.0)
    return (V * w) @ V.T


class _Cones:
    """Row partition [zero | nonneg | psd blocks] with dual-cone projection."""

    def __init__(self, n_zero: int, n_nonneg: int, psd_dims: list[int]):
        self.n_zero = n_zero
        self.n_nonneg = n_nonneg
        self.psd_dims = psd_dims
        self.psd_slices = []
        start = n_zero + n_nonneg
        for d in psd_dims:
            ln = svec_len(d)
            self.psd_slices.append((slice(start, start + ln), d))
            start += ln
        self.total = start

    def project_dual(self, y: np.ndarray) -> np.ndarray:
        """Projection onto K* = R^z x R+^l x PSD (PSD is self-dual)."""
        out = y.copy()
        z, l = self.n_zero, self.n_nonneg
        if l:
            np.maximum(out[z : z + l], 0.0, out=out[z : z + l])
        for sl, d in self.psd_slices:
            out[sl] = svec(_psd_clip(unsvec(out[sl], d)))
        return out


def _stack(problem: ConicProblem) -> tuple[sp.csr_matrix, np.ndarray, _Cones]:
    blocks = [problem.a_zero, problem.a_nonneg] + [p.a for p in problem.psd_blocks]
    rhs = [problem.b_zero, problem.b_nonneg] + [p.b for p in problem.psd_blocks]
    A = sp.vstack([b.tocsr() for b in blocks], format="csr")
    b = np.concatenate(rhs) if rhs else np.zeros(0)
    cones = _Cones(
        problem.a_zero.shape[0],
        problem.a_nonneg.shape[0],
        [p.dim for p in problem.psd_blocks],
    )
    if cones.total != A.shape[0]:
        raise ValueError("cone sizes inconsistent with constraint rows")
    return A, b, cones


def _equilibrate(A: sp.csr_matrix, cones: _Cones, passes: int = 3):
    """Ruiz row/column scaling; PSD block rows share one scale factor.

    Uniform scaling within a PSD block maps the block's cone to itself, so
    the scaled problem is an exact reparameterization.
    """
    m, n = A.shape
    d = np.ones(m)
    e = np.ones(n)
    work = A.copy().tocsr()
    for _ in range(passes):
        absw = abs(work)
        row_max = absw.max(axis=1).toarray().ravel()
        for sl, _dim in cones.psd_slices:
            blk = row_max[sl]
            row_max[sl] = blk.max() if blk.size else 1.0
        row_max[row_max == 0.0] = 1.0
        dr = 1.0 / np.sqrt(row_max)
        col_max = absw.max(axis=0).toarray().ravel()
        col_max[col_max == 0.0] = 1.0
        de = 1.0 / np.sqrt(col_max)
        work = sp.diags(dr) @ work @ sp.diags(de)
        d *= dr
        e *= de
    return work.tocsr(), d, e


class _KktSolver:
    """Factorization of (I + A'A); solves M z = h for M = [[I, A'], [-A, I]]."""

    def __init__(self, A: sp.csr_matrix):
        self.A = A
        n = A.shape[1]
        gram = (A.T @ A).tocsc() + sp.identity(n, format="csc")
        self.factor = spla.splu(gram.tocsc())

    def solve(self, hx: np.ndarray, hy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        zx = self.factor.solve(hx - self.A.T @ hy)
        zy = self.A @ zx + hy
        return zx, zy


def _identity_block_cols(problem: ConicProblem) -> np.ndarray | None:
    """Columns x_j with s_psd = x_j for the single PSD block, if that holds.

    Gram-parameterized programs (sos membership, normal-cone gauges) carry
    the PSD matrix itself among the variables; their polish step exploits
    this.  Returns None when the pattern does not apply.
    """
    if len(problem.psd_blocks) != 1 or problem.a_nonneg.shape[0] != 0:
        return None
    blk = problem.psd_blocks[0]
    if np.any(blk.b != 0.0):
        return None
    a = blk.a.tocoo()
    L = svec_len(blk.dim)
    if a.nnz != L:
        return None
    cols = np.full(L, -1, dtype=np.intp)
    for r_i, c_i, v_i in zip(a.row, a.col, a.data):
        if v_i != -1.0 or cols[r_i] != -1:
            return None
        cols[r_i] = c_i
    if np.any(cols < 0) or len(set(cols.tolist())) != L:
        return None
    return cols


class _FacePolisher:
    """Finish nearly-converged Gram-form iterates on their active face.

    Splitting methods crawl when strict complementarity fails; fixing the
    face detected from the current PSD iterate turns the KKT system into
    two small linear solves.  The polished point is accepted only if its
    honestly recomputed residuals meet the tolerances.
    """

    def __init__(self, problem: ConicProblem, A, b, c, cols: np.ndarray):
        self.A = A
        self.b = b
        self.c = c
        self.dim = problem.psd_blocks[0].dim
        self.cols = cols
        n = A.shape[1]
        self.m_zero = problem.a_zero.shape[0]
        self.a_zero = problem.a_zero.tocsc()
        tail_mask = np.ones(n, dtype=bool)
        tail_mask[cols] = False
        self.tail = np.nonzero(tail_mask)[0]
        self.az_q = self.a_zero[:, cols]
        self.az_tail = self.a_zero[:, self.tail].toarray()
        self.norm_b = np.linalg.norm(b)
        self.norm_c = np.linalg.norm(c)

    def _face_basis(self, rank: int, V: np.ndarray) -> np.ndarray:
        """Columns svec(V B_ij V') over the symmetric basis of the face."""
        dim, r = self.dim, rank
        out = np.empty((svec_len(dim), r * (r + 1) // 2))
        pos = 0
        for i in range(r):
            for j in range(i, r):
                B = np.outer(V[:, i], V[:, j])
                if i != j:
                    B = B + B.T
                out[:, pos] = svec(B)
                pos += 1
        return out

    def attempt(self, x, y, eps_p, eps_d, eps_g):
        q = x[self.cols]
        S = unsvec(q, self.dim)
        S = 0.5 * (S + S.T)
        w, V = np.linalg.eigh(S)
        scale = max(float(w.max()), 1e-12)
        for frac in (1e-2, 1e-4):
            keep = w > frac * scale
            rank = int(keep.sum())
            if rank == 0 or rank == self.dim:
                continue
            got = self._attempt_rank(x, y, V[:, keep], eps_p, eps_d, eps_g)
            if got is not None:
                return got
        return None

    def _attempt_rank(self, x, y, Vp, eps_p, eps_d, eps_g):
        A, b, c = self.A, self.b, self.c
        n = A.shape[1]
        mz = self.m_zero
        L = svec_len(self.dim)
        rank = Vp.shape[1]
        E = self._face_basis(rank, Vp)
        G = np.hstack([self.az_q @ E, self.az_tail])
        rhs = self.b[:mz]
        sol, *_ = np.linalg.lstsq(G, rhs, rcond=None)
        mvec, tail_vals = sol[: E.shape[1]], sol[E.shape[1] :]
        M = np.zeros((rank, rank))
        pos = 0
        for i in range(rank):
            for j in range(i, rank):
                M[i, j] = M[j, i] = mvec[pos]
                pos += 1
        wM, VM = np.linalg.eigh(M)
        if wM[0] < -1e-7 * max(1.0, wM[-1] if rank else 1.0):
            return None
        M = (VM * np.maximum(wM, 0.0)) @ VM.T
        S_pol = Vp @ M @ Vp.T
        x_pol = np.zeros(n)
        x_pol[self.cols] = svec(S_pol)
        x_pol[self.tail] = tail_vals
        s_pol = np.zeros(A.shape[0])
        s_pol[mz:] = x_pol[self.cols]

        # dual: q-stationarity pins y_psd; project y_zero onto the rows
        # forcing tail stationarity and complementarity with the face
        y_z = y[:mz].copy()
        t_rows = self.az_tail.T                      # (n_tail, mz)
        t_rhs = -c[self.tail]
        comp_T = self._yv_rows(Vp)                   # (dim*rank, L)
        C_top = np.asarray(self.az_q @ comp_T.T).T
        C = np.vstack([t_rows, C_top])
        crhs = np.concatenate([t_rhs, -comp_T @ c[self.cols]])
        gap_vec = C @ y_z - crhs
        corr, *_ = np.linalg.lstsq(C, gap_vec, rcond=None)
        y_z = y_z - corr
        y_psd = self.az_q.T @ y_z + c[self.cols]
        Y = unsvec(y_psd, self.dim)
        Y = 0.5 * (Y + Y.T)
        wY = np.linalg.eigvalsh(Y)
        if wY[0] < -1e-6 * max(1.0, wY[-1]):
            return None
        y_psd = svec(_psd_clip(Y))
        y_pol = np.concatenate([y_z, y_psd])

        pres = np.linalg.norm(A @ x_pol + s_pol - b) / (1.0 + self.norm_b)
        dres = np.linalg.norm(A.T @ y_pol + c) / (1.0 + self.norm_c)
        pobj = float(c @ x_pol)
        dobj = float(-b @ y_pol)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        if pres <= eps_p and dres <= eps_d and gap <= eps_g:
            return x_pol, y_pol, s_pol, pobj, float(pres), float(dres), float(gap)
        return None

    def _yv_rows(self, Vp: np.ndarray) -> np.ndarray:
        """Rows expressing Y Vp = 0 as functionals of svec(Y)."""
        dim, rank = self.dim, Vp.shape[1]
        L = svec_len(dim)
        T = np.zeros((dim * rank, L))
        inv = 1.0 / math.sqrt(2.0)
        pos = 0
        for i in range(dim):
            for j in range(i, dim):
                if i == j:
                    for f in range(rank):
                        T[f * dim + i, pos] += Vp[i, f]
                else:
                    for f in range(rank):
                        T[f * dim + i, pos] += Vp[j, f] * inv
                        T[f * dim + j, pos] += Vp[i, f] * inv
                pos += 1
        return T


class _Anderson:
    """Type-II Anderson extrapolation over fixed-point iterates.

    Candidates are safeguarded by the caller: a jump is taken only when
    one map application from the candidate contracts more than the plain
    step, so the underlying splitting convergence is never given up.
    """

    def __init__(self, memory: int):
        self.memory = memory
        self.zs: list[np.ndarray] = []
        self.fs: list[np.ndarray] = []

    def push(self, z: np.ndarray, fz: np.ndarray) -> None:
        self.zs.append(z)
        self.fs.append(fz)
        if len(self.zs) > self.memory + 1:
            self.zs.pop(0)
            self.fs.pop(0)

    def reset(self) -> None:
        self.zs.clear()
        self.fs.clear()

    def candidate(self) -> np.ndarray | None:
        k = len(self.zs)
        if k < 3:
            return None
        res = [f - z for z, f in zip(self.zs, self.fs)]
        dr = np.stack([res[i + 1] - res[i] for i in range(k - 1)], axis=1)
        df = np.stack([self.fs[i + 1] - self.fs[i] for i in range(k - 1)], axis=1)
        rhs = res[-1]
        try:
            gamma = np.linalg.lstsq(dr, rhs, rcond=1e-10)[0]
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(gamma)):
            return None
        return self.fs[-1] - df @ gamma


class _ScaledSystem:
    """Equilibrated data and its KKT factorization, reusable across solves."""

    def __init__(self, A: sp.csr_matrix, cones: _Cones, rho: float):
        work, d, e = _equilibrate(A, cones)
        self.d = d * rho
        self.e = e
        self.kkt = _KktSolver(work * rho if rho != 1.0 else work)


# Problems assembled from a shared layout reuse their constraint blocks, so
# the factorization can be looked up by block identity.  Entries hold strong
# references to the blocks, which keeps the ids valid while cached.
_KKT_CACHE: OrderedDict[tuple, tuple[tuple, _ScaledSystem]] = OrderedDict()
_KKT_CACHE_MAX = 16


def _kkt_for(
    problem: ConicProblem, A: sp.csr_matrix, cones: _Cones, rho: float
) -> _ScaledSystem:
    key = (
        id(problem.a_zero),
        id(problem.a_nonneg),
        tuple(id(p.a) for p in problem.psd_blocks),
        rho,
    )
    hit = _KKT_CACHE.get(key)
    if hit is not None:
        _KKT_CACHE.move_to_end(key)
        return hit[1]
    system = _ScaledSystem(A, cones, rho)
    anchors = (problem.a_zero, problem.a_nonneg, tuple(p.a for p in problem.psd_blocks))
    _KKT_CACHE[key] = (anchors, system)
    while len(_KKT_CACHE) > _KKT_CACHE_MAX:
        _KKT_CACHE.popitem(last=False)
    return system


def kkt_residuals(
    problem: ConicProblem, x: np.ndarray, y: np.ndarray, s: np.ndarray
) -> tuple[float, float, float]:
    """Primal/dual/gap residuals recomputed from scratch on the raw data."""
    A, b, _ = _stack(problem)
    c = problem.objective
    pres = np.linalg.norm(A @ x + s - b) / (1.0 + np.linalg.norm(b))
    dres = np.linalg.norm(A.T @ y + c) / (1.0 + np.linalg.norm(c))
    pobj = float(c @ x)
    dobj = float(-b @ y)
    gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
    return float(pres), float(dres), float(gap)


def solve(problem: ConicProblem, settings: SolverSettings | None = None) -> ConicSolution:
    """Run the splitting iteration until tolerances or certificates.

    The data is Ruiz-equilibrated (exact reparameterization) before
    iterating; residuals are always reported on the original data.
    Exhausting the iteration budget is reported as ``max_iters`` with the
    best (last) iterate and its residuals, never silently.
    """
    if settings is None:
        settings = SolverSettings()
    problem.validate()
    A, b, cones = _stack(problem)
    c = np.asarray(problem.objective, dtype=float)
    n = A.shape[1]
    m = A.shape[0]

    rho = settings.rho
    system = _kkt_for(problem, A, cones, rho)
    d, e, kkt = system.d, system.e, system.kkt
    bs = d * b
    sigma_b = 1.0 / max(np.linalg.norm(bs), 1.0)
    bs = bs * sigma_b
    cs = e * c
    sigma_c = 1.0 / max(np.linalg.norm(cs), 1.0)
    cs = cs * sigma_c
    gx, gy = kkt.solve(cs, bs)
    denom = 1.0 + float(cs @ gx + bs @ gy)

    norm_b = np.linalg.norm(b)
    norm_c = np.linalg.norm(c)

    u = np.zeros(n + m + 1)
    v = np.zeros(n + m + 1)
    u[-1] = 1.0
    v[-1] = 1.0

    alpha = settings.alpha
    best = None
    status = MAX_ITERS
    it = 0
    rho_updates = 0
    last_adapt = 0
    err_log: list[tuple[int, float]] = []
    eps_floor = max(settings.eps_primal, settings.eps_dual, settings.eps_gap)

    def retune(kappa: float) -> None:
        """Refactor under the rescaled rows, mapping the iterate across."""
        nonlocal rho, d, kkt, bs, sigma_b, gx, gy, denom
        old_sigma_b = sigma_b
        new_rho = min(max(rho * kappa, 1e-3), 1e3)
        kappa = new_rho / rho
        if kappa == 1.0:
            return
        rho = new_rho
        system = _kkt_for(problem, A, cones, rho)
        d, kkt = system.d, system.kkt
        bs = d * b
        sigma_b = 1.0 / max(np.linalg.norm(bs), 1.0)
        bs = bs * sigma_b
        gx, gy = kkt.solve(cs, bs)
        denom = 1.0 + float(cs @ gx + bs @ gy)
        u[:n] *= sigma_b / old_sigma_b
        u[n : n + m] /= kappa
        v[n : n + m] *= kappa * sigma_b / old_sigma_b
        if aa is not None:
            aa.reset()

    def unscale(u_vec, v_vec):
        tau = u_vec[-1]
        x = e * u_vec[:n] / (tau * sigma_b)
        y = d * u_vec[n : n + m] / (tau * sigma_c)
        s = (v_vec[n : n + m] / d) / (tau * sigma_b)
        return x, y, s

    def extract(u_vec, v_vec):
        if u_vec[-1] <= 0:
            return None
        x, y, s = unscale(u_vec, v_vec)
        pres = np.linalg.norm(A @ x + s - b) / (1.0 + norm_b)
        dres = np.linalg.norm(A.T @ y + c) / (1.0 + norm_c)
        pobj = float(c @ x)
        dobj = float(-b @ y)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        return x, y, s, pobj, float(pres), float(dres), float(gap)

    size = n + m + 1

    def step(u_cur: np.ndarray, v_cur: np.ndarray):
        w = u_cur + v_cur
        px, py = kkt.solve(w[:n], w[n : n + m])
        qtp = float(cs @ px + bs @ py)
        tau_t = (w[-1] + qtp) / denom
        ut = np.empty(size)
        ut[:n] = px - tau_t * gx
        ut[n : n + m] = py - tau_t * gy
        ut[-1] = tau_t
        ub = alpha * ut + (1.0 - alpha) * u_cur
        rel = ub - v_cur
        u_next = np.empty(size)
        u_next[:n] = rel[:n]
        u_next[n : n + m] = cones.project_dual(rel[n : n + m])
        u_next[-1] = max(rel[-1], 0.0)
        v_next = v_cur - ub + u_next
        return u_next, v_next

    aa = _Anderson(settings.aa_memory) if settings.aa_memory > 0 else None
    id_cols = _identity_block_cols(problem)
    polisher = (
        _FacePolisher(problem, A, b, c, id_cols) if id_cols is not None else None
    )

    for it in range(1, settings.max_iterations + 1):
        z = np.concatenate([u, v])
        u, v = step(u, v)
        z_new = np.concatenate([u, v])
        if aa is not None:
            aa.push(z, z_new)
            if it % settings.aa_interval == 0:
                cand = aa.candidate()
                if cand is not None:
                    cu, cv = cand[:size], cand[size:]
                    cu2, cv2 = step(cu, cv)
                    cand_new = np.concatenate([cu2, cv2])
                    if np.linalg.norm(cand_new - cand) < np.linalg.norm(z_new - z):
                        u, v = cu2, cv2
                        aa.push(cand, cand_new)
                    else:
                        # stale history misdirects the extrapolation
                        aa.reset()

        if it % settings.check_every == 0 or it == settings.max_iterations:
            cand = extract(u, v)
            if cand is not None:
                x, y, s, pobj, pres, dres, gap = cand
                best = (x, y, s, pobj, pres, dres, gap)
                if (
                    pres <= settings.eps_primal
                    and dres <= settings.eps_dual
                    and gap <= settings.eps_gap
                ):
                    status = OPTIMAL
                    break
                err = max(pres, dres, gap)
                err_log.append((it, err))
                if polisher is not None and err < 1e-3 and it % 200 == 0:
                    polished = polisher.attempt(
                        x,
                        y,
                        settings.eps_primal,
                        settings.eps_dual,
                        settings.eps_gap,
                    )
                    if polished is not None:
                        x, y, s, pobj, pres, dres, gap = polished
                        best = polished
                        status = OPTIMAL
                        break
                if (
                    settings.adapt_rho
                    and rho_updates < settings.max_rho_updates
                    and it - last_adapt >= 500
                ):
                    ratio = (pres + 1e-14) / (dres + 1e-14)
                    past = [ev for iv, ev in err_log if iv <= it - 500]
                    stagnant = bool(past) and err > 0.9 * min(past) and err > 2 * eps_floor
                    kappa = 0.0
                    if ratio > 25.0 or ratio < 0.04:
                        kappa = min(max(math.sqrt(ratio), 0.1), 10.0)
                    elif stagnant:
                        # balanced but crawling: row weight up unless the
                        # dual side is clearly behind
                        kappa = 5.0 if pres >= dres else 0.2
                    if kappa:
                        retune(kappa)
                        rho_updates += 1
                        last_adapt = it
                        err_log.clear()
            # certificate tests on the unnormalized ray, in original data
            uy = d * u[n : n + m]
            bty = float(b @ uy)
            if bty < 0.0:
                cert = np.linalg.norm(A.T @ uy) * max(norm_b, 1.0) / (-bty)
                if cert <= settings.eps_infeasible:
                    y_cert = uy / (-bty)
                    return ConicSolution(
                        x=np.full(n, np.nan),
                        y=y_cert,
                        s=np.full(m, np.nan),
                        objective=float("nan"),
                        status=INFEASIBLE,
                        residual_primal=float("nan"),
                        residual_dual=float(np.linalg.norm(A.T @ y_cert)),
                        residual_gap=float("nan"),
                        iterations=it,
                    )
            ux = e * u[:n]
            ctx = float(c @ ux)
            if ctx < 0.0:
                vs = v[n : n + m] / d
                cert = np.linalg.norm(A @ ux + vs) * max(norm_c, 1.0) / (-ctx)
                if cert <= settings.eps_infeasible:
                    x_cert = ux / (-ctx)
                    return ConicSolution(
                        x=x_cert,
                        y=np.full(m, np.nan),
                        s=vs / (-ctx),
                        objective=float("nan"),
                        status=UNBOUNDED,
                        residual_primal=float(np.linalg.norm(A @ x_cert + vs / (-ctx))),
                        residual_dual=float("nan"),
                        residual_gap=float("nan"),
                        iterations=it,
                    )

    if best is None:
        cand = extract(u, v)
        if cand is None:
            # tau collapsed without certificate: report the raw iterate
            return ConicSolution(
                x=np.full(n, np.nan),
                y=np.full(m, np.nan),
                s=np.full(m, np.nan),
                objective=float("nan"),
                status=MAX_ITERS,
                residual_primal=float("inf"),
                residual_dual=float("inf"),
                residual_gap=float("inf"),
                iterations=it,
            )
        best = cand
    x, y, s, pobj, pres, dres, gap = best
    return ConicSolution(
        x=x,
        y=y,
        s=s,
        objective=pobj,
        status=status,
        residual_primal=pres,
        residual_dual=dres,
        residual_gap=gap,
        iterations=it,
    )
