"""ADMM solver for the augmented latent-representation clustering objective.

The iteration cycles five subproblems (projection P, latent H, representation
Z, error E, auxiliary J), then performs dual ascent on three multipliers with
an increasing penalty. All updates are closed-form: P by an orthogonal
Procrustes step, H by a Sylvester solve, Z by an SPD solve, E by the
columnwise l2,1 proximal map, and J by block-diagonal-preserving shrinkage.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from ._seeds import rng_from
from .numerics import (
    NumericalError,
    col_l21_prox,
    orthogonal_procrustes,
    soft_threshold,
    solve_sylvester,
    spd_solve,
)

_ABLATIONS = ("full", "v1", "v2")


@dataclass
class ElmscConfig:
    """Solver configuration.

    `lam` weighs the l1 penalty on the off-diagonal blocks of Z; `latent_dim`
    is the row count of H. The penalty schedule (mu0, mu_max, rho), tolerance,
    and iteration cap default to the reference schedule. Ablations: "v1"
    drops the sparsity term (lam treated as 0), "v2" zeroes the off-diagonal
    blocks of the augmented data matrix before solving.
    """

    lam: float
    latent_dim: int
    mu0: float = 1e-4
    mu_max: float = 1e6
    rho: float = 1.2
    tol: float = 1e-3
    max_iter: int = 100
    seed: int = 0
    ablation: str = "full"

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")
        if self.latent_dim < 1:
            raise ValueError(f"latent_dim must be positive, got {self.latent_dim}")
        if not 0 < self.mu0 < self.mu_max:
            raise ValueError(f"need 0 < mu0 < mu_max, got {self.mu0}, {self.mu_max}")
        if self.rho <= 1:
            raise ValueError(f"rho must exceed 1, got {self.rho}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")
        if self.ablation not in _ABLATIONS:
            raise ValueError(
                f"ablation must be one of {_ABLATIONS}, got {self.ablation!r}"
            )

    @property
    def effective_lam(self):
        return 0.0 if self.ablation == "v1" else self.lam


@dataclass
class AdmmState:
    """All solver variables plus the penalty value and iteration counter."""

    p: np.ndarray
    h: np.ndarray
    z: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    j: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    y3: np.ndarray
    mu: float
    iter: int = 0


@dataclass
class ConvergenceTrace:
    """Per-iteration residuals, objective values, and penalty values."""

    iters: list = field(default_factory=list)
    r1: list = field(default_factory=list)
    r2: list = field(default_factory=list)
    r3: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    mu: list = field(default_factory=list)

    def append(self, it, r1, r2, r3, obj, mu):
        self.iters.append(it)
        self.r1.append(r1)
        self.r2.append(r2)
        self.r3.append(r3)
        self.objective.append(obj)
        self.mu.append(mu)

    def __len__(self):
        return len(self.iters)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iter", "r1", "r2", "r3", "objective", "mu"])
            for row in zip(self.iters, self.r1, self.r2, self.r3,
                           self.objective, self.mu):
                w.writerow([row[0], *(repr(x) for x in row[1:])])


@dataclass
class SolverOutput:
    z: np.ndarray
    h: np.ndarray
    p: np.ndarray
    e: np.ndarray  # stacked [E1; E2]
    trace: ConvergenceTrace
    converged: bool
    state: AdmmState = None  # final iterate, for stationarity diagnostics


@dataclass(frozen=True)
class KktReport:
    """Stationarity diagnostics at the final iterate.

    Three primal feasibility gaps (max-abs residuals of the reconstruction,
    self-representation, and auxiliary constraints) plus two subgradient
    membership gaps: the distance of the stacked multiplier [Y1; Y2] from the
    l2,1 subdifferential at E, and the distance of -Y3 from lam times the l1
    subdifferential at the off-diagonal blocks of J.
    """

    recon: float
    selfrep: float
    aux: float
    e_gap: float
    j_gap: float

    def as_tuple(self):
        return (self.recon, self.selfrep, self.aux, self.e_gap, self.j_gap)


def block_diagonal_part(m, v, n):
    """Zero everything except the v diagonal n x n blocks."""
    if m.shape != (v * n, v * n):
        raise ValueError(f"expected a {v * n}x{v * n} matrix, got {m.shape}")
    out = np.zeros_like(m)
    for i in range(v):
        s = slice(i * n, (i + 1) * n)
        out[s, s] = m[s, s]
    return out


def init_state(xa, cfg):
    """Fresh state: H i.i.d. standard Gaussian from cfg.seed, all else zero."""
    d, vn = xa.xa.shape
    k = cfg.latent_dim
    if k > d:
        raise ValueError(
            f"latent_dim={k} exceeds the stacked feature dimension d={d}"
        )
    h = rng_from(cfg.seed).standard_normal((k, vn))
    return AdmmState(
        p=np.zeros((d, k)),
        h=h,
        z=np.zeros((vn, vn)),
        e1=np.zeros((d, vn)),
        e2=np.zeros((k, vn)),
        j=np.zeros((vn, vn)),
        y1=np.zeros((d, vn)),
        y2=np.zeros((k, vn)),
        y3=np.zeros((vn, vn)),
        mu=cfg.mu0,
        iter=0,
    )


def update_p(state, xa):
    """Projection step: P maximizing alignment with the latent reconstruction.

    P.T is the row-orthonormal Procrustes solution for H @ (Y1/mu + X - E1).T,
    so the returned P has orthonormal columns.
    """
    target = xa + state.y1 / state.mu - state.e1
    return orthogonal_procrustes(state.h @ target.T).T


def update_h(state, xa):
    """Latent step: solve the Sylvester system A H + H B = C.

    A = mu * P.T P and B = mu * (I - Z)(I - Z).T; when P has orthonormal
    columns A is mu * I, and the system reduces to H (mu I + B) = C, solved
    by a single SPD factorization.
    """
    p, z, mu = state.p, state.z, state.mu
    k = p.shape[1]
    vn = z.shape[0]
    eye_z = np.eye(vn)
    i_minus_z = eye_z - z
    b = mu * (i_minus_z @ i_minus_z.T)
    c = (
        p.T @ state.y1
        + state.y2 @ (z.T - eye_z)
        + mu * (p.T @ (xa - state.e1) + state.e2 - state.e2 @ z.T)
    )
    ptp = p.T @ p
    if np.abs(ptp - np.eye(k)).max() <= 1e-8:
        return spd_solve(mu * np.eye(vn) + b, c.T).T
    return solve_sylvester(mu * ptp, b, c)


def update_z(state):
    """Representation step: closed-form solve of the quadratic subproblem."""
    h, mu = state.h, state.mu
    hth = h.T @ h
    lhs = hth + np.eye(hth.shape[0])
    rhs = (state.j + hth - h.T @ state.e2) + (state.y3 + h.T @ state.y2) / mu
    return spd_solve(lhs, rhs)


def update_e(state, xa):
    """Error step: columnwise l2,1 shrinkage of the stacked residual target."""
    mu = state.mu
    g = np.vstack([
        xa - state.p @ state.h + state.y1 / mu,
        state.h - state.h @ state.z + state.y2 / mu,
    ])
    e = col_l21_prox(g, 1.0 / mu)
    d = xa.shape[0]
    return e[:d], e[d:]


def update_j(state, lam, v, n):
    """Auxiliary step: keep diagonal blocks, shrink off-diagonal entries."""
    m = state.z - state.y3 / state.mu
    if lam == 0.0:
        return m
    diag = block_diagonal_part(m, v, n)
    return diag + soft_threshold(m - diag, lam / state.mu)


def _residual_mats(state, xa):
    r1 = xa - state.p @ state.h - state.e1
    r2 = state.h - state.h @ state.z - state.e2
    r3 = state.j - state.z
    return r1, r2, r3


def residuals(state, xa):
    """Max-abs feasibility residuals of the three coupling constraints."""
    r1, r2, r3 = _residual_mats(state, xa)
    return (
        float(np.abs(r1).max()),
        float(np.abs(r2).max()),
        float(np.abs(r3).max()),
    )


def update_multipliers(state, xa, cfg):
    """Dual ascent on Y1-Y3, then penalty growth mu <- min(rho mu, mu_max)."""
    r1, r2, r3 = _residual_mats(state, xa)
    state.y1 = state.y1 + state.mu * r1
    state.y2 = state.y2 + state.mu * r2
    state.y3 = state.y3 + state.mu * r3
    state.mu = min(cfg.rho * state.mu, cfg.mu_max)
    return state


def objective(state, lam, v, n):
    """Value of the unconstrained objective at the current primal variables:
    l2,1 norm of the stacked error plus lam times the l1 norm of the
    off-diagonal blocks of Z."""
    e = np.vstack([state.e1, state.e2])
    l21 = float(np.linalg.norm(e, axis=0).sum())
    off = state.z - block_diagonal_part(state.z, v, n)
    return l21 + lam * float(np.abs(off).sum())


def effective_data(xa, cfg):
    """The data matrix the solver actually optimizes against: the raw
    augmented matrix, or its block-diagonal part under the v2 ablation."""
    if cfg.ablation != "v2":
        return xa.xa
    n = xa.n_samples
    mat = np.zeros_like(xa.xa)
    for l in range(xa.n_views):
        r0 = xa.block_rows[l]
        r1 = r0 + xa.view_dims[l]
        c0 = xa.block_cols[l]
        mat[r0:r1, c0:c0 + n] = xa.block(l, l)
    return mat


def run(xa, cfg):
    """Execute the full alternating schedule on an augmented matrix.

    Updates run in the fixed order P, H, Z, E, J, multipliers, penalty; the
    trace records every iteration; the loop stops once all three residuals
    drop below cfg.tol or cfg.max_iter is reached. Deterministic for a fixed
    seed.
    """
    mat = effective_data(xa, cfg)
    v, n = xa.n_views, xa.n_samples
    lam = cfg.effective_lam

    state = init_state(xa, cfg)
    trace = ConvergenceTrace()
    converged = False
    for t in range(1, cfg.max_iter + 1):
        try:
            state.p = update_p(state, mat)
            state.h = update_h(state, mat)
            state.z = update_z(state)
            state.e1, state.e2 = update_e(state, mat)
            state.j = update_j(state, lam, v, n)
        except NumericalError as exc:
            raise NumericalError(f"iteration {t}: {exc}") from exc
        r1, r2, r3 = residuals(state, mat)
        trace.append(t, r1, r2, r3, objective(state, lam, v, n), state.mu)
        update_multipliers(state, mat, cfg)
        state.iter = t
        if max(r1, r2, r3) < cfg.tol:
            converged = True
            break

    return SolverOutput(
        z=state.z,
        h=state.h,
        p=state.p,
        e=np.vstack([state.e1, state.e2]),
        trace=trace,
        converged=converged,
        state=state,
    )


def aggregate_z(z, v, n):
    """Entrywise sum of all v*v blocks of size n x n."""
    z = np.asarray(z)
    if z.shape != (v * n, v * n):
        raise ValueError(
            f"expected a {v * n}x{v * n} matrix for v={v}, n={n}, got {z.shape}"
        )
    return z.reshape(v, n, v, n).sum(axis=(0, 2))


def kkt_residuals(state, xa, lam, v, n):
    """First-order stationarity gaps at the current iterate.

    The primal gaps are the three max-abs constraint residuals. The e_gap is
    the worst columnwise distance of [Y1; Y2] from the l2,1 subdifferential
    at E (the unit-normalized column for active columns, the unit ball for
    zero columns). The j_gap measures the l1 condition on J: on active
    off-diagonal-block entries |Y3 + lam * sgn(J)|, on inactive ones the
    excess of |Y3| over lam, and on diagonal blocks |Y3| itself (the penalty
    does not act there, so the multiplier must vanish).
    """
    p1, p2, p3 = residuals(state, xa)

    e = np.vstack([state.e1, state.e2])
    y12 = np.vstack([state.y1, state.y2])
    e_norms = np.linalg.norm(e, axis=0)
    y_norms = np.linalg.norm(y12, axis=0)
    active = e_norms > 0
    gaps = np.maximum(y_norms - 1.0, 0.0)
    if active.any():
        diff = y12[:, active] - e[:, active] / e_norms[active]
        gaps[active] = np.linalg.norm(diff, axis=0)
    e_gap = float(gaps.max()) if gaps.size else 0.0

    diag_mask = block_diagonal_part(np.ones_like(state.j), v, n) > 0
    off = ~diag_mask
    j_gap = float(np.abs(state.y3[diag_mask]).max()) if diag_mask.any() else 0.0
    act = off & (state.j != 0)
    if act.any():
        j_gap = max(
            j_gap,
            float(np.abs(state.y3[act] + lam * np.sign(state.j[act])).max()),
        )
    inact = off & (state.j == 0)
    if inact.any():
        j_gap = max(
            j_gap, float(np.maximum(np.abs(state.y3[inact]) - lam, 0.0).max())
        )

    return KktReport(recon=p1, selfrep=p2, aux=p3, e_gap=e_gap, j_gap=j_gap)
