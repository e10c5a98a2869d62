"""Dense-matrix kernels and proximal operators used throughout the toolkit.

All functions take and return float64 numpy arrays. Factorizations are
delegated to LAPACK (via numpy/scipy); the Sylvester solver and the proximal
operators are implemented here directly.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

logger = logging.getLogger(__name__)


class NumericalError(RuntimeError):
    """A factorization or iterative kernel failed to produce a result."""


class SylvesterSingularError(NumericalError):
    """The spectral pair of a Sylvester system is (near-)singular."""

    def __init__(self, alpha, beta, i, j):
        self.alpha = alpha
        self.beta = beta
        self.pair = (i, j)
        super().__init__(
            f"singular Sylvester spectrum: alpha[{i}]={alpha:.6e} + "
            f"beta[{j}]={beta:.6e} = {alpha + beta:.6e}"
        )


def _as_matrix(m, name="matrix"):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"{name} must be a nonempty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN/Inf entries")
    return m


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD m = u @ diag(s) @ vt with s nonincreasing."""

    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray


@dataclass(frozen=True)
class SymEigFactors:
    """Symmetric eigendecomposition m = q @ diag(lam) @ q.T, lam nondecreasing."""

    q: np.ndarray
    lam: np.ndarray


def svd(m):
    """Thin singular value decomposition of a dense matrix."""
    m = _as_matrix(m)
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD failed to converge on a {m.shape[0]}x{m.shape[1]} matrix"
        ) from exc
    return SvdFactors(u=u, s=s, vt=vt)


def sym_eig(m):
    """Eigendecomposition of a (numerically) symmetric matrix.

    The input is symmetrized internally; asymmetry beyond
    1e-8 * max|m| is rejected as a contract violation.
    """
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"sym_eig requires a square matrix, got shape {m.shape}")
    scale = np.abs(m).max()
    defect = np.abs(m - m.T).max()
    if defect > 1e-8 * max(scale, 1e-300):
        raise ValueError(
            f"matrix is not symmetric: max|m - m.T| = {defect:.3e} "
            f"exceeds 1e-8 * max|m| = {1e-8 * scale:.3e}"
        )
    sym = 0.5 * (m + m.T)
    try:
        lam, q = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigendecomposition failed on a {m.shape[0]}x{m.shape[0]} matrix"
        ) from exc
    return SymEigFactors(q=q, lam=lam)


def solve_sylvester(a, b, c, singular_tol=1e-12):
    """Solve a @ H + H @ b = c for symmetric a (k x k) and b (m x m).

    Both sides are diagonalized, c is transformed into the joint eigenbasis,
    divided entrywise by alpha_i + beta_j, and transformed back. Raises
    SylvesterSingularError when some alpha_i + beta_j vanishes.
    """
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    c = _as_matrix(c, "c")
    if a.shape[0] != a.shape[1] or b.shape[0] != b.shape[1]:
        raise ValueError("a and b must be square")
    if c.shape != (a.shape[0], b.shape[0]):
        raise ValueError(
            f"c must be {a.shape[0]}x{b.shape[0]}, got {c.shape[0]}x{c.shape[1]}"
        )
    ea = sym_eig(a)
    eb = sym_eig(b)
    denom = ea.lam[:, None] + eb.lam[None, :]
    bad = np.abs(denom) <= singular_tol
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise SylvesterSingularError(ea.lam[i], eb.lam[j], int(i), int(j))
    f = ea.q.T @ c @ eb.q
    return ea.q @ (f / denom) @ eb.q.T


def orthogonal_procrustes(k):
    """Row-orthonormal maximizer of trace(R @ k.T) for an r x c input, r <= c.

    R = u @ vt from the thin SVD of k; R @ R.T = I_r holds for any input,
    including rank-deficient ones (a degeneracy warning is logged).
    """
    k = _as_matrix(k, "k")
    r, c = k.shape
    if r > c:
        raise ValueError(f"procrustes input must have rows <= cols, got {r}x{c}")
    f = svd(k)
    if f.s[-1] <= 1e-12 * max(f.s[0], 1e-300):
        logger.warning(
            "rank-deficient procrustes input (%dx%d, smallest singular value %.3e)",
            r, c, f.s[-1],
        )
    return f.u @ f.vt


def soft_threshold(m, eta):
    """Elementwise shrinkage (|x| - eta)_+ * sgn(x)."""
    if eta < 0:
        raise ValueError(f"threshold must be nonnegative, got {eta}")
    m = np.asarray(m, dtype=np.float64)
    return np.sign(m) * np.maximum(np.abs(m) - eta, 0.0)


def col_l21_prox(g, tau):
    """Columnwise proximal operator of tau * ||.||_{2,1}.

    Column i becomes ((||g_i|| - tau)/||g_i||) * g_i when ||g_i|| > tau and
    zero otherwise; this minimizes tau*||E||_{2,1} + 0.5*||E - g||_F^2.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    g = _as_matrix(g, "g")
    norms = np.linalg.norm(g, axis=0)
    scale = np.zeros_like(norms)
    nz = norms > tau
    scale[nz] = (norms[nz] - tau) / norms[nz]
    return g * scale[None, :]


def pca_reduce(x, m):
    """Project samples (columns of x) onto the top-m principal directions.

    Columns are centered by the feature-wise mean first. Returns the m x n
    reduced matrix and the retained variance fraction (sum of kept component
    variances over the total variance).
    """
    x = _as_matrix(x, "x")
    n_feat, n_samp = x.shape
    limit = min(n_feat, n_samp - 1)
    if not 1 <= m <= limit:
        raise ValueError(
            f"component count {m} outside [1, {limit}] for a "
            f"{n_feat}x{n_samp} sample matrix"
        )
    centered = x - x.mean(axis=1, keepdims=True)
    f = svd(centered) if centered.any() else None
    if f is None:
        # constant data: zero variance everywhere, projection is trivial
        return np.zeros((m, n_samp)), 1.0
    reduced = f.u[:, :m].T @ centered
    total = float(np.sum(f.s**2))
    if total == 0.0:
        return reduced, 1.0
    retained = float(np.sum(f.s[:m] ** 2) / total)
    return reduced, min(retained, 1.0)


def spd_solve(a, b):
    """Solve a @ X = b for symmetric positive definite a via Cholesky."""
    a = _as_matrix(a, "a")
    b = np.asarray(b, dtype=np.float64)
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"Cholesky factorization failed: {a.shape[0]}x{a.shape[1]} "
            "matrix is not positive definite"
        ) from exc
    return cho_solve(factor, b, check_finite=False)
