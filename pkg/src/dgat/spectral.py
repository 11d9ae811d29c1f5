"""Parameterized normalized Laplacians, their spectra, and distance machinery.

The one-parameter family interpolates the classic normalized Laplacians:

    L(alpha, gamma) = gamma * S^(-alpha) (D - A) S^(alpha - 1),
    S = gamma * D + (1 - gamma) * I,

so alpha=1, gamma=1 gives the random-walk Laplacian, alpha=1/2, gamma=1 the
symmetric one, and (1/gamma) * L(alpha, gamma) -> D - A as gamma -> 0.
Eigensolves always run on the symmetric alpha=1/2 member; eigenvectors for
other alpha are recovered by the diagonal similarity S^(1/2 - alpha).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, degrees, directed_edges, is_connected

logger = logging.getLogger(__name__)

DEFAULT_DENSE_GUARD = 20000
ZERO_EIGENVALUE_TOL = 1e-8
DEGENERACY_TOL = 1e-10
DEFAULT_ROWNORM_EPS = 1e-8


@dataclass(frozen=True)
class LaplacianParams:
    """gamma in (0, 1], alpha in [0, 1]."""

    gamma: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.gamma <= 1.0):
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class SpectralBundle:
    """Eigendecomposition of the symmetric family member plus the diagonal
    transform that realizes eigenvectors for the requested alpha.

    ``eigenvalues`` are ascending; ``sym_eigvecs`` has orthonormal columns,
    each sign-canonicalized so its largest-magnitude entry is positive
    (ties to the lowest index). ``phi1`` is the alpha-scaled eigenvector of
    the smallest positive eigenvalue, canonicalized the same way.
    """

    params: LaplacianParams
    eigenvalues: np.ndarray    # (n,)
    sym_eigvecs: np.ndarray    # (n, n) columns of U
    scale_diag: np.ndarray     # (n,) entries of S^(1/2 - alpha)
    phi1: np.ndarray           # (n,)
    degenerate_lambda1: bool = False
    sign_canonicalized: bool = True

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    def eigenvectors(self) -> np.ndarray:
        """Columns are eigenvectors of L(alpha, gamma), per-column scaled U."""
        return self.scale_diag[:, None] * self.sym_eigvecs


@dataclass(frozen=True)
class DirectionalField:
    """Per-directed-edge gradient of a node signal, aligned to the graph CSR.

    ``grad[e] = phi[dst] - phi[src]`` (zero on self-loop slots);
    ``grad_rownorm`` divides each source row by its L1 norm plus ``eps0``.
    ``b_av = |grad_rownorm|`` and the directional-derivative entries split
    into the off-diagonal part (the row-normalized gradient itself) and the
    diagonal ``-rowsum``, which together have exactly zero row sums.
    """

    src: np.ndarray            # (e,)
    dst: np.ndarray            # (e,)
    grad: np.ndarray           # (e,)
    grad_rownorm: np.ndarray   # (e,)
    b_av: np.ndarray           # (e,)
    b_dx_offdiag: np.ndarray   # (e,) zero on self-loop slots
    b_dx_diag: np.ndarray      # (n,)
    eps0: float = DEFAULT_ROWNORM_EPS


def _scaling_vector(g: Graph, gamma: float) -> np.ndarray:
    return gamma * degrees(g).astype(np.float64) + (1.0 - gamma)


def _check_spectral_preconditions(g: Graph, max_nodes: int) -> None:
    if g.n > max_nodes:
        raise ValueError(
            f"graph has {g.n} nodes; dense spectral work is guarded at {max_nodes}")
    d = degrees(g)
    if (d == 0).any():
        raise ValueError(
            f"graph has isolated node {int(np.argmin(d))}; degree scaling is singular")
    if not is_connected(g):
        raise ValueError("graph is disconnected; spectral operations assume one component")


def adjacency_dense(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    if g.edges.size:
        a[g.edges[:, 0], g.edges[:, 1]] = 1.0
        a[g.edges[:, 1], g.edges[:, 0]] = 1.0
    loops = np.flatnonzero(g.has_self_loops)
    a[loops, loops] = 1.0
    return a


def combinatorial_laplacian(g: Graph) -> np.ndarray:
    lap = -adjacency_dense(g)
    lap[np.diag_indices(g.n)] += degrees(g)
    return lap


def parameterized_laplacian(g: Graph, p: LaplacianParams,
                            max_nodes: int = DEFAULT_DENSE_GUARD) -> np.ndarray:
    """Dense L(alpha, gamma) = gamma * S^(-alpha) (D - A) S^(alpha - 1)."""
    _check_spectral_preconditions(g, max_nodes)
    s = _scaling_vector(g, p.gamma)
    lap = combinatorial_laplacian(g)
    return p.gamma * (s ** -p.alpha)[:, None] * lap * (s ** (p.alpha - 1.0))[None, :]


def parameterized_adjacency(g: Graph, p: LaplacianParams,
                            max_nodes: int = DEFAULT_DENSE_GUARD) -> np.ndarray:
    """Dense P(alpha, gamma) = I - L(alpha, gamma); entrywise non-negative,
    and row-stochastic when alpha = 1."""
    return np.eye(g.n) - parameterized_laplacian(g, p, max_nodes=max_nodes)


def _canonicalize_columns(u: np.ndarray) -> np.ndarray:
    lead = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[lead, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs[None, :]


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip a vector so its largest-magnitude entry (lowest index on ties)
    is positive."""
    lead = int(np.argmax(np.abs(v)))
    return -v if v[lead] < 0 else v.copy()


def eigendecompose(g: Graph, p: LaplacianParams,
                   max_nodes: int = DEFAULT_DENSE_GUARD) -> SpectralBundle:
    """Solve the symmetric member, then scale eigenvectors for ``p.alpha``.

    The non-symmetric L(alpha, gamma) is never fed to a solver: it shares
    the spectrum of the symmetric L(1/2, gamma), whose eigenvectors map over
    through S^(1/2 - alpha).
    """
    _check_spectral_preconditions(g, max_nodes)
    if g.n < 2:
        raise ValueError("a positive eigenvalue needs at least 2 nodes")
    s = _scaling_vector(g, p.gamma)
    inv_sqrt = 1.0 / np.sqrt(s)
    sym = p.gamma * inv_sqrt[:, None] * combinatorial_laplacian(g) * inv_sqrt[None, :]
    sym = 0.5 * (sym + sym.T)
    try:
        eigvals, u = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"symmetric eigensolver failed to converge: {exc}") from exc
    probe = np.random.default_rng(0).standard_normal(g.n)
    residual = np.linalg.norm(sym @ (u @ probe) - u @ (eigvals * probe))
    if not np.isfinite(residual) or residual > 1e-6 * max(1.0, np.linalg.norm(probe)) * g.n:
        raise ValueError(f"eigensolver residual too large: {residual:.3e}")
    if abs(eigvals[0]) > ZERO_EIGENVALUE_TOL:
        raise ValueError(f"smallest eigenvalue {eigvals[0]:.3e} is not numerically zero")
    if eigvals[1] <= ZERO_EIGENVALUE_TOL:
        raise ValueError("second eigenvalue is numerically zero on a connected graph")
    u = _canonicalize_columns(u)
    scale = s ** (0.5 - p.alpha)
    degenerate = bool(g.n > 2 and eigvals[2] - eigvals[1] < DEGENERACY_TOL)
    if degenerate:
        logger.warning(
            "smallest positive eigenvalue is degenerate (gap %.3e); "
            "using the solver's first eigenvector", eigvals[2] - eigvals[1])
    phi1 = canonical_sign(scale * u[:, 1])
    for arr in (eigvals, u, scale, phi1):
        arr.setflags(write=False)
    return SpectralBundle(params=p, eigenvalues=eigvals, sym_eigvecs=u,
                          scale_diag=scale, phi1=phi1,
                          degenerate_lambda1=degenerate)


def limit_check_combinatorial(g: Graph, alpha: float, gamma_sequence,
                              max_nodes: int = DEFAULT_DENSE_GUARD) -> np.ndarray:
    """Frobenius relative errors of (1/gamma) L(alpha, gamma) against D - A,
    for a descending gamma sequence. Errors are non-increasing."""
    gammas = np.asarray(list(gamma_sequence), dtype=np.float64)
    if gammas.size == 0:
        raise ValueError("gamma sequence is empty")
    if (np.diff(gammas) >= 0).any():
        raise ValueError("gamma sequence must be strictly descending")
    lap = combinatorial_laplacian(g)
    lap_norm = np.linalg.norm(lap)
    errors = np.empty(gammas.size)
    for k, gamma in enumerate(gammas):
        scaled = parameterized_laplacian(
            g, LaplacianParams(gamma=float(gamma), alpha=alpha), max_nodes=max_nodes)
        errors[k] = np.linalg.norm(scaled / gamma - lap) / lap_norm
    return errors


def _require_random_walk_bundle(b: SpectralBundle) -> None:
    if b.params.alpha != 1.0:
        raise ValueError(
            f"distance is defined for the alpha=1 family; bundle has alpha={b.params.alpha}")


def _diffusion_terms(b: SpectralBundle, i: int, j: int, t: float):
    """Leading eigenvalue and the rescaled sum for the squared distance:
    d_t^2 = exp(-2 t lam1) * sum_k exp(-2 t (lam_k - lam1)) (v_ik - v_jk)^2."""
    if t <= 0:
        raise ValueError(f"diffusion time must be positive, got {t}")
    n = b.n
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"node pair ({i}, {j}) out of range for n={n}")
    vecs = b.eigenvectors()[:, 1:]
    lam = b.eigenvalues[1:]
    diff = vecs[i] - vecs[j]
    lam1 = lam[0] if lam.size else 0.0
    scaled_sum = float(np.sum(np.exp(-2.0 * t * (lam - lam1)) * diff * diff))
    return lam1, scaled_sum


def diffusion_distance(b: SpectralBundle, i: int, j: int, t: float) -> float:
    """Spectrum-weighted embedding distance at diffusion time t.

    Requires an alpha=1 bundle. Symmetric, zero exactly when i == j, and
    evaluated with the dominant eigenvalue factored out so that moderate
    underflow in the tail cannot corrupt the leading term.
    """
    _require_random_walk_bundle(b)
    lam1, scaled_sum = _diffusion_terms(b, i, j, t)
    return math.exp(-t * lam1) * math.sqrt(scaled_sum)


def log_diffusion_distance(b: SpectralBundle, i: int, j: int, t: float) -> float:
    """log of the diffusion distance; -inf when the distance is zero.

    Stable at times large enough that the distance itself underflows, which
    makes ordering comparisons exact wherever the true value is positive.
    """
    _require_random_walk_bundle(b)
    lam1, scaled_sum = _diffusion_terms(b, i, j, t)
    if scaled_sum == 0.0:
        return float("-inf")
    return -t * lam1 + 0.5 * math.log(scaled_sum)


def spectral_distance_from_values(phi: np.ndarray, i: int, j: int) -> float:
    return float(abs(phi[i] - phi[j]))


def spectral_distance(b: SpectralBundle, i: int, j: int) -> float:
    """|phi1_i - phi1_j|: the one-eigenvector surrogate for diffusion ordering."""
    n = b.n
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"node pair ({i}, {j}) out of range for n={n}")
    return spectral_distance_from_values(b.phi1, i, j)


def surrogate_constant(b: SpectralBundle, i: int, j: int, m: int) -> float:
    """Time threshold beyond which d_t(m, j) < d_t(i, j) is guaranteed.

    Requires the ordering hypothesis d_s(m, j) < d_s(i, j). Computed as
    log(num / den) / (2 (lam1 - lam2)) with

        num = (v_i1 - v_j1)^2 - (v_m1 - v_j1)^2,
        den = sum_{k >= 2} |(v_mk - v_jk)^2 - (v_ik - v_jk)^2|.

    Returns 0.0 when den == 0 (the ordering then holds for every t >= 1);
    the value may be negative, in which case any t >= 1 works. Rejects a
    degenerate gap lam1 == lam2 with den > num, where this bound is vacuous.
    """
    _require_random_walk_bundle(b)
    ds_mj = spectral_distance(b, m, j)
    ds_ij = spectral_distance(b, i, j)
    if not ds_mj < ds_ij:
        raise ValueError(
            f"hypothesis violated: d_s(m,j)={ds_mj:.6g} is not below d_s(i,j)={ds_ij:.6g}")
    vecs = b.eigenvectors()
    num = (vecs[i, 1] - vecs[j, 1]) ** 2 - (vecs[m, 1] - vecs[j, 1]) ** 2
    tail = ((vecs[m, 2:] - vecs[j, 2:]) ** 2 - (vecs[i, 2:] - vecs[j, 2:]) ** 2)
    den = float(np.sum(np.abs(tail)))
    if den == 0.0:
        return 0.0
    gap = b.eigenvalues[1] - b.eigenvalues[2]
    if gap == 0.0:
        if den <= num:
            return 0.0
        raise ValueError("degenerate spectrum (lam1 == lam2) leaves the bound vacuous")
    return float(math.log(num / den) / (2.0 * gap))


def _segment_sums(values: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    out = np.add.reduceat(values, offsets[:-1])
    out[np.diff(offsets) == 0] = 0.0
    return out


def directional_field(g: Graph, phi: np.ndarray,
                      eps0: float = DEFAULT_ROWNORM_EPS) -> DirectionalField:
    """Per-edge gradient of ``phi`` with L1 row normalization.

    Rows whose norm plus ``eps0`` is zero (constant signal with eps0 = 0)
    yield zero rows rather than NaNs.
    """
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape != (g.n,):
        raise ValueError(f"signal has shape {phi.shape}, expected ({g.n},)")
    if eps0 < 0:
        raise ValueError(f"eps0 must be non-negative, got {eps0}")
    src, dst = directed_edges(g)
    grad = phi[dst] - phi[src]
    row_norms = _segment_sums(np.abs(grad), g.csr_offsets)
    denom = row_norms + eps0
    scale = np.zeros(g.n)
    np.divide(1.0, denom, out=scale, where=denom > 0)
    grad_rownorm = grad * scale[src]
    b_av = np.abs(grad_rownorm)
    is_loop = src == dst
    b_dx_offdiag = np.where(is_loop, 0.0, grad_rownorm)
    b_dx_diag = -_segment_sums(grad_rownorm, g.csr_offsets)
    for arr in (src, grad, grad_rownorm, b_av, b_dx_offdiag, b_dx_diag):
        arr.setflags(write=False)
    return DirectionalField(src=src, dst=dst, grad=grad, grad_rownorm=grad_rownorm,
                            b_av=b_av, b_dx_offdiag=b_dx_offdiag,
                            b_dx_diag=b_dx_diag, eps0=eps0)
