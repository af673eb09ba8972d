"""Dense complex linear algebra used by every decomposition stage.

Matrices are plain ``numpy.ndarray`` objects with ``complex128`` entries and
row-major layout.  All decompositions here verify themselves by explicit
reconstruction before returning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_UNITARY_TOL",
    "CSDResult",
    "EigResult",
    "as_matrix",
    "multiply",
    "kron",
    "dagger",
    "frobenius",
    "is_unitary",
    "assert_unitary",
    "eig_unitary",
    "csd",
    "random_unitary",
    "gram_schmidt",
]

# Per-dimension tolerance scale: unitarity checks use 1e-10 * dim, end-to-end
# reconstructions 1e-8 * dim.  Double precision leaves ample headroom for the
# deepest recursions handled here (64x64).
DEFAULT_UNITARY_TOL = 1e-10

_SNAP = 1e-12  # cos/sin snapping threshold for degenerate CSD angles


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite complex128 2-D array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


def multiply(a, b) -> np.ndarray:
    """Matrix product a @ b."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Tensor product with a's index most significant."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return np.conj(as_matrix(a).T)


def frobenius(a) -> float:
    return float(np.linalg.norm(a))


def is_unitary(a, tol: float | None = None) -> bool:
    """True iff ||a†a - I||_F <= tol (default 1e-10 * dim)."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    if tol is None:
        tol = DEFAULT_UNITARY_TOL * a.shape[0]
    return frobenius(dagger(a) @ a - np.eye(a.shape[0])) <= tol


def assert_unitary(a, tol: float | None = None) -> bool:
    return is_unitary(a, tol)


def _require_unitary(a, what: str) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{what}: matrix must be square, got {a.shape}")
    if not is_unitary(a):
        raise ValueError(f"{what}: matrix is not unitary within tolerance")
    return a


@dataclass(frozen=True)
class EigResult:
    """Spectral decomposition u = P diag(exp(i*phases)) P† of a unitary."""

    eigenphases: np.ndarray  # real, ascending, in (-pi, pi]
    eigenvectors: np.ndarray  # unitary, columns

    def reconstruct(self) -> np.ndarray:
        p = self.eigenvectors
        return (p * np.exp(1j * self.eigenphases)) @ dagger(p)


@dataclass(frozen=True)
class CSDResult:
    """Two-block cosine-sine decomposition u = diag(U1,U2) CS diag(V1,V2)†.

    ``angles`` holds the min(p, q) principal angles in [0, pi/2], ascending.
    CS pairs coordinate i (i < min(p, q)) with coordinate p + i and is the
    identity on the remaining coordinates.
    """

    left_blocks: tuple[np.ndarray, np.ndarray]
    angles: np.ndarray
    right_blocks: tuple[np.ndarray, np.ndarray]
    partition: tuple[int, int]

    def cs_matrix(self) -> np.ndarray:
        p, q = self.partition
        n = p + q
        r = min(p, q)
        cs = np.eye(n, dtype=np.complex128)
        c, s = np.cos(self.angles), np.sin(self.angles)
        for i in range(r):
            cs[i, i] = c[i]
            cs[i, p + i] = -s[i]
            cs[p + i, i] = s[i]
            cs[p + i, p + i] = c[i]
        return cs

    def reconstruct(self) -> np.ndarray:
        p, q = self.partition
        u1, u2 = self.left_blocks
        v1, v2 = self.right_blocks
        n = p + q
        left = np.zeros((n, n), dtype=np.complex128)
        right = np.zeros((n, n), dtype=np.complex128)
        left[:p, :p], left[p:, p:] = u1, u2
        right[:p, :p], right[p:, p:] = v1, v2
        return left @ self.cs_matrix() @ dagger(right)


def _phase_in_pi(x: np.ndarray) -> np.ndarray:
    """Map angles to (-pi, pi]."""
    y = np.mod(x + np.pi, 2 * np.pi) - np.pi
    y[np.isclose(y, -np.pi)] = np.pi
    return y


def eig_unitary(u, cluster_tol: float = 1e-10) -> EigResult:
    """Eigendecomposition of a unitary via its Hermitian/anti-Hermitian parts.

    Diagonalizes H1 = (u + u†)/2 (eigenvalues cos λ), then refines each
    degenerate cos-cluster by diagonalizing H2 = (u - u†)/(2i) restricted to
    the cluster.  Stable for unitary input and exactly orthonormal columns.
    """
    u = _require_unitary(u, "eig_unitary")
    n = u.shape[0]
    h1 = (u + dagger(u)) / 2
    h2 = (u - dagger(u)) / 2j
    cos_vals, basis = np.linalg.eigh(h1)

    vectors = np.zeros((n, n), dtype=np.complex128)
    phases = np.zeros(n)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and cos_vals[stop] - cos_vals[start] <= cluster_tol:
            stop += 1
        block = basis[:, start:stop]
        # Within the cluster cos is constant; sort out sin by diagonalizing H2.
        sin_vals, w = np.linalg.eigh(dagger(block) @ h2 @ block)
        refined = block @ w
        vectors[:, start:stop] = refined
        for k in range(stop - start):
            col = refined[:, k]
            lam = np.angle(np.vdot(col, u @ col))
            phases[start + k] = lam
        start = stop

    phases = _phase_in_pi(phases)
    order = _eig_order(phases, vectors)
    phases, vectors = phases[order], vectors[:, order]

    res = EigResult(eigenphases=phases, eigenvectors=vectors)
    err = frobenius(res.reconstruct() - u)
    if err > 1e-9 * n:
        raise ValueError(f"eig_unitary reconstruction failed (error {err:.3e})")
    return res


def _eig_order(phases: np.ndarray, vectors: np.ndarray) -> list[int]:
    """Ascending phases; ties broken by the first differing component with the
    larger magnitude first."""

    def tie_key(i):
        return tuple(-np.round(np.abs(vectors[:, i]), 12))

    idx = list(range(len(phases)))
    idx.sort(key=lambda i: (np.round(phases[i], 12), tie_key(i)))
    return idx


def _orthonormal_completion(cols: np.ndarray, total: int) -> np.ndarray:
    """Extend a set of orthonormal columns to a full orthonormal basis."""
    n = cols.shape[0]
    have = cols.shape[1]
    if have == total:
        return cols
    proj = np.eye(n) - cols @ dagger(cols) if have else np.eye(n, dtype=np.complex128)
    # Columns of the projector span the complement; QR picks an orthonormal set.
    q, r = np.linalg.qr(proj)
    keep = [j for j in range(n) if abs(r[j, j]) > 1e-9]
    extra = q[:, keep[: total - have]]
    out = np.hstack([cols, extra]) if have else extra
    # One re-orthonormalization pass for safety.
    q2, _ = np.linalg.qr(out)
    # qr may flip phases; keep the original columns exactly.
    if have:
        q2[:, :have] = cols
        for j in range(have, total):
            v = q2[:, j]
            for _ in range(2):
                v = v - q2[:, :j] @ (dagger(q2[:, :j]) @ v)
            q2[:, j] = v / np.linalg.norm(v)
    return q2[:, :total]


def _polar_unitary(a: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(a)
    return w @ vh


def csd(u, p: int, q: int) -> CSDResult:
    """Two-block cosine-sine decomposition of a unitary.

    Computed from the SVD of the top-left p x p block, an orthonormal
    completion for the bottom-left block, and a direct (division-free)
    assembly of the right blocks; verified by reconstruction before return.
    """
    u = _require_unitary(u, "csd")
    n = u.shape[0]
    if p <= 0 or q <= 0 or p + q != n:
        raise ValueError(f"csd: invalid partition ({p}, {q}) for size {n}")
    r = min(p, q)

    u11, u12 = u[:p, :p], u[:p, p:]
    u21, u22 = u[p:, :p], u[p:, p:]

    a1, sig, b1h = np.linalg.svd(u11)
    b1 = dagger(b1h)
    sig = np.clip(sig, 0.0, 1.0)

    if p > q:
        # p - q singular values are structurally 1; park them on the unpaired
        # coordinates r..p-1.  Take them from the tail of the ~1 prefix so
        # that inputs like the identity keep their natural coordinate order.
        ones = int(np.searchsorted(-sig, -(1 - 1e-9)))
        ones = max(ones, p - q)
        unpaired = list(range(ones - (p - q), ones))
        perm = [i for i in range(p) if i not in unpaired] + unpaired
        a1, b1, sig = a1[:, perm], b1[:, perm], sig[perm]

    # Sines from the lower-left block: T = u21 b1 has orthogonal columns of
    # norm sin(theta_i) up to roundoff, which is far more accurate near
    # theta ~ 0 than sqrt(1 - c^2).
    t = u21 @ b1
    sines = np.linalg.norm(t[:, :r], axis=0)
    theta = np.arctan2(sines, sig[:r])
    theta[np.sin(theta) <= _SNAP] = 0.0
    theta[np.cos(theta) <= _SNAP] = np.pi / 2

    c, s = np.cos(theta), np.sin(theta)

    # Left q-side block: normalized nondegenerate columns of T, completed.
    good = [i for i in range(r) if s[i] > 1e-7]
    cols = np.zeros((q, len(good)), dtype=np.complex128)
    for j, i in enumerate(good):
        v = t[:, i] / np.linalg.norm(t[:, i])
        for _ in range(2):  # re-orthonormalize against earlier columns
            v = v - cols[:, :j] @ (dagger(cols[:, :j]) @ v)
        cols[:, j] = v / np.linalg.norm(v)
    a2 = np.zeros((q, q), dtype=np.complex128)
    full = _orthonormal_completion(cols, q)
    # Scatter: good columns back to their pair index, completion fills rest.
    rest = [i for i in range(q) if i not in good]
    for j, i in enumerate(good):
        a2[:, i] = full[:, j]
    for j, i in enumerate(rest):
        a2[:, i] = full[:, len(good) + j]

    # Right q-side block, assembled without small divisions:
    #   b2_row[i] = c_i (a2† u22)[i] - s_i (a1† u12)[i]   (paired i)
    #   b2_row[i] = (a2† u22)[i]                          (unpaired, q > p)
    m22 = dagger(a2) @ u22
    m12 = dagger(a1) @ u12
    b2h = np.zeros((q, q), dtype=np.complex128)
    for i in range(q):
        if i < r:
            b2h[i] = c[i] * m22[i] - s[i] * m12[i]
        else:
            b2h[i] = m22[i]
    b2 = _polar_unitary(dagger(b2h))

    res = CSDResult(
        left_blocks=(a1, a2),
        angles=theta,
        right_blocks=(b1, b2),
        partition=(p, q),
    )
    err = frobenius(res.reconstruct() - u)
    if err > 1e-9 * n:
        raise ValueError(f"csd reconstruction failed (error {err:.3e})")
    return res


def gram_schmidt(a) -> np.ndarray:
    """Orthonormalize the columns of a (assumed full rank)."""
    a = as_matrix(a)
    out = np.zeros_like(a)
    for j in range(a.shape[1]):
        v = a[:, j].copy()
        for _ in range(2):
            v = v - out[:, :j] @ (dagger(out[:, :j]) @ v)
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            raise ValueError("gram_schmidt: columns are rank deficient")
        out[:, j] = v / nrm
    return out


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-random unitary from a seeded complex Gaussian QR."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    qmat, rmat = np.linalg.qr(g)
    # Fix the QR phase ambiguity so the distribution is Haar and deterministic.
    ph = np.diag(rmat).copy()
    ph = ph / np.abs(ph)
    return qmat * ph
