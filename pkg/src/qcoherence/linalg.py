"""Small-dimension Hermitian linear algebra.

Eigendecompositions use closed forms for 2x2 and 3x3 Hermitian matrices and a
cyclic complex Jacobi iteration above that. All tolerances are absolute.
"""

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-9
PSD_REJECT = 1e-8

_EPS = np.finfo(float).eps


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def max_asymmetry(M):
    M = _as_square(M)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def is_hermitian(M, atol=HERMITIAN_TOL):
    return max_asymmetry(M) <= atol


_TINY = np.finfo(float).tiny


def _eig2(H):
    a, d = H[0, 0].real, H[1, 1].real
    b = H[0, 1]
    mean, half = 0.5 * (a + d), 0.5 * (a - d)
    r = np.hypot(half, abs(b))
    # subnormal couplings are treated as zero; their squares underflow
    if abs(b) < _TINY:
        w = np.array([a, d])
        V = np.eye(2, dtype=complex)
        order = np.argsort(w, kind="stable")
        return w[order], V[:, order]
    lam_hi = mean + r
    # pick the row that avoids cancellation in lam_hi - a or lam_hi - d
    if half >= 0:
        v = np.array([lam_hi - d, np.conj(b)], dtype=complex)
    else:
        v = np.array([b, lam_hi - a], dtype=complex)
    v /= np.max(np.abs(v))  # keeps the squared norm from underflowing
    v /= np.linalg.norm(v)
    u = np.array([-np.conj(v[1]), np.conj(v[0])])
    return np.array([mean - r, lam_hi]), np.column_stack([u, v])


def _null_vector3(A):
    """Unit vector spanning the (numerical) kernel of a rank-2 3x3 matrix."""
    rows = A
    crosses = [np.cross(rows[0], rows[1]), np.cross(rows[0], rows[2]),
               np.cross(rows[1], rows[2])]
    norms = [np.linalg.norm(c) for c in crosses]
    k = int(np.argmax(norms))
    if norms[k] == 0.0:
        return None
    return crosses[k] / norms[k]


def _eig3(H):
    off = abs(H[0, 1]) ** 2 + abs(H[0, 2]) ** 2 + abs(H[1, 2]) ** 2
    diag = H.diagonal().real
    if off == 0.0:
        order = np.argsort(diag, kind="stable")
        return diag[order], np.eye(3, dtype=complex)[:, order]

    q = diag.sum() / 3.0
    p = np.sqrt((np.sum((diag - q) ** 2) + 2.0 * off) / 6.0)
    B = (H - q * np.eye(3)) / p
    r = np.clip(np.linalg.det(B).real / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    hi = q + 2.0 * p * np.cos(phi)
    lo = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    w = np.array([lo, 3.0 * q - hi - lo, hi])

    # eigenvector of the most isolated eigenvalue, then solve the 2x2 problem
    # on its orthogonal complement
    gaps = [w[1] - w[0], min(w[1] - w[0], w[2] - w[1]), w[2] - w[1]]
    k = int(np.argmax(gaps))
    v1 = _null_vector3(H - w[k] * np.eye(3))
    if v1 is None:
        return None
    e = np.zeros(3, dtype=complex)
    e[int(np.argmin(np.abs(v1)))] = 1.0
    u = e - np.vdot(v1, e) * v1
    u /= np.linalg.norm(u)
    t = np.conj(np.cross(v1, u))
    Q = np.column_stack([u, t])
    w2, V2 = _eig2(Q.conj().T @ H @ Q)
    V = np.column_stack([v1, Q @ V2])
    w = np.array([np.vdot(V[:, i], H @ V[:, i]).real for i in range(3)])
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def _jacobi(H, max_sweeps=100):
    n = H.shape[0]
    A = H.copy()
    V = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(A), 1.0)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(A.diagonal()))
        if off <= _EPS * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                mag = abs(h)
                if mag <= 1e-3 * _EPS * scale:
                    continue
                tau = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # unitary acting on columns p, q: phase h onto the real axis, then rotate
                phase = h / mag
                R = np.eye(n, dtype=complex)
                R[p, p] = c
                R[p, q] = s
                R[q, p] = -s * np.conj(phase)
                R[q, q] = c * np.conj(phase)
                A = R.conj().T @ A @ R
                A[p, q] = A[q, p] = 0.0
                V = V @ R
    w = A.diagonal().real
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def _residual_ok(H, w, V):
    scale = max(1.0, float(np.max(np.abs(H))))
    recon = np.max(np.abs(V @ np.diag(w) @ V.conj().T - H))
    ortho = np.max(np.abs(V.conj().T @ V - np.eye(len(w))))
    return recon <= 1e-12 * scale and ortho <= 1e-12


def hermitian_eig(M, atol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix with ascending eigenvalues.

    Raises ValueError if ``M`` deviates from Hermitian by more than ``atol``
    in any entry.
    """
    M = _as_square(M)
    asym = max_asymmetry(M)
    if asym > atol:
        raise ValueError(f"matrix is not Hermitian: max |M - M^H| = {asym:.3e}")
    H = 0.5 * (M + M.conj().T)
    n = H.shape[0]
    if n == 1:
        return EigenDecomposition(H.diagonal().real.copy(), np.eye(1, dtype=complex))
    result = None
    if n == 2:
        result = _eig2(H)
    elif n == 3:
        result = _eig3(H)
    if result is None or not _residual_ok(H, *result):
        result = _jacobi(H)
    return EigenDecomposition(*result)


def eigvalsh(M, atol=HERMITIAN_TOL):
    return hermitian_eig(M, atol).eigenvalues


def trace_norm(M):
    """Sum of singular values; for Hermitian input, the sum of |eigenvalues|."""
    M = _as_square(M)
    if is_hermitian(M):
        return float(np.sum(np.abs(eigvalsh(M))))
    return float(np.sum(np.linalg.svd(M, compute_uv=False)))


def psd_sqrt(M):
    """Principal square root of a positive-semidefinite Hermitian matrix."""
    w, V = hermitian_eig(M)
    if w.min() < -PSD_REJECT:
        raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {w.min():.3e}")
    # roundoff-level eigenvalues would otherwise leak as sqrt(eps) into the root
    w = np.where(w <= 4 * _EPS * max(1.0, np.abs(w).max()), 0.0, w)
    R = (V * np.sqrt(w)) @ V.conj().T
    return 0.5 * (R + R.conj().T)


def fidelity(rho, sigma):
    """Uhlmann fidelity ``(tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``.

    Evaluated as the squared trace norm of ``sqrt(rho) sqrt(sigma)``, which
    has the same value and avoids taking square roots of roundoff-sized
    eigenvalues.
    """
    from .states import validate_state

    rho = validate_state(rho)
    sigma = validate_state(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    root = trace_norm(psd_sqrt(rho) @ psd_sqrt(sigma))
    return float(np.clip(root * root, 0.0, 1.0))
