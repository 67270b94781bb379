"""Coherence measures.

``l1`` and ``relative_entropy`` are explicit functions of the state. ``trace``
and ``fidelity`` are distances to the nearest incoherent (diagonal) state:
closed forms are used for qubits and, for the trace norm, for the X/Y/Z qutrit
classes; everything else goes through a grid search over the probability
simplex followed by line-search refinement (plus a smoothed continuation for
the non-differentiable trace norm).
"""

import enum
import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .linalg import eigvalsh, psd_sqrt
from .states import (
    dephase,
    diagonal_state,
    qutrit_class_of,
    to_bloch,
    validate_state,
)

ENTROPY_FLOOR = 1e-12
TIE_TOL = 1e-12
GOLDEN_TOL = 1e-10

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


class Measure(str, enum.Enum):
    L1 = "l1"
    TRACE = "trace"
    FIDELITY = "fidelity"
    RELATIVE_ENTROPY = "relative_entropy"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        aliases = {"relent": cls.RELATIVE_ENTROPY, "tr": cls.TRACE, "f": cls.FIDELITY}
        key = str(name).lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown measure {name!r}; expected one of "
                             f"{', '.join(m.value for m in cls)}") from None


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    argmin_state: Optional[np.ndarray]
    method: str  # "closed_form", "grid" or "refine"

    def __float__(self):
        return float(self.value)


def c_l1(rho):
    rho = validate_state(rho)
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diag(rho))))


def von_neumann_entropy(rho):
    """Entropy in bits; eigenvalues below 1e-12 count as zero."""
    w = eigvalsh(rho)
    w = w[w > ENTROPY_FLOOR]
    return float(-np.sum(w * np.log2(w)))


def c_relative_entropy(rho):
    rho = validate_state(rho)
    return max(0.0, von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho))


# --- distances to diagonal states, vectorised over a batch of diagonals -----

def _trace_distances(rho):
    eye = np.eye(rho.shape[0])[None]

    def batch(diagonals):
        diffs = rho[None, :, :] - diagonals[:, :, None] * eye
        return np.abs(np.linalg.eigvalsh(diffs)).sum(axis=-1)
    return batch


def _fidelity_distances(rho):
    # sqrt F(rho, diag(q)) = || sqrt(rho) sqrt(diag(q)) ||_1
    root = psd_sqrt(rho)

    def batch(diagonals):
        prods = root[None, :, :] * np.sqrt(np.clip(diagonals, 0.0, None))[:, None, :]
        return 1.0 - np.linalg.svd(prods, compute_uv=False).sum(axis=-1)
    return batch


# each entry maps a state to a batch evaluator over rows of diagonal entries
DISTANCES = {
    "trace": _trace_distances,
    "one_minus_sqrt_fidelity": _fidelity_distances,
}


def simplex_grid(dim, points):
    """Lattice points of the probability simplex, in lexicographic order.

    ``points`` is the number of samples along each coordinate axis, so the
    lattice spacing is ``1 / (points - 1)``.
    """
    n = points - 1
    if dim == 2:
        p = np.arange(points) / n
        return np.column_stack([p, 1.0 - p])
    rows = [c for c in itertools.product(range(n + 1), repeat=dim - 1) if sum(c) <= n]
    idx = np.array(rows, dtype=float)
    return np.column_stack([idx / n, 1.0 - idx.sum(axis=1) / n])


def _golden(f, lo, hi, tol=GOLDEN_TOL):
    """Minimise a unimodal scalar function on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    best = min(((c, fc), (d, fd), (lo, f(lo)), (hi, f(hi))), key=lambda t: t[1])
    return best


def _refine(dist, start, start_value, max_sweeps=200):
    """Pairwise mass-transfer line searches on the simplex.

    Each move shifts weight between two coordinates, which keeps the point
    feasible; along any such line the distance is convex, so a golden-section
    search over the whole feasible segment finds the line minimum.
    """
    x = start.copy()
    fx = start_value
    pairs = list(itertools.combinations(range(len(x)), 2))
    for _ in range(max_sweeps):
        before = fx
        for i, j in pairs:
            total = x[i] + x[j]
            if total <= 0.0:
                continue

            def along(t, i=i, j=j, total=total):
                y = x.copy()
                y[i], y[j] = t, total - t
                return dist(y)

            t, ft = _golden(along, 0.0, total)
            if ft < fx - 1e-15:
                x[i], x[j] = t, total - t
                fx = ft
        if before - fx <= 1e-15:
            break
    return x, fx


_SMOOTHING = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10)


def _smoothed_trace_refine(rho, start):
    """Minimise ``sum_i sqrt(lambda_i**2 + mu**2)`` over the simplex for shrinking ``mu``.

    The trace norm has kinks wherever ``rho - diag(q)`` is singular, which is
    typically where the optimum sits; axis-aligned line searches stall there.
    """
    d = len(start)
    q = start.copy()
    constraint = {"type": "eq", "fun": lambda q: q.sum() - 1.0, "jac": lambda q: np.ones(d)}
    for mu in _SMOOTHING:
        def objective(q, mu=mu):
            w, V = np.linalg.eigh(rho - np.diag(q))
            s = np.sqrt(w * w + mu * mu)
            return s.sum(), -(np.abs(V) ** 2) @ (w / s)

        res = minimize(objective, q, jac=True, method="SLSQP", bounds=[(0.0, 1.0)] * d,
                       constraints=[constraint], options={"ftol": 1e-15, "maxiter": 500})
        q = np.clip(res.x, 0.0, None)
        q /= q.sum()
    return q


def _simplex_search(rho, distance, points, refine=True):
    batch = DISTANCES[distance](rho)
    grid = simplex_grid(rho.shape[0], points)
    values = batch(grid)
    best = values.min()
    # lowest lexicographic grid point among ties
    k = int(np.flatnonzero(values <= best + TIE_TOL)[0])
    x, fx = grid[k].copy(), float(values[k])
    method = "grid"
    if refine:
        def single(q):
            return float(batch(q[None, :])[0])

        y, fy = _refine(single, x, fx)
        if distance == "trace" and len(x) > 2:
            z = _smoothed_trace_refine(rho, y)
            z, fz = _refine(single, z, single(z))
            if fz < fy:
                y, fy = z, fz
        # gains at roundoff level would override the grid tie-break
        if fy < fx - TIE_TOL:
            x, fx, method = y, fy, "refine"
    return OptimizationResult(max(fx, 0.0), diagonal_state(x), method), grid, values


def brute_force_min(rho, distance, grid_points=200):
    """Exhaustive simplex grid plus line-search refinement (qubits and qutrits).

    ``distance`` is ``"trace"`` or ``"one_minus_sqrt_fidelity"``. Serves as the
    independent oracle for the closed forms.
    """
    rho = validate_state(rho)
    if rho.shape[0] not in (2, 3):
        raise ValueError(f"brute_force_min supports dim 2 and 3, got {rho.shape[0]}")
    if distance not in DISTANCES:
        raise ValueError(f"unknown distance {distance!r}")
    if grid_points < 100:
        raise ValueError("grid_points must be at least 100")
    return _simplex_search(rho, distance, grid_points)[0]


# coarse lattice for d >= 4 where a full grid is too large
_HIGH_DIM_POINTS = {4: 21, 5: 11, 6: 7, 7: 5, 8: 4}


def _general_search(rho, distance):
    d = rho.shape[0]
    if d == 3:
        return brute_force_min(rho, distance, 100)
    return _simplex_search(rho, distance, _HIGH_DIM_POINTS[d])[0]


def c_trace(rho):
    rho = validate_state(rho)
    d = rho.shape[0]
    if d == 2:
        return OptimizationResult(2.0 * abs(rho[0, 1]), dephase(rho), "closed_form")
    if d == 3:
        tag = qutrit_class_of(rho)
        if tag is not None:
            return OptimizationResult(c_l1(rho), dephase(rho), "closed_form")
    if d == 1:
        return OptimizationResult(0.0, rho.copy(), "closed_form")
    return _general_search(rho, "trace")


def fidelity_optimal_sz(r):
    """Bloch z-component of the incoherent qubit state closest in fidelity."""
    rx, ry, rz = r
    mixedness = max(0.0, 1.0 - rx * rx - ry * ry - rz * rz)
    denom = np.sqrt(rz * rz + mixedness)
    if denom == 0.0:
        return 0.0
    return float(np.clip(rz / denom, -1.0, 1.0))


def c_fidelity(rho):
    rho = validate_state(rho)
    d = rho.shape[0]
    if d == 2:
        r = to_bloch(rho)
        transverse = r.rx * r.rx + r.ry * r.ry
        value = 1.0 - np.sqrt(0.5) * np.sqrt(1.0 + np.sqrt(max(0.0, 1.0 - transverse)))
        sz = fidelity_optimal_sz(r)
        return OptimizationResult(max(float(value), 0.0),
                                  diagonal_state([(1 + sz) / 2, (1 - sz) / 2]), "closed_form")
    if d == 1:
        return OptimizationResult(0.0, rho.copy(), "closed_form")
    return _general_search(rho, "one_minus_sqrt_fidelity")


def x_class_eigenvalues(state, delta):
    """Eigenvalues of ``rho_X - diag(x, y, z)`` for an X-class qutrit, unsorted.

    Returns ``(a22 - y, (y - a22)/2 - R/2, (y - a22)/2 + R/2)`` with
    ``R = sqrt((2x + y - 2 a11 - a22)**2 + 4 |a13|**2)``.
    """
    if state.tag != "X":
        raise ValueError(f"expected an X-class state, got {state.tag}")
    x, y, _ = (float(v) for v in delta)
    a11, a22, _ = state.diagonal
    radical = np.sqrt((2 * x + y - 2 * a11 - a22) ** 2 + 4 * abs(state.off_diagonal) ** 2)
    centre = (y - a22) / 2
    return (a22 - y, centre - radical / 2, centre + radical / 2)


_DISPATCH = {
    Measure.L1: c_l1,
    Measure.TRACE: lambda rho: c_trace(rho).value,
    Measure.FIDELITY: lambda rho: c_fidelity(rho).value,
    Measure.RELATIVE_ENTROPY: c_relative_entropy,
}


def coherence(rho, measure):
    """Scalar value of ``measure`` on ``rho``."""
    return float(_DISPATCH[Measure.parse(measure)](rho))


def evaluate(rho, measure):
    """Full result for ``measure``: an OptimizationResult for distance-based measures."""
    measure = Measure.parse(measure)
    if measure is Measure.TRACE:
        return c_trace(rho)
    if measure is Measure.FIDELITY:
        return c_fidelity(rho)
    return OptimizationResult(coherence(rho, measure), None, "closed_form")
