"""Density matrices, Bloch vectors and the X/Y/Z qutrit families.

States are plain complex numpy arrays; :func:`validate_state` is the single
gate that enforces Hermiticity, unit trace and positivity. The incoherent
basis is always the computational basis ``|0>, ..., |d-1>``.
"""

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import eigvalsh, max_asymmetry

STATE_TOL = 1e-9
INCOHERENCE_TOL = 1e-9
MAX_DIM = 8

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class BlochVector(NamedTuple):
    rx: float
    ry: float
    rz: float

    @property
    def norm(self):
        return float(np.sqrt(self.rx**2 + self.ry**2 + self.rz**2))


def validate_state(rho, tol=STATE_TOL):
    """Return ``rho`` as a complex array, raising ValueError if it is not a state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not 1 <= rho.shape[0] <= MAX_DIM:
        raise ValueError(f"dimension {rho.shape[0]} outside supported range 1..{MAX_DIM}")
    asym = max_asymmetry(rho)
    if asym > tol:
        raise ValueError(f"density matrix is not Hermitian (max asymmetry {asym:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr:.12g}, expected 1")
    lo = eigvalsh(rho).min()
    if lo < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def is_state(rho, tol=STATE_TOL):
    try:
        validate_state(rho, tol)
    except ValueError:
        return False
    return True


def from_bloch(r):
    """Qubit state ``(I + r.sigma) / 2``."""
    r = BlochVector(*(float(x) for x in r))
    if r.norm > 1.0 + STATE_TOL:
        raise ValueError(f"Bloch vector has length {r.norm:.12g} > 1")
    return 0.5 * (np.eye(2, dtype=complex) + r.rx * PAULI[0] + r.ry * PAULI[1] + r.rz * PAULI[2])


def to_bloch(rho):
    rho = validate_state(rho)
    if rho.shape != (2, 2):
        raise ValueError(f"Bloch representation needs a qubit, got dim {rho.shape[0]}")
    return BlochVector(
        2.0 * rho[0, 1].real,
        -2.0 * rho[0, 1].imag,
        (rho[0, 0] - rho[1, 1]).real,
    )


def bloch_fidelity(r, s):
    """Qubit fidelity written in terms of the two Bloch vectors."""
    r, s = np.asarray(r, dtype=float), np.asarray(s, dtype=float)
    purity = max(0.0, 1.0 - r @ r) * max(0.0, 1.0 - s @ s)
    return 0.5 * (1.0 + r @ s + np.sqrt(purity))


def dephase(rho):
    """Diagonal part of ``rho`` in the incoherent basis."""
    rho = np.asarray(rho, dtype=complex)
    return np.diag(np.diag(rho).real).astype(complex)


def is_incoherent(rho, tol=INCOHERENCE_TOL):
    rho = np.asarray(rho, dtype=complex)
    off = rho - np.diag(np.diag(rho))
    return bool(np.all(np.abs(off) <= tol))


def diagonal_state(p):
    p = np.asarray(p, dtype=float)
    return np.diag(p).astype(complex)


def random_state(dim, seed, ensemble=None):
    """Seeded random density matrix.

    ``bloch_ball`` (qubits only) samples uniformly inside the unit ball;
    ``hilbert_schmidt`` returns ``G G^H / tr(G G^H)`` for a standard complex
    Gaussian ``G``. The default is ``bloch_ball`` for qubits and
    ``hilbert_schmidt`` otherwise.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    if ensemble is None:
        ensemble = "bloch_ball" if dim == 2 else "hilbert_schmidt"
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if ensemble == "bloch_ball":
        if dim != 2:
            raise ValueError("bloch_ball ensemble is only defined for dim 2")
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        return from_bloch(direction * rng.random() ** (1.0 / 3.0))
    if ensemble == "hilbert_schmidt":
        G = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = G @ G.conj().T
        rho /= np.trace(rho).real
        return 0.5 * (rho + rho.conj().T)
    raise ValueError(f"unknown ensemble {ensemble!r}")


def random_diagonal_state(dim, rng):
    return diagonal_state(rng.dirichlet(np.ones(dim)))


# --- X/Y/Z qutrit classes ---------------------------------------------------

CLASS_PAIRS = {"X": (0, 2), "Y": (0, 1), "Z": (1, 2)}


@dataclass(frozen=True)
class QutritClassState:
    """Qutrit with a single coupled pair of basis states.

    X couples levels 1 and 3, Y couples 1 and 2, Z couples 2 and 3 (1-based).
    """

    tag: str
    diagonal: tuple
    off_diagonal: complex

    @property
    def pair(self):
        return CLASS_PAIRS[self.tag]

    def to_density(self):
        rho = np.diag(np.asarray(self.diagonal, dtype=complex))
        i, j = self.pair
        rho[i, j] = self.off_diagonal
        rho[j, i] = np.conj(self.off_diagonal)
        return rho


def make_qutrit_class(tag, diagonal, off_diagonal):
    tag = str(tag).upper()
    if tag not in CLASS_PAIRS:
        raise ValueError(f"unknown qutrit class {tag!r}; expected X, Y or Z")
    diag = tuple(float(x) for x in diagonal)
    if len(diag) != 3:
        raise ValueError("qutrit class needs exactly three diagonal entries")
    if min(diag) < -STATE_TOL:
        raise ValueError(f"negative diagonal entry in {diag}")
    if abs(sum(diag) - 1.0) > STATE_TOL:
        raise ValueError(f"diagonal sums to {sum(diag):.12g}, expected 1")
    off = complex(off_diagonal)
    i, j = CLASS_PAIRS[tag]
    if abs(off) ** 2 > diag[i] * diag[j] + STATE_TOL:
        raise ValueError(
            f"|off_diagonal|^2 = {abs(off) ** 2:.6g} exceeds a{i + 1}{i + 1}*a{j + 1}{j + 1} "
            f"= {diag[i] * diag[j]:.6g}; matrix would not be positive semidefinite"
        )
    return QutritClassState(tag, diag, off)


def random_qutrit_class(tag, rng):
    diag = rng.dirichlet(np.ones(3))
    i, j = CLASS_PAIRS[tag.upper()]
    radius = np.sqrt(diag[i] * diag[j]) * rng.random()
    return make_qutrit_class(tag, diag, radius * np.exp(2j * np.pi * rng.random()))


def qutrit_class_of(rho, tol=1e-12):
    """Class tag of a 3x3 matrix with at most one nonzero off-diagonal pair, else None.

    Diagonal matrices report ``"X"``.
    """
    rho = np.asarray(rho)
    if rho.shape != (3, 3):
        return None
    nonzero = [tag for tag, (i, j) in CLASS_PAIRS.items() if abs(rho[i, j]) > tol]
    if len(nonzero) > 1:
        return None
    return nonzero[0] if nonzero else "X"


# --- JSON -------------------------------------------------------------------

def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    return {"dim": M.shape[0], "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(obj, where="state"):
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: expected an object with fields dim, re, im")
    for key in ("dim", "re", "im"):
        if key not in obj:
            raise ValueError(f"{where}: missing field {key!r}")
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValueError(f"{where}.dim: expected a positive integer, got {dim!r}")
    parts = []
    for key in ("re", "im"):
        try:
            arr = np.asarray(obj[key], dtype=float)
        except (TypeError, ValueError):
            raise ValueError(f"{where}.{key}: expected a {dim}x{dim} array of numbers") from None
        if arr.shape != (dim, dim):
            raise ValueError(f"{where}.{key}: expected shape ({dim}, {dim}), got {arr.shape}")
        parts.append(arr)
    return parts[0] + 1j * parts[1]


def state_to_json(rho):
    return matrix_to_json(rho)


def state_from_json(obj):
    rho = matrix_from_json(obj, "state")
    try:
        return validate_state(rho)
    except ValueError as exc:
        raise ValueError(f"state: {exc}") from None


def load_json_file(path):
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_state(path):
    return state_from_json(load_json_file(path))
