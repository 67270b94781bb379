"""Kraus channels: validation, application and outcome subselection."""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .states import load_json_file, matrix_from_json, matrix_to_json, validate_state

COMPLETENESS_TOL = 1e-9
NONZERO_TOL = 1e-12
NULL_OUTCOME = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    operators: tuple
    label: str = ""

    def __post_init__(self):
        ops = tuple(np.array(K, dtype=complex) for K in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ValueError(f"Kraus operators must be square, got shape {shape}")
        for n, K in enumerate(ops):
            if K.shape != shape:
                raise ValueError(f"Kraus operator {n} has shape {K.shape}, expected {shape}")
            K.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def __len__(self):
        return len(self.operators)


class ChannelValidation(NamedTuple):
    complete: bool
    incoherent: bool


@dataclass(frozen=True)
class ChannelOutcome:
    outcome_index: int
    probability: float
    state: Optional[np.ndarray]  # None marks a zero-probability outcome


def completeness_defect(channel):
    total = sum(K.conj().T @ K for K in channel.operators)
    return float(np.max(np.abs(total - np.eye(channel.dim))))


def validate(channel):
    """Check completeness and incoherence preservation of every operator.

    An operator maps diagonal states to diagonal states exactly when each of
    its columns holds at most one nonzero entry.
    """
    complete = completeness_defect(channel) <= COMPLETENESS_TOL
    incoherent = all(
        np.all(np.count_nonzero(np.abs(K) > NONZERO_TOL, axis=0) <= 1)
        for K in channel.operators
    )
    return ChannelValidation(bool(complete), bool(incoherent))


def _require_complete(channel, rho):
    defect = completeness_defect(channel)
    if defect > COMPLETENESS_TOL:
        raise ValueError(f"channel {channel.label!r} is not trace preserving "
                         f"(max |sum K^H K - I| = {defect:.3e})")
    rho = validate_state(rho)
    if rho.shape[0] != channel.dim:
        raise ValueError(f"state dim {rho.shape[0]} does not match channel dim {channel.dim}")
    return rho


def apply(channel, rho):
    rho = _require_complete(channel, rho)
    out = sum(K @ rho @ K.conj().T for K in channel.operators)
    return 0.5 * (out + out.conj().T)


def subselect(channel, rho):
    """Split the channel action into measurement outcomes ``(p_n, rho_n)``."""
    rho = _require_complete(channel, rho)
    outcomes = []
    for n, K in enumerate(channel.operators):
        unnormalized = K @ rho @ K.conj().T
        p = float(np.trace(unnormalized).real)
        if p < NULL_OUTCOME:
            outcomes.append(ChannelOutcome(n, max(p, 0.0), None))
            continue
        state = unnormalized / p
        outcomes.append(ChannelOutcome(n, p, 0.5 * (state + state.conj().T)))
    return outcomes


def amplitude_damping_like(a, b, c):
    """Two-outcome channel ``K1 = [[a, 0], [0, b]]``, ``K2 = [[0, c], [0, 0]]``."""
    a, b, c = complex(a), complex(b), complex(c)
    if abs(abs(a) ** 2 - 1.0) > COMPLETENESS_TOL:
        raise ValueError(f"|a|^2 must be 1, got {abs(a) ** 2:.12g}")
    if abs(abs(b) ** 2 + abs(c) ** 2 - 1.0) > COMPLETENESS_TOL:
        raise ValueError(f"|b|^2 + |c|^2 must be 1, got {abs(b) ** 2 + abs(c) ** 2:.12g}")
    K1 = np.array([[a, 0], [0, b]])
    K2 = np.array([[0, c], [0, 0]])
    return KrausChannel((K1, K2), label=f"amplitude_damping_like(a={a:g}, b={b:g}, c={c:g})")


def identity_channel(dim):
    return KrausChannel((np.eye(dim),), label="identity")


def dephasing_channel(dim):
    projectors = []
    for i in range(dim):
        P = np.zeros((dim, dim))
        P[i, i] = 1.0
        projectors.append(P)
    return KrausChannel(tuple(projectors), label="dephasing")


def random_incoherent_channel(dim, rng):
    """Two-operator incoherent channel ``K1 = D1``, ``K2 = P D2``.

    ``D1``, ``D2`` are diagonal with ``|D1|^2 + |D2|^2 = I`` and ``P`` is a
    random permutation. With probability 1/4 one entry of ``D2`` is zeroed
    (its partner in ``D1`` then has unit modulus), which covers damping-type
    channels whose second outcome is always incoherent.
    """
    weights = rng.random(dim)
    if rng.random() < 0.25:
        weights[rng.integers(dim)] = 1.0
    phases = np.exp(2j * np.pi * rng.random((2, dim)))
    D1 = np.diag(np.sqrt(weights) * phases[0])
    D2 = np.diag(np.sqrt(1.0 - weights) * phases[1])
    P = np.eye(dim)[rng.permutation(dim)]
    return KrausChannel((D1, P @ D2), label="random_incoherent")


def channel_to_json(channel):
    return {"dim": channel.dim, "label": channel.label,
            "operators": [matrix_to_json(K) for K in channel.operators]}


def channel_from_json(obj):
    if not isinstance(obj, dict) or "operators" not in obj:
        raise ValueError("channel: expected an object with fields dim, operators")
    dim = obj.get("dim")
    ops_json = obj["operators"]
    if not isinstance(ops_json, list) or not ops_json:
        raise ValueError("channel.operators: expected a nonempty list")
    ops = []
    for n, op in enumerate(ops_json):
        if isinstance(op, dict) and "dim" not in op:
            op = {"dim": dim, **op}
        K = matrix_from_json(op, f"channel.operators[{n}]")
        if dim is not None and K.shape[0] != dim:
            raise ValueError(f"channel.operators[{n}]: dim {K.shape[0]} does not match channel dim {dim}")
        ops.append(K)
    try:
        return KrausChannel(tuple(ops), label=str(obj.get("label", "")))
    except ValueError as exc:
        raise ValueError(f"channel: {exc}") from None


def load_channel(path):
    return channel_from_json(load_json_file(path))
