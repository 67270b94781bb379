"""Checks of the coherence-measure conditions C1, C2a, C2b and C3.

Also reproduces the fidelity counterexample to C2b (a qubit pushed through an
amplitude-damping-like channel), the r_z sweep of that example, and a
brute-force check that the dephased state is the trace-norm optimum for the
X/Y/Z qutrit classes.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import channels as ch
from .measures import Measure, _simplex_search, coherence
from .states import (
    from_bloch,
    random_diagonal_state,
    random_qutrit_class,
    random_state,
    validate_state,
)

C2_TOL = 1e-8
C3_TOL = 1e-8
C1_TOL = 1e-9

SQRT_HALF = math.sqrt(0.5)
PAPER_RZ = -SQRT_HALF


@dataclass(frozen=True)
class AxiomReport:
    condition: str
    lhs: float
    rhs: float
    passed: bool
    margin: float
    tolerance: float


def _report(condition, lhs, rhs, tol):
    lhs, rhs = float(lhs), float(rhs)
    return AxiomReport(condition, lhs, rhs, lhs >= rhs - tol, lhs - rhs, tol)


@dataclass(frozen=True)
class ViolationWitness:
    state: np.ndarray
    channel: ch.KrausChannel
    measure: Measure
    report: AxiomReport
    outcomes: tuple = ()


@dataclass(frozen=True)
class SweepRow:
    rz: float
    c_f_rho: float
    p1_cf_rho1: float
    total_avg: float


def _require_incoherent(channel):
    complete, incoherent = ch.validate(channel)
    if not complete:
        raise ValueError(f"channel {channel.label!r} fails completeness (sum K^H K != I)")
    if not incoherent:
        raise ValueError(f"channel {channel.label!r} is not incoherent "
                         "(a Kraus operator has two nonzero entries in one column)")


def check_c1(measure, dim, samples, seed):
    """Largest value of ``measure`` over random diagonal states must vanish."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    worst = 0.0
    for k in range(samples):
        rng = np.random.default_rng([seed, k])
        worst = max(worst, coherence(random_diagonal_state(dim, rng), measure))
    return _report("C1", 0.0, worst, C1_TOL)


def check_c2a(measure, rho, channel):
    _require_incoherent(channel)
    rho = validate_state(rho)
    return _report("C2a", coherence(rho, measure),
                   coherence(ch.apply(channel, rho), measure), C2_TOL)


def average_coherence(measure, outcomes):
    return sum(o.probability * coherence(o.state, measure)
               for o in outcomes if o.state is not None)


def check_c2b(measure, rho, channel):
    _require_incoherent(channel)
    rho = validate_state(rho)
    outcomes = ch.subselect(channel, rho)
    return _report("C2b", coherence(rho, measure), average_coherence(measure, outcomes), C2_TOL)


def check_c3(measure, states, weights):
    weights = np.asarray(weights, dtype=float)
    states = [validate_state(s) for s in states]
    if len(states) != len(weights) or not states:
        raise ValueError("need one weight per state and at least one state")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be nonnegative and sum to 1")
    if len({s.shape for s in states}) != 1:
        raise ValueError("all states must have the same dimension")
    mixture = sum(w * s for w, s in zip(weights, states))
    lhs = sum(w * coherence(s, measure) for w, s in zip(weights, states))
    return _report("C3", lhs, coherence(mixture, measure), C3_TOL)


# --- the fidelity counterexample ------------------------------------------

def paper_state(rz=PAPER_RZ, phase=math.pi / 4):
    """Qubit with r_x^2 + r_y^2 = 1/2; the default phase gives r_x = r_y = 1/2."""
    return from_bloch((SQRT_HALF * math.cos(phase), SQRT_HALF * math.sin(phase), rz))


def paper_channel():
    return ch.amplitude_damping_like(1.0, 0.5, math.sqrt(3.0) / 2.0)


def reproduce_counterexample():
    rho, channel = paper_state(), paper_channel()
    report = check_c2b(Measure.FIDELITY, rho, channel)
    return ViolationWitness(rho, channel, Measure.FIDELITY, report,
                            tuple(ch.subselect(channel, rho)))


def _sweep_row(rz, channel):
    rho = paper_state(rz)
    outcomes = ch.subselect(channel, rho)
    first = outcomes[0]
    p1_cf = first.probability * coherence(first.state, Measure.FIDELITY) if first.state is not None else 0.0
    return SweepRow(float(rz), coherence(rho, Measure.FIDELITY), p1_cf,
                    average_coherence(Measure.FIDELITY, outcomes))


def sweep_rz(rz_min=PAPER_RZ, rz_max=SQRT_HALF, steps=200):
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not (-SQRT_HALF - 1e-12 <= rz_min < rz_max <= SQRT_HALF + 1e-12):
        raise ValueError(f"need -sqrt(1/2) <= rz_min < rz_max <= sqrt(1/2), got [{rz_min}, {rz_max}]")
    rz_min, rz_max = max(rz_min, -SQRT_HALF), min(rz_max, SQRT_HALF)
    channel = paper_channel()
    return [_sweep_row(rz, channel) for rz in np.linspace(rz_min, rz_max, steps)]


def find_intersection(lo=PAPER_RZ, hi=-0.5, max_iter=200):
    """Bisection root of ``total_avg(rz) - C_F(rho)`` on ``[lo, hi]``."""
    channel = paper_channel()

    def gap(rz):
        row = _sweep_row(rz, channel)
        return row.total_avg - row.c_f_rho

    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo * g_hi > 0:
        raise RuntimeError(f"no sign change of the C2b gap on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        g_mid = gap(mid)
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def write_sweep_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rz", "c_f_rho", "p1_cf_rho1", "total_avg"])
        for r in rows:
            writer.writerow([f"{r.rz:.9f}", f"{r.c_f_rho:.9f}",
                             f"{r.p1_cf_rho1:.9f}", f"{r.total_avg:.9f}"])


# --- qutrit class theorem -------------------------------------------------

VALUE_BOUND = 1e-6
ARGMIN_BOUND = 1e-4
LOWER_BOUND_SLACK = 1e-10


@dataclass
class TheoremSummary:
    tag: str
    samples: int
    max_value_deviation: float = 0.0
    max_argmin_deviation: float = 0.0
    min_lower_bound_margin: float = math.inf
    grid_points_checked: int = 0

    @property
    def passed(self):
        return (self.max_value_deviation < VALUE_BOUND
                and self.max_argmin_deviation < ARGMIN_BOUND
                and self.min_lower_bound_margin >= -LOWER_BOUND_SLACK)


def verify_class_theorem(tag, samples, seed, grid_points=100):
    """Brute-force check that ``dephase(rho)`` minimises the trace distance.

    For each random class state the simplex is searched without any hint of
    the expected optimum; the minimum must equal ``2|off_diagonal|`` and sit
    at the diagonal of ``rho``, and every grid point must respect that lower
    bound.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if grid_points < 50:
        raise ValueError("grid_points must be at least 50")
    summary = TheoremSummary(tag.upper(), samples)
    for k in range(samples):
        state = random_qutrit_class(tag, np.random.default_rng([seed, k]))
        rho = state.to_density()
        expected = 2.0 * abs(state.off_diagonal)
        result, grid, values = _simplex_search(rho, "trace", grid_points)
        summary.max_value_deviation = max(summary.max_value_deviation, abs(result.value - expected))
        deviation = np.abs(np.diag(result.argmin_state).real - np.asarray(state.diagonal)).sum()
        summary.max_argmin_deviation = max(summary.max_argmin_deviation, float(deviation))
        summary.min_lower_bound_margin = min(summary.min_lower_bound_margin,
                                             float(values.min() - expected))
        summary.grid_points_checked += len(grid)
    return summary


# --- randomised audit -----------------------------------------------------

@dataclass
class ConditionTally:
    checked: int = 0
    violations: int = 0
    worst_margin: float = math.inf

    def add(self, report):
        self.checked += 1
        self.violations += not report.passed
        self.worst_margin = min(self.worst_margin, report.margin)


@dataclass
class AuditSummary:
    measure: Measure
    dim: int
    samples: int
    seed: int
    tallies: dict = field(default_factory=dict)

    @property
    def known_violations(self):
        """C2b failures of the fidelity measure on qubits, which are expected."""
        if self.measure is Measure.FIDELITY and self.dim == 2:
            return self.tallies["C2b"].violations
        return 0

    @property
    def unexpected_violations(self):
        total = sum(t.violations for t in self.tallies.values())
        return total - self.known_violations

    @property
    def passed(self):
        return self.unexpected_violations == 0


def audit(measure, dim, samples, seed):
    """Randomised C1/C2a/C2b/C3 audit; each sample is seeded from ``(seed, index)``."""
    measure = Measure.parse(measure)
    if dim not in (2, 3):
        raise ValueError("audit supports dim 2 and 3")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    summary = AuditSummary(measure, dim, samples, seed,
                           {c: ConditionTally() for c in ("C1", "C2a", "C2b", "C3")})
    summary.tallies["C1"].add(check_c1(measure, dim, samples, seed))
    for k in range(samples):
        rng = np.random.default_rng([seed, k, 1])
        rho = random_state(dim, rng)
        channel = ch.random_incoherent_channel(dim, rng)
        summary.tallies["C2a"].add(check_c2a(measure, rho, channel))
        summary.tallies["C2b"].add(check_c2b(measure, rho, channel))
        other = random_state(dim, rng)
        w = rng.random()
        summary.tallies["C3"].add(check_c3(measure, [rho, other], [w, 1.0 - w]))
    return summary

