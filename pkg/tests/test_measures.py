import itertools
import math

import numpy as np
import pytest

from qcoherence.linalg import fidelity, hermitian_eig
from qcoherence.measures import (
    Measure,
    brute_force_min,
    c_fidelity,
    c_l1,
    c_relative_entropy,
    c_trace,
    coherence,
    evaluate,
    simplex_grid,
    x_class_eigenvalues,
)
from qcoherence.states import (
    dephase,
    from_bloch,
    is_incoherent,
    make_qutrit_class,
    random_diagonal_state,
    random_qutrit_class,
    random_state,
    to_bloch,
)

ALL_MEASURES = list(Measure)


def qubit_grid_oracle(r, distance, points=100_001):
    """Scan s_z over [-1, 1] using Bloch-vector formulas only."""
    rx, ry, rz = r
    sz = np.linspace(-1.0, 1.0, points)
    if distance == "trace":
        values = np.sqrt(rx**2 + ry**2 + (rz - sz) ** 2)
    else:
        F = 0.5 * (1 + rz * sz + np.sqrt(max(0.0, 1 - rx**2 - ry**2 - rz**2) * (1 - sz**2)))
        values = 1 - np.sqrt(F)
    return values.min()


# --- l1 --------------------------------------------------------------------

def test_l1_examples():
    assert c_l1(np.diag([0.2, 0.8])) == 0.0
    r = (0.3, -0.4, 0.1)
    assert c_l1(from_bloch(r)) == pytest.approx(math.hypot(r[0], r[1]), abs=1e-12)
    rho_x = make_qutrit_class("X", (0.5, 0.2, 0.3), 0.2).to_density()
    assert c_l1(rho_x) == pytest.approx(0.4, abs=1e-12)


# --- trace norm ------------------------------------------------------------

def test_trace_qubit_against_grid():
    rho = from_bloch((0.3, 0.4, 0.2))
    assert qubit_grid_oracle((0.3, 0.4, 0.2), "trace") == pytest.approx(0.5, abs=1e-6)
    res = c_trace(rho)
    assert res.value == pytest.approx(0.5, abs=1e-12)
    assert res.method == "closed_form"
    np.testing.assert_allclose(res.argmin_state, from_bloch((0, 0, 0.2)), atol=1e-12)


def test_trace_x_class_closed_form():
    s = make_qutrit_class("X", (0.5, 0.2, 0.3), 0.15)
    res = c_trace(s.to_density())
    assert res.value == pytest.approx(0.3, abs=1e-12)
    assert res.method == "closed_form"
    np.testing.assert_allclose(res.argmin_state, np.diag([0.5, 0.2, 0.3]), atol=1e-15)


def test_measures_vanish_on_incoherent(rng):
    for d in (2, 3, 4):
        delta = random_diagonal_state(d, rng)
        for m in ALL_MEASURES:
            assert coherence(delta, m) == pytest.approx(0.0, abs=1e-9)


def test_trace_equals_l1_for_qubits(rng):
    for _ in range(1000):
        rho = random_state(2, rng)
        assert c_trace(rho).value == pytest.approx(c_l1(rho), abs=1e-10)


@pytest.mark.parametrize("tag", ["X", "Y", "Z"])
def test_trace_equals_l1_for_class_qutrits(tag, rng):
    for _ in range(1000):
        rho = random_qutrit_class(tag, rng).to_density()
        assert c_trace(rho).value == pytest.approx(c_l1(rho), abs=1e-10)


def test_trace_general_qutrit_uses_search():
    rho = random_state(3, 4)
    res = c_trace(rho)
    assert res.method == "refine"
    assert is_incoherent(res.argmin_state)
    # never worse than the dephased state, never better than half the l1 bound
    assert res.value <= c_l1(rho) + 1e-12
    assert res.value >= 0


def _sdp_trace(rho):
    cp = pytest.importorskip("cvxpy")
    d = rho.shape[0]
    q = cp.Variable(d, nonneg=True)
    problem = cp.Problem(cp.Minimize(cp.normNuc(rho - cp.diag(q))), [cp.sum(q) == 1])
    problem.solve(solver="CLARABEL")
    return problem.value


@pytest.mark.parametrize("d", [3, 4])
def test_trace_general_states_against_sdp(d):
    # semidefinite-programming formulation of the same minimisation
    for seed in range(8):
        rho = random_state(d, 1000 + seed)
        assert c_trace(rho).value == pytest.approx(_sdp_trace(rho), abs=1e-6)


# --- fidelity --------------------------------------------------------------

def test_fidelity_reference_value():
    rho = from_bloch((0.5, 0.5, 0.3))
    expected = 1 - math.sqrt(0.5 * (1 + math.sqrt(2) / 2))
    assert c_fidelity(rho).value == pytest.approx(expected, abs=1e-12)
    assert c_fidelity(rho).value == pytest.approx(0.076120, abs=1e-6)


def test_fidelity_plus_state():
    expected = 1 - math.sqrt(0.5)
    assert expected == pytest.approx(0.292893, abs=1e-6)
    assert qubit_grid_oracle((1, 0, 0), "fidelity") == pytest.approx(expected, abs=1e-6)
    assert c_fidelity(from_bloch((1, 0, 0))).value == pytest.approx(expected, abs=1e-12)


def test_fidelity_argmin_attains_value(rng):
    for _ in range(200):
        rho = random_state(2, rng)
        res = c_fidelity(rho)
        assert 1 - math.sqrt(fidelity(rho, res.argmin_state)) == pytest.approx(res.value, abs=1e-9)


def test_fidelity_argmin_for_pure_state():
    # pure state: F(rho, delta) = <psi|delta|psi> is linear in s_z, optimum at the pole
    res = c_fidelity(from_bloch((0.5, 0.5, -math.sqrt(2) / 2)))
    np.testing.assert_allclose(res.argmin_state, np.diag([0, 1]), atol=1e-12)


def test_fidelity_optimum_is_not_dephased_state(rng):
    checked = 0
    for _ in range(500):
        rho = random_state(2, rng)
        r = to_bloch(rho)
        if abs(r.rz) < 1e-3 or r.rx**2 + r.ry**2 < 1e-3:
            continue
        res = c_fidelity(rho)
        assert fidelity(rho, res.argmin_state) > fidelity(rho, dephase(rho)) + 1e-12
        checked += 1
    assert checked > 400


def test_fidelity_qutrit_uses_search():
    rho = random_state(3, 9)
    res = c_fidelity(rho)
    assert res.method in ("grid", "refine")
    assert 1 - math.sqrt(fidelity(rho, res.argmin_state)) == pytest.approx(res.value, abs=1e-9)


# --- relative entropy --------------------------------------------------------

def test_relative_entropy_examples():
    assert c_relative_entropy(np.diag([0.1, 0.3, 0.6])) == pytest.approx(0.0, abs=1e-12)
    assert c_relative_entropy(from_bloch((1, 0, 0))) == pytest.approx(1.0, abs=1e-12)
    w = np.array([0.75, 0.25])  # eigenvalues (1 +- 1/2) / 2
    expected = 1.0 + np.sum(w * np.log2(w))
    assert c_relative_entropy(from_bloch((0.5, 0, 0))) == pytest.approx(expected, abs=1e-12)


def test_relative_entropy_nonnegative(rng):
    for d in (2, 3, 4):
        for _ in range(100):
            assert c_relative_entropy(random_state(d, rng)) >= 0


# --- X-class eigenvalues -----------------------------------------------------

def test_x_class_eigenvalues_at_dephased_state():
    s = make_qutrit_class("X", (0.5, 0.2, 0.3), 0.1 + 0.05j)
    lam = x_class_eigenvalues(s, s.diagonal)
    np.testing.assert_allclose(lam, [0, -abs(s.off_diagonal), abs(s.off_diagonal)], atol=1e-15)
    s0 = make_qutrit_class("X", (0.5, 0.2, 0.3), 0)
    np.testing.assert_allclose(x_class_eigenvalues(s0, s0.diagonal), [0, 0, 0], atol=1e-15)


def test_x_class_eigenvalues_match_solver(rng):
    for _ in range(300):
        s = random_qutrit_class("X", rng)
        delta = rng.dirichlet(np.ones(3))
        expected = hermitian_eig(s.to_density() - np.diag(delta)).eigenvalues
        np.testing.assert_allclose(sorted(x_class_eigenvalues(s, delta)), expected, atol=1e-10)


def test_x_class_eigenvalues_rejects_other_classes():
    with pytest.raises(ValueError, match="X-class"):
        x_class_eigenvalues(make_qutrit_class("Y", (0.5, 0.2, 0.3), 0.1), (0.4, 0.3, 0.3))


# --- brute force -------------------------------------------------------------

def test_simplex_grid_shape_and_order():
    g = simplex_grid(3, 5)
    assert len(g) == 15
    np.testing.assert_allclose(g.sum(axis=1), 1.0)
    assert np.all(g >= 0)
    assert [tuple(r) for r in g[:, :2]] == sorted(tuple(r) for r in g[:, :2])
    assert len(simplex_grid(2, 101)) == 101


def test_brute_force_qubit_examples(rng):
    for _ in range(20):
        rho = random_state(2, rng)
        r = to_bloch(rho)
        assert brute_force_min(rho, "trace").value == pytest.approx(math.hypot(r.rx, r.ry), abs=1e-6)
        cf = 1 - math.sqrt(0.5) * math.sqrt(1 + math.sqrt(max(0.0, 1 - r.rx**2 - r.ry**2)))
        assert brute_force_min(rho, "one_minus_sqrt_fidelity").value == pytest.approx(cf, abs=1e-6)


def test_brute_force_finds_dephased_state_for_x_class():
    s = make_qutrit_class("X", (0.45, 0.25, 0.3), 0.2 - 0.1j)
    res = brute_force_min(s.to_density(), "trace", 100)
    assert res.value == pytest.approx(2 * abs(s.off_diagonal), abs=1e-6)
    assert np.abs(np.diag(res.argmin_state).real - s.diagonal).sum() < 1e-4


def test_brute_force_tie_break_is_lexicographic():
    # equal-superposition pure states have F(rho, delta) = 1/d for every diagonal delta
    plus = from_bloch((1, 0, 0))
    res = brute_force_min(plus, "one_minus_sqrt_fidelity")
    assert res.value == pytest.approx(1 - math.sqrt(0.5), abs=1e-12)
    np.testing.assert_array_equal(np.diag(res.argmin_state).real, [0.0, 1.0])
    psi = np.ones(3) / math.sqrt(3)
    res = brute_force_min(np.outer(psi, psi), "one_minus_sqrt_fidelity", 100)
    np.testing.assert_allclose(np.diag(res.argmin_state).real, [0.0, 0.0, 1.0])


def test_brute_force_errors():
    with pytest.raises(ValueError, match="dim 2 and 3"):
        brute_force_min(np.eye(4) / 4, "trace")
    with pytest.raises(ValueError, match="at least 100"):
        brute_force_min(np.eye(2) / 2, "trace", 50)
    with pytest.raises(ValueError, match="unknown distance"):
        brute_force_min(np.eye(2) / 2, "bures")


# --- dispatch and symmetry -----------------------------------------------------

def test_measure_parse():
    assert Measure.parse("relent") is Measure.RELATIVE_ENTROPY
    assert Measure.parse("TRACE") is Measure.TRACE
    with pytest.raises(ValueError, match="unknown measure"):
        Measure.parse("skew")


def test_evaluate_shapes():
    rho = from_bloch((0.2, 0.1, 0.3))
    assert evaluate(rho, "l1").argmin_state is None
    assert evaluate(rho, "fidelity").method == "closed_form"


@pytest.mark.parametrize("measure", ALL_MEASURES)
def test_invariant_under_basis_relabelling(measure, rng):
    for d in (2, 3):
        rho = random_state(d, rng)
        base = coherence(rho, measure)
        for perm in itertools.permutations(range(d)):
            P = np.eye(d)[list(perm)]
            assert coherence(P @ rho @ P.T, measure) == pytest.approx(base, abs=1e-7)
