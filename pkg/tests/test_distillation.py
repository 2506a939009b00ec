import csv

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vacharvest.density import (TwoQubitState, assemble_rho, bell_state, from_product_basis, negativity,
                                product_state, pure_state, to_product_basis, werner_state)
from vacharvest.distillation import (DistillTrace, FilterParams, align_phases, bell_coefficients,
                                     bell_diagonal_state, bell_fidelities, distill_to_target, local_filter,
                                     optimize_filter, recurrence_map, recurrence_step, twirl_to_phi_plus)
from vacharvest.errors import NotDistillableError

_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _cnot(control, target):
    p = np.zeros((16, 16))
    for i in range(16):
        bits = [(i >> (3 - k)) & 1 for k in range(4)]
        if bits[control]:
            bits[target] ^= 1
        p[sum(b << (3 - k) for k, b in enumerate(bits)), i] = 1
    return p


def two_pair_round(coeffs):
    """Explicit 16x16 simulation of one recurrence round, qubits ordered A1 B1 A2 B2."""
    r = to_product_basis(bell_diagonal_state(coeffs).matrix)
    big = np.kron(r, r)
    ua = (np.eye(2) - 1j * _X) / np.sqrt(2)
    ub = (np.eye(2) + 1j * _X) / np.sqrt(2)
    u = np.kron(np.kron(ua, ub), np.kron(ua, ub))
    big = u @ big @ u.conj().T
    c = _cnot(0, 2) @ _cnot(1, 3)
    big = (c @ big @ c.T).reshape(4, 4, 4, 4)
    kept = big[:, 0, :, 0] + big[:, 3, :, 3]  # target pair reads 00 or 11
    p = np.trace(kept).real
    return bell_coefficients(from_product_basis(kept / p)), p


def _werner_coeffs(f):
    return np.array([f, (1 - f) / 3, (1 - f) / 3, (1 - f) / 3])


def test_identity_filter_is_a_no_op():
    rho = werner_state(0.6)
    out, p = local_filter(rho, FilterParams(1.0, 1.0))
    assert p == pytest.approx(1.0)
    assert np.allclose(out.matrix, rho.matrix, atol=1e-15)


@pytest.mark.parametrize("alpha, beta", [(0.9, 0.3), (0.6, 0.1j), (0.99, 0.05)])
def test_procrustean_filter_makes_bell_pair(alpha, beta):
    rho = pure_state([alpha, beta, 0, 0])
    k = abs(beta / alpha)
    out, p = local_filter(rho, FilterParams(np.sqrt(k), np.sqrt(k)))
    assert max(bell_fidelities(align_phases(out)).values()) == pytest.approx(1.0, abs=1e-12)
    n = abs(alpha) ** 2 + abs(beta) ** 2
    assert p == pytest.approx(2 * abs(beta) ** 2 / n)
    # the lopsided split with the same product works as well
    out2, _ = local_filter(rho, FilterParams(k, 1.0))
    assert bell_fidelities(align_phases(out2))["phi+"] == pytest.approx(1.0, abs=1e-12)


def test_optimizer_finds_procrustean_product():
    rho = pure_state([0.9, 0.3, 0, 0])
    f = optimize_filter(rho)
    assert f.eta_a * f.eta_b == pytest.approx(1 / 3, rel=1e-6)


def test_filter_validation():
    with pytest.raises(ValueError):
        FilterParams(0.0, 1.0)
    with pytest.raises(ValueError):
        FilterParams(1.0, 1.5)


def test_filter_floor():
    rho = pure_state([1, 0, 0, 0])
    with pytest.raises(NotDistillableError):
        local_filter(rho, FilterParams(1e-16, 1e-16))


def test_separable_states_stay_separable():
    rng = np.random.default_rng(4)

    def qubit():
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m = g @ g.conj().T
        return m / np.trace(m)

    for _ in range(50):
        w = rng.dirichlet(np.ones(3))
        rho = TwoQubitState(sum(wi * product_state(qubit(), qubit()).matrix for wi in w))
        for _ in range(10):
            f = FilterParams(*rng.uniform(0.01, 1.0, size=2))
            out, _ = local_filter(rho, f)
            assert negativity(out) <= 1e-12


@pytest.mark.parametrize("state", [werner_state(0.2), TwoQubitState(np.eye(4) / 4)])
def test_ppt_states_are_not_distillable(state):
    with pytest.raises(NotDistillableError):
        optimize_filter(state)
    with pytest.raises(NotDistillableError):
        distill_to_target(state)


def test_optimizer_leaves_werner_alone():
    assert optimize_filter(werner_state(0.7)) == FilterParams(1.0, 1.0)


def test_harvested_state_gains_from_filtering(harvest_amp):
    rho = assemble_rho(harvest_amp)
    before = max(bell_fidelities(align_phases(rho)).values())
    f = optimize_filter(rho)
    out, p = local_filter(rho, f)
    after = max(bell_fidelities(align_phases(out)).values())
    assert before < 0.51 < after
    assert after > 0.55
    assert 0 < p < 1


def test_align_phases_makes_coherences_real():
    v = np.array([0.8, 0.6 * np.exp(1.1j), 0, 0])
    rho = align_phases(pure_state(v))
    assert rho.matrix[0, 1].imag == pytest.approx(0, abs=1e-15)
    assert rho.matrix[0, 1].real > 0


@pytest.mark.parametrize("f", [0.3, 0.6, 0.8, 0.95])
def test_recurrence_map_matches_two_pair_simulation_werner(f):
    c = _werner_coeffs(f)
    sim, p_sim = two_pair_round(c)
    out, p = recurrence_map(c)
    assert np.max(np.abs(sim - out)) <= 1e-12
    assert p == pytest.approx(p_sim, abs=1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_recurrence_map_matches_two_pair_simulation_random(seed):
    c = np.random.default_rng(seed).dirichlet(np.ones(4))
    sim, p_sim = two_pair_round(c)
    out, p = recurrence_map(c)
    assert np.max(np.abs(sim - out)) <= 1e-12
    assert p == pytest.approx(p_sim, abs=1e-12)


@pytest.mark.parametrize("f", np.arange(0.55, 0.96, 0.05))
def test_recurrence_improves_werner_fidelity(f):
    out, p = recurrence_map(_werner_coeffs(f))
    assert out[0] > f
    assert out.sum() == pytest.approx(1.0)
    assert 0 < p <= 1


def test_recurrence_degrades_low_fidelity():
    out, _ = recurrence_map(_werner_coeffs(0.3))
    assert out[0] < 0.3


def test_bell_pair_is_a_fixed_point():
    out, p = recurrence_map([1, 0, 0, 0])
    assert np.array_equal(out, [1, 0, 0, 0]) and p == 1.0


def test_recurrence_step_on_state():
    rho, p = recurrence_step(werner_state(0.6))
    # psi- dominant input is relabelled to phi+ first
    assert bell_fidelities(rho)["phi+"] > 0.7
    assert 0 < p < 1


def test_twirl_relabels_dominant_weight():
    c = twirl_to_phi_plus(bell_state("psi-"))
    assert c[0] == pytest.approx(1.0)
    assert bell_coefficients(bell_state("phi-"))[3] == pytest.approx(1.0)


def test_bell_input_needs_no_rounds():
    trace = distill_to_target(bell_state("phi+"), 0.99)
    assert trace.converged
    assert trace.recurrence_rounds == 0
    assert trace.fidelities == [pytest.approx(1.0)]


def test_werner_reaches_target():
    trace = distill_to_target(werner_state(0.7 * 4 / 3 - 1 / 3), 0.99)
    f = trace.fidelities
    assert f[0] == pytest.approx(0.7)
    assert trace.converged and f[-1] >= 0.99
    assert all(b > a for a, b in zip(f, f[1:]))


def test_harvested_state_distills(harvest_amp):
    trace = distill_to_target(assemble_rho(harvest_amp), 0.9, max_rounds=30)
    assert trace.converged
    f = trace.fidelities
    assert f[0] == pytest.approx(0.557, abs=2e-3)
    assert all(b > a for a, b in zip(f, f[1:]))
    pairs = [r.pairs_remaining for r in trace.rounds]
    assert all(b < a for a, b in zip(pairs, pairs[1:]))
    assert all(0 < r.success_prob <= 1 for r in trace.rounds)


def test_round_limit_reported():
    trace = distill_to_target(werner_state(0.45), 0.999, max_rounds=2)
    assert not trace.converged
    assert trace.recurrence_rounds == 2


def test_target_validation():
    with pytest.raises(ValueError):
        distill_to_target(werner_state(0.7), 1.0)
    with pytest.raises(ValueError):
        distill_to_target(werner_state(0.7), 0.5)


def test_trace_csv(tmp_path):
    trace = distill_to_target(werner_state(0.6), 0.95)
    path = tmp_path / "d.csv"
    trace.write_csv(path)
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["round", "fidelity", "p_success", "pairs_remaining"]
    assert len(rows) == len(trace.rounds)
    assert float(rows[-1]["fidelity"]) == trace.fidelities[-1]


def test_empty_trace():
    t = DistillTrace()
    assert t.recurrence_rounds == 0 and t.fidelities == []
