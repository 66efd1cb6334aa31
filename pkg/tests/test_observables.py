import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cddswap import observables as obs
from cddswap.linalg import I4, SWAP, unitary_exp, PAULI

BELL = np.array([0, 1, 1, 0]) / np.sqrt(2)


def proj(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def werner(p):
    return p * proj(BELL) + (1 - p) * I4 / 4


@pytest.mark.parametrize("p", [0, 1 / 3, 0.5, 0.8, 1])
def test_werner_concurrence(p):
    assert obs.concurrence(werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-9)


@pytest.mark.parametrize("a", [0.0, 0.3, 0.5, 0.9])
def test_pure_state_concurrence(a):
    # a|ud> + b|du> has concurrence 2|ab|
    b = np.sqrt(1 - a**2) * np.exp(0.7j)
    assert obs.concurrence(proj([0, a, b, 0])) == pytest.approx(2 * abs(a * b), abs=1e-9)


def test_product_states_unentangled():
    assert obs.concurrence(np.diag([0, 1, 0, 0])) == 0.0
    assert obs.concurrence(I4 / 4) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6), st.floats(0, 1))
def test_concurrence_local_unitary_invariant(angles, p):
    def local(a):
        return unitary_exp(sum(x * s for x, s in zip(a, PAULI)), 1.0)

    u = np.kron(local(angles[:3]), local(angles[3:]))
    rho = 0.6 * werner(p) + 0.4 * proj([0.6, 0, 0.8j, 0])
    assert obs.concurrence(u @ rho @ u.conj().T) == pytest.approx(obs.concurrence(rho), abs=1e-9)


def test_concurrence_rejects_unphysical():
    bad = np.diag([0.6, 0.5, -0.1, 0.0])
    with pytest.raises(ValueError):
        obs.concurrence(bad)
    assert obs.positivity_defect(bad) == pytest.approx(0.1)
    obs.concurrence(bad, tol=np.inf)


def test_dfs_occupancy():
    assert obs.dfs_occupancy(proj(BELL)) == pytest.approx(1.0)
    assert obs.dfs_occupancy(np.diag([1, 0, 0, 0])) == 0.0
    assert obs.dfs_occupancy(np.ones((4, 4)) / 4) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        obs.dfs_occupancy(np.zeros((4, 4)))


def test_fidelity_and_purity():
    target = proj(BELL)
    assert obs.fidelity(target, target) == pytest.approx(1.0)
    assert obs.fidelity(proj([0, 1, -1, 0]) / 2, target) == pytest.approx(0.0, abs=1e-15)
    assert obs.fidelity(I4 / 4, target) == pytest.approx(0.25)
    assert obs.purity(I4 / 4) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        obs.fidelity(target, I4 / 4)


def test_pure_state_vector_phase_free():
    v = obs.pure_state_vector(proj(SWAP @ [0, 1, 0, 0]))
    assert abs(v[2]) == pytest.approx(1.0)


def test_record():
    r = obs.record(0.5, werner(0.8), proj(BELL))
    assert r.t == 0.5 and r.concurrence == pytest.approx(0.7) and r.positivity_defect == 0.0
