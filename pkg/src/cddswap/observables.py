"""Functionals of two-qubit density matrices."""

from dataclasses import dataclass

import numpy as np

from .linalg import SY, dag, herm_eig

CLAMP_TOL = 1e-8
UNPHYSICAL_TOL = 1e-6
PURE_TOL = 1e-9

SYSY = np.kron(SY, SY)
# |ud> and |du> in the |uu>, |ud>, |du>, |dd> ordering
DFS_INDICES = (1, 2)


@dataclass(frozen=True)
class ObservableRecord:
    t: float
    concurrence: float
    dfs_occupancy: float
    fidelity_to_target: float
    purity: float
    positivity_defect: float


def _hermitian_part(rho):
    rho = np.asarray(rho, dtype=complex)
    return 0.5 * (rho + dag(rho))


def concurrence(rho, tol=UNPHYSICAL_TOL) -> float:
    """Wootters concurrence.

    With rho = sum_i |psi_i><psi_i| from its eigen-decomposition, the values
    lambda_i are the singular values of the symmetric matrix
    psi_i^T (sigma_y x sigma_y) psi_j. Taking singular values avoids the
    square root of round-off that limits the eigenvalue route near pure states.
    """
    rho = _hermitian_part(rho)
    w, v = herm_eig(rho)
    if w[-1] < -tol:
        raise ValueError(f"state has eigenvalue {w[-1]:.3e} below -{tol:g}; concurrence undefined")
    psi = v * np.sqrt(np.clip(w, 0.0, None))
    s = np.linalg.svd(psi.T @ SYSY @ psi, compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def dfs_occupancy(rho) -> float:
    """Weight of |rho_ij| inside the {|ud>, |du>} block relative to all entries."""
    a = np.abs(np.asarray(rho))
    total = a.sum()
    if total == 0:
        raise ValueError("dfs_occupancy of an all-zero matrix")
    idx = np.ix_(DFS_INDICES, DFS_INDICES)
    return float(a[idx].sum() / total)


def purity(rho) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))


def pure_state_vector(target):
    """Unit vector of a pure density matrix."""
    target = _hermitian_part(target)
    p = purity(target)
    if p < 1 - PURE_TOL:
        raise ValueError(f"target state is not pure (purity {p:.12f})")
    _, v = herm_eig(target)
    return v[:, 0]


def fidelity(rho, target) -> float:
    psi = pure_state_vector(target)
    f = float(np.real(np.conj(psi) @ np.asarray(rho) @ psi))
    if -CLAMP_TOL < f < 0:
        f = 0.0
    return f


def positivity_defect(rho) -> float:
    w, _ = herm_eig(_hermitian_part(rho))
    return float(max(0.0, -w[-1]))


def record(t, rho, target, tol=UNPHYSICAL_TOL) -> ObservableRecord:
    return ObservableRecord(
        t=float(t),
        concurrence=concurrence(rho, tol),
        dfs_occupancy=dfs_occupancy(rho),
        fidelity_to_target=fidelity(rho, target),
        purity=purity(rho),
        positivity_defect=positivity_defect(rho),
    )
