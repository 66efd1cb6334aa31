"""Small dense complex linear algebra for one- and two-qubit operators."""

import numpy as np

HERM_TOL = 1e-12
EIG_HERM_TOL = 1e-10
RECON_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

# basis order |uu>, |ud>, |du>, |dd> with |u> = (1, 0)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

for _m in (I2, I4, SX, SY, SZ, SWAP):
    _m.setflags(write=False)


def _as_square(a, dims=(2, 4), name="matrix"):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise ValueError(f"{name} must be square with dimension in {dims}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def dag(a):
    return np.conjugate(np.swapaxes(a, -1, -2))


def is_hermitian(a, tol=HERM_TOL):
    a = np.asarray(a)
    return bool(np.max(np.abs(a - dag(a)), initial=0.0) <= tol * max(1.0, np.max(np.abs(a), initial=0.0)))


def kron(a, b):
    """Tensor product of two single-qubit operators."""
    a = _as_square(a, dims=(2,), name="a")
    b = _as_square(b, dims=(2,), name="b")
    return np.kron(a, b)


def on_qubit(op, qubit):
    """Embed a 2x2 operator on qubit 1 or 2 of the pair."""
    if qubit == 1:
        return kron(op, I2)
    if qubit == 2:
        return kron(I2, op)
    raise ValueError(f"qubit must be 1 or 2, got {qubit}")


def herm_eig(h, tol=EIG_HERM_TOL):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(evals, evecs)`` with eigenvalues sorted in descending order and
    the matching eigenvectors as the columns of ``evecs``.
    """
    h = _as_square(h, name="h")
    if not is_hermitian(h, tol):
        raise ValueError("herm_eig requires a Hermitian matrix")
    h = 0.5 * (h + dag(h))
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def unitary_exp(h, theta):
    """Return exp(-i * theta * h) for Hermitian ``h`` via its spectral decomposition."""
    h = _as_square(h, name="h")
    if not is_hermitian(h, HERM_TOL):
        raise ValueError("unitary_exp requires a Hermitian generator")
    w, v = herm_eig(h)
    return (v * np.exp(-1j * theta * w)) @ dag(v)


def frobenius(a):
    return float(np.linalg.norm(np.asarray(a), ord=None))


def sqrtm_psd(rho):
    """Principal square root of a Hermitian matrix, clamping negative eigenvalues."""
    w, v = herm_eig(rho)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ dag(v)


HEISENBERG = sum(kron(s, s) for s in PAULI)
HEISENBERG.setflags(write=False)
