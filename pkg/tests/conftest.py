"""Independent oracles shared by the test modules.

None of these go through the package's symplectic-matrix route: the network
oracle propagates complex Bogoliubov maps of ladder operators, and the
spectrum oracle uses a matrix square root instead of eig(Omega sigma).
"""

import math

import numpy as np
import pytest
from scipy.linalg import expm, sqrtm


def bogoliubov_cm(n_modes, squeezers):
    """Covariance matrix of ``prod(squeezers)|0>`` from ladder-operator algebra.

    ``squeezers`` is applied in order; each entry is ``(i, j, s, theta)`` for
    ``exp(conj(z) a_i a_j - z a_i^dag a_j^dag)``, under which
    ``a_i -> a_i cosh s - e^{i theta} a_j^dag sinh s``.
    """
    n = n_modes
    K = np.eye(2 * n, dtype=complex)  # alpha = (a_1..a_n, a_1^dag..a_n^dag)
    for i, j, s, theta in squeezers:
        L = np.eye(2 * n, dtype=complex)
        c, sh, ph = math.cosh(s), math.sinh(s), np.exp(1j * theta)
        for p, q in ((i, j), (j, i)):
            L[p, p] = c
            L[p, n + q] = -ph * sh
            L[n + p, n + p] = c
            L[n + p, q] = -np.conj(ph) * sh
        # U2 U1: U1^dag U2^dag alpha U2 U1 = K2 K1 alpha
        K = L @ K
    # vacuum: <a a^dag> = 1, everything else 0
    G0 = np.zeros((2 * n, 2 * n), dtype=complex)
    G0[:n, n:] = np.eye(n)
    G = K @ G0 @ K.T
    # X = a + a^dag, Y = i(a^dag - a)
    T = np.zeros((2 * n, 2 * n), dtype=complex)
    for m in range(n):
        T[2 * m, m], T[2 * m, n + m] = 1, 1
        T[2 * m + 1, m], T[2 * m + 1, n + m] = -1j, 1j
    raw = T @ G @ T.T
    sym = 0.5 * (raw + raw.T)
    assert np.abs(sym.imag).max() < 1e-9
    return sym.real


def ring_squeezers(n_modes, s1, s2, theta=math.pi):
    first = [(k, k + 1, s1, theta) for k in range(0, n_modes, 2)]
    second = [(k, (k + 1) % n_modes, s2, theta) for k in range(1, n_modes, 2)]
    return first + second


def williamson_spectrum(sigma):
    """Symplectic eigenvalues via the Hermitian matrix ``i sigma^1/2 Omega sigma^1/2``."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0] // 2
    omega = np.kron(np.eye(n), [[0.0, -1.0], [1.0, 0.0]])
    root = sqrtm(sigma).real
    ev = np.linalg.eigvalsh(1j * root @ omega @ root)
    return np.sort(ev[ev > 0])


def random_symplectic(n_modes, rng, scale=0.6):
    """``expm(Omega H)`` for a random symmetric ``H`` is symplectic."""
    omega = np.kron(np.eye(n_modes), [[0.0, -1.0], [1.0, 0.0]])
    A = rng.normal(scale=scale, size=(2 * n_modes, 2 * n_modes))
    return expm(omega @ (A + A.T) / 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        title, ok, detail = ACCEPTANCE_RESULTS[num]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {num:>2}. {title} ({detail})")
