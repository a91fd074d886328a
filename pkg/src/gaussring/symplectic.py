"""Gaussian-state algebra on interleaved quadratures.

Quadratures are ordered ``(X_1, Y_1, X_2, Y_2, ...)`` with ``X = a^dag + a`` and
``Y = i(a^dag - a)``, so ``[X, Y] = 2i`` and the vacuum covariance matrix is
the identity. All states are zero-mean; only second moments are tracked.

Covariance matrices evolve under a Gaussian unitary as ``sigma -> S sigma S^T``
where ``S`` is the real symplectic matrix acting on the quadrature vector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

ORDERING = "XYXY"
VACUUM_VARIANCE = 1.0
CONVENTION = "X=a^dag+a;vacuum_variance=1"

#: 2x2 block of the symplectic form.
J_SYMP = np.array([[0.0, -1.0], [1.0, 0.0]])
#: diag(1, -1); the shape of squeezing-type correlation blocks.
J_DIAG = np.array([[1.0, 0.0], [0.0, -1.0]])

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-10
SYMPLECTIC_TOL = 1e-10
PAIRING_RTOL = 1e-8


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetrized second moments of a zero-mean Gaussian state.

    Args:
        matrix: real symmetric ``2n x 2n`` array in ``XYXY`` ordering.
        convention: vacuum-normalization tag carried into serialized output.
    """

    matrix: np.ndarray
    convention: str = field(default=CONVENTION)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError(f"covariance matrix must be 2n x 2n, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix has non-finite entries")
        scale = max(1.0, float(np.abs(m).max(initial=0.0)))
        if np.abs(m - m.T).max(initial=0.0) > SYMMETRY_TOL * scale:
            raise ValueError("covariance matrix is not symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def block(self, i: int, j: int) -> np.ndarray:
        """The 2x2 correlation block between modes ``i`` and ``j``."""
        return self.matrix[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]

    def to_dict(self) -> dict:
        return {
            "modes": self.n_modes,
            "ordering": ORDERING,
            "vacuum_variance": VACUUM_VARIANCE,
            "matrix": [[float(x) for x in row] for row in self.matrix],
        }

    def to_json(self, **kwargs) -> str:
        # json emits repr() floats, which round-trip at 17 significant digits
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "CovarianceMatrix":
        if data.get("ordering") != ORDERING:
            raise ValueError(f"unsupported quadrature ordering {data.get('ordering')!r}")
        if float(data.get("vacuum_variance", float("nan"))) != VACUUM_VARIANCE:
            raise ValueError("only vacuum_variance = 1.0 is supported")
        cm = cls(np.asarray(data["matrix"], dtype=float))
        if cm.n_modes != int(data["modes"]):
            raise ValueError("'modes' does not match the matrix size")
        return cm

    @classmethod
    def from_json(cls, text: str) -> "CovarianceMatrix":
        return cls.from_dict(json.loads(text))


CMLike = Union[CovarianceMatrix, np.ndarray]


def as_array(cm: CMLike) -> np.ndarray:
    if isinstance(cm, CovarianceMatrix):
        return cm.matrix
    return np.asarray(cm, dtype=float)


@dataclass(frozen=True)
class TMSParams:
    """A two-mode squeezer ``exp(conj(z) a b - z a^dag b^dag)``, ``z = s e^{i theta}``."""

    mode_i: int
    mode_j: int
    s: float
    theta: float = math.pi

    def __post_init__(self):
        if self.mode_i == self.mode_j:
            raise ValueError("two-mode squeezer needs two distinct modes")
        if not (math.isfinite(self.s) and math.isfinite(self.theta)):
            raise ValueError("squeezing parameters must be finite")


def symplectic_form(n_modes: int) -> np.ndarray:
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    return np.kron(np.eye(n_modes), J_SYMP)


def vacuum_cm(n_modes: int) -> CovarianceMatrix:
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    return CovarianceMatrix(np.eye(2 * n_modes))


def _snap(x: float) -> float:
    # sin(pi) and friends come out at ~1e-16; keep structural zeros exact
    return 0.0 if abs(x) < 1e-15 else x


def tms_symplectic(params: TMSParams, n_modes: int) -> np.ndarray:
    """Symplectic matrix of a two-mode squeezer embedded in ``n_modes`` modes.

    In the Heisenberg picture ``a -> a cosh s - e^{i theta} b^dag sinh s``. For
    ``theta = pi`` this gives ``X_a -> X_a cosh s + X_b sinh s`` and
    ``Y_a -> Y_a cosh s - Y_b sinh s``. A negative ``s`` gives the inverse.
    """
    i, j = params.mode_i, params.mode_j
    if not (0 <= i < n_modes and 0 <= j < n_modes):
        raise ValueError(f"modes ({i}, {j}) out of range for {n_modes} modes")
    c, sh = math.cosh(params.s), math.sinh(params.s)
    ct, st = _snap(math.cos(params.theta)), _snap(math.sin(params.theta))
    cross = -sh * np.array([[ct, st], [st, -ct]])
    S = np.eye(2 * n_modes)
    for a, b in ((i, j), (j, i)):
        S[2 * a : 2 * a + 2, 2 * a : 2 * a + 2] = c * np.eye(2)
        S[2 * a : 2 * a + 2, 2 * b : 2 * b + 2] = cross
    return S


def phase_rotation(mode: int, phi: float, n_modes: int) -> np.ndarray:
    """Local phase shift ``a -> a e^{-i phi}`` on one mode."""
    if not 0 <= mode < n_modes:
        raise ValueError(f"mode {mode} out of range for {n_modes} modes")
    c, s = math.cos(phi), math.sin(phi)
    S = np.eye(2 * n_modes)
    S[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = [[c, s], [-s, c]]
    return S


def is_symplectic(S: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        return False
    omega = symplectic_form(S.shape[0] // 2)
    return bool(np.abs(S @ omega @ S.T - omega).max() <= tol)


def apply_symplectic(S: np.ndarray, cm: CMLike) -> CovarianceMatrix:
    sigma = as_array(cm)
    S = np.asarray(S, dtype=float)
    if S.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: S {S.shape} vs cm {sigma.shape}")
    out = S @ sigma @ S.T
    return CovarianceMatrix(0.5 * (out + out.T))


def symplectic_eigenvalues(cm: CMLike) -> np.ndarray:
    """Symplectic spectrum, ascending, one value per mode.

    The eigenvalues of ``Omega sigma`` come in pairs ``+-i nu``; the absolute
    imaginary parts are sorted and each conjugate pair is collapsed.

    Raises:
        ValueError: if the spectrum does not split into conjugate pairs, which
            happens for ill-conditioned or non-symmetric input.
    """
    sigma = as_array(cm)
    if not np.all(np.isfinite(sigma)):
        raise ValueError("covariance matrix has non-finite entries")
    n = sigma.shape[0] // 2
    ev = np.linalg.eigvals(symplectic_form(n) @ sigma)
    nus = np.sort(np.abs(ev.imag))
    lo, hi = nus[0::2], nus[1::2]
    if np.any(np.abs(lo - hi) > PAIRING_RTOL * np.maximum(1.0, hi)):
        raise ValueError("symplectic eigenvalues do not pair up; input is ill-conditioned")
    return 0.5 * (lo + hi)


def partial_transpose(cm: CMLike, modes: Iterable[int]) -> CovarianceMatrix:
    """Flip the sign of the ``Y`` quadrature of every listed mode."""
    sigma = as_array(cm)
    n = sigma.shape[0] // 2
    signs = np.ones(2 * n)
    for m in modes:
        if not 0 <= m < n:
            raise ValueError(f"mode {m} out of range for {n} modes")
        signs[2 * m + 1] = -1.0
    return CovarianceMatrix(signs[:, None] * sigma * signs[None, :])


def is_physical(cm: CMLike, tol: float = PHYSICAL_TOL) -> bool:
    """Uncertainty-principle check ``sigma + i Omega >= 0`` via the symplectic spectrum."""
    try:
        sigma = as_array(cm)
        if np.abs(sigma - sigma.T).max() > SYMMETRY_TOL * max(1.0, np.abs(sigma).max()):
            return False
        if np.any(np.linalg.eigvalsh(sigma) <= 0):
            return False
        return bool(symplectic_eigenvalues(sigma)[0] >= 1.0 - tol)
    except (ValueError, np.linalg.LinAlgError):
        return False


def is_pure(cm: CMLike, tol: float = PHYSICAL_TOL) -> bool:
    nus = symplectic_eigenvalues(cm)
    return bool(np.all(np.abs(nus - 1.0) <= tol))


def restrict(cm: CMLike, modes: Iterable[int]) -> CovarianceMatrix:
    """Principal submatrix on ``modes`` (the Gaussian partial trace), in the given order."""
    sigma = as_array(cm)
    n = sigma.shape[0] // 2
    modes = list(modes)
    if not modes:
        raise ValueError("cannot restrict to an empty set of modes")
    for m in modes:
        if not 0 <= m < n:
            raise ValueError(f"mode {m} out of range for {n} modes")
    if len(set(modes)) != len(modes):
        raise ValueError("repeated mode index")
    idx = [q for m in modes for q in (2 * m, 2 * m + 1)]
    return CovarianceMatrix(sigma[np.ix_(idx, idx)])
