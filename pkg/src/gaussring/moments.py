"""Photon-number statistics of zero-mean Gaussian states.

Fourth moments follow from the covariance matrix by Wick's theorem applied to
normally ordered ladder operators. The symmetrized quadrature moments give
``<a_i a_j>`` directly and ``<a_i^dag a_j>`` up to the ordering correction
``-delta_ij / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .symplectic import CMLike, as_array


@dataclass(frozen=True)
class MomentsResult:
    mode_i: int
    mode_j: int
    v_diff: float
    nbar_i: float
    nbar_j: float


def _ladder_moments(sigma, i: int, j: int) -> tuple[complex, complex]:
    """``(<a_i a_j>, <a_i^dag a_j>)`` from the symmetrized quadrature moments."""
    xx = sigma[2 * i, 2 * j]
    yy = sigma[2 * i + 1, 2 * j + 1]
    xy = sigma[2 * i, 2 * j + 1]
    yx = sigma[2 * i + 1, 2 * j]
    aa = complex(xx - yy, xy + yx) / 4
    ada = complex(xx + yy, xy - yx) / 4
    if i == j:
        ada -= 0.5
    return aa, ada


def _check_mode(sigma, i: int) -> None:
    n = sigma.shape[0] // 2
    if not 0 <= i < n:
        raise ValueError(f"mode {i} out of range for {n} modes")


def mean_photon_number(cm: CMLike, i: int) -> float:
    sigma = as_array(cm)
    _check_mode(sigma, i)
    return (sigma[2 * i, 2 * i] + sigma[2 * i + 1, 2 * i + 1] - 2.0) / 4


def number_variance(cm: CMLike, i: int) -> float:
    sigma = as_array(cm)
    _check_mode(sigma, i)
    aa, ada = _ladder_moments(sigma, i, i)
    n = ada.real
    return abs(aa) ** 2 + n * n + n


def number_covariance(cm: CMLike, i: int, j: int) -> float:
    """``<n_i n_j> - <n_i><n_j>`` for distinct modes."""
    sigma = as_array(cm)
    _check_mode(sigma, i)
    _check_mode(sigma, j)
    if i == j:
        return number_variance(sigma, i)
    aa, ada = _ladder_moments(sigma, i, j)
    return abs(aa) ** 2 + abs(ada) ** 2


def number_difference_variance(cm: CMLike, i: int, j: int) -> MomentsResult:
    """Variance of ``n_i - n_j``."""
    if i == j:
        raise ValueError("number-difference variance needs two distinct modes")
    sigma = as_array(cm)
    v = number_variance(sigma, i) + number_variance(sigma, j) - 2 * number_covariance(sigma, i, j)
    return MomentsResult(
        i, j, max(v, 0.0), mean_photon_number(sigma, i), mean_photon_number(sigma, j)
    )


def v_first_stage_pair(s1: float, s2: float) -> float:
    """Closed form of the variance for two modes joined by a first-stage amplifier."""
    c1, sh1 = math.cosh(s1), math.sinh(s1)
    c2, sh2 = math.cosh(s2), math.sinh(s2)
    return 2 * sh2**2 * (c1**4 * c2**2 + sh1**4 * c2**2 + sh1**2 * c1**2 * sh2**2)


def v_second_stage_pair(s1: float, s2: float = 0.0) -> float:
    """Closed form for two modes joined by a second-stage amplifier; independent of ``s2``."""
    return 2 * math.sinh(s1) ** 2 * math.cosh(s1) ** 2


def variance_ratio_diagonal(s: float) -> float:
    """First-stage over second-stage pair variance when ``s1 = s2 = s``.

    Raises:
        ValueError: for ``s <= 0``, where the second-stage variance vanishes.
    """
    if not s > 0:
        raise ValueError("ratio is undefined for s <= 0 (second-stage pair variance is zero)")
    return 2 * math.sinh(s) ** 4 + math.cosh(s) ** 4
