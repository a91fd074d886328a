"""Subsystem entropies of the ring state and the genuine 2N-partite entropy.

Entropies are in bits and use ``S = 1/2 * sum_n h(nu_n)`` with
``h(x) = (x+1)/2 log2((x+1)/2) - (x-1)/2 log2((x-1)/2)``. That is half the
usual Gaussian entropy; the factor does not move minima or zero crossings.

``E_2N`` is the minimum subsystem entropy over all subsets of at most ``N``
modes. Because correlations reach at most three ring steps, the minimum is
attained on short ring-consecutive windows, which is what the
``consecutive`` mode searches.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .network import NetworkSpec, build_network, stage1_pairs, stage2_pairs
from .symplectic import (
    PHYSICAL_TOL,
    CMLike,
    CovarianceMatrix,
    TMSParams,
    apply_symplectic,
    as_array,
    restrict,
    symplectic_eigenvalues,
    tms_symplectic,
)

ALL_SUBSETS = "all"
CONSECUTIVE = "consecutive"
MAX_ALL_SUBSETS_MODES = 12
MAX_WINDOW = 4
TIE_TOL = 1e-12

# Subset pairs (A, B), 1-based ring labels, for which adding the extra
# modes in A to B must not lower the entropy on a 12-mode ring.
ISLAND_PAIRS: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = tuple(
    (a, b)
    for b, group in (
        ((5, 6), [(3, 5, 6), (3, 5, 7), (2, 3, 5, 6), (5, 6, 8, 9)]),
        ((5,), [(3, 5), (5, 7), (2, 3, 5), (5, 7, 8)]),
        ((6, 7), [(4, 6, 7), (6, 7, 9), (3, 4, 6, 7), (6, 7, 9, 10)]),
        ((5, 6, 7), [(3, 5, 6, 7), (5, 6, 7, 9), (2, 3, 5, 6, 7), (5, 6, 7, 9, 10)]),
        ((4, 5, 6, 7), [(2, 4, 5, 6, 7), (4, 5, 6, 7, 9), (1, 2, 4, 5, 6, 7), (4, 5, 6, 7, 9, 10)]),
    )
    for a in group
)


def _is_window(modes: Sequence[int], n_modes: int) -> bool:
    return all((b - a) % n_modes == 1 for a, b in zip(modes, modes[1:]))


def ring_order(modes: Iterable[int], n_modes: int) -> tuple[int, ...] | None:
    """The modes as a ring walk if they form one consecutive window, else None."""
    ms = sorted(set(modes))
    if len(ms) == n_modes:
        return tuple(ms)
    for k in range(len(ms)):
        walk = ms[k:] + ms[:k]
        if _is_window(walk, n_modes):
            return tuple(walk)
    return None


@dataclass(frozen=True)
class Subset:
    """Kept modes of a subsystem (0-based), with its ring-window flag."""

    modes: tuple[int, ...]
    n_modes: int

    def __post_init__(self):
        ms = tuple(sorted(self.modes))
        if not ms:
            raise ValueError("subset must be non-empty")
        if len(set(ms)) != len(ms) or not all(0 <= m < self.n_modes for m in ms):
            raise ValueError(f"invalid subset {self.modes} for {self.n_modes} modes")
        object.__setattr__(self, "modes", ms)

    @classmethod
    def from_labels(cls, labels: Iterable[int], n_modes: int) -> "Subset":
        """Build from 1-based ring labels."""
        return cls(tuple(m - 1 for m in labels), n_modes)

    @property
    def consecutive(self) -> bool:
        return ring_order(self.modes, self.n_modes) is not None

    @property
    def label(self) -> str:
        return "-".join(str(m + 1) for m in self.modes)

    def __len__(self) -> int:
        return len(self.modes)


@dataclass
class EntropyReport:
    spec: NetworkSpec
    mode: str
    entropies: dict[Subset, float] = field(repr=False)
    argmin: Subset
    e2n: float

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "e2n_bits": self.e2n,
            "argmin_subset": self.argmin.label,
            "mode": self.mode,
        }


def reduced_cm(cm: CMLike, subset: Subset) -> CovarianceMatrix:
    return restrict(cm, subset.modes)


def _h(nu: float) -> float:
    # written in terms of eps = (nu - 1)/2 so that nu -> 1 needs no special case
    eps = max(nu - 1.0, 0.0) / 2
    if eps == 0.0:
        return 0.0
    return ((1 + eps) * math.log1p(eps) - eps * math.log(eps)) / math.log(2)


def gaussian_entropy(cm: CMLike, tol: float = PHYSICAL_TOL) -> float:
    """Von Neumann entropy in bits, ``1/2 sum h(nu)``.

    Raises:
        ValueError: if some symplectic eigenvalue is below ``1 - tol``.
    """
    nus = symplectic_eigenvalues(cm)
    if nus[0] < 1.0 - tol:
        raise ValueError(f"unphysical covariance matrix (nu_min = {nus[0]:.6g})")
    return 0.5 * sum(_h(float(nu)) for nu in nus)


def all_subsets(n_modes: int) -> list[Subset]:
    """Subsets of at most ``n_modes/2`` modes, by size then lexicographically."""
    return [
        Subset(c, n_modes)
        for k in range(1, n_modes // 2 + 1)
        for c in itertools.combinations(range(n_modes), k)
    ]


def consecutive_windows(n_modes: int, max_len: int = MAX_WINDOW) -> list[Subset]:
    """Ring windows of length ``1..max_len`` (capped at ``n_modes/2``), every start."""
    seen = set()
    for k in range(1, min(max_len, n_modes // 2) + 1):
        for start in range(n_modes):
            seen.add(Subset(tuple((start + i) % n_modes for i in range(k)), n_modes))
    return sorted(seen, key=lambda s: (len(s), s.modes))


def candidate_subsets(n_modes: int, mode: str) -> list[Subset]:
    if mode == ALL_SUBSETS:
        if n_modes > MAX_ALL_SUBSETS_MODES:
            raise ValueError(
                f"all-subsets search is limited to {MAX_ALL_SUBSETS_MODES} modes, got {n_modes}"
            )
        return all_subsets(n_modes)
    if mode == CONSECUTIVE:
        return consecutive_windows(n_modes)
    raise ValueError(f"unknown enumeration mode {mode!r}")


def subset_entropies(cm: CMLike, subsets: Iterable[Subset]) -> dict[Subset, float]:
    return {s: gaussian_entropy(reduced_cm(cm, s)) for s in subsets}


def e2n(spec: NetworkSpec, mode: str = CONSECUTIVE) -> EntropyReport:
    subsets = candidate_subsets(spec.n_modes, mode)
    ents = subset_entropies(build_network(spec), subsets)
    best = subsets[0]
    for s in subsets[1:]:
        if ents[s] < ents[best] - TIE_TOL:
            best = s
    return EntropyReport(spec, mode, ents, best, ents[best])


def window_squeezers(
    window: Sequence[int], spec: NetworkSpec
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Squeezers that can be undone inside a ring window, as window positions.

    Every second-stage pair inside the window can be undone. A first-stage
    pair can be undone only if neither of its modes was touched afterwards by
    a second-stage squeezer reaching outside the window.
    """
    n = spec.n_modes
    pos = {m: k for k, m in enumerate(window)}
    s2_partner = {}
    for i, j in stage2_pairs(n):
        s2_partner[i], s2_partner[j] = j, i
    second = [(pos[i], pos[j]) for i, j in stage2_pairs(n) if i in pos and j in pos]
    first = [
        (pos[i], pos[j])
        for i, j in stage1_pairs(n)
        if i in pos and j in pos and s2_partner[i] in pos and s2_partner[j] in pos
    ]
    return second, first


def reduce_consecutive(cm: CMLike, window: Subset, spec: NetworkSpec) -> CovarianceMatrix:
    """Strip internal squeezers from a ring window by inverse two-mode squeezing.

    The result is the reduced covariance matrix of the window (modes listed in
    ring order) after undoing the second-stage squeezers that lie inside the
    window, then the first-stage ones that become free. Entropy is unchanged.
    Windows whose end pairs are second-stage pairs collapse to the two end
    modes; modes freed this way come back as uncorrelated vacuum.

    Raises:
        ValueError: for windows shorter than 3 or not ring-consecutive.
    """
    if len(window) < 3:
        raise ValueError("reduction needs a window of at least 3 modes")
    order = ring_order(window.modes, spec.n_modes)
    if order is None or len(order) == spec.n_modes:
        raise ValueError(f"subset {window.label} is not a ring window")
    k = len(order)
    second, first = window_squeezers(order, spec)
    U = np.eye(2 * k)
    for i, j in second:
        U = tms_symplectic(TMSParams(i, j, -spec.s2, spec.theta), k) @ U
    for i, j in first:
        U = tms_symplectic(TMSParams(i, j, -spec.s1, spec.theta), k) @ U
    return apply_symplectic(U, restrict(cm, order))


def vacuum_modes(cm: CMLike, tol: float = 1e-10) -> list[int]:
    """Modes in exact vacuum and uncorrelated with everything else."""
    sigma = as_array(cm)
    n = sigma.shape[0] // 2
    eye = np.eye(2 * n)
    return [
        m for m in range(n) if np.abs(sigma[2 * m : 2 * m + 2] - eye[2 * m : 2 * m + 2]).max() <= tol
    ]


def core(cm: CMLike, tol: float = 1e-10) -> CovarianceMatrix:
    """Drop the vacuum modes, leaving the part that carries the entropy."""
    sigma = as_array(cm)
    n = sigma.shape[0] // 2
    vac = set(vacuum_modes(sigma, tol))
    keep = [m for m in range(n) if m not in vac]
    if not keep:
        return CovarianceMatrix(sigma[:2, :2])
    return restrict(sigma, keep)


def entropy_difference(spec: NetworkSpec, a: Subset, b: Subset) -> float:
    """``S(A) - S(B)`` for two subsystems of the same ring state, in bits."""
    for s in (a, b):
        if s.n_modes != spec.n_modes:
            raise ValueError(f"subset {s.label} is for {s.n_modes} modes, not {spec.n_modes}")
    cm = build_network(spec)
    return gaussian_entropy(reduced_cm(cm, a)) - gaussian_entropy(reduced_cm(cm, b))
