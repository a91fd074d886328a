"""PPT analysis over every bipartition of the ring.

For each bipartition the Y quadratures of one side are sign-flipped and the
smallest symplectic eigenvalue ``nu`` of the result is reported. ``nu < 1``
witnesses entanglement across the cut; ``nu`` is reported directly, not squared.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .network import ClosedFormParams, NetworkSpec, build_network, letter_label
from .symplectic import CMLike, as_array, partial_transpose, symplectic_eigenvalues

MAX_MODES = 16
INSEPARABLE_TOL = 1e-9
CLASS_TOL = 1e-9
COMPLEMENT_TOL = 1e-8

#: Default sampling of (s1, s2) used to decide symmetry classes.
CLASS_GRID = tuple(round(0.1 * k, 10) for k in range(13))


@dataclass(frozen=True, order=True)
class Bipartition:
    """A cut of the ring into ``block`` and its complement.

    ``block`` is the canonical side: the smaller one, and for equal halves the
    lexicographically smaller tuple.
    """

    block: tuple[int, ...]
    n_modes: int

    def __post_init__(self):
        block = tuple(sorted(self.block))
        if not block or len(block) >= self.n_modes:
            raise ValueError("both sides of a bipartition must be non-empty")
        if len(set(block)) != len(block) or not all(0 <= m < self.n_modes for m in block):
            raise ValueError(f"invalid mode set {self.block} for {self.n_modes} modes")
        comp = tuple(m for m in range(self.n_modes) if m not in block)
        if (len(comp), comp) < (len(block), block):
            block = comp
        object.__setattr__(self, "block", block)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(m for m in range(self.n_modes) if m not in self.block)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.block), self.n_modes - len(self.block)

    @property
    def label(self) -> str:
        return (
            letter_label(self.block, self.n_modes)
            + "|"
            + letter_label(self.complement, self.n_modes)
        )

    @property
    def shape_label(self) -> str:
        return "{}x{}".format(*self.shape)


@dataclass(frozen=True)
class PPTResult:
    bipartition: Bipartition
    nu: float
    inseparable: bool


@dataclass
class SymmetryClass:
    """Bipartitions whose ``nu`` coincide at every sampled point.

    ``samples`` holds the representative's ``nu`` at each grid point.
    """

    representative: Bipartition
    members: list[Bipartition] = field(default_factory=list)
    samples: np.ndarray | None = None


@dataclass
class AnalysisReport:
    results: list[PPTResult]
    gme: bool
    tol: float
    nu_min: float
    nu_max: float
    argmin: Bipartition
    argmax: Bipartition

    @property
    def witness(self) -> Bipartition:
        """The least-entangled cut; it decides the verdict."""
        return self.argmax

    def grouped(self, tol: float = CLASS_TOL) -> list[tuple[float, list[Bipartition]]]:
        """Results grouped by shape and by ``nu`` agreement at this single point."""
        groups: list[tuple[float, list[Bipartition]]] = []
        for r in sorted(self.results, key=lambda r: (len(r.bipartition.block), r.bipartition)):
            for nu, members in groups:
                if (
                    len(members[0].block) == len(r.bipartition.block)
                    and abs(nu - r.nu) <= tol
                ):
                    members.append(r.bipartition)
                    break
            else:
                groups.append((r.nu, [r.bipartition]))
        return groups

    def to_dict(self) -> dict:
        return {
            "gme": self.gme,
            "tol": self.tol,
            "nu_min": self.nu_min,
            "nu_max": self.nu_max,
            "argmin": self.argmin.label,
            "witness": self.witness.label,
            "classes": [
                {"nu": nu, "shape": members[0].shape_label, "members": [b.label for b in members]}
                for nu, members in self.grouped()
            ],
            "partitions": [
                {
                    "label": r.bipartition.label,
                    "block": [m + 1 for m in r.bipartition.block],
                    "shape": r.bipartition.shape_label,
                    "nu": r.nu,
                    "inseparable": r.inseparable,
                }
                for r in self.results
            ],
        }


def enumerate_bipartitions(n_modes: int) -> list[Bipartition]:
    """All ``2^(n-1) - 1`` cuts, ordered by block size then lexicographically."""
    if not 2 <= n_modes <= MAX_MODES:
        raise ValueError(f"bipartition enumeration supports 2..{MAX_MODES} modes, got {n_modes}")
    out = []
    for k in range(1, n_modes // 2 + 1):
        for block in itertools.combinations(range(n_modes), k):
            # for k = n/2 each cut shows up twice; keep the side holding mode 0
            if 2 * k == n_modes and block[0] != 0:
                continue
            out.append(Bipartition(block, n_modes))
    return out


def expected_counts(n_modes: int) -> dict[int, int]:
    """Cut count per block size from the binomial coefficient, halved at n/2."""
    return {
        k: comb(n_modes, k) // 2 if 2 * k == n_modes else comb(n_modes, k)
        for k in range(1, n_modes // 2 + 1)
    }


def _min_nu(sigma: np.ndarray, modes: Iterable[int]) -> float:
    return float(symplectic_eigenvalues(partial_transpose(sigma, modes))[0])


def ppt_nu(
    cm: CMLike,
    partition: Bipartition,
    tol: float = INSEPARABLE_TOL,
    check_complement: bool = True,
) -> PPTResult:
    sigma = as_array(cm)
    if sigma.shape[0] != 2 * partition.n_modes:
        raise ValueError(
            f"partition is for {partition.n_modes} modes, cm has {sigma.shape[0] // 2}"
        )
    nu = _min_nu(sigma, partition.block)
    if check_complement:
        other = _min_nu(sigma, partition.complement)
        if abs(other - nu) > COMPLEMENT_TOL * max(1.0, nu):
            raise ArithmeticError(
                f"PPT nu differs between the two sides of {partition.label}: {nu} vs {other}"
            )
    return PPTResult(partition, nu, nu < 1.0 - tol)


def closed_form_nu_1x3(s1: float, s2: float) -> float:
    """Single-mode cut of the four-mode ring, from the closed-form ``Delta`` expression.

    That expression is ``nu**2``; the square root is returned.
    """
    p = ClosedFormParams.from_squeezing(s1, s2)
    ap, am, bp, bm = p.alpha_plus, p.alpha_minus, p.beta_plus, p.beta_minus
    base = am**2 * (bp**2 - bm**2) + ap**2 * (bm**2 + bp**2)
    delta = base - 2 * ap * bp * math.sqrt(max(base - ap**2 * bp**2, 0.0))
    return math.sqrt(max(delta, 0.0))


def printed_2x2_forms(s1: float, s2: float) -> dict[str, float]:
    """The three reference 2x2 expressions, keyed by the cut they are quoted for.

    These are squared quantities. Only the ``ab|cd`` one matches its cut; the
    other two evaluate to ``exp(-4(s1+s2))`` and ``exp(-4 s1)`` and are not
    the squares of ``nu(ad|bc)`` and ``nu(ac|bd)`` respectively.
    """
    p = ClosedFormParams.from_squeezing(s1, s2)
    ap, am, bp, bm = p.alpha_plus, p.alpha_minus, p.beta_plus, p.beta_minus
    return {
        "ab|cd": (ap**2 - am**2) * (bm + bp) ** 2,
        "ad|bc": (am + ap) ** 2 * (bm + bp) ** 2,
        "ac|bd": (am + ap) ** 2 * (bp**2 - bm**2),
    }


def closed_form_nu_2x2(s1: float, s2: float) -> dict[str, float]:
    """``nu`` for the three 2x2 cuts of the four-mode ring."""
    return {
        "ab|cd": math.exp(-2 * s2),
        "ad|bc": math.exp(-2 * s1),
        "ac|bd": math.exp(-2 * (s1 + s2)),
    }


def nu_table(
    specs: Sequence[NetworkSpec], partitions: Sequence[Bipartition], check_complement: bool = False
) -> np.ndarray:
    """``nu`` for every (spec, partition), shape ``(len(specs), len(partitions))``."""
    out = np.empty((len(specs), len(partitions)))
    for a, spec in enumerate(specs):
        cm = build_network(spec)
        for b, part in enumerate(partitions):
            out[a, b] = ppt_nu(cm, part, check_complement=check_complement).nu
    return out


def class_grid_specs(n_modes: int, grid: Sequence[float] = CLASS_GRID) -> list[NetworkSpec]:
    return [NetworkSpec(n_modes, s1, s2) for s1 in grid for s2 in grid]


def classify_partitions(
    specs: Sequence[NetworkSpec],
    partitions: Sequence[Bipartition] | None = None,
    tol: float = CLASS_TOL,
) -> list[SymmetryClass]:
    """Group cuts of the same shape whose ``nu`` agree at every grid point.

    Classes come out in order of block size, then by their representative.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("classification needs at least one grid point")
    n = specs[0].n_modes
    if any(s.n_modes != n for s in specs):
        raise ValueError("all grid points must share the mode count")
    parts = sorted(partitions if partitions is not None else enumerate_bipartitions(n))
    parts.sort(key=lambda b: len(b.block))
    table = nu_table(specs, parts)
    classes: list[SymmetryClass] = []
    for col, part in enumerate(parts):
        for cls in classes:
            if len(cls.representative.block) == len(part.block) and np.all(
                np.abs(cls.samples - table[:, col]) <= tol
            ):
                cls.members.append(part)
                break
        else:
            classes.append(SymmetryClass(part, [part], table[:, col].copy()))
    return classes


def class_of(classes: Sequence[SymmetryClass], block: Iterable[int], n_modes: int) -> int:
    """Index of the class holding the cut with the given block."""
    target = Bipartition(tuple(block), n_modes)
    for idx, cls in enumerate(classes):
        if target in cls.members:
            return idx
    raise KeyError(target)


def gme_verdict(cm: CMLike, tol: float = INSEPARABLE_TOL) -> AnalysisReport:
    """Genuine multipartite entanglement iff every cut has ``nu < 1 - tol``."""
    sigma = as_array(cm)
    n = sigma.shape[0] // 2
    results = [ppt_nu(sigma, b, tol) for b in enumerate_bipartitions(n)]
    lo = min(results, key=lambda r: r.nu)
    hi = max(results, key=lambda r: r.nu)
    return AnalysisReport(
        results=results,
        gme=all(r.inseparable for r in results),
        tol=tol,
        nu_min=lo.nu,
        nu_max=hi.nu,
        argmin=lo.bipartition,
        argmax=hi.bipartition,
    )
