"""Covariance matrix of the two-stage parametric-amplifier ring.

Modes ``0 .. 2N-1`` sit on a ring. The first stage squeezes pairs
``(0,1), (2,3), ...`` and the second stage squeezes ``(1,2), (3,4), ...,
(2N-1, 0)``. The routing between stages only decides which pairs the second
stage sees, so it is folded into this fixed pairing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .symplectic import (
    J_DIAG,
    CMLike,
    CovarianceMatrix,
    TMSParams,
    apply_symplectic,
    as_array,
    tms_symplectic,
    vacuum_cm,
)

# Letter names of ring positions for the small networks.
RING_LETTERS = {
    4: "abcd",
    6: "abefcd",
    8: "abghefcd",
}


@dataclass(frozen=True)
class NetworkSpec:
    """Uniformly pumped ring of ``n_modes`` modes."""

    n_modes: int
    s1: float
    s2: float
    theta: float = math.pi

    def __post_init__(self):
        if not isinstance(self.n_modes, (int, np.integer)) or isinstance(self.n_modes, bool):
            raise ValueError("n_modes must be an integer")
        if self.n_modes < 4 or self.n_modes % 2:
            raise ValueError(f"n_modes must be even and >= 4, got {self.n_modes}")
        for name in ("s1", "s2", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.s1 < 0 or self.s2 < 0:
            raise ValueError("squeezing parameters must be non-negative")

    @classmethod
    def from_dict(cls, data: dict) -> "NetworkSpec":
        unknown = set(data) - {"modes", "s1", "s2", "theta"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(
            int(data["modes"]),
            float(data.get("s1", 0.0)),
            float(data.get("s2", 0.0)),
            float(data.get("theta", math.pi)),
        )

    def to_dict(self) -> dict:
        return {"modes": self.n_modes, "s1": self.s1, "s2": self.s2, "theta": self.theta}


def stage1_pairs(n_modes: int) -> list[tuple[int, int]]:
    return [(k, k + 1) for k in range(0, n_modes, 2)]


def stage2_pairs(n_modes: int) -> list[tuple[int, int]]:
    return [(k, (k + 1) % n_modes) for k in range(1, n_modes, 2)]


def edge_stage(i: int, j: int, n_modes: int) -> int:
    """Which stage squeezes ring neighbours ``i`` and ``j`` (1 or 2)."""
    if (j - i) % n_modes == 1:
        lo = i
    elif (i - j) % n_modes == 1:
        lo = j
    else:
        raise ValueError(f"modes {i} and {j} are not ring neighbours")
    return 1 if lo % 2 == 0 else 2


def ring_distance(i: int, j: int, n_modes: int) -> int:
    d = (j - i) % n_modes
    return min(d, n_modes - d)


def build_network(spec: NetworkSpec) -> CovarianceMatrix:
    n = spec.n_modes
    S = np.eye(2 * n)
    for i, j in stage1_pairs(n):
        S = tms_symplectic(TMSParams(i, j, spec.s1, spec.theta), n) @ S
    for i, j in stage2_pairs(n):
        S = tms_symplectic(TMSParams(i, j, spec.s2, spec.theta), n) @ S
    return apply_symplectic(S, vacuum_cm(n))


@dataclass(frozen=True)
class ClosedFormParams:
    alpha_plus: float
    alpha_minus: float
    beta_plus: float
    beta_minus: float

    @classmethod
    def from_squeezing(cls, s1: float, s2: float) -> "ClosedFormParams":
        return cls(
            (math.exp(-2 * s1) + math.exp(2 * s1)) / 2,
            (math.exp(-2 * s1) - math.exp(2 * s1)) / 2,
            (math.exp(-2 * s2) + math.exp(2 * s2)) / 2,
            (math.exp(-2 * s2) - math.exp(2 * s2)) / 2,
        )


def closed_form_cm_4(s1: float, s2: float) -> CovarianceMatrix:
    """Quadripartite covariance matrix in closed form.

    Its signs correspond to squeezing angle 0 in this package's
    operator convention (equivalently, the ``theta = pi`` network after a
    pi phase shift on modes 1 and 3).
    """
    p = ClosedFormParams.from_squeezing(s1, s2)
    ap, am, bp, bm = p.alpha_plus, p.alpha_minus, p.beta_plus, p.beta_minus
    x = np.array(
        [
            [ap * bp, am * bp, am * bm, bm * ap],
            [am * bp, ap * bp, bm * ap, am * bm],
            [am * bm, bm * ap, ap * bp, am * bp],
            [bm * ap, am * bm, am * bp, ap * bp],
        ]
    )
    # Y-Y correlations flip sign on squeezing-type (neighbour) entries only
    y = x * np.array([[1, -1, 1, -1], [-1, 1, -1, 1], [1, -1, 1, -1], [-1, 1, -1, 1]])
    m = np.zeros((8, 8))
    m[0::2, 0::2] = x
    m[1::2, 1::2] = y
    return CovarianceMatrix(m)


class BlockKind(enum.Enum):
    """Correlation block type between two ring modes."""

    A = "self"
    B = "stage-1 neighbour"
    Bprime = "stage-2 neighbour"
    C = "second neighbour"
    D = "third neighbour"
    Zero = "uncorrelated"


def classify_pair(i: int, j: int, n_modes: int) -> BlockKind:
    """Block type of ``(i, j)`` from ring distance and edge parity.

    A distance-3 pair is correlated only along the path whose middle edge is a
    first-stage edge; the other path joins modes from independent processes.
    On rings shorter than 8 the two directions wrap onto each other and the
    shortest-distance class is reported.
    """
    d = ring_distance(i, j, n_modes)
    if d == 0:
        return BlockKind.A
    if d == 1:
        return BlockKind.B if edge_stage(i, j, n_modes) == 1 else BlockKind.Bprime
    if d == 2:
        return BlockKind.C
    if d == 3:
        for start, step in ((i, 1), (i, -1)):
            if (start + 3 * step) % n_modes != j % n_modes:
                continue
            mid = (start + step) % n_modes, (start + 2 * step) % n_modes
            if edge_stage(*mid, n_modes) == 1:
                return BlockKind.D
        return BlockKind.Zero
    return BlockKind.Zero


def block_of(cm: CMLike, i: int, j: int) -> tuple[BlockKind, np.ndarray]:
    sigma = as_array(cm)
    n = sigma.shape[0] // 2
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"modes ({i}, {j}) out of range for {n} modes")
    return classify_pair(i, j, n), sigma[2 * i : 2 * i + 2, 2 * j : 2 * j + 2].copy()


def table_blocks(s1: float, s2: float) -> dict[BlockKind, np.ndarray]:
    """Functional forms of the non-zero blocks for rings of 8 or more modes.

    ``A`` is the constructed self-correlation ``alpha_+ beta_+``. The other
    forms match the ``theta = pi`` construction entry by entry.
    """
    p = ClosedFormParams.from_squeezing(s1, s2)
    ap, am, bp, bm = p.alpha_plus, p.alpha_minus, p.beta_plus, p.beta_minus
    eye = np.eye(2)
    return {
        BlockKind.A: ap * bp * eye,
        BlockKind.B: -am * (bp + 1) * J_DIAG / 2,
        BlockKind.Bprime: -ap * bm * J_DIAG,
        BlockKind.C: am * bm * eye / 2,
        BlockKind.D: -am * (bp - 1) * J_DIAG / 2,
        BlockKind.Zero: np.zeros((2, 2)),
    }


def printed_a_block(s1: float, s2: float) -> np.ndarray:
    """Reference self-correlation block ``alpha_+ beta_-``, kept to track its mismatch with the built matrix."""
    p = ClosedFormParams.from_squeezing(s1, s2)
    return p.alpha_plus * p.beta_minus * np.eye(2)


def table_conformance(spec: NetworkSpec) -> dict:
    """Max deviation of every block of the built matrix from its table form.

    Also reports how far the constructed diagonal sits from the reference
    ``alpha_+ beta_-`` self-correlation, which disagrees with the
    quadripartite closed form.
    """
    if spec.n_modes < 8:
        raise ValueError("the block table applies to rings of 8 or more modes")
    cm = build_network(spec)
    forms = table_blocks(spec.s1, spec.s2)
    dev = {kind.name: 0.0 for kind in BlockKind}
    for i in range(spec.n_modes):
        for j in range(spec.n_modes):
            kind, blk = block_of(cm, i, j)
            dev[kind.name] = max(dev[kind.name], float(np.abs(blk - forms[kind]).max()))
    printed = printed_a_block(spec.s1, spec.s2)
    return {
        "max_abs_deviation": dev,
        "printed_A_deviation": float(np.abs(cm.block(0, 0) - printed).max()),
    }


def letter_label(modes, n_modes: int) -> str:
    """Mode names for the small rings, 1-based indices otherwise."""
    letters = RING_LETTERS.get(n_modes)
    if letters is None:
        return "-".join(str(m + 1) for m in sorted(modes))
    return "".join(sorted(letters[m] for m in modes))
