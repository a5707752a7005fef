"""Wind-free Dubins Bang-Straight-Bang paths and the quadrant decision table.

Configurations are expressed in the Dubins frame: the start sits at the
origin with heading ``alpha``, the goal at ``(d, 0)`` with heading ``beta``,
and ``d`` is measured in turning radii.  Segment lengths ``(t, p, q)`` are
radius-normalized as well (arc lengths in radians, straight in radii).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from trochoids.errors import Infeasible, NoSolution
from trochoids.geom_frames import HALF_PI, TWO_PI, Pose, quadrant_of, wrap_2pi


class PathWord(enum.Enum):
    LSL = "LSL"
    LSR = "LSR"
    RSL = "RSL"
    RSR = "RSR"

    def __init__(self, value):
        # turn direction of each bank: +1 left, -1 right
        self.delta1 = 1 if value[0] == "L" else -1
        self.delta2 = 1 if value[2] == "L" else -1
        self.is_analytic = self.delta1 == self.delta2

    def mirrored(self) -> "PathWord":
        swap = {"L": "R", "R": "L", "S": "S"}
        return PathWord("".join(swap[c] for c in self.value))

    def __str__(self):
        return self.value


# Fixed order used for every tie-break.
WORD_ORDER = (PathWord.LSL, PathWord.LSR, PathWord.RSL, PathWord.RSR)
WORD_RANK = {w: i for i, w in enumerate(WORD_ORDER)}

L, R = PathWord.LSL, PathWord.RSR
_LSR, _RSL = PathWord.LSR, PathWord.RSL

# Corrected table; rows are the quadrant of alpha, columns the quadrant of beta.
DECISION_TABLE: dict[tuple[int, int], tuple[PathWord, ...]] = {
    (1, 1): (_RSL,),
    (1, 2): (R, _RSL, _LSR),
    (1, 3): (R, _LSR),
    (1, 4): (_LSR, _RSL, R),
    (2, 1): (L, _RSL, _LSR),
    (2, 2): (L, _RSL, R),
    (2, 3): (R,),
    (2, 4): (R, _RSL),
    (3, 1): (L, _LSR),
    (3, 2): (L,),
    (3, 3): (R, _LSR, L),
    (3, 4): (R, _LSR, _RSL),
    (4, 1): (_RSL, _LSR, L),
    (4, 2): (L, _RSL),
    (4, 3): (L, _LSR, _RSL),
    (4, 4): (_LSR,),
}

# Blocks as originally published, before the a12/a21/a34/a43 fixes.
UNCORRECTED_TABLE: dict[tuple[int, int], tuple[PathWord, ...]] = dict(DECISION_TABLE)
UNCORRECTED_TABLE.update({
    (1, 2): (R, _RSL),
    (2, 1): (L, _RSL),
    (3, 4): (R, _LSR),
    (4, 3): (L, _LSR),
})

del L, R, _LSR, _RSL


@dataclass(frozen=True)
class DubinsSolution:
    word: PathWord
    seg_lengths: tuple[float, float, float]
    radius: float = 1.0

    @property
    def normalized_length(self) -> float:
        return sum(self.seg_lengths)

    @property
    def total_length(self) -> float:
        return self.radius * self.normalized_length


def _mod2pi(a: float) -> float:
    return wrap_2pi(a)


def _word_params(alpha: float, beta: float, d: float, word: PathWord):
    """Closed-form (t, p, q) for one word, or None when it cannot connect."""
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb, cb = math.sin(beta), math.cos(beta)
    cab = math.cos(alpha - beta)
    if word is PathWord.LSL:
        p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb)
        if p2 < 0.0:
            return None
        tmp = math.atan2(cb - ca, d + sa - sb)
        return _mod2pi(tmp - alpha), math.sqrt(p2), _mod2pi(beta - tmp)
    if word is PathWord.RSR:
        p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa)
        if p2 < 0.0:
            return None
        tmp = math.atan2(ca - cb, d - sa + sb)
        return _mod2pi(alpha - tmp), math.sqrt(p2), _mod2pi(tmp - beta)
    if word is PathWord.LSR:
        p2 = -2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb)
        if p2 < 0.0:
            return None
        p = math.sqrt(p2)
        tmp = math.atan2(-ca - cb, d + sa + sb) - math.atan2(-2.0, p)
        return _mod2pi(tmp - alpha), p, _mod2pi(tmp - beta)
    # RSL
    p2 = -2.0 + d * d + 2.0 * cab - 2.0 * d * (sa + sb)
    if p2 < 0.0:
        return None
    p = math.sqrt(p2)
    tmp = math.atan2(ca + cb, d - sa - sb) - math.atan2(2.0, p)
    return _mod2pi(alpha - tmp), p, _mod2pi(beta - tmp)


def dubins_word(alpha: float, beta: float, d: float, word: PathWord, radius: float = 1.0) -> DubinsSolution:
    """Segment lengths of ``word`` between the normalized configurations.

    Raises :class:`Infeasible` when the word cannot join them.
    """
    if d < 0.0:
        raise ValueError(f"distance must be non-negative, got {d}")
    params = _word_params(alpha, beta, d, word)
    if params is None:
        raise Infeasible(f"{word} cannot connect alpha={alpha:.6g}, beta={beta:.6g}, d={d:.6g}")
    return DubinsSolution(word, params, radius)


def shortest_dubins(alpha: float, beta: float, d: float, radius: float = 1.0,
                    words=WORD_ORDER) -> DubinsSolution:
    best = None
    best_len = math.inf
    for word in words:
        params = _word_params(alpha, beta, d, word)
        if params is None:
            continue
        length = params[0] + params[1] + params[2]
        # strict comparison keeps the earlier word on ties
        if length < best_len:
            best, best_len = (word, params), length
    if best is None:
        raise NoSolution(f"no BSB word connects alpha={alpha:.6g}, beta={beta:.6g}, d={d:.6g}")
    return DubinsSolution(best[0], best[1], radius)


def dubins_frame(start: Pose, goal: Pose, radius: float) -> tuple[float, float, float, float]:
    """Return ``(alpha, beta, d_normalized, theta)`` for two poses."""
    dx, dy = goal.x - start.x, goal.y - start.y
    theta = wrap_2pi(math.atan2(dy, dx))
    d = math.hypot(dx, dy) / radius
    return wrap_2pi(start.psi - theta), wrap_2pi(goal.psi - theta), d, theta


def dubins_between(start: Pose, goal: Pose, radius: float, words=WORD_ORDER) -> DubinsSolution:
    alpha, beta, d, _ = dubins_frame(start, goal, radius)
    return shortest_dubins(alpha, beta, d, radius, words)


def sample_dubins(sol: DubinsSolution, alpha: float, step: float = 1e-3):
    """Integrate the normalized path from ``(0, 0, alpha)``; returns the end state.

    Arcs are stepped exactly (chord formula) so the only error is roundoff;
    ``step`` bounds the arc increment.
    """
    x, y, h = 0.0, 0.0, alpha
    deltas = (sol.word.delta1, 0, sol.word.delta2)
    for seg, delta in zip(sol.seg_lengths, deltas):
        if delta == 0:
            x += seg * math.cos(h)
            y += seg * math.sin(h)
            continue
        n = max(1, int(math.ceil(seg / step)))
        dphi = seg / n
        for _ in range(n):
            h_new = h + delta * dphi
            x += delta * (math.sin(h_new) - math.sin(h))
            y -= delta * (math.cos(h_new) - math.cos(h))
            h = h_new
    return x, y, wrap_2pi(h)


def decision_table(pair: tuple[int, int], corrected: bool = True) -> tuple[PathWord, ...]:
    """Candidate words for the quadrant pair ``(l, m)``."""
    table = DECISION_TABLE if corrected else UNCORRECTED_TABLE
    return table[pair]


def candidate_words(alpha: float, beta: float, corrected: bool = True) -> tuple[PathWord, ...]:
    return decision_table((quadrant_of(alpha), quadrant_of(beta)), corrected)


# ---------------------------------------------------------------- bulk paths

def dubins_lengths_array(alpha, beta, d) -> np.ndarray:
    """Normalized lengths of all four words, shape ``(4, N)`` in WORD_ORDER.

    Infeasible words get ``inf``.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    d = np.broadcast_to(np.asarray(d, dtype=float), np.broadcast(alpha, beta).shape)
    sa, ca, sb, cb = np.sin(alpha), np.cos(alpha), np.sin(beta), np.cos(beta)
    cab = np.cos(alpha - beta)
    out = np.full((4,) + d.shape, np.inf)

    def m2(a):
        return np.mod(a, TWO_PI)

    with np.errstate(invalid="ignore"):
        p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb)
        tmp = np.arctan2(cb - ca, d + sa - sb)
        out[0] = np.where(p2 >= 0, m2(tmp - alpha) + np.sqrt(p2) + m2(beta - tmp), np.inf)

        p2 = -2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb)
        p = np.sqrt(p2)
        tmp = np.arctan2(-ca - cb, d + sa + sb) - np.arctan2(-2.0, p)
        out[1] = np.where(p2 >= 0, m2(tmp - alpha) + p + m2(tmp - beta), np.inf)

        p2 = -2.0 + d * d + 2.0 * cab - 2.0 * d * (sa + sb)
        p = np.sqrt(p2)
        tmp = np.arctan2(ca + cb, d - sa - sb) - np.arctan2(2.0, p)
        out[2] = np.where(p2 >= 0, m2(alpha - tmp) + p + m2(beta - tmp), np.inf)

        p2 = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa)
        tmp = np.arctan2(ca - cb, d - sa + sb)
        out[3] = np.where(p2 >= 0, m2(alpha - tmp) + np.sqrt(p2) + m2(tmp - beta), np.inf)
    return out


def shortest_word_index_array(alpha, beta, d) -> np.ndarray:
    """Index into WORD_ORDER of the shortest word; argmin keeps the first tie."""
    return np.argmin(dubins_lengths_array(alpha, beta, d), axis=0)


# ---------------------------------------------------------------- validation

@dataclass
class BlockReport:
    pair: tuple[int, int]
    candidates: tuple[PathWord, ...]
    n_samples: int
    violations: list[dict] = field(default_factory=list)
    region: np.ndarray | None = None  # grid_n x grid_n word indices, rows alpha

    @property
    def n_violations(self) -> int:
        return len(self.violations)

    def to_dict(self, include_region: bool = False) -> dict:
        out = {
            "pair": list(self.pair),
            "name": f"a{self.pair[0]}{self.pair[1]}",
            "candidates": [w.value for w in self.candidates],
            "n_samples": self.n_samples,
            "n_violations": self.n_violations,
            "violations": self.violations,
        }
        if include_region and self.region is not None:
            out["region"] = self.region.tolist()
        return out


@dataclass
class TableReport:
    d: float
    grid_n: int
    corrected: bool
    blocks: dict[tuple[int, int], BlockReport]
    probes: list[dict] = field(default_factory=list)

    @property
    def total_violations(self) -> int:
        return sum(b.n_violations for b in self.blocks.values())

    def to_dict(self, include_region: bool = False) -> dict:
        return {
            "schema": 1,
            "d": self.d,
            "grid_n": self.grid_n,
            "corrected": self.corrected,
            "word_order": [w.value for w in WORD_ORDER],
            "total_violations": self.total_violations,
            "blocks": [self.blocks[k].to_dict(include_region) for k in sorted(self.blocks)],
            "probes": self.probes,
        }


def validate_table(d: float, grid_n: int, corrected: bool = True,
                   probes: list[tuple[float, float]] | None = None,
                   keep_regions: bool = True) -> TableReport:
    """Check every decision-table block against the exhaustive shortest word.

    Each block is sampled on a ``grid_n`` x ``grid_n`` grid of cell centres
    inside its quadrant box.  ``probes`` are extra ``(alpha, beta)`` points
    reported individually.
    """
    if d <= 4.0:
        raise ValueError(f"table is only valid for d > 4 radii, got {d}")
    if grid_n < 1:
        raise ValueError("grid_n must be positive")
    table = DECISION_TABLE if corrected else UNCORRECTED_TABLE
    frac = (np.arange(grid_n) + 0.5) / grid_n * HALF_PI
    blocks = {}
    for (l, m), cands in sorted(table.items()):
        a = (l - 1) * HALF_PI + frac
        b = (m - 1) * HALF_PI + frac
        aa, bb = np.meshgrid(a, b, indexing="ij")
        best = shortest_word_index_array(aa, bb, d)
        allowed = np.array([w in cands for w in WORD_ORDER])
        bad = ~allowed[best]
        viol = [
            {"alpha": float(aa[i, j]), "beta": float(bb[i, j]), "optimal": WORD_ORDER[best[i, j]].value}
            for i, j in zip(*np.nonzero(bad))
        ]
        blocks[(l, m)] = BlockReport((l, m), cands, grid_n * grid_n, viol,
                                     best.astype(np.int8) if keep_regions else None)
    probe_out = []
    for alpha, beta in probes or ():
        sol = shortest_dubins(alpha, beta, d)
        pair = (quadrant_of(alpha), quadrant_of(beta))
        probe_out.append({
            "alpha": alpha, "beta": beta, "pair": list(pair), "optimal": sol.word.value,
            "in_block": sol.word in table[pair],
        })
    return TableReport(d, grid_n, corrected, blocks, probe_out)
