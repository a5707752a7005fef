"""Quadrant-based reduction of the BSB candidate set, and the planner itself.

In the wind frame the goal slides along the line ``y = y_goal`` towards -x.
As it does, the bearing ``theta`` from the start sweeps monotonically toward
pi, and the Dubins-frame angles ``alpha = psi_s - theta`` and
``beta = psi_g - theta`` cross quadrant boundaries at up to four
*transition points*.  Between two of them the decision-table block is fixed,
so once the segment holding the rendezvous is known only that block's words
need solving.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from trochoids.dubins_core import (
    WORD_ORDER, WORD_RANK, DECISION_TABLE, UNCORRECTED_TABLE, PathWord, shortest_dubins,
)
from trochoids.errors import Infeasible, NoSolution
from trochoids.geom_frames import (
    HALF_PI, Pose, VehicleLimits, Wind, bearing, quadrant_of, wrap_2pi,
)
from trochoids.trochoid_solver import (
    SampledPath, TrochoidProblem, TrochoidSolution, best_for_word, construct_path,
)

TIE_TOL = 1e-9  # s
BOUNDARY_TOL = 1e-9  # rad


class Regime(str, enum.Enum):
    REDUCED = "reduced"
    SHORT_DISTANCE_FULL = "short_distance_full"
    EXHAUSTIVE = "exhaustive"  # baseline planner, no reduction attempted


@dataclass(frozen=True)
class TransitionPoint:
    r: float        # distance travelled by the goal from its t = 0 position [m]
    source: str     # "alpha" or "beta"
    theta: float    # bearing from the start at which the quadrant changes


@dataclass(frozen=True)
class Segment:
    theta_q: float | None
    regime: Regime
    index: int          # segment number, 0 = before the first transition point
    r_lo: float
    r_hi: float         # inf for the tail beyond the last transition point


@dataclass
class PlanResult:
    word: PathWord
    total_time: float
    solution: TrochoidSolution
    candidates_evaluated: list[PathWord]
    numeric_solves: int
    regime: Regime
    block: tuple[int, int] | None = None
    theta_q: float | None = None
    transitions: list[TransitionPoint] = field(default_factory=list)
    best: SampledPath | None = None
    candidate_times: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "word": self.word.value,
            "total_time": self.total_time,
            "t1": self.solution.t1,
            "t2": self.solution.t2,
            "k": self.solution.k,
            "regime": self.regime.value,
            "block": None if self.block is None else f"a{self.block[0]}{self.block[1]}",
            "theta_q": self.theta_q,
            "candidates_evaluated": [w.value for w in self.candidates_evaluated],
            "candidate_times": {w.value: t for w, t in self.candidate_times.items()},
            "numeric_solves": self.numeric_solves,
            "transitions": [{"r": p.r, "source": p.source, "theta": p.theta} for p in self.transitions],
        }


def calc_delta_theta(psi: float, theta0: float, y_sign: int) -> float | None:
    """Signed bearing rotation from ``theta0`` until ``psi - theta`` next
    changes quadrant; ``None`` when the bearing never rotates."""
    if y_sign == 0:
        return None
    if y_sign > 0:
        step = math.fmod(wrap_2pi(psi - theta0), HALF_PI)
        return step if step > 0.0 else HALF_PI
    step = math.fmod(wrap_2pi(theta0 - psi), HALF_PI)
    return -step if step > 0.0 else -HALF_PI


def calc_transition_points(start: Pose, goal: Pose) -> list[TransitionPoint]:
    """Transition points along the goal's -x track, sorted by ``r``."""
    dx, dy = goal.x - start.x, goal.y - start.y
    theta0 = bearing(start, goal.xy)
    if dy == 0.0:
        return []
    sign = 1 if dy > 0.0 else -1
    out = []
    for source, psi in (("alpha", start.psi), ("beta", goal.psi)):
        theta = theta0 + calc_delta_theta(psi, theta0, sign)
        for _ in range(2):
            # the sweep ends at pi; past it the ray never meets the goal track
            if (sign > 0 and theta >= math.pi) or (sign < 0 and theta <= math.pi):
                break
            r = dx - dy / math.tan(theta)
            if r > 0.0:
                out.append(TransitionPoint(r, source, wrap_2pi(theta)))
            theta += sign * HALF_PI
    out.sort(key=lambda p: p.r)
    return out


def segment_clearance(start: Pose, goal: Pose, r_lo: float, r_hi: float) -> float:
    """Closest approach between the start and the goal while it travels from
    ``r_lo`` to ``r_hi``."""
    x_near = min(max(start.x, goal.x - r_hi), goal.x - r_lo)
    return math.hypot(x_near - start.x, goal.y - start.y)


def find_solution_segment(transitions: list[TransitionPoint], problem: TrochoidProblem) -> Segment:
    """Locate the constant-quadrant segment that contains the rendezvous.

    Falls back to :attr:`Regime.SHORT_DISTANCE_FULL` whenever the goal gets
    within four turning radii of the start before the rendezvous can be
    ruled out, since the decision table is only valid beyond that distance.
    """
    start, goal, vw = problem.start, problem.goal, problem.vw
    va, radius = problem.limits.va, problem.rho
    four_r = 4.0 * radius
    dx, dy = goal.x - start.x, goal.y - start.y

    if vw == 0.0:
        if math.hypot(dx, dy) <= four_r:
            return Segment(None, Regime.SHORT_DISTANCE_FULL, 0, 0.0, 0.0)
        return Segment(bearing(start, goal.xy), Regime.REDUCED, 0, 0.0, 0.0)
    if dy == 0.0 and dx > 0.0:
        # goal drives straight through the start; bearing jumps by pi
        return Segment(None, Regime.SHORT_DISTANCE_FULL, 0, 0.0, math.inf)

    r_prev = 0.0
    for n, point in enumerate(transitions):
        if segment_clearance(start, goal, r_prev, point.r) <= four_r:
            return Segment(None, Regime.SHORT_DISTANCE_FULL, n, r_prev, point.r)
        target = Pose(goal.x - point.r, goal.y, goal.psi)
        alpha = wrap_2pi(start.psi - point.theta)
        beta = wrap_2pi(goal.psi - point.theta)
        d = math.hypot(target.x - start.x, target.y - start.y) / radius
        t_start = shortest_dubins(alpha, beta, d, radius).total_length / va
        t_goal = point.r / vw
        if t_start <= t_goal:
            theta_q = wrap_2pi(math.atan2(dy, dx - 0.5 * (point.r + r_prev)))
            return Segment(theta_q, Regime.REDUCED, n, r_prev, point.r)
        r_prev = point.r

    if segment_clearance(start, goal, r_prev, math.inf) <= four_r:
        return Segment(None, Regime.SHORT_DISTANCE_FULL, len(transitions), r_prev, math.inf)
    theta_last = transitions[-1].theta if transitions else bearing(start, goal.xy)
    return Segment(0.5 * (theta_last + math.pi), Regime.REDUCED, len(transitions), r_prev, math.inf)


def _quadrants_near(angle: float) -> set[int]:
    """Quadrant of ``angle`` plus its neighbour when within BOUNDARY_TOL of a boundary."""
    a = wrap_2pi(angle)
    out = {quadrant_of(a)}
    off = math.fmod(a, HALF_PI)
    if off < BOUNDARY_TOL:
        out.add(quadrant_of(a - HALF_PI))
    elif HALF_PI - off < BOUNDARY_TOL:
        out.add(quadrant_of(a + HALF_PI))
    return out


def block_candidates(alpha: float, beta: float, corrected: bool = True) -> list[PathWord]:
    """Decision-table words for ``(alpha, beta)`` in fixed word order.

    An angle sitting on a quadrant boundary takes the union of both
    adjacent blocks, since the lookup cannot tell which side is meant.
    """
    table = DECISION_TABLE if corrected else UNCORRECTED_TABLE
    words = set()
    for l in _quadrants_near(alpha):
        for m in _quadrants_near(beta):
            words.update(table[(l, m)])
    return [w for w in WORD_ORDER if w in words]


def select_best(problem: TrochoidProblem, words) -> tuple[TrochoidSolution | None, dict, int]:
    """Solve each word; return the fastest solution, per-word times and the
    number of root-finding solves performed."""
    best = None
    times = {}
    numeric = 0
    for word in words:
        if not word.is_analytic:
            numeric += 1
        try:
            sol = best_for_word(problem, word)
        except Infeasible:
            times[word] = math.inf
            continue
        times[word] = sol.T
        if best is None or sol.T < best.T - TIE_TOL or (
                abs(sol.T - best.T) <= TIE_TOL and WORD_RANK[word] < WORD_RANK[best.word]):
            best = sol
    return best, times, numeric


def plan_problem(problem: TrochoidProblem, corrected: bool = True) -> PlanResult:
    """Reduced-candidate plan for a problem already in the wind frame."""
    start, goal = problem.start, problem.goal
    if math.hypot(goal.x - start.x, goal.y - start.y) <= 1e-9:
        transitions = []
        seg = Segment(None, Regime.SHORT_DISTANCE_FULL, 0, 0.0, 0.0)
    else:
        transitions = calc_transition_points(start, goal)
        seg = find_solution_segment(transitions, problem)

    block = None
    if seg.regime is Regime.REDUCED:
        alpha_q, beta_q = start.psi - seg.theta_q, goal.psi - seg.theta_q
        block = (quadrant_of(alpha_q), quadrant_of(beta_q))
        words = block_candidates(alpha_q, beta_q, corrected)
    else:
        words = list(WORD_ORDER)

    best, times, numeric = select_best(problem, words)
    evaluated = list(words)
    if best is None and len(words) < 4:
        rest = [w for w in WORD_ORDER if w not in words]
        best, more, extra = select_best(problem, rest)
        times.update(more)
        numeric += extra
        evaluated += rest
    if best is None:
        raise NoSolution("no BSB candidate reaches the goal")
    return PlanResult(best.word, best.T, best, evaluated, numeric, seg.regime, block,
                      seg.theta_q, transitions, None, times)


def plan(start: Pose, goal: Pose, wind: Wind, limits: VehicleLimits, dt: float | None = 0.1,
         corrected: bool = True) -> PlanResult:
    """Time-optimal BSB path from ``start`` to ``goal`` (inertial frame).

    ``dt=None`` skips path sampling and only solves.
    """
    problem = TrochoidProblem.from_inertial(start, goal, wind, limits)
    result = plan_problem(problem, corrected)
    if dt is not None:
        result.best = construct_path(result.solution, problem, dt, wind, start.z, goal.z, start)
    return result
