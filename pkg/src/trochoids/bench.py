"""Exhaustive baseline planner and the Monte-Carlo benchmark harness."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from trochoids.candidate_reduction import PlanResult, Regime, plan_problem, select_best
from trochoids.dubins_core import WORD_ORDER
from trochoids.errors import NoSolution
from trochoids.geom_frames import Pose, VehicleLimits, Wind
from trochoids.trochoid_solver import TrochoidProblem, construct_path

MISMATCH_RTOL = 1e-6

# Column order of one sampled instance; the generator draws them in this order.
SAMPLE_FIELDS = ("x_s", "y_s", "x_g", "y_g", "psi_s", "psi_g", "psi_w", "v_w", "radius")


def baseline_problem(problem: TrochoidProblem) -> PlanResult:
    best, times, numeric = select_best(problem, WORD_ORDER)
    if best is None:
        raise NoSolution("no BSB candidate reaches the goal")
    return PlanResult(best.word, best.T, best, list(WORD_ORDER), numeric, Regime.EXHAUSTIVE,
                      candidate_times=times)


def baseline_plan(start: Pose, goal: Pose, wind: Wind, limits: VehicleLimits,
                  dt: float | None = 0.1) -> PlanResult:
    """Solve all four BSB words and keep the fastest."""
    problem = TrochoidProblem.from_inertial(start, goal, wind, limits)
    result = baseline_problem(problem)
    if dt is not None:
        result.best = construct_path(result.solution, problem, dt, wind, start.z, goal.z, start)
    return result


@dataclass
class BenchConfig:
    n_samples: int = 10_000
    position_range: float = 1000.0            # positions ~ U[-r, r]
    wind_range: tuple[float, float] = (1.0, 15.0)
    radius_range: tuple[float, float] = (10.0, 1000.0)
    airspeed: float = 20.0
    seed: int = 0
    dt: float = 0.1
    # "curvature": 1/R uniform over the radius range; "radius": R uniform
    radius_sampling: str = "curvature"
    timing: bool = True

    def validate(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")
        if not self.position_range > 0:
            raise ValueError("position_range must be positive")
        lo, hi = self.wind_range
        if not 0 <= lo <= hi:
            raise ValueError(f"bad wind_range {self.wind_range}")
        rlo, rhi = self.radius_range
        if not 0 < rlo <= rhi:
            raise ValueError(f"bad radius_range {self.radius_range}")
        if not self.airspeed > hi:
            raise ValueError("airspeed must exceed the largest sampled wind speed")
        if self.radius_sampling not in ("curvature", "radius"):
            raise ValueError(f"unknown radius_sampling {self.radius_sampling!r}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")


def sample_instances(cfg: BenchConfig) -> np.ndarray:
    """Draw ``(n, 9)`` instances with columns in :data:`SAMPLE_FIELDS` order."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    n, p = cfg.n_samples, cfg.position_range
    out = np.empty((n, len(SAMPLE_FIELDS)))
    for i in range(n):
        row = out[i]
        row[0:4] = rng.uniform(-p, p, 4)
        row[4:7] = rng.uniform(0.0, 2.0 * math.pi, 3)
        row[7] = rng.uniform(*cfg.wind_range)
        rlo, rhi = cfg.radius_range
        if cfg.radius_sampling == "curvature":
            row[8] = 1.0 / rng.uniform(1.0 / rhi, 1.0 / rlo)
        else:
            row[8] = rng.uniform(rlo, rhi)
    return out


def instance_problem(row, airspeed: float) -> tuple[Pose, Pose, Wind, VehicleLimits]:
    xs, ys, xg, yg, ps, pg, pw, vw, radius = (float(v) for v in row)
    return (Pose(xs, ys, ps), Pose(xg, yg, pg), Wind.from_polar(vw, pw),
            VehicleLimits.from_radius(airspeed, radius))


@dataclass
class BenchReport:
    n_samples: int
    word_distribution: dict[str, float]
    block_distribution: dict[str, float]      # over reduced-regime samples
    block_share_all: dict[str, float]         # over all samples
    pct_d_gt_4R: float                        # share that stays in the reduced regime
    pct_d_gt_4R_initial: float                # inertial start-goal distance > 4R
    pct_d_gt_4R_rendezvous: float             # wind-frame distance at the rendezvous > 4R
    mean_numeric_solves: float                # reduced planner, reduced-regime subset
    mean_numeric_solves_all: float
    mean_candidates: float                    # reduced planner, reduced-regime subset
    mean_time_reduced: float | None
    mean_time_baseline: float | None
    mismatches: int
    max_excess: float                         # max(T_reduced - T_baseline) [s]
    mismatch_samples: list[int] = field(default_factory=list)
    seed: int = 0
    config: dict = field(default_factory=dict)

    @property
    def speed_ratio(self) -> float | None:
        if not self.mean_time_reduced or not self.mean_time_baseline:
            return None
        return self.mean_time_reduced / self.mean_time_baseline

    def to_dict(self) -> dict:
        out = {"schema": 1, **asdict(self)}
        out["speed_ratio"] = self.speed_ratio
        out["speedup_pct"] = None if self.speed_ratio is None else 100.0 * (1.0 - self.speed_ratio)
        return out

    def deterministic_dict(self) -> dict:
        out = self.to_dict()
        for key in ("mean_time_reduced", "mean_time_baseline", "speed_ratio", "speedup_pct"):
            out.pop(key)
        return out


def run_bench(cfg: BenchConfig, progress=None) -> BenchReport:
    """Run both planners on every sampled instance and aggregate the statistics.

    Everything except the wall-clock means is a deterministic function of
    the seed.  ``progress`` is an optional callable taking the sample index.
    """
    data = sample_instances(cfg)
    n = len(data)
    word_counts = dict.fromkeys((w.value for w in WORD_ORDER), 0)
    block_counts = {f"a{l}{m}": 0 for l in range(1, 5) for m in range(1, 5)}
    n_reduced = n_init = n_rdv = 0
    numeric_red = numeric_all = cand_red = 0
    t_red = t_base = 0.0
    mismatches = []
    max_excess = -math.inf

    for i, row in enumerate(data):
        start, goal, wind, limits = instance_problem(row, cfg.airspeed)
        # alternate the order so cache effects do not favour one planner
        if i % 2 == 0:
            t0 = time.perf_counter()
            red = plan_problem(TrochoidProblem.from_inertial(start, goal, wind, limits))
            t1 = time.perf_counter()
            base = baseline_problem(TrochoidProblem.from_inertial(start, goal, wind, limits))
            t2 = time.perf_counter()
            t_red += t1 - t0
            t_base += t2 - t1
        else:
            t0 = time.perf_counter()
            base = baseline_problem(TrochoidProblem.from_inertial(start, goal, wind, limits))
            t1 = time.perf_counter()
            red = plan_problem(TrochoidProblem.from_inertial(start, goal, wind, limits))
            t2 = time.perf_counter()
            t_base += t1 - t0
            t_red += t2 - t1

        word_counts[base.word.value] += 1
        numeric_all += red.numeric_solves
        if red.regime is Regime.REDUCED:
            n_reduced += 1
            numeric_red += red.numeric_solves
            cand_red += len(red.candidates_evaluated)
            block_counts[f"a{red.block[0]}{red.block[1]}"] += 1
        radius = limits.radius
        if math.hypot(goal.x - start.x, goal.y - start.y) > 4.0 * radius:
            n_init += 1
        problem = TrochoidProblem.from_inertial(start, goal, wind, limits)
        gx, gy = problem.goal_at(base.total_time)
        if math.hypot(gx - problem.start.x, gy - problem.start.y) > 4.0 * radius:
            n_rdv += 1
        excess = red.total_time - base.total_time
        max_excess = max(max_excess, excess)
        if abs(excess) > MISMATCH_RTOL * base.total_time:
            mismatches.append(i)
        if progress is not None:
            progress(i)

    nr = max(n_reduced, 1)
    return BenchReport(
        n_samples=n,
        word_distribution={k: v / n for k, v in word_counts.items()},
        block_distribution={k: v / nr for k, v in block_counts.items()},
        block_share_all={k: v / n for k, v in block_counts.items()},
        pct_d_gt_4R=n_reduced / n,
        pct_d_gt_4R_initial=n_init / n,
        pct_d_gt_4R_rendezvous=n_rdv / n,
        mean_numeric_solves=numeric_red / nr,
        mean_numeric_solves_all=numeric_all / n,
        mean_candidates=cand_red / nr,
        mean_time_reduced=t_red / n if cfg.timing else None,
        mean_time_baseline=t_base / n if cfg.timing else None,
        mismatches=len(mismatches),
        max_excess=max_excess,
        mismatch_samples=mismatches,
        seed=cfg.seed,
        config=asdict(cfg),
    )
