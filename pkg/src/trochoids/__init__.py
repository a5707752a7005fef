"""Time-optimal turn-rate-limited paths in steady uniform wind.

Quick use::

    from trochoids import Pose, Wind, VehicleLimits, plan
    res = plan(Pose(0, 0, 0), Pose(400, 300, 1.0), Wind(5, 2), VehicleLimits(20, 0.2))
    res.word, res.total_time, res.best.to_csv()
"""

from trochoids.bench import BenchConfig, BenchReport, baseline_plan, run_bench
from trochoids.candidate_reduction import PlanResult, Regime, plan
from trochoids.dubins_core import PathWord, decision_table, shortest_dubins, validate_table
from trochoids.errors import DegeneratePoints, Infeasible, NoSolution, TrochoidError, WindTooStrong
from trochoids.geom_frames import Pose, VehicleLimits, Wind, from_wind_frame, to_wind_frame
from trochoids.trochoid_solver import SampledPath, TrochoidProblem, TrochoidSolution, construct_path

__all__ = [
    "BenchConfig", "BenchReport", "baseline_plan", "run_bench",
    "PlanResult", "Regime", "plan",
    "PathWord", "decision_table", "shortest_dubins", "validate_table",
    "DegeneratePoints", "Infeasible", "NoSolution", "TrochoidError", "WindTooStrong",
    "Pose", "VehicleLimits", "Wind", "from_wind_frame", "to_wind_frame",
    "SampledPath", "TrochoidProblem", "TrochoidSolution", "construct_path",
]
