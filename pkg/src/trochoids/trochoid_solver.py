"""Bang-Straight-Bang trochoid solutions in a steady uniform wind.

The problem is posed in the wind frame (x along the wind) moving with the
air mass.  There the vehicle flies plain Dubins kinematics at airspeed
``va`` while the goal drifts at ``-vw`` along x; a path of duration ``T``
must end at ``goal(0) - (vw*T, 0)`` with the goal heading.

A solution is three pieces of duration ``t1`` (first bank), ``t2 - t1``
(straight) and ``T - t2`` (second bank).  Extra full turns are carried by
the integer branch ``k`` on the second bank.  LSL/RSR have a closed form
per branch; LSR/RSL need a scalar root solve in ``t1``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from trochoids.dubins_core import PathWord
from trochoids.errors import Infeasible, WindTooStrong
from trochoids.geom_frames import TWO_PI, Pose, VehicleLimits, Wind, from_wind_frame, to_wind_frame, wrap_2pi

K_RANGE = (-3, -2, -1, 0, 1, 2)
FEAS_MARGIN = 1e-6        # m/s, required gap between airspeed and wind
RENDEZVOUS_TOL = 1e-6     # m
HEADING_TOL = 1e-8        # rad
RESIDUAL_TOL = 1e-10
MAX_NEWTON_ITER = 50
SCAN_POINTS = 100


@dataclass(frozen=True)
class TrochoidProblem:
    start: Pose           # wind frame
    goal: Pose            # wind frame, position at t = 0
    vw: float
    limits: VehicleLimits

    def __post_init__(self):
        if self.vw < 0.0:
            raise ValueError("wind magnitude must be non-negative")
        if not self.limits.va > self.vw + FEAS_MARGIN:
            raise WindTooStrong(self.vw, self.limits.va)

    @classmethod
    def from_inertial(cls, start: Pose, goal: Pose, wind: Wind, limits: VehicleLimits) -> "TrochoidProblem":
        return cls(to_wind_frame(start, wind), to_wind_frame(goal, wind), wind.speed, limits)

    @property
    def rho(self) -> float:
        return self.limits.radius

    def goal_at(self, t: float) -> tuple[float, float]:
        return self.goal.x - self.vw * t, self.goal.y

    def start_center(self, delta: int) -> tuple[float, float]:
        s, r = self.start, self.rho
        return s.x - delta * r * math.sin(s.psi), s.y + delta * r * math.cos(s.psi)

    def goal_center0(self, delta: int) -> tuple[float, float]:
        """Centre of the final turn circle for a zero-duration path."""
        g, r = self.goal, self.rho
        return g.x - delta * r * math.sin(g.psi), g.y + delta * r * math.cos(g.psi)

    def mirrored(self) -> "TrochoidProblem":
        s, g = self.start, self.goal
        return TrochoidProblem(Pose(s.x, -s.y, -s.psi, s.z), Pose(g.x, -g.y, -g.psi, g.z), self.vw, self.limits)


@dataclass(frozen=True)
class TrochoidSolution:
    word: PathWord
    t1: float
    t2: float
    T: float
    k: int
    centers: tuple[float, float, float, float]  # first-turn and final-turn centres, air frame
    heading: float                              # heading on the straight, wind frame
    gamma: float | None = None                  # closed-form words only

    def to_dict(self) -> dict:
        return {
            "word": self.word.value, "t1": self.t1, "t2": self.t2, "T": self.T, "k": self.k,
            "centers": list(self.centers), "heading": self.heading, "gamma": self.gamma,
        }


def state_at(sol: TrochoidSolution, problem: TrochoidProblem, t: float) -> tuple[float, float, float]:
    """Vehicle state ``(x, y, psi)`` in the air-relative wind frame at time ``t``."""
    va, omega, rho = problem.limits.va, problem.limits.omega, problem.rho
    d1, d2 = sol.word.delta1, sol.word.delta2
    cx1, cy1, cx2, cy2 = sol.centers
    if t <= sol.t1:
        h = problem.start.psi + d1 * omega * t
        return cx1 + d1 * rho * math.sin(h), cy1 - d1 * rho * math.cos(h), wrap_2pi(h)
    h = sol.heading
    if t <= sol.t2:
        ex, ey = cx1 + d1 * rho * math.sin(h), cy1 - d1 * rho * math.cos(h)
        s = t - sol.t1
        return ex + va * s * math.cos(h), ey + va * s * math.sin(h), wrap_2pi(h)
    hh = h + d2 * omega * (min(t, sol.T) - sol.t2)
    return cx2 + d2 * rho * math.sin(hh), cy2 - d2 * rho * math.cos(hh), wrap_2pi(hh)


def rendezvous_error(sol: TrochoidSolution, problem: TrochoidProblem) -> tuple[float, float]:
    """Position [m] and heading [rad] miss between path end and the drifting goal."""
    x, y, psi = state_at(sol, problem, sol.T)
    gx, gy = problem.goal_at(sol.T)
    dpsi = abs(wrap_2pi(psi - problem.goal.psi + math.pi) - math.pi)
    return math.hypot(x - gx, y - gy), dpsi


def _finish(problem, word, k, t1, A, vx, vy, h, gamma=None):
    """Build and validate one candidate; returns None if it is not a real path."""
    va, vw = problem.limits.va, problem.vw
    ux, uy = va * math.cos(h) + vw, va * math.sin(h)
    s = (vx * ux + vy * uy) / (ux * ux + uy * uy)
    scale = 1e-9 * max(1.0, problem.limits.t_2pi)
    a2 = A - t1
    if s < -scale or a2 < -scale:
        return None
    s = max(s, 0.0)
    a2 = max(a2, 0.0)
    cx1, cy1 = problem.start_center(word.delta1)
    gcx, gcy = problem.goal_center0(word.delta2)
    T = t1 + s + a2
    sol = TrochoidSolution(word, t1, t1 + s, T, k, (cx1, cy1, gcx - vw * T, gcy), wrap_2pi(h), gamma)
    pos_err, psi_err = rendezvous_error(sol, problem)
    if pos_err > RENDEZVOUS_TOL or psi_err > HEADING_TOL:
        return None
    return sol


def _branch_offset(problem: TrochoidProblem, word: PathWord, k: int) -> float:
    """Second-bank duration at ``t1 = 0`` for branch ``k``."""
    omega = problem.limits.omega
    big_psi = wrap_2pi(problem.start.psi - problem.goal.psi)
    return problem.limits.t_2pi - (big_psi + 2.0 * k * math.pi) / (word.delta2 * omega)


def solve_analytic(problem: TrochoidProblem, word: PathWord) -> list[TrochoidSolution]:
    """All valid closed-form LSL/RSR solutions, one per admissible branch ``k``."""
    if not word.is_analytic:
        raise ValueError(f"{word} has no closed form; use solve_numeric")
    va, vw, omega = problem.limits.va, problem.vw, problem.limits.omega
    t2pi = problem.limits.t_2pi
    delta = word.delta1
    cx1, cy1 = problem.start_center(delta)
    gcx, gcy = problem.goal_center0(delta)
    dx, dy = gcx - cx1, gcy - cy1
    out = []
    for k in K_RANGE:
        total_turn = _branch_offset(problem, word, k)  # t1 + (T - t2)
        if total_turn < -1e-12 * t2pi:
            continue
        total_turn = max(total_turn, 0.0)
        vx, vy = dx - vw * total_turn, dy
        if math.hypot(vx, vy) < 1e-12 * max(1.0, problem.rho):
            gamma, h = None, problem.start.psi
        else:
            gamma = math.atan2(vy, vx)
            ratio = vw / va * math.sin(gamma)
            if abs(ratio) > 1.0:
                continue
            h = gamma + math.asin(ratio)
        t1 = wrap_2pi(delta * (h - problem.start.psi)) / omega
        if t1 > t2pi * (1.0 - 1e-12):
            t1 = 0.0
        sol = _finish(problem, word, k, t1, total_turn, vx, vy, h, gamma)
        if sol is not None:
            out.append(sol)
    if not out:
        raise Infeasible(f"no valid {word} branch")
    return out


class _MixedTerms:
    """Constants of the mixed-turn residual for one problem and word."""

    def __init__(self, problem: TrochoidProblem, word: PathWord):
        self.va, self.vw = problem.limits.va, problem.vw
        self.omega, self.rho = problem.limits.omega, problem.rho
        self.psi_s = problem.start.psi
        d1, d2 = self.d1, self.d2 = word.delta1, word.delta2
        cx1, cy1 = problem.start_center(d1)
        gcx, gcy = problem.goal_center0(d2)
        self.dx, self.dy = gcx - cx1, gcy - cy1
        self.big_psi = wrap_2pi(problem.start.psi - problem.goal.psi)
        self.t2pi = problem.limits.t_2pi
        self.turn_slope = 1.0 - d1 / d2     # d(total turn time)/d(t1)

    def terms(self, t1, k):
        """Exit heading, its sin/cos, straight displacement and total turn time.
        Works on scalars and arrays."""
        # second-bank duration is linear in t1 on each branch
        c_k = self.t2pi - (self.big_psi + 2.0 * k * math.pi) / (self.d2 * self.omega)
        total_turn = self.turn_slope * t1 + c_k
        h = self.psi_s + self.d1 * self.omega * t1
        sh, ch = np.sin(h), np.cos(h)
        off = self.rho * (self.d2 - self.d1)
        vx = self.dx - self.vw * total_turn + off * sh
        vy = self.dy - off * ch
        return h, sh, ch, vx, vy, total_turn

    def residual(self, t1, k):
        _, sh, ch, vx, vy, _ = self.terms(t1, k)
        return vx * self.va * sh - vy * (self.va * ch + self.vw)

    def derivative(self, t1, k):
        va, vw = self.va, self.vw
        _, sh, ch, vx, vy, _ = self.terms(t1, k)
        dh = self.d1 * self.omega
        off = self.rho * (self.d2 - self.d1)
        dvx = -vw * self.turn_slope + off * ch * dh
        dvy = off * sh * dh
        ux, uy = va * ch + vw, va * sh
        dux, duy = -va * sh * dh, va * ch * dh
        return dvx * uy + vx * duy - dvy * ux - vy * dux


def residual_f(t1, k, problem: TrochoidProblem, word: PathWord):
    """Mixed-turn residual ``E cos(h) + F(t1) sin(h) - G`` with ``h`` the exit heading.

    It is the cross product of the required straight-segment displacement
    with the ground velocity on that heading; it vanishes exactly when the
    two are collinear.  Units are m^2/s.
    """
    if word.is_analytic:
        raise ValueError(f"{word} uses the closed form")
    return _MixedTerms(problem, word).residual(t1, k)


def _safeguarded_newton(fn, dfn, lo, hi, flo):
    """Vectorized Newton on sign-change brackets, bisecting whenever a step
    leaves the bracket.  ``fn``/``dfn`` map arrays of abscissae to values."""
    x = 0.5 * (lo + hi)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(MAX_NEWTON_ITER):
        fx = fn(x)
        done = np.abs(fx) < RESIDUAL_TOL
        same = np.sign(fx) == np.sign(flo)
        lo = np.where(same & ~done, x, lo)
        flo = np.where(same & ~done, fx, flo)
        hi = np.where(~same & ~done, x, hi)
        active &= ~done & (hi - lo > 1e-15 * np.maximum(1.0, np.abs(x)))
        if not active.any():
            break
        dfx = dfn(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = x - fx / dfx
        ok = np.isfinite(step) & (step > lo) & (step < hi)
        x = np.where(active, np.where(ok, step, 0.5 * (lo + hi)), x)
    return x


def find_roots(problem: TrochoidProblem, word: PathWord, n_scan: int = SCAN_POINTS, _mt=None):
    """Roots ``(t1, k)`` of the residual on ``[0, t_2pi]`` for every branch."""
    mt = _mt or _MixedTerms(problem, word)
    t2pi = problem.limits.t_2pi
    ks = np.array(K_RANGE, dtype=float)[:, None]
    grid = np.linspace(0.0, t2pi, n_scan)[None, :]
    f = mt.residual(grid, ks)
    fa, fb = f[:, :-1], f[:, 1:]
    kk, ii = np.nonzero((fa == 0.0) | (fa * fb < 0.0))
    if kk.size == 0:
        return np.empty(0), np.empty(0)
    step = t2pi / (n_scan - 1)
    lo = ii * step
    hi = lo + step
    kval = ks[kk, 0]
    flo = fa[kk, ii]
    exact = flo == 0.0
    roots = _safeguarded_newton(
        lambda x: mt.residual(x, kval),
        lambda x: mt.derivative(x, kval),
        lo, hi, np.where(exact, 1.0, flo),
    )
    return np.where(exact, lo, roots), kval


def solve_numeric(problem: TrochoidProblem, word: PathWord, n_scan: int = SCAN_POINTS) -> list[TrochoidSolution]:
    """All valid LSR/RSL solutions found by bracketed root finding."""
    if word.is_analytic:
        raise ValueError(f"{word} has a closed form; use solve_analytic")
    mt = _MixedTerms(problem, word)
    roots, ks = find_roots(problem, word, n_scan, mt)
    out = []
    if roots.size:
        h, _, _, vx, vy, total_turn = mt.terms(roots, ks)
        for i in range(roots.size):
            sol = _finish(problem, word, int(ks[i]), float(roots[i]), float(total_turn[i]),
                          float(vx[i]), float(vy[i]), float(h[i]))
            if sol is not None:
                out.append(sol)
    if not out:
        raise Infeasible(f"no valid {word} root")
    return out


def solve_word(problem: TrochoidProblem, word: PathWord) -> list[TrochoidSolution]:
    return solve_analytic(problem, word) if word.is_analytic else solve_numeric(problem, word)


def best_for_word(problem: TrochoidProblem, word: PathWord) -> TrochoidSolution:
    """Minimum-time solution of one word; raises :class:`Infeasible`."""
    return min(solve_word(problem, word), key=lambda s: (s.T, s.k))


# ---------------------------------------------------------------- sampling

@dataclass
class SampledPath:
    word: PathWord
    total_time: float
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    psi: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def samples(self) -> list[tuple[float, Pose]]:
        return [(float(t), Pose(float(x), float(y), float(p), float(z)))
                for t, x, y, z, p in zip(self.t, self.x, self.y, self.z, self.psi)]

    def __len__(self):
        return len(self.t)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "x", "y", "z", "psi"])
        for row in zip(self.t, self.x, self.y, self.z, self.psi):
            w.writerow([repr(float(v)) for v in row])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def to_dict(self) -> dict:
        return {
            "word": self.word.value,
            "total_time": self.total_time,
            "columns": ["t", "x", "y", "z", "psi"],
            "samples": np.column_stack([self.t, self.x, self.y, self.z, self.psi]).tolist(),
            **self.meta,
        }

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict())
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _segment_times(t0: float, t1: float, dt: float) -> np.ndarray:
    span = t1 - t0
    if span < 1e-9:
        return np.empty(0)
    n = max(1, int(math.ceil(span / dt - 1e-12)))
    return t0 + span * np.arange(n) / n


def construct_path(sol: TrochoidSolution, problem: TrochoidProblem, dt: float, wind: Wind,
                   z_start: float | None = None, z_goal: float | None = None,
                   origin: Pose | None = None) -> SampledPath:
    """Sample ``sol`` every ``dt`` seconds (or finer) and return it in the inertial frame.

    Altitude is interpolated linearly in time between ``z_start`` and
    ``z_goal`` (default: the problem poses' altitudes).  ``origin`` is the
    inertial start pose; when given, the first sample is copied from it so
    the frame round trip cannot perturb it.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    z0 = problem.start.z if z_start is None else z_start
    z1 = problem.goal.z if z_goal is None else z_goal
    va, omega, rho, vw = problem.limits.va, problem.limits.omega, problem.rho, problem.vw
    d1, d2 = sol.word.delta1, sol.word.delta2
    cx1, cy1, cx2, cy2 = sol.centers

    tb1 = _segment_times(0.0, sol.t1, dt)
    h1 = problem.start.psi + d1 * omega * tb1
    x1 = cx1 + d1 * rho * np.sin(h1)
    y1 = cy1 - d1 * rho * np.cos(h1)
    if tb1.size:
        # t = 0 must reproduce the start pose exactly, not via the circle centre
        x1[0], y1[0] = problem.start.x, problem.start.y

    h = sol.heading
    ex, ey = cx1 + d1 * rho * math.sin(h), cy1 - d1 * rho * math.cos(h)
    if sol.t1 < 1e-9:
        ex, ey = problem.start.x, problem.start.y
    nx, ny = cx2 + d2 * rho * math.sin(h), cy2 - d2 * rho * math.cos(h)
    ts = _segment_times(sol.t1, sol.t2, dt)
    frac = (ts - sol.t1) / max(sol.t2 - sol.t1, 1e-300)
    xs = ex + (nx - ex) * frac
    ys = ey + (ny - ey) * frac
    hs = np.full(ts.shape, h)

    tb2 = _segment_times(sol.t2, sol.T, dt)
    h2 = h + d2 * omega * (tb2 - sol.t2)
    x2 = cx2 + d2 * rho * np.sin(h2)
    y2 = cy2 - d2 * rho * np.cos(h2)

    fx, fy, fpsi = state_at(sol, problem, sol.T)
    t = np.concatenate([tb1, ts, tb2, [sol.T]])
    xa = np.concatenate([x1, xs, x2, [fx]])
    ya = np.concatenate([y1, ys, y2, [fy]])
    psa = np.concatenate([h1, hs, h2, [fpsi]])
    if t.size == 1:
        t = np.array([0.0, sol.T])
        xa = np.array([problem.start.x, fx])
        ya = np.array([problem.start.y, fy])
        psa = np.array([problem.start.psi, fpsi])

    # air frame -> wind-aligned ground frame -> inertial
    xg = xa + vw * t
    psi_w = wind.angle
    c, s = math.cos(psi_w), math.sin(psi_w)
    xi = c * xg - s * ya
    yi = s * xg + c * ya
    psi_i = np.mod(psa + psi_w, TWO_PI)
    psi_i[psi_i >= TWO_PI] -= TWO_PI
    zz = z0 + (z1 - z0) * (t / sol.T if sol.T > 0 else np.zeros_like(t))
    if origin is not None:
        xi[0], yi[0], psi_i[0] = origin.x, origin.y, origin.psi
    return SampledPath(sol.word, sol.T, t, xi, yi, zz, psi_i)


def inertial_endpoints(problem: TrochoidProblem, wind: Wind) -> tuple[Pose, Pose]:
    return from_wind_frame(problem.start, wind), from_wind_frame(problem.goal, wind)
