"""Certified integration of the two evolution equations

    U'(t) = J(U(t)) - U(t)                    (autonomous)
    u'(t) = Phi(lam(t), u(t)) - u(t)          (parametrized)

plus the parametrization family lam(t), the time change
zeta(t) = t + ln(1+t), and the damping factor

    L(t) = exp( int_0^t [ |lam'(s)|/lam(s) - lam(s) ] ds ).

The integrator is classical RK4 with step halving; the certified error is
the Richardson difference between the last two refinements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import apply_A, apply_J, apply_Phi, h_constant, norm
from .discrete import solve_vlambda
from .errors import InputError, ResourceError

#: hard cap on total RK4 steps across refinements
MAX_TOTAL_STEPS = 2**24


# ---------------------------------------------------------------------------
# time change and parametrizations

def zeta(t):
    """zeta(t) = t + ln(1 + t) for t >= 0."""
    if t < 0:
        raise InputError("t must be >= 0")
    return t + np.log1p(t)


def zeta_inverse(s):
    """Inverse of zeta by Newton iteration (zeta' in (1, 2], so it is safe)."""
    if s < 0:
        raise InputError("s must be >= 0")
    t = max(0.0, s - np.log1p(s))
    for _ in range(100):
        r = zeta(t) - s
        if abs(r) <= 1e-12:
            return t
        t = max(0.0, t - r / (1.0 + 1.0 / (1.0 + t)))
    raise ResourceError("zeta inverse did not converge")


class Parametrization:
    """A path t -> lam(t) in (0, 1]."""

    is_c1 = True

    def value(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def describe(self):
        return type(self).__name__


class Constant(Parametrization):
    def __init__(self, lam):
        if not 0.0 < lam <= 1.0:
            raise InputError("lambda must lie in (0, 1]")
        self.lam = float(lam)

    def value(self, t):
        return self.lam

    def derivative(self, t):
        return 0.0

    def describe(self):
        return f"Constant({self.lam})"


class InverseTimeZeta(Parametrization):
    """lam(t) = 1/(2 + zeta^{-1}(t)), asymptotically 1/t + ln(t)/t^2."""

    def value(self, t):
        return 1.0 / (2.0 + zeta_inverse(t))

    def derivative(self, t):
        x = zeta_inverse(t)
        dinv = 1.0 / (1.0 + 1.0 / (1.0 + x))
        return -dinv / (2.0 + x) ** 2


class PowerAlpha(Parametrization):
    """lam(t) = (1 + t)^(alpha - 1) for alpha in [0, 1)."""

    def __init__(self, alpha):
        if not 0.0 <= alpha < 1.0:
            raise InputError("alpha must lie in [0, 1)")
        self.alpha = float(alpha)

    def value(self, t):
        return (1.0 + t) ** (self.alpha - 1.0)

    def derivative(self, t):
        return (self.alpha - 1.0) * (1.0 + t) ** (self.alpha - 2.0)

    def describe(self):
        return f"PowerAlpha({self.alpha})"


class Table(Parametrization):
    """Piecewise-linear path through knots (t_i, lam_i); held constant after
    the last knot.  Continuous but not C1: jump points take the right slope.
    """

    is_c1 = False

    def __init__(self, knots):
        knots = [(float(t), float(v)) for t, v in knots]
        if len(knots) < 1:
            raise InputError("at least one knot required")
        ts = np.array([t for t, _ in knots])
        vs = np.array([v for _, v in knots])
        if ts[0] != 0.0:
            raise InputError("first knot must be at t = 0")
        if np.any(np.diff(ts) <= 0.0):
            raise InputError("knot times must be strictly increasing")
        if np.any(vs <= 0.0) or np.any(vs > 1.0):
            raise InputError("knot values must lie in (0, 1]")
        self.ts = ts
        self.vs = vs

    def value(self, t):
        if t < 0:
            raise InputError("t must be >= 0")
        if t >= self.ts[-1]:
            return float(self.vs[-1])
        return float(np.interp(t, self.ts, self.vs))

    def derivative(self, t):
        if t < 0:
            raise InputError("t must be >= 0")
        if t >= self.ts[-1]:
            return 0.0
        k = int(np.searchsorted(self.ts, t, side="right")) - 1
        return float(
            (self.vs[k + 1] - self.vs[k]) / (self.ts[k + 1] - self.ts[k])
        )


def param_eval(param, t):
    """(lam(t), lam'(t)); the derivative for Table is the piecewise slope."""
    return param.value(t), param.derivative(t)


# ---------------------------------------------------------------------------
# RK4 with Richardson refinement

@dataclass
class Trajectory:
    """Sampled continuous trajectory with a certified error estimate.

    err_bound holds, at every sample, the sup over checkpoints of the
    Richardson difference between the last two refinements (a conservative
    per-sample bound).  derivative[i] is the RHS evaluated exactly at
    (times[i], points[i]).
    """

    times: np.ndarray
    points: np.ndarray
    err_bound: np.ndarray
    derivative: np.ndarray
    norm_kind: str

    def at(self, t):
        """Dense evaluation by cubic Hermite interpolation between samples."""
        times = self.times
        if t < times[0] - 1e-12 or t > times[-1] + 1e-12:
            raise InputError(f"time {t} outside [{times[0]}, {times[-1]}]")
        t = min(max(t, times[0]), times[-1])
        k = int(np.searchsorted(times, t, side="right")) - 1
        if k >= times.size - 1:
            return self.points[-1].copy()
        h = times[k + 1] - times[k]
        s = (t - times[k]) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return (
            h00 * self.points[k]
            + h10 * h * self.derivative[k]
            + h01 * self.points[k + 1]
            + h11 * h * self.derivative[k + 1]
        )

    def deriv_at(self, t):
        """Hermite-interpolated derivative between samples."""
        times = self.times
        t = min(max(t, times[0]), times[-1])
        k = int(np.searchsorted(times, t, side="right")) - 1
        if k >= times.size - 1:
            return self.derivative[-1].copy()
        h = times[k + 1] - times[k]
        s = (t - times[k]) / h
        # derivative of the Hermite basis
        d00 = (6 * s * s - 6 * s) / h
        d10 = 3 * s * s - 4 * s + 1
        d01 = (6 * s - 6 * s * s) / h
        d11 = 3 * s * s - 2 * s
        return (
            d00 * self.points[k]
            + d10 * self.derivative[k]
            + d01 * self.points[k + 1]
            + d11 * self.derivative[k + 1]
        )


def _rk4_run(rhs, y0, T, n):
    """Fixed-step classical RK4; returns (times, points, derivatives)."""
    h = T / n
    d = y0.shape[0]
    times = np.linspace(0.0, T, n + 1)
    points = np.empty((n + 1, d))
    derivs = np.empty((n + 1, d))
    y = y0.copy()
    points[0] = y
    derivs[0] = rhs(0.0, y)
    for i in range(n):
        t = times[i]
        k1 = derivs[i]
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        points[i + 1] = y
        derivs[i + 1] = rhs(times[i + 1], y)
    return times, points, derivs


def _integrate(rhs, y0, T, tol, norm_kind, n0=None):
    """Step-halving RK4 until consecutive refinements differ by <= tol/2."""
    if T <= 0.0 or tol <= 0.0:
        raise InputError("T and tol must be positive")
    n = n0 or max(32, int(np.ceil(2.0 * T)))
    total = n
    prev = _rk4_run(rhs, y0, T, n)
    while True:
        n *= 2
        total += n
        if total > MAX_TOTAL_STEPS:
            raise ResourceError(
                f"step cap {MAX_TOTAL_STEPS} reached before tol {tol}"
            )
        cur = _rk4_run(rhs, y0, T, n)
        diff = max(
            norm(cur[1][2 * i] - prev[1][i], norm_kind)
            for i in range(prev[0].size)
        )
        if diff <= 0.5 * tol:
            times, points, derivs = cur
            err = np.full(times.size, diff)
            return Trajectory(times, points, err, derivs, norm_kind)
        prev = cur


def euler_power(op, t, m, x0):
    """U_t^m(x0) = (I - (t/m) A)^m (x0), Euler with m equal steps t/m."""
    if m < 1:
        raise InputError("m must be >= 1")
    lam = t / m
    if lam > 1.0 + 1e-12:
        raise InputError("t/m must be <= 1 for a nonexpansive step")
    lam = min(lam, 1.0)
    x = np.asarray(x0, dtype=float).copy()
    for _ in range(m):
        x = x - lam * apply_A(op, x)
    return x


def integrate_U(op, U0, T, tol=1e-8, expo_check=True, n0=None):
    """Solve U' = J(U) - U on [0, T] with certified tolerance tol.

    When expo_check is set the endpoint is cross-checked against the Euler
    power U_T^m, which must satisfy ||U_T^m - U(T)|| <= ||A(U0)|| T/sqrt(m).
    """
    U0 = np.asarray(U0, dtype=float)
    rhs = lambda t, x: -apply_A(op, x)
    traj = _integrate(rhs, U0, T, tol, op.norm_kind, n0)
    if expo_check:
        m = max(64, int(np.ceil(T)))
        bound = op.norm(apply_A(op, U0)) * T / np.sqrt(m)
        gap = op.norm(euler_power(op, T, m, U0) - traj.points[-1])
        if gap > bound + traj.err_bound[-1] + 1e-9:
            raise ResourceError(
                f"exponential-formula cross-check failed: {gap} > {bound}"
            )
    return traj


def integrate_u(op, param, u0, T, tol=1e-8, n0=None):
    """Solve u' = Phi(lam(t), u) - u on [0, T] with certified tolerance."""
    u0 = np.asarray(u0, dtype=float)
    rhs = lambda t, x: apply_Phi(op, param.value(t), x) - x
    return _integrate(rhs, u0, T, tol, op.norm_kind, n0)


# ---------------------------------------------------------------------------
# the damping factor L(t) and the slow-parametrization bound

def _adaptive_simpson(f, a, b, tol, depth=60):
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + \
        _simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)


def _require_c1(param):
    if not param.is_c1:
        raise InputError(
            f"{param.describe()} is not C1; this quantity needs lam'"
        )


def L_factor(param, t, quad_tol=1e-10):
    """L(t) = exp( int_0^t [|lam'|/lam - lam] ds ) by adaptive Simpson."""
    _require_c1(param)
    if t < 0:
        raise InputError("t must be >= 0")
    if t == 0.0:
        return 1.0

    def integrand(s):
        lam, dlam = param_eval(param, s)
        if lam <= 0.0 or not np.isfinite(lam):
            raise InputError("lambda reaches 0 on the interval")
        return abs(dlam) / lam - lam

    return float(np.exp(_adaptive_simpson(integrand, 0.0, t, quad_tol)))


def slow_param_bound(op, param, u0, t, tol=1e-8, grid=2048):
    """Right-hand side of the slow-parametrization tracking bound:

        L(t)/lam(t) * [ ||u'(0)|| + (C + C') int_0^t |lam'(s)|/L(s) ds ]

    with C the hypothesis-(H) constant of the operator and C' = ||J(0)||
    (a certified upper bound on sup ||v_lam||).  Cumulative integrals are
    computed by composite trapezoid with grid doubling until the bound
    changes by less than tol (relative to max(1, bound)).
    """
    _require_c1(param)
    if t < 0:
        raise InputError("t must be >= 0")
    u0 = np.asarray(u0, dtype=float)
    lam0 = param.value(0.0)
    du0 = op.norm(apply_Phi(op, lam0, u0) - u0)
    C = h_constant(op)
    Cp = op.norm(apply_J(op, np.zeros(op.dim)))
    if t == 0.0:
        return du0 / lam0

    def eval_bound(n):
        s = np.linspace(0.0, t, n + 1)
        lam = np.array([param.value(si) for si in s])
        dlam = np.array([param.derivative(si) for si in s])
        g = np.abs(dlam) / lam - lam
        # G(s) = int_0^s g, cumulative trapezoid
        G = np.concatenate(([0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(s))))
        outer = np.abs(dlam) * np.exp(-G)
        integral = float(np.sum(0.5 * (outer[1:] + outer[:-1]) * np.diff(s)))
        return float(np.exp(G[-1]) / lam[-1] * (du0 + (C + Cp) * integral))

    n = grid
    prev = eval_bound(n)
    for _ in range(12):
        n *= 2
        cur = eval_bound(n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise ResourceError("slow_param_bound quadrature did not converge")


def stationarity_gap_rhs(op, param, traj, t):
    """||u'(t)|| / lam(t), the right side of the pointwise tracking bound."""
    return norm(traj.deriv_at(t), op.norm_kind) / param.value(t)


def v_lambda_at(op, param, t, tol=1e-10):
    """v_{lam(t)}, recomputed from scratch so each value is certified."""
    return solve_vlambda(op, param.value(t), tol=tol)
