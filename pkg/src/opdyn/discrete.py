"""Discrete dynamics: value iteration, discounted fixed points, Euler
schemes, the Phi-recursion and the implicit proximal resolvent.

Conventions:
    V_n  = J(V_{n-1}),  V_0 = 0,        v_n = V_n / n
    v_lam: unique fixed point of Phi(lam, .)
    Euler: x_n = x_{n-1} - lam_n A(x_{n-1}),  sigma_n = sum lam_i,
           tau_n = sum lam_i^2
    w_n  = Phi(lam_n, w_{n-1})
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import apply_A, apply_J, apply_Phi, as_vec
from .errors import InputError, ResourceError

#: iteration cap for the discounted fixed-point solver
VLAMBDA_MAX_ITER = 10**7


@dataclass
class StepSequence:
    """Steps lam_i in (0, 1] with running budgets sigma and tau.

    sigma[k] = lam_1 + ... + lam_k (sigma[0] = 0), tau likewise with squares.
    """

    steps: np.ndarray
    sigma: np.ndarray = field(init=False)
    tau: np.ndarray = field(init=False)

    def __post_init__(self):
        lam = np.asarray(self.steps, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise InputError("steps must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(lam)):
            raise InputError("non-finite step")
        if np.any(lam <= 0.0) or np.any(lam > 1.0):
            raise InputError("steps must lie in (0, 1]")
        self.steps = lam
        self.sigma = np.concatenate(([0.0], np.cumsum(lam)))
        self.tau = np.concatenate(([0.0], np.cumsum(lam**2)))

    def __len__(self):
        return self.steps.size

    @classmethod
    def constant(cls, lam, N):
        return cls(np.full(N, float(lam)))

    @classmethod
    def harmonic(cls, N):
        """lam_i = min(1, 1/i)."""
        i = np.arange(1, N + 1, dtype=float)
        return cls(np.minimum(1.0, 1.0 / i))

    @classmethod
    def inverse_sqrt(cls, N):
        """lam_i = min(1, i^{-1/2})."""
        i = np.arange(1, N + 1, dtype=float)
        return cls(np.minimum(1.0, i**-0.5))


@dataclass
class DiscreteOrbit:
    """Points x_0 .. x_N of one discrete recursion."""

    points: np.ndarray
    scheme: str
    origin: np.ndarray
    steps: StepSequence | None = None

    def __len__(self):
        return self.points.shape[0] - 1


def iterate_Vn(op, N):
    """Orbit V_0 = 0, V_n = J(V_{n-1}), plus normalized v_n = V_n / n.

    Returns (orbit, vn) where vn[k] = V_{k+1} / (k+1) for k = 0 .. N-1.
    """
    if N < 1:
        raise InputError("N must be >= 1")
    points = np.zeros((N + 1, op.dim))
    for k in range(1, N + 1):
        points[k] = apply_J(op, points[k - 1])
    vn = points[1:] / np.arange(1, N + 1, dtype=float)[:, None]
    orbit = DiscreteOrbit(points, "value_iteration", points[0].copy())
    return orbit, vn


@dataclass
class VLambdaResult:
    v: np.ndarray          # normalized discounted value v_lam
    V: np.ndarray          # unnormalized V_lam = v_lam / lam
    iterations: int
    certified_error: float


def solve_vlambda(op, lam, tol=1e-10, w0=None, full=False):
    """Fixed point of Phi(lam, .) with certified error <= tol.

    Iterates w <- Phi(lam, w) from 0; the contraction factor is (1 - lam),
    so the a-posteriori bound (1-lam)/lam * ||w_k - w_{k-1}|| certifies the
    distance to the fixed point.  Returns the vector, or the full result
    when full=True.
    """
    if not 0.0 < lam <= 1.0:
        raise InputError(f"lambda must lie in (0, 1], got {lam}")
    if tol <= 0.0:
        raise InputError("tol must be positive")
    w = np.zeros(op.dim) if w0 is None else as_vec(w0, op.dim)
    factor = (1.0 - lam) / lam
    err = np.inf
    for k in range(1, VLAMBDA_MAX_ITER + 1):
        w_next = apply_Phi(op, lam, w)
        err = factor * op.norm(w_next - w)
        w = w_next
        if err <= tol:
            break
    else:
        raise ResourceError(
            f"v_lambda iteration cap {VLAMBDA_MAX_ITER} hit at lambda={lam} "
            f"(certified error {err:.3g} > tol {tol:.3g})"
        )
    result = VLambdaResult(w, w / lam, k, err)
    return result if full else result.v


def euler_scheme(op, x0, steps):
    """Explicit Euler orbit x_n = (1 - lam_n) x_{n-1} + lam_n J(x_{n-1})."""
    if not isinstance(steps, StepSequence):
        steps = StepSequence(np.asarray(steps, dtype=float))
    x0 = as_vec(x0, op.dim)
    N = len(steps)
    points = np.empty((N + 1, op.dim))
    points[0] = x0
    for n in range(1, N + 1):
        lam = steps.steps[n - 1]
        points[n] = points[n - 1] - lam * apply_A(op, points[n - 1])
    return DiscreteOrbit(points, "euler", x0.copy(), steps)


def euler_interpolant(orbit, t):
    """Piecewise-linear interpolation of an Euler orbit in sigma-time."""
    if orbit.steps is None:
        raise InputError("orbit carries no step sequence")
    sigma = orbit.steps.sigma
    if t < -1e-12 or t > sigma[-1] + 1e-12:
        raise InputError(f"time {t} outside [0, {sigma[-1]}]")
    t = min(max(t, 0.0), sigma[-1])
    k = int(np.searchsorted(sigma, t, side="right")) - 1
    if k >= len(sigma) - 1:
        return orbit.points[-1].copy()
    frac = (t - sigma[k]) / (sigma[k + 1] - sigma[k])
    return (1.0 - frac) * orbit.points[k] + frac * orbit.points[k + 1]


def phi_recursion(op, lambda_seq, w0=None):
    """Orbit of w_n = Phi(lam_n, w_{n-1})."""
    lam = np.asarray(lambda_seq, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise InputError("lambda sequence must be a nonempty 1-d sequence")
    if np.any(lam <= 0.0) or np.any(lam > 1.0):
        raise InputError("lambda values must lie in (0, 1]")
    w0 = np.zeros(op.dim) if w0 is None else as_vec(w0, op.dim)
    points = np.empty((lam.size + 1, op.dim))
    points[0] = w0
    for n in range(1, lam.size + 1):
        points[n] = apply_Phi(op, lam[n - 1], points[n - 1])
    return DiscreteOrbit(points, "phi_recursion", w0.copy())


def resolvent(op, lam, y, tol=1e-12):
    """Solve x + lam A(x) = y, i.e. x = (y + lam J(x)) / (1 + lam).

    Fixed-point iteration with contraction factor lam/(1+lam); the
    a-posteriori bound lam * ||x_k - x_{k-1}|| certifies the error.
    """
    if lam <= 0.0:
        raise InputError("lambda must be positive")
    if tol <= 0.0:
        raise InputError("tol must be positive")
    y = as_vec(y, op.dim)
    x = y.copy()
    for _ in range(VLAMBDA_MAX_ITER):
        x_next = (y + lam * apply_J(op, x)) / (1.0 + lam)
        err = lam * op.norm(x_next - x)
        x = x_next
        if err <= tol:
            return x
    raise ResourceError("resolvent iteration cap hit")


def proximal_orbit(op, x0, steps):
    """Compose resolvent steps: x_n = (I + lam_n A)^{-1}(x_{n-1})."""
    if not isinstance(steps, StepSequence):
        steps = StepSequence(np.asarray(steps, dtype=float))
    x0 = as_vec(x0, op.dim)
    points = np.empty((len(steps) + 1, op.dim))
    points[0] = x0
    for n in range(1, len(steps) + 1):
        points[n] = resolvent(op, steps.steps[n - 1], points[n - 1])
    return DiscreteOrbit(points, "proximal", x0.copy(), steps)


def kobayashi_rhs(steps1, steps2, k, l, x0, xhat0, op, z=None):
    """Right-hand side of the two-scheme distance bound:

    ||x0 - z|| + ||xhat0 - z|| + ||A(z)|| sqrt((sigma_k - sigma_l)^2
                                               + tau_k + tau_l).

    z defaults to x0.
    """
    if k < 0 or k > len(steps1) or l < 0 or l > len(steps2):
        raise InputError("indices outside the step sequences")
    x0 = as_vec(x0, op.dim)
    xhat0 = as_vec(xhat0, op.dim)
    z = x0 if z is None else as_vec(z, op.dim)
    ds = steps1.sigma[k] - steps2.sigma[l]
    root = np.sqrt(ds * ds + steps1.tau[k] + steps2.tau[l])
    return (
        op.norm(x0 - z)
        + op.norm(xhat0 - z)
        + op.norm(apply_A(op, z)) * root
    )
