"""Vectors, norms and the nonexpansive-operator abstraction.

An operator instance holds a nonexpansive map J on R^d together with the
norm it is nonexpansive in.  Derived maps:

    A(x)         = x - J(x)
    Phi(lam, x)  = lam * J(((1 - lam) / lam) * x)        for lam in (0, 1]

Phi(lam, .) is a (1 - lam)-contraction whenever J is nonexpansive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

SUP = "sup"
EUCLIDEAN = "euclidean"

_NORM_KINDS = (SUP, EUCLIDEAN)

#: slack allowed on sampled nonexpansiveness / contraction ratios
RATIO_TOL = 1e-12
#: pairs closer than this are skipped when forming ratios (0/0 noise)
PAIR_MIN_DIST = 1e-9


def as_vec(x, dim=None):
    """Validate and return a finite 1-d float array."""
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise InputError(f"expected a vector, got array of shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError("vector has NaN or infinite entries")
    if dim is not None and v.shape[0] != dim:
        raise InputError(f"dimension mismatch: expected {dim}, got {v.shape[0]}")
    return v


def norm(x, kind=SUP):
    """Norm of a vector: max|x_i| for sup, sqrt(sum x_i^2) for euclidean."""
    v = as_vec(x)
    if kind == SUP:
        return float(np.max(np.abs(v))) if v.size else 0.0
    if kind == EUCLIDEAN:
        return float(np.linalg.norm(v))
    raise InputError(f"unknown norm kind {kind!r}")


def _check_norm_kind(kind):
    if kind not in _NORM_KINDS:
        raise InputError(f"unknown norm kind {kind!r}")


class Operator:
    """A nonexpansive map J on R^dim, in the declared norm."""

    dim: int
    norm_kind: str

    def J(self, x):
        raise NotImplementedError

    def norm(self, x):
        return norm(x, self.norm_kind)

    def describe(self):
        return type(self).__name__


class Translation(Operator):
    """J(x) = x + c, an isometry in every norm."""

    def __init__(self, c, norm_kind=SUP):
        _check_norm_kind(norm_kind)
        self.c = as_vec(c)
        self.dim = self.c.shape[0]
        self.norm_kind = norm_kind

    def J(self, x):
        return as_vec(x, self.dim) + self.c

    def describe(self):
        return f"Translation(c={self.c.tolist()})"


class LinearIsometry(Operator):
    """J(x) = Mx with M orthogonal (rotations being the standard demo)."""

    def __init__(self, matrix, norm_kind=EUCLIDEAN):
        _check_norm_kind(norm_kind)
        M = np.asarray(matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise InputError("isometry matrix must be square")
        if not np.all(np.isfinite(M)):
            raise InputError("isometry matrix has non-finite entries")
        if norm_kind == EUCLIDEAN:
            if not np.allclose(M @ M.T, np.eye(M.shape[0]), atol=1e-9):
                raise InputError("matrix is not orthogonal")
        else:
            # sup-norm isometries: signed permutation matrices
            if not np.allclose(np.sort(np.abs(M), axis=1)[:, :-1], 0.0, atol=1e-12) or \
               not np.allclose(np.max(np.abs(M), axis=1), 1.0, atol=1e-12):
                raise InputError("matrix is not a sup-norm isometry")
        self.matrix = M
        self.dim = M.shape[0]
        self.norm_kind = norm_kind

    def J(self, x):
        return self.matrix @ as_vec(x, self.dim)

    def describe(self):
        return f"LinearIsometry(dim={self.dim})"


def rotation(theta, norm_kind=EUCLIDEAN):
    """Planar rotation by angle theta (radians)."""
    c, s = np.cos(theta), np.sin(theta)
    return LinearIsometry([[c, -s], [s, c]], norm_kind=norm_kind)


class AffineNonexpansive(Operator):
    """J(x) = Mx + b with ||M|| <= 1 in the declared norm.

    The norm bound is a constructor invariant: sup norm uses the max
    absolute row sum, euclidean the largest singular value.
    """

    def __init__(self, matrix, offset, norm_kind=SUP):
        _check_norm_kind(norm_kind)
        M = np.asarray(matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise InputError("matrix must be square")
        if not np.all(np.isfinite(M)):
            raise InputError("matrix has non-finite entries")
        b = as_vec(offset, M.shape[0])
        if norm_kind == SUP:
            op_norm = float(np.max(np.sum(np.abs(M), axis=1)))
        else:
            op_norm = float(np.linalg.norm(M, 2))
        if op_norm > 1.0 + RATIO_TOL:
            raise InputError(
                f"operator norm {op_norm:.6g} exceeds 1 in the {norm_kind} norm"
            )
        self.matrix = M
        self.offset = b
        self.dim = M.shape[0]
        self.norm_kind = norm_kind

    def J(self, x):
        return self.matrix @ as_vec(x, self.dim) + self.offset

    def describe(self):
        return f"AffineNonexpansive(dim={self.dim})"


def identity_operator(dim, norm_kind=SUP):
    """J = I, so A = 0; useful as a degenerate test case."""
    return AffineNonexpansive(np.eye(dim), np.zeros(dim), norm_kind=norm_kind)


def apply_J(op, x):
    return op.J(as_vec(x, op.dim))


def apply_A(op, x):
    """A = I - J."""
    x = as_vec(x, op.dim)
    return x - op.J(x)


def apply_Phi(op, lam, x):
    """Phi(lam, x) = lam * J(((1 - lam)/lam) * x); Phi(1, x) = J(0)."""
    if not 0.0 < lam <= 1.0:
        raise InputError(f"lambda must lie in (0, 1], got {lam}")
    x = as_vec(x, op.dim)
    if lam == 1.0:
        return op.J(np.zeros(op.dim))
    return lam * op.J(((1.0 - lam) / lam) * x)


def h_constant(op):
    """Constant C with ||Phi(lam,x) - Phi(mu,x)|| <= |lam-mu| (C + ||x||).

    Per variant: Translation ||c||, LinearIsometry 0, AffineNonexpansive
    ||b||, Shapley max|payoff|.
    """
    if isinstance(op, Translation):
        return op.norm(op.c)
    if isinstance(op, LinearIsometry):
        return 0.0
    if isinstance(op, AffineNonexpansive):
        return op.norm(op.offset)
    c = getattr(op, "h_constant", None)
    if c is not None:
        return float(c() if callable(c) else c)
    raise InputError(f"no hypothesis-(H) constant known for {op.describe()}")


@dataclass
class PropertyReport:
    """Result of a sampled structural check."""

    samples: int
    violations: int
    worst_ratio: float
    seed: int


def sample_ball(rng, dim, radius, norm_kind):
    """One point drawn uniformly from the ball of given radius."""
    if norm_kind == SUP:
        return rng.uniform(-radius, radius, size=dim)
    x = rng.standard_normal(dim)
    r = np.linalg.norm(x)
    if r == 0.0:
        return np.zeros(dim)
    return x / r * radius * rng.uniform() ** (1.0 / dim)


def check_nonexpansive(op, samples=200, radius=10.0, seed=0):
    """Sampled check of ||J(x)-J(y)|| <= ||x-y||.

    worst_ratio is the largest observed ratio; violations counts pairs
    exceeding 1 + RATIO_TOL.
    """
    if samples < 1:
        raise InputError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    violations = 0
    for _ in range(samples):
        x = sample_ball(rng, op.dim, radius, op.norm_kind)
        y = sample_ball(rng, op.dim, radius, op.norm_kind)
        d = op.norm(x - y)
        if d <= PAIR_MIN_DIST:
            continue
        ratio = op.norm(op.J(x) - op.J(y)) / d
        worst = max(worst, ratio)
        if ratio > 1.0 + RATIO_TOL:
            violations += 1
    return PropertyReport(samples, violations, worst, seed)


def check_accretive(op, lam, samples=200, radius=10.0, seed=0):
    """Sampled check of ||x-y + lam(A(x)-A(y))|| >= ||x-y|| for lam > 0.

    worst_ratio is the smallest observed ratio; violations counts pairs
    below 1 - RATIO_TOL.
    """
    if lam <= 0:
        raise InputError("lambda must be positive")
    if samples < 1:
        raise InputError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    worst = np.inf
    violations = 0
    for _ in range(samples):
        x = sample_ball(rng, op.dim, radius, op.norm_kind)
        y = sample_ball(rng, op.dim, radius, op.norm_kind)
        d = op.norm(x - y)
        if d <= PAIR_MIN_DIST:
            continue
        ratio = op.norm(x - y + lam * (apply_A(op, x) - apply_A(op, y))) / d
        worst = min(worst, ratio)
        if ratio < 1.0 - RATIO_TOL:
            violations += 1
    if not np.isfinite(worst):
        worst = 1.0
    return PropertyReport(samples, violations, worst, seed)
