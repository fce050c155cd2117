"""Finite zero-sum stochastic games and their one-stage value operator.

The one-stage operator maps a state-value vector f to

    J(f)(w) = val [ g(i, j, w) + sum_w' f(w') rho(w' | i, j, w) ]

where val is the minimax value of the auxiliary matrix game.  Matrix games
are solved exactly by a dense simplex on the classical shifted LP; an
independent grid/formula oracle is kept alongside for cross-checking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import SUP, Operator, as_vec
from .errors import InputError, SchemaError

#: transition rows must sum to 1 within this at ingest
ROW_SUM_TOL = 1e-9
#: primal-dual gap contract for the matrix-game solver
LP_GAP_TOL = 1e-9
#: LP slack: strategy entries in [-1e-12, 0) are clamped to zero
STRATEGY_CLAMP = 1e-12


@dataclass
class StochasticGame:
    """Finite zero-sum stochastic game.

    payoff[s] is an (m_s, n_s) matrix; transition[s] is (m_s, n_s, S) with
    row-stochastic last axis.
    """

    states: list
    actions: list
    payoff: list
    transition: list

    def __post_init__(self):
        if len(self.states) < 1:
            raise SchemaError("at least one state required", "states")
        S = len(self.states)
        for field in ("actions", "payoff", "transition"):
            if len(getattr(self, field)) != S:
                raise SchemaError(f"expected {S} entries", field)
        for s in range(S):
            m, n = self.actions[s]
            if m < 1 or n < 1:
                raise SchemaError("action counts must be positive", f"actions[{s}]")
            g = np.asarray(self.payoff[s], dtype=float)
            if g.shape != (m, n):
                raise SchemaError(
                    f"expected shape {(m, n)}, got {g.shape}", f"payoff[{s}]"
                )
            if not np.all(np.isfinite(g)):
                raise SchemaError("non-finite payoff entry", f"payoff[{s}]")
            rho = np.asarray(self.transition[s], dtype=float)
            if rho.shape != (m, n, S):
                raise SchemaError(
                    f"expected shape {(m, n, S)}, got {rho.shape}",
                    f"transition[{s}]",
                )
            if np.any(rho < 0.0) or np.any(rho > 1.0):
                raise SchemaError(
                    "probability outside [0, 1]", f"transition[{s}]"
                )
            sums = rho.sum(axis=-1)
            if np.any(np.abs(sums - 1.0) > ROW_SUM_TOL):
                worst = float(np.max(np.abs(sums - 1.0)))
                raise SchemaError(
                    f"row sums off by {worst:.3g}", f"transition[{s}]"
                )
            # renormalize to sum exactly 1 once within tolerance
            rho = rho / sums[..., None]
            self.payoff[s] = g
            self.transition[s] = rho

    @property
    def num_states(self):
        return len(self.states)

    def to_dict(self):
        return {
            "states": list(self.states),
            "actions": [[int(m), int(n)] for m, n in self.actions],
            "payoff": [g.tolist() for g in self.payoff],
            "transition": [rho.tolist() for rho in self.transition],
        }


def load_game(source):
    """Parse a game document (JSON text, dict, or path to a file)."""
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            try:
                with open(text, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise SchemaError(f"cannot read game file: {exc}", str(source))
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}", "document")
    if not isinstance(doc, dict):
        raise SchemaError("top-level value must be an object", "document")
    for key in ("states", "actions", "payoff", "transition"):
        if key not in doc:
            raise SchemaError("missing field", key)
    try:
        return StochasticGame(
            states=list(doc["states"]),
            actions=[tuple(a) for a in doc["actions"]],
            payoff=[np.asarray(g, dtype=float) for g in doc["payoff"]],
            transition=[np.asarray(r, dtype=float) for r in doc["transition"]],
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc), "document")


@dataclass
class MatrixGameSolution:
    value: float
    row_strategy: np.ndarray
    col_strategy: np.ndarray


def _clamp_simplex(p):
    """Normalize an LP strategy vector, tolerating tiny negative slack."""
    if min(p) < -STRATEGY_CLAMP:
        raise InputError("strategy entry below clamp tolerance")
    p = [x if x > 0.0 else 0.0 for x in p]
    total = sum(p)
    if total <= 0.0:
        raise InputError("strategy sums to zero")
    return [x / total for x in p]


def matrix_game_value(M):
    """Minimax value and optimal mixed strategies of the matrix game M.

    Solved by simplex (Bland's rule) on the shifted LP: with A = M + k > 0,
    maximize 1'z subject to A z <= 1, z >= 0; then value = 1/(1'z) - k, the
    column strategy is q = z / (1'z), and the dual variables under the slack
    columns give the row strategy.

    The tableau is kept in plain Python lists: the matrices are tiny and the
    solver sits in the hot loop of every Shapley-operator evaluation, where
    per-call array overhead dominates.
    """
    arr = np.asarray(M, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise InputError("matrix must be 2-d and nonempty")
    if not np.all(np.isfinite(arr)):
        raise InputError("matrix has non-finite entries")
    m, n = arr.shape
    rows = arr.tolist()
    if m == 1 and n == 1:
        one = np.array([1.0])
        return MatrixGameSolution(rows[0][0], one, one.copy())

    shift = 1.0 - min(min(r) for r in rows)
    # tableau: [A | I | 1] over the objective row [-1 | 0 | 0]
    width = n + m + 1
    T = [[0.0] * width for _ in range(m + 1)]
    for i in range(m):
        Ti = T[i]
        ri = rows[i]
        for j in range(n):
            Ti[j] = ri[j] + shift
        Ti[n + i] = 1.0
        Ti[-1] = 1.0
    obj = T[m]
    for j in range(n):
        obj[j] = -1.0
    basis = list(range(n, n + m))
    for _ in range(200 * (m + n)):
        # Bland's rule: first improving column, smallest basis index on ties
        j = -1
        for jj in range(width - 1):
            if obj[jj] < -1e-12:
                j = jj
                break
        if j < 0:
            break
        i = -1
        best = 0.0
        for ii in range(m):
            a = T[ii][j]
            if a > 1e-12:
                r = T[ii][-1] / a
                if i < 0 or r < best - 1e-15 or (
                    r <= best + 1e-15 and basis[ii] < basis[i]
                ):
                    best, i = r, ii
        if i < 0:
            raise InputError("unbounded matrix-game LP (internal)")
        Ti = T[i]
        piv = Ti[j]
        for jj in range(width):
            Ti[jj] /= piv
        for ii in range(m + 1):
            if ii == i:
                continue
            Tii = T[ii]
            f = Tii[j]
            if f != 0.0:
                for jj in range(width):
                    Tii[jj] -= f * Ti[jj]
        basis[i] = j
    else:
        raise InputError("simplex failed to converge (internal)")

    total = obj[-1]
    value = 1.0 / total - shift
    z = [0.0] * n
    for i, b in enumerate(basis):
        if b < n:
            z[b] = T[i][-1]
    q = _clamp_simplex([x / total for x in z])
    p = _clamp_simplex([obj[n + k] / total for k in range(m)])

    # primal-dual gap contract
    maximin = min(
        sum(p[i] * rows[i][j] for i in range(m)) for j in range(n)
    )
    minimax = max(
        sum(rows[i][j] * q[j] for j in range(n)) for i in range(m)
    )
    if minimax - maximin > LP_GAP_TOL:
        raise InputError(
            f"matrix-game solver gap {minimax - maximin:.3g} exceeds {LP_GAP_TOL}"
        )
    return MatrixGameSolution(value, np.array(p), np.array(q))


def _simplex_grid(dim, step):
    """All probability vectors of length dim with entries multiple of step."""
    k = int(round(1.0 / step))
    if dim == 1:
        yield np.array([1.0])
        return
    if dim == 2:
        for i in range(k + 1):
            yield np.array([i, k - i]) / k
        return
    if dim == 3:
        for i in range(k + 1):
            for j in range(k + 1 - i):
                yield np.array([i, j, k - i - j]) / k
        return
    raise InputError("grid oracle supports up to 3 actions")


def _support_pairs(m, n):
    """All equal-size index subsets (rows, cols), smallest first."""
    from itertools import combinations

    for k in range(1, min(m, n) + 1):
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                yield rows, cols


def matrix_game_value_oracle(M, step=1.0 / 200):
    """Independent brute-force value of a small matrix game.

    Vertex (kernel) enumeration: every matrix game has a square submatrix on
    which both players mix with equalizing strategies; each candidate kernel
    is solved by a dense linear system and kept only if the extended
    strategies are nonnegative and guarantee the value against every pure
    reply.  Pure saddles are the 1x1 kernels.  A strategy grid of the given
    step supplies a bracketing fallback (midpoint, accurate to
    O(step * payoff range)) in case enumeration is defeated by degeneracy.
    """
    M = np.asarray(M, dtype=float)
    m, n = M.shape
    tol = 1e-9 * max(1.0, float(np.max(np.abs(M))))
    for rows, cols in _support_pairs(m, n):
        k = len(rows)
        B = M[np.ix_(rows, cols)]
        # [B' -1; 1' 0] [p; v] = [0; 1] gives p'B = v 1', sum p = 1;
        # the transposed system gives q.
        lhs = np.zeros((k + 1, k + 1))
        lhs[:k, :k] = B.T
        lhs[:k, k] = -1.0
        lhs[k, :k] = 1.0
        rhs = np.zeros(k + 1)
        rhs[k] = 1.0
        try:
            sol_p = np.linalg.solve(lhs, rhs)
            lhs_q = lhs.copy()
            lhs_q[:k, :k] = B
            sol_q = np.linalg.solve(lhs_q, rhs)
        except np.linalg.LinAlgError:
            continue
        p_sub, v = sol_p[:k], float(sol_p[k])
        q_sub, vq = sol_q[:k], float(sol_q[k])
        if abs(v - vq) > tol:
            continue
        if np.any(p_sub < -tol) or np.any(q_sub < -tol):
            continue
        p = np.zeros(m)
        p[list(rows)] = np.maximum(p_sub, 0.0)
        q = np.zeros(n)
        q[list(cols)] = np.maximum(q_sub, 0.0)
        if float(np.min(p @ M)) >= v - tol and float(np.max(M @ q)) <= v + tol:
            return v
    lower = max(float(np.min(p @ M)) for p in _simplex_grid(m, step))
    upper = min(float(np.max(M @ q)) for q in _simplex_grid(n, step))
    return 0.5 * (lower + upper)


def shapley_apply(game, f):
    """One application of the game's value operator to a state-value vector."""
    f = as_vec(f, game.num_states)
    out = np.empty(game.num_states)
    for s in range(game.num_states):
        B = game.payoff[s] + game.transition[s] @ f
        out[s] = matrix_game_value(B).value
    return out


def hypothesis_H_constant(game):
    """Largest absolute one-stage payoff, the Lipschitz constant in (H)."""
    return max(float(np.max(np.abs(g))) for g in game.payoff)


def random_game(num_states, m, n, payoff_range=(-1.0, 1.0), seed=0):
    """Seeded random game: uniform payoffs, normalized-uniform transitions."""
    if num_states < 1 or m < 1 or n < 1:
        raise InputError("sizes must be positive")
    lo, hi = payoff_range
    rng = np.random.default_rng(seed)
    payoff = [rng.uniform(lo, hi, size=(m, n)) for _ in range(num_states)]
    transition = []
    for _ in range(num_states):
        raw = rng.uniform(size=(m, n, num_states)) + 1e-6
        transition.append(raw / raw.sum(axis=-1, keepdims=True))
    return StochasticGame(
        states=[f"s{i}" for i in range(num_states)],
        actions=[(m, n)] * num_states,
        payoff=payoff,
        transition=transition,
    )


def matching_pennies():
    """One-state 2x2 game with payoff [[1,-1],[-1,1]] and self loops."""
    return StochasticGame(
        states=["s0"],
        actions=[(2, 2)],
        payoff=[np.array([[1.0, -1.0], [-1.0, 1.0]])],
        transition=[np.ones((2, 2, 1))],
    )


class ShapleyOperator(Operator):
    """The game's value operator as a nonexpansive map in the sup norm."""

    def __init__(self, game):
        self.game = game
        self.dim = game.num_states
        self.norm_kind = SUP

    def J(self, x):
        return shapley_apply(self.game, x)

    def h_constant(self):
        return hypothesis_H_constant(self.game)

    def describe(self):
        return f"Shapley({self.dim} states)"
