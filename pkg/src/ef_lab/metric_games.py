"""Approximate comparison games on matrix algebras and permutation groups.

Positions are judged by how far two tuples of matrices are from "looking the
same": the payoff scans norms, products, scalar combinations and adjoints,
and reports the worst discrepancy.  The scalar clause is maximized over a
polar grid of the unit disk whose mesh is part of the report, so grid
coarseness is always explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrices import (
    ComplexMatrix,
    Permutation,
    adjoint,
    hs_norm,
    identity,
    matmul,
    op_norm,
    permutation_matrix,
    standard_partial_isometry,
)

__all__ = [
    "ContinuousGameConfig",
    "PermGameConfig",
    "PayoffReport",
    "PsiResult",
    "IllegalPositionError",
    "payoff_violation",
    "evenodd_challenger_moves",
    "pad_embed",
    "pad_truncate",
    "padding_duplicator_strategy",
    "evaluate_psi",
    "hamming_distance",
    "perm_payoff_violation",
    "sample_op_ball",
    "ContinuousGameState",
    "ContinuousStrategy",
    "random_matrix_strategy",
    "evenodd_strategy",
    "play_continuous",
    "PermGameState",
    "play_permutation",
]


class IllegalPositionError(ValueError):
    """A played matrix falls outside the operator-norm unit ball."""


@dataclass(frozen=True)
class ContinuousGameConfig:
    dims: tuple  # (dimension of side 1, dimension of side 2)
    n: int
    epsilon: float
    norm: str = "HS"  # "HS" or "OP"
    delta: float = 0.05  # scalar-grid mesh; the report carries slack 4*delta

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.norm not in ("HS", "OP"):
            raise ValueError(f"norm selector must be HS or OP, got {self.norm!r}")


@dataclass(frozen=True)
class PermGameConfig:
    degrees: tuple  # (degree of side 1, degree of side 2)
    n: int
    epsilon: float
    variant: str = "N2"  # "N2": Hamming payoff, "N3": HS payoff on permutation matrices

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.variant not in ("N2", "N3"):
            raise ValueError(f"variant must be N2 or N3, got {self.variant!r}")


@dataclass(frozen=True)
class PayoffReport:
    max_violation: float
    witness: tuple  # (clause kind, i, j, k, y, z); unused slots are None
    grid_slack: float
    verdict: str  # "duplicator-win" | "inconclusive" | "challenger-win"

    def duplicator_holds(self, epsilon):
        """Referee rule: the duplicator keeps the game iff the measured
        violation stays within epsilon.  (The grid can only underestimate the
        true maximum, so `verdict` carries the certainty information.)"""
        return self.max_violation <= epsilon


def _spectral_norms(stack):
    """Largest singular values of a (..., m, m) stack (dense SVD kernel)."""
    return np.linalg.svd(stack, compute_uv=False)[..., 0]


def _disk_grid(delta):
    """Points covering the closed unit disk with covering radius <= delta.

    Angle counts are forced even so the real axis (y = 1 and y = -1) is
    always on the grid exactly.
    """
    pts = [0.0 + 0.0j]
    rings = [i * delta for i in range(1, math.ceil(1.0 / delta))] + [1.0]
    for r in rings:
        count = max(4, 2 * math.ceil(math.pi * r / delta))
        angles = 2 * math.pi * np.arange(count) / count
        pts.extend(r * np.exp(1j * angles))
    return np.asarray(pts, dtype=np.complex128)


def _norms_of(stack, norm):
    if norm == "HS":
        m = stack.shape[-1]
        return np.sqrt(np.sum(np.abs(stack) ** 2, axis=(-2, -1)) / m)
    return _spectral_norms(stack)


def payoff_violation(a, b, cfg):
    """Worst clause discrepancy between two equal-length matrix tuples.

    Clause families, each compared between the two sides under cfg.norm:
    single norms; products a_i a_j - a_k; scalar combinations
    y a_i + z a_j - a_k with |y|, |z| <= 1 on a delta-grid; adjoints
    a_i* - a_j.  The verdict uses the conservative thresholds
    epsilon -/+ 4*delta around the measured maximum.
    """
    if len(a) != len(b):
        raise ValueError("both sides must have played the same number of innings")
    for x in list(a) + list(b):
        if op_norm(x) > 1 + 1e-9:
            raise IllegalPositionError(f"matrix with operator norm {op_norm(x):.6f} > 1 was played")
    t = len(a)
    if t == 0:
        return PayoffReport(0.0, ("empty", None, None, None, None, None), 4 * cfg.delta, "duplicator-win")
    sa = np.stack([x.data for x in a])
    sb = np.stack([x.data for x in b])
    best = (-1.0, None)

    def consider(value, witness):
        nonlocal best
        if value > best[0]:
            best = (value, witness)

    # single norms
    na = _norms_of(sa, cfg.norm)
    nb = _norms_of(sb, cfg.norm)
    for i in range(t):
        consider(abs(float(na[i] - nb[i])), ("norm", i, None, None, None, None))

    # products
    prod_a = np.einsum("iuv,jvw->ijuw", sa, sa)
    prod_b = np.einsum("iuv,jvw->ijuw", sb, sb)
    diff_a = prod_a[:, :, None] - sa[None, None, :]
    diff_b = prod_b[:, :, None] - sb[None, None, :]
    va = _norms_of(diff_a, cfg.norm)
    vb = _norms_of(diff_b, cfg.norm)
    gaps = np.abs(va - vb)
    idx = np.unravel_index(int(np.argmax(gaps)), gaps.shape)
    consider(float(gaps[idx]), ("product",) + tuple(int(x) for x in idx) + (None, None))

    # adjoints
    adj_a = np.conj(np.transpose(sa, (0, 2, 1)))[:, None] - sa[None, :]
    adj_b = np.conj(np.transpose(sb, (0, 2, 1)))[:, None] - sb[None, :]
    va = _norms_of(adj_a, cfg.norm)
    vb = _norms_of(adj_b, cfg.norm)
    gaps = np.abs(va - vb)
    idx = np.unravel_index(int(np.argmax(gaps)), gaps.shape)
    consider(float(gaps[idx]), ("adjoint", int(idx[0]), int(idx[1]), None, None, None))

    # scalar combinations on the grid
    grid = _disk_grid(cfg.delta)
    value, witness = _scalar_clause_max(sa, sb, grid, cfg.norm)
    consider(value, witness)

    max_violation, witness = best
    slack = 4 * cfg.delta
    if max_violation <= cfg.epsilon - slack:
        verdict = "duplicator-win"
    elif max_violation > cfg.epsilon + slack:
        verdict = "challenger-win"
    else:
        verdict = "inconclusive"
    return PayoffReport(max_violation, witness, slack, verdict)


def _scalar_clause_max(sa, sb, grid, norm):
    t, m1 = sa.shape[0], sa.shape[1]
    m2 = sb.shape[1]
    y = grid[:, None]
    z = grid[None, :]
    best_val, best_wit = -1.0, None
    if norm == "HS":
        ga = np.einsum("iuv,juv->ij", np.conj(sa), sa) / m1
        gb = np.einsum("iuv,juv->ij", np.conj(sb), sb) / m2
        ay2 = np.abs(y) ** 2
        az2 = np.abs(z) ** 2
        cyz = np.conj(y) * z
        for i in range(t):
            for j in range(t):
                for k in range(t):
                    qa = (
                        ay2 * ga[i, i].real
                        + az2 * ga[j, j].real
                        + ga[k, k].real
                        + 2 * np.real(cyz * ga[i, j])
                        - 2 * np.real(np.conj(y) * ga[i, k])
                        - 2 * np.real(np.conj(z) * ga[j, k])
                    )
                    qb = (
                        ay2 * gb[i, i].real
                        + az2 * gb[j, j].real
                        + gb[k, k].real
                        + 2 * np.real(cyz * gb[i, j])
                        - 2 * np.real(np.conj(y) * gb[i, k])
                        - 2 * np.real(np.conj(z) * gb[j, k])
                    )
                    vals = np.abs(np.sqrt(np.maximum(qa, 0.0)) - np.sqrt(np.maximum(qb, 0.0)))
                    p = np.unravel_index(int(np.argmax(vals)), vals.shape)
                    if vals[p] > best_val:
                        best_val = float(vals[p])
                        best_wit = ("scalar", i, j, k, complex(grid[p[0]]), complex(grid[p[1]]))
        return best_val, best_wit
    # operator norm: evaluate the combination matrices in grid chunks
    pairs_y, pairs_z = np.meshgrid(grid, grid, indexing="ij")
    flat_y = pairs_y.ravel()
    flat_z = pairs_z.ravel()
    chunk = max(1, 200_000 // (m1 * m1 + m2 * m2))
    for i in range(t):
        for j in range(t):
            for k in range(t):
                for lo in range(0, flat_y.size, chunk):
                    ys = flat_y[lo : lo + chunk, None, None]
                    zs = flat_z[lo : lo + chunk, None, None]
                    ca = ys * sa[i] + zs * sa[j] - sa[k]
                    cb = ys * sb[i] + zs * sb[j] - sb[k]
                    vals = np.abs(_spectral_norms(ca) - _spectral_norms(cb))
                    p = int(np.argmax(vals))
                    if vals[p] > best_val:
                        best_val = float(vals[p])
                        best_wit = (
                            "scalar",
                            i,
                            j,
                            k,
                            complex(flat_y[lo + p]),
                            complex(flat_z[lo + p]),
                        )
    return best_val, best_wit


def evaluate_witness(a, b, cfg, witness):
    """Recompute a reported witness clause; used to confirm reports."""
    kind, i, j, k, y, z = witness
    norm = (lambda x: hs_norm(x)) if cfg.norm == "HS" else (lambda x: op_norm(x))
    if kind == "empty":
        return 0.0
    if kind == "norm":
        return abs(norm(a[i]) - norm(b[i]))
    if kind == "product":
        return abs(norm(matmul(a[i], a[j]) - a[k]) - norm(matmul(b[i], b[j]) - b[k]))
    if kind == "adjoint":
        return abs(norm(adjoint(a[i]) - a[j]) - norm(adjoint(b[i]) - b[j]))
    if kind == "scalar":
        ca = ComplexMatrix(y * a[i].data + z * a[j].data - a[k].data)
        cb = ComplexMatrix(y * b[i].data + z * b[j].data - b[k].data)
        return abs(norm(ca) - norm(cb))
    raise ValueError(f"unknown witness kind {kind!r}")


# ---------------------------------------------------------------------------
# Scripted continuous play
# ---------------------------------------------------------------------------


def evenodd_challenger_moves(m):
    """Six-move script from the block shift: v, v*, v*v, vv*, v*v+vv*, 1."""
    v = standard_partial_isometry(m)
    vs = adjoint(v)
    p = matmul(vs, v)
    q = matmul(v, vs)
    return [v, vs, p, q, p + q, identity(m)]


def pad_embed(a):
    """Add a zero final row and column (isometric inclusion into one more dimension)."""
    m = a.m
    out = np.zeros((m + 1, m + 1), dtype=np.complex128)
    out[:m, :m] = a.data
    return ComplexMatrix(out)


def pad_truncate(a):
    """Drop the final row and column."""
    if a.m < 2:
        raise ValueError("cannot truncate a 1x1 matrix")
    return ComplexMatrix(a.data[: a.m - 1, : a.m - 1])


def sample_op_ball(m, rng):
    """Full-support sample of the operator-norm unit ball: complex Gaussian
    entries scaled back by the operator norm when it exceeds 1."""
    g = (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) / math.sqrt(2)
    nrm = float(_spectral_norms(g))
    return ComplexMatrix(g / max(1.0, nrm))


@dataclass
class ContinuousGameState:
    cfg: ContinuousGameConfig
    moves1: list = field(default_factory=list)
    moves2: list = field(default_factory=list)
    pending: tuple | None = None  # (side, ComplexMatrix)

    @property
    def inning(self):
        return len(self.moves1)

    @property
    def to_move(self):
        if self.pending is not None:
            return "D"
        if len(self.moves1) < self.cfg.n:
            return "C"
        return None

    @property
    def is_over(self):
        return self.to_move is None


class ContinuousStrategy:
    name = "continuous-strategy"

    def choose(self, state):
        raise NotImplementedError


class _RandomMatrixStrategy(ContinuousStrategy):
    def __init__(self, seed):
        self.rng = np.random.default_rng(seed)
        self.name = "random"

    def choose(self, state):
        if state.pending is not None:
            side = 2 if state.pending[0] == 1 else 1
        else:
            side = 1 + int(self.rng.integers(2))
        dim = state.cfg.dims[side - 1]
        return side, sample_op_ball(dim, self.rng)


def random_matrix_strategy(seed=0):
    return _RandomMatrixStrategy(seed)


class _PaddingDuplicatorStrategy(ContinuousStrategy):
    """Answer across neighbouring dimensions by zero-padding or truncating."""

    def __init__(self, m):
        self.m = m
        self.name = "padding-duplicator"

    def choose(self, state):
        if state.pending is None:
            raise ValueError("padding duplicator only answers pending moves")
        side, x = state.pending
        lo = min(state.cfg.dims)
        if x.m == lo:
            return (2 if side == 1 else 1), pad_embed(x)
        return (2 if side == 1 else 1), pad_truncate(x)


def padding_duplicator_strategy(m):
    return _PaddingDuplicatorStrategy(m)


class _EvenOddStrategy(ContinuousStrategy):
    """Plays the six-move parity script on the even-dimension side."""

    def __init__(self):
        self.name = "evenodd-challenger"

    def choose(self, state):
        if state.pending is not None:
            raise ValueError("the parity script is a challenger strategy")
        dims = state.cfg.dims
        side = 1 if dims[0] % 2 == 0 else 2
        script = evenodd_challenger_moves(dims[side - 1])
        return side, script[state.inning % len(script)]


def evenodd_strategy():
    return _EvenOddStrategy()


def apply_continuous_move(state, side, matrix):
    expected_dim = state.cfg.dims[side - 1]
    if matrix.m != expected_dim:
        raise IllegalPositionError(f"side {side} plays in dimension {expected_dim}, got {matrix.m}")
    if op_norm(matrix) > 1 + 1e-9:
        raise IllegalPositionError("matrix outside the operator-norm unit ball")
    if state.pending is None:
        state.pending = (side, matrix)
        return state
    pside, pmat = state.pending
    if side == pside:
        raise IllegalPositionError("the reply must be on the other side")
    if pside == 1:
        state.moves1.append(pmat)
        state.moves2.append(matrix)
    else:
        state.moves2.append(pmat)
        state.moves1.append(matrix)
    state.pending = None
    return state


def play_continuous(cfg, strat_c, strat_d):
    """Referee a continuous game; returns (winner, PayoffReport, state)."""
    state = ContinuousGameState(cfg)
    while not state.is_over:
        strat = strat_c if state.to_move == "C" else strat_d
        side, matrix = strat.choose(state)
        apply_continuous_move(state, side, matrix)
    report = payoff_violation(state.moves1, state.moves2, cfg)
    winner = "D" if report.duplicator_holds(cfg.epsilon) else "C"
    return winner, report, state


# ---------------------------------------------------------------------------
# Psi: how far the unit ball is from containing a halving partial isometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PsiResult:
    value: float
    witness: ComplexMatrix
    m: int
    restarts: int
    seed: int
    steps: int
    warning: bool  # best-so-far returned with the step budget exhausted


def _psi_defects_batched(xs):
    """max of the two defect norms for a stack (..., m, m)."""
    m = xs.shape[-1]
    xh = np.conj(np.swapaxes(xs, -1, -2))
    p = xh @ xs
    q = xs @ xh
    d1 = _spectral_norms(p - p @ p)
    d2 = _spectral_norms(p + q - np.eye(m))
    return np.maximum(d1, d2)


def psi_defects(x):
    """The two defect norms (projection defect, complement defect) via op_norm."""
    p = matmul(adjoint(x), x)
    q = matmul(x, adjoint(x))
    d1 = op_norm(p - matmul(p, p))
    d2 = op_norm(p + q - identity(x.m))
    return d1, d2


def _project_ball(xs):
    u, s, vh = np.linalg.svd(xs)
    s = np.minimum(s, 1.0)
    return (u * s[..., None, :]) @ vh


def evaluate_psi(m, restarts=64, max_steps=400, seed=0, step0=0.1, grad_h=1e-7):
    """Best found value of the parity observable on the unit ball of m x m matrices.

    Even m: the block shift witnesses the exact value 0.  Odd m: multi-start
    projected descent (numerical gradient, step halving on non-improvement);
    the returned value is an upper bound on the true infimum.
    """
    if m < 1:
        raise ValueError("dimension must be at least 1")
    if m % 2 == 0:
        witness = standard_partial_isometry(m)
        d1, d2 = psi_defects(witness)
        return PsiResult(max(d1, d2), witness, m, 0, seed, 0, False)
    rng = np.random.default_rng(seed)
    xs = np.stack([sample_op_ball(m, rng).data for _ in range(restarts)])
    steps_vec = np.full(restarts, step0)
    f = _psi_defects_batched(xs)
    n_params = 2 * m * m
    basis = np.zeros((n_params, m, m), dtype=np.complex128)
    for p in range(m * m):
        basis[p].flat[p] = 1.0
        basis[m * m + p].flat[p] = 1j
    steps_done = 0
    for step_idx in range(max_steps):
        steps_done = step_idx + 1
        pert = xs[:, None] + grad_h * basis[None, :]
        f_pert = _psi_defects_batched(pert.reshape(-1, m, m)).reshape(restarts, n_params)
        grad = (f_pert - f[:, None]) / grad_h
        gmat = grad[:, : m * m].reshape(restarts, m, m) + 1j * grad[:, m * m :].reshape(restarts, m, m)
        trial = _project_ball(xs - steps_vec[:, None, None] * gmat)
        f_trial = _psi_defects_batched(trial)
        improved = f_trial < f
        xs[improved] = trial[improved]
        f[improved] = f_trial[improved]
        steps_vec[~improved] *= 0.5
        if np.all(steps_vec < 1e-9):
            break
    warning = bool(np.any(steps_vec >= 1e-9))
    best = int(np.argmin(f))
    witness = ComplexMatrix(xs[best])
    d1, d2 = psi_defects(witness)
    return PsiResult(max(d1, d2), witness, m, restarts, seed, steps_done, warning)


# ---------------------------------------------------------------------------
# Permutation games
# ---------------------------------------------------------------------------


def hamming_distance(p, q):
    """Fraction of points where two same-degree permutations disagree."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    mismatches = sum(1 for j in range(p.degree) if p(j) != q(j))
    return mismatches / p.degree


def perm_payoff_violation(a, b, cfg):
    """Worst triple discrepancy for permutation tuples under N2 or N3."""
    if len(a) != len(b):
        raise ValueError("both sides must have played the same number of innings")
    t = len(a)
    if t == 0:
        return PayoffReport(0.0, ("empty", None, None, None, None, None), 0.0, "duplicator-win")
    best = (-1.0, None)
    if cfg.variant == "N3":
        mats_a = [permutation_matrix(p) for p in a]
        mats_b = [permutation_matrix(p) for p in b]
    for i in range(t):
        for j in range(t):
            for k in range(t):
                if cfg.variant == "N2":
                    da = hamming_distance(a[i].compose(a[j]), a[k])
                    db = hamming_distance(b[i].compose(b[j]), b[k])
                else:
                    da = hs_norm(matmul(mats_a[i], mats_a[j]) - mats_a[k])
                    db = hs_norm(matmul(mats_b[i], mats_b[j]) - mats_b[k])
                gap = abs(da - db)
                if gap > best[0]:
                    best = (gap, (cfg.variant, i, j, k, None, None))
    verdict = "duplicator-win" if best[0] < cfg.epsilon else "challenger-win"
    return PayoffReport(best[0], best[1], 0.0, verdict)


@dataclass
class PermGameState:
    cfg: PermGameConfig
    moves1: list = field(default_factory=list)
    moves2: list = field(default_factory=list)
    pending: tuple | None = None

    @property
    def inning(self):
        return len(self.moves1)

    @property
    def to_move(self):
        if self.pending is not None:
            return "D"
        if len(self.moves1) < self.cfg.n:
            return "C"
        return None

    @property
    def is_over(self):
        return self.to_move is None


def apply_permutation_move(state, side, perm):
    expected = state.cfg.degrees[side - 1]
    if perm.degree != expected:
        raise IllegalPositionError(f"side {side} plays permutations of degree {expected}")
    if state.pending is None:
        state.pending = (side, perm)
        return state
    pside, pperm = state.pending
    if side == pside:
        raise IllegalPositionError("the reply must be on the other side")
    if pside == 1:
        state.moves1.append(pperm)
        state.moves2.append(perm)
    else:
        state.moves2.append(pperm)
        state.moves1.append(perm)
    state.pending = None
    return state


def play_permutation(cfg, strat_c, strat_d):
    state = PermGameState(cfg)
    while not state.is_over:
        strat = strat_c if state.to_move == "C" else strat_d
        side, perm = strat.choose(state)
        apply_permutation_move(state, side, perm)
    report = perm_payoff_violation(state.moves1, state.moves2, cfg)
    winner = "D" if report.max_violation < cfg.epsilon else "C"
    return winner, report, state
