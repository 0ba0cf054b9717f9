"""Certified truncated inverses of normalized lopsided matrices.

For a normalized decomposition f = M - g (M = diag of positive integers at
the identity) the inverse is a geometric series in the transfer operator

* column side: f^-1 = sum_l M^-1 (g M^-1)^l, contracting in ||.||_{1,inf}
* row side:    f^-1 = sum_l (M^-1 g)^l M^-1, contracting in ||.||_{inf,1}

with exact rational ratio r = ||transfer|| < 1 on the corresponding side.
Truncation depth is chosen from the geometric tail bound
r^(L+1) ||M^-1|| / (1 - r); the result is then residual-checked a
posteriori via ||approx - f^-1|| <= (||M^-1||/(1-r)) ||f.approx - I|| and
the tighter bound is reported.

Monomials with |coefficient| below ``prune_threshold`` may be dropped from
the running term after each multiplication.  The exact dropped mass (in the
side norm) is recorded and amplified by 1/(1-r) — a pruned term feeds every
later term — so ``tail_bound`` stays a true upper bound on the side-norm
distance to f^-1.  Pruning is pointwise by threshold, hence independent of
any evaluation schedule.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, NotLopsidedError
from .lopsided import LopsidedDecomposition
from .ring import COLUMN, ROW, RingElement, RingMatrix, other_side

DEFAULT_MAX_SUPPORT = 2_000_000


@dataclass(frozen=True)
class TruncatedInverse:
    """A certified approximation: ||approx - f^-1|| <= tail_bound in the
    side norm (row -> ||.||_{inf,1}, column -> ||.||_{1,inf})."""

    approx: RingMatrix
    side: str
    tail_bound: Fraction
    depth: int
    pruned_mass: Fraction
    ratio: Fraction


def _require_normalized(d: LopsidedDecomposition):
    if not d.is_normalized:
        raise ValueError("a normalized decomposition is required; "
                         "apply normalize()/normalized_decomposition() first")


def _side_flag(d: LopsidedDecomposition, side: str) -> bool:
    if side == ROW:
        return d.row_lopsided
    if side == COLUMN:
        return d.column_lopsided
    raise ValueError(f"side must be 'row' or 'column', got {side!r}")


def contraction_ratio(d: LopsidedDecomposition, side: str) -> Fraction:
    """Exact side norm of the transfer operator; always < 1 for that side."""
    _require_normalized(d)
    if not _side_flag(d, side):
        raise NotLopsidedError(f"matrix is not {side} lopsided")
    sums = d.row_sums() if side == ROW else d.column_sums()
    return max(Fraction(s, m) for s, m in zip(sums, d.m_abs))


def truncated_inverse(d: LopsidedDecomposition, target_eps, side: str,
                      prune_threshold=None,
                      max_support: int = DEFAULT_MAX_SUPPORT) -> TruncatedInverse:
    """Truncate the side-appropriate geometric series to accuracy target_eps.

    ``prune_threshold`` defaults to target_eps * (1 - r) / (16 n); pass 0 to
    disable pruning.  Raises BudgetExceededError when the accumulated pruned
    mass alone makes the target unreachable, or when the running support
    exceeds ``max_support`` entries.
    """
    _require_normalized(d)
    target_eps = Fraction(target_eps)
    if target_eps <= 0:
        raise ValueError("target_eps must be positive")
    r = contraction_ratio(d, side)
    n = d.n
    spec = d.spec
    if prune_threshold is None:
        prune_threshold = target_eps * (1 - r) / (16 * n)
    else:
        prune_threshold = Fraction(prune_threshold)

    m_inv_norm = Fraction(1, min(d.m_abs))
    m_inv = RingMatrix.diagonal([
        RingElement.constant(spec, Fraction(1, mk)) for mk in d.m_abs])
    transfer = (d.g * m_inv) if side == COLUMN else (m_inv * d.g)

    term = m_inv  # term_l = M^-1 (gM^-1)^l, resp. (M^-1 g)^l M^-1
    total = m_inv
    depth = 0
    dropped = Fraction(0)

    def geometric(level: int) -> Fraction:
        return m_inv_norm * r ** (level + 1) / (1 - r)

    while True:
        prune_contrib = dropped / (1 - r)
        bound = geometric(depth) + prune_contrib
        if bound <= target_eps:
            break
        if prune_contrib > target_eps:
            raise BudgetExceededError(
                "accumulated pruned mass exceeds the accuracy target; "
                "lower prune_threshold or raise target_eps",
                reason="pruned-mass", depth=depth, achieved_bound=bound,
                pruned_mass=prune_contrib, support=total.support_size())
        term = (term * transfer) if side == COLUMN else (transfer * term)
        if prune_threshold > 0:
            term, d_mass = _prune(term, prune_threshold, side)
            dropped += d_mass
        depth += 1
        total = total + term
        size = total.support_size() + term.support_size()
        if size > max_support:
            raise BudgetExceededError(
                "running support exceeds max_support before the tail bound "
                "meets the accuracy target",
                reason="support-cap", depth=depth,
                achieved_bound=geometric(depth) + dropped / (1 - r),
                pruned_mass=dropped / (1 - r), support=size)

    a_priori = geometric(depth) + dropped / (1 - r)
    res = residual_of(d.f, total, side)
    a_posteriori = (m_inv_norm / (1 - r)) * res
    return TruncatedInverse(
        approx=total, side=side, tail_bound=min(a_priori, a_posteriori),
        depth=depth, pruned_mass=dropped / (1 - r), ratio=r)


def _prune(mat: RingMatrix, threshold: Fraction, side: str):
    """Drop entries with |coefficient| < threshold; return (matrix, side norm
    of the dropped part)."""
    kept_rows = []
    dropped_rows = []
    changed = False
    for row in mat.rows:
        kept_row = []
        dropped_row = []
        for el in row:
            small = {s: c for s, c in el.coeffs.items() if abs(c) < threshold}
            if small:
                changed = True
                kept_row.append(RingElement._raw(
                    el.spec, {s: c for s, c in el.coeffs.items() if s not in small}))
                dropped_row.append(RingElement._raw(el.spec, small))
            else:
                kept_row.append(el)
                dropped_row.append(RingElement.zero(el.spec))
        kept_rows.append(kept_row)
        dropped_rows.append(dropped_row)
    if not changed:
        return mat, Fraction(0)
    return (RingMatrix(mat.spec, kept_rows),
            RingMatrix(mat.spec, dropped_rows).norm(side))


def residual_of(f: RingMatrix, approx: RingMatrix, side: str) -> Fraction:
    """Exact side norm of f * approx - I."""
    return (f * approx - RingMatrix.identity(f.spec, f.n)).norm(side)


def residual(f: RingMatrix, t: TruncatedInverse) -> Fraction:
    """Exact side norm of f * approx - I; certified <= ||f|| * tail_bound."""
    return residual_of(f, t.approx, t.side)


def adjoint_inverse(t: TruncatedInverse) -> TruncatedInverse:
    """Certificate for (f*)^-1 = (f^-1)*: star the approximation, swap the
    side (the two norms exchange under the involution), keep the bound."""
    return TruncatedInverse(
        approx=t.approx.star(), side=other_side(t.side),
        tail_bound=t.tail_bound, depth=t.depth,
        pruned_mass=t.pruned_mass, ratio=t.ratio)
