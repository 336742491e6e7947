"""Discrete Schwarz symmetrization of grid functions.

The rearrangement sorts |u| in decreasing order and deals the values onto
the cells of a discrete ball in order of distance from its center (ties by
row, then column). The multiset of |values| is preserved exactly, so every
L^p norm is preserved; the five-point energy is only approximately
non-increasing, hence the slack in the Polya-Szego check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closed_form import theorem_envelope
from .grid import (DomainMask, GridFunction, ball_order, dirichlet_energy,
                   make_discrete_ball, place_side_by_side, quotient_Q, sign_split)

__all__ = [
    "SymmetrizedPair",
    "PolyaSzegoReport",
    "ChainReport",
    "schwarz_rearrange",
    "polya_szego_check",
    "symmetrize_and_bound",
    "lp_norm",
    "PS_SLACK",
]

PS_SLACK = 5e-2


@dataclass(frozen=True)
class SymmetrizedPair:
    original: GridFunction
    symmetrized: GridFunction
    # cell_permutation[k] = index in the original of the value now at target cell k
    cell_permutation: np.ndarray


def schwarz_rearrange(u: GridFunction) -> SymmetrizedPair:
    count = u.mask.n_active
    if count == 0:
        raise ValueError("cannot rearrange on an empty mask")
    target = make_discrete_ball(count, u.mask.h, id=f"{u.mask.id}#")
    N = target.height // 2
    order = ball_order(N)[:count]
    a = np.abs(u.values)
    src = np.argsort(-a, kind="stable")
    grid = np.zeros(target.active.shape)
    grid.flat[order] = a[src]
    perm = np.empty(count, dtype=np.int64)
    perm[target.cell_index.flat[order]] = src
    return SymmetrizedPair(u, GridFunction.from_array(target, grid), perm)


def lp_norm(u: GridFunction, p: float) -> float:
    a = np.abs(u.values)
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    return float((u.mask.h ** 2 * np.sum(a ** p)) ** (1.0 / p))


@dataclass(frozen=True)
class PolyaSzegoReport:
    energy_before: float
    energy_after: float
    ratio: float
    violated: bool


def polya_szego_check(u: GridFunction, slack: float = PS_SLACK) -> PolyaSzegoReport:
    """Energies of |u| and of its rearrangement; flags a ratio above 1 + slack."""
    v = u.abs()
    before = dirichlet_energy(v)
    after = dirichlet_energy(schwarz_rearrange(v).symmetrized)
    ratio = after / before
    return PolyaSzegoReport(before, after, ratio, bool(ratio > 1.0 + slack))


@dataclass(frozen=True)
class ChainReport:
    alpha: float
    q_original: float
    q_rearranged: float
    envelope: float
    candidate: GridFunction
    rearrangement_ok: bool
    envelope_ok: bool

    @property
    def holds(self) -> bool:
        return self.rearrangement_ok and self.envelope_ok


def symmetrize_and_bound(u: GridFunction, alpha: float, slack: float = PS_SLACK,
                         n: int = 2) -> ChainReport:
    """Replace ``u`` by its symmetrized competitor and compare quotients.

    For alpha <= 0 the competitor is the rearrangement of |u| on one ball.
    For alpha > 0 the positive and negative parts are rearranged separately,
    each on a ball with as many cells as its support, and recombined as
    v1 - v2 on two disjoint balls. The report checks
    Q(competitor) <= Q(u) (1 + slack) and Q(u) >= envelope (1 - slack),
    where the envelope is the closed-form lower bound at |mask|.
    """
    q0 = quotient_Q(u, alpha)
    env = theorem_envelope(n, u.mask.measure, alpha).value
    plus, minus, om_p, om_m = sign_split(u)
    if alpha <= 0 or om_m.n_active == 0 or om_p.n_active == 0:
        cand = schwarz_rearrange(u).symmetrized
    else:
        s1 = schwarz_rearrange(plus.restrict(om_p)).symmetrized
        s2 = schwarz_rearrange(minus.restrict(om_m)).symmetrized
        occ, vals = place_side_by_side([s1.mask.active, s2.mask.active],
                                       values=[s1.to_array(), -s2.to_array()])
        two = DomainMask(occ, u.mask.h, id=f"{u.mask.id}#2")
        cand = GridFunction.from_array(two, vals)
    q1 = quotient_Q(cand, alpha)
    return ChainReport(alpha, q0, q1, env, cand,
                       bool(q1 <= q0 * (1.0 + slack)),
                       bool(q0 >= env * (1.0 - slack)))
