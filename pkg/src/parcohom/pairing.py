"""
Cup-product pairing on parabolic cohomology.

For cocycles d^1, d^2 with components v_i^j set w_0 = 0,
w_i^j = v_i^j + w_{i-1}^j g_i, pick u_i with w_i^2 - w_{i-1}^2 = u_i (g_i - 1)
and sum <w_i^1 - w_{i-1}^1, u_i - w_{i-1}^2>_J over i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import GramForm, IntMatrix, LatticeError, solve_left
from .local_system import ParabolicModule


class PairingError(LatticeError):
    pass


@dataclass(frozen=True)
class PairingContext:
    module: ParabolicModule
    J: GramForm

    def __post_init__(self):
        J = self.J.matrix
        if J.det() == 0:
            raise PairingError("fiber pairing is degenerate")
        for g in self.module.tuple.mats:
            if g @ J @ g.T != J:
                raise PairingError("local monodromy does not preserve the fiber pairing")

    @property
    def output_symmetry(self) -> str:
        return "symmetric" if self.J.symmetry == "antisymmetric" else "antisymmetric"


def _vec_mat(v: Sequence, g: IntMatrix) -> list:
    return [sum(v[k] * g[k, j] for k in range(g.rows)) for j in range(g.cols)]


def _partial_sums(mats: Sequence[IntMatrix], blocks: Sequence[Sequence]) -> list[list]:
    p = mats[0].rows
    w = [[0] * p]
    for v, g in zip(blocks, mats):
        prev = _vec_mat(w[-1], g)
        w.append([a + b for a, b in zip(v, prev)])
    return w


def _split(vec: Sequence, r: int, p: int) -> list[list]:
    return [list(vec[i * p:(i + 1) * p]) for i in range(r)]


def solve_u(module: ParabolicModule, d: Sequence) -> list[list[Fraction]]:
    """Particular solutions u_i of w_i - w_{i-1} = u_i (g_i - 1)."""
    t = module.tuple
    one = IntMatrix.identity(t.rank_p)
    w = _partial_sums(t.mats, _split(d, t.r, t.rank_p))
    us = []
    for i, g in enumerate(t.mats, start=1):
        diff = [a - b for a, b in zip(w[i], w[i - 1])]
        u = solve_left(g - one, diff)
        if u is None:
            raise PairingError(f"no u_{i} exists; the input is not parabolic at slot {i}")
        us.append(u)
    return us


def cup(
    ctx: PairingContext,
    d1: Sequence,
    d2: Sequence,
    us: Sequence[Sequence] | None = None,
) -> Fraction:
    t = ctx.module.tuple
    r, p = t.r, t.rank_p
    w1 = _partial_sums(t.mats, _split(d1, r, p))
    w2 = _partial_sums(t.mats, _split(d2, r, p))
    if us is None:
        us = solve_u(ctx.module, d2)
    total = Fraction(0)
    for i in range(1, r + 1):
        x = [a - b for a, b in zip(w1[i], w1[i - 1])]
        y = [a - b for a, b in zip(us[i - 1], w2[i - 1])]
        total += ctx.J.pair(x, y)
    return total


def gram_on_W(ctx: PairingContext) -> GramForm:
    """Integral Gram matrix of the cup product on the W basis lifts."""
    B = ctx.module.W_basis.basis
    n = B.rows
    us = [solve_u(ctx.module, row) for row in B]
    entries = [[cup(ctx, B[i], B[j], us[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if entries[i][j].denominator != 1:
                raise PairingError(f"non-integral cup value {entries[i][j]} at ({i}, {j})")
    return GramForm(IntMatrix(entries, cols=n), ctx.output_symmetry)
