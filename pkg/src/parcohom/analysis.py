"""
Splitting parabolic cohomology into its monodromy-invariant part and the
transcendental complement, plus basis-independent invariant reports.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .lattice import (
    GramForm,
    IntMatrix,
    LatticeError,
    Sublattice,
    form_invariants,
    gram_restrict,
    integer_kernel,
    orthogonal_complement,
)

ORDER_CAP = 24


@lru_cache(maxsize=None)
def _cyclotomic(d: int) -> tuple[int, ...]:
    # x^d - 1 divided by every Phi_e with e a proper divisor of d
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num = _poly_divexact(num, list(_cyclotomic(e)))
    return tuple(num)


def cyclotomic(d: int) -> list[int]:
    """Coefficients of the d-th cyclotomic polynomial, constant term first."""
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    return list(_cyclotomic(d))


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        q[k] = c
        for j, b in enumerate(den):
            num[k + j] -= c * b
    if any(num):
        raise ArithmeticError("polynomial division left a remainder")
    return q


def charpoly(M: IntMatrix) -> list[int]:
    """Characteristic polynomial det(x - M), leading coefficient first."""
    n = M.rows
    coeffs = [1]
    A = IntMatrix.zeros(n, n)
    for k in range(1, n + 1):
        A = M @ A + IntMatrix.scalar(n, coeffs[-1])
        c = -(M @ A).trace()
        if c % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs.append(c // k)
    return coeffs


def is_nilpotent(N: IntMatrix) -> bool:
    return (N ** N.rows).is_zero()


def matrix_order(M: IntMatrix, cap: int = ORDER_CAP) -> int | None:
    """Multiplicative order of M, or None when it is infinite (or above ``cap``)."""
    one = IntMatrix.identity(M.rows)
    P = M
    for k in range(1, cap + 1):
        if P == one:
            return k
        P = P @ M
    return None


def quasi_unipotent_exponent(M: IntMatrix, cap: int = ORDER_CAP) -> int | None:
    """Least k <= cap with M^k - 1 nilpotent, certifying eigenvalues are roots of unity."""
    one = IntMatrix.identity(M.rows)
    P = M
    for k in range(1, cap + 1):
        if is_nilpotent(P - one):
            return k
        P = P @ M
    return None


def format_order(k: int | None) -> str:
    return "inf" if k is None else str(k)


@dataclass(frozen=True)
class SplitResult:
    rank: int
    gram: GramForm
    monodromy: tuple[IntMatrix, ...]
    fixed: Sublattice
    T: Sublattice
    T_gram: GramForm
    T_monodromy: tuple[IntMatrix, ...]

    @property
    def hypothesis_holds(self) -> bool:
        return self.fixed.intersection(self.T).rank == 0


def restrict_to(L: Sublattice, M: IntMatrix) -> IntMatrix:
    """Matrix of the right action of M on an invariant sublattice, in L's basis."""
    rows = []
    for img in (L.basis @ M).entries:
        x = L.coordinates(img)
        if x is None or any(c.denominator != 1 for c in x):
            raise LatticeError("sublattice is not invariant under the matrix")
        rows.append([int(c) for c in x])
    return IntMatrix(rows, cols=L.rank)


def fixed_lattice(n: int, monodromy: Sequence[IntMatrix]) -> Sublattice:
    if not monodromy:
        return Sublattice.full(n)
    one = IntMatrix.identity(n)
    return integer_kernel(IntMatrix.hstack([g - one for g in monodromy]))


def split(Q: GramForm, monodromy: Sequence[IntMatrix]) -> SplitResult:
    """Invariant part and its Q-orthogonal complement in W = Z^n."""
    n = Q.rank
    if Q.matrix.det() == 0:
        raise LatticeError("split needs a nondegenerate form")
    full = Sublattice.full(n)
    fixed = fixed_lattice(n, monodromy)
    T = orthogonal_complement(fixed, Q, full)
    result = SplitResult(
        rank=n,
        gram=Q,
        monodromy=tuple(monodromy),
        fixed=fixed,
        T=T,
        T_gram=gram_restrict(T, Q),
        T_monodromy=tuple(restrict_to(T, g) for g in monodromy),
    )
    if not result.hypothesis_holds:
        warnings.warn("invariant part meets its orthogonal complement", stacklevel=2)
    return result


@dataclass(frozen=True)
class SignChoice:
    signs: tuple[int, ...]
    monodromy: tuple[IntMatrix, ...]
    split: SplitResult


def fix_signs(
    Q: GramForm,
    mats: Sequence[IntMatrix],
    targets: Sequence[int | None],
    with_infinity: bool = True,
) -> SignChoice:
    """Choose a sign for each projective matrix from trace targets on T.

    ``targets`` has one entry per matrix, plus one for infinity when
    ``with_infinity`` is set (infinity is the inverse ordered product).
    Among sign vectors meeting every target, the one with the largest
    invariant part wins; a tie between different splittings raises.
    """
    k = len(mats)
    if len(targets) != k + (1 if with_infinity else 0):
        raise ValueError("one trace target per matrix is required")
    n = Q.rank
    best: list[SignChoice] = []
    best_rank = -1
    for mask in range(1 << k):
        signs = tuple(-1 if mask >> i & 1 else 1 for i in range(k))
        signed = [g if s == 1 else -g for g, s in zip(mats, signs)]
        if with_infinity:
            prod = IntMatrix.identity(n)
            for g in signed:
                prod = prod @ g
            signed.append(prod.inverse_int())
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = split(Q, signed)
        if not res.hypothesis_holds:
            continue
        if any(t is not None and g.trace() != t for g, t in zip(res.T_monodromy, targets)):
            continue
        choice = SignChoice(signs, tuple(signed), res)
        if res.fixed.rank > best_rank:
            best, best_rank = [choice], res.fixed.rank
        elif res.fixed.rank == best_rank:
            best.append(choice)
    if not best:
        raise LatticeError("no sign choice meets the trace targets")
    if len({c.split.T for c in best}) > 1 or len({c.monodromy for c in best}) > 1:
        raise LatticeError(f"{len(best)} sign choices meet the trace targets; add more targets")
    return best[0]


def invariant_report(T_gram: GramForm, T_monodromy: Sequence[IntMatrix]) -> dict:
    if T_gram.rank == 0:
        return {"rank": 0, "det": None, "disc": [], "signature": None,
                "orders": [], "traces": [], "charpolys": []}
    inv = form_invariants(T_gram)
    return {
        "rank": T_gram.rank,
        "det": inv.det,
        "disc": list(inv.disc),
        "signature": list(inv.signature) if inv.signature else None,
        "orders": [format_order(matrix_order(g)) for g in T_monodromy],
        "traces": [g.trace() for g in T_monodromy],
        "charpolys": [charpoly(g) for g in T_monodromy],
    }


@dataclass(frozen=True)
class Verdict:
    consistent: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.consistent

    def __str__(self) -> str:
        return "consistent" if self.consistent else f"distinct ({self.reason})"


def forms_plausibly_equivalent(A: GramForm, B: GramForm) -> Verdict:
    """Compare rank, det, discriminant group and signature (necessary conditions only)."""
    if A.rank != B.rank:
        return Verdict(False, f"rank {A.rank} vs {B.rank}")
    ia, ib = form_invariants(A), form_invariants(B)
    for name in ("det", "disc", "signature"):
        a, b = getattr(ia, name), getattr(ib, name)
        if a != b:
            return Verdict(False, f"{name} {a} vs {b}")
    return Verdict(True)
