"""
Monodromy tuples and their parabolic cohomology.

A tuple g = (g_1, ..., g_r) of p x p integer matrices with g_1 ... g_r = 1
describes a local system on the r-punctured sphere, with g_r the loop around
infinity.  Cocycles are concatenated row vectors (v_1 | ... | v_r) in Z^{rp}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Sequence

from .lattice import (
    GramForm,
    IntMatrix,
    LatticeError,
    Sublattice,
    adapted_basis,
    integer_kernel,
    hnf_basis,
)


def mat_product(mats: Sequence[IntMatrix], n: int) -> IntMatrix:
    return reduce(lambda a, b: a @ b, mats, IntMatrix.identity(n))


@dataclass(frozen=True)
class MonodromyTuple:
    mats: tuple[IntMatrix, ...]
    points: tuple[str, ...] = ()
    pairing: GramForm | None = None

    def __post_init__(self):
        object.__setattr__(self, "mats", tuple(self.mats))
        if not self.mats:
            raise LatticeError("a monodromy tuple needs at least one matrix")
        p = self.mats[0].rows
        if any(m.shape != (p, p) for m in self.mats):
            raise LatticeError("all tuple matrices must be square of the same size")
        if not self.points:
            labels = tuple(str(i + 1) for i in range(len(self.mats) - 1)) + ("inf",)
            object.__setattr__(self, "points", labels)
        else:
            object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) != len(self.mats):
            raise LatticeError("point labels and matrices differ in length")

    @property
    def rank_p(self) -> int:
        return self.mats[0].rows

    @property
    def r(self) -> int:
        return len(self.mats)

    def __getitem__(self, i: int) -> IntMatrix:
        return self.mats[i]

    def product(self) -> IntMatrix:
        return mat_product(self.mats, self.rank_p)

    def with_mats(self, mats: Sequence[IntMatrix]) -> MonodromyTuple:
        return MonodromyTuple(tuple(mats), self.points, self.pairing)

    def conjugate(self, h: IntMatrix) -> MonodromyTuple:
        """The tuple (h g_i h^-1)."""
        hinv = h.inverse_int()
        return self.with_mats([h @ g @ hinv for g in self.mats])

    def to_json(self) -> dict:
        return {
            "rank_p": self.rank_p,
            "points": list(self.points),
            "mats": [m.to_json() for m in self.mats],
            "pairing": self.pairing.matrix.to_json() if self.pairing else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> MonodromyTuple:
        mats = tuple(IntMatrix.from_json(m) for m in data["mats"])
        if "rank_p" in data and any(m.rows != int(data["rank_p"]) for m in mats):
            raise LatticeError("rank_p disagrees with the matrix sizes")
        pairing = data.get("pairing")
        form = None
        if pairing is not None:
            J = IntMatrix.from_json(pairing)
            form = GramForm(J, "symmetric" if J == J.T else "antisymmetric")
        return cls(mats, tuple(data.get("points") or ()), form)


SYMPLECTIC_J = GramForm(IntMatrix([[0, 1], [-1, 0]]), "antisymmetric")


def validate(t: MonodromyTuple) -> list[str]:
    """Violations of the tuple invariants (empty when valid)."""
    problems = []
    for label, g in zip(t.points, t.mats):
        if g.det() not in (1, -1):
            problems.append(f"g[{label}] has determinant {g.det()}, not a unit")
    if t.product() != IntMatrix.identity(t.rank_p):
        problems.append("ordered product of the tuple is not the identity")
    if t.pairing is not None:
        J = t.pairing.matrix
        if J.shape != (t.rank_p, t.rank_p):
            problems.append("pairing has the wrong size")
        else:
            for label, g in zip(t.points, t.mats):
                if g @ J @ g.T != J:
                    problems.append(f"g[{label}] does not preserve the pairing")
    return problems


def kernel_dim(g: IntMatrix) -> int:
    """dim over Q of ker(g - 1)."""
    return g.rows - (g - IntMatrix.identity(g.rows)).rank()


def stabilizer(t: MonodromyTuple) -> Sublattice:
    """Vectors fixed by every g_i (the invariants of the local system)."""
    one = IntMatrix.identity(t.rank_p)
    return integer_kernel(IntMatrix.hstack([g - one for g in t.mats]))


def expected_rank(t: MonodromyTuple) -> int:
    """(r - 2) p - sum dim ker(g_i - 1); exact when the stabilizer is zero."""
    return (t.r - 2) * t.rank_p - sum(kernel_dim(g) for g in t.mats)


def tail_products(t: MonodromyTuple) -> list[IntMatrix]:
    """P_i = g_{i+1} ... g_r, so the cocycle relation reads sum v_i P_i = 0."""
    p = t.rank_p
    out = [IntMatrix.identity(p)]
    for g in reversed(t.mats[1:]):
        out.append(g @ out[-1])
    return out[::-1]


def image_basis(g: IntMatrix) -> IntMatrix:
    """Basis of the integral row lattice {u (g - 1) : u in Z^p} (not saturated)."""
    return hnf_basis(g - IntMatrix.identity(g.rows))


def cocycle_lattice(t: MonodromyTuple) -> Sublattice:
    """H_g: v_i in rowlattice(g_i - 1) and sum v_i g_{i+1} ... g_r = 0."""
    R = [image_basis(g) for g in t.mats]
    tails = tail_products(t)
    relation = IntMatrix.vstack([Ri @ Pi for Ri, Pi in zip(R, tails)], cols=t.rank_p)
    coeffs = integer_kernel(relation)
    embed = IntMatrix.block_diag(R)
    if embed.cols != t.r * t.rank_p:
        raise LatticeError("block embedding has the wrong width")
    return Sublattice.from_generators(t.r * t.rank_p, coeffs.basis @ embed)


def coboundary_lattice(t: MonodromyTuple) -> Sublattice:
    """E_g: rows (v(g_1 - 1), ..., v(g_r - 1)) for v in Z^p."""
    one = IntMatrix.identity(t.rank_p)
    return Sublattice.from_generators(
        t.r * t.rank_p, IntMatrix.hstack([g - one for g in t.mats])
    )


def coboundary(t: MonodromyTuple, v: Sequence[int]) -> tuple[int, ...]:
    row = IntMatrix([list(v)], cols=t.rank_p)
    one = IntMatrix.identity(t.rank_p)
    return sum(((row @ (g - one)).entries[0] for g in t.mats), ())


def is_cocycle(t: MonodromyTuple, vec: Sequence[int]) -> bool:
    """Membership check straight from the definition of H_g."""
    p = t.rank_p
    blocks = [list(vec[i * p:(i + 1) * p]) for i in range(t.r)]
    for v, g in zip(blocks, t.mats):
        if not Sublattice(p, image_basis(g)).contains(v):
            return False
    total = [0] * p
    for v, P in zip(blocks, tail_products(t)):
        w = (IntMatrix([v], cols=p) @ P).entries[0]
        total = [a + b for a, b in zip(total, w)]
    return all(x == 0 for x in total)


@dataclass(frozen=True, eq=False)
class ParabolicModule:
    """H_g, E_g and a basis of lifts of the free part of W_g = H_g / E_g."""

    tuple: MonodromyTuple
    H: Sublattice
    E: Sublattice
    W_basis: Sublattice
    torsion: tuple[int, ...]
    complement: Sublattice = field(repr=False)

    @property
    def rank(self) -> int:
        return self.W_basis.rank

    @cached_property
    def _adapted(self) -> Sublattice:
        return Sublattice(self.H.ambient_dim, IntMatrix.vstack(
            [self.W_basis.basis, self.complement.basis], cols=self.H.ambient_dim))

    def w_coordinates(self, vec: Sequence[int]) -> list[int]:
        """Coordinates in W_basis of the class of a cocycle modulo E (free part)."""
        x = self._adapted.coordinates(vec)
        if x is None or any(c.denominator != 1 for c in x):
            raise LatticeError("vector is not a parabolic cocycle of this tuple")
        return [int(c) for c in x[: self.rank]]

    def restrict(self, M: IntMatrix, target: ParabolicModule | None = None) -> IntMatrix:
        """Matrix of the induced map W -> W_target for a cocycle map M acting on the right."""
        target = target or self
        images = self.W_basis.basis @ M
        return IntMatrix([target.w_coordinates(row) for row in images], cols=target.rank)

    def lift(self, coords: Sequence[int | Fraction]) -> list:
        B = self.W_basis.basis
        return [sum(c * B[i, j] for i, c in enumerate(coords)) for j in range(B.cols)]


def parabolic_cohomology(t: MonodromyTuple, check: bool = True) -> ParabolicModule:
    H = cocycle_lattice(t)
    E = coboundary_lattice(t)
    if check and not H.contains_lattice(E):
        raise LatticeError("coboundaries are not contained in the cocycle lattice")
    B, factors = adapted_basis(H, E)
    k = len(factors)
    module = ParabolicModule(
        tuple=t,
        H=H,
        E=E,
        W_basis=Sublattice.from_generators(H.ambient_dim, B.entries[k:]),
        torsion=tuple(d for d in factors if d > 1),
        complement=Sublattice.from_generators(H.ambient_dim, B.entries[:k]),
    )
    if check and stabilizer(t).rank == 0 and module.rank != expected_rank(t):
        raise LatticeError(
            f"W rank {module.rank} differs from the rank formula {expected_rank(t)}"
        )
    return module
