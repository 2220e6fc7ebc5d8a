"""
Kodaira fibre types, their local monodromies in SL2(Z), quadratic twists
and homological invariants of elliptic surfaces over P^1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .lattice import IntMatrix, LatticeError
from .local_system import SYMPLECTIC_J, MonodromyTuple

MINUS_ONE = IntMatrix([[-1, 0], [0, -1]])


class KodairaError(ValueError):
    pass


# base kinds without the "I_N" index; "I" and "I*" carry n
_ADDITIVE = {
    "II": (2, [[1, 1], [-1, 0]]),
    "III": (3, [[0, 1], [-1, 0]]),
    "IV": (4, [[0, 1], [-1, -1]]),
    "IV*": (8, [[-1, -1], [1, 0]]),
    "III*": (9, [[0, -1], [1, 0]]),
    "II*": (10, [[0, -1], [1, 1]]),
}
_TWIST = {"II": "IV*", "IV*": "II", "III": "III*", "III*": "III", "IV": "II*", "II*": "IV",
          "I": "I*", "I*": "I"}
# order of the local monodromy in PSL2(Z); None means infinite
_PSL_ORDER = {"II": 6, "III": 4, "IV": 3, "IV*": 3, "III*": 4, "II*": 6}


@dataclass(frozen=True)
class KodairaFiber:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in _TWIST:
            raise KodairaError(f"unknown fibre kind {self.kind!r}")
        if self.kind in ("I", "I*"):
            if self.n < 0:
                raise KodairaError("I_N needs N >= 0")
        elif self.n:
            raise KodairaError(f"{self.kind} takes no index")

    @classmethod
    def parse(cls, text: str) -> KodairaFiber:
        s = text.strip().replace("_", "").replace("{", "").replace("}", "")
        m = re.fullmatch(r"I(\d+)(\*?)", s)
        if m:
            return cls("I*" if m.group(2) else "I", int(m.group(1)))
        if s in _ADDITIVE:
            return cls(s)
        raise KodairaError(f"cannot parse fibre type {text!r}")

    @property
    def name(self) -> str:
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind

    def __str__(self) -> str:
        return self.name

    @property
    def starred(self) -> bool:
        return self.kind.endswith("*")

    @property
    def is_smooth(self) -> bool:
        return self.kind == "I" and self.n == 0

    @property
    def multiplicative(self) -> bool:
        return self.kind == "I" and self.n > 0

    @property
    def sigma_plus(self) -> bool:
        """I_N (N >= 1), II, III, IV: twisting here raises the Euler number."""
        return not self.starred and not self.is_smooth

    @property
    def euler(self) -> int:
        if self.kind == "I":
            return self.n
        if self.kind == "I*":
            return self.n + 6
        return _ADDITIVE[self.kind][0]

    @property
    def local_monodromy(self) -> IntMatrix:
        if self.kind == "I":
            return IntMatrix([[1, self.n], [0, 1]])
        if self.kind == "I*":
            return IntMatrix([[-1, -self.n], [0, -1]])
        return IntMatrix(_ADDITIVE[self.kind][1])

    @property
    def psl_order(self) -> int | None:
        if self.kind in ("I", "I*"):
            return 1 if self.n == 0 else None
        return _PSL_ORDER[self.kind]

    @property
    def orders(self) -> tuple[int, int, int]:
        """A representative (ord g2, ord g3, ord Delta) for this type."""
        return {
            "I": (0, 0, self.n),
            "I*": (2, 3, self.n + 6),
            "II": (1, 1, 2),
            "III": (1, 2, 3),
            "IV": (2, 2, 4),
            "IV*": (3, 4, 8),
            "III*": (3, 5, 9),
            "II*": (4, 5, 10),
        }[self.kind]


def kodaira_classify(ordg2: int, ordg3: int, ordDelta: int) -> KodairaFiber:
    """Fibre type from the vanishing orders of g2, g3 and the discriminant."""
    a, b, c = ordg2, ordg3, ordDelta
    if min(a, b, c) < 0:
        raise KodairaError("vanishing orders must be nonnegative")
    if a >= 4 and b >= 6:
        raise KodairaError("non-minimal Weierstrass model; reduce the orders by (4, 6, 12)")
    low = min(3 * a, 2 * b)
    if c < low or (3 * a != 2 * b and c != low):
        raise KodairaError(f"orders ({a}, {b}, {c}) are inconsistent with Delta = g2^3 - 27 g3^2")
    if c == 0:
        return KodairaFiber("I", 0)
    if a == 0 and b == 0:
        return KodairaFiber("I", c)
    if a == 2 and b == 3 and c > 6:
        return KodairaFiber("I*", c - 6)
    rows = [
        ("II", a >= 1 and b == 1 and c == 2),
        ("III", a == 1 and b >= 1 and c == 3),
        ("IV", a >= 2 and b == 2 and c == 4),
        ("I0*", a >= 2 and b >= 3 and c == 6),
        ("IV*", a >= 3 and b == 4 and c == 8),
        ("III*", a == 3 and b >= 5 and c == 9),
        ("II*", a >= 4 and b == 5 and c == 10),
    ]
    for name, ok in rows:
        if ok:
            return KodairaFiber.parse(name)
    raise KodairaError(f"no Kodaira type has orders ({a}, {b}, {c})")


def twist_orders(ordg2: int, ordg3: int, ordDelta: int) -> tuple[int, int, int]:
    """Orders after (g2, g3) -> (s^2 g2, s^3 g3) with s a uniformizer, minimalized."""
    a, b, c = ordg2 + 2, ordg3 + 3, ordDelta + 6
    if a >= 4 and b >= 6:
        a, b, c = a - 4, b - 6, c - 12
    return a, b, c


def twist_fiber(f: KodairaFiber) -> KodairaFiber:
    return KodairaFiber(_TWIST[f.kind], f.n)


# ---------------------------------------------------------------------------
# SL2(Z) conjugacy classes


def _form_sign(M: IntMatrix) -> int:
    """Sign of the binary form c x^2 + (d - a) x y - b y^2 attached to M."""
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    A, B, C = c, d - a, -b
    if A:
        return 1 if A > 0 else -1
    if C:
        return 1 if C > 0 else -1
    return 0 if B == 0 else 2  # indefinite


def local_type(M: IntMatrix) -> KodairaFiber | None:
    """Kodaira type whose local monodromy is SL2(Z)-conjugate to M, if any."""
    if M.shape != (2, 2) or M.det() != 1:
        return None
    tr = M.trace()
    if tr == 2 or tr == -2:
        N = M if tr == 2 else -M
        e = N - IntMatrix.identity(2)
        n = gcd(gcd(e[0, 0], e[0, 1]), gcd(e[1, 0], e[1, 1]))
        if n == 0:
            return KodairaFiber("I" if tr == 2 else "I*", 0)
        if _form_sign(N) != -1:
            return None
        return KodairaFiber("I" if tr == 2 else "I*", n)
    sign = _form_sign(M)
    table = {1: ("II", "II*"), 0: ("III", "III*"), -1: ("IV", "IV*")}
    if tr not in table:
        return None
    return KodairaFiber(table[tr][0] if sign < 0 else table[tr][1])


def same_local_type(M: IntMatrix, f: KodairaFiber) -> bool:
    return local_type(M) == f


# ---------------------------------------------------------------------------
# Configurations and homological invariants


@dataclass(frozen=True)
class FiberConfiguration:
    fibers: tuple[tuple[str, KodairaFiber], ...]
    infinity: str = "inf"

    @classmethod
    def from_json(cls, data: Sequence[dict], infinity: str = "inf") -> FiberConfiguration:
        out = []
        for item in data:
            kind = item["kind"]
            if "n" in item and item["n"] is not None:
                kind = kind.rstrip("*").rstrip("0123456789") + str(item["n"]) + ("*" if kind.endswith("*") else "")
            out.append((str(item["place"]), KodairaFiber.parse(kind)))
        return cls(tuple(out), infinity)

    def to_json(self) -> list[dict]:
        out = []
        for place, f in self.fibers:
            item = {"place": place, "kind": f.name}
            if f.kind in ("I", "I*"):
                item["n"] = f.n
            out.append(item)
        return out

    @property
    def places(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.fibers)

    @property
    def kinds(self) -> tuple[KodairaFiber, ...]:
        return tuple(f for _, f in self.fibers)

    def twisted(self, places: Sequence[str]) -> FiberConfiguration:
        """Quadratic twist at the given places; unknown places are new smooth fibres."""
        fibers = list(self.fibers)
        for place in places:
            for k, (p, f) in enumerate(fibers):
                if p == place:
                    fibers[k] = (p, twist_fiber(f))
                    break
            else:
                fibers.append((place, twist_fiber(KodairaFiber("I", 0))))
        return FiberConfiguration(tuple(fibers), self.infinity)


def euler_characteristic(c: FiberConfiguration) -> int:
    return sum(f.euler for f in c.kinds)


def build_homological_invariant(
    c: FiberConfiguration, mats: Sequence[IntMatrix] | None = None
) -> MonodromyTuple:
    """Rank-2 tuple for a configuration; the last matrix may be omitted and inferred."""
    if mats is None:
        raise KodairaError("explicit local monodromies are required; a global tuple cannot be guessed")
    mats = list(mats)
    if len(mats) == len(c.fibers) - 1:
        prod = IntMatrix.identity(2)
        for g in mats:
            prod = prod @ g
        mats.append(prod.inverse_int())
    if len(mats) != len(c.fibers):
        raise KodairaError("number of matrices differs from the number of fibres")
    for (place, f), g in zip(c.fibers, mats):
        got = local_type(g)
        if got != f:
            raise KodairaError(f"matrix at {place} has type {got}, expected {f}")
    t = MonodromyTuple(tuple(mats), c.places, SYMPLECTIC_J)
    if t.product() != IntMatrix.identity(2):
        raise KodairaError("ordered product of the local monodromies is not the identity")
    return t


def twist_tuple(t: MonodromyTuple, fixed_index: int, moving_position: int = 0,
                moving_label: str = "a") -> MonodromyTuple:
    """Insert -1 for the moving point and negate the monodromy at ``fixed_index``.

    ``fixed_index`` refers to the slot in ``t``; ``moving_position`` is the
    slot of the new point in the result.
    """
    if not 0 <= fixed_index < t.r:
        raise IndexError("fixed slot out of range")
    if not 0 <= moving_position <= t.r:
        raise IndexError("moving position out of range")
    p = t.rank_p
    minus = IntMatrix.scalar(p, -1)
    mats = [(-g if k == fixed_index else g) for k, g in enumerate(t.mats)]
    labels = list(t.points)
    mats.insert(moving_position, minus)
    labels.insert(moving_position, moving_label)
    prod = IntMatrix.identity(p)
    for g in mats:
        prod = prod @ g
    if prod == minus:
        mats[-1] = -mats[-1]
    elif prod != IntMatrix.identity(p):
        raise LatticeError("twisted tuple does not multiply to the identity")
    return MonodromyTuple(tuple(mats), tuple(labels), t.pairing)
