"""
Artin braid action on monodromy tuples and the induced maps on cocycles.

A braid word is a sequence of letters (i, e) with 1 <= i <= r - 1 and
e = +1 or -1.  Words act on tuples from the left letter first:

    g^{b_i} = (..., g_{i+1}, g_{i+1}^-1 g_i g_{i+1}, ...)

and Phi(g, b b') = Phi(g, b) Phi(g^b, b'), with matrices acting on the
right of concatenated cocycle rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from .lattice import IntMatrix, LatticeError, rational_left_kernel, primitive
from .local_system import MonodromyTuple, ParabolicModule


class BraidParseError(ValueError):
    def __init__(self, text: str, position: int, message: str):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class TransporterError(LatticeError):
    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((int(i), int(e)) for i, e in self.letters))
        for i, e in self.letters:
            if i < 1 or e not in (1, -1):
                raise ValueError(f"bad braid letter ({i}, {e})")

    @classmethod
    def generator(cls, i: int, power: int = 1) -> BraidWord:
        e = 1 if power > 0 else -1
        return cls(((i, e),) * abs(power))

    @classmethod
    def parse(cls, text: str) -> BraidWord:
        return parse_braid(text)

    def __mul__(self, other: BraidWord) -> BraidWord:
        return BraidWord(self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(tuple((i, -e) for i, e in reversed(self.letters)))

    def max_index(self) -> int:
        return max((i for i, _ in self.letters), default=0)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        groups: list[list[int]] = []
        for i, e in self.letters:
            if groups and groups[-1][0] == i and (groups[-1][1] > 0) == (e > 0):
                groups[-1][1] += e
            else:
                groups.append([i, e])
        return " * ".join(f"b{i}" if k == 1 else f"b{i}^{k}" for i, k in groups)


_TOKEN = re.compile(r"\s*b\s*(\d+)\s*(?:\^\s*([+-]?\s*\d+))?\s*")


def parse_braid(text: str) -> BraidWord:
    """Parse words such as ``"b1^2 * b2^-1 * b1^-1"``; ``""`` or ``"1"`` is empty."""
    if text.strip() in ("", "1"):
        return BraidWord()
    letters: list[tuple[int, int]] = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m:
            raise BraidParseError(text, pos, "expected a generator like b3 or b3^-2")
        i = int(m.group(1))
        k = int(m.group(2).replace(" ", "")) if m.group(2) else 1
        if i < 1:
            raise BraidParseError(text, m.start(1), "generator index must be positive")
        if k == 0:
            raise BraidParseError(text, m.start(2), "zero exponent")
        letters.extend([(i, 1 if k > 0 else -1)] * abs(k))
        pos = m.end()
        if pos == len(text):
            return BraidWord(tuple(letters))
        if text[pos] != "*":
            raise BraidParseError(text, pos, "expected '*'")
        pos += 1


def _check_letters(t: MonodromyTuple, w: BraidWord) -> None:
    if w.max_index() > t.r - 1:
        raise ValueError(f"braid index {w.max_index()} out of range for r = {t.r}")


def _apply_letter(mats: list[IntMatrix], i: int, e: int) -> None:
    a, b = mats[i - 1], mats[i]
    if e == 1:
        mats[i - 1], mats[i] = b, b.inverse_int() @ a @ b
    else:
        mats[i - 1], mats[i] = a @ b @ a.inverse_int(), a


def braid_apply(t: MonodromyTuple, w: BraidWord) -> MonodromyTuple:
    _check_letters(t, w)
    mats = list(t.mats)
    for i, e in w.letters:
        _apply_letter(mats, i, e)
    return t.with_mats(mats)


def _letter_map(mats: Sequence[IntMatrix], i: int, e: int) -> IntMatrix:
    """Phi(g, b_i^e) as an rp x rp matrix acting on the right."""
    p = mats[0].rows
    r = len(mats)
    one = IntMatrix.identity(p)
    zero = IntMatrix.zeros(p, p)
    blocks = [[one if a == b else zero for b in range(r)] for a in range(r)]
    j, k = i - 1, i
    gj, gk = mats[j], mats[k]
    if e == 1:
        # new_j = v_k;  new_k = v_k (1 - c) + v_j g_k  with  c = g_k^-1 g_j g_k
        c = gk.inverse_int() @ gj @ gk
        blocks[j][j], blocks[j][k] = zero, gk
        blocks[k][j], blocks[k][k] = one, one - c
    else:
        # inverse of the map above taken at g^{b_i^-1}
        gj_inv = gj.inverse_int()
        blocks[j][j], blocks[j][k] = (gk - one) @ gj_inv, one
        blocks[k][j], blocks[k][k] = gj_inv, zero
    return IntMatrix.vstack([IntMatrix.hstack(row) for row in blocks])


def phi(t: MonodromyTuple, w: BraidWord) -> IntMatrix:
    """Phi(g, w): H_g -> H_{g^w}."""
    _check_letters(t, w)
    n = t.r * t.rank_p
    mats = list(t.mats)
    result = IntMatrix.identity(n)
    for i, e in w.letters:
        result = result @ _letter_map(mats, i, e)
        _apply_letter(mats, i, e)
    return result


def psi(t: MonodromyTuple, h: IntMatrix) -> IntMatrix:
    """Psi(g, h): (v_i) -> (v_i h), sending H_{(h g_i h^-1)} to H_g."""
    return IntMatrix.block_diag([h] * t.r)


def transporter(t: MonodromyTuple, t2: MonodromyTuple) -> IntMatrix:
    """Primitive integer h with h g_j = g'_j h for all j (sign not fixed)."""
    p = t.rank_p
    if t2.rank_p != p or t2.r != t.r:
        raise ValueError("tuples differ in shape")
    # unknown h as a row of length p*p, h[a][b] at index a*p + b
    cols = []
    for g, g2 in zip(t.mats, t2.mats):
        for a in range(p):
            for b in range(p):
                col = [0] * (p * p)
                # (h g)[a][b] - (g2 h)[a][b]
                for c in range(p):
                    col[a * p + c] += g[c, b]
                    col[c * p + b] -= g2[a, c]
                cols.append(col)
    system = IntMatrix([list(r) for r in zip(*cols)], cols=len(cols))
    K = rational_left_kernel(system)
    if K.rows == 0:
        raise TransporterError("tuples are not globally conjugate", 0)
    if K.rows > 1:
        raise TransporterError(f"transporter space has dimension {K.rows}", K.rows)
    v = primitive(K.entries[0])
    h = IntMatrix([v[a * p:(a + 1) * p] for a in range(p)])
    if h.det() == 0:
        raise TransporterError("transporter is singular", 1)
    first = next(x for x in v if x)
    return h if first > 0 else -h


def canonical_sign(M: IntMatrix) -> IntMatrix:
    """Projective representative whose first nonzero entry is positive."""
    first = next((x for r in M for x in r if x), 0)
    return -M if first < 0 else M


def eta(module: ParabolicModule, w: BraidWord, h: IntMatrix | None = None) -> IntMatrix:
    """eta = Phi(g, w) Psi(g, h) restricted to W, with h g_j = g^w_j h."""
    t = module.tuple
    moved = braid_apply(t, w)
    if h is None:
        h = transporter(t, moved)
    M = phi(t, w) @ psi(t, h)
    return module.restrict(M)


def monodromy_on_W(
    module: ParabolicModule,
    braids: Sequence[BraidWord],
    sign_hints: Sequence[int | None] | None = None,
) -> list[IntMatrix]:
    """Monodromy of the parabolic cohomology along each braid word.

    Without hints each matrix is the projective representative with positive
    first nonzero entry.  A hint is a trace target and selects the sign of the
    transporter that matches it.
    """
    out = []
    hints = list(sign_hints) if sign_hints is not None else [None] * len(braids)
    if len(hints) != len(braids):
        raise ValueError("one sign hint per braid word is required")
    for w, target in zip(braids, hints):
        M = eta(module, w)
        if target is None:
            out.append(canonical_sign(M))
        elif M.trace() == target:
            out.append(M)
        elif -M.trace() == target:
            out.append(-M)
        else:
            raise ValueError(f"trace hint {target} matches neither sign (trace {M.trace()})")
    return out


def product(mats: Sequence[IntMatrix]) -> IntMatrix:
    return reduce(lambda a, b: a @ b, mats)
