"""
Middle convolution MC_{-1} and middle Hadamard product MH_{-1} of rank-2
homological invariants, computed as parabolic cohomology of the quadratic
twist family with the moving point in the first slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .braids import BraidWord, braid_apply, eta
from .analysis import cyclotomic as cyclotomic_coeffs
from .elliptic import KodairaFiber, local_type, twist_tuple
from .lattice import GramForm, IntMatrix, LatticeError
from .local_system import (
    SYMPLECTIC_J,
    MonodromyTuple,
    ParabolicModule,
    mat_product,
    parabolic_cohomology,
)
from .pairing import PairingContext, gram_on_W


class ConvolutionError(LatticeError):
    pass


def canonical_braids(r: int) -> list[BraidWord]:
    """Words moving slot 1 once around each of the r - 1 following finite points.

    Word k is b1^-1 ... b_{k-1}^-1 b_k^2 b_{k-1} ... b1.
    """
    if r < 3:
        raise ValueError("need at least three points")
    words = []
    for k in range(1, r):
        down = tuple((i, -1) for i in range(1, k))
        up = tuple((i, 1) for i in range(k - 1, 0, -1))
        words.append(BraidWord(down + ((k, 1), (k, 1)) + up))
    return words


# ---------------------------------------------------------------------------
# Predictions


_RANK_DROP = {"I": 1, "II": 2, "III": 2, "IV": 2, "II*": 2, "III*": 2, "IV*": 2, "I*": 3}


def rank_drop(f: KodairaFiber) -> int:
    """k in 2r - nu - k; a smooth twisted point contributes nothing."""
    if f.is_smooth:
        return 0
    if f.kind == "I*" and f.n == 0:
        return 4
    return _RANK_DROP[f.kind]


def fiber_types(t: MonodromyTuple) -> list[KodairaFiber]:
    types = []
    for label, g in zip(t.points, t.mats):
        f = local_type(g)
        if f is None:
            raise ConvolutionError(f"matrix at {label} is not a Kodaira local monodromy")
        types.append(f)
    return types


def predicted_rank(t: MonodromyTuple, fixed_index: int) -> int:
    """2r - nu - k with r the singular fibres (infinity included when singular)."""
    types = fiber_types(t)
    r = sum(1 for f in types if not f.is_smooth)
    nu = sum(1 for f in types if f.multiplicative)
    return 2 * r - nu - rank_drop(types[fixed_index])


# Jordan data: cyclotomic index d -> block sizes, each block of dimension
# deg(Phi_d) * size.  Unlisted dimensions are filled with 1x1 blocks of the
# "fill" eigenvalue (d = 1 for +1, d = 2 for -1).  Keys are fibre kinds with
# "I0" for a smooth point and "I0*" split off from I_N*.
_PRINTED = {
    "finite": {"I0": {}, "I": {2: [1]}, "I*": {2: [3]}, "II": {3: [1]}, "III": {4: [1]},
               "IV": {6: [1]}, "IV*": {6: [1]}, "III*": {4: [1]}, "II*": {3: [1]}},
    "mc_inf": {"I0": {}, "I": {2: [3]}, "I*": {}, "II": {3: [1]}, "III": {4: [1]},
               "IV": {6: [1]}, "IV*": {6: [1]}, "III*": {4: [1]}, "II*": {3: [1]}},
    "mh_inf": {"I0": {}, "I": {1: [1]}, "I*": {1: [3]}, "II": {6: [1]}, "III": {4: [1]},
               "IV": {3: [1]}, "IV*": {3: [1]}, "III*": {4: [1]}, "II*": {6: [1]}},
    "mh_twisted": {"I0": {}, "I": {1: [3]}, "I*": {}, "II": {6: [1]}, "III": {4: [1]},
                   "IV": {3: [1]}, "IV*": {3: [1]}, "III*": {4: [1]}, "II*": {6: [1]}},
}
_FILL = {"finite": 1, "mc_inf": 2, "mh_inf": 2, "mh_twisted": 1}

# Katz's rule for MC_{-1}: J(-1, l) -> J(1, l + 1) at finite points and
# J(1, l) -> J(-1, l + 1) at infinity.  The printed I_N* rows put the
# distinguished block at the wrong eigenvalue, the printed I0 rows for a
# twisted smooth point drop two Jordan blocks, and I0* has no printed row.
_KATZ = {
    "finite": {"I*": {1: [3]}, "I0*": {1: [2, 2]}},
    "mc_inf": {"I*": {1: [1]}, "I0*": {}, "I0": {2: [2, 2]}},
    "mh_inf": {"I*": {2: [3]}, "I0*": {2: [2, 2]}},
    "mh_twisted": {"I*": {2: [1]}, "I0*": {}, "I0": {1: [2, 2]}},
}

TABLE_SOURCES = ("katz", "printed")


@dataclass(frozen=True)
class JordanPrediction:
    blocks: dict[int, list[int]]
    fill: int  # 1 or 2

    def describe(self) -> str:
        parts = [f"Phi{d}:{sizes}" for d, sizes in sorted(self.blocks.items())]
        return " + ".join(parts + [f"fill Phi{self.fill}"])


def _key(f: KodairaFiber) -> str:
    if f.is_smooth:
        return "I0"
    if f.kind == "I*" and f.n == 0:
        return "I0*"
    return f.kind


def table_entry(slot: str, f: KodairaFiber, source: str = "katz") -> JordanPrediction | None:
    """Predicted Jordan data for fibre ``f`` in table column ``slot``.

    ``slot`` is one of finite, mc_inf, mh_inf, mh_twisted.  The printed
    tables have no I0* row, so that lookup returns None there.
    """
    if source not in TABLE_SOURCES:
        raise ValueError(f"unknown table source {source!r}")
    key = _key(f)
    if source == "katz" and key in _KATZ[slot]:
        blocks = _KATZ[slot][key]
    elif key in _PRINTED[slot]:
        blocks = _PRINTED[slot][key]
    else:
        return None
    return JordanPrediction({d: list(s) for d, s in blocks.items()}, _FILL[slot])


def slot_roles(r: int, fixed_index: int) -> list[str]:
    inf = r - 1
    if fixed_index == inf:
        return ["finite"] * inf + ["mc_inf"]
    return ["mh_twisted" if k == fixed_index else "finite" for k in range(inf)] + ["mh_inf"]


def local_predictions(
    t: MonodromyTuple, fixed_index: int, source: str = "katz"
) -> list[JordanPrediction | None]:
    """Predicted Jordan data at each base slot (last entry is infinity)."""
    types = fiber_types(t)
    roles = slot_roles(t.r, fixed_index)
    return [table_entry(role, f, source) for role, f in zip(roles, types)]


# ---------------------------------------------------------------------------
# Cyclotomic rank sequences


def poly_at(coeffs: Sequence[int], M: IntMatrix) -> IntMatrix:
    n = M.rows
    out = IntMatrix.zeros(n, n)
    for c in reversed(coeffs):
        out = out @ M + IntMatrix.scalar(n, c)
    return out


def rank_sequence(M: IntMatrix, d: int, kmax: int) -> list[int]:
    P = poly_at(cyclotomic_coeffs(d), M)
    seq = []
    power = IntMatrix.identity(M.rows)
    for _ in range(kmax):
        power = power @ P
        seq.append(power.rank())
    return seq


def predicted_sequence(n: int, blocks: dict[int, list[int]], fill: int, d: int, kmax: int) -> list[int]:
    deg = len(cyclotomic_coeffs(d)) - 1
    used = sum((len(cyclotomic_coeffs(e)) - 1) * sum(sizes) for e, sizes in blocks.items())
    sizes = list(blocks.get(d, []))
    if d == fill:
        sizes += [1] * (n - used)
    return [n - deg * sum(min(s, k) for s in sizes) for k in range(1, kmax + 1)]


def check_jordan(M: IntMatrix, pred: JordanPrediction) -> list[str]:
    """Mismatches between M and the predicted cyclotomic Jordan data."""
    n = M.rows
    used = sum((len(cyclotomic_coeffs(e)) - 1) * sum(s) for e, s in pred.blocks.items())
    if used > n:
        return [f"prediction needs {used} dimensions, matrix has {n}"]
    problems = []
    for d in sorted(set(pred.blocks) | {pred.fill}):
        kmax = max(pred.blocks.get(d, [1]) + [1]) + 1
        got = rank_sequence(M, d, kmax)
        want = predicted_sequence(n, pred.blocks, pred.fill, d, kmax)
        if got != want:
            problems.append(f"Phi{d} rank sequence {got}, expected {want}")
    return problems


# ---------------------------------------------------------------------------
# Pipelines


@dataclass(frozen=True, eq=False)
class ConvolutionResult:
    base: MonodromyTuple
    fixed_index: int
    twisted: MonodromyTuple
    module: ParabolicModule
    braids: tuple[BraidWord, ...]
    monodromy: MonodromyTuple
    gram: GramForm
    predicted_rank: int
    predictions: tuple[JordanPrediction | None, ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.module.rank

    @property
    def kind(self) -> str:
        return "mc" if self.fixed_index == self.base.r - 1 else "mh"


def convolve(t: MonodromyTuple, fixed_index: int) -> ConvolutionResult:
    """Parabolic cohomology of the twist family at ``fixed_index`` and a moving point."""
    if t.rank_p != 2:
        raise ConvolutionError("convolution pipelines expect rank-2 homological invariants")
    twisted = twist_tuple(t, fixed_index, 0)
    module = parabolic_cohomology(twisted)
    want = predicted_rank(t, fixed_index)
    if module.rank != want:
        raise ConvolutionError(f"W has rank {module.rank}, the rank table predicts {want}")
    words = canonical_braids(t.r)
    one = IntMatrix.identity(2)
    mats = []
    for w in words:
        if braid_apply(twisted, w) != twisted:
            raise ConvolutionError(f"braid {w} does not fix the twisted tuple")
        # -1 is central, so the transporter is a scalar; +1 keeps eta = Phi
        mats.append(eta(module, w, one))
    mats.append(mat_product(mats, module.rank).inverse_int())
    monodromy = MonodromyTuple(tuple(mats), t.points)
    gram = gram_on_W(PairingContext(module, t.pairing or SYMPLECTIC_J))
    for g in mats:
        if g @ gram.matrix @ g.T != gram.matrix:
            raise ConvolutionError("monodromy does not preserve the cup product")
    return ConvolutionResult(
        base=t,
        fixed_index=fixed_index,
        twisted=twisted,
        module=module,
        braids=tuple(words),
        monodromy=monodromy,
        gram=gram,
        predicted_rank=want,
        predictions=tuple(local_predictions(t, fixed_index)),
    )


def middle_convolution(t: MonodromyTuple) -> ConvolutionResult:
    return convolve(t, t.r - 1)


def middle_hadamard(t: MonodromyTuple, fixed_index: int) -> ConvolutionResult:
    if fixed_index == t.r - 1:
        raise ConvolutionError("the Hadamard product needs a finite fixed slot")
    return convolve(t, fixed_index)


def verify_local_types(result: ConvolutionResult, source: str = "katz") -> dict[str, list[str]]:
    """Per-point mismatches against the local monodromy tables (empty when all match)."""
    preds = result.predictions if source == "katz" else local_predictions(
        result.base, result.fixed_index, source)
    return {
        label: check_jordan(M, pred)
        for label, M, pred in zip(result.monodromy.points, result.monodromy.mats, preds)
        if pred is not None
    }
