"""
Monodromy of the parabolic cohomology local system along explicit braids.

A family of configurations is described by a base tuple and, for each
generator of the deformation space's fundamental group, the braid word that
its motion of singular points traces out.  The monodromy at infinity of the
deformation space is the inverse of the ordered product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .braids import BraidWord, monodromy_on_W, parse_braid
from .lattice import GramForm, IntMatrix
from .local_system import SYMPLECTIC_J, MonodromyTuple, ParabolicModule, mat_product, parabolic_cohomology
from .pairing import PairingContext, gram_on_W


@dataclass(frozen=True, eq=False)
class VariationResult:
    tuple: MonodromyTuple
    module: ParabolicModule
    braids: tuple[BraidWord, ...]
    monodromy: tuple[IntMatrix, ...]
    labels: tuple[str, ...]
    gram: GramForm

    @property
    def rank(self) -> int:
        return self.module.rank


def compute_variation(
    t: MonodromyTuple,
    braids: Sequence[BraidWord | str],
    sign_hints: Sequence[int | None] | None = None,
    labels: Sequence[str] | None = None,
    with_infinity: bool = True,
) -> VariationResult:
    """Parabolic cohomology of ``t`` with the monodromy of each braid word.

    Without sign hints each matrix is the projective representative with a
    positive first nonzero entry.
    """
    words = tuple(parse_braid(w) if isinstance(w, str) else w for w in braids)
    module = parabolic_cohomology(t)
    mats = monodromy_on_W(module, words, sign_hints)
    if labels is None:
        labels = [f"g{k + 1}" for k in range(len(words))]
    labels = list(labels)
    if len(labels) != len(words):
        raise ValueError("one label per braid word is required")
    if with_infinity and words:
        mats.append(mat_product(mats, module.rank).inverse_int())
        labels.append("inf")
    gram = gram_on_W(PairingContext(module, t.pairing or SYMPLECTIC_J))
    return VariationResult(t, module, words, tuple(mats), tuple(labels), gram)
