from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from parcohom.braids import BraidWord, eta
from parcohom.convolution import canonical_braids
from parcohom.elliptic import twist_tuple
from parcohom.lattice import GramForm, IntMatrix, rational_left_kernel
from parcohom.local_system import SYMPLECTIC_J, coboundary, parabolic_cohomology
from parcohom.pairing import PairingContext, PairingError, cup, gram_on_W, solve_u

from strategies import sl2_tuples
from test_local_system import family1


def full_twist(r: int) -> BraidWord:
    # (b1 ... b_{r-1})^r is central and acts on tuples by conjugation with the product
    return BraidWord(tuple((i, 1) for i in range(1, r)) * r)


def test_family1_gram():
    module = parabolic_cohomology(family1())
    Q = gram_on_W(PairingContext(module, SYMPLECTIC_J))
    assert Q.symmetry == "symmetric"
    assert Q.matrix.det() == 3


def test_context_rejects_bad_forms():
    module = parabolic_cohomology(family1())
    with pytest.raises(PairingError):
        PairingContext(module, GramForm(IntMatrix([[0, 0], [0, 0]]), "antisymmetric"))
    with pytest.raises(PairingError):
        PairingContext(module, GramForm(IntMatrix([[1, 0], [0, 2]])))


@settings(max_examples=60)
@given(sl2_tuples(), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_coboundaries_pair_to_zero(t, v):
    module = parabolic_cohomology(t, check=False)
    ctx = PairingContext(module, SYMPLECTIC_J)
    d0 = list(coboundary(t, v))
    for row in module.H.basis:
        assert cup(ctx, d0, row) == 0
        assert cup(ctx, row, d0) == 0


@settings(max_examples=60)
@given(sl2_tuples(), st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_u_choice_independence(t, shifts):
    module = parabolic_cohomology(t, check=False)
    assume(module.rank > 0)
    ctx = PairingContext(module, SYMPLECTIC_J)
    B = module.W_basis.basis
    one = IntMatrix.identity(2)
    for j in range(B.rows):
        us = solve_u(module, B[j])
        moved = []
        for k, (u, g) in enumerate(zip(us, t.mats)):
            K = rational_left_kernel(g - one)
            if K.rows:
                c = Fraction(shifts[k % len(shifts)], 3)
                u = [a + c * b for a, b in zip(u, K.entries[0])]
            moved.append(u)
        for i in range(B.rows):
            assert cup(ctx, B[i], B[j], moved) == cup(ctx, B[i], B[j], us)


@settings(max_examples=40)
@given(sl2_tuples(min_r=3, max_r=4))
def test_eta_preserves_Q_for_full_twist(t):
    module = parabolic_cohomology(t, check=False)
    assume(module.rank > 0)
    Q = gram_on_W(PairingContext(module, SYMPLECTIC_J)).matrix
    M = eta(module, full_twist(t.r), IntMatrix.identity(2))
    assert M @ Q @ M.T == Q


@settings(max_examples=30)
@given(sl2_tuples(min_r=3, max_r=4), st.data())
def test_eta_preserves_Q_on_twist_families(t, data):
    k = data.draw(st.integers(0, t.r - 1))
    tw = twist_tuple(t, k, 0)
    module = parabolic_cohomology(tw, check=False)
    assume(module.rank > 0)
    Q = gram_on_W(PairingContext(module, SYMPLECTIC_J)).matrix
    for w in canonical_braids(t.r):
        M = eta(module, w, IntMatrix.identity(2))
        assert M @ Q @ M.T == Q
