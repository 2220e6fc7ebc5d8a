from __future__ import annotations

import warnings

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from parcohom.analysis import (
    charpoly,
    cyclotomic,
    fix_signs,
    format_order,
    forms_plausibly_equivalent,
    invariant_report,
    matrix_order,
    quasi_unipotent_exponent,
    restrict_to,
    split,
)
from parcohom.braids import eta
from parcohom.convolution import canonical_braids
from parcohom.elliptic import twist_tuple
from parcohom.lattice import GramForm, IntMatrix, LatticeError, Sublattice
from parcohom.local_system import SYMPLECTIC_J, parabolic_cohomology
from parcohom.pairing import PairingContext, gram_on_W

from strategies import int_matrices, sl2_tuples

x = sympy.Symbol("x")


@pytest.mark.parametrize("d", range(1, 25))
def test_cyclotomic_matches_sympy(d):
    assert cyclotomic(d) == [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(d, x)).all_coeffs())]


def test_cyclotomic_rejects_zero():
    with pytest.raises(ValueError):
        cyclotomic(0)


@given(int_matrices(rows=st.just(3), cols=st.just(3)))
def test_charpoly_matches_sympy(M):
    oracle = sympy.Matrix(M.tolist()).charpoly(x).all_coeffs()
    assert charpoly(M) == [int(c) for c in oracle]


def test_orders():
    S = IntMatrix([[0, 1], [-1, 0]])
    assert matrix_order(S) == 4 and format_order(matrix_order(S)) == "4"
    T = IntMatrix([[1, 1], [0, 1]])
    assert matrix_order(T) is None and format_order(None) == "inf"
    assert quasi_unipotent_exponent(-T) == 2
    assert quasi_unipotent_exponent(IntMatrix([[2, 1], [1, 1]])) is None


@settings(max_examples=25)
@given(sl2_tuples(min_r=3, max_r=4), st.data())
def test_split_is_idempotent(t, data):
    k = data.draw(st.integers(0, t.r - 1))
    module = parabolic_cohomology(twist_tuple(t, k, 0), check=False)
    assume(module.rank > 0)
    Q = gram_on_W(PairingContext(module, SYMPLECTIC_J))
    assume(Q.matrix.det() != 0)
    mats = [eta(module, w, IntMatrix.identity(2)) for w in canonical_braids(t.r)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        first = split(Q, mats)
        assume(first.T.rank > 0 and first.T_gram.matrix.det() != 0)
        second = split(first.T_gram, first.T_monodromy)
    assert second.T == Sublattice.full(first.T.rank)
    assert second.T_monodromy == first.T_monodromy
    if first.hypothesis_holds:
        assert second.fixed.rank == 0


def test_split_needs_nondegenerate_form():
    with pytest.raises(LatticeError):
        split(GramForm(IntMatrix([[0, 0], [0, 0]])), [])


def test_split_warns_when_hypothesis_fails():
    # the invariant line is spanned by e1, which is isotropic and so lies in its own complement
    Q = GramForm(IntMatrix([[0, 1], [1, 0]]))
    M = IntMatrix([[1, 0], [1, 1]])
    with pytest.warns(UserWarning):
        res = split(Q, [M])
    assert not res.hypothesis_holds


def test_restrict_to_requires_invariance():
    L = Sublattice.from_generators(2, [[1, 0]])
    with pytest.raises(LatticeError):
        restrict_to(L, IntMatrix([[0, 1], [1, 0]]))


def test_fix_signs():
    Q = GramForm(IntMatrix([[2, 0], [0, 2]]))
    one = IntMatrix.identity(2)
    assert fix_signs(Q, [one], [-2], with_infinity=False).signs == (-1,)
    # without a target the larger invariant part wins
    assert fix_signs(Q, [one], [None], with_infinity=False).signs == (1,)
    R = IntMatrix([[0, 1], [-1, 0]])
    with pytest.raises(LatticeError, match="2 sign choices"):
        fix_signs(Q, [R, R], [0, 0, -2])
    with pytest.raises(LatticeError, match="no sign choice"):
        fix_signs(Q, [R], [5, None])
    with pytest.raises(ValueError):
        fix_signs(Q, [R], [0])


def test_invariant_report_and_verdicts():
    Q = GramForm(IntMatrix([[-2, 1], [1, -2]]))
    rep = invariant_report(Q, [IntMatrix.identity(2)])
    assert rep["det"] == 3 and rep["disc"] == [3] and rep["orders"] == ["1"]
    assert invariant_report(GramForm(IntMatrix([], cols=0)), [])["rank"] == 0
    assert forms_plausibly_equivalent(Q, GramForm(IntMatrix([[-2, -1], [-1, -2]])))
    v = forms_plausibly_equivalent(Q, GramForm(IntMatrix([[2, 1], [1, 2]])))
    assert not v and "signature" in str(v)
    assert "rank" in forms_plausibly_equivalent(Q, GramForm(IntMatrix([[1]]))).reason
