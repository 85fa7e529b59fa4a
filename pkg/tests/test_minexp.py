"""Minimal exponents, nearby-cycle Hodge tables, and the vanishing checks."""

from fractions import Fraction as F

import pytest

from minexp_lab.cli import catalog
from minexp_lab.divisors import jump_candidates
from minexp_lab.minexp import (
    cor23_check,
    cor24_check,
    lct_consistency,
    minexp_monomial,
    psi_hodge_dim,
)
from minexp_lab.rationals import INF, Infinity, InputError
from minexp_lab.vfilt import TruncationBox
from minexp_lab.weyl import MonomialModel

Y2 = MonomialModel(1, [2])
Y3 = MonomialModel(1, [3])
Y11 = MonomialModel(2, [1, 1])
BOX1 = TruncationBox.radius(1, 4)
BOX2 = TruncationBox.radius(2, 4)


def test_minexp_examples():
    assert minexp_monomial(Y11).value == 1
    assert minexp_monomial(MonomialModel(1, [1])).value == INF
    assert minexp_monomial(Y2).value == F(1, 2)
    assert minexp_monomial(MonomialModel(2, [2, 3])).value == F(1, 3)
    with pytest.raises(InputError):
        minexp_monomial(Y2, p_max=0)


def test_minexp_witness_invariant():
    res = minexp_monomial(MonomialModel(2, [2, 3]))
    sup = max(
        (w["p"] + F(w["alpha"]) for w in res.witness if w["member"]), default=F(0)
    )
    assert res.value == sup
    # membership is monotone: if dy dt^p delta lies in V_{-alpha} then so do
    # all lower dt-orders (the whole Hodge piece sits inside)
    by_alpha = {}
    for w in res.witness:
        by_alpha.setdefault(w["alpha"], {})[w["p"]] = w["member"]
    for verdicts in by_alpha.values():
        for p in sorted(verdicts):
            if verdicts[p]:
                assert all(verdicts[q] for q in range(0, p))


def test_minexp_catalog_formula():
    # singular monomials: minexp = min_i 1/a_i; the smooth model: INF
    for model in catalog():
        value = minexp_monomial(model).value
        if model.smooth:
            assert isinstance(value, Infinity)
        else:
            assert value == min(F(1, a) for a in model.a)


def test_lct_consistency_examples():
    assert lct_consistency(Y11)["status"] == "PASS"
    assert lct_consistency(Y3)["status"] == "PASS"
    assert lct_consistency(MonomialModel(1, [1]))["status"] == "PASS"


def test_psi_hodge_dim_examples():
    t = psi_hodge_dim(1, F(1, 2), BOX1, Y2)
    assert t.dims == {(0,): 1}
    assert psi_hodge_dim(0, F(1, 2), BOX1, Y2).is_zero()
    assert psi_hodge_dim(1, F(1, 4), BOX1, Y3).is_zero()
    with pytest.raises(InputError):
        psi_hodge_dim(1, F(5, 4), BOX1, Y2)
    with pytest.raises(InputError):
        psi_hodge_dim(1, 0, BOX1, Y2)


def test_psi_zero_off_candidates():
    for model in [Y2, Y3, MonomialModel(2, [2, 3])]:
        cands = set(jump_candidates(model.divisor(), 0, 1))
        box = TruncationBox.radius(model.n, 3)
        for k in range(1, 13):
            alpha = F(k, 12)
            if alpha in cands:
                continue
            for p in range(0, 4):
                assert psi_hodge_dim(p, alpha, box, model).is_zero()


def test_cor23_examples():
    # g=y^2, p=0, alpha=1/2: Gr^F_1 psi = O/(y), dim 1 at degree 0;
    # nonvanishing is consistent because minexp = 1/2 is not > 1/2
    rep = cor23_check(Y2, 0, F(1, 2), BOX1)
    assert rep["status"] == "PASS"
    t = psi_hodge_dim(1, F(1, 2), BOX1, Y2)
    assert t.dims == {(0,): 1}
    # g=y^3, p=0, alpha=1/4: vanishing detects 1/3 > 1/4
    rep = cor23_check(Y3, 0, F(1, 4), BOX1)
    assert rep["status"] == "PASS"
    assert psi_hodge_dim(1, F(1, 4), BOX1, Y3).is_zero()
    # g=y1y2, p=0, alpha=1/2: vanishing detects 1 > 1/2
    rep = cor23_check(Y11, 0, F(1, 2), BOX2)
    assert rep["status"] == "PASS"
    assert psi_hodge_dim(1, F(1, 2), BOX2, Y11).is_zero()
    with pytest.raises(InputError):
        cor23_check(Y2, 0, F(1), BOX1)
    with pytest.raises(InputError):
        cor23_check(Y2, -1, F(1, 2), BOX1)


def test_cor24_examples():
    rep = cor24_check(Y2, 0, F(1, 2), BOX1)
    assert rep["status"] == "PASS"
    rep = cor24_check(Y11, 0, F(1, 2), BOX2)
    assert rep["status"] == "PASS"
    rep = cor24_check(Y3, 0, F(1, 3), BOX1)
    assert rep["status"] == "PASS"
    with pytest.raises(InputError):
        cor24_check(Y2, 1, F(1, 2), BOX1)  # hypothesis minexp >= 1 fails


def test_cor23_nontrivial_colon_ideal_shape():
    # for g = y1^2 y2^3 at alpha = 1/3 the colon ideal is (y2): check a few
    # degrees of the table against the expected monomial pattern
    model = MonomialModel(2, [2, 3])
    t = psi_hodge_dim(1, F(1, 3), BOX2, model)
    # classes h dt^0 delta with y2 not dividing h: degrees (k, 0)
    assert t.get((0, 0)) == 1 and t.get((3, 0)) == 1
    assert t.get((0, 1)) == 0 and t.get((1, 2)) == 0
