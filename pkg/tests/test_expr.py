from fractions import Fraction

import pytest

from weyl_spectra.expr import parse_polynomial

XS = ("x1", "x2", "x3")


def test_parse_and_evaluate():
    f = parse_polynomial("x1^2 - x2^2 + x3^2", XS)
    assert f([1.0, 2.0, 3.0]) == 6.0
    g = parse_polynomial("1/2*x1*x2^2 + 3 - 0.25*x3", XS)
    assert g([2.0, 3.0, 4.0]) == pytest.approx(9 + 3 - 1)


def test_partials():
    f = parse_polynomial("x1^3*x2 - 2*x2^2", XS)
    assert str(f.partial(0)) == "3*x1^2*x2"
    assert f.partial(1)([1.0, 1.0, 0.0]) == pytest.approx(1 - 4)
    assert f.hessian_at([1.0, 2.0, 0.0]) == [[12.0, 3.0, 0.0], [3.0, -4.0, 0.0], [0.0, 0.0, 0.0]]


def test_like_terms_combine():
    f = parse_polynomial("x1 + x1 - 2*x1", XS)
    assert f.terms == ()
    g = parse_polynomial("3/4*x2 + 1/4*x2", XS)
    assert g.terms == (((0, 1, 0), Fraction(1)),)


@pytest.mark.parametrize("text", ["", "x4^2", "x1^^2", "x1 + * x2", "sin(x1)", "x1 +"])
def test_rejects_bad_input(text):
    with pytest.raises(ValueError):
        parse_polynomial(text, XS)
