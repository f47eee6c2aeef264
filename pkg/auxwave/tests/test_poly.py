import numpy as np
import pytest

from auxwave.exceptions import NotPolynomialError
from auxwave.expr import ONE, XI, ZERO, Symbol, add, apply, expand, mul, power
from auxwave.numeric import equal_numeric
from auxwave.parser import parse
from auxwave.poly import poly_collect
from auxwave.tests.generators import A, random_constant

Z = Symbol("z")


def test_collects_coefficients():
    p = poly_collect(parse("(A*z + B)^2 + sin(xi)*z"), Z)
    assert p.degree == 2
    assert p.coefficient(0) == parse("B^2")
    assert p.coefficient(1) == parse("2*A*B + sin(xi)")
    assert p.coefficient(2) == parse("A^2")
    assert p.coefficient(5) == ZERO


def test_reconstruct_matches_expansion():
    e = parse("(g0 + g1*z + g2*z^2)*(A*z + B*z^2) - c*z")
    assert poly_collect(e, Z).reconstruct() == expand(e)


def test_padding_and_cancellation():
    p = poly_collect(parse("z^3 - z^3 + 1"), Z)
    assert p.degree == 0
    assert p.padded(2) == (parse("1"), ZERO, ZERO)
    assert poly_collect(ZERO, Z).coefficients == ()


@pytest.mark.parametrize("text", ["1/z", "exp(z)", "z^(1/2)", "sin(z)*z"])
def test_rejects_non_polynomials(text):
    with pytest.raises(NotPolynomialError):
        poly_collect(parse(text), Z)


def _random_poly(rng, degree):
    atoms = (ONE, A, apply("sin", XI), apply("exp", XI))
    return add(
        *(
            mul(random_constant(rng), atoms[int(rng.integers(len(atoms)))], power(Z, k))
            for k in range(degree + 1)
        )
    )


@pytest.mark.parametrize("seed", range(20))
def test_collect_random_products(seed):
    rng = np.random.default_rng(seed)
    d1 = int(rng.integers(0, 5))
    d2 = int(rng.integers(0, 9 - d1))
    e = mul(_random_poly(rng, d1), _random_poly(rng, d2))
    p = poly_collect(e, Z)
    assert p.degree == d1 + d2
    assert p.reconstruct() == expand(e)
    samples = {
        "z": rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20),
        "xi": rng.uniform(-1, 1, 20),
        "A": 0.7,
    }
    assert equal_numeric(p.reconstruct(), e, samples)
