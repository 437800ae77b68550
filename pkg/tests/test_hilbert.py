"""Hilbert series, function, polynomial, postulation number, and the
brute-force oracle they are all checked against."""

from fractions import Fraction

import pytest

from cmreg import (
    NEG_INF,
    Polynomial,
    hilbert_function,
    hilbert_polynomial,
    hilbert_series,
    ideal_to_cyclic_module,
    krull_dim,
    make_ring,
    postulation_number,
    ring_as_module,
)
from cmreg.corpus import Recipe, random_module, seeded_stream
from cmreg.errors import WindowExceeded
from cmreg.hilbert import graded_dim_oracle


def test_series_of_free_ring(R3):
    hs = hilbert_series(ring_as_module(R3))
    assert hs.numerator == ((0, 1),)
    assert hs.dim == 3


def test_series_x2_xy(M_x2_xy):
    hs = hilbert_series(M_x2_xy)
    assert hs.numerator == ((0, 1), (1, 1), (2, -1))
    assert hs.dim == 1


def test_series_finite_length(R2, xy):
    x, y = xy
    m = ideal_to_cyclic_module(R2, [x * x, y ** 3])
    hs = hilbert_series(m)
    assert hs.numerator == ((0, 1), (1, 2), (2, 2), (3, 1))
    assert hs.dim == 0


def test_hilbert_function_examples(R3, M_x2_xy, R2):
    assert hilbert_function(ring_as_module(R3), 2) == 6
    assert hilbert_function(M_x2_xy, 5) == 1
    zero = ideal_to_cyclic_module(R2, [Polynomial.constant(R2, 1)])
    assert all(hilbert_function(zero, i) == 0 for i in range(-3, 5))


def test_hilbert_polynomial_examples(R2, M_x2_xy, xy):
    x, y = xy
    p_free = hilbert_polynomial(ring_as_module(R2))
    assert [p_free(i) for i in (0, 1, 5, -2)] == [1, 2, 6, -1]
    p_m = hilbert_polynomial(M_x2_xy)
    assert p_m.coeffs == (Fraction(1),)
    assert hilbert_polynomial(ideal_to_cyclic_module(R2, [x * x, y ** 3])).is_zero()


def test_postulation_examples(R3, M_x2_xy, R2, xy):
    x, y = xy
    assert postulation_number(ring_as_module(R3)) == -3
    assert postulation_number(M_x2_xy) == 1
    assert postulation_number(ideal_to_cyclic_module(R2, [x * x, y ** 3])) == 3
    zero = ideal_to_cyclic_module(R2, [Polynomial.constant(R2, 1)])
    assert postulation_number(zero) == NEG_INF


def test_postulation_characterizes_h_vs_p(M_x2_xy):
    alpha = postulation_number(M_x2_xy)
    p = hilbert_polynomial(M_x2_xy)
    assert hilbert_function(M_x2_xy, alpha) != p(alpha)
    for i in range(alpha + 1, alpha + 6):
        assert hilbert_function(M_x2_xy, i) == p(i)


def test_alpha_of_free_ring_deeply_negative():
    """alpha(R) = -n needs the polynomial binomial convention at negative
    arguments: H(-n) = 0 but P(-n) = (-1)^(n-1) * something nonzero."""
    for n in (1, 2, 3):
        r = make_ring(tuple("xyzw"[:n]))
        m = ring_as_module(r)
        alpha = postulation_number(m)
        assert alpha == -n
        p = hilbert_polynomial(m)
        assert hilbert_function(m, alpha) == 0
        assert p(alpha) != 0


def test_krull_dim_examples(R3, M_x2_xy, R2):
    assert krull_dim(ring_as_module(R3)) == 3
    assert krull_dim(M_x2_xy) == 1
    zero = ideal_to_cyclic_module(R2, [Polynomial.constant(R2, 1)])
    assert krull_dim(zero) == -1


def test_oracle_examples(R3, M_x2_xy):
    x, y, z = (Polynomial.variable(R3, i) for i in range(3))
    point = ideal_to_cyclic_module(R3, [x, y, z])
    assert graded_dim_oracle(point, 0) == 1
    assert graded_dim_oracle(M_x2_xy, 3) == 1


def test_oracle_window(M_x2_xy):
    with pytest.raises(WindowExceeded):
        graded_dim_oracle(M_x2_xy, 25)


def test_function_matches_oracle_on_random_modules():
    recipe = Recipe()
    for seed in range(12):
        m = random_module(recipe, seeded_stream(seed, 7, 0))
        hs = hilbert_series(m)
        assert sum(c for _, c in hs.numerator) != 0 or not hs.numerator
        for i in range(-5, 11):
            assert hilbert_function(m, i) == graded_dim_oracle(m, i), (seed, i)


def test_h_equals_p_past_alpha_on_random_modules():
    recipe = Recipe(num_vars=2)
    for seed in range(10):
        m = random_module(recipe, seeded_stream(seed, 7, 0))
        alpha = postulation_number(m)
        if alpha == NEG_INF:
            continue
        p = hilbert_polynomial(m)
        assert hilbert_function(m, int(alpha)) != p(int(alpha))
        for i in range(int(alpha) + 1, int(alpha) + 6):
            assert hilbert_function(m, i) == p(i)


def test_postulation_data_invariant(M_x2_xy):
    from cmreg import postulation_data

    data = postulation_data(M_x2_xy)
    assert data.alpha == 1
    assert hilbert_function(M_x2_xy, 1) != data.hilbert_polynomial(1)
    for i in range(2, 7):
        assert hilbert_function(M_x2_xy, i) == data.hilbert_polynomial(i)
