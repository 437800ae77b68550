"""Core arithmetic, term encoding, presentations and their validation."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmreg import (
    FieldSpec,
    FreeModule,
    Polynomial,
    Vector,
    hilbert_function,
    ideal_to_cyclic_module,
    make_presentation,
    make_ring,
    ring_as_module,
    twist,
)
from cmreg.errors import (
    NonHomogeneousRelation,
    RingMismatch,
    UnsupportedRing,
)
from cmreg.hilbert import graded_dim_oracle
from cmreg.ring import Monomial, count_monomials, monomials_of_degree


def test_field_requires_prime():
    FieldSpec(2)
    FieldSpec(32003)
    with pytest.raises(UnsupportedRing):
        FieldSpec(32001)  # 3 * 10667
    with pytest.raises(UnsupportedRing):
        FieldSpec(1)


def test_field_arithmetic():
    f = FieldSpec(7)
    assert f.normalize(-1) == 6
    assert f.inv(3) == 5
    assert f.neg(2) == 5


def test_ring_validation():
    with pytest.raises(UnsupportedRing):
        make_ring(("x", "x"))
    with pytest.raises(UnsupportedRing):
        make_ring(("x", "2y"))
    with pytest.raises(UnsupportedRing):
        make_ring(tuple(f"v{i}" for i in range(12)))


def test_degrevlex_key_order():
    r = make_ring(("x", "y", "z"))
    lay = r.layout
    order = ["x^2", "xy", "y^2", "xz", "yz", "z^2"]
    keys = [
        lay.encode(e)
        for e in ((2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2))
    ]
    assert keys == sorted(keys, reverse=True), order


def test_component_tiebreak_prefers_lower_index():
    r = make_ring(("x", "y"))
    k0 = r.layout.encode((1, 0), comp=0)
    k1 = r.layout.encode((1, 0), comp=1)
    assert k0 > k1


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=2, max_size=4), st.integers(0, 50))
def test_encode_decode_roundtrip(exps, comp):
    r = make_ring(tuple("abcd"[: len(exps)]))
    key = r.layout.encode(exps, comp)
    assert r.layout.exponents(key) == tuple(exps)
    assert r.layout.component(key) == comp
    assert r.layout.mono_degree(key) == sum(exps)


def test_monomial_multiplication_is_key_delta():
    r = make_ring(("x", "y", "z"))
    lay = r.layout
    key = lay.encode((1, 2, 0), comp=3)
    assert key + lay.delta((2, 0, 1)) == lay.encode((3, 2, 1), comp=3)


@given(st.integers(1, 4), st.integers(0, 8))
def test_monomial_enumeration_count(n, d):
    monos = list(monomials_of_degree(n, d))
    assert len(monos) == count_monomials(n, d)
    assert len(set(monos)) == len(monos)
    assert all(sum(m) == d for m in monos)


def test_polynomial_arithmetic_and_str():
    r = make_ring(("x", "y"))
    x, y = Polynomial.variable(r, 0), Polynomial.variable(r, 1)
    q = (x + y) * (x - y)
    assert q == x * x - y * y
    assert str(x * x + 3 * x * y) == "x^2 + 3*x*y"
    assert str(Polynomial.zero(r)) == "0"
    assert (x - x).is_zero()
    assert q.degree() == 2 and q.is_homogeneous()
    assert not (x * x + y).is_homogeneous()


def test_ring_mismatch_rejected():
    r1 = make_ring(("x", "y"))
    r2 = make_ring(("x", "y"), p=101)
    with pytest.raises(RingMismatch):
        Polynomial.variable(r1, 0) + Polynomial.variable(r2, 0)


def test_make_presentation_valid(R2, xy):
    x, y = xy
    m = make_presentation(FreeModule(R2, (0,)), [(x * x).as_vector(), (x * y).as_vector()])
    assert len(m.relations) == 2
    assert m.relation_degrees() == (2, 2)


def test_make_presentation_rejects_inhomogeneous(R2, xy):
    x, y = xy
    with pytest.raises(NonHomogeneousRelation) as exc:
        make_presentation(FreeModule(R2, (0,)), [(x * x + y).as_vector()])
    assert exc.value.column == 0
    assert exc.value.degrees == (1, 2)


def test_twists_enter_homogeneity(R2, xy):
    x, y = xy
    amb = FreeModule(R2, (0, 1))
    v = Vector.from_polys([x * y, x])  # degrees 2 and 1+1: homogeneous
    make_presentation(amb, [v])
    bad = Vector.from_polys([x * y, x * y])
    with pytest.raises(NonHomogeneousRelation):
        make_presentation(amb, [bad])


def test_zero_columns_dropped(R2):
    m = make_presentation(FreeModule(R2, (0,)), [Vector.zero(R2)])
    assert m.relations == ()


def test_rank_zero_module(R2):
    m = make_presentation(FreeModule(R2, ()), [])
    assert all(hilbert_function(m, i) == 0 for i in range(-3, 6))


def test_twist_examples(R2, M_x2_xy):
    r = ring_as_module(R2)
    assert hilbert_function(twist(r, 2), 2) == 1
    assert hilbert_function(twist(r, 2), 1) == 0
    back = twist(twist(M_x2_xy, 3), -3)
    assert back.ambient.twists == M_x2_xy.ambient.twists
    for i in range(-4, 9):
        assert hilbert_function(twist(M_x2_xy, 1), i) == graded_dim_oracle(M_x2_xy, i - 1)


def test_ideal_to_cyclic_module(R3):
    x, y, z = (Polynomial.variable(R3, i) for i in range(3))
    point = ideal_to_cyclic_module(R3, [x, y, z])
    assert [hilbert_function(point, i) for i in range(4)] == [1, 0, 0, 0]
    whole = ideal_to_cyclic_module(R3, [])
    assert [hilbert_function(whole, i) for i in range(3)] == [1, 3, 6]


def test_ideal_to_cyclic_hilbert_oracle(R2, xy):
    x, y = xy
    m = ideal_to_cyclic_module(R2, [x * x, y ** 3])
    assert [graded_dim_oracle(m, i) for i in range(6)] == [1, 2, 2, 1, 0, 0]


def test_monomial_type():
    mono = Monomial((2, 1), component=3)
    assert mono.degree == 3


def test_vector_component_split(R2, xy):
    x, y = xy
    v = Vector.from_polys([x * y + y * y, x * x])
    parts = dict(v.component_split())
    assert parts[0] == x * y + y * y
    assert parts[1] == x * x
    assert v.entry(1) == x * x
