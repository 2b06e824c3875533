import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spbw import rings
from spbw.errors import (
    BadParameter,
    LeibnizViolation,
    NotBijective,
    NotMultiplicative,
    PolynomialBackendUnsupported,
    TableNotARing,
)


def gf4_oracle_mul(a, b):
    """Independent GF(4) product: base-2 digit polynomials mod (t^2+t+1, 2)."""
    da = [a & 1, a >> 1]
    db = [b & 1, b >> 1]
    prod = [0, 0, 0]
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] ^= x & y
    # t^2 = t + 1
    prod[0] ^= prod[2]
    prod[1] ^= prod[2]
    return prod[0] | (prod[1] << 1)


def test_zmod4_basics():
    R = rings.zmod(4)
    assert R.size == 4 and R.zero == 0 and R.one == 1
    assert R.mul(2, 2) == 0
    assert R.add(3, 3) == 2
    assert R.is_unit(3) and not R.is_unit(2)


def test_product_ring_componentwise():
    R = rings.product_ring([rings.zmod(2), rings.zmod(2)])
    assert R.size == 4
    one0 = R.names.index("(1,0)")
    zero1 = R.names.index("(0,1)")
    assert R.mul(one0, zero1) == R.zero


def test_gf4_against_reduction_oracle():
    R = rings.galois_field(2, 2)
    for a in range(4):
        for b in range(4):
            assert R.mul(a, b) == gf4_oracle_mul(a, b)
    t = 2
    assert R.mul(t, t) == 3  # t^2 = t + 1


def test_gf_rejects_reducible_modulus():
    with pytest.raises(BadParameter):
        rings.galois_field(2, 2, poly=[0, 0, 1])  # t^2 is reducible


def test_table_ring_validation_reports_witness():
    # corrupt associativity of multiplication in Z/3
    add = [[(a + b) % 3 for b in range(3)] for a in range(3)]
    mul = [[(a * b) % 3 for b in range(3)] for a in range(3)]
    mul[2][2] = 2  # 2*2 = 2 breaks associativity/distributivity
    with pytest.raises(TableNotARing):
        rings.FiniteRing(add, mul)


def test_poly_ring_exact_arithmetic():
    R = rings.build_poly_ring({"kind": "q"}, ["y"])
    y = R.gen("y")
    sq = R.mul(R.add(y, R.one), R.add(y, R.one))
    assert R.render(sq) == "y^2 + 2*y + 1"
    G = rings.build_poly_ring({"kind": "gf", "p": 3}, ["y"])
    three_y = G.add(G.mul(G.from_int(2), G.gen("y")), G.gen("y"))
    assert G.is_zero(three_y)
    T = rings.build_poly_ring({"kind": "q"}, ["t1", "t2"])
    assert T.mul(T.gen("t1"), T.gen("t2")) == T.mul(T.gen("t2"), T.gen("t1"))


def test_poly_ring_rejects_duplicates_and_empty():
    with pytest.raises(rings.DuplicateVariable):
        rings.build_poly_ring({"kind": "q"}, ["y", "y"])
    with pytest.raises(BadParameter):
        rings.build_poly_ring({"kind": "q"}, [])


def test_poly_parse_render_roundtrip():
    R = rings.build_poly_ring({"kind": "q"}, ["y"])
    for text in ("2*y + 1", "1/2*y^3 - y", "y^2 - 2"):
        assert R.parse(R.render(R.parse(text))) == R.parse(text)


def test_ring_map_validation_and_flags():
    R = rings.product_ring([rings.zmod(2), rings.zmod(2)])
    swap = rings.validate_ring_map(R, [0, 2, 1, 3])
    assert swap.injective and swap.bijective
    Z4 = rings.zmod(4)
    ident = rings.validate_ring_map(Z4, {"identity": True})
    assert ident.bijective
    with pytest.raises(NotMultiplicative):
        rings.validate_ring_map(R, [0, 3, 1, 2])  # additive but not multiplicative


def test_ring_map_exhaustive_laws(finite_fixtures):
    for fix in finite_fixtures:
        R = fix.ring
        m = fix.extension.sigmas[0]
        for a in R.elements():
            for b in R.elements():
                assert m(R.add(a, b)) == R.add(m(a), m(b))
                assert m(R.mul(a, b)) == R.mul(m(a), m(b))
        assert m(R.one) == R.one


def test_frobenius_inverse_is_itself():
    F4 = rings.galois_field(2, 2)
    frob = rings.validate_ring_map(F4, [F4.mul(a, a) for a in range(4)])
    inv = rings.invert_ring_map(frob)
    assert inv.table == frob.table  # a^4 = a in GF(4)
    for a in range(4):
        assert inv(frob(a)) == a and frob(inv(a)) == a


def test_invert_requires_bijective_and_finite():
    Z4 = rings.zmod(4)
    with pytest.raises(NotBijective):
        rings.invert_ring_map(rings.RingMap.unchecked(Z4, table=[0, 0, 0, 0]))
    Qy = rings.build_poly_ring({"kind": "q"}, ["y"])
    with pytest.raises(PolynomialBackendUnsupported):
        rings.invert_ring_map(rings.RingMap.identity(Qy))


def test_derivation_validation():
    Z4 = rings.zmod(4)
    ident = rings.RingMap.identity(Z4)
    zero = rings.SigmaDerivation.zero(ident)
    assert zero.is_zero_map()
    # delta(1) must be 0; a constant-1 table breaks the product rule
    with pytest.raises(LeibnizViolation):
        rings.SigmaDerivation(ident, table=[1, 1, 1, 1])


def test_poly_derivation_examples():
    Qy = rings.build_poly_ring({"kind": "q"}, ["y"])
    ident = rings.RingMap.identity(Qy)
    ddy = rings.validate_sigma_derivation(Qy, ident, {"values": {"y": "1"}})
    assert Qy.render(ddy(Qy.parse("y^2"))) == "2*y"
    twist = rings.RingMap(Qy, images={"y": "2*y"})
    skew = rings.validate_sigma_derivation(Qy, twist, {"values": {"y": "1"}})
    assert Qy.render(skew(Qy.parse("y^2"))) == "3*y"


def test_twisted_leibniz_exhaustive(finite_fixtures):
    for fix in finite_fixtures:
        R = fix.ring
        s = fix.extension.sigmas[0]
        d = fix.extension.deltas[0]
        for a in R.elements():
            for b in R.elements():
                assert d(R.mul(a, b)) == R.add(R.mul(s(a), d(b)), R.mul(d(a), b))


def test_ideal_generate_examples():
    Z4 = rings.zmod(4)
    assert rings.ideal_generate(Z4, [2]).elements == frozenset([0, 2])
    assert rings.ideal_generate(Z4, []).elements == frozenset([0])
    R = rings.product_ring([rings.zmod(2), rings.zmod(2)])
    one0 = R.names.index("(1,0)")
    assert rings.ideal_generate(R, [one0]).elements == frozenset([R.zero, one0])


@given(st.sets(st.integers(min_value=0, max_value=5), max_size=4))
@settings(max_examples=60, deadline=None)
def test_ideal_generate_idempotent(gens):
    R = rings.zmod(6)
    first = rings.ideal_generate(R, gens)
    again = rings.ideal_generate(R, first.elements)
    assert first.elements == again.elements


def test_ideal_set_rejects_non_ideals():
    Z4 = rings.zmod(4)
    with pytest.raises(BadParameter):
        rings.IdealSet(Z4, frozenset([0, 1]), "right")  # 1*2 = 2 escapes


def test_polynomial_backend_refuses_enumeration():
    Qy = rings.build_poly_ring({"kind": "q"}, ["y"])
    with pytest.raises(PolynomialBackendUnsupported):
        rings.ideal_generate(Qy, [])


def test_right_ideal_lattice_of_z4():
    Z4 = rings.zmod(4)
    lattice = rings.all_right_ideals(Z4)
    assert [sorted(s) for s in lattice] == [[0], [0, 2], [0, 1, 2, 3]]
