import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spbw import rings
from spbw.errors import (
    AssociativityFailure,
    NonInjectiveSigma,
    RewriteFuelExhausted,
    ZeroDij,
)
from spbw.extension import (
    MonomialOrder,
    build_extension,
    mono_deg,
    monomials_upto,
)
from spbw.modules import skew_polys_upto

exponents = st.tuples(*[st.integers(min_value=0, max_value=6)] * 3)


@given(exponents, exponents, exponents, st.sampled_from(["deglex", "degrevlex", "lex"]))
@settings(max_examples=200, deadline=None)
def test_orders_are_multiplication_compatible(a, b, g, tag):
    order = MonomialOrder.natural(tag, 3)
    shift = lambda m: tuple(x + y for x, y in zip(m, g))
    assert (order.key(a) <= order.key(b)) == (order.key(shift(a)) <= order.key(shift(b)))


def test_order_tables_match_known_rankings():
    # three variables with x3 biggest; classic deglex vs degrevlex split
    deglex = MonomialOrder.natural("deglex", 3)
    degrevlex = MonomialOrder.natural("degrevlex", 3)
    x2 = (0, 0, 2)
    xy = (0, 1, 1)
    xz = (1, 0, 1)
    y2 = (0, 2, 0)
    assert deglex.sorted_desc([x2, xy, xz, y2]) == [x2, xy, xz, y2]
    assert degrevlex.sorted_desc([x2, xy, xz, y2]) == [x2, xy, y2, xz]
    one = (0, 0, 0)
    for order in (deglex, degrevlex):
        assert all(order.key(one) <= order.key(m) for m in monomials_upto(3, 3))


def test_quantum_plane_two_step_rewrite():
    G3 = rings.zmod(3)
    ident = rings.RingMap.identity(G3)
    qp = build_extension(G3, 2, [ident, ident], d_coeffs={(0, 1): 2}, var_names=["y", "x"])
    x, y = qp.variable(1), qp.variable(0)
    assert qp.render(qp.multiply(x, y)) == "2*y*x"
    assert qp.render(qp.multiply(qp.multiply(x, y), y)) == "y^2*x"
    # oracle: q^2 = 4 = 1 mod 3, so x y^2 = y^2 x exactly
    d, p = qp.expand_pow_pow((0, 1), (1, 0))
    assert d == 2 and p.is_zero()
    d0, p0 = qp.expand_pow_pow((0, 0), (1, 1))
    assert d0 == G3.one and p0.is_zero()


def test_multiply_identity_and_bilinearity(fix1):
    A = fix1.extension
    polys = skew_polys_upto(A, 2)
    one = A.one_poly()
    for f in polys[:20]:
        assert A.multiply(one, f) == f
        assert A.multiply(f, one) == f
    f, g, h = polys[7], polys[23], polys[41]
    assert A.multiply(f, g + h) == A.multiply(f, g) + A.multiply(f, h)
    assert A.multiply(f + g, h) == A.multiply(f, h) + A.multiply(g, h)


def test_expand_pow_scalar_examples(fix1, fix3):
    A = fix1.extension
    one0 = fix1.ring.names.index("(1,0)")
    lead, rest = A.expand_pow_scalar((2,), one0)
    assert lead == one0 and rest.is_zero()  # swap twice is the identity
    lead, rest = A.expand_pow_scalar((0,), one0)
    assert lead == one0 and rest.is_zero()
    D = fix3.extension
    y = fix3.ring.gen("y")
    lead, rest = D.expand_pow_scalar((1,), y)
    assert fix3.ring.render(lead) == "2*y"
    assert D.render(rest) == "1"


def test_expand_pow_scalar_structure(finite_fixtures):
    for fix in finite_fixtures:
        A = fix.extension
        for alpha in [(k,) for k in range(4)]:
            for r in fix.ring.nonzero_elements():
                lead, rest = A.expand_pow_scalar(alpha, r)
                assert lead == A.sigma_power(alpha, r)
                assert rest.is_zero() or rest.degree() < mono_deg(alpha)
                full = A.multiply(A.monomial(alpha), A.scalar(r))
                assert full == A.monomial(alpha, lead) + rest


def test_expand_pow_pow_invertible_on_bijective(fix1):
    A = fix1.extension
    for a in range(3):
        for b in range(3):
            d, p = A.expand_pow_pow((a,), (b,))
            assert fix1.ring.is_unit(d)
            assert p.is_zero() or p.degree() < a + b


def test_leading_and_sentinel(fix3):
    D = fix3.extension
    f = D.parse("x*y")  # 2*y*x + 1
    lm, lc, lt = D.leading(f)
    assert lm == (1,) and fix3.ring.render(lc) == "2*y" and lt == (lm, lc)
    zlm, zlc, zlt = D.leading(D.zero_poly())
    assert zlm is None and fix3.ring.is_zero(zlc) and zlt is None
    r = D.scalar(fix3.ring.one)
    assert D.leading(r)[0] == (0,)


def test_degree_bound_on_products(fix1):
    A = fix1.extension
    polys = skew_polys_upto(A, 2)
    for f in polys[1:32]:
        for g in polys[1:32]:
            prod = A.multiply(f, g)
            if not prod.is_zero():
                assert prod.degree() <= f.degree() + g.degree()


def test_quasi_commutative_expansion_has_no_tail(fix1):
    # quasi-commutative flag means scalars commute past monomials exactly
    A = fix1.extension
    assert A.flags.quasi_commutative
    for alpha in [(k,) for k in range(4)]:
        for r in fix1.ring.nonzero_elements():
            _, rest = A.expand_pow_scalar(alpha, r)
            assert rest.is_zero()


def test_classification_flags(fix1, fix2, fix3):
    assert sorted(fix2.extension.flags.as_set()) == [
        "bijective", "derivation-type", "endomorphism-type", "quasi-commutative",
    ]
    assert sorted(fix1.extension.flags.as_set()) == [
        "bijective", "endomorphism-type", "quasi-commutative",
    ]
    assert sorted(fix3.extension.flags.as_set()) == ["bijective"]


def test_build_rejects_bad_data():
    Z4 = rings.zmod(4)
    square = rings.RingMap.unchecked(Z4, table=[Z4.mul(a, a) for a in range(4)])
    with pytest.raises(NonInjectiveSigma):
        build_extension(Z4, 1, [square])
    G3 = rings.zmod(3)
    ident = rings.RingMap.identity(G3)
    with pytest.raises(ZeroDij):
        build_extension(G3, 2, [ident, ident], d_coeffs={(0, 1): 0})


def test_corrupted_sigma_fails_associativity_at_build():
    R = rings.product_ring([rings.zmod(2), rings.zmod(2)])
    # bijective on ids but not a ring homomorphism
    corrupt = rings.RingMap.unchecked(R, table=[0, 1, 3, 2])
    with pytest.raises(AssociativityFailure) as err:
        build_extension(R, 1, [corrupt])
    assert err.value.witness is not None


def test_exhaustive_associativity_passes(finite_fixtures):
    for fix in finite_fixtures:
        report = fix.extension.check_associativity("exhaustive")
        assert report["witness"] is None
        assert report["triples_checked"] == (2 * (fix.ring.size - 1)) ** 3


def test_association_orders_agree_exhaustively(fix2):
    A = fix2.extension
    polys = [f for f in skew_polys_upto(A, 1) if not f.is_zero()]
    for f, g, h in itertools.product(polys[:8], polys[:8], polys[:8]):
        assert A.multiply(A.multiply(f, g), h) == A.multiply(f, A.multiply(g, h))


def test_fuel_exhaustion_is_typed():
    Z4 = rings.zmod(4)
    ext = build_extension(Z4, 1, [rings.RingMap.identity(Z4)], fuel=3, assoc_sample=0)
    f = ext.monomial((6,))
    with pytest.raises(RewriteFuelExhausted):
        ext.multiply(f, ext.scalar(3))


def test_parse_precedence_and_ids(fix2):
    A = fix2.extension
    assert A.render(A.parse("2*x^2 + 3*x + 1")) == "2*x^2 + 3*x + 1"
    assert A.render(A.parse("-x + x")) == "0"
    assert A.render(A.parse("#3*x")) == "3*x"
    assert A.render(A.parse("(1 + x)*(1 + x)")) == "x^2 + 2*x + 1"


def test_canonical_iteration_is_descending(fix2):
    A = fix2.extension
    f = A.parse("1 + x + x^2")
    assert [m for m, _ in f.items()] == [(2,), (1,), (0,)]
