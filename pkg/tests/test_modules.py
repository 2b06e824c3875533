import itertools

import pytest

from spbw import rings
from spbw.errors import BadParameter, ModuleAxiomFailure, SearchSpaceTooLarge
from spbw.extension import build_extension
from spbw.modules import (
    FiniteModule,
    InducedElement,
    SubmoduleSet,
    ann_element,
    build_module,
    coefficient_submodule_elements,
    induce_submodule,
    induced_constant,
    induced_elements_upto,
    induced_from_pairs,
    skew_polys_upto,
    submodule_as_module,
    twisted_module,
)


def test_regular_and_zero_modules(fix2):
    M = FiniteModule.regular(fix2.ring)
    assert M.size == 4 and M.is_regular_over_ring()
    Z = FiniteModule.zero_module(fix2.ring)
    assert Z.size == 1 and Z.zero == 0


def test_line_submodule_as_module(fix1):
    M = FiniteModule.regular(fix1.ring)
    one0 = fix1.ring.names.index("(1,0)")
    N = SubmoduleSet(M, frozenset([M.zero, one0]))
    sub, index = submodule_as_module(N)
    assert sub.size == 2
    assert sub.act(index[one0], fix1.ring.names.index("(0,1)")) == sub.zero


def test_module_axiom_failure_reports_witness(fix2):
    act = [list(row) for row in fix2.ring.mul_table]
    act[1][1] = 2  # 1*1 = 2 breaks unitality
    with pytest.raises(ModuleAxiomFailure):
        build_module(fix2.ring, {"add": fix2.ring.add_table, "act": act})


def test_action_examples(fix1, fix2):
    A1, M1 = fix1.extension, FiniteModule.regular(fix1.ring)
    m = induced_from_pairs(A1, M1, [((1,), 3)])  # (1,1) x
    got = m.act(A1.scalar(2))  # times (1,0)
    assert got.render() == "(0,1)*x"
    A2, M2 = fix2.extension, FiniteModule.regular(fix2.ring)
    m2 = induced_from_pairs(A2, M2, [((0,), 1), ((1,), 2)])  # 1 + 2x
    assert m2.act(A2.scalar(2)).render() == "2"
    assert m2.act(A2.one_poly()) == m2


def test_action_is_associative_exhaustively(finite_fixtures):
    # act(act(m,f),g) == act(m, f*g) across the bounded sweep
    for fix in finite_fixtures:
        A = fix.extension
        M = FiniteModule.regular(fix.ring)
        polys = skew_polys_upto(A, 2)
        sweep = induced_elements_upto(M, A, 2, max_terms=2)
        for m in sweep:
            for f in polys:
                mf = m.act(f)
                for g in polys:
                    assert mf.act(g) == m.act(A.multiply(f, g))


def test_action_additive_in_both_slots(fix1):
    A = fix1.extension
    M = FiniteModule.regular(fix1.ring)
    polys = skew_polys_upto(A, 1)
    els = induced_elements_upto(M, A, 1)[:10]
    for m1, m2 in itertools.combinations(els, 2):
        for f in polys[:8]:
            assert (m1 + m2).act(f) == m1.act(f) + m2.act(f)
    m = els[3]
    for f, g in itertools.combinations(polys[:8], 2):
        assert m.act(f + g) == m.act(f) + m.act(g)


def test_annihilator_examples(fix1, fix2):
    M2 = FiniteModule.regular(fix2.ring)
    m = induced_constant(fix2.extension, M2, 2)
    assert ann_element(M2, m, "R").elements == frozenset([0, 2])
    M1 = FiniteModule.regular(fix1.ring)
    one0 = fix1.ring.names.index("(1,0)")
    m1 = induced_constant(fix1.extension, M1, one0)
    zero1 = fix1.ring.names.index("(0,1)")
    assert ann_element(M1, m1, "R").elements == frozenset([0, zero1])


def test_bounded_annihilator_matches_filter_oracle(finite_fixtures):
    # the pruned search agrees with a plain filter over all candidates
    for fix in finite_fixtures:
        A = fix.extension
        M = FiniteModule.regular(fix.ring)
        polys = skew_polys_upto(A, 2)
        for m in induced_elements_upto(M, A, 1):
            fast = {f.key() for f in ann_element(M, m, ("A", 2))}
            slow = {f.key() for f in polys if m.act(f).is_zero()}
            assert fast == slow


def test_bounded_annihilator_vs_twisted_preimage(fix1):
    # degree-0 element: exhaustive result matches the preimage-generated span
    A, R = fix1.extension, fix1.ring
    M = FiniteModule.regular(R)
    one0 = R.names.index("(1,0)")
    m = induced_constant(A, M, one0)
    ann0 = ann_element(M, m, "R").elements
    twisted = A.sigma_power_preimage((0,), M.annihilator(one0))
    assert ann0 == twisted
    bounded = ann_element(M, m, ("A", 1))
    expected = {
        f.key() for f in skew_polys_upto(A, 1)
        if all(c in ann0 for c in dict(f.key()).values())
    }
    assert {f.key() for f in bounded} == expected


def test_annihilator_cap():
    Z4 = rings.zmod(4)
    ext = build_extension(Z4, 1, [rings.RingMap.identity(Z4)])
    M = FiniteModule.regular(Z4)
    m = induced_constant(ext, M, 1)
    with pytest.raises(SearchSpaceTooLarge):
        from spbw.modules import bounded_annihilator_in_extension
        bounded_annihilator_in_extension(m, 20)


def test_submodule_lattices(fix1, fix2):
    M2 = FiniteModule.regular(fix2.ring)
    assert [sorted(s) for s in M2.submodules()] == [[0], [0, 2], [0, 1, 2, 3]]
    M1 = FiniteModule.regular(fix1.ring)
    assert [sorted(s) for s in M1.submodules()] == [[0], [0, 1], [0, 2], [0, 1, 2, 3]]
    Z = FiniteModule.zero_module(fix2.ring)
    assert Z.submodules() == [frozenset([0])]


def test_submodule_lattice_closed_under_meet_and_join(finite_fixtures):
    for fix in finite_fixtures:
        M = FiniteModule.regular(fix.ring)
        subs = set(M.submodules())
        for a in subs:
            for b in subs:
                assert a & b in subs
                assert M.sum_sets(a, b) in subs


def test_twisted_module_axioms(fix1):
    A = fix1.extension
    M = FiniteModule.regular(fix1.ring)
    for alpha in [(1,), (2,), (3,)]:
        T = twisted_module(M, A, alpha)
        R = fix1.ring
        for m in T.elements():
            for r in R.elements():
                for s in R.elements():
                    assert T.act(T.act(m, r), s) == T.act(m, R.mul(r, s))
        # the twist by the swap exchanges the two line annihilators
        one0 = R.names.index("(1,0)")
        expected = M.act(one0, A.sigma_power(alpha, R.names.index("(0,1)")))
        assert T.act(one0, R.names.index("(0,1)")) == expected


def test_induced_membership_predicate(fix1):
    A = fix1.extension
    M = FiniteModule.regular(fix1.ring)
    one0 = fix1.ring.names.index("(1,0)")
    N = SubmoduleSet(M, frozenset([M.zero, one0]))
    member = induce_submodule(N)
    assert member(induced_from_pairs(A, M, [((1,), one0)]))
    assert not member(induced_from_pairs(A, M, [((1,), 3)]))
    assert member(InducedElement(A, M, {}))
    zero_only = induce_submodule(SubmoduleSet(M, frozenset([M.zero])))
    assert zero_only(InducedElement(A, M, {}))
    assert not zero_only(induced_constant(A, M, one0))
    everything = induce_submodule(SubmoduleSet(M, frozenset(M.elements())))
    assert all(everything(m) for m in induced_elements_upto(M, A, 1))
    members = coefficient_submodule_elements(N, A, 1)
    assert all(member(m) for m in members)
    assert len(members) == 3  # nonzero maps {1,x} -> {0, (1,0)}


def test_mixed_ring_rejected(fix1, fix2):
    M2 = FiniteModule.regular(fix2.ring)
    with pytest.raises(BadParameter):
        InducedElement(fix1.extension, M2, {})
