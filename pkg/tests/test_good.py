import pytest

from spbw import rings
from spbw.errors import BadParameter, NoLiftFound
from spbw.extension import build_extension
from spbw.good import (
    certify_good_module,
    good_equivalence_certificate,
    good_lift,
    is_good,
    is_nonsingular,
    make_good,
    singular_submodule,
)
from spbw.modules import (
    FiniteModule,
    SubmoduleSet,
    induced_constant,
    induced_elements_upto,
    induced_from_pairs,
    submodule_as_module,
)


def test_is_good_examples(fix1, fix2, regular1, regular2):
    constant = induced_constant(fix2.extension, regular2, 1)
    assert is_good(constant) == (True, None)
    bad = induced_from_pairs(fix2.extension, regular2, [((0,), 1), ((1,), 2)])
    ok, witness = is_good(bad)
    assert not ok and witness == 2
    m = induced_from_pairs(fix1.extension, regular1, [((1,), 3)])
    assert is_good(m) == (True, None)


def test_is_good_rejects_zero(fix2, regular2):
    from spbw.modules import InducedElement

    with pytest.raises(BadParameter):
        is_good(InducedElement(fix2.extension, regular2, {}))


def test_certificate_examples(fix1, fix2, regular1, regular2):
    cert = good_equivalence_certificate(
        induced_from_pairs(fix1.extension, regular1, [((1,), 3)]), 2
    )
    assert cert.verdict and all(cert.conditions.values())
    cert2 = good_equivalence_certificate(
        induced_from_pairs(fix2.extension, regular2, [((0,), 1), ((1,), 2)]), 2
    )
    assert not cert2.verdict and not any(cert2.conditions.values())
    assert cert2.witnesses["definition"] == 2
    const = good_equivalence_certificate(induced_constant(fix2.extension, regular2, 3), 2)
    assert const.verdict


def test_certificates_agree_across_sweep(finite_fixtures):
    for fix in finite_fixtures:
        M = FiniteModule.regular(fix.ring)
        for m in induced_elements_upto(M, fix.extension, 2, max_terms=2):
            cert = good_equivalence_certificate(m, 2)
            assert len(set(cert.conditions.values())) == 1


def test_make_good_examples(fix1, fix2, regular1, regular2):
    bad = induced_from_pairs(fix2.extension, regular2, [((0,), 1), ((1,), 2)])
    r, repaired = make_good(bad)
    assert r == 2 and repaired.render() == "2"
    already = induced_constant(fix2.extension, regular2, 1)
    r2, rep2 = make_good(already)
    assert r2 == 1 and rep2 == already
    mixed = induced_from_pairs(fix1.extension, regular1, [((0,), 2), ((1,), 3)])
    _, rep3 = make_good(mixed)
    assert is_good(rep3)[0]


def test_make_good_always_lands_good(finite_fixtures):
    for fix in finite_fixtures:
        M = FiniteModule.regular(fix.ring)
        for m in induced_elements_upto(M, fix.extension, 2, max_terms=2):
            _, repaired = make_good(m)
            assert is_good(repaired)[0]


def test_singular_submodules(fix1, fix2, regular1, regular2):
    assert sorted(singular_submodule(regular2).elements) == [0, 2]
    assert singular_submodule(regular1).is_zero()
    assert is_nonsingular(regular1) and not is_nonsingular(regular2)
    Z = FiniteModule.zero_module(fix2.ring)
    assert singular_submodule(Z).elements == frozenset([Z.zero])


def test_singular_iff_no_good_essential_annihilator(finite_fixtures):
    # nonsingular base means no good bounded element has an essential annihilator
    from spbw.dimension import is_essential
    from spbw.modules import ann_element

    for fix in finite_fixtures:
        M = FiniteModule.regular(fix.ring)
        regular = FiniteModule.regular(fix.ring)
        nonsingular = is_nonsingular(M)
        witnesses = []
        for m in induced_elements_upto(M, fix.extension, 2, max_terms=2):
            if not is_good(m)[0]:
                continue
            ann = ann_element(M, m, "R")
            if is_essential(ann.elements, regular):
                witnesses.append(m)
        assert nonsingular == (not witnesses)


def test_good_lift_identity_and_raising(fix1, regular1):
    m = induced_constant(fix1.extension, regular1, 3)  # (1,1), nonsingular lc
    assert good_lift(m, (0,)) == m
    lifted = good_lift(m, (2,))
    assert lifted.lm() == (2,) and is_good(lifted)[0]


def test_good_lift_requires_dominance(fix1, regular1):
    m = induced_from_pairs(fix1.extension, regular1, [((2,), 3)])
    with pytest.raises(BadParameter):
        good_lift(m, (1,))


def test_good_lift_singular_case_postcondition(fix2, regular2):
    # lc R = {0,2} is singular; a returned lift must still pass the contract
    m = induced_constant(fix2.extension, regular2, 2)
    try:
        lifted = good_lift(m, (1,))
    except NoLiftFound:
        return
    assert is_good(lifted)[0] and lifted.lm() == (1,)


def test_certify_good_module_clauses(fix1, fix2, regular1, regular2):
    c1 = certify_good_module(regular1, fix1.extension)
    assert c1.fired == "nonsingular"
    assert not c1.falsifier_gaps
    c2 = certify_good_module(regular2, fix2.extension)
    assert c2.fired is not None
    assert c2.clauses["endomorphism-type"]
    assert not c2.falsifier_gaps


def test_certify_on_prime_line(fix1, regular1):
    one0 = fix1.ring.names.index("(1,0)")
    N = SubmoduleSet(regular1, frozenset([regular1.zero, one0]))
    sub, _ = submodule_as_module(N)
    cert = certify_good_module(sub, fix1.extension)
    assert cert.fired is not None
    assert not cert.falsifier_gaps
