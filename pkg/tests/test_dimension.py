import itertools

import pytest

from spbw import rings
from spbw.dimension import (
    essential_induced_bounded,
    is_essential,
    is_uniform,
    udim,
    udim_induced,
    uniform_induced_bounded,
)
from spbw.errors import HypothesisNotCertified, ZeroModule
from spbw.extension import build_extension
from spbw.good import certify_good_module
from spbw.modules import FiniteModule, SubmoduleSet, submodule_as_module


def full_lattice_udim_oracle(M):
    """Independent oracle: maximum independent family over the whole lattice,
    with directness checked from the definition."""
    subs = [s for s in M.submodules() if s != frozenset([M.zero])]
    best = 0
    for size in range(len(subs), 0, -1):
        for family in itertools.combinations(subs, size):
            ok = True
            for i, U in enumerate(family):
                others = frozenset([M.zero])
                for j, V in enumerate(family):
                    if i != j:
                        others = M.sum_sets(others, V)
                if any(x != M.zero and x in others for x in U):
                    ok = False
                    break
            if ok:
                best = size
                break
        if best:
            break
    return best


def test_essential_examples(fix1, fix2, regular1, regular2):
    assert is_essential(frozenset(regular2.elements()), regular2)
    assert is_essential(frozenset([0, 2]), regular2)
    one0 = fix1.ring.names.index("(1,0)")
    assert not is_essential(frozenset([regular1.zero, one0]), regular1)
    assert is_essential(frozenset(regular1.elements()), regular1)


def test_essential_closed_under_intersection(finite_fixtures):
    for fix in finite_fixtures:
        M = FiniteModule.regular(fix.ring)
        essentials = [s for s in M.submodules() if is_essential(s, M)]
        for a in essentials:
            for b in essentials:
                assert is_essential(a & b, M)


def test_uniform_examples(fix1, fix2, regular1, regular2):
    assert is_uniform(regular2)
    assert not is_uniform(regular1)
    one0 = fix1.ring.names.index("(1,0)")
    assert is_uniform(SubmoduleSet(regular1, frozenset([regular1.zero, one0])))
    with pytest.raises(ZeroModule):
        is_uniform(FiniteModule.zero_module(fix2.ring))


def test_udim_values_and_witnesses(fix1, fix2, fix4, regular1, regular2, regular4):
    r2 = udim(regular2)
    assert r2.value == 1 == full_lattice_udim_oracle(regular2)
    r1 = udim(regular1)
    assert r1.value == 2 == full_lattice_udim_oracle(regular1)
    assert len(r1.family) == 2
    r4 = udim(regular4)
    assert r4.value == 1 == full_lattice_udim_oracle(regular4)
    Z = FiniteModule.zero_module(fix2.ring)
    rz = udim(Z)
    assert rz.value == 0 and rz.family == ()


def test_udim_f2_plus_f2_over_f2():
    # module F2 + F2 over the field F2: two independent lines
    F2 = rings.zmod(2)
    add = [[a ^ b for b in range(4)] for a in range(4)]
    act = [[0 if r == 0 else a for r in range(2)] for a in range(4)]
    M = FiniteModule(F2, add, act)
    assert udim(M).value == 2 == full_lattice_udim_oracle(M)


def test_udim_essential_submodule_matches(finite_fixtures):
    # an essential submodule carries the same uniform dimension
    for fix in finite_fixtures:
        M = FiniteModule.regular(fix.ring)
        value = udim(M).value
        for s in M.submodules():
            if s == frozenset([M.zero]) or not is_essential(s, M):
                continue
            sub, _ = submodule_as_module(SubmoduleSet(M, s))
            assert udim(sub).value == value


def test_udim_induced_matches_and_verifies(fix1, fix2, regular1, regular2):
    c2 = certify_good_module(regular2, fix2.extension)
    rep2 = udim_induced(regular2, fix2.extension, 2, certificate=c2)
    assert rep2.value == 1 and rep2.falsifier.ok
    assert rep2.provenance == "by-theorem"
    c1 = certify_good_module(regular1, fix1.extension)
    rep1 = udim_induced(regular1, fix1.extension, 2, certificate=c1)
    assert rep1.value == 2 and rep1.falsifier.ok


def test_udim_induced_requires_certificate(fix2, regular2):
    with pytest.raises(HypothesisNotCertified):
        udim_induced(regular2, fix2.extension, 2, certificate=None)


def test_udim_induced_zero_module(fix2):
    Z = FiniteModule.zero_module(fix2.ring)
    rep = udim_induced(Z, fix2.extension, 2)
    assert rep.value == 0 and rep.falsifier.ok


def test_essential_transfer_positive(fix2, regular2):
    N = SubmoduleSet(regular2, frozenset([0, 2]))
    sub, _ = submodule_as_module(N)
    cert = certify_good_module(sub, fix2.extension)
    rep = essential_induced_bounded(N, regular2, fix2.extension, 2, certificate=cert)
    assert rep.ok


def test_essential_transfer_negative(fix1, regular1):
    one0 = fix1.ring.names.index("(1,0)")
    N = SubmoduleSet(regular1, frozenset([regular1.zero, one0]))
    sub, _ = submodule_as_module(N)
    cert = certify_good_module(sub, fix1.extension)
    rep = essential_induced_bounded(N, regular1, fix1.extension, 2, certificate=cert)
    assert not rep.ok
    # the gap element generates a cyclic module missing N<X> entirely
    assert rep.gap is not None


def test_uniform_transfer_bounded(fix1, fix2, regular1, regular2):
    N2 = SubmoduleSet(regular2, frozenset([0, 2]))
    assert uniform_induced_bounded(N2, fix2.extension, 2).ok
    one0 = fix1.ring.names.index("(1,0)")
    N1 = SubmoduleSet(regular1, frozenset([regular1.zero, one0]))
    assert uniform_induced_bounded(N1, fix1.extension, 2).ok
    full = SubmoduleSet(regular1, frozenset(regular1.elements()))
    assert not uniform_induced_bounded(full, fix1.extension, 1).ok
