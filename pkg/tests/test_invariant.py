import pytest

from spbw import rings
from spbw.errors import NotBijective, PolynomialBackendUnsupported
from spbw.extension import build_extension
from spbw.invariant import (
    good_annihilator_report,
    invariant_parts,
    is_quantized,
    polys_with_coeffs_in,
    stability_check,
    verify_invariant_identities,
    verify_quantized,
    weak_compatibility_check,
)
from spbw.modules import (
    FiniteModule,
    induced_constant,
    induced_elements_upto,
)
from spbw.rings import IdealSet, all_two_sided_ideals


def test_invariant_parts_examples(fix1, fix2):
    R1, A1 = fix1.ring, fix1.extension
    one0 = R1.names.index("(1,0)")
    I = IdealSet(R1, frozenset([R1.zero, one0]), "two-sided")
    rep = invariant_parts(R1, A1.sigmas, A1.deltas, I)
    assert rep.sigma_part == frozenset([R1.zero])  # the swap evicts (1,0)
    assert rep.delta_part == I.elements            # zero derivations keep everything
    assert rep.mixed_part == frozenset([R1.zero])
    assert not rep.sigma_invariant and rep.delta_invariant and rep.stable is False
    R2, A2 = fix2.ring, fix2.extension
    full = IdealSet(R2, frozenset(range(4)), "two-sided")
    rep2 = invariant_parts(R2, A2.sigmas, A2.deltas, full)
    assert rep2.sigma_part == rep2.delta_part == rep2.mixed_part == full.elements


def test_invariant_parts_idempotent(finite_fixtures):
    for fix in finite_fixtures:
        R, A = fix.ring, fix.extension
        for elems in all_two_sided_ideals(R):
            rep = invariant_parts(R, A.sigmas, A.deltas, IdealSet(R, elems, "two-sided"))
            again = invariant_parts(R, A.sigmas, A.deltas, rep.mixed_part)
            assert again.mixed_part == rep.mixed_part
            assert rep.mixed_part <= rep.sigma_part & rep.delta_part


def test_zero_delta_collapses_parts(finite_fixtures):
    # with zero derivations the mixed part equals the sigma part on every ideal
    for fix in finite_fixtures:
        R, A = fix.ring, fix.extension
        for elems in all_two_sided_ideals(R):
            rep = invariant_parts(R, A.sigmas, A.deltas, IdealSet(R, elems, "two-sided"))
            assert rep.delta_part == elems
            assert rep.mixed_part == rep.sigma_part


def test_stability_examples(fix1, fix2):
    R1, A1 = fix1.ring, fix1.extension
    one0 = R1.names.index("(1,0)")
    assert not stability_check(R1, A1.sigmas, A1.deltas, frozenset([R1.zero, one0]))
    assert stability_check(R1, A1.sigmas, A1.deltas, frozenset([R1.zero]))
    R2, A2 = fix2.ring, fix2.extension
    assert stability_check(R2, A2.sigmas, A2.deltas, frozenset([0, 2]))


def test_stability_needs_bijective_sigma():
    Z4 = rings.zmod(4)
    square = rings.RingMap.unchecked(Z4, table=[Z4.mul(a, a) for a in range(4)])
    delta = rings.SigmaDerivation.zero(square)
    with pytest.raises(NotBijective):
        stability_check(Z4, [square], [delta], frozenset([0]))


def test_identities_on_all_fixture_ideals(finite_fixtures):
    for fix in finite_fixtures:
        R, A = fix.ring, fix.extension
        for elems in all_two_sided_ideals(R):
            rep = verify_invariant_identities(R, A.sigmas, A.deltas, IdealSet(R, elems, "two-sided"))
            assert rep.inclusion_holds
            # zero derivations: the sigma-part branch always fires
            assert rep.sigma_part_delta_invariant
            assert rep.equality_conclusion == "mixed-equals-sigma-part"


def test_identities_on_nonzero_derivation_ring():
    # F2[t]/(t^2): sigma = id, delta(t) = 1; the delta part of (t) is {0},
    # which is sigma-invariant while the sigma part (t) is not delta-invariant
    add = [[a ^ b for b in range(4)] for a in range(4)]

    def mul(a, b):
        a0, a1 = a & 1, a >> 1
        b0, b1 = b & 1, b >> 1
        return (a0 & b0) | (((a0 & b1) ^ (a1 & b0)) << 1)

    R = rings.FiniteRing(add, [[mul(a, b) for b in range(4)] for a in range(4)],
                         names=["0", "1", "t", "1+t"])
    ident = rings.RingMap.identity(R)
    delta = rings.SigmaDerivation(ident, table=[0, 0, 1, 1])  # d(t) = 1
    I = IdealSet(R, frozenset([0, 2]), "two-sided")
    rep = verify_invariant_identities(R, [ident], [delta], I)
    assert not rep.sigma_part_delta_invariant
    assert rep.delta_part_sigma_invariant
    assert rep.equality_conclusion == "mixed-equals-delta-part"
    parts = rep.report
    assert parts.sigma_part == frozenset([0, 2])
    assert parts.delta_part == parts.mixed_part == frozenset([0])


def test_quantized_witnesses(fix1, fix2, fix3):
    w1 = is_quantized(fix1.extension)
    assert w1 is not None and w1.values == (fix1.ring.one,)
    w2 = is_quantized(fix2.extension)
    assert w2 is not None and w2.values == (1,)
    w3 = is_quantized(fix3.extension)
    assert w3 is not None
    assert fix3.ring.render(w3.values[0]) == "2"  # the twist itself, not 1
    assert verify_quantized(fix3.extension, w3.values)
    assert not verify_quantized(fix3.extension, (fix3.ring.one,))


def test_quantized_witness_reverifies(finite_fixtures):
    for fix in finite_fixtures:
        witness = is_quantized(fix.extension)
        assert witness is not None
        assert verify_quantized(fix.extension, witness.values)


def test_polynomial_backend_guards(fix3):
    with pytest.raises(PolynomialBackendUnsupported):
        invariant_parts(fix3.ring, fix3.extension.sigmas, fix3.extension.deltas, frozenset())


def test_good_annihilator_report_examples(fix1, fix2, regular1, regular2):
    one0 = fix1.ring.names.index("(1,0)")
    rep = good_annihilator_report(induced_constant(fix1.extension, regular1, one0), 2)
    zero1 = fix1.ring.names.index("(0,1)")
    assert rep.twisted_ideal.elements == frozenset([0, zero1])
    assert rep.mixed_part == frozenset([0])
    assert rep.ring_ann_exact and rep.extension_ann_scalars_exact
    assert rep.orbit_equality_at_bound
    assert rep.extension_ann_orbit_exact  # sigma part {0} spans the zero ideal
    rep2 = good_annihilator_report(induced_constant(fix2.extension, regular2, 2), 2)
    assert rep2.twisted_ideal.elements == frozenset([0, 2])
    assert rep2.extension_ann_orbit_exact
    unit = good_annihilator_report(induced_constant(fix2.extension, regular2, 1), 2)
    assert unit.twisted_ideal.elements == frozenset([0])


def test_good_annihilator_report_full_sweep(finite_fixtures):
    from spbw.good import is_good

    for fix in finite_fixtures:
        M = FiniteModule.regular(fix.ring)
        for m in induced_elements_upto(M, fix.extension, 1):
            if not is_good(m)[0]:
                continue
            rep = good_annihilator_report(m, 2)
            assert rep.orbit_inclusion_holds and rep.orbit_equality_at_bound
            if rep.extension_ann_orbit_exact is not None:
                assert rep.extension_ann_orbit_exact


def test_weak_compatibility(fix1, fix2, regular1, regular2):
    rep2 = weak_compatibility_check(regular2, fix2.extension.sigmas, fix2.extension.deltas)
    assert rep2.compatible
    found = dict((tuple(sorted(sub)), w) for sub, w in rep2.witnesses)
    assert found[(0, 2)] == 2 and found[(0, 1, 2, 3)] == 1
    rep1 = weak_compatibility_check(regular1, fix1.extension.sigmas, fix1.extension.deltas)
    assert not rep1.compatible
    Z = FiniteModule.zero_module(fix2.ring)
    repz = weak_compatibility_check(Z, fix2.extension.sigmas, fix2.extension.deltas)
    assert repz.compatible and repz.witnesses == []


def test_polys_with_coeffs_span(fix2):
    polys = polys_with_coeffs_in(fix2.extension, frozenset([0, 2]), 1)
    assert len(polys) == 4
    assert all(all(c in (0, 2) for c in dict(f.key()).values()) for f in polys)
