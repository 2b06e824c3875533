"""Invariant parts of ideals, stability predicates, quantization witnesses,
and the annihilator closed forms they control.

For a two-sided ideal I and families of maps Sigma, Delta, the invariant
parts are computed as largest subsets of I closed under the generator maps;
over any ring this realizes the universal quantifier over composite maps,
since composites are generated one map at a time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    AssertionFailed,
    NotBijective,
    OracleMismatch,
    PolynomialBackendUnsupported,
)
from .extension import SkewPBWExtension
from .modules import (
    FiniteModule,
    InducedElement,
    SubmoduleSet,
    bounded_annihilator_in_extension,
    skew_polys_upto,
)
from .rings import IdealSet, RingMap, SigmaDerivation


def _largest_closed_subset(elements: frozenset, maps) -> frozenset:
    current = set(elements)
    changed = True
    while changed:
        changed = False
        for a in list(current):
            if any(f(a) not in current for f in maps):
                current.discard(a)
                changed = True
    return frozenset(current)


@dataclass(frozen=True)
class InvariantReport:
    """The three invariant parts of an ideal, with the invariance flags."""

    ideal: frozenset
    sigma_part: frozenset
    delta_part: frozenset
    mixed_part: frozenset
    sigma_invariant: bool
    delta_invariant: bool
    stable: Optional[bool]  # None when some sigma is not bijective


def invariant_parts(
    ring, sigmas: Sequence[RingMap], deltas: Sequence[SigmaDerivation], I
) -> InvariantReport:
    """Largest subsets of I closed under the sigmas / deltas / both."""
    if ring.backend != "finite":
        raise PolynomialBackendUnsupported("invariant parts need element enumeration")
    elements = I.elements if isinstance(I, IdealSet) else frozenset(I)
    sig = [s.apply for s in sigmas]
    del_ = [d.apply for d in deltas]
    sigma_part = _largest_closed_subset(elements, sig)
    delta_part = _largest_closed_subset(elements, del_)
    mixed_part = _largest_closed_subset(elements, sig + del_)
    if not (mixed_part <= sigma_part & delta_part <= elements):
        raise AssertionFailed("invariant part inclusion chain broken")
    stable = None
    if all(s.bijective for s in sigmas):
        stable = sigma_stable(ring, sigmas, elements) and delta_maps_into(deltas, elements)
    return InvariantReport(
        ideal=elements,
        sigma_part=sigma_part,
        delta_part=delta_part,
        mixed_part=mixed_part,
        sigma_invariant=sigma_part == elements,
        delta_invariant=delta_part == elements,
        stable=stable,
    )


def sigma_stable(ring, sigmas: Sequence[RingMap], elements: frozenset) -> bool:
    """sigma_i(I) = I as sets, for every i."""
    return all(s.image_set(elements) == elements for s in sigmas)


def delta_maps_into(deltas: Sequence[SigmaDerivation], elements: frozenset) -> bool:
    return all(d.image_set(elements) <= elements for d in deltas)


def stability_check(
    ring, sigmas: Sequence[RingMap], deltas: Sequence[SigmaDerivation], I
) -> bool:
    """The full stability predicate: sigma_i(I) = I and delta_i(I) within I."""
    if ring.backend != "finite":
        raise PolynomialBackendUnsupported("stability checks need element enumeration")
    if not all(s.bijective for s in sigmas):
        raise NotBijective("stability needs bijective sigmas")
    elements = I.elements if isinstance(I, IdealSet) else frozenset(I)
    return sigma_stable(ring, sigmas, elements) and delta_maps_into(deltas, elements)


# ---------------------------------------------------------------------------
# quantization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuantizedWitness:
    """Central invertible elements q_i with delta_i sigma_i = q_i sigma_i delta_i."""

    values: tuple


def verify_quantized(ext: SkewPBWExtension, values) -> bool:
    R = ext.ring
    if len(values) != ext.n:
        return False
    if R.backend == "finite":
        central = set(R.central_units())
        if any(q not in central for q in values):
            return False
        domain = list(R.elements())
    else:
        if any(not R.is_unit(q) for q in values):
            return False
        domain = list(R.gens)
    for i in range(ext.n):
        s, d, q = ext.sigmas[i], ext.deltas[i], values[i]
        for r in domain:
            lhs = d(s(r))
            rhs = R.mul(q, s(d(r)))
            if lhs != rhs:
                return False
        for qj in values:
            if s(qj) != qj:
                return False
            if not R.is_zero(d(qj)):
                return False
    return True


def is_quantized(ext: SkewPBWExtension, proposed=None) -> Optional[QuantizedWitness]:
    """Search (finite backend) or verify (polynomial backend) a witness."""
    R = ext.ring
    if proposed is not None:
        values = tuple(proposed)
        return QuantizedWitness(values) if verify_quantized(ext, values) else None
    if R.backend == "finite":
        for values in itertools.product(sorted(R.central_units()), repeat=ext.n):
            if verify_quantized(ext, values):
                return QuantizedWitness(values)
        return None
    # polynomial backend: derive each candidate from a generator with
    # sigma_i(delta_i(v)) != 0, falling back to 1 when delta_i vanishes
    values = []
    for i in range(ext.n):
        s, d = ext.sigmas[i], ext.deltas[i]
        candidate = None
        for v in R.gens:
            denom = s(d(v))
            if not R.is_zero(denom):
                ratio = R.divide_by_constant_multiple(d(s(v)), denom)
                if ratio is None or not R.is_unit(ratio):
                    return None
                candidate = ratio
                break
        if candidate is None:
            if not d.is_zero_map():
                return None
            candidate = R.one
        values.append(candidate)
    values = tuple(values)
    return QuantizedWitness(values) if verify_quantized(ext, values) else None


# ---------------------------------------------------------------------------
# lattice identities for the invariant parts
# ---------------------------------------------------------------------------

@dataclass
class InvariantIdentityReport:
    report: InvariantReport
    inclusion_holds: bool
    sigma_part_delta_invariant: bool
    delta_part_sigma_invariant: bool
    equality_conclusion: Optional[str]  # which equality fired, if any


def verify_invariant_identities(
    ring, sigmas, deltas, I
) -> InvariantIdentityReport:
    """Check the containment of the mixed part and the conditional equalities.

    When the sigma part is closed under the deltas, the mixed part equals the
    sigma part; symmetrically with the roles swapped it equals the delta
    part.  Either way it equals the intersection of the two parts.
    """
    rep = invariant_parts(ring, sigmas, deltas, I)
    inclusion = rep.mixed_part <= (rep.sigma_part & rep.delta_part)
    if not inclusion:
        raise AssertionFailed("mixed invariant part escapes the intersection")
    branch_a = delta_maps_into(deltas, rep.sigma_part)
    branch_b = all(s.image_set(rep.delta_part) <= rep.delta_part for s in sigmas)
    conclusion = None
    if branch_a:
        if rep.mixed_part != rep.sigma_part:
            raise AssertionFailed("delta-closed sigma part must equal the mixed part")
        conclusion = "mixed-equals-sigma-part"
    elif branch_b:
        if rep.mixed_part != rep.delta_part:
            raise AssertionFailed("sigma-closed delta part must equal the mixed part")
        conclusion = "mixed-equals-delta-part"
    if branch_a or branch_b:
        if rep.mixed_part != rep.sigma_part & rep.delta_part:
            raise AssertionFailed("mixed part must equal the intersection when a branch fires")
    return InvariantIdentityReport(
        report=rep,
        inclusion_holds=True,
        sigma_part_delta_invariant=branch_a,
        delta_part_sigma_invariant=branch_b,
        equality_conclusion=conclusion,
    )


# ---------------------------------------------------------------------------
# annihilators of modules generated by a good element
# ---------------------------------------------------------------------------

def polys_with_coeffs_in(ext: SkewPBWExtension, subset, max_degree: int):
    """All bounded-degree extension elements whose coefficients lie in subset."""
    from .extension import monomials_upto

    monos = ext.order.sorted_desc(monomials_upto(ext.n, max_degree))
    pool = sorted(set(subset) | {ext.ring.zero})
    out = []
    for coeffs in itertools.product(pool, repeat=len(monos)):
        out.append(ext.from_terms({m: c for m, c in zip(monos, coeffs) if c != ext.ring.zero}))
    return out


def _keys(polys) -> frozenset:
    return frozenset(f.key() for f in polys)


def bounded_ann_of_family(m: InducedElement, gens_polys, degree_bound: int):
    """{f : deg <= bound, (m*g)*f = 0 for all g in the generating sweep}."""
    base = bounded_annihilator_in_extension(m, degree_bound)
    images = []
    for g in gens_polys:
        image = m.act(g)
        if not image.is_zero():
            images.append(image)
    return [f for f in base if all(img.act(f).is_zero() for img in images)]


@dataclass
class GoodAnnihilatorReport:
    """Closed-form annihilators attached to a good element, vs oracles."""

    twisted_ideal: IdealSet                # preimage of ann(lc R) under sigma^lm
    ring_ann_exact: bool                   # ann_R(mR) equals the twisted ideal
    extension_ann_scalars_exact: bool      # bounded ann_A(mR) equals ideal<X>
    mixed_part: frozenset
    ring_ann_of_orbit: frozenset           # bounded ann_R(mA)
    orbit_inclusion_holds: bool
    orbit_equality_at_bound: bool
    sigma_part_delta_invariant: bool
    extension_ann_orbit_exact: Optional[bool]  # bounded ann_A(mA) vs sigma-part<X>
    degree_bound: int


def good_annihilator_report(m: InducedElement, degree_bound: int) -> GoodAnnihilatorReport:
    """Verify the annihilator closed forms for a good element against oracles.

    Mandatory directions (exact consequences of the closed forms) raise
    OracleMismatch on failure; directions that a bounded search can only
    approximate are reported as equality-at-bound flags.
    """
    ext, M = m.ext, m.module
    R = ext.ring
    alpha_k = m.lm()
    mk = m.lc()
    ann_mkR = M.annihilator_of_set(M.cyclic(mk))
    ideal = IdealSet(R, ext.sigma_power_preimage(alpha_k, ann_mkR), "two-sided")

    # ring-level annihilator of the scalar orbit mR
    scalar_orbit = [m.act_scalar(s) for s in R.elements()]
    ann_mR = frozenset(
        r
        for r in R.elements()
        if all(x.act_scalar(r).is_zero() for x in scalar_orbit)
    )
    ring_ann_exact = ann_mR == ideal.elements
    if not ring_ann_exact:
        raise OracleMismatch(
            "ann_R of the scalar orbit disagrees with the twisted-ideal closed form",
            witness=(sorted(ann_mR), sorted(ideal.elements)),
        )

    # extension-level annihilator of mR (exactly computable at the bound)
    base = bounded_annihilator_in_extension(m, degree_bound)
    ann_A_mR = [
        f
        for f in base
        if all(x.act(f).is_zero() for x in scalar_orbit if not x.is_zero())
    ]
    ideal_polys = polys_with_coeffs_in(ext, ideal.elements, degree_bound)
    scalars_exact = _keys(ann_A_mR) == _keys(ideal_polys)
    if not scalars_exact:
        raise OracleMismatch(
            "bounded ann_A of the scalar orbit disagrees with ideal<X>",
        )

    parts = invariant_parts(R, ext.sigmas, ext.deltas, ideal)
    polys = skew_polys_upto(ext, degree_bound)
    orbit = [m.act(g) for g in polys]
    orbit = [x for x in orbit if not x.is_zero()]
    ann_R_orbit = frozenset(
        r for r in R.elements() if all(x.act_scalar(r).is_zero() for x in orbit)
    )
    inclusion = parts.mixed_part <= ann_R_orbit
    if not inclusion:
        raise OracleMismatch(
            "mixed invariant part fails to annihilate the bounded orbit",
            witness=sorted(parts.mixed_part - ann_R_orbit),
        )
    equality_at_bound = ann_R_orbit == parts.mixed_part

    branch_a = delta_maps_into(ext.deltas, parts.sigma_part)
    orbit_exact = None
    if branch_a:
        ann_A_orbit = [f for f in base if all(x.act(f).is_zero() for x in orbit)]
        sigma_polys = polys_with_coeffs_in(ext, parts.sigma_part, degree_bound)
        missing = _keys(sigma_polys) - _keys(ann_A_orbit)
        if missing:
            raise OracleMismatch(
                "sigma-part<X> fails to annihilate the bounded orbit"
            )
        orbit_exact = _keys(ann_A_orbit) == _keys(sigma_polys)
    return GoodAnnihilatorReport(
        twisted_ideal=ideal,
        ring_ann_exact=ring_ann_exact,
        extension_ann_scalars_exact=scalars_exact,
        mixed_part=parts.mixed_part,
        ring_ann_of_orbit=ann_R_orbit,
        orbit_inclusion_holds=inclusion,
        orbit_equality_at_bound=equality_at_bound,
        sigma_part_delta_invariant=branch_a,
        extension_ann_orbit_exact=orbit_exact,
        degree_bound=degree_bound,
    )


# ---------------------------------------------------------------------------
# weak compatibility
# ---------------------------------------------------------------------------

@dataclass
class CompatibilityReport:
    compatible: bool
    witnesses: list  # (submodule elements, witness element or None)


def weak_compatibility_check(
    M: FiniteModule, sigmas, deltas
) -> CompatibilityReport:
    """Every nonzero submodule must contain a nonzero element whose
    annihilator is stable under the sigmas (as equality) and deltas."""
    if not all(s.bijective for s in sigmas):
        raise NotBijective("weak compatibility needs bijective sigmas")
    ring = M.ring
    witnesses = []
    compatible = True
    for sub in M.submodules():
        if sub == frozenset([M.zero]):
            continue
        found = None
        for a in sorted(sub):
            if a == M.zero:
                continue
            ann = M.annihilator(a)
            if sigma_stable(ring, sigmas, ann) and delta_maps_into(deltas, ann):
                found = a
                break
        witnesses.append((sub, found))
        if found is None:
            compatible = False
    return CompatibilityReport(compatible=compatible, witnesses=witnesses)
