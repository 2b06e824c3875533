"""Prime modules, associated primes, and their transfer to induced modules.

A module is prime when all of its nonzero submodules share one annihilator;
the associated primes of M are the annihilators of its prime submodules.
Over the induced module the associated primes are controlled by closed forms
built from the invariant parts of the base annihilator; every closed form
here is checked against a bounded exhaustive annihilator oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    AssertionFailed,
    BadParameter,
    HypothesisNotCertified,
    NotFoundAtBound,
    OracleMismatch,
    ZeroModule,
)
from .extension import SkewPBWExtension, monomials_upto
from .good import is_good, make_good
from .invariant import (
    QuantizedWitness,
    bounded_ann_of_family,
    delta_maps_into,
    invariant_parts,
    is_quantized,
    polys_with_coeffs_in,
    sigma_stable,
    stability_check,
)
from .modules import (
    FiniteModule,
    InducedElement,
    SubmoduleSet,
    induced_constant,
    induced_elements_upto,
    skew_polys_upto,
)
from .rings import IdealSet


def is_prime_ideal(ring, elements: frozenset) -> bool:
    """Two-sided primality by exhaustion: aRb in P forces a or b into P."""
    outside = [a for a in ring.elements() if a not in elements]
    for a in outside:
        for b in outside:
            if all(ring.mul(ring.mul(a, r), b) in elements for r in ring.elements()):
                return False
    return True


@dataclass
class PrimeWitness:
    """A prime submodule together with its annihilator and primality evidence."""

    submodule: SubmoduleSet
    annihilator: IdealSet
    ideal_is_prime: bool

    def __post_init__(self):
        if not self.ideal_is_prime:
            raise AssertionFailed(
                "annihilator of a prime module must be a prime ideal",
                witness=self.annihilator.sorted_elements(),
            )


def _elements_of(N) -> tuple[FiniteModule, frozenset]:
    if isinstance(N, SubmoduleSet):
        return N.module, N.elements
    if isinstance(N, FiniteModule):
        return N, frozenset(N.elements())
    raise BadParameter("expected a module or a submodule set")


def is_prime_module(N) -> tuple[bool, Optional[PrimeWitness]]:
    """All nonzero cyclic submodules must share the annihilator of N."""
    M, elements = _elements_of(N)
    nonzero = [a for a in sorted(elements) if a != M.zero]
    if not nonzero:
        raise ZeroModule("primality is undefined for the zero module")
    ann = M.annihilator_of_set(elements)
    for a in nonzero:
        if M.annihilator_of_set(M.cyclic(a)) != ann:
            return False, None
    sub = N if isinstance(N, SubmoduleSet) else SubmoduleSet(M, elements)
    witness = PrimeWitness(
        submodule=sub,
        annihilator=IdealSet(M.ring, ann, "two-sided"),
        ideal_is_prime=is_prime_ideal(M.ring, ann),
    )
    return True, witness


def ass(M: FiniteModule) -> list[PrimeWitness]:
    """Associated primes with witnesses, one per distinct annihilator."""
    found: dict[frozenset, PrimeWitness] = {}
    for sub in M.submodules():
        if sub == frozenset([M.zero]):
            continue
        verdict, witness = is_prime_module(SubmoduleSet(M, sub))
        if verdict and witness.annihilator.elements not in found:
            found[witness.annihilator.elements] = witness
    return [found[k] for k in sorted(found, key=lambda s: (len(s), sorted(s)))]


def enough_primes(M: FiniteModule) -> tuple[bool, list]:
    """Every nonzero submodule must contain a prime submodule.

    Finite modules always satisfy this (minimal nonzero submodules are
    simple); the operation exists to certify the hypothesis explicitly and to
    flag any counterexample as a defect.
    """
    subs = M.submodules()
    gaps = []
    for sub in subs:
        if sub == frozenset([M.zero]):
            continue
        has_prime = False
        for inner in subs:
            if inner == frozenset([M.zero]) or not inner <= sub:
                continue
            verdict, _ = is_prime_module(SubmoduleSet(M, inner))
            if verdict:
                has_prime = True
                break
        if not has_prime:
            gaps.append(sub)
    if gaps:
        raise AssertionFailed(
            "a finite module must have enough prime submodules", witness=gaps
        )
    return True, gaps


# ---------------------------------------------------------------------------
# good elements with prime leading-coefficient submodules
# ---------------------------------------------------------------------------

def find_good_prime(
    generators: Sequence[InducedElement], degree_bound: int
) -> InducedElement:
    """In the A-submodule spanned by the generators (bounded sweep), find a
    good element whose leading coefficient generates a prime submodule.

    Construction: take a minimal-leading-monomial element of the bounded
    sweep, repair it to a good element by minimal-lm descent, then scale so
    the leading coefficient generates a prime inside its cyclic submodule.
    """
    if not generators:
        raise BadParameter("need at least one generator")
    ext = generators[0].ext
    M = generators[0].module
    R = ext.ring
    if not ext.flags.bijective:
        raise BadParameter("the construction needs a bijective extension")
    polys = skew_polys_upto(ext, degree_bound)
    sweep: dict = {}
    for combo in itertools.product(polys, repeat=len(generators)):
        total = InducedElement(ext, M, {})
        for gen, g in zip(generators, combo):
            total = total + gen.act(g)
        if not total.is_zero():
            sweep[total.key()] = total
    if not sweep:
        raise NotFoundAtBound("the bounded sweep of the submodule is zero")
    key = ext.order.key
    minimal = min(
        sweep.values(),
        key=lambda x: (key(x.lm()), sorted((key(mn), v) for mn, v in x._terms.items())),
    )
    _, candidate = make_good(minimal)
    alpha = candidate.lm()
    lc = candidate.lc()
    for r in R.elements():
        scaled = M.act(lc, r)
        if scaled == M.zero:
            continue
        verdict, _ = is_prime_module(SubmoduleSet(M, M.cyclic(scaled)))
        if verdict:
            result = candidate.act_scalar(ext.sigma_power_inverse(alpha, r))
            ok, _ = is_good(result)
            if not ok or result.lc() != scaled:
                raise AssertionFailed("prime-leading-coefficient scaling broke goodness")
            return result
    raise NotFoundAtBound(
        "no scalar multiple of the leading coefficient generates a prime submodule"
    )


# ---------------------------------------------------------------------------
# closed-form annihilators for good prime elements
# ---------------------------------------------------------------------------

@dataclass
class ClosedFormReport:
    """Selected closed-form annihilator of the cyclic module of a good
    element, verified against the bounded exhaustive oracle."""

    case: str                       # "stable" | "quantized-sigma-stable" | "quantized-good" | "inapplicable"
    generator_ideal: Optional[frozenset]
    all_candidates: dict
    oracle_exact: Optional[bool]
    quantized: Optional[QuantizedWitness]
    degree_bound: int


def _good_lifts_available(m: InducedElement, degree_bound: int) -> bool:
    """Bounded check that mA has good elements at every monomial above lm."""
    ext = m.ext
    order = ext.order
    polys = skew_polys_upto(ext, degree_bound)
    for beta in monomials_upto(ext.n, degree_bound):
        if not order.geq(tuple(beta), m.lm()):
            continue
        found = False
        for g in polys:
            cand = m.act(g)
            if cand.is_zero() or cand.lm() != tuple(beta):
                continue
            ok, _ = is_good(cand)
            if ok:
                found = True
                break
        if not found:
            return False
    return True


def prime_annihilator_closed_form(
    m: InducedElement, degree_bound: int
) -> ClosedFormReport:
    """Pick the strongest applicable closed form for ann_A(mA) and verify it.

    Cases, strongest hypothesis first: the base annihilator is fully stable;
    the extension is quantized and the annihilator is stable under the sigmas
    alone; the extension is quantized, the leading coefficient generates a
    prime submodule, and good multiples exist at every admissible leading
    monomial.  All applicable closed forms must coincide.
    """
    ext, M = m.ext, m.module
    R = ext.ring
    ok, _ = is_good(m)
    if not ok:
        raise BadParameter("closed forms apply to good elements")
    alpha = m.lm()
    P = M.annihilator_of_set(M.cyclic(m.lc()))
    parts = invariant_parts(R, ext.sigmas, ext.deltas, P)
    qwit = is_quantized(ext)
    candidates: dict = {}
    if stability_check(R, ext.sigmas, ext.deltas, P):
        candidates["stable"] = P
    if qwit is not None and sigma_stable(R, ext.sigmas, P):
        candidates["quantized-sigma-stable"] = parts.delta_part
    if qwit is not None:
        prime_lc, _ = is_prime_module(SubmoduleSet(M, M.cyclic(m.lc())))
        if prime_lc and _good_lifts_available(m, degree_bound):
            candidates["quantized-good"] = ext.sigma_power_preimage(alpha, parts.mixed_part)
    if not candidates:
        return ClosedFormReport(
            case="inapplicable",
            generator_ideal=None,
            all_candidates={},
            oracle_exact=None,
            quantized=qwit,
            degree_bound=degree_bound,
        )
    values = {k: frozenset(v) for k, v in candidates.items()}
    if len(set(values.values())) > 1:
        raise AssertionFailed(
            "applicable closed forms disagree", witness={k: sorted(v) for k, v in values.items()}
        )
    case = next(iter(values))
    J = values[case]
    polys = skew_polys_upto(ext, degree_bound)
    oracle = bounded_ann_of_family(m, polys, degree_bound)
    ideal_polys = polys_with_coeffs_in(ext, J, degree_bound)
    oracle_keys = {f.key() for f in oracle}
    ideal_keys = {f.key() for f in ideal_polys}
    if not ideal_keys <= oracle_keys:
        raise OracleMismatch(
            "closed-form ideal fails to annihilate the bounded cyclic module",
            witness=case,
        )
    return ClosedFormReport(
        case=case,
        generator_ideal=J,
        all_candidates=values,
        oracle_exact=oracle_keys == ideal_keys,
        quantized=qwit,
        degree_bound=degree_bound,
    )


# ---------------------------------------------------------------------------
# associated primes of the induced module
# ---------------------------------------------------------------------------

def induced_prime_bounded(M: FiniteModule, ext: SkewPBWExtension, degree_bound: int) -> bool:
    """Bounded prime-module test for M<X>: all nonzero bounded elements
    generate cyclic A-submodules with one bounded annihilator."""
    polys = skew_polys_upto(ext, degree_bound)
    reference: Optional[frozenset] = None
    for m in induced_elements_upto(M, ext, degree_bound):
        ann = frozenset(
            f.key() for f in bounded_ann_of_family(m, polys, degree_bound)
        )
        if reference is None:
            reference = ann
        elif ann != reference:
            return False
    return True


@dataclass
class InducedAssEntry:
    prime: PrimeWitness
    case: str
    generator_ideal: Optional[frozenset]
    witness_element: Optional[InducedElement]
    oracle_exact: Optional[bool]
    mixed_part_sigma_stable: Optional[bool]


@dataclass
class InducedAssReport:
    case: str
    entries: list
    quantized: Optional[QuantizedWitness]
    good_certificate: object
    prime_biconditional: Optional[dict]
    degree_bound: int


def ass_induced(
    M: FiniteModule,
    ext: SkewPBWExtension,
    degree_bound: int,
    good_certificate=None,
) -> InducedAssReport:
    """Associated primes of M<X> via the strongest applicable closed form.

    The case tag is global: either every base associated prime is fully
    stable, or the extension is quantized and every one is sigma-stable, or
    the extension is quantized and the induced module is certified good.  Per
    prime, a good element with prime leading-coefficient submodule witnesses
    the closed form, which is checked against the bounded oracle.
    """
    if not ext.flags.bijective:
        raise HypothesisNotCertified("the closed forms need a bijective extension")
    enough_primes(M)
    primes = ass(M)
    qwit = is_quantized(ext)
    R = ext.ring

    def stable(P):
        return stability_check(R, ext.sigmas, ext.deltas, P.annihilator.elements)

    def sig_stable(P):
        return sigma_stable(R, ext.sigmas, P.annihilator.elements)

    if primes and all(stable(P) for P in primes):
        case = "stable"
    elif primes and qwit is not None and all(sig_stable(P) for P in primes):
        case = "quantized-sigma-stable"
    elif qwit is not None and good_certificate is not None and good_certificate.fired:
        case = "quantized-good"
    else:
        case = "inapplicable"

    entries = []
    for P in primes:
        parts = invariant_parts(R, ext.sigmas, ext.deltas, P.annihilator)
        if case == "stable":
            J = P.annihilator.elements
        elif case == "quantized-sigma-stable":
            J = parts.delta_part
        elif case == "quantized-good":
            J = parts.mixed_part
        else:
            J = None
        witness_elt = None
        oracle_exact = None
        mixed_sigma_stable = None
        if case != "inapplicable":
            seed = min(a for a in P.submodule.elements if a != M.zero)
            witness_elt = find_good_prime(
                [induced_constant(ext, M, seed)], degree_bound
            )
            closed = prime_annihilator_closed_form(witness_elt, degree_bound)
            if closed.case != "inapplicable":
                expected = ext.sigma_power_preimage(witness_elt.lm(), frozenset(J)) \
                    if case == "quantized-good" else frozenset(J)
                if closed.generator_ideal != expected:
                    raise OracleMismatch(
                        "per-element closed form disagrees with the global case",
                        witness=(case, closed.case),
                    )
                oracle_exact = closed.oracle_exact
            if case == "quantized-good":
                mixed_sigma_stable = sigma_stable(R, ext.sigmas, parts.mixed_part)
        entries.append(
            InducedAssEntry(
                prime=P,
                case=case,
                generator_ideal=frozenset(J) if J is not None else None,
                witness_element=witness_elt,
                oracle_exact=oracle_exact,
                mixed_part_sigma_stable=mixed_sigma_stable,
            )
        )

    biconditional = None
    prime_M = False
    try:
        prime_M, _ = is_prime_module(M)
    except ZeroModule:
        prime_M = False
    if prime_M and case == "quantized-good":
        parts = invariant_parts(R, ext.sigmas, ext.deltas, M.annihilator_of_set(range(M.size)))
        sigma_ok = sigma_stable(R, ext.sigmas, parts.mixed_part)
        bounded_prime = induced_prime_bounded(M, ext, degree_bound)
        biconditional = {
            "mixed_part_sigma_stable": sigma_ok,
            "induced_prime_bounded": bounded_prime,
            "agree": sigma_ok == bounded_prime,
        }
    return InducedAssReport(
        case=case,
        entries=entries,
        quantized=qwit,
        good_certificate=good_certificate,
        prime_biconditional=biconditional,
        degree_bound=degree_bound,
    )
