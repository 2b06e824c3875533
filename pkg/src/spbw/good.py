"""Good elements of induced modules.

An induced element m is good when right-multiplication by ring scalars never
drops its leading monomial: lm(m*r) = lm(m) whenever m*r is nonzero.  This
file houses the definition-level predicate, the equivalence certificate that
cross-checks seven characterizations of goodness against each other, the
constructive goodness repair (minimal-lm descent), leading-monomial lifts,
singular submodules, and the sufficient-condition certificate under which an
entire induced module is "good" (every good element admits good multiples at
every admissible leading monomial).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dimension import is_essential
from .errors import (
    AssertionFailed,
    BadParameter,
    EquivalenceBroken,
    NoLiftFound,
    PolynomialBackendUnsupported,
)
from .extension import SkewPBWExtension, monomials_upto
from .invariant import weak_compatibility_check
from .modules import (
    FiniteModule,
    InducedElement,
    SubmoduleSet,
    bounded_annihilator_in_extension,
    induced_constant,
    induced_elements_upto,
    skew_polys_upto,
)


def _require_finite(m: InducedElement):
    if m.ext.ring.backend != "finite":
        raise PolynomialBackendUnsupported("goodness predicates quantify over the ring")


def is_good(m: InducedElement):
    """Definition-level predicate; returns (verdict, witnessing scalar or None)."""
    _require_finite(m)
    if m.is_zero():
        raise BadParameter("goodness is undefined for the zero element")
    target = m.lm()
    for r in m.ext.ring.elements():
        image = m.act_scalar(r)
        if not image.is_zero() and image.lm() != target:
            return False, r
    return True, None


@dataclass
class GoodCertificate:
    """Per-condition verdicts for the seven equivalent goodness criteria.

    All seven must agree; any split is an internal defect, not a property of
    the input.  The unbounded criteria are evaluated to the stated degree
    bound and the certificate records that bound.
    """

    subject: InducedElement
    degree_bound: int
    conditions: dict
    witnesses: dict
    verdict: bool

    CONDITION_NAMES = (
        "definition",
        "scalar-multiples-keep-lm",
        "bounded-products-keep-lm",
        "vanishing-matches-leading-coefficient",
        "ring-annihilator-closed-form",
        "bounded-extension-annihilator-closed-form",
        "leading-transport-injective",
    )

    def to_dict(self):
        return {
            "element": self.subject.render(),
            "degree_bound": self.degree_bound,
            "verdict": self.verdict,
            "conditions": dict(self.conditions),
            "witnesses": {k: repr(v) for k, v in self.witnesses.items()},
        }


def good_equivalence_certificate(m: InducedElement, degree_bound: int) -> GoodCertificate:
    """Evaluate the seven goodness criteria independently and demand agreement."""
    _require_finite(m)
    if m.is_zero():
        raise BadParameter("goodness is undefined for the zero element")
    ext, M = m.ext, m.module
    R = ext.ring
    order = ext.order
    alpha_k = m.lm()
    mk = m.lc()
    conditions: dict = {}
    witnesses: dict = {}

    ok, witness = is_good(m)
    conditions["definition"] = ok
    if witness is not None:
        witnesses["definition"] = witness

    # scalar multiples never fall below the leading monomial
    ok = True
    for r in R.elements():
        image = m.act_scalar(r)
        if not image.is_zero() and not order.geq(image.lm(), alpha_k):
            ok, witnesses["scalar-multiples-keep-lm"] = False, r
            break
    conditions["scalar-multiples-keep-lm"] = ok

    polys = skew_polys_upto(ext, degree_bound)
    ok = True
    for g in polys:
        image = m.act(g)
        if not image.is_zero() and not order.geq(image.lm(), alpha_k):
            ok, witnesses["bounded-products-keep-lm"] = False, g
            break
    conditions["bounded-products-keep-lm"] = ok

    ok = True
    for r in R.elements():
        lead_killed = M.act(mk, ext.sigma_power(alpha_k, r)) == M.zero
        if lead_killed != m.act_scalar(r).is_zero():
            ok, witnesses["vanishing-matches-leading-coefficient"] = False, r
            break
    conditions["vanishing-matches-leading-coefficient"] = ok

    ann_m = frozenset(r for r in R.elements() if m.act_scalar(r).is_zero())
    twisted = ext.sigma_power_preimage(alpha_k, M.annihilator(mk))
    conditions["ring-annihilator-closed-form"] = ann_m == twisted
    if ann_m != twisted:
        witnesses["ring-annihilator-closed-form"] = sorted(ann_m ^ twisted)

    ann_A = {f.key() for f in bounded_annihilator_in_extension(m, degree_bound)}
    ideal_A = {
        f.key() for f in polys if all(c in twisted for c in f._terms.values())
    }
    conditions["bounded-extension-annihilator-closed-form"] = ann_A == ideal_A

    # transporting leading coefficients along sigma^lm kills exactly ann
    ok = True
    for g in polys:
        transported_zero = all(
            M.act(mk, ext.sigma_power(alpha_k, c)) == M.zero for c in g._terms.values()
        )
        if transported_zero != m.act(g).is_zero():
            ok, witnesses["leading-transport-injective"] = False, g
            break
    conditions["leading-transport-injective"] = ok

    values = set(conditions.values())
    if len(values) > 1:
        raise EquivalenceBroken(
            f"goodness criteria disagree on {m.render()}: {conditions}",
            witness=conditions,
        )
    return GoodCertificate(
        subject=m,
        degree_bound=degree_bound,
        conditions=conditions,
        witnesses=witnesses,
        verdict=values.pop(),
    )


def make_good(m: InducedElement):
    """Minimal-lm descent: pick r minimizing lm(m*r) over nonzero multiples.

    The multiple realizing the minimum is good: any further drop of the
    leading monomial would contradict minimality.  Returns (r, m*r).
    """
    _require_finite(m)
    if m.is_zero():
        raise BadParameter("cannot repair the zero element")
    order = m.ext.order
    best = None
    for r in m.ext.ring.elements():
        image = m.act_scalar(r)
        if image.is_zero():
            continue
        cand_key = (order.key(image.lm()), r)
        if best is None or cand_key < best[0]:
            best = (cand_key, r, image)
    _, r, image = best
    ok, _ = is_good(image)
    if not ok:
        raise AssertionFailed(f"minimal-lm multiple of {m.render()} is not good")
    return r, image


def singular_submodule(M: FiniteModule) -> SubmoduleSet:
    """Z(M): elements whose annihilator is an essential right ideal."""
    regular = FiniteModule.regular(M.ring)
    members = {M.zero}
    for m in M.nonzero_elements():
        if is_essential(M.annihilator(m), regular):
            members.add(m)
    try:
        return SubmoduleSet(M, frozenset(members))
    except BadParameter as exc:
        raise AssertionFailed(f"singular elements do not form a submodule: {exc}")


def is_nonsingular(M: FiniteModule) -> bool:
    return singular_submodule(M).is_zero()


def good_lift(m: InducedElement, beta) -> InducedElement:
    """Raise the leading monomial of a good element along one coordinate at a
    time, keeping goodness, until it reaches x^beta.

    Follows the nonsingular-leading-coefficient construction: after appending
    x_i, correct with a scalar b whose sigma_i-image generates a right ideal
    meeting the leading coefficient's annihilator trivially; candidates
    passing that test are tried first, every other scalar after them, and the
    first good outcome wins.
    """
    _require_finite(m)
    ext, M = m.ext, m.module
    R = ext.ring
    beta = tuple(beta)
    ok, _ = is_good(m)
    if not ok:
        raise BadParameter("leading-monomial lifts start from a good element")
    if not ext.flags.bijective:
        raise BadParameter("leading-monomial lifts need a bijective extension")
    gamma = m.lm()
    if any(b < g for b, g in zip(beta, gamma)):
        raise BadParameter(
            "target monomial must dominate the leading monomial componentwise"
        )
    current = m
    for i in range(ext.n):
        while current.lm()[i] < beta[i]:
            current = _raise_coordinate(current, i)
    if current.lm() != beta:
        raise NoLiftFound("lift drifted off the target monomial", witness=beta)
    ok, _ = is_good(current)
    if not ok:
        raise AssertionFailed("lift postcondition failed: result is not good")
    return current


def _raise_coordinate(f: InducedElement, i: int) -> InducedElement:
    ext, M = f.ext, f.module
    R = ext.ring
    gamma = f.lm()
    target = tuple(g + 1 if k == i else g for k, g in enumerate(gamma))
    ann_lc = M.annihilator(f.lc())
    regular = FiniteModule.regular(R)

    def passes_meet_condition(b):
        principal = regular.cyclic(ext.sigmas[i](b))
        return not any(x != R.zero and x in ann_lc for x in principal)

    preferred, fallback = [], []
    for b in R.nonzero_elements():
        (preferred if passes_meet_condition(b) else fallback).append(b)
    step = ext.variable(i)
    for b in preferred + fallback:
        cand = f.act(step).act_scalar(b)
        if cand.is_zero() or cand.lm() != target:
            continue
        ok, _ = is_good(cand)
        if ok:
            return cand
    raise NoLiftFound(f"no good multiple raises coordinate {i+1}", witness=i)


# ---------------------------------------------------------------------------
# good-module certification
# ---------------------------------------------------------------------------

@dataclass
class GoodModuleCertificate:
    """Sufficient-condition certificate that an induced module is good.

    ``fired`` names the first clause that held; ``falsifier_gaps`` lists
    bounded counterexample candidates found by the sweep (always empty when a
    clause fired, unless the mathematics itself is broken).
    """

    module: FiniteModule
    clauses: dict
    fired: Optional[str]
    falsifier_gaps: list
    element_degree_bound: int
    target_degree_bound: int

    @property
    def verdict(self) -> str:
        if self.fired:
            return f"good (by {self.fired})"
        return "inconclusive"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "clauses": {k: v for k, v in self.clauses.items()},
            "gaps": [
                {"element": m.render(), "target": list(beta)} for m, beta in self.falsifier_gaps
            ],
            "bounds": [self.element_degree_bound, self.target_degree_bound],
        }


def _good_multiple_with_lm(m: InducedElement, beta, polys) -> Optional[InducedElement]:
    for g in polys:
        cand = m.act(g)
        if cand.is_zero() or cand.lm() != beta:
            continue
        ok, _ = is_good(cand)
        if ok:
            return cand
    return None


def certify_good_module(
    M: FiniteModule,
    ext: SkewPBWExtension,
    element_degree_bound: int = 2,
    target_degree_bound: int = 3,
) -> GoodModuleCertificate:
    """Certify that M<X> is good via any sufficient clause, then falsify.

    Clauses, strongest evidence first: the module is nonsingular; the module
    is the regular module and every nonzero scalar admits good multiples with
    each single-variable leading monomial; the extension has zero derivations;
    the module satisfies weak compatibility.  An inconclusive certificate is
    legal: the bounded falsifier then reports any gap it finds.
    """
    if M.ring.backend != "finite":
        raise PolynomialBackendUnsupported("certification quantifies over the module")
    clauses: dict = {}
    clauses["nonsingular"] = is_nonsingular(M) if M.size > 1 else True
    if M.is_regular_over_ring():
        clauses["regular-with-degree-one-lifts"] = _regular_basis_lifts(M, ext)
    else:
        clauses["regular-with-degree-one-lifts"] = False
    clauses["endomorphism-type"] = ext.flags.endomorphism_type
    if all(s.bijective for s in ext.sigmas):
        clauses["weak-compatibility"] = weak_compatibility_check(
            M, ext.sigmas, ext.deltas
        ).compatible
    else:
        clauses["weak-compatibility"] = False
    fired = next((name for name, val in clauses.items() if val), None)

    gaps = []
    polys = skew_polys_upto(ext, target_degree_bound)
    order = ext.order
    targets = monomials_upto(ext.n, target_degree_bound)
    for m in induced_elements_upto(M, ext, element_degree_bound):
        ok, _ = is_good(m)
        if not ok:
            continue
        for beta in targets:
            if not order.geq(beta, m.lm()):
                continue
            if _good_multiple_with_lm(m, beta, polys) is None:
                gaps.append((m, beta))
    return GoodModuleCertificate(
        module=M,
        clauses=clauses,
        fired=fired,
        falsifier_gaps=gaps,
        element_degree_bound=element_degree_bound,
        target_degree_bound=target_degree_bound,
    )


def _regular_basis_lifts(M: FiniteModule, ext: SkewPBWExtension) -> bool:
    polys = skew_polys_upto(ext, 1)
    singles = [
        tuple(1 if k == i else 0 for k in range(ext.n)) for i in range(ext.n)
    ]
    for r in M.nonzero_elements():
        base = induced_constant(ext, M, r)
        for mono in singles:
            if _good_multiple_with_lm(base, mono, polys) is None:
                return False
    return True
