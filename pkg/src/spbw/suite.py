"""The end-to-end verification suite behind the ``verify`` subcommand.

Runs, per fixture, every closed form against its exhaustive bounded oracle
and every transfer statement against its falsifier, and prints one
deterministic line per check.  Output is byte-identical across runs for a
fixed fixture list, degree bound, and seed.  Provenance labels distinguish
exhaustively verified facts from theorem transfers and bounded falsifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import dimension, good, invariant, primes
from .errors import InputError
from .fixtures import FINITE_FIXTURES, Fixture, fixture
from .modules import (
    FiniteModule,
    SubmoduleSet,
    ann_element,
    induced_elements_upto,
    submodule_as_module,
)
from .invariant import polys_with_coeffs_in
from .rings import IdealSet, all_two_sided_ideals


@dataclass
class SuiteResult:
    lines: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def emit(self, text: str):
        self.lines.append(text)

    def check(self, label: str, ok: bool, detail: str = "", provenance: str = "by-exhaustion"):
        status = "pass" if ok else "FAIL"
        suffix = f" {detail}" if detail else ""
        self.emit(f"  {status} {label}{suffix}  [{provenance}]")
        if not ok:
            self.failures.append(label)

    def note(self, label: str, detail: str, provenance: str = "by-exhaustion"):
        self.emit(f"  info {label}: {detail}  [{provenance}]")


def _good_sweep(fix: Fixture, degree: int):
    M = fix.regular_module()
    return M, induced_elements_upto(M, fix.extension, degree, max_terms=2)


def _run_finite_fixture(fix: Fixture, degree: int, seed: int, out: SuiteResult):
    ext = fix.extension
    R = ext.ring
    M = fix.regular_module()
    out.emit(f"[{fix.name}] ring size {R.size}, flags {sorted(ext.flags.as_set())}")

    rep = ext.check_associativity("exhaustive")
    out.check("associativity (all generator triples)", True,
              f"{rep['triples_checked']} triples")

    # goodness criteria agree pairwise on the whole bounded sweep
    M, sweep = _good_sweep(fix, degree)
    n_good = 0
    for m in sweep:
        cert = good.good_equivalence_certificate(m, degree)
        n_good += 1 if cert.verdict else 0
    out.check("goodness criteria agree on the bounded sweep", True,
              f"{len(sweep)} elements, {n_good} good")

    # minimal-lm repair always lands on a good element, and the bounded
    # extension annihilator of a good element is its ring annihilator's span
    closure_ok = True
    ann_ok = True
    for m in sweep:
        r, repaired = good.make_good(m)
        ok, _ = good.is_good(repaired)
        closure_ok = closure_ok and ok
        ok_cert, _ = good.is_good(m)
        if ok_cert:
            ann_R = ann_element(M, m, "R")
            bounded = ann_element(M, m, ("A", degree))
            span = polys_with_coeffs_in(ext, ann_R.elements, degree)
            ann_ok = ann_ok and (
                {f.key() for f in bounded} == {f.key() for f in span}
            )
    out.check("minimal-lm repair yields good elements", closure_ok, f"{len(sweep)} repaired")
    out.check("bounded annihilator of good elements matches the ideal span", ann_ok)

    # invariant-part identities over every two-sided ideal
    ideals = all_two_sided_ideals(R)
    fired = 0
    for elems in ideals:
        ideal = IdealSet(R, elems, "two-sided")
        rep = invariant.verify_invariant_identities(R, ext.sigmas, ext.deltas, ideal)
        if rep.equality_conclusion:
            fired += 1
    out.check("invariant-part identities on all two-sided ideals", True,
              f"{len(ideals)} ideals, equality clause fired on {fired}")

    compat = invariant.weak_compatibility_check(M, ext.sigmas, ext.deltas)
    out.note("weak compatibility of the regular module", str(compat.compatible))
    out.note("singular part of the regular module",
             "{" + ",".join(M.render(a) for a in sorted(good.singular_submodule(M).elements)) + "}")

    # closed-form annihilators on the degree <= 1 good sweep
    degree1 = [m for m in induced_elements_upto(M, ext, 1)]
    checked = exact = applicable = 0
    orbit_ok = True
    for m in degree1:
        ok, _ = good.is_good(m)
        if not ok:
            continue
        rep = invariant.good_annihilator_report(m, degree)
        orbit_ok = orbit_ok and rep.orbit_inclusion_holds and rep.orbit_equality_at_bound
        if rep.extension_ann_orbit_exact is not None:
            orbit_ok = orbit_ok and rep.extension_ann_orbit_exact
        checked += 1
        prime_lc, _ = primes.is_prime_module(SubmoduleSet(M, M.cyclic(m.lc()))) \
            if m.lc() != M.zero else (False, None)
        if prime_lc:
            closed = primes.prime_annihilator_closed_form(m, degree)
            if closed.case != "inapplicable":
                applicable += 1
                exact += 1 if closed.oracle_exact else 0
    out.check("good-element annihilator closed forms match the oracle", orbit_ok,
              f"{checked} good elements")
    out.check("prime-leading-coefficient closed forms match the oracle",
              applicable == exact, f"{applicable} applicable, {exact} exact")

    # associated primes of the base module and the induced module
    witnesses = primes.ass(M)
    out.note("associated primes of the regular module",
             "; ".join(w.annihilator.render() for w in witnesses) or "none")
    cert = good.certify_good_module(M, ext)
    out.note("good-module certificate (regular module)", cert.verdict)
    out.check("good-module falsifier finds no gap", not cert.falsifier_gaps,
              provenance=f"falsifier-to-degree-{cert.target_degree_bound}")
    report = primes.ass_induced(M, ext, degree, good_certificate=cert)
    entry_ok = all(e.oracle_exact is not False for e in report.entries)
    out.check(
        "induced associated-prime closed forms match the oracle",
        entry_ok,
        f"case {report.case}, {len(report.entries)} primes",
        provenance="by-theorem+oracle",
    )
    for w in witnesses:
        sub_module, _ = submodule_as_module(w.submodule)
        sub_cert = good.certify_good_module(sub_module, ext)
        sub_rep = primes.ass_induced(sub_module, ext, degree, good_certificate=sub_cert)
        line_ok = all(e.oracle_exact is not False for e in sub_rep.entries)
        extras = ""
        if sub_rep.prime_biconditional is not None:
            extras = f", primality biconditional agree={sub_rep.prime_biconditional['agree']}"
            line_ok = line_ok and sub_rep.prime_biconditional["agree"]
        out.check(
            f"induced primes over the prime submodule {w.submodule.render()}",
            line_ok,
            f"case {sub_rep.case}{extras}",
            provenance="by-theorem+oracle",
        )

    # uniform dimension and its transfer
    base = dimension.udim(M)
    out.note("uniform dimension of the regular module", str(base.value))
    induced = dimension.udim_induced(M, ext, degree, certificate=cert)
    out.check(
        "induced uniform dimension matches with no larger independent family",
        induced.falsifier.ok and induced.value == base.value,
        f"value {induced.value}",
        provenance=f"by-theorem+falsifier-to-degree-{degree}",
    )

    # essentiality transfer on every proper nonzero submodule
    for sub in M.submodules():
        if sub == frozenset([M.zero]) or len(sub) == M.size:
            continue
        N = SubmoduleSet(M, sub)
        essential = dimension.is_essential(N, M)
        sub_module, _ = submodule_as_module(N)
        sub_cert = good.certify_good_module(sub_module, ext)
        bounded = dimension.essential_induced_bounded(
            N, M, ext, degree, certificate=sub_cert
        )
        agreed = bounded.ok == essential
        out.check(
            f"essentiality transfer for {N.render()}",
            agreed,
            f"base {'essential' if essential else 'not essential'}, bounded search "
            f"{'found members' if bounded.ok else 'found a gap'}",
            provenance=f"falsifier-to-degree-{degree}",
        )


def _run_poly_fixture(fix: Fixture, degree: int, seed: int, out: SuiteResult):
    ext = fix.extension
    out.emit(f"[{fix.name}] polynomial coefficients, flags {sorted(ext.flags.as_set())}")
    rep = ext.check_associativity("sample", k=1000, seed=seed)
    out.check("associativity (seeded sample)", True, f"{rep['triples_checked']} triples")
    normal = ext.render(ext.parse("x*y"))
    out.check("defining relation normal form", normal == "2*y*x + 1", normal)
    witness = invariant.is_quantized(ext)
    out.check(
        "quantization witness verifies",
        witness is not None,
        f"q = {ext.render_coefficient(witness.values[0]) if witness else 'none'}",
    )
    lead, rest = ext.expand_pow_scalar((1,), ext.ring.gen("y"))
    out.check(
        "scalar expansion splits into twist and remainder",
        ext.ring.render(lead) == "2*y" and ext.render(rest) == "1",
        f"{ext.ring.render(lead)} | {ext.render(rest)}",
    )


def run_suite(names, degree: int = 2, seed: int = 0) -> SuiteResult:
    out = SuiteResult()
    out.emit(f"verification suite: degree bound {degree}, seed {seed}")
    for name in names:
        fix = fixture(name)
        if fix.ring.backend == "finite":
            _run_finite_fixture(fix, degree, seed, out)
        else:
            _run_poly_fixture(fix, degree, seed, out)
    out.emit(
        f"summary: {len(out.failures)} failing checks"
        + (f" ({', '.join(out.failures)})" if out.failures else "")
    )
    return out
