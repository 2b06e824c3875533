"""Batch command-line front end.

Subcommands load ring/extension/module JSON files, run one operation, and
emit canonical text or JSON.  Exit codes: 0 success or verified, 1 hypothesis
not certified or a falsifier found a gap, 2 usage or parse error, 3 internal
defect.  The seed defaults to 0 and can be overridden by --seed or the
SPBW_SEED environment variable; all reports are byte-identical across runs
for a fixed job.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import dimension, good, invariant, io, primes, suite, zoo
from .errors import (
    BadParameter,
    DefectError,
    HypothesisNotCertified,
    InputError,
)
from .fixtures import FIXTURE_NAMES, fixture
from .modules import FiniteModule, ann_element
from .rings import IdealSet, ideal_generate, ring_from_spec

EXIT_OK = 0
EXIT_UNCERTIFIED = 1
EXIT_USAGE = 2
EXIT_DEFECT = 3


@dataclass
class JobSpec:
    command: str
    inputs: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    output_format: str = "text"

    def __post_init__(self):
        if self.output_format not in ("text", "json"):
            raise BadParameter(f"unknown output format {self.output_format!r}")
        for key, value in self.parameters.items():
            if key.endswith("degree") and (not isinstance(value, int) or value < 0):
                raise BadParameter(f"bound {key} must be a nonnegative integer")


def _default_seed() -> int:
    return int(os.environ.get("SPBW_SEED", "0"))


def _load_extension(path):
    return io.extension_from_json(io.load_json(path))


def _load_module(path, ext=None):
    data = io.load_json(path)
    if ext is None:
        return io.module_from_json(data)
    ring_spec = data.get("ring")
    if ring_spec is not None and ring_spec != io.ring_to_json(ext.ring):
        raise BadParameter("module and extension files disagree on the coefficient ring")
    return io.module_from_json(data, ring=ext.ring)


def _element_arg(ext, module, text):
    if os.path.exists(text):
        data = io.load_json(text)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            raise BadParameter("element must be a JSON term list or a path to one")
    return io.induced_from_json(ext, module, data)


def _emit(job: JobSpec, payload: dict, text_lines):
    if job.output_format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        for line in text_lines:
            print(line)


# -- subcommand handlers -------------------------------------------------------

def cmd_validate(args) -> int:
    job = JobSpec("validate", output_format=args.format)
    lines, payload = [], {"command": "validate"}
    if args.ring:
        ring = ring_from_spec(io.load_json(args.ring))
        desc = f"finite ring with {ring.size} elements" if ring.backend == "finite" \
            else repr(ring)
        lines.append(f"ring: valid ({desc})")
        payload["ring"] = desc
    if args.algebra:
        ext = _load_extension(args.algebra)
        flags = sorted(ext.flags.as_set())
        lines.append(f"extension: valid, n={ext.n}, flags {flags}")
        payload["extension"] = {"n": ext.n, "flags": flags}
    if args.module:
        module = _load_module(args.module)
        lines.append(f"module: valid, {module.size} elements")
        payload["module"] = {"elements": module.size}
    if not (args.ring or args.algebra or args.module):
        raise BadParameter("nothing to validate; pass --ring, --algebra, or --module")
    _emit(job, payload, lines)
    return EXIT_OK


def cmd_classify(args) -> int:
    job = JobSpec("classify", output_format=args.format)
    ext = _load_extension(args.algebra)
    flags = {
        "quasi-commutative": ext.flags.quasi_commutative,
        "bijective": ext.flags.bijective,
        "endomorphism-type": ext.flags.endomorphism_type,
        "derivation-type": ext.flags.derivation_type,
    }
    _emit(job, {"command": "classify", "flags": flags},
          [f"{k}: {v}" for k, v in flags.items()])
    return EXIT_OK


def cmd_normalize(args) -> int:
    job = JobSpec("normalize", output_format=args.format)
    ext = _load_extension(args.algebra)
    result = ext.render(ext.parse(args.expr))
    _emit(job, {"command": "normalize", "input": args.expr, "normal_form": result},
          [result])
    return EXIT_OK


def cmd_good_check(args) -> int:
    job = JobSpec("good-check", parameters={"degree": args.degree}, output_format=args.format)
    ext = _load_extension(args.algebra)
    module = _load_module(args.module, ext) if args.module else FiniteModule.regular(ext.ring)
    element = _element_arg(ext, module, args.element)
    cert = good.good_equivalence_certificate(element, args.degree)
    payload = {"command": "good-check", **cert.to_dict()}
    lines = [f"element: {element.render()}", f"good: {cert.verdict} (to degree {args.degree})"]
    for name, value in cert.conditions.items():
        lines.append(f"  {name}: {value}")
    for name, witness in cert.witnesses.items():
        lines.append(f"  witness[{name}]: {witness}")
    _emit(job, payload, lines)
    return EXIT_OK


def cmd_make_good(args) -> int:
    job = JobSpec("make-good", output_format=args.format)
    ext = _load_extension(args.algebra)
    module = _load_module(args.module, ext) if args.module else FiniteModule.regular(ext.ring)
    element = _element_arg(ext, module, args.element)
    r, repaired = good.make_good(element)
    payload = {
        "command": "make-good",
        "scalar": io.element_to_json(ext.ring, r),
        "result": io.induced_to_json(repaired),
    }
    _emit(job, payload, [
        f"scalar: {ext.ring.render(r)}",
        f"good multiple: {repaired.render()}",
    ])
    return EXIT_OK


def cmd_invariants(args) -> int:
    job = JobSpec("invariants", output_format=args.format)
    ext = _load_extension(args.algebra)
    R = ext.ring
    gens = [int(x) for x in args.gens.split(",")] if args.gens else []
    ideal = ideal_generate(R, gens, "two-sided")
    rep = invariant.invariant_parts(R, ext.sigmas, ext.deltas, ideal)
    render = lambda s: "{" + ", ".join(R.render(a) for a in sorted(s)) + "}"
    payload = {
        "command": "invariants",
        "ideal": sorted(ideal.elements),
        "sigma_part": sorted(rep.sigma_part),
        "delta_part": sorted(rep.delta_part),
        "mixed_part": sorted(rep.mixed_part),
        "sigma_invariant": rep.sigma_invariant,
        "delta_invariant": rep.delta_invariant,
        "stable": rep.stable,
    }
    _emit(job, payload, [
        f"ideal: {render(ideal.elements)}",
        f"sigma part: {render(rep.sigma_part)}",
        f"delta part: {render(rep.delta_part)}",
        f"mixed part: {render(rep.mixed_part)}",
        f"sigma-invariant: {rep.sigma_invariant}",
        f"delta-invariant: {rep.delta_invariant}",
        f"stable: {rep.stable}",
    ])
    return EXIT_OK


def cmd_udim(args) -> int:
    job = JobSpec("udim", parameters={"degree": args.degree}, output_format=args.format)
    ext = _load_extension(args.algebra) if args.algebra else None
    module = _load_module(args.module, ext)
    base = dimension.udim(module)
    payload = {
        "command": "udim",
        "value": base.value,
        "witnesses": [sorted(f) for f in base.family],
        "provenance": "by-exhaustion",
    }
    lines = [f"udim: {base.value}  [by-exhaustion]"]
    for f in base.family:
        lines.append("  witness: {" + ", ".join(module.render(a) for a in sorted(f)) + "}")
    status = EXIT_OK
    if ext is not None:
        cert = good.certify_good_module(module, ext)
        if cert.fired is None:
            raise HypothesisNotCertified("no good-module clause fired for this module")
        induced = dimension.udim_induced(module, ext, args.degree, certificate=cert)
        payload["induced"] = {
            "value": induced.value,
            "provenance": induced.provenance,
            "certificate": cert.verdict,
            "falsifier": induced.falsifier.verdict,
        }
        lines.append(
            f"induced udim: {induced.value}  [{induced.provenance}, certificate: {cert.verdict}, "
            f"falsifier: {induced.falsifier.verdict} at degree {args.degree}]"
        )
        if not induced.falsifier.ok:
            status = EXIT_UNCERTIFIED
    _emit(job, payload, lines)
    return status


def cmd_ass(args) -> int:
    job = JobSpec("ass", parameters={"degree": args.degree}, output_format=args.format)
    ext = _load_extension(args.algebra)
    module = _load_module(args.module, ext)
    witnesses = primes.ass(module)
    lines = ["associated primes of the base module:"]
    payload_primes = []
    for w in witnesses:
        lines.append(
            f"  {w.annihilator.render()}  witness submodule {w.submodule.render()}"
        )
        payload_primes.append({
            "prime": sorted(w.annihilator.elements),
            "witness": sorted(w.submodule.elements),
        })
    cert = good.certify_good_module(module, ext)
    report = primes.ass_induced(module, ext, args.degree, good_certificate=cert)
    lines.append(f"induced module case: {report.case}")
    payload_entries = []
    ok = True
    for e in report.entries:
        jtxt = "{" + ", ".join(ext.ring.render(a) for a in sorted(e.generator_ideal)) + "}" \
            if e.generator_ideal is not None else "n/a"
        oracle = {True: "exact", False: "MISMATCH", None: "n/a"}[e.oracle_exact]
        lines.append(
            f"  prime {e.prime.annihilator.render()} -> span generator {jtxt}, oracle {oracle}"
        )
        payload_entries.append({
            "prime": sorted(e.prime.annihilator.elements),
            "generator_ideal": sorted(e.generator_ideal) if e.generator_ideal is not None else None,
            "oracle_exact": e.oracle_exact,
        })
        ok = ok and e.oracle_exact is not False
    if report.prime_biconditional is not None:
        lines.append(f"primality biconditional: {report.prime_biconditional}")
    payload = {
        "command": "ass",
        "base": payload_primes,
        "case": report.case,
        "entries": payload_entries,
        "biconditional": report.prime_biconditional,
    }
    _emit(job, payload, lines)
    if report.case == "inapplicable":
        return EXIT_UNCERTIFIED
    return EXIT_OK if ok else EXIT_DEFECT


def cmd_zoo(args) -> int:
    job = JobSpec("zoo", output_format=args.format)
    if args.zoo_action == "list":
        lines, payload = [], []
        for name in sorted(zoo.PRESETS):
            preset = zoo.PRESETS[name]
            params = ", ".join(f"{k}={v[0]!r}" for k, v in preset.parameters.items())
            lines.append(f"{name}: {preset.summary}" + (f"  ({params})" if params else ""))
            payload.append({"name": name, "summary": preset.summary,
                            "parameters": {k: v[0] for k, v in preset.parameters.items()}})
        _emit(job, {"command": "zoo-list", "presets": payload}, lines)
        return EXIT_OK
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise BadParameter(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    ext = zoo.build_preset(args.name, **params)
    data = io.extension_to_json(ext)
    expr, expected = zoo.PRESETS[args.name].signature(ext)
    lines = [
        f"built {args.name}: n={ext.n}, flags {sorted(ext.flags.as_set())}",
        f"signature: {expr} -> {ext.render(ext.parse(expr))}",
    ]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
        lines.append(f"wrote {args.out}")
        _emit(job, {"command": "zoo-build", "written": args.out}, lines)
    else:
        if args.format == "text":
            lines.append(json.dumps(data, indent=2, sort_keys=True))
        _emit(job, {"command": "zoo-build", "extension": data}, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    job = JobSpec("verify", parameters={"degree": args.degree}, output_format=args.format)
    names = list(FIXTURE_NAMES) if args.fixture.lower() == "all" else [args.fixture]
    result = suite.run_suite(names, degree=args.degree, seed=args.seed)
    payload = {"command": "verify", "lines": result.lines, "failures": result.failures}
    _emit(job, payload, result.lines)
    return EXIT_OK if not result.failures else EXIT_UNCERTIFIED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spbw",
        description="exact arithmetic and module invariants for skew PBW extensions",
    )
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--seed", type=int, default=_default_seed(),
                        help="seed for sampled checks (default: SPBW_SEED or 0)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallelism cap (operations are pure; currently single-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate ring/extension/module files")
    p.add_argument("--ring")
    p.add_argument("--algebra")
    p.add_argument("--module")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("classify", help="classification flags of an extension")
    p.add_argument("--algebra", required=True)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("normalize", help="normal form of an infix expression")
    p.add_argument("--algebra", required=True)
    p.add_argument("--expr", required=True)
    p.set_defaults(handler=cmd_normalize)

    p = sub.add_parser("good-check", help="goodness certificate for an induced element")
    p.add_argument("--algebra", required=True)
    p.add_argument("--module")
    p.add_argument("--element", required=True)
    p.add_argument("--degree", type=int, default=2)
    p.set_defaults(handler=cmd_good_check)

    p = sub.add_parser("make-good", help="repair an element to a good multiple")
    p.add_argument("--algebra", required=True)
    p.add_argument("--module")
    p.add_argument("--element", required=True)
    p.set_defaults(handler=cmd_make_good)

    p = sub.add_parser("invariants", help="invariant parts of a generated ideal")
    p.add_argument("--algebra", required=True)
    p.add_argument("--gens", default="", help="comma-separated element ids")
    p.set_defaults(handler=cmd_invariants)

    p = sub.add_parser("udim", help="uniform dimension, optionally transferred")
    p.add_argument("--module", required=True)
    p.add_argument("--algebra")
    p.add_argument("--degree", type=int, default=2)
    p.set_defaults(handler=cmd_udim)

    p = sub.add_parser("ass", help="associated primes of base and induced modules")
    p.add_argument("--module", required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--degree", type=int, default=2)
    p.set_defaults(handler=cmd_ass)

    p = sub.add_parser("zoo", help="named extension presets")
    zsub = p.add_subparsers(dest="zoo_action", required=True)
    pl = zsub.add_parser("list", help="list presets")
    pl.set_defaults(handler=cmd_zoo)
    pb = zsub.add_parser("build", help="build a preset and emit its JSON")
    pb.add_argument("name")
    pb.add_argument("--param", action="append", help="key=value, repeatable")
    pb.add_argument("--out", help="write the extension JSON to a file")
    pb.set_defaults(handler=cmd_zoo)

    p = sub.add_parser("verify", help="run the verification suite on fixtures")
    p.add_argument("--fixture", required=True,
                   help="fixture name, FIX1..FIX4, or 'all'")
    p.add_argument("--degree", type=int, default=2)
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except HypothesisNotCertified as exc:
        print(f"hypothesis not certified: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except DefectError as exc:
        print(f"internal defect: {exc}", file=sys.stderr)
        return EXIT_DEFECT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
