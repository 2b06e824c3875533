"""Validated presets for the named extension families.

Every preset builds its extension from commutation data, runs a sampled
associativity audit, checks its classification flags, and replays a signature
relation through the multiplication engine, comparing against the expected
normal form bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import AssociativityFailure, BadParameter
from .extension import SkewPBWExtension, build_extension
from .rings import (
    FieldSpec,
    PolynomialRing,
    RingMap,
    SigmaDerivation,
    build_poly_ring,
    rationals,
    ring_from_spec,
    zmod,
)


@dataclass
class Preset:
    name: str
    summary: str
    parameters: dict              # name -> (default, description)
    build: Callable[..., SkewPBWExtension]
    signature: Callable[[SkewPBWExtension], tuple]  # (expression, expected text)
    expected_flags: dict


def _parse_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if "/" in value:
            num, den = value.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(value))
    raise BadParameter(f"expected an exact rational, got {value!r}")


def _base_ring(base):
    if base in (None, "q", "Q"):
        return None  # rationals, chosen by each preset
    if isinstance(base, str) and base.startswith("gf"):
        return int(base[2:])
    if isinstance(base, int):
        return base
    raise BadParameter(f"unknown base field {base!r}")


# -- quantum plane: two variables over a field, x*y = q*y*x -------------------

def build_quantum_plane(q=2, base="gf3") -> SkewPBWExtension:
    p = _base_ring(base)
    if p is not None:
        R = zmod(p)
        qv = R.from_int(int(q))
        if not R.is_unit(qv):
            raise BadParameter("quantum-plane parameter must be a unit")
        identity = RingMap.identity(R)
        return build_extension(
            R, 2, [identity, identity], d_coeffs={(0, 1): qv}, var_names=["y", "x"]
        )
    R = rationals()
    qv = R.constant(_parse_scalar(q))
    if not R.is_unit(qv):
        raise BadParameter("quantum-plane parameter must be nonzero")
    identity = RingMap.identity(R)
    return build_extension(
        R, 2, [identity, identity], d_coeffs={(0, 1): qv}, var_names=["y", "x"]
    )


def signature_quantum_plane(ext):
    q = ext.d_coeffs[(0, 1)]
    rendered = ext.render_coefficient(q)
    return "x*y", f"{rendered}*y*x"


# -- q-difference operators: one variable over k[y] ---------------------------

def build_dqh(q=2, h=1) -> SkewPBWExtension:
    R = build_poly_ring({"kind": "q"}, ["y"])
    qv, hv = _parse_scalar(q), _parse_scalar(h)
    if qv == 0:
        raise BadParameter("the twist parameter must be nonzero")
    y = R.gen("y")
    sigma = RingMap(R, images={"y": R.mul(R.constant(qv), y)})
    delta = SigmaDerivation(sigma, gen_values={"y": R.constant(hv)})
    return build_extension(R, 1, [sigma], [delta], var_names=["x"])


def signature_dqh(ext):
    R = ext.ring
    q = ext.sigmas[0].apply(R.gen("y"))
    head = ext.render_coefficient(q)
    h = ext.deltas[0].apply(R.gen("y"))
    tail = "" if R.is_zero(h) else f" + {ext.render_coefficient(h)}"
    return "x*y", f"{head}*x{tail}"


# -- additive analogue of the Weyl algebra ------------------------------------

def build_an(n=1, q=(3,)) -> SkewPBWExtension:
    if isinstance(q, (int, str, Fraction)):
        q = (q,)
    if len(q) != n:
        raise BadParameter(f"need {n} twist parameters, got {len(q)}")
    qs = [_parse_scalar(x) for x in q]
    if any(x == 0 for x in qs):
        raise BadParameter("twist parameters must be nonzero")
    R = build_poly_ring({"kind": "q"}, [f"t{i+1}" for i in range(n)])
    sigmas, deltas = [], []
    for i in range(n):
        images = {v: R.gen(v) for v in R.variables}
        images[f"t{i+1}"] = R.mul(R.constant(qs[i]), R.gen(f"t{i+1}"))
        sigma = RingMap(R, images=images)
        values = {v: R.zero for v in R.variables}
        values[f"t{i+1}"] = R.one
        deltas.append(SigmaDerivation(sigma, gen_values=values))
        sigmas.append(sigma)
    return build_extension(
        R, n, sigmas, deltas, var_names=[f"x{i+1}" for i in range(n)]
    )


def signature_an(ext):
    R = ext.ring
    q1 = ext.sigmas[0].apply(R.gen("t1"))
    return "x1*t1", f"{ext.render_coefficient(q1)}*x1 + 1"


# -- diffusion algebra ---------------------------------------------------------

def build_diffusion(n=2, c=None) -> SkewPBWExtension:
    """Variables D_1..D_n over k[x_1..x_n]; for i<j the commutation is
    D_j D_i = (c_ij/c_ji) D_i D_j + (1/c_ji) (x_i D_j - x_j D_i)."""
    if n < 2:
        raise BadParameter("the diffusion algebra needs at least two variables")
    coeffs = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                coeffs[(i, j)] = Fraction(2) if i < j else Fraction(1)
    for key, value in (c or {}).items():
        coeffs[key] = _parse_scalar(value)
    if any(v == 0 for v in coeffs.values()):
        raise BadParameter("diffusion coefficients must be nonzero")
    R = build_poly_ring({"kind": "q"}, [f"x{i+1}" for i in range(n)])
    identity = RingMap.identity(R)
    sigmas = [identity] * n
    d_coeffs, relations = {}, {}
    for i in range(n):
        for j in range(i + 1, n):
            cij, cji = coeffs[(i, j)], coeffs[(j, i)]
            d_coeffs[(i, j)] = R.constant(cij / cji)
            rlin = [R.zero] * n
            rlin[j] = R.mul(R.constant(1 / cji), R.gen(f"x{i+1}"))
            rlin[i] = R.neg(R.mul(R.constant(1 / cji), R.gen(f"x{j+1}")))
            relations[(i, j)] = (R.zero, rlin)
    return build_extension(
        R, n, sigmas, None, d_coeffs=d_coeffs, relations=relations,
        var_names=[f"D{i+1}" for i in range(n)],
    )


def signature_diffusion(ext):
    R = ext.ring
    d = ext.d_coeffs[(0, 1)]
    r0, rlin = ext.relations[(0, 1)]
    parts = [f"{ext.render_coefficient(d)}*D1*D2"]
    for k in (1, 0):
        if not R.is_zero(rlin[k]):
            parts.append(f"{ext.render_coefficient(rlin[k])}*D{k+1}")
    return "D2*D1", " + ".join(parts).replace("+ (-", "+ (-")


# -- universal enveloping algebra of the rank-two orthogonal Lie algebra ------

SO5_PAIRS = [(a, b) for a in range(1, 6) for b in range(a + 1, 6)]


def so5_bracket(p1, p2) -> dict:
    """Structure constants of the bracket on basis pairs (a < b)."""
    (a, b), (mu, nu) = p1, p2

    def delta(x, y):
        return 1 if x == y else 0

    raw = {
        (a, nu): delta(b, mu),
        (b, mu): delta(a, nu),
        (a, mu): -delta(b, nu),
        (b, nu): -delta(a, mu),
    }
    out: dict = {}
    for (x, y), coeff in raw.items():
        if coeff == 0 or x == y:
            continue
        key, sign = ((x, y), 1) if x < y else ((y, x), -1)
        out[key] = out.get(key, 0) + sign * coeff
    return {k: v for k, v in out.items() if v != 0}


def build_so5() -> SkewPBWExtension:
    R = rationals()
    identity = RingMap.identity(R)
    n = len(SO5_PAIRS)
    d_coeffs, relations = {}, {}
    index = {pair: i for i, pair in enumerate(SO5_PAIRS)}
    for i in range(n):
        for j in range(i + 1, n):
            d_coeffs[(i, j)] = R.one
            bracket = so5_bracket(SO5_PAIRS[j], SO5_PAIRS[i])
            rlin = [R.zero] * n
            for pair, coeff in bracket.items():
                rlin[index[pair]] = R.constant(coeff)
            relations[(i, j)] = (R.zero, rlin)
    names = [f"J{a}{b}" for a, b in SO5_PAIRS]
    return build_extension(
        R, n, [identity] * n, None, d_coeffs=d_coeffs, relations=relations,
        var_names=names,
    )


def signature_so5(ext):
    # [J12, J23] = J13 and PBW reordering: J23*J12 = J12*J23 - J13
    return "J23*J12", "J12*J23 + -1*J13"


# -- quantized rank-one orthogonal enveloping algebra --------------------------

def build_uqso3(s=2) -> SkewPBWExtension:
    """Parameter s stands in for the square root of the twist q = s^2."""
    sv = _parse_scalar(s)
    if sv == 0:
        raise BadParameter("the square-root parameter must be nonzero")
    R = rationals()
    q = sv * sv
    identity = RingMap.identity(R)
    d_coeffs = {
        (0, 1): R.constant(q),
        (0, 2): R.constant(1 / q),
        (1, 2): R.constant(q),
    }
    zero3 = [R.zero, R.zero, R.zero]
    rel12 = list(zero3)
    rel12[2] = R.constant(-sv)
    rel13 = list(zero3)
    rel13[1] = R.constant(1 / sv)
    rel23 = list(zero3)
    rel23[0] = R.constant(-sv)
    relations = {
        (0, 1): (R.zero, rel12),
        (0, 2): (R.zero, rel13),
        (1, 2): (R.zero, rel23),
    }
    return build_extension(
        R, 3, [identity] * 3, None, d_coeffs=d_coeffs, relations=relations,
        var_names=["I1", "I2", "I3"],
    )


def signature_uqso3(ext):
    R = ext.ring
    q = ext.d_coeffs[(0, 1)]
    s = ext.relations[(0, 1)][1][2]
    return "I2*I1", f"{ext.render_coefficient(q)}*I1*I2 + {ext.render_coefficient(s)}*I3"


# -- three-generator quadratic algebra with an exponential parameter ----------

def build_aw3(w=2, b=1, c0=1, c1=1, d0=0, d1=0) -> SkewPBWExtension:
    """The exponential weight is an exact nonzero rational w; the relations
    only use w and 1/w."""
    wv = _parse_scalar(w)
    if wv == 0:
        raise BadParameter("the weight parameter must be nonzero")
    bv, c0v, c1v = _parse_scalar(b), _parse_scalar(c0), _parse_scalar(c1)
    d0v, d1v = _parse_scalar(d0), _parse_scalar(d1)
    R = rationals()
    identity = RingMap.identity(R)
    d_coeffs = {
        (0, 1): R.constant(wv * wv),
        (0, 2): R.constant(1 / (wv * wv)),
        (1, 2): R.constant(wv * wv),
    }
    rel01 = [R.zero] * 3
    rel01[2] = R.constant(-wv)
    rel02 = [R.zero] * 3
    rel02[0] = R.constant(bv / wv)
    rel02[1] = R.constant(c1v / wv)
    rel12 = [R.zero] * 3
    rel12[1] = R.constant(-wv * bv)
    rel12[0] = R.constant(-wv * c0v)
    relations = {
        (0, 1): (R.zero, rel01),
        (0, 2): (R.constant(d1v / wv), rel02),
        (1, 2): (R.constant(-wv * d0v), rel12),
    }
    return build_extension(
        R, 3, [identity] * 3, None, d_coeffs=d_coeffs, relations=relations,
        var_names=["K0", "K1", "K2"],
    )


def signature_aw3(ext):
    R = ext.ring
    dd = ext.d_coeffs[(0, 1)]
    s = ext.relations[(0, 1)][1][2]
    return "K1*K0", f"{ext.render_coefficient(dd)}*K0*K1 + {ext.render_coefficient(s)}*K2"


PRESETS = {
    "quantum-plane": Preset(
        name="quantum-plane",
        summary="two variables over a field with x*y = q*y*x",
        parameters={"q": (2, "unit twist"), "base": ("gf3", "'q' or 'gf<p>'")},
        build=build_quantum_plane,
        signature=signature_quantum_plane,
        expected_flags={"quasi-commutative": True, "bijective": True,
                        "endomorphism-type": True, "derivation-type": True},
    ),
    "dqh": Preset(
        name="dqh",
        summary="q-difference operators over k[y]: x*y = q*y*x + h",
        parameters={"q": (2, "twist"), "h": (1, "shift")},
        build=build_dqh,
        signature=signature_dqh,
        expected_flags={"quasi-commutative": False, "bijective": True,
                        "endomorphism-type": False, "derivation-type": False},
    ),
    "an": Preset(
        name="an",
        summary="additive Weyl analogue over k[t..]: x_i*t_i = q_i*t_i*x_i + 1",
        parameters={"n": (1, "variable pairs"), "q": ((3,), "twists")},
        build=build_an,
        signature=signature_an,
        expected_flags={"quasi-commutative": False, "bijective": True,
                        "endomorphism-type": False, "derivation-type": False},
    ),
    "diffusion": Preset(
        name="diffusion",
        summary="diffusion algebra over k[x..] with affine commutation",
        parameters={"n": (2, "generators"), "c": (None, "coefficient table")},
        build=build_diffusion,
        signature=signature_diffusion,
        expected_flags={"quasi-commutative": False, "bijective": True,
                        "endomorphism-type": True, "derivation-type": True},
    ),
    "uso5": Preset(
        name="uso5",
        summary="enveloping algebra of the 10-dimensional orthogonal Lie algebra",
        parameters={},
        build=build_so5,
        signature=signature_so5,
        expected_flags={"quasi-commutative": False, "bijective": True,
                        "endomorphism-type": True, "derivation-type": True},
    ),
    "uqso3": Preset(
        name="uqso3",
        summary="quantized orthogonal algebra on three generators, q = s^2",
        parameters={"s": (2, "square root of the twist")},
        build=build_uqso3,
        signature=signature_uqso3,
        expected_flags={"quasi-commutative": False, "bijective": True,
                        "endomorphism-type": True, "derivation-type": True},
    ),
    "aw3": Preset(
        name="aw3",
        summary="three-generator quadratic algebra with exponential weight w",
        parameters={"w": (2, "weight"), "b": (1, ""), "c0": (1, ""), "c1": (1, ""),
                    "d0": (0, ""), "d1": (0, "")},
        build=build_aw3,
        signature=signature_aw3,
        expected_flags={"quasi-commutative": False, "bijective": True,
                        "endomorphism-type": True, "derivation-type": True},
    ),
}


def build_preset(name: str, selftest: bool = True, assoc_sample: int = 200, **params):
    """Build a preset and run its signature-relation self-test."""
    if name not in PRESETS:
        raise BadParameter(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
    preset = PRESETS[name]
    ext = preset.build(**params)
    if selftest:
        run_selftest(preset, ext, assoc_sample=assoc_sample)
    return ext


def run_selftest(preset: Preset, ext: SkewPBWExtension, assoc_sample: int = 200, seed: int = 0):
    expr, expected = preset.signature(ext)
    got = ext.render(ext.parse(expr))
    if got != expected:
        raise AssociativityFailure(
            f"signature relation of {preset.name} normalizes to {got!r}, expected {expected!r}"
        )
    flags = ext.flags
    actual = {
        "quasi-commutative": flags.quasi_commutative,
        "bijective": flags.bijective,
        "endomorphism-type": flags.endomorphism_type,
        "derivation-type": flags.derivation_type,
    }
    for key, want in preset.expected_flags.items():
        if actual[key] != want:
            raise AssociativityFailure(
                f"{preset.name}: flag {key} is {actual[key]}, expected {want}"
            )
    if assoc_sample:
        ext.check_associativity("sample", k=assoc_sample, seed=seed)
