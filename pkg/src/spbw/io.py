"""JSON serialization for rings, extensions, modules, and induced elements.

Element encoding convention: finite-ring elements travel as integer ids;
polynomial-ring elements travel as canonical strings, re-parsed on load.
Unknown keys in any object are rejected.
"""

from __future__ import annotations

import json
from typing import Optional

from .errors import BadParameter
from .extension import MonomialOrder, SkewPBWExtension, build_extension
from .modules import FiniteModule, InducedElement, build_module
from .rings import (
    PolynomialRing,
    RingMap,
    SigmaDerivation,
    ring_from_spec,
)


def _check_keys(obj: dict, allowed: set, what: str):
    unknown = set(obj) - allowed
    if unknown:
        raise BadParameter(f"unknown keys in {what}: {sorted(unknown)}")


# -- elements -----------------------------------------------------------------

def element_to_json(ring, value):
    if ring.backend == "finite":
        return int(value)
    return ring.render(value)


def element_from_json(ring, data):
    if ring.backend == "finite":
        if not isinstance(data, int) or not 0 <= data < ring.size:
            raise BadParameter(f"finite ring element must be an id in range, got {data!r}")
        return data
    if isinstance(data, str):
        return ring.parse(data)
    if isinstance(data, int):
        return ring.from_int(data)
    raise BadParameter(f"cannot read polynomial element from {data!r}")


# -- ring specs ----------------------------------------------------------------

def ring_to_json(ring) -> dict:
    if ring.backend == "poly":
        base = {"kind": "q"} if ring.field.p == 0 else {"kind": "gf", "p": ring.field.p}
        if not ring.variables:
            return {"kind": "q"}
        return {"kind": "poly", "base": base, "vars": list(ring.variables)}
    spec = getattr(ring, "json_spec", None)
    if spec is None:
        return {
            "kind": "table",
            "add": [list(row) for row in ring.add_table],
            "mul": [list(row) for row in ring.mul_table],
        }
    return spec


# -- ring maps and derivations ---------------------------------------------------

def map_to_json(m: RingMap) -> dict:
    if m.is_identity():
        return {"identity": True}
    if m.table is not None:
        return {"table": list(m.table)}
    return {"images": {v: m.ring.render(img) for v, img in zip(m.ring.variables, m.images)}}


def map_from_json(ring, data) -> RingMap:
    if isinstance(data, dict) and data.get("identity"):
        return RingMap.identity(ring)
    if isinstance(data, dict) and "table" in data:
        _check_keys(data, {"table"}, "ring map")
        return RingMap(ring, table=data["table"])
    if isinstance(data, dict) and "images" in data:
        _check_keys(data, {"images"}, "ring map")
        return RingMap(ring, images=data["images"])
    if isinstance(data, list):
        return RingMap(ring, table=data)
    raise BadParameter(f"cannot read ring map from {data!r}")


def derivation_to_json(d: SigmaDerivation) -> dict:
    if d.is_zero_map():
        return {"zero": True}
    if d.table is not None:
        return {"table": list(d.table)}
    return {
        "values": {v: d.ring.render(val) for v, val in zip(d.ring.variables, d.gen_values)}
    }


def derivation_from_json(sigma: RingMap, data) -> SigmaDerivation:
    ring = sigma.ring
    if isinstance(data, dict) and data.get("zero"):
        return SigmaDerivation.zero(sigma)
    if isinstance(data, dict) and "table" in data:
        _check_keys(data, {"table"}, "derivation")
        return SigmaDerivation(sigma, table=data["table"])
    if isinstance(data, dict) and "values" in data:
        _check_keys(data, {"values"}, "derivation")
        return SigmaDerivation(sigma, gen_values=data["values"])
    if isinstance(data, list):
        return SigmaDerivation(sigma, table=data)
    raise BadParameter(f"cannot read derivation from {data!r}")


# -- extensions -------------------------------------------------------------------

EXTENSION_KEYS = {"ring", "n", "sigma", "delta", "d", "rel", "order", "vars"}


def extension_to_json(ext: SkewPBWExtension) -> dict:
    R = ext.ring
    out = {
        "ring": ring_to_json(R),
        "n": ext.n,
        "sigma": [map_to_json(s) for s in ext.sigmas],
        "delta": [derivation_to_json(d) for d in ext.deltas],
        "d": {
            f"{i+1},{j+1}": element_to_json(R, v) for (i, j), v in sorted(ext.d_coeffs.items())
        },
        "rel": {
            f"{i+1},{j+1}": {
                "r0": element_to_json(R, r0),
                "r": [element_to_json(R, rk) for rk in rlin],
            }
            for (i, j), (r0, rlin) in sorted(ext.relations.items())
        },
        "order": ext.order.tag,
        "vars": list(ext.var_names),
    }
    return out


def _parse_pair_key(key: str, n: int):
    try:
        i, j = (int(x) for x in key.split(","))
    except ValueError:
        raise BadParameter(f"pair key must look like 'i,j', got {key!r}")
    if not (1 <= i < j <= n):
        raise BadParameter(f"pair key {key!r} out of range for n={n}")
    return i - 1, j - 1


def extension_from_json(data: dict) -> SkewPBWExtension:
    _check_keys(data, EXTENSION_KEYS, "extension")
    for key in ("ring", "n", "sigma"):
        if key not in data:
            raise BadParameter(f"extension spec is missing {key!r}")
    ring = ring_from_spec(data["ring"])
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise BadParameter("variable count must be a positive integer")
    sigmas = [map_from_json(ring, s) for s in data["sigma"]]
    deltas_data = data.get("delta")
    if deltas_data is None:
        deltas = None
    else:
        deltas = [derivation_from_json(s, d) for s, d in zip(sigmas, deltas_data)]
    d_coeffs = {}
    for key, value in (data.get("d") or {}).items():
        d_coeffs[_parse_pair_key(key, n)] = element_from_json(ring, value)
    relations = {}
    for key, value in (data.get("rel") or {}).items():
        _check_keys(value, {"r0", "r"}, "relation")
        r0 = element_from_json(ring, value.get("r0", 0 if ring.backend == "finite" else "0"))
        rlin = [element_from_json(ring, x) for x in value.get("r", [])]
        if len(rlin) != n:
            raise BadParameter(f"relation {key!r} needs {n} linear coefficients")
        relations[_parse_pair_key(key, n)] = (r0, rlin)
    order_tag = data.get("order", "deglex")
    order = MonomialOrder.natural(order_tag, n)
    return build_extension(
        ring, n, sigmas, deltas, d_coeffs=d_coeffs, relations=relations,
        order=order, var_names=data.get("vars"),
    )


# -- modules ------------------------------------------------------------------------

MODULE_KEYS = {"ring", "elements", "add", "act", "names", "regular"}


def module_to_json(M: FiniteModule) -> dict:
    if M.is_regular_over_ring():
        return {"ring": ring_to_json(M.ring), "regular": True}
    return {
        "ring": ring_to_json(M.ring),
        "elements": M.size,
        "add": [list(row) for row in M.add_table],
        "act": [list(row) for row in M.act_table],
        "names": list(M.names),
    }


def module_from_json(data: dict, ring=None) -> FiniteModule:
    _check_keys(data, MODULE_KEYS, "module")
    if ring is None:
        if "ring" not in data:
            raise BadParameter("module spec needs a ring")
        ring = ring_from_spec(data["ring"])
    body = {k: v for k, v in data.items() if k != "ring"}
    if body.get("regular"):
        return FiniteModule.regular(ring)
    return build_module(ring, body)


# -- induced elements ------------------------------------------------------------------

def induced_to_json(m: InducedElement) -> list:
    return [
        {"monomial": list(mono), "value": int(v)} for mono, v in m.items()
    ]


def induced_from_json(ext: SkewPBWExtension, module: FiniteModule, data) -> InducedElement:
    if not isinstance(data, list):
        raise BadParameter("an induced element is a list of monomial/value terms")
    terms = {}
    for item in data:
        _check_keys(item, {"monomial", "value"}, "induced element term")
        mono = tuple(item["monomial"])
        if len(mono) != ext.n or any(e < 0 for e in mono):
            raise BadParameter(f"bad monomial {mono}")
        value = item["value"]
        if not isinstance(value, int) or not 0 <= value < module.size:
            raise BadParameter(f"bad module element id {value!r}")
        if mono in terms:
            value = module.add(terms[mono], value)
        terms[mono] = value
    return InducedElement(ext, module, terms)


def load_json(path: str):
    with open(path) as fh:
        return json.load(fh)
