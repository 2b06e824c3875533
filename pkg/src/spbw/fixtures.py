"""Shared desk-scale fixtures used by the verification suite and the tests.

Four small extensions exercising the interesting corners: a product ring with
a coordinate swap (bijective, endomorphism type), a commutative polynomial
ring over Z/4, q-difference operators over Q[y] (the one polynomial-backend
fixture), and the Frobenius twist on GF(4).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import BadParameter
from .extension import SkewPBWExtension, build_extension
from .modules import FiniteModule
from .rings import (
    RingMap,
    SigmaDerivation,
    build_poly_ring,
    galois_field,
    product_ring,
    zmod,
)


@dataclass
class Fixture:
    name: str
    aliases: tuple
    description: str
    extension: SkewPBWExtension

    @property
    def ring(self):
        return self.extension.ring

    def regular_module(self) -> FiniteModule:
        return FiniteModule.regular(self.ring)


def f2xf2_swap() -> Fixture:
    ring = product_ring([zmod(2), zmod(2)])
    swap = RingMap(ring, table=[0, 2, 1, 3])
    ext = build_extension(ring, 1, [swap], var_names=["x"])
    return Fixture(
        name="f2xf2-swap",
        aliases=("FIX1",),
        description="F2 x F2 with the coordinate swap, no derivation",
        extension=ext,
    )


def z4_id() -> Fixture:
    ring = zmod(4)
    ext = build_extension(ring, 1, [RingMap.identity(ring)], var_names=["x"])
    return Fixture(
        name="z4-id",
        aliases=("FIX2",),
        description="the commutative polynomial ring (Z/4)[x]",
        extension=ext,
    )


def dqh_q() -> Fixture:
    ring = build_poly_ring({"kind": "q"}, ["y"])
    sigma = RingMap(ring, images={"y": "2*y"})
    delta = SigmaDerivation(sigma, gen_values={"y": "1"})
    ext = build_extension(ring, 1, [sigma], [delta], var_names=["x"])
    return Fixture(
        name="dqh-q",
        aliases=("FIX3",),
        description="q-difference operators over Q[y] with q=2, h=1",
        extension=ext,
    )


def f4_frob() -> Fixture:
    ring = galois_field(2, 2)
    frob = RingMap(ring, table=[ring.mul(a, a) for a in range(ring.size)])
    ext = build_extension(ring, 1, [frob], var_names=["x"])
    return Fixture(
        name="f4-frob",
        aliases=("FIX4",),
        description="GF(4) with the Frobenius twist",
        extension=ext,
    )


_BUILDERS = {
    "f2xf2-swap": f2xf2_swap,
    "z4-id": z4_id,
    "dqh-q": dqh_q,
    "f4-frob": f4_frob,
}

_ALIASES = {
    "fix1": "f2xf2-swap",
    "fix2": "z4-id",
    "fix3": "dqh-q",
    "fix4": "f4-frob",
}

FIXTURE_NAMES = tuple(_BUILDERS)
FINITE_FIXTURES = ("f2xf2-swap", "z4-id", "f4-frob")


def fixture(name: str) -> Fixture:
    key = name.lower()
    key = _ALIASES.get(key, key)
    if key not in _BUILDERS:
        raise BadParameter(
            f"unknown fixture {name!r}; known: {sorted(FIXTURE_NAMES)} plus FIX1..FIX4"
        )
    return _BUILDERS[key]()


def all_fixtures():
    return [fixture(name) for name in FIXTURE_NAMES]
