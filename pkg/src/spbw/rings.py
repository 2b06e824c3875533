"""Computable coefficient rings, their endomorphisms, and twisted derivations.

Two backends:

* ``finite`` -- a ring given by complete addition/multiplication tables over
  canonical element ids ``0..size-1``.  Every law is checked exhaustively at
  construction (sampled with a fixed seed above 64 elements), and every later
  question about the ring reduces to a table walk.
* ``poly`` -- an exact multivariate commutative polynomial ring over Q or
  GF(p).  Arithmetic only: no element enumeration, no ideal sets; operations
  that need those raise ``PolynomialBackendUnsupported``.

Ring maps and twisted derivations recompute their own structural flags
(additive, multiplicative, unital, injective, bijective); nothing is trusted
from input.  The derivation law used throughout is

    delta(a*b) = sigma(a)*delta(b) + delta(a)*b,

the unique convention under which ``x*(r*s)`` associates with ``(x*r)*s``
given the commutation rule ``x*r = sigma(r)*x + delta(r)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import parsing
from .errors import (
    BadParameter,
    DuplicateVariable,
    LeibnizViolation,
    NotAdditive,
    NotBijective,
    NotMultiplicative,
    NotUnital,
    PolynomialBackendUnsupported,
    TableNotARing,
    UnsupportedSize,
)

EXHAUSTIVE_RING_CHECK_LIMIT = 64
SAMPLED_CHECK_TRIPLES = 10_000
MAX_FINITE_SIZE = 512


# ---------------------------------------------------------------------------
# finite backend
# ---------------------------------------------------------------------------

class FiniteRing:
    """Associative unital ring on ids ``0..size-1`` given by tables."""

    backend = "finite"

    def __init__(self, add_table, mul_table, names=None, check=True):
        self.size = len(add_table)
        if self.size < 1:
            raise TableNotARing("empty table")
        if self.size > MAX_FINITE_SIZE:
            raise UnsupportedSize(f"finite rings capped at {MAX_FINITE_SIZE} elements")
        self.add_table = tuple(tuple(row) for row in add_table)
        self.mul_table = tuple(tuple(row) for row in mul_table)
        for tab, what in ((self.add_table, "add"), (self.mul_table, "mul")):
            if len(tab) != self.size or any(len(row) != self.size for row in tab):
                raise TableNotARing(f"{what} table is not square of size {self.size}")
            if any(x < 0 or x >= self.size for row in tab for x in row):
                raise TableNotARing(f"{what} table entry out of range")
        self.zero = self._find_zero()
        self.one = self._find_one()
        self.neg_table = self._build_neg()
        self.names = tuple(names) if names else tuple(str(i) for i in range(self.size))
        if check:
            self._check_axioms()
        self._inv_cache: dict[int, Optional[int]] = {}
        self._one_add_order = self._additive_order(self.one)

    # -- construction helpers -------------------------------------------------

    def _find_zero(self):
        for z in range(self.size):
            if all(self.add_table[z][a] == a for a in range(self.size)):
                return z
        raise TableNotARing("no additive identity")

    def _find_one(self):
        for e in range(self.size):
            if all(self.mul_table[e][a] == a == self.mul_table[a][e] for a in range(self.size)):
                return e
        raise NotUnital("no multiplicative identity")

    def _build_neg(self):
        neg = [None] * self.size
        for a in range(self.size):
            for b in range(self.size):
                if self.add_table[a][b] == self.zero:
                    neg[a] = b
                    break
            if neg[a] is None:
                raise TableNotARing(f"element {a} has no additive inverse")
        return tuple(neg)

    def _additive_order(self, a):
        acc, k = a, 1
        while acc != self.zero:
            acc = self.add_table[acc][a]
            k += 1
        return k

    def _check_axioms(self):
        add, mul = self.add_table, self.mul_table
        n = self.size
        if n <= EXHAUSTIVE_RING_CHECK_LIMIT:
            pairs = itertools.product(range(n), repeat=2)
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(SAMPLED_CHECK_TRIPLES)]
            triples = [
                (rng.randrange(n), rng.randrange(n), rng.randrange(n))
                for _ in range(SAMPLED_CHECK_TRIPLES)
            ]
        for a, b in pairs:
            if add[a][b] != add[b][a]:
                raise TableNotARing(f"addition not commutative at ({a},{b})", witness=(a, b))
        for a, b, c in triples:
            if add[add[a][b]][c] != add[a][add[b][c]]:
                raise TableNotARing(f"addition not associative at ({a},{b},{c})", witness=(a, b, c))
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise TableNotARing(
                    f"multiplication not associative at ({a},{b},{c})", witness=(a, b, c)
                )
            if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                raise TableNotARing(f"left distributivity fails at ({a},{b},{c})", witness=(a, b, c))
            if mul[add[a][b]][c] != add[mul[a][c]][mul[b][c]]:
                raise TableNotARing(f"right distributivity fails at ({a},{b},{c})", witness=(a, b, c))

    # -- arithmetic -------------------------------------------------------------

    def add(self, a, b):
        return self.add_table[a][b]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add_table[a][self.neg_table[b]]

    def is_zero(self, a):
        return a == self.zero

    def elements(self):
        return range(self.size)

    def nonzero_elements(self):
        return (a for a in range(self.size) if a != self.zero)

    def from_int(self, k: int):
        k %= self._one_add_order
        acc = self.zero
        for _ in range(k):
            acc = self.add_table[acc][self.one]
        return acc

    def inverse(self, a):
        """Two-sided inverse of ``a`` by enumeration, or None."""
        if a not in self._inv_cache:
            found = None
            for b in range(self.size):
                if self.mul_table[a][b] == self.one and self.mul_table[b][a] == self.one:
                    found = b
                    break
            self._inv_cache[a] = found
        return self._inv_cache[a]

    def is_unit(self, a):
        return self.inverse(a) is not None

    def units(self):
        return [a for a in range(self.size) if self.is_unit(a)]

    def central_units(self):
        return [
            a
            for a in self.units()
            if all(self.mul_table[a][r] == self.mul_table[r][a] for r in range(self.size))
        ]

    def render(self, a):
        return self.names[a]

    def __repr__(self):
        return f"FiniteRing(size={self.size})"


# ---------------------------------------------------------------------------
# polynomial backend
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """Base field of a polynomial ring: Q when ``p == 0``, else GF(p)."""

    p: int = 0

    def normalize(self, c):
        if self.p:
            return int(c) % self.p
        return Fraction(c)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if self.p:
            return pow(int(a), self.p - 2, self.p) if _is_prime(self.p) else pow(int(a), -1, self.p)
        return 1 / Fraction(a)

    def render(self, c):
        if self.p:
            return str(int(c))
        f = Fraction(c)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


class Poly:
    """Immutable multivariate polynomial: sorted tuple of (exponents, coeff)."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: "PolynomialRing", terms):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", tuple(sorted(terms, reverse=True)))
        object.__setattr__(self, "_hash", hash(self.terms))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.ring.render(self)

    def is_constant(self):
        return all(all(e == 0 for e in exps) for exps, _ in self.terms)

    def constant_value(self):
        for exps, c in self.terms:
            if all(e == 0 for e in exps):
                return c
        return self.ring.field.normalize(0)

    def total_degree(self):
        return max((sum(exps) for exps, _ in self.terms), default=-1)


class PolynomialRing:
    """Exact commutative polynomial ring over Q or GF(p) (p prime)."""

    backend = "poly"

    def __init__(self, field: FieldSpec, variables: Sequence[str]):
        if field.p and not _is_prime(field.p):
            raise BadParameter(f"GF({field.p}) base requires a prime characteristic")
        if len(set(variables)) != len(variables):
            raise DuplicateVariable(f"duplicate variable in {variables}")
        self.field = field
        self.variables = tuple(variables)
        self.nvars = len(self.variables)
        self.zero = Poly(self, [])
        self.one = self.constant(1)
        self.gens = tuple(
            Poly(self, [(tuple(1 if j == i else 0 for j in range(self.nvars)), field.normalize(1))])
            for i in range(self.nvars)
        )

    def constant(self, c) -> Poly:
        c = self.field.normalize(c)
        if c == 0:
            return self.zero
        return Poly(self, [((0,) * self.nvars, c)])

    def from_int(self, k: int) -> Poly:
        return self.constant(k)

    def gen(self, name: str) -> Poly:
        try:
            return self.gens[self.variables.index(name)]
        except ValueError:
            raise BadParameter(f"unknown variable {name!r}; ring has {self.variables}")

    def _from_dict(self, d) -> Poly:
        return Poly(self, [(e, c) for e, c in d.items() if c != 0])

    def add(self, a: Poly, b: Poly) -> Poly:
        out = dict(a.terms)
        for exps, c in b.terms:
            s = self.field.add(out.get(exps, self.field.normalize(0)), c)
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        return self._from_dict(out)

    def neg(self, a: Poly) -> Poly:
        return Poly(self, [(e, self.field.neg(c)) for e, c in a.terms])

    def sub(self, a: Poly, b: Poly) -> Poly:
        return self.add(a, self.neg(b))

    def mul(self, a: Poly, b: Poly) -> Poly:
        out: dict = {}
        for ea, ca in a.terms:
            for eb, cb in b.terms:
                key = tuple(x + y for x, y in zip(ea, eb))
                s = self.field.add(out.get(key, self.field.normalize(0)), self.field.mul(ca, cb))
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return self._from_dict(out)

    def pow(self, a: Poly, k: int) -> Poly:
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def is_zero(self, a: Poly) -> bool:
        return not a.terms

    def is_unit(self, a: Poly) -> bool:
        return a.is_constant() and a.constant_value() != 0

    def inverse(self, a: Poly) -> Optional[Poly]:
        if not self.is_unit(a):
            return None
        return self.constant(self.field.inv(a.constant_value()))

    def divide_by_constant_multiple(self, a: Poly, b: Poly) -> Optional[Poly]:
        """Return constant ``c`` with ``a == c*b``, or None."""
        if self.is_zero(b):
            return self.zero if self.is_zero(a) else None
        c = self.field.mul(a.terms[0][1], self.field.inv(b.terms[0][1])) if a.terms else 0
        cand = self.constant(c)
        return cand if self.mul(cand, b) == a else None

    def render(self, a: Poly) -> str:
        if not a.terms:
            return "0"
        parts = []
        for exps, c in a.terms:
            factors = []
            coeff_str = self.field.render(c)
            monic = all(e == 0 for e in exps)
            if coeff_str != "1" or monic:
                factors.append(coeff_str)
            for name, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def _div(self, a: Poly, b: Poly) -> Poly:
        inv = self.inverse(b)
        if inv is None:
            raise BadParameter("division is only defined by nonzero constants")
        return self.mul(a, inv)

    def parse(self, text: str) -> Poly:
        alg = parsing.Algebra(
            atom=self.gen,
            const=self.constant,
            by_id=lambda _i: (_ for _ in ()).throw(
                BadParameter("'#id' literals apply to finite rings only")
            ),
            add=self.add,
            sub=self.sub,
            neg=self.neg,
            mul=self.mul,
            pow=self.pow,
            div=self._div,
        )
        return parsing.parse_expression(text, alg)

    def render_or_parse(self, value) -> Poly:
        if isinstance(value, Poly):
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)):
            return self.constant(value)
        raise BadParameter(f"cannot interpret {value!r} as a polynomial element")

    def __repr__(self):
        base = "Q" if self.field.p == 0 else f"GF({self.field.p})"
        return f"PolynomialRing({base}[{', '.join(self.variables)}])"


CoefficientRing = Union[FiniteRing, PolynomialRing]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# ring builders
# ---------------------------------------------------------------------------

# minimal built-in irreducible polynomials mod p, ascending coefficients
_BUILTIN_IRREDUCIBLE = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}


def zmod(n: int) -> FiniteRing:
    if n < 2:
        raise BadParameter("Z/n requires n >= 2")
    add = [[(a + b) % n for b in range(n)] for a in range(n)]
    mul = [[(a * b) % n for b in range(n)] for a in range(n)]
    ring = FiniteRing(add, mul, names=[str(a) for a in range(n)])
    ring.json_spec = {"kind": "zmod", "n": n}
    return ring


def _poly_mod_reduce(coeffs, modulus, p):
    coeffs = [c % p for c in coeffs]
    k = len(modulus) - 1
    for deg in range(len(coeffs) - 1, k - 1, -1):
        lead = coeffs[deg]
        if lead:
            for i, m in enumerate(modulus):
                coeffs[deg - k + i] = (coeffs[deg - k + i] - lead * m) % p
    return coeffs[:k]


def _gf_irreducible(p, k, poly):
    """Brute-force irreducibility of a monic degree-k polynomial mod p."""
    if len(poly) != k + 1 or poly[-1] % p != 1:
        return False
    if k == 1:
        return True
    for deg in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            divisor = list(tail) + [1]
            rem = list(poly)
            for d in range(len(rem) - 1, deg - 1, -1):
                lead = rem[d] % p
                if lead:
                    for i, m in enumerate(divisor):
                        rem[d - deg + i] = (rem[d - deg + i] - lead * m) % p
            if all(c % p == 0 for c in rem[:deg]):
                return False
    return True


def galois_field(p: int, k: int, poly=None) -> FiniteRing:
    if not _is_prime(p):
        raise BadParameter(f"GF({p}^{k}): {p} is not prime")
    if p**k > 64:
        raise UnsupportedSize(f"GF(p^k) supported for p^k <= 64, got {p}^{k}")
    if k == 1:
        return zmod(p)
    if poly is None:
        poly = _BUILTIN_IRREDUCIBLE.get((p, k))
        if poly is None:
            raise UnsupportedSize(f"no built-in irreducible polynomial for GF({p}^{k})")
    poly = tuple(c % p for c in poly)
    if not _gf_irreducible(p, k, list(poly)):
        raise BadParameter(f"modulus {poly} is not irreducible over GF({p})")
    size = p**k

    def digits(a):
        out = []
        for _ in range(k):
            out.append(a % p)
            a //= p
        return out

    def undigits(ds):
        a = 0
        for d in reversed(ds):
            a = a * p + d
        return a

    add = [[0] * size for _ in range(size)]
    mul = [[0] * size for _ in range(size)]
    for a in range(size):
        da = digits(a)
        for b in range(size):
            db = digits(b)
            add[a][b] = undigits([(x + y) % p for x, y in zip(da, db)])
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(da):
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
            mul[a][b] = undigits(_poly_mod_reduce(prod, poly, p))

    def name(a):
        ds = digits(a)
        parts = []
        for i in range(k - 1, -1, -1):
            if ds[i] == 0:
                continue
            coeff = "" if (ds[i] == 1 and i > 0) else str(ds[i])
            var = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            parts.append(coeff + ("*" if coeff and var else "") + var if coeff or var else "0")
        return "+".join(parts) if parts else "0"

    ring = FiniteRing(add, mul, names=[name(a) for a in range(size)])
    ring.json_spec = {"kind": "gf", "p": p, "k": k, "poly": list(poly)}
    return ring


def product_ring(factors: Sequence[FiniteRing]) -> FiniteRing:
    if not factors:
        raise BadParameter("product of zero rings")
    sizes = [f.size for f in factors]
    total = 1
    for s in sizes:
        total *= s
    if total > MAX_FINITE_SIZE:
        raise UnsupportedSize(f"product has {total} elements, cap is {MAX_FINITE_SIZE}")

    def split(a):
        out = []
        for s in reversed(sizes):
            out.append(a % s)
            a //= s
        return tuple(reversed(out))

    def join(parts):
        a = 0
        for s, x in zip(sizes, parts):
            a = a * s + x
        return a

    add = [[0] * total for _ in range(total)]
    mul = [[0] * total for _ in range(total)]
    for a in range(total):
        pa = split(a)
        for b in range(total):
            pb = split(b)
            add[a][b] = join([f.add(x, y) for f, x, y in zip(factors, pa, pb)])
            mul[a][b] = join([f.mul(x, y) for f, x, y in zip(factors, pa, pb)])
    names = ["(" + ",".join(f.render(x) for f, x in zip(factors, split(a))) + ")" for a in range(total)]
    ring = FiniteRing(add, mul, names=names)
    ring.json_spec = {
        "kind": "product",
        "factors": [getattr(f, "json_spec", None) for f in factors],
    }
    return ring


def build_finite_ring(spec: dict) -> FiniteRing:
    """Build and validate a finite ring from a ring-spec dictionary."""
    kind = spec.get("kind")
    if kind == "zmod":
        _require_keys(spec, {"kind", "n"})
        return zmod(spec["n"])
    if kind == "gf":
        _require_keys(spec, {"kind", "p", "k", "poly"}, optional={"poly"})
        return galois_field(spec["p"], spec["k"], spec.get("poly"))
    if kind == "product":
        _require_keys(spec, {"kind", "factors"})
        return product_ring([build_finite_ring(f) for f in spec["factors"]])
    if kind == "table":
        _require_keys(spec, {"kind", "add", "mul", "names"}, optional={"names"})
        ring = FiniteRing(spec["add"], spec["mul"], names=spec.get("names"))
        ring.json_spec = {"kind": "table", "add": spec["add"], "mul": spec["mul"]}
        return ring
    raise BadParameter(f"unknown finite ring kind {kind!r}")


def build_poly_ring(base: dict, variables: Sequence[str]) -> PolynomialRing:
    """Exact multivariate polynomial ring over Q or GF(p)."""
    if not variables:
        raise BadParameter("polynomial ring needs at least one variable; use rationals() for a bare field")
    field = _field_from_spec(base)
    return PolynomialRing(field, variables)


def rationals() -> PolynomialRing:
    """The field Q, as the zero-variable polynomial ring."""
    return PolynomialRing(FieldSpec(0), ())


def _field_from_spec(base) -> FieldSpec:
    if isinstance(base, FieldSpec):
        return base
    kind = base.get("kind")
    if kind == "q":
        return FieldSpec(0)
    if kind == "gf":
        return FieldSpec(base["p"])
    raise BadParameter(f"unknown base field spec {base!r}")


def ring_from_spec(spec: dict) -> CoefficientRing:
    """Dispatch a ring-spec JSON object to the right backend."""
    kind = spec.get("kind")
    if kind == "poly":
        _require_keys(spec, {"kind", "base", "vars"})
        field = _field_from_spec(spec["base"])
        return PolynomialRing(field, spec["vars"])
    if kind == "q":
        return rationals()
    return build_finite_ring(spec)


def _require_keys(spec, allowed, optional=frozenset()):
    unknown = set(spec) - set(allowed)
    if unknown:
        raise BadParameter(f"unknown keys in spec: {sorted(unknown)}")
    missing = set(allowed) - set(optional) - set(spec)
    if missing:
        raise BadParameter(f"missing keys in spec: {sorted(missing)}")


# ---------------------------------------------------------------------------
# ring maps
# ---------------------------------------------------------------------------

class RingMap:
    """Unital ring endomorphism; flags are always recomputed, never trusted."""

    def __init__(self, ring, table=None, images=None, check=True):
        self.ring = ring
        if ring.backend == "finite":
            if table is None:
                raise BadParameter("finite ring map needs a full image table")
            self.table = tuple(table)
            if len(self.table) != ring.size or any(
                x < 0 or x >= ring.size for x in self.table
            ):
                raise BadParameter("image table must cover all element ids")
            self.images = None
        else:
            if images is None:
                raise BadParameter("polynomial ring map needs generator images")
            self.images = tuple(ring.render_or_parse(images[v]) for v in ring.variables)
            self.table = None
        if check:
            self._validate()
        self.injective, self.bijective = self._structure_flags()

    @classmethod
    def identity(cls, ring):
        if ring.backend == "finite":
            return cls(ring, table=list(range(ring.size)), check=False)
        return cls(ring, images={v: ring.gen(v) for v in ring.variables}, check=False)

    @classmethod
    def unchecked(cls, ring, table=None, images=None):
        """Skip the law validation; structural flags are still computed.

        Exists so that deliberately corrupted maps can be pushed into the
        downstream associativity checks.
        """
        return cls(ring, table=table, images=images, check=False)

    def _validate(self):
        R = self.ring
        if R.backend == "finite":
            t = self.table
            for a in range(R.size):
                for b in range(R.size):
                    if t[R.add(a, b)] != R.add(t[a], t[b]):
                        raise NotAdditive(
                            f"map not additive at ({R.render(a)},{R.render(b)})", witness=(a, b)
                        )
                    if t[R.mul(a, b)] != R.mul(t[a], t[b]):
                        raise NotMultiplicative(
                            f"map not multiplicative at ({R.render(a)},{R.render(b)})",
                            witness=(a, b),
                        )
            if t[R.one] != R.one:
                raise NotUnital("map does not fix 1", witness=R.one)
        # substitution maps on a commutative polynomial ring are ring
        # endomorphisms by construction; nothing to check beyond parsing

    def _structure_flags(self):
        R = self.ring
        if R.backend == "finite":
            injective = len(set(self.table)) == R.size
            return injective, injective  # self-map of a finite set
        if all(img == R.gen(v) for img, v in zip(self.images, R.variables)):
            return True, True
        if self._is_scaled_permutation():
            return True, True
        if R.nvars == 1:
            img = self.images[0]
            if img.total_degree() >= 1:
                return True, img.total_degree() == 1
        return False, False

    def _is_scaled_permutation(self):
        """Each generator maps to unit*generator + constant, bijectively."""
        R = self.ring
        seen = set()
        for img in self.images:
            target = None
            for exps, c in img.terms:
                deg = sum(exps)
                if deg > 1:
                    return False
                if deg == 1:
                    if target is not None:
                        return False
                    target = exps.index(1)
            if target is None or target in seen:
                return False
            seen.add(target)
        return True

    def apply(self, a):
        R = self.ring
        if R.backend == "finite":
            return self.table[a]
        out = R.zero
        for exps, c in a.terms:
            term = R.constant(c)
            for img, e in zip(self.images, exps):
                for _ in range(e):
                    term = R.mul(term, img)
            out = R.add(out, term)
        return out

    def __call__(self, a):
        return self.apply(a)

    def is_identity(self):
        if self.ring.backend == "finite":
            return all(self.table[a] == a for a in range(self.ring.size))
        return all(img == self.ring.gen(v) for img, v in zip(self.images, self.ring.variables))

    def compose(self, other: "RingMap") -> "RingMap":
        """self after other."""
        R = self.ring
        if R.backend == "finite":
            return RingMap(R, table=[self.table[other.table[a]] for a in range(R.size)], check=False)
        return RingMap(
            R,
            images={v: self.apply(img) for v, img in zip(R.variables, other.images)},
            check=False,
        )

    def preimage_set(self, subset: Iterable[int]) -> frozenset:
        if self.ring.backend != "finite":
            raise PolynomialBackendUnsupported("preimages need element enumeration")
        subset = set(subset)
        return frozenset(a for a in range(self.ring.size) if self.table[a] in subset)

    def image_set(self, subset: Iterable[int]) -> frozenset:
        if self.ring.backend != "finite":
            raise PolynomialBackendUnsupported("images need element enumeration")
        return frozenset(self.table[a] for a in subset)


def validate_ring_map(ring, data) -> RingMap:
    """Validate map data (total table or generator images) into a RingMap."""
    if isinstance(data, RingMap):
        return RingMap(data.ring, table=data.table, images=None if data.table else dict(zip(ring.variables, data.images)))
    if isinstance(data, dict) and data.get("identity"):
        return RingMap.identity(ring)
    if ring.backend == "finite":
        table = data["table"] if isinstance(data, dict) else data
        return RingMap(ring, table=table)
    images = data["images"] if isinstance(data, dict) and "images" in data else data
    return RingMap(ring, images=images)


def invert_ring_map(m: RingMap) -> RingMap:
    if m.ring.backend != "finite":
        raise PolynomialBackendUnsupported("map inversion is table-based")
    if not m.bijective:
        raise NotBijective("cannot invert a non-bijective map")
    inv = [0] * m.ring.size
    for a, b in enumerate(m.table):
        inv[b] = a
    return RingMap(m.ring, table=inv, check=False)


# ---------------------------------------------------------------------------
# twisted derivations
# ---------------------------------------------------------------------------

class SigmaDerivation:
    """Additive map with the twisted product rule d(ab) = s(a)d(b) + d(a)b."""

    def __init__(self, sigma: RingMap, table=None, gen_values=None, check=True):
        self.sigma = sigma
        self.ring = sigma.ring
        R = self.ring
        if R.backend == "finite":
            if table is None:
                raise BadParameter("finite derivation needs a full value table")
            self.table = tuple(table)
            self.gen_values = None
        else:
            if gen_values is None:
                raise BadParameter("polynomial derivation needs generator values")
            self.gen_values = tuple(R.render_or_parse(gen_values[v]) for v in R.variables)
            self.table = None
            self._apply_cache: dict = {}
        if check:
            self._validate()

    @classmethod
    def zero(cls, sigma: RingMap):
        R = sigma.ring
        if R.backend == "finite":
            return cls(sigma, table=[R.zero] * R.size, check=False)
        return cls(sigma, gen_values={v: R.zero for v in R.variables}, check=False)

    @classmethod
    def unchecked(cls, sigma, table=None, gen_values=None):
        return cls(sigma, table=table, gen_values=gen_values, check=False)

    def _validate(self):
        R, s = self.ring, self.sigma
        if R.backend == "finite":
            d = self.table
            for a in range(R.size):
                for b in range(R.size):
                    if d[R.add(a, b)] != R.add(d[a], d[b]):
                        raise LeibnizViolation(
                            f"derivation not additive at ({R.render(a)},{R.render(b)})",
                            witness=(a, b),
                        )
                    expect = R.add(R.mul(s(a), d[b]), R.mul(d[a], b))
                    if d[R.mul(a, b)] != expect:
                        raise LeibnizViolation(
                            f"twisted product rule fails at ({R.render(a)},{R.render(b)})",
                            witness=(a, b),
                        )
        else:
            # the recursive extension is well defined iff the two Leibniz
            # expansions of u*v = v*u agree for every pair of generators
            for i, u in enumerate(R.gens):
                for j, v in enumerate(R.gens):
                    lhs = R.add(R.mul(s(u), self.gen_values[j]), R.mul(self.gen_values[i], v))
                    rhs = R.add(R.mul(s(v), self.gen_values[i]), R.mul(self.gen_values[j], u))
                    if lhs != rhs:
                        raise LeibnizViolation(
                            f"generator pair ({R.variables[i]},{R.variables[j]}) breaks the product rule",
                            witness=(R.variables[i], R.variables[j]),
                        )

    def is_zero_map(self):
        if self.ring.backend == "finite":
            return all(v == self.ring.zero for v in self.table)
        return all(self.ring.is_zero(v) for v in self.gen_values)

    def _apply_monomial(self, exps):
        R, s = self.ring, self.sigma
        if exps in self._apply_cache:
            return self._apply_cache[exps]
        i = next((k for k, e in enumerate(exps) if e > 0), None)
        if i is None:
            out = R.zero
        else:
            rest = tuple(e - 1 if k == i else e for k, e in enumerate(exps))
            rest_poly = Poly(R, [(rest, R.field.normalize(1))])
            # d(v * rest) = s(v) d(rest) + d(v) rest
            out = R.add(
                R.mul(s(R.gens[i]), self._apply_monomial(rest)),
                R.mul(self.gen_values[i], rest_poly),
            )
        self._apply_cache[exps] = out
        return out

    def apply(self, a):
        R = self.ring
        if R.backend == "finite":
            return self.table[a]
        out = R.zero
        for exps, c in a.terms:
            out = R.add(out, R.mul(R.constant(c), self._apply_monomial(exps)))
        return out

    def __call__(self, a):
        return self.apply(a)

    def image_set(self, subset: Iterable[int]) -> frozenset:
        if self.ring.backend != "finite":
            raise PolynomialBackendUnsupported("images need element enumeration")
        return frozenset(self.table[a] for a in subset)


def validate_sigma_derivation(ring, sigma: RingMap, data) -> SigmaDerivation:
    if isinstance(data, SigmaDerivation):
        return SigmaDerivation(sigma, table=data.table, gen_values=None if data.table else dict(zip(ring.variables, data.gen_values)))
    if isinstance(data, dict) and data.get("zero"):
        return SigmaDerivation.zero(sigma)
    if ring.backend == "finite":
        table = data["table"] if isinstance(data, dict) else data
        return SigmaDerivation(sigma, table=table)
    values = data["values"] if isinstance(data, dict) and "values" in data else data
    return SigmaDerivation(sigma, gen_values=values)


# ---------------------------------------------------------------------------
# ideal sets (finite backend only)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealSet:
    """Explicit element set of a right or two-sided ideal of a finite ring."""

    ring: FiniteRing
    elements: frozenset
    sided: str = "right"  # "right" | "two-sided"

    def __post_init__(self):
        if self.ring.backend != "finite":
            raise PolynomialBackendUnsupported("ideal sets need element enumeration")
        if self.sided not in ("right", "two-sided"):
            raise BadParameter(f"bad sidedness {self.sided!r}")
        R, E = self.ring, self.elements
        if R.zero not in E:
            raise BadParameter("ideal must contain 0")
        for a in E:
            for b in E:
                if R.add(a, b) not in E:
                    raise BadParameter(f"not closed under addition at ({a},{b})")
            for r in range(R.size):
                if R.mul(a, r) not in E:
                    raise BadParameter(f"not closed under right multiplication at ({a},{r})")
                if self.sided == "two-sided" and R.mul(r, a) not in E:
                    raise BadParameter(f"not closed under left multiplication at ({r},{a})")

    def sorted_elements(self):
        return sorted(self.elements)

    def render(self):
        return "{" + ", ".join(self.ring.render(a) for a in self.sorted_elements()) + "}"


def closure_under_ring_ops(ring: FiniteRing, gens: Iterable[int], sided: str) -> frozenset:
    current = set(gens)
    current.add(ring.zero)
    while True:
        new = set()
        snapshot = list(current)
        for a in snapshot:
            for b in snapshot:
                s = ring.add(a, b)
                if s not in current:
                    new.add(s)
            for r in range(ring.size):
                x = ring.mul(a, r)
                if x not in current:
                    new.add(x)
                if sided == "two-sided":
                    y = ring.mul(r, a)
                    if y not in current:
                        new.add(y)
        if not new:
            return frozenset(current)
        current |= new


def ideal_generate(ring: FiniteRing, gens: Iterable[int], sided: str = "two-sided") -> IdealSet:
    """Smallest ideal of the declared sidedness containing ``gens``."""
    if ring.backend != "finite":
        raise PolynomialBackendUnsupported("ideal generation needs element enumeration")
    return IdealSet(ring, closure_under_ring_ops(ring, gens, sided), sided)


def all_right_ideals(ring: FiniteRing) -> list[frozenset]:
    """All right ideals, as the submodule lattice of the regular module."""
    cyclics = {closure_under_ring_ops(ring, [a], "right") for a in range(ring.size)}
    current = set(cyclics)
    current.add(frozenset([ring.zero]))
    while True:
        new = set()
        for x in current:
            for y in current:
                s = frozenset(ring.add(a, b) for a in x for b in y)
                if s not in current:
                    new.add(s)
        if not new:
            break
        current |= new
    return sorted(current, key=lambda s: (len(s), sorted(s)))


def all_two_sided_ideals(ring: FiniteRing) -> list[frozenset]:
    def two_sided(s):
        return all(ring.mul(r, a) in s and ring.mul(a, r) in s for a in s for r in range(ring.size))

    return [s for s in all_right_ideals(ring) if two_sided(s)]
