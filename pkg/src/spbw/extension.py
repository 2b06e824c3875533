"""Skew PBW extensions: normal-form arithmetic over a coefficient ring.

An extension ``A`` over ``R`` is the free left R-module on the standard
monomials ``x1^a1 ... xn^an`` together with the commutation data

    x_i * r   = sigma_i(r) * x_i + delta_i(r)            (scalars past variables)
    x_j * x_i = d_ij * x_i * x_j + r0 + sum_k rk * x_k   (i < j, variable swaps)

Products are computed by innermost-left rewriting: repeatedly locate the
leftmost violation of normal form (a coefficient sitting right of a variable,
or a variable pair out of order), apply the matching rule, and continue.  A
fuel counter bounds the total number of rule applications so that ill-formed
data produces a typed error instead of a blow-up.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    AssociativityFailure,
    BadParameter,
    NonInjectiveSigma,
    PolynomialBackendUnsupported,
    RewriteFuelExhausted,
    SearchSpaceTooLarge,
    ZeroDij,
)
from .parsing import Algebra, parse_expression
from .rings import RingMap, SigmaDerivation

Monomial = tuple  # exponent vector in N^n; () arithmetic via helpers below


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_deg(a: Monomial) -> int:
    return sum(a)


def unit_monomial(n: int) -> Monomial:
    return (0,) * n


def monomials_upto(n: int, max_degree: int) -> list[Monomial]:
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], max_degree, n)
    return out


@dataclass(frozen=True)
class MonomialOrder:
    """Total multiplication-compatible order on exponent vectors.

    ``priority`` lists variable indices from most to least significant; the
    default makes x_n the biggest variable, i.e. x1 < x2 < ... < xn.
    """

    tag: str  # "deglex" | "degrevlex" | "lex"
    priority: tuple

    @classmethod
    def natural(cls, tag: str, n: int) -> "MonomialOrder":
        if tag not in ("deglex", "degrevlex", "lex"):
            raise BadParameter(f"unknown monomial order {tag!r}")
        return cls(tag, tuple(range(n - 1, -1, -1)))

    def key(self, alpha: Monomial):
        if self.tag == "lex":
            return tuple(alpha[p] for p in self.priority)
        if self.tag == "deglex":
            return (sum(alpha), tuple(alpha[p] for p in self.priority))
        return (sum(alpha), tuple(-alpha[p] for p in reversed(self.priority)))

    def max(self, monomials: Iterable[Monomial]) -> Monomial:
        return max(monomials, key=self.key)

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)

    def geq(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) >= self.key(b)

    def sorted_desc(self, monomials: Iterable[Monomial]) -> list[Monomial]:
        return sorted(monomials, key=self.key, reverse=True)


@dataclass(frozen=True)
class ExtensionFlags:
    quasi_commutative: bool
    bijective: bool
    endomorphism_type: bool
    derivation_type: bool

    def as_set(self) -> frozenset:
        names = {
            "quasi-commutative": self.quasi_commutative,
            "bijective": self.bijective,
            "endomorphism-type": self.endomorphism_type,
            "derivation-type": self.derivation_type,
        }
        return frozenset(k for k, v in names.items() if v)


class SkewPoly:
    """Element of an extension: finite map monomial -> nonzero coefficient."""

    __slots__ = ("ext", "_terms", "_key")

    def __init__(self, ext: "SkewPBWExtension", terms: dict):
        self.ext = ext
        R = ext.ring
        self._terms = {m: c for m, c in terms.items() if not R.is_zero(c)}
        self._key = None

    # canonical iteration: descending under the extension's order
    def items(self):
        order = self.ext.order
        return [(m, self._terms[m]) for m in sorted(self._terms, key=order.key, reverse=True)]

    def monomials(self):
        return [m for m, _ in self.items()]

    def coefficient(self, mono: Monomial):
        return self._terms.get(mono, self.ext.ring.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def num_terms(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        return max((mono_deg(m) for m in self._terms), default=-1)

    def lm(self) -> Optional[Monomial]:
        if not self._terms:
            return None
        return max(self._terms, key=self.ext.order.key)

    def lc(self):
        m = self.lm()
        return self.ext.ring.zero if m is None else self._terms[m]

    def lt(self):
        m = self.lm()
        return None if m is None else (m, self._terms[m])

    def key(self):
        if self._key is None:
            self._key = frozenset(self._terms.items())
        return self._key

    def __eq__(self, other):
        return isinstance(other, SkewPoly) and self.ext is other.ext and self._terms == other._terms

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        R = self.ext.ring
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = R.add(out.get(m, R.zero), c)
            if R.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return SkewPoly(self.ext, out)

    def __neg__(self):
        R = self.ext.ring
        return SkewPoly(self.ext, {m: R.neg(c) for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return self.ext.multiply(self, other)

    def scale_left(self, r) -> "SkewPoly":
        R = self.ext.ring
        return SkewPoly(self.ext, {m: R.mul(r, c) for m, c in self._terms.items()})

    def __repr__(self):
        return self.ext.render(self)


class SkewPBWExtension:
    """The commutation data of an extension plus its rewriting engine."""

    def __init__(
        self,
        ring,
        n: int,
        sigmas: Sequence[RingMap],
        deltas: Sequence[SigmaDerivation],
        d_coeffs: Optional[dict] = None,
        relations: Optional[dict] = None,
        order: Optional[MonomialOrder] = None,
        var_names: Optional[Sequence[str]] = None,
        fuel: int = 10**6,
    ):
        self.ring = ring
        self.n = n
        self.sigmas = tuple(sigmas)
        self.deltas = tuple(deltas)
        self.order = order or MonomialOrder.natural("deglex", n)
        self.var_names = tuple(var_names) if var_names else tuple(f"x{i+1}" for i in range(n))
        if len(self.var_names) != n:
            raise BadParameter("need one variable name per variable")
        self.fuel = fuel
        self.d_coeffs = dict(d_coeffs or {})
        self.relations = {}
        for key, val in (relations or {}).items():
            r0, rlin = val
            self.relations[key] = (r0, tuple(rlin))
        for i in range(n):
            for j in range(i + 1, n):
                self.d_coeffs.setdefault((i, j), ring.one)
                self.relations.setdefault((i, j), (ring.zero, tuple(ring.zero for _ in range(n))))
        self._triple_cache: dict = {}
        self.flags = self._classify()

    # -- constructors for elements ---------------------------------------------

    def zero_poly(self) -> SkewPoly:
        return SkewPoly(self, {})

    def one_poly(self) -> SkewPoly:
        return SkewPoly(self, {unit_monomial(self.n): self.ring.one})

    def scalar(self, r) -> SkewPoly:
        return SkewPoly(self, {unit_monomial(self.n): r})

    def variable(self, i: int) -> SkewPoly:
        mono = tuple(1 if k == i else 0 for k in range(self.n))
        return SkewPoly(self, {mono: self.ring.one})

    def monomial(self, alpha: Monomial, coeff=None) -> SkewPoly:
        return SkewPoly(self, {tuple(alpha): coeff if coeff is not None else self.ring.one})

    def from_terms(self, terms: dict) -> SkewPoly:
        return SkewPoly(self, dict(terms))

    # -- classification ----------------------------------------------------------

    def _classify(self) -> ExtensionFlags:
        R = self.ring
        deltas_zero = all(d.is_zero_map() for d in self.deltas)
        consts_zero = all(
            R.is_zero(r0) and all(R.is_zero(rk) for rk in rlin)
            for r0, rlin in self.relations.values()
        )
        d_invertible = all(R.is_unit(d) for d in self.d_coeffs.values())
        return ExtensionFlags(
            quasi_commutative=deltas_zero and consts_zero,
            bijective=all(s.bijective for s in self.sigmas) and d_invertible,
            endomorphism_type=deltas_zero,
            derivation_type=all(s.is_identity() for s in self.sigmas),
        )

    def classify(self) -> ExtensionFlags:
        return self.flags

    # -- the rewriting engine ------------------------------------------------------
    #
    # A word is a list of atoms ('c', coeff) / ('v', index).  Normal form:
    # at most one coefficient atom, sitting first, then variables with
    # nondecreasing indices.

    def _normalize_word(self, word: tuple, out: dict, budget: list):
        R = self.ring
        stack = [(list(word), 0)]
        while stack:
            atoms, start = stack.pop()
            idx = max(start, 0)
            while idx < len(atoms) - 1:
                kind_a, val_a = atoms[idx]
                kind_b, val_b = atoms[idx + 1]
                if kind_a == "c" and kind_b == "c":
                    prod = R.mul(val_a, val_b)
                    if R.is_zero(prod):
                        atoms = None
                        break
                    atoms[idx : idx + 2] = [("c", prod)]
                    budget[0] -= 1
                elif kind_a == "v" and kind_b == "c":
                    i = val_a
                    s = self.sigmas[i](val_b)
                    d = self.deltas[i](val_b)
                    if not R.is_zero(d):
                        rest = atoms[:idx] + [("c", d)] + atoms[idx + 2 :]
                        stack.append((rest, idx - 1))
                    if R.is_zero(s):
                        atoms = None
                        break
                    atoms[idx : idx + 2] = [("c", s), ("v", i)]
                    budget[0] -= 1
                elif kind_a == "v" and kind_b == "v" and val_a > val_b:
                    i, j = val_b, val_a
                    d = self.d_coeffs[(i, j)]
                    r0, rlin = self.relations[(i, j)]
                    prefix, suffix = atoms[:idx], atoms[idx + 2 :]
                    if not R.is_zero(r0):
                        stack.append((prefix + [("c", r0)] + suffix, idx - 1))
                    for k in range(self.n):
                        if not R.is_zero(rlin[k]):
                            stack.append((prefix + [("c", rlin[k]), ("v", k)] + suffix, idx - 1))
                    atoms[idx : idx + 2] = [("c", d), ("v", i), ("v", j)]
                    budget[0] -= 1
                else:
                    idx += 1
                    continue
                if budget[0] < 0:
                    raise RewriteFuelExhausted(
                        "rewrite budget exhausted; extension data is likely inconsistent"
                    )
                idx = max(idx - 1, 0)
            if atoms is None:
                continue
            coeff = R.one
            mono = [0] * self.n
            for kind, val in atoms:
                if kind == "c":
                    coeff = val  # normal form carries at most one coefficient
                else:
                    mono[val] += 1
            key = tuple(mono)
            acc = R.add(out.get(key, R.zero), coeff)
            if R.is_zero(acc):
                out.pop(key, None)
            else:
                out[key] = acc

    def _vars_of(self, alpha: Monomial) -> list:
        atoms = []
        for i, e in enumerate(alpha):
            atoms.extend([("v", i)] * e)
        return atoms

    def _normalize_triple(self, alpha: Monomial, coeff, beta: Monomial) -> dict:
        """Normal form of x^alpha * coeff * x^beta, memoized."""
        key = (alpha, coeff, beta)
        cached = self._triple_cache.get(key)
        if cached is not None:
            return cached
        out: dict = {}
        word = tuple(self._vars_of(alpha) + [("c", coeff)] + self._vars_of(beta))
        self._normalize_word(word, out, [self.fuel])
        self._triple_cache[key] = out
        return out

    # -- public operations ---------------------------------------------------------

    def multiply(self, f: SkewPoly, g: SkewPoly) -> SkewPoly:
        if f.ext is not self or g.ext is not self:
            raise BadParameter("operands belong to a different extension")
        R = self.ring
        out: dict = {}
        for mf, cf in f._terms.items():
            for mg, cg in g._terms.items():
                for mono, c in self._normalize_triple(mf, cg, mg).items():
                    acc = R.add(out.get(mono, R.zero), R.mul(cf, c))
                    if R.is_zero(acc):
                        out.pop(mono, None)
                    else:
                        out[mono] = acc
        return SkewPoly(self, out)

    def sigma_power(self, alpha: Monomial, r):
        """sigma^alpha(r): sigma_n^{a_n} first, sigma_1^{a_1} last."""
        for i in range(self.n - 1, -1, -1):
            for _ in range(alpha[i]):
                r = self.sigmas[i](r)
        return r

    def sigma_power_preimage(self, alpha: Monomial, subset) -> frozenset:
        """Inverse image of an element set under sigma^alpha (finite backend)."""
        if self.ring.backend != "finite":
            raise PolynomialBackendUnsupported("preimages need element enumeration")
        return frozenset(
            r for r in range(self.ring.size) if self.sigma_power(alpha, r) in set(subset)
        )

    def sigma_power_inverse(self, alpha: Monomial, r):
        """(sigma^alpha)^{-1}(r); needs bijective sigmas on a finite ring."""
        from .rings import invert_ring_map

        if not hasattr(self, "_sigma_inverses"):
            self._sigma_inverses = tuple(invert_ring_map(s) for s in self.sigmas)
        for i in range(self.n):
            for _ in range(alpha[i]):
                r = self._sigma_inverses[i](r)
        return r

    def expand_pow_scalar(self, alpha: Monomial, r):
        """x^alpha * r = sigma^alpha(r) x^alpha + lower; returns the pair."""
        if self.ring.is_zero(r):
            raise BadParameter("expansion needs a nonzero scalar")
        lead = self.sigma_power(alpha, r)
        full = SkewPoly(self, self._normalize_triple(tuple(alpha), r, unit_monomial(self.n)))
        rest = full - self.monomial(alpha, lead)
        return lead, rest

    def expand_pow_pow(self, alpha: Monomial, beta: Monomial):
        """x^alpha x^beta = d x^{alpha+beta} + lower; returns (d, lower)."""
        out: dict = {}
        word = tuple(self._vars_of(alpha) + self._vars_of(beta))
        self._normalize_word(word, out, [self.fuel])
        full = SkewPoly(self, out)
        top = mono_mul(tuple(alpha), tuple(beta))
        d = full.coefficient(top)
        rest = full - self.monomial(top, d)
        return d, rest

    def leading(self, f: SkewPoly):
        """(lm, lc, lt); the zero element maps to the (None, 0, None) sentinel."""
        if f.is_zero():
            return None, self.ring.zero, None
        m = f.lm()
        return m, f._terms[m], (m, f._terms[m])

    # -- associativity audit ---------------------------------------------------------

    def _term_pool_exhaustive(self) -> list[SkewPoly]:
        R = self.ring
        monos = [unit_monomial(self.n)] + [
            tuple(1 if k == i else 0 for k in range(self.n)) for i in range(self.n)
        ]
        return [self.monomial(m, r) for m in monos for r in R.nonzero_elements()]

    def _random_term(self, rng, coeff_pool):
        alpha = [0] * self.n
        for _ in range(rng.randrange(3)):
            alpha[rng.randrange(self.n)] += 1
        return self.monomial(tuple(alpha), coeff_pool[rng.randrange(len(coeff_pool))])

    def _coeff_pool(self):
        R = self.ring
        if R.backend == "finite":
            return [a for a in R.nonzero_elements()]
        pool = [R.one, R.from_int(2), R.neg(R.one), R.from_int(3)]
        pool.extend(R.gens)
        pool.extend(R.add(g, R.one) for g in R.gens)
        return pool

    def check_associativity(self, mode="sample", k: int = 200, seed: int = 0, cap: int = 10**6):
        """Audit (f g) h == f (g h) over a triple set; raises on any witness.

        ``mode="exhaustive"`` runs all triples of terms r*x^e with r ranging
        over the ring and e over {1, x_1, ..., x_n}; ``mode="sample"`` draws
        ``k`` seeded random triples of degree <= 2 terms.
        """
        if mode == "exhaustive":
            if self.ring.backend != "finite":
                raise PolynomialBackendUnsupported("exhaustive audit needs a finite ring")
            pool = self._term_pool_exhaustive()
            if len(pool) ** 3 > cap:
                raise SearchSpaceTooLarge(f"{len(pool)}^3 triples exceed the cap {cap}")
            triples = itertools.product(pool, repeat=3)
            total = len(pool) ** 3
        elif mode == "sample":
            rng = random.Random(seed)
            coeffs = self._coeff_pool()
            triples = (
                (
                    self._random_term(rng, coeffs),
                    self._random_term(rng, coeffs),
                    self._random_term(rng, coeffs),
                )
                for _ in range(k)
            )
            total = k
        else:
            raise BadParameter(f"unknown mode {mode!r}")
        for f, g, h in triples:
            left = self.multiply(self.multiply(f, g), h)
            right = self.multiply(f, self.multiply(g, h))
            if left != right:
                raise AssociativityFailure(
                    f"associativity fails on ({self.render(f)}, {self.render(g)}, {self.render(h)})",
                    witness=(f, g, h, left, right),
                )
        return {"mode": mode, "triples_checked": total, "witness": None}

    # -- rendering ---------------------------------------------------------------------

    def render_monomial(self, alpha: Monomial) -> str:
        parts = []
        for name, e in zip(self.var_names, alpha):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def render_coefficient(self, c) -> str:
        R = self.ring
        text = R.render(c)
        if R.backend == "poly" and len(c.terms) > 1:
            return f"({text})"
        return text

    def render(self, f: SkewPoly) -> str:
        if f.is_zero():
            return "0"
        parts = []
        for mono, coeff in f.items():
            mono_str = self.render_monomial(mono)
            coeff_str = self.render_coefficient(coeff)
            if not mono_str:
                parts.append(coeff_str)
            elif coeff_str == "1":
                parts.append(mono_str)
            else:
                parts.append(f"{coeff_str}*{mono_str}")
        return " + ".join(parts)

    def parse(self, text: str) -> SkewPoly:
        """Parse an infix expression over the extension's variables.

        Names resolve first to extension variables, then to coefficient-ring
        generators (polynomial backend); ``#k`` is the finite-ring element id.
        """
        R = self.ring

        def atom(name):
            if name in self.var_names:
                return self.variable(self.var_names.index(name))
            if R.backend == "poly" and name in R.variables:
                return self.scalar(R.gen(name))
            raise BadParameter(f"unknown name {name!r}")

        def by_id(i):
            if R.backend != "finite":
                raise BadParameter("'#id' literals apply to finite rings only")
            if not 0 <= i < R.size:
                raise BadParameter(f"element id {i} out of range")
            return self.scalar(i)

        def power(f, e):
            out = self.one_poly()
            for _ in range(e):
                out = self.multiply(out, f)
            return out

        def divide(f, g):
            if g.num_terms() != 1 or g.lm() != unit_monomial(self.n):
                raise BadParameter("division is only defined by unit scalars")
            inv = R.inverse(g.lc())
            if inv is None:
                raise BadParameter("division is only defined by unit scalars")
            return self.multiply(f, self.scalar(inv))

        alg = Algebra(
            atom=atom,
            const=lambda k: self.scalar(R.from_int(k)),
            by_id=by_id,
            add=lambda a, b: a + b,
            sub=lambda a, b: a - b,
            neg=lambda a: -a,
            mul=self.multiply,
            pow=power,
            div=divide,
        )
        return parse_expression(text, alg)

    def __repr__(self):
        return f"SkewPBWExtension(n={self.n}, ring={self.ring!r})"


def build_extension(
    ring,
    n: int,
    sigmas: Sequence[RingMap],
    deltas: Optional[Sequence[SigmaDerivation]] = None,
    d_coeffs: Optional[dict] = None,
    relations: Optional[dict] = None,
    order: Optional[MonomialOrder] = None,
    var_names: Optional[Sequence[str]] = None,
    fuel: int = 10**6,
    assoc_sample: int = 50,
) -> SkewPBWExtension:
    """Validate commutation data and build the extension.

    Requires injective sigmas, derivations twisted by the matching sigma, and
    nonzero d coefficients; a seeded sample of associativity triples runs as a
    mandatory post-build check.
    """
    if len(sigmas) != n:
        raise BadParameter(f"need {n} ring maps, got {len(sigmas)}")
    for i, s in enumerate(sigmas):
        if not isinstance(s, RingMap):
            raise BadParameter(f"sigma {i+1} is not a validated ring map")
        if not s.injective:
            raise NonInjectiveSigma(f"sigma {i+1} is not injective")
    if deltas is None:
        deltas = [SigmaDerivation.zero(s) for s in sigmas]
    if len(deltas) != n:
        raise BadParameter(f"need {n} derivations, got {len(deltas)}")
    for i, d in enumerate(deltas):
        if not isinstance(d, SigmaDerivation):
            raise BadParameter(f"delta {i+1} is not a validated derivation")
        if d.sigma is not sigmas[i]:
            raise BadParameter(f"delta {i+1} is not twisted by sigma {i+1}")
    for key, value in (d_coeffs or {}).items():
        if ring.is_zero(value):
            raise ZeroDij(f"d coefficient for variables {key} is zero")
    ext = SkewPBWExtension(
        ring, n, sigmas, deltas, d_coeffs, relations, order, var_names, fuel
    )
    if ring.backend == "poly":
        # nonzero images of nonzero scalars, asserted on generators
        for i, s in enumerate(sigmas):
            for g in ring.gens:
                if ring.is_zero(s(g)):
                    raise NonInjectiveSigma(f"sigma {i+1} kills a generator")
    if assoc_sample:
        # small finite pools get the deterministic full audit; everything
        # else gets a seeded sample
        pool = (n + 1) * (ring.size - 1) if ring.backend == "finite" else None
        if pool is not None and pool**3 <= 20_000:
            ext.check_associativity(mode="exhaustive")
        else:
            ext.check_associativity(mode="sample", k=assoc_sample, seed=0)
    return ext
