"""Finite right modules and the induced module over an extension.

A finite module is given by an addition table and an action table over a
finite coefficient ring; all module laws are checked exhaustively at
construction.  The induced module consists of finite maps monomial -> module
element; the right action pushes extension elements through the rewriting
engine and then applies the module's action tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    BadParameter,
    ModuleAxiomFailure,
    ModuleTooLarge,
    PolynomialBackendUnsupported,
    SearchSpaceTooLarge,
)
from .extension import (
    Monomial,
    SkewPBWExtension,
    SkewPoly,
    mono_deg,
    mono_mul,
    monomials_upto,
    unit_monomial,
)
from .rings import FiniteRing, IdealSet

MODULE_VALIDATION_LIMIT = 2**16
SUBMODULE_ENUMERATION_CAP = 256
ANNIHILATOR_SEARCH_CAP = 10**7


class FiniteModule:
    """Right module over a finite ring, given by tables over ids 0..size-1."""

    def __init__(self, ring: FiniteRing, add_table, act_table, names=None, check=True):
        if ring.backend != "finite":
            raise PolynomialBackendUnsupported("finite modules need a finite coefficient ring")
        self.ring = ring
        self.size = len(add_table)
        self.add_table = tuple(tuple(row) for row in add_table)
        self.act_table = tuple(tuple(row) for row in act_table)
        if len(self.act_table) != self.size or any(
            len(row) != ring.size for row in self.act_table
        ):
            raise ModuleAxiomFailure("action table must be size x |R|")
        self.zero = self._find_zero()
        self.names = tuple(names) if names else tuple(f"m{i}" for i in range(self.size))
        if check and self.size * ring.size <= MODULE_VALIDATION_LIMIT:
            self._validate()
        self._neg = self._build_neg()

    @classmethod
    def regular(cls, ring: FiniteRing) -> "FiniteModule":
        """The ring as a right module over itself."""
        return cls(ring, ring.add_table, ring.mul_table, names=ring.names, check=False)

    @classmethod
    def zero_module(cls, ring: FiniteRing) -> "FiniteModule":
        return cls(ring, ((0,),), ((0,) * ring.size,), names=("0",), check=False)

    def _find_zero(self):
        for z in range(self.size):
            if all(self.add_table[z][a] == a for a in range(self.size)):
                return z
        raise ModuleAxiomFailure("no additive identity in module")

    def _build_neg(self):
        neg = [None] * self.size
        for a in range(self.size):
            for b in range(self.size):
                if self.add_table[a][b] == self.zero:
                    neg[a] = b
                    break
            if neg[a] is None:
                raise ModuleAxiomFailure(f"element {a} has no additive inverse")
        return tuple(neg)

    def _validate(self):
        R = self.ring
        add, act = self.add_table, self.act_table
        n = self.size
        for a in range(n):
            for b in range(n):
                if add[a][b] != add[b][a]:
                    raise ModuleAxiomFailure(f"addition not commutative at ({a},{b})", witness=(a, b))
                for c in range(n):
                    if add[add[a][b]][c] != add[a][add[b][c]]:
                        raise ModuleAxiomFailure(
                            f"addition not associative at ({a},{b},{c})", witness=(a, b, c)
                        )
        for m in range(n):
            if act[m][R.one] != m:
                raise ModuleAxiomFailure(f"action of 1 moves element {m}", witness=m)
            for r in range(R.size):
                for s in range(R.size):
                    if act[act[m][r]][s] != act[m][R.mul(r, s)]:
                        raise ModuleAxiomFailure(
                            f"(m.r).s != m.(rs) at ({m},{r},{s})", witness=(m, r, s)
                        )
                    if act[m][R.add(r, s)] != add[act[m][r]][act[m][s]]:
                        raise ModuleAxiomFailure(
                            f"m.(r+s) != m.r + m.s at ({m},{r},{s})", witness=(m, r, s)
                        )
            for m2 in range(n):
                for r in range(R.size):
                    if act[add[m][m2]][r] != add[act[m][r]][act[m2][r]]:
                        raise ModuleAxiomFailure(
                            f"(m+m').r != m.r + m'.r at ({m},{m2},{r})", witness=(m, m2, r)
                        )

    # -- arithmetic ------------------------------------------------------------

    def add(self, a, b):
        return self.add_table[a][b]

    def neg(self, a):
        return self._neg[a]

    def act(self, m, r):
        return self.act_table[m][r]

    def elements(self):
        return range(self.size)

    def nonzero_elements(self):
        return (a for a in range(self.size) if a != self.zero)

    def render(self, a) -> str:
        return self.names[a]

    def is_regular_over_ring(self) -> bool:
        return (
            self.size == self.ring.size
            and self.add_table == self.ring.add_table
            and self.act_table == self.ring.mul_table
        )

    # -- submodules ---------------------------------------------------------------

    def cyclic(self, m) -> frozenset:
        """mR = {m.r : r in R}; already a submodule."""
        return frozenset(self.act_table[m][r] for r in range(self.ring.size))

    def annihilator(self, m) -> frozenset:
        return frozenset(r for r in range(self.ring.size) if self.act_table[m][r] == self.zero)

    def annihilator_of_set(self, subset: Iterable) -> frozenset:
        out = set(range(self.ring.size))
        for m in subset:
            out &= self.annihilator(m)
        return frozenset(out)

    def sum_sets(self, a: frozenset, b: frozenset) -> frozenset:
        return frozenset(self.add_table[x][y] for x in a for y in b)

    def submodules(self) -> list[frozenset]:
        """All submodules: cyclic submodules closed under pairwise sums."""
        if self.size > SUBMODULE_ENUMERATION_CAP:
            raise ModuleTooLarge(
                f"submodule enumeration capped at {SUBMODULE_ENUMERATION_CAP} elements"
            )
        current = {self.cyclic(m) for m in range(self.size)}
        current.add(frozenset([self.zero]))
        while True:
            new = set()
            for a in current:
                for b in current:
                    s = self.sum_sets(a, b)
                    if s not in current:
                        new.add(s)
            if not new:
                break
            current |= new
        return sorted(current, key=lambda s: (len(s), sorted(s)))

    def __repr__(self):
        return f"FiniteModule(size={self.size}, ring={self.ring!r})"


def build_module(ring: FiniteRing, spec) -> FiniteModule:
    """Build a validated module from tables or the {"regular": true} shorthand."""
    if isinstance(spec, dict) and spec.get("regular"):
        return FiniteModule.regular(ring)
    if isinstance(spec, dict):
        unknown = set(spec) - {"elements", "add", "act", "names"}
        if unknown:
            raise BadParameter(f"unknown module keys: {sorted(unknown)}")
        add, act = spec["add"], spec["act"]
        if spec.get("elements") not in (None, len(add)):
            raise BadParameter("declared element count disagrees with tables")
        return FiniteModule(ring, add, act, names=spec.get("names"))
    raise BadParameter("module spec must be a dict")


@dataclass(frozen=True)
class SubmoduleSet:
    """Explicit element set of a submodule of a finite module."""

    module: FiniteModule
    elements: frozenset

    def __post_init__(self):
        M = self.module
        E = self.elements
        if M.zero not in E:
            raise BadParameter("submodule must contain 0")
        for a in E:
            for b in E:
                if M.add(a, b) not in E:
                    raise BadParameter(f"not closed under addition at ({a},{b})")
            for r in range(M.ring.size):
                if M.act(a, r) not in E:
                    raise BadParameter(f"not closed under the action at ({a},{r})")

    def is_zero(self) -> bool:
        return self.elements == frozenset([self.module.zero])

    def sorted_elements(self):
        return sorted(self.elements)

    def render(self) -> str:
        return "{" + ", ".join(self.module.render(a) for a in self.sorted_elements()) + "}"


def submodule_as_module(N: SubmoduleSet) -> tuple[FiniteModule, dict]:
    """Reindex a submodule into a standalone module; returns (module, old->new)."""
    M = N.module
    old = sorted(N.elements)
    index = {o: i for i, o in enumerate(old)}
    add = [[index[M.add(a, b)] for b in old] for a in old]
    act = [[index[M.act(a, r)] for r in range(M.ring.size)] for a in old]
    names = [M.render(a) for a in old]
    return FiniteModule(M.ring, add, act, names=names, check=False), index


def twisted_module(M: FiniteModule, ext: SkewPBWExtension, alpha: Monomial) -> FiniteModule:
    """Same additive structure, action twisted to m.r := m.sigma^alpha(r)."""
    act = [
        [M.act(m, ext.sigma_power(alpha, r)) for r in range(M.ring.size)]
        for m in range(M.size)
    ]
    return FiniteModule(M.ring, M.add_table, act, names=M.names)


class InducedElement:
    """Element of the induced module: finite map monomial -> module element."""

    __slots__ = ("ext", "module", "_terms", "_key")

    def __init__(self, ext: SkewPBWExtension, module: FiniteModule, terms: dict):
        if module.ring is not ext.ring:
            raise BadParameter("module and extension must share the coefficient ring")
        self.ext = ext
        self.module = module
        self._terms = {m: v for m, v in terms.items() if v != module.zero}
        self._key = None

    def items(self):
        order = self.ext.order
        return [(m, self._terms[m]) for m in sorted(self._terms, key=order.key, reverse=True)]

    def monomials(self):
        return [m for m, _ in self.items()]

    def coefficient(self, mono: Monomial):
        return self._terms.get(mono, self.module.zero)

    def coefficients(self):
        return [v for _, v in self.items()]

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
        return self.module.zero if m is None else self._terms[m]

    def key(self):
        if self._key is None:
            self._key = frozenset(self._terms.items())
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, InducedElement)
            and self.ext is other.ext
            and self.module is other.module
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        M = self.module
        out = dict(self._terms)
        for mono, v in other._terms.items():
            s = M.add(out.get(mono, M.zero), v)
            if s == M.zero:
                out.pop(mono, None)
            else:
                out[mono] = s
        return InducedElement(self.ext, M, out)

    def __neg__(self):
        M = self.module
        return InducedElement(self.ext, M, {m: M.neg(v) for m, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def act(self, f: SkewPoly) -> "InducedElement":
        """Right action: push f's terms through the rewriting engine."""
        if f.ext is not self.ext:
            raise BadParameter("element and polynomial live over different extensions")
        M = self.module
        out: dict = {}
        for alpha, mval in self._terms.items():
            for beta, c in f._terms.items():
                for mono, coeff in self.ext._normalize_triple(alpha, c, beta).items():
                    acc = M.add(out.get(mono, M.zero), M.act(mval, coeff))
                    if acc == M.zero:
                        out.pop(mono, None)
                    else:
                        out[mono] = acc
        return InducedElement(self.ext, M, out)

    def act_scalar(self, r) -> "InducedElement":
        return self.act(self.ext.scalar(r))

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, v in self.items():
            mono_str = self.ext.render_monomial(mono)
            val_str = self.module.render(v)
            parts.append(f"{val_str}*{mono_str}" if mono_str else val_str)
        return " + ".join(parts)

    def __repr__(self):
        return self.render()


def induced_constant(ext: SkewPBWExtension, module: FiniteModule, value) -> InducedElement:
    return InducedElement(ext, module, {unit_monomial(ext.n): value})


def induced_from_pairs(ext, module, pairs) -> InducedElement:
    terms: dict = {}
    for mono, value in pairs:
        mono = tuple(mono)
        if mono in terms:
            terms[mono] = module.add(terms[mono], value)
        else:
            terms[mono] = value
    return InducedElement(ext, module, terms)


# ---------------------------------------------------------------------------
# enumeration utilities
# ---------------------------------------------------------------------------

def skew_polys_upto(ext: SkewPBWExtension, max_degree: int, cap: int = ANNIHILATOR_SEARCH_CAP):
    """All extension elements with coefficients over R and degree <= bound."""
    R = ext.ring
    if R.backend != "finite":
        raise PolynomialBackendUnsupported("element enumeration needs a finite ring")
    cache = getattr(ext, "_poly_enum_cache", None)
    if cache is None:
        cache = {}
        ext._poly_enum_cache = cache
    if max_degree in cache:
        return cache[max_degree]
    monos = ext.order.sorted_desc(monomials_upto(ext.n, max_degree))
    count = R.size ** len(monos)
    if count > cap:
        raise SearchSpaceTooLarge(f"{count} candidate polynomials exceed the cap {cap}")
    out = []
    for coeffs in itertools.product(range(R.size), repeat=len(monos)):
        out.append(ext.from_terms({m: c for m, c in zip(monos, coeffs) if c != R.zero}))
    cache[max_degree] = out
    return out


def induced_elements_upto(
    module: FiniteModule,
    ext: SkewPBWExtension,
    max_degree: int,
    max_terms: Optional[int] = None,
    include_zero: bool = False,
    cap: int = ANNIHILATOR_SEARCH_CAP,
):
    """All induced elements of bounded degree (and optionally bounded support)."""
    monos = ext.order.sorted_desc(monomials_upto(ext.n, max_degree))
    count = module.size ** len(monos)
    if count > cap:
        raise SearchSpaceTooLarge(f"{count} candidate elements exceed the cap {cap}")
    out = []
    for values in itertools.product(range(module.size), repeat=len(monos)):
        terms = {m: v for m, v in zip(monos, values) if v != module.zero}
        if max_terms is not None and len(terms) > max_terms:
            continue
        if not terms and not include_zero:
            continue
        out.append(InducedElement(ext, module, terms))
    return out


# ---------------------------------------------------------------------------
# annihilators
# ---------------------------------------------------------------------------

def ann_element_in_ring(m) -> IdealSet:
    """{r in R : m.r = 0} as a right ideal, by exhaustion."""
    if isinstance(m, InducedElement):
        R = m.ext.ring
        ann = frozenset(r for r in range(R.size) if m.act_scalar(r).is_zero())
        return IdealSet(R, ann, "right")
    raise BadParameter("pass an InducedElement, or use FiniteModule.annihilator for ids")


def ann_module_element(M: FiniteModule, m) -> IdealSet:
    return IdealSet(M.ring, M.annihilator(m), "right")


def bounded_annihilator_in_extension(
    m: InducedElement, max_degree: int, cap: int = ANNIHILATOR_SEARCH_CAP
) -> list[SkewPoly]:
    """{f in A : deg f <= bound, m.f = 0}, by pruned exhaustive search.

    Coefficients are assigned monomial-by-monomial in descending order; a
    branch dies as soon as a product coefficient that no later assignment can
    reach fails to vanish.
    """
    ext, M = m.ext, m.module
    R = ext.ring
    if R.backend != "finite":
        raise PolynomialBackendUnsupported("annihilator search needs a finite ring")
    monos = ext.order.sorted_desc(monomials_upto(ext.n, max_degree))
    if R.size ** len(monos) > cap:
        raise SearchSpaceTooLarge(
            f"{R.size ** len(monos)} candidates exceed the cap {cap}"
        )
    if m.is_zero():
        return skew_polys_upto(ext, max_degree, cap)
    key = ext.order.key
    lm_m = m.lm()
    # precompute m.(c x^beta) for every coefficient and monomial
    basic: dict = {}
    for beta in monos:
        for c in range(R.size):
            basic[(beta, c)] = m.act(ext.monomial(beta, c)) if c != R.zero else None

    results: list[SkewPoly] = []

    def final_region_clean(partial: dict, next_idx: int) -> bool:
        if next_idx >= len(monos):
            return not partial
        threshold = key(mono_mul(lm_m, monos[next_idx]))
        return all(key(mono) <= threshold for mono in partial)

    def rec(idx: int, partial: dict, chosen: list):
        if not final_region_clean(partial, idx):
            return
        if idx == len(monos):
            if not partial:
                results.append(
                    ext.from_terms(
                        {mono: c for mono, c in zip(monos, chosen) if c != R.zero}
                    )
                )
            return
        beta = monos[idx]
        for c in range(R.size):
            contrib = basic[(beta, c)]
            if contrib is None:
                rec(idx + 1, partial, chosen + [c])
                continue
            merged = dict(partial)
            for mono, v in contrib._terms.items():
                s = M.add(merged.get(mono, M.zero), v)
                if s == M.zero:
                    merged.pop(mono, None)
                else:
                    merged[mono] = s
            rec(idx + 1, merged, chosen + [c])

    rec(0, {}, [])
    results.sort(key=lambda f: sorted((key(mon), c) for mon, c in f._terms.items()))
    return results


def ann_element(M: FiniteModule, m, where="R", ext: Optional[SkewPBWExtension] = None):
    """Annihilator of a module element or induced element.

    ``where="R"`` exhausts the coefficient ring; ``where=("A", D)`` exhausts
    extension elements of degree <= D (an oracle for the closed forms).
    """
    if where == "R":
        if isinstance(m, InducedElement):
            return ann_element_in_ring(m)
        return ann_module_element(M, m)
    if isinstance(where, tuple) and where[0] == "A":
        bound = where[1]
        if bound < 0:
            raise BadParameter("degree bound must be nonnegative")
        if not isinstance(m, InducedElement):
            if ext is None:
                raise BadParameter("lifting a module element to the induced module needs ext")
            m = induced_constant(ext, M, m)
        return bounded_annihilator_in_extension(m, bound)
    raise BadParameter(f"unknown annihilator domain {where!r}")


def induce_submodule(N: SubmoduleSet):
    """Membership test for N<X>: every coefficient lies in N."""
    allowed = N.elements

    def member(m: InducedElement) -> bool:
        return all(v in allowed for v in m._terms.values())

    return member


def coefficient_submodule_elements(
    N: SubmoduleSet, ext: SkewPBWExtension, max_degree: int, **kw
):
    """All induced elements with coefficients in N and bounded degree."""
    sub_module, index = submodule_as_module(N)
    rev = {i: o for o, i in index.items()}
    out = []
    for elt in induced_elements_upto(sub_module, ext, max_degree, **kw):
        out.append(
            InducedElement(ext, N.module, {m: rev[v] for m, v in elt._terms.items()})
        )
    return out
