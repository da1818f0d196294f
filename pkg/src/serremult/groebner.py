"""Groebner kernel: Buchberger's algorithm, reduced bases, and the ideal-level
operations built on them (colength, Krull dimension, Hilbert series,
elimination, quotients, radical membership).

Reduced bases are unique for a fixed order, which is what makes every consumer
of this module deterministic. Resource caps are hard errors, never silent
truncation.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import (
    BudgetExceededError,
    CertificateError,
    NonHomogeneousError,
    PreconditionError,
    SignatureMismatchError,
    UnitIdealError,
)
from .polyalg import (
    GREVLEX,
    Block,
    Monomial,
    MonomialOrder,
    Polynomial,
    RingSignature,
    mono_coprime,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

INFINITE = math.inf


@dataclass(frozen=True)
class Budget:
    """Hard resource caps for basis computations."""

    max_degree: int = 40
    max_pairs: int = 200_000


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced, monic, lead-monomial-sorted basis for a fixed order."""

    signature: RingSignature
    order: MonomialOrder
    elements: tuple[Polynomial, ...]

    @property
    def lead_monomials(self) -> tuple[Monomial, ...]:
        return tuple(g.leading(self.order)[0] for g in self.elements)

    def is_unit_ideal(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant() and not self.elements[0].is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.elements


class Ideal:
    """An ideal presented by generators, with a per-order reduced-basis cache.

    The cache is idempotent (reduced bases are unique), so concurrent
    read/insert is harmless.
    """

    __slots__ = ("signature", "generators", "_gb_cache", "_cone_cache", "_hs_profile")

    def __init__(self, signature: RingSignature, generators: Iterable[Polynomial]):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                raise TypeError("generators must be polynomials")
            if g.signature != signature:
                raise SignatureMismatchError(
                    f"generator over {g.signature} in ideal over {signature}"
                )
            if not g.is_zero():
                gens.append(g)
        if not gens:
            gens = [Polynomial.zero(signature)]
        self.signature = signature
        self.generators = tuple(gens)
        self._gb_cache: dict[MonomialOrder, GroebnerBasis] = {}
        self._cone_cache: dict = {}
        self._hs_profile: list[int] | None = None

    def is_zero_ideal(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_zero()

    def groebner(
        self,
        order: MonomialOrder = GREVLEX,
        budget: Budget = DEFAULT_BUDGET,
        use_criteria: bool = True,
    ) -> GroebnerBasis:
        cached = self._gb_cache.get(order)
        if cached is not None:
            return cached
        elements = _buchberger(self.generators, order, budget, use_criteria)
        gb = GroebnerBasis(self.signature, order, elements)
        self._gb_cache.setdefault(order, gb)
        return self._gb_cache[order]

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"Ideal({gens})"


# ---------------------------------------------------------------------------
# division


def _prepare_reducers(
    elements: Sequence[Polynomial], order: MonomialOrder
) -> list[tuple[Monomial, dict]]:
    """Monic (lead monomial, tail) pairs, sorted by lead monomial."""
    reducers = []
    for g in elements:
        if g.is_zero():
            continue
        lm, lc = g.leading(order)
        field = g.signature.field
        inv = field.inv(lc)
        tail = {m: field.mul(inv, c) for m, c in g.terms.items() if m != lm}
        reducers.append((lm, tail))
    reducers.sort(key=lambda r: order.key(r[0]))
    return reducers


def _reduce_terms(terms: dict, reducers: list, order: MonomialOrder, field) -> dict:
    """Full normal form of a term dict against prepared monic reducers."""
    key = order.key
    p = dict(terms)
    remainder: dict = {}
    heap = [(tuple(-x for x in key(m)), m) for m in p]
    heapq.heapify(heap)
    zero = field.zero
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        hit = None
        for lm, tail in reducers:
            if mono_divides(lm, m):
                hit = (lm, tail)
                break
        if hit is None:
            remainder[m] = c
            del p[m]
            continue
        lm, tail = hit
        q = mono_div(m, lm)
        del p[m]
        for tm, tc in tail.items():
            nm = mono_mul(q, tm)
            delta = field.mul(c, tc)
            prev = p.get(nm)
            if prev is None:
                nv = field.neg(delta)
                if nv != zero:
                    p[nm] = nv
                    heapq.heappush(heap, (tuple(-x for x in key(nm)), nm))
            else:
                nv = field.sub(prev, delta)
                if nv == zero:
                    del p[nm]
                else:
                    p[nm] = nv
    return remainder


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Canonical remainder of f modulo the basis; zero exactly on members."""
    if f.signature != gb.signature:
        raise SignatureMismatchError("polynomial and basis signatures differ")
    reducers = _prepare_reducers(gb.elements, gb.order)
    out = _reduce_terms(f.terms, reducers, gb.order, f.signature.field)
    p = Polynomial.zero(f.signature)
    object.__setattr__(p, "terms", out)
    return p


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    lmf, lcf = f.leading(order)
    lmg, lcg = g.leading(order)
    L = mono_lcm(lmf, lmg)
    field = f.signature.field
    a = Polynomial.monomial(f.signature, mono_div(L, lmf), field.inv(lcf))
    b = Polynomial.monomial(g.signature, mono_div(L, lmg), field.inv(lcg))
    return a * f - b * g


# ---------------------------------------------------------------------------
# Buchberger


def _buchberger(
    gens: Sequence[Polynomial],
    order: MonomialOrder,
    budget: Budget,
    use_criteria: bool,
) -> tuple[Polynomial, ...]:
    signature = gens[0].signature
    field = signature.field
    key = order.key

    seed = [g for g in gens if not g.is_zero()]
    if not seed:
        return ()

    # basis entries: (lead monomial, monic term dict, is single term)
    lms: list[Monomial] = []
    bodies: list[dict] = []
    reducers: list[tuple[Monomial, dict]] = []
    pairs_set: set[tuple[int, int]] = set()
    heap: list[tuple[int, int, int]] = []

    def lcm_of(i: int, j: int) -> Monomial:
        return mono_lcm(lms[i], lms[j])

    def push_element(terms: dict) -> int:
        lm = max(terms, key=key)
        inv = field.inv(terms[lm])
        monic = {m: field.mul(inv, c) for m, c in terms.items()}
        lms.append(lm)
        bodies.append(monic)
        tail = {m: c for m, c in monic.items() if m != lm}
        reducers.append((lm, tail))
        return len(lms) - 1

    def update_pairs(h: int):
        lm_h = lms[h]
        h_single = len(bodies[h]) == 1
        cand = list(range(h))
        if use_criteria:
            lcms = {i: mono_lcm(lms[i], lm_h) for i in cand}
            survivors = []
            for i in cand:
                ti = lcms[i]
                dead = False
                for j in cand:
                    if j != i and lcms[j] != ti and mono_divides(lcms[j], ti):
                        dead = True
                        break
                if not dead:
                    survivors.append(i)
            groups: dict[Monomial, list[int]] = {}
            for i in survivors:
                groups.setdefault(lcms[i], []).append(i)
            fresh = []
            for t in sorted(groups, key=key):
                members = groups[t]
                if any(mono_coprime(lms[i], lm_h) for i in members):
                    continue
                fresh.append(min(members))
            for pair in list(pairs_set):
                i, j = pair
                lij = lcm_of(i, j)
                if (
                    mono_divides(lm_h, lij)
                    and mono_lcm(lms[i], lm_h) != lij
                    and mono_lcm(lms[j], lm_h) != lij
                ):
                    pairs_set.discard(pair)
        else:
            fresh = cand
        for i in fresh:
            if h_single and len(bodies[i]) == 1:
                continue  # S-polynomial of two monomials vanishes identically
            pair = (i, h)
            pairs_set.add(pair)
            heapq.heappush(heap, (mono_degree(lcm_of(i, h)), i, h))

    unit = False
    for g in seed:
        if g.is_constant():
            unit = True
            break
        idx = push_element(dict(g.terms))
        update_pairs(idx)

    processed = 0
    while not unit and heap:
        deg, i, j = heapq.heappop(heap)
        if (i, j) not in pairs_set:
            continue
        pairs_set.discard((i, j))
        processed += 1
        if processed > budget.max_pairs:
            raise BudgetExceededError(
                f"pair budget {budget.max_pairs} exhausted during basis computation"
            )
        L = lcm_of(i, j)
        qi, qj = mono_div(L, lms[i]), mono_div(L, lms[j])
        s: dict = {}
        for m, c in bodies[i].items():
            s[mono_mul(qi, m)] = c
        for m, c in bodies[j].items():
            nm = mono_mul(qj, m)
            prev = s.get(nm)
            nv = field.sub(prev, c) if prev is not None else field.neg(c)
            if prev is not None and nv == field.zero:
                del s[nm]
            else:
                s[nm] = nv
        h = _reduce_terms(s, reducers, order, field)
        if not h:
            continue
        hdeg = max(mono_degree(m) for m in h)
        if hdeg > budget.max_degree:
            raise BudgetExceededError(
                f"degree budget {budget.max_degree} exceeded (element of degree {hdeg})"
            )
        if hdeg == 0:
            unit = True
            break
        idx = push_element(h)
        update_pairs(idx)

    if unit:
        return (Polynomial.constant(signature, 1),)

    # minimalize: keep only elements whose lead is not divisible by another kept lead
    idx_sorted = sorted(range(len(lms)), key=lambda i: key(lms[i]))
    kept: list[int] = []
    for i in idx_sorted:
        if not any(mono_divides(lms[j], lms[i]) for j in kept):
            kept.append(i)

    # interreduce tails; full normal form is canonical, one pass suffices
    final: list[dict] = []
    for pos, i in enumerate(kept):
        others = [
            (lms[j], {m: c for m, c in bodies[j].items() if m != lms[j]})
            for j in kept
            if j != i
        ]
        others.sort(key=lambda r: key(r[0]))
        red = _reduce_terms(bodies[i], others, order, field)
        lm = max(red, key=key)
        inv = field.inv(red[lm])
        final.append({m: field.mul(inv, c) for m, c in red.items()})

    final.sort(key=lambda terms: key(max(terms, key=key)))
    out = []
    for terms in final:
        p = Polynomial.zero(signature)
        object.__setattr__(p, "terms", dict(terms))
        out.append(p)
    return tuple(out)


# ---------------------------------------------------------------------------
# ideal arithmetic


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    if a.signature != b.signature:
        raise SignatureMismatchError("ideal sum across different signatures")
    return Ideal(a.signature, a.generators + b.generators)


def ideal_power(a: Ideal, n: int) -> Ideal:
    if n < 0:
        raise ValueError("negative ideal power")
    if n == 0:
        return Ideal(a.signature, [Polynomial.constant(a.signature, 1)])
    gens = []
    for combo in itertools.combinations_with_replacement(a.generators, n):
        prod = combo[0]
        for g in combo[1:]:
            prod = prod * g
        gens.append(prod)
    return Ideal(a.signature, gens)


def ideal_equal(a: Ideal, b: Ideal, budget: Budget = DEFAULT_BUDGET) -> bool:
    """Reduced bases are unique per order, so equality is basis equality."""
    if a.signature != b.signature:
        raise SignatureMismatchError("ideal comparison across different signatures")
    return a.groebner(GREVLEX, budget).elements == b.groebner(GREVLEX, budget).elements


def ideal_contains(a: Ideal, f: Polynomial, budget: Budget = DEFAULT_BUDGET) -> bool:
    return normal_form(f, a.groebner(GREVLEX, budget)).is_zero()


# ---------------------------------------------------------------------------
# monomial-ideal Hilbert numerator


def _minimalize_monomials(gens: Iterable[Monomial]) -> tuple[Monomial, ...]:
    ordered = sorted(set(gens), key=lambda m: (mono_degree(m), m))
    kept: list[Monomial] = []
    for m in ordered:
        if not any(mono_divides(k, m) for k in kept):
            kept.append(m)
    return tuple(kept)


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _numerator(gens: tuple[Monomial, ...], memo: dict) -> list[int]:
    """Numerator of the Hilbert series of S/(gens) over (1-u)^arity."""
    if not gens:
        return [1]
    hit = memo.get(gens)
    if hit is not None:
        return hit
    if all(sum(1 for e in m if e) <= 1 for m in gens):
        # pairwise-coprime pure powers: Koszul product
        out = [1]
        for m in gens:
            d = mono_degree(m)
            factor = [1] + [0] * (d - 1) + [-1]
            out = _poly_mul(out, factor)
        memo[gens] = out
        return out
    arity = len(gens[0])
    counts = [0] * arity
    for m in gens:
        if sum(1 for e in m if e) >= 2:
            for i, e in enumerate(m):
                if e:
                    counts[i] += 1
    pivot = max(range(arity), key=lambda i: counts[i])
    var = tuple(1 if i == pivot else 0 for i in range(arity))
    left = _minimalize_monomials(
        [m for m in gens if m[pivot] == 0] + [var]
    )
    right = _minimalize_monomials(
        tuple(e - 1 if i == pivot and e else e for i, e in enumerate(m)) for m in gens
    )
    out = _poly_add(_numerator(left, memo), [0] + _numerator(right, memo))
    memo[gens] = out
    return out


@dataclass(frozen=True)
class HilbertSeries:
    """numerator(u) / (1-u)^pole_order with numerator(1) != 0."""

    numerator: tuple[int, ...]
    pole_order: int

    @property
    def e(self) -> int:
        return sum(self.numerator)

    def coefficient(self, n: int) -> int:
        """The degree-n coefficient of the power-series expansion."""
        if n < 0:
            return 0
        if self.pole_order == 0:
            return self.numerator[n] if n < len(self.numerator) else 0
        d = self.pole_order
        total = 0
        for j, c in enumerate(self.numerator):
            if j > n:
                break
            if c:
                total += c * math.comb(n - j + d - 1, d - 1)
        return total

    def coefficients(self, upto: int) -> list[int]:
        return [self.coefficient(n) for n in range(upto + 1)]


def _cancel(numerator: list[int], pole: int) -> HilbertSeries:
    num = list(numerator)
    while num and num[-1] == 0:
        num.pop()
    if not num:
        raise CertificateError("vanishing Hilbert numerator")
    while pole > 0 and sum(num) == 0:
        acc = 0
        quotient = []
        for c in num[:-1]:
            acc += c
            quotient.append(acc)
        num = quotient
        while num and num[-1] == 0:
            num.pop()
        pole -= 1
    return HilbertSeries(tuple(num), pole)


def hilbert_series(ideal: Ideal, budget: Budget = DEFAULT_BUDGET) -> HilbertSeries:
    """Hilbert series of the graded quotient by a homogeneous ideal."""
    for g in ideal.generators:
        if not g.is_homogeneous():
            raise NonHomogeneousError(f"generator {g} is not homogeneous")
    gb = ideal.groebner(GREVLEX, budget)
    if gb.is_unit_ideal():
        raise UnitIdealError("Hilbert series of the zero ring is rejected")
    if gb.is_zero_ideal():
        return HilbertSeries((1,), ideal.signature.arity)
    lead = _minimalize_monomials(gb.lead_monomials)
    raw = _numerator(lead, {})
    return _cancel(raw, ideal.signature.arity)


# ---------------------------------------------------------------------------
# colength and dimension


def colength(ideal: Ideal, budget: Budget = DEFAULT_BUDGET):
    """Vector-space dimension of the quotient ring; math.inf when infinite."""
    gb = ideal.groebner(GREVLEX, budget)
    if gb.is_unit_ideal():
        return 0
    if gb.is_zero_ideal():
        return INFINITE
    lead = _minimalize_monomials(gb.lead_monomials)
    arity = ideal.signature.arity
    for i in range(arity):
        if not any(all(e == 0 for k, e in enumerate(m) if k != i) and m[i] > 0 for m in lead):
            return INFINITE
    series = _cancel(_numerator(lead, {}), arity)
    if series.pole_order != 0:
        raise CertificateError("finite colength with a positive-order pole")
    return series.e


def krull_dim(ideal: Ideal, budget: Budget = DEFAULT_BUDGET) -> int:
    """Dimension of the quotient ring via maximal lead-term-independent variable sets."""
    gb = ideal.groebner(GREVLEX, budget)
    if gb.is_unit_ideal():
        raise UnitIdealError("Krull dimension of the zero ring is rejected")
    if gb.is_zero_ideal():
        return ideal.signature.arity
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in gb.lead_monomials]
    arity = ideal.signature.arity
    best = 0
    for mask in range(1 << arity):
        size = mask.bit_count()
        if size <= best:
            continue
        chosen = {i for i in range(arity) if mask >> i & 1}
        if not any(s <= chosen for s in supports):
            best = size
    return best


# ---------------------------------------------------------------------------
# elimination, quotients, radical membership


def _fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "0" if not name[-1].isdigit() else "0"
        if name not in taken:
            break
        name = base + str(len(name))
    while name in taken:
        name = "_" + name
    return name


def eliminate(
    ideal: Ideal, drop: Iterable[str], budget: Budget = DEFAULT_BUDGET
) -> Ideal:
    """Intersect with the subring omitting `drop`, via a block order."""
    sig = ideal.signature
    drop = list(drop)
    indices = tuple(sorted(sig.index(v) for v in drop))
    if len(set(indices)) != len(drop):
        raise ValueError("duplicate variables to eliminate")
    remaining = [v for i, v in enumerate(sig.variables) if i not in indices]
    if not remaining:
        raise PreconditionError("cannot eliminate every variable")
    uniformizer = sig.uniformizer if sig.uniformizer in remaining else None
    target = RingSignature(sig.field, tuple(remaining), uniformizer)
    gb = ideal.groebner(Block(indices), budget)
    mapping = {v: v for v in remaining}
    kept = []
    for g in gb.elements:
        if all(all(m[i] == 0 for i in indices) for m in g.terms):
            kept.append(g.map_variables(target, mapping))
    return Ideal(target, kept)


def _divexact(g: Polynomial, f: Polynomial) -> Polynomial:
    """g / f when f divides g exactly; certificate error otherwise."""
    sig = g.signature
    field = sig.field
    order = GREVLEX
    lmf, lcf = f.leading(order)
    rest = dict(g.terms)
    quotient: dict[Monomial, object] = {}
    while rest:
        m = max(rest, key=order.key)
        if not mono_divides(lmf, m):
            raise CertificateError("exact division with a nonzero remainder")
        q = mono_div(m, lmf)
        c = field.div(rest[m], lcf)
        quotient[q] = c
        for tm, tc in f.terms.items():
            nm = mono_mul(q, tm)
            nv = field.sub(rest.get(nm, field.zero), field.mul(c, tc))
            if nv == field.zero:
                rest.pop(nm, None)
            else:
                rest[nm] = nv
    return Polynomial(sig, quotient)


def ideal_quotient_by_poly(
    ideal: Ideal, f: Polynomial, budget: Budget = DEFAULT_BUDGET
) -> Ideal:
    """(I : f), via intersection with (f) by the auxiliary-variable construction."""
    if f.signature != ideal.signature:
        raise SignatureMismatchError("quotient divisor over a different signature")
    if f.is_zero():
        raise PreconditionError("ideal quotient by the zero polynomial")
    if ideal.is_zero_ideal():
        return ideal
    sig = ideal.signature
    w = _fresh_name("w", sig.variables)
    ext = RingSignature(sig.field, sig.variables + (w,), sig.uniformizer)
    embed = {v: v for v in sig.variables}
    wpoly = Polynomial.variable(ext, w)
    one = Polynomial.constant(ext, 1)
    gens = [wpoly * g.map_variables(ext, embed) for g in ideal.generators]
    gens.append((one - wpoly) * f.map_variables(ext, embed))
    meet = eliminate(Ideal(ext, gens), [w], budget)
    back = {v: v for v in sig.variables}
    quotient = [
        _divexact(g.map_variables(sig, back), f) for g in meet.generators if not g.is_zero()
    ]
    return Ideal(sig, quotient)


def radical_membership(
    f: Polynomial, ideal: Ideal, budget: Budget = DEFAULT_BUDGET
) -> bool:
    """f in the radical of I, by the auxiliary inverse-variable trick."""
    if f.signature != ideal.signature:
        raise SignatureMismatchError("radical membership across signatures")
    if f.is_zero():
        return True
    sig = ideal.signature
    w = _fresh_name("w", sig.variables)
    ext = RingSignature(sig.field, sig.variables + (w,), sig.uniformizer)
    embed = {v: v for v in sig.variables}
    gens = [g.map_variables(ext, embed) for g in ideal.generators]
    gens.append(
        Polynomial.constant(ext, 1)
        - Polynomial.variable(ext, w) * f.map_variables(ext, embed)
    )
    return Ideal(ext, gens).groebner(GREVLEX, budget).is_unit_ideal()
