"""Exact polynomial substrate: coefficient fields, ring signatures, monomial
orders, and sparse multivariate polynomials.

Coefficients are exact (arbitrary-precision rationals or a prime field);
floating point never appears. Monomials are exponent tuples, polynomials are
immutable term maps, and every order exposes a flat integer sort key so that
larger key means larger monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import SignatureMismatchError, ZeroPolynomialError

Monomial = tuple[int, ...]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the 2**31 input cap."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: exact rationals or integers mod a prime < 2**31."""

    kind: str  # "Q" or "Fp"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValueError("rational field carries no characteristic")
        elif self.kind == "Fp":
            if self.p is None or not (2 <= self.p < 2**31):
                raise ValueError("prime field needs a modulus below 2**31")
            if not _is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec("Q")

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec("Fp", p)

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def coerce(self, value):
        """Map an int, Fraction, or field element into this field."""
        if self.kind == "Q":
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError("denominator vanishes in the prime field")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return a + b if self.kind == "Q" else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.kind == "Q" else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.kind == "Q" else (a * b) % self.p

    def neg(self, a):
        return -a if self.kind == "Q" else (-a) % self.p

    def inv(self, a):
        if self.kind == "Q":
            return Fraction(1) / a
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def __str__(self) -> str:
        return "Q" if self.kind == "Q" else f"F{self.p}"


@dataclass(frozen=True)
class RingSignature:
    """A polynomial ring presentation: field, ordered variables, optional uniformizer.

    The uniformizer marks the variable modelling the parameter of an
    equicharacteristic discrete valuation coefficient ring; nothing else in the
    kernel treats it specially.
    """

    field: FieldSpec
    variables: tuple[str, ...]
    uniformizer: str | None = None

    def __post_init__(self):
        if not self.variables:
            raise ValueError("a signature needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")
        for v in self.variables:
            if not v or not (v[0].isalpha()) or not all(c.isalnum() or c == "_" for c in v):
                raise ValueError(f"bad variable name {v!r}")
        if self.uniformizer is not None and self.uniformizer not in self.variables:
            raise ValueError("uniformizer must be one of the variables")

    @property
    def arity(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in {self}") from None

    def __str__(self) -> str:
        head = f"{self.field}[{', '.join(self.variables)}]"
        if self.uniformizer:
            head += f" uniformizer {self.uniformizer}"
        return head


# ---------------------------------------------------------------------------
# monomial helpers


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """Total multiplicative well-order on monomials of a fixed arity.

    key(m) is a flat integer tuple; tuple comparison realizes the order and
    negating every entry reverses it (used by heap-based reducers).
    """

    def key(self, m: Monomial) -> tuple[int, ...]:
        raise NotImplementedError

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)


@dataclass(frozen=True)
class Grevlex(MonomialOrder):
    """Graded reverse lexicographic order; the workbench default."""

    def key(self, m: Monomial) -> tuple[int, ...]:
        return (sum(m),) + tuple(-e for e in reversed(m))


@dataclass(frozen=True)
class Lex(MonomialOrder):
    """Pure lexicographic order; earlier signature variables dominate."""

    def key(self, m: Monomial) -> tuple[int, ...]:
        return m


@dataclass(frozen=True)
class Block(MonomialOrder):
    """Elimination order: the variables in `first` dominate everything else.

    Each block is compared by grevlex, so any monomial meeting `first` beats
    every monomial supported away from it.
    """

    first: tuple[int, ...]

    def key(self, m: Monomial) -> tuple[int, ...]:
        head = tuple(m[i] for i in self.first)
        rest = tuple(e for i, e in enumerate(m) if i not in self.first)
        return (
            (sum(head),)
            + tuple(-e for e in reversed(head))
            + (sum(rest),)
            + tuple(-e for e in reversed(rest))
        )


@dataclass(frozen=True)
class Weighted(MonomialOrder):
    """Weight-vector order refined by a tie-break order."""

    weights: tuple[int, ...]
    tie: MonomialOrder

    def key(self, m: Monomial) -> tuple[int, ...]:
        return (sum(w * e for w, e in zip(self.weights, m)),) + self.tie.key(m)


GREVLEX = Grevlex()
LEX = Lex()


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable sparse polynomial over a ring signature.

    Terms map exponent tuples to nonzero field elements. Construction
    normalizes: zero coefficients are dropped and values are coerced into the
    signature's field.
    """

    __slots__ = ("signature", "terms", "_hash")

    def __init__(self, signature: RingSignature, terms: Mapping[Monomial, object]):
        field = signature.field
        clean: dict[Monomial, object] = {}
        arity = signature.arity
        for mono, coeff in terms.items():
            if len(mono) != arity:
                raise ValueError(f"exponent tuple {mono} has wrong arity for {signature}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = field.coerce(coeff)
            if c == field.zero:
                continue
            prev = clean.get(mono)
            if prev is None:
                clean[mono] = c
            else:
                s = field.add(prev, c)
                if s == field.zero:
                    del clean[mono]
                else:
                    clean[mono] = s
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    # construction helpers -------------------------------------------------

    @staticmethod
    def zero(signature: RingSignature) -> "Polynomial":
        return Polynomial(signature, {})

    @staticmethod
    def constant(signature: RingSignature, value) -> "Polynomial":
        return Polynomial(signature, {(0,) * signature.arity: value})

    @staticmethod
    def variable(signature: RingSignature, name: str) -> "Polynomial":
        i = signature.index(name)
        expo = tuple(1 if j == i else 0 for j in range(signature.arity))
        return Polynomial(signature, {expo: 1})

    @staticmethod
    def monomial(signature: RingSignature, mono: Monomial, coeff=1) -> "Polynomial":
        return Polynomial(signature, {mono: coeff})

    # predicates and accessors ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(mono_degree(m) == 0 for m in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_coefficient(self):
        return self.terms.get((0,) * self.signature.arity, self.signature.field.zero)

    def total_degree(self) -> int:
        """Largest term degree; the zero polynomial has none."""
        if not self.terms:
            raise ZeroPolynomialError("total_degree of the zero polynomial is undefined")
        return max(mono_degree(m) for m in self.terms)

    def order_at_origin(self) -> int:
        """Smallest term degree (the m-adic order)."""
        if not self.terms:
            raise ZeroPolynomialError("order of the zero polynomial is undefined")
        return min(mono_degree(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degrees = {mono_degree(m) for m in self.terms}
        return len(degrees) == 1

    def initial_form(self) -> "Polynomial":
        """Sum of the terms of minimal total degree."""
        if not self.terms:
            raise ZeroPolynomialError("initial form of the zero polynomial is undefined")
        low = min(mono_degree(m) for m in self.terms)
        return Polynomial(
            self.signature,
            {m: c for m, c in self.terms.items() if mono_degree(m) == low},
        )

    def leading(self, order: MonomialOrder) -> tuple[Monomial, object]:
        """(leading monomial, leading coefficient) with respect to `order`."""
        if not self.terms:
            raise ZeroPolynomialError("leading term of the zero polynomial is undefined")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.signature != other.signature:
            raise SignatureMismatchError(
                f"operands live over {self.signature} and {other.signature}"
            )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        field = self.signature.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = field.add(out.get(m, field.zero), c)
            if s == field.zero:
                out.pop(m, None)
            else:
                out[m] = s
        p = Polynomial.zero(self.signature)
        object.__setattr__(p, "terms", out)
        return p

    def __neg__(self) -> "Polynomial":
        field = self.signature.field
        p = Polynomial.zero(self.signature)
        object.__setattr__(p, "terms", {m: field.neg(c) for m, c in self.terms.items()})
        return p

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        field = self.signature.field
        out: dict[Monomial, object] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                s = field.add(out.get(m, field.zero), field.mul(ca, cb))
                if s == field.zero:
                    out.pop(m, None)
                else:
                    out[m] = s
        p = Polynomial.zero(self.signature)
        object.__setattr__(p, "terms", out)
        return p

    def scale(self, value) -> "Polynomial":
        field = self.signature.field
        c = field.coerce(value)
        if c == field.zero:
            return Polynomial.zero(self.signature)
        p = Polynomial.zero(self.signature)
        object.__setattr__(p, "terms", {m: field.mul(c, k) for m, k in self.terms.items()})
        return p

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(self.signature, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # substitution ----------------------------------------------------------

    def map_variables(
        self, target: RingSignature, mapping: Mapping[str, str]
    ) -> "Polynomial":
        """Push the polynomial along a variable-to-variable ring map.

        The map need not be injective; exponents of identified variables
        aggregate, so collapsing two copies of a variable sends their
        difference to zero.
        """
        index = []
        for i, v in enumerate(self.signature.variables):
            image = mapping.get(v)
            if image is None:
                if any(m[i] for m in self.terms):
                    raise ValueError(f"variable {v!r} occurs but has no image")
                index.append(None)
            else:
                index.append(target.index(image))
        out: dict[Monomial, object] = {}
        field = target.field
        for m, c in self.terms.items():
            expo = [0] * target.arity
            for i, e in enumerate(m):
                if e:
                    expo[index[i]] += e
            key = tuple(expo)
            s = field.add(out.get(key, field.zero), field.coerce(c))
            if s == field.zero:
                out.pop(key, None)
            else:
                out[key] = s
        return Polynomial(target, out)

    def substitute(
        self, target: RingSignature, images: Mapping[str, "Polynomial"]
    ) -> "Polynomial":
        """Evaluate under x_i -> images[x_i], a polynomial of the target ring."""
        power_cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = images[self.signature.variables[i]] ** e
            return power_cache[key]

        total = Polynomial.zero(target)
        for m, c in self.terms.items():
            part = Polynomial.constant(target, target.field.coerce(c))
            for i, e in enumerate(m):
                if e:
                    part = part * power(i, e)
            total = total + part
        return total

    # comparison and display --------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.signature == other.signature
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            items = tuple(sorted(self.terms.items()))
            object.__setattr__(self, "_hash", hash((self.signature, items)))
        return self._hash

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.signature.variables
        chunks: list[str] = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            coeff = c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c
            text = str(coeff)
            if body:
                if text == "1":
                    text = body
                elif text == "-1":
                    text = f"-{body}"
                else:
                    text = f"{text}*{body}"
            chunks.append(text)
        out = chunks[0]
        for chunk in chunks[1:]:
            if chunk.startswith("-"):
                out += f" - {chunk[1:]}"
            else:
                out += f" + {chunk}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def rename_embed(
    poly: Polynomial, target: RingSignature, mapping: Mapping[str, str]
) -> Polynomial:
    """Spec-level name for pushing a polynomial along a variable map."""
    return poly.map_variables(target, mapping)


def polynomial_sum(signature: RingSignature, parts: Iterable[Polynomial]) -> Polynomial:
    total = Polynomial.zero(signature)
    for p in parts:
        total = total + p
    return total
