"""Sparse Laurent polynomials with integer coefficients.

A :class:`LaurentPoly` is an immutable map from exponent tuples to nonzero
Python ints.  Terms are ordered lexicographically with the *last* variable
most significant (``x1 < x2 < ... < xn``); the same order drives the
single-divisor reduction in :func:`try_div_exact` and canonical printing.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .lattice import UnimodularMap

Exponent = tuple[int, ...]


def term_key(e: Exponent) -> Exponent:
    """Sort key realising the global term order (last variable most significant)."""
    return e[::-1]


class LaurentPoly:
    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], int] | Iterable[tuple[Sequence[int], int]] = ()):
        if n < 1:
            raise ValueError("a Laurent polynomial needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = {}
        for e, c in items:
            e = tuple(int(a) for a in e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not have {n} entries")
            acc[e] = acc.get(e, 0) + int(c)
        self.n = n
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict[Exponent, int]) -> "LaurentPoly":
        # caller guarantees normalized terms
        p = cls.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, n: int, c: int) -> "LaurentPoly":
        return cls._raw(n, {(0,) * n: int(c)} if c else {})

    @classmethod
    def monomial(cls, e: Sequence[int], c: int = 1) -> "LaurentPoly":
        e = tuple(int(a) for a in e)
        return cls._raw(len(e), {e: int(c)} if c else {})

    @classmethod
    def variables(cls, n: int) -> list["LaurentPoly"]:
        return [cls.monomial(tuple(int(i == j) for j in range(n))) for i in range(n)]

    # -- container protocol -------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exponent, int]]:
        """Terms sorted in descending term order."""
        return sorted(self._terms.items(), key=lambda t: term_key(t[0]), reverse=True)

    def sorted_terms(self) -> tuple[tuple[Exponent, int], ...]:
        """Terms sorted ascending by exponent tuple; used for canonical keys."""
        return tuple(sorted(self._terms.items()))

    def support(self) -> list[Exponent]:
        return list(self._terms)

    def coefficient(self, e: Sequence[int]) -> int:
        return self._terms.get(tuple(e), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.n, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.n != self.n:
                raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.n, other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exponent, int] = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return LaurentPoly._raw(self.n, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if not isinstance(k, int):
            raise TypeError("exponent must be an int")
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have negative powers in the Laurent ring")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise ValueError("monomial with non-unit coefficient is not invertible")
            return LaurentPoly.monomial(tuple(k * a for a in e), c ** (-k))
        result = LaurentPoly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, e: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``x^e``."""
        return LaurentPoly._raw(self.n, {tuple(a + b for a, b in zip(u, e)): c for u, c in self._terms.items()})

    def scale(self, k: int) -> "LaurentPoly":
        if not k:
            return LaurentPoly._raw(self.n, {})
        return LaurentPoly._raw(self.n, {e: c * k for e, c in self._terms.items()})

    def map_exponents(self, matrix: Sequence[Sequence[int]]) -> "LaurentPoly":
        """Apply the exponent map ``u -> matrix @ u`` (no unimodularity check)."""
        out: dict[Exponent, int] = {}
        for u, c in self._terms.items():
            e = tuple(sum(m * x for m, x in zip(row, u)) for row in matrix)
            out[e] = out.get(e, 0) + c
        return LaurentPoly._raw(len(matrix), {e: c for e, c in out.items() if c})

    def min_exponent(self) -> Exponent:
        return tuple(min(col) for col in zip(*self._terms))

    def max_exponent(self) -> Exponent:
        return tuple(max(col) for col in zip(*self._terms))

    def leading_term(self) -> tuple[Exponent, int]:
        e = max(self._terms, key=term_key)
        return e, self._terms[e]

    def total_degree_span(self) -> int:
        if not self._terms:
            return 0
        lo, hi = self.min_exponent(), self.max_exponent()
        return sum(h - l for h, l in zip(hi, lo))

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.n}, {format_poly(self)!r})"

    def to_json(self) -> list[dict]:
        return [{"c": str(c), "e": list(e)} for e, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, n: int, data: Iterable[Mapping]) -> "LaurentPoly":
        terms = []
        for t in data:
            e = [int(a) for a in t["e"]]
            if len(e) != n:
                raise ValueError(f"term exponent {e} does not match n={n}")
            terms.append((e, int(str(t["c"]))))
        return cls(n, terms)


@dataclass(frozen=True)
class LocalizedPoly:
    """``numerator * factor**(-power)``, kept reduced."""

    numerator: LaurentPoly
    factor: LaurentPoly
    power: int

    def __post_init__(self):
        if self.factor.coefficient((0,) * self.factor.n) != 1:
            raise ValueError("factor must have constant term 1")
        if self.power < 0:
            raise ValueError("power must be nonnegative")

    def to_json(self) -> dict:
        return {
            "numerator": self.numerator.to_json(),
            "factor": self.factor.to_json(),
            "power": self.power,
            "text": f"({self.numerator}) / ({self.factor})^{self.power}",
        }


@dataclass(frozen=True)
class NonLaurent:
    """A mutation whose result is not a Laurent polynomial.

    ``witness`` is the reduced non-Laurent part; ``laurent_part`` collects the
    terms that expanded without division.
    """

    witness: LocalizedPoly
    laurent_part: LaurentPoly

    def to_json(self) -> dict:
        return {"non_laurent": True, "witness": self.witness.to_json(), "laurent_part": self.laurent_part.to_json()}


# -- exact division -----------------------------------------------------------


def try_div_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly | None:
    """Return ``t`` with ``t * q == p`` or ``None`` if no Laurent ``t`` exists.

    Both operands are shifted into ordinary polynomials (``q`` loses its
    monomial content), then ``p`` is reduced by ``q`` under the global lex
    order.  Reduction stops at the first leading term that ``LT(q)`` does not
    divide, since every multiple of ``q`` has a leading term divisible by it.
    """
    if q.n != p.n:
        raise ValueError(f"variable count mismatch: {p.n} vs {q.n}")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return p
    n = p.n
    qmin, pmin = q.min_exponent(), p.min_exponent()
    qt = {tuple(a - b for a, b in zip(e, qmin)): c for e, c in q._terms.items()}
    rem = {tuple(a - b for a, b in zip(e, pmin)): c for e, c in p._terms.items()}
    # every variable's degree range in p must cover that of q
    qmax = tuple(max(col) for col in zip(*qt))
    pmax = tuple(max(col) for col in zip(*rem))
    if any(a < b for a, b in zip(pmax, qmax)):
        return None
    lq = max(qt, key=term_key)
    lc = qt[lq]
    rest = [(e, c) for e, c in qt.items() if e != lq]
    heap = [tuple(-x for x in term_key(e)) for e in rem]
    heapq.heapify(heap)
    quotient: dict[Exponent, int] = {}
    while rem:
        k = heapq.heappop(heap)
        e = tuple(-x for x in k)[::-1]
        c = rem.get(e)
        if c is None:
            continue
        d = tuple(a - b for a, b in zip(e, lq))
        if any(a < 0 for a in d) or c % lc:
            return None
        t = c // lc
        quotient[d] = t
        del rem[e]
        for eq, cq in rest:
            f = tuple(a + b for a, b in zip(d, eq))
            s = rem.get(f, 0) - t * cq
            if s:
                if f not in rem:
                    heapq.heappush(heap, tuple(-x for x in term_key(f)))
                rem[f] = s
            else:
                rem.pop(f, None)
    off = tuple(a - b for a, b in zip(pmin, qmin))
    return LaurentPoly._raw(n, {tuple(a + b for a, b in zip(e, off)): c for e, c in quotient.items()})


def div_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    t = try_div_exact(p, q)
    if t is None:
        raise ArithmeticError(f"({q}) does not divide ({p})")
    return t


# -- mutation by substitution -------------------------------------------------


def localized_mutate(w: LaurentPoly, factor: LaurentPoly, weight: Sequence[int]) -> LaurentPoly | NonLaurent:
    """Compute ``sum_u c_u x^u * factor**(-<u, weight>)`` exactly.

    Terms of nonpositive weight are expanded directly.  The others are put
    over ``factor**M`` (``M`` the largest positive weight) and the numerator
    is divided by ``factor`` ``M`` times; the first failure yields a
    :class:`NonLaurent` carrying the reduced fraction.
    """
    n = w.n
    if factor.n != n or len(weight) != n:
        raise ValueError("factor, weight and polynomial must share the variable count")
    if factor.coefficient((0,) * n) != 1:
        raise ValueError(f"factor {factor} must have constant term 1")
    weight = tuple(int(a) for a in weight)
    powers: dict[int, LaurentPoly] = {0: LaurentPoly.constant(n, 1)}

    def fpow(k: int) -> LaurentPoly:
        if k not in powers:
            powers[k] = fpow(k - 1) * factor
        return powers[k]

    by_weight: dict[int, dict[Exponent, int]] = {}
    for u, c in w._terms.items():
        s = sum(a * b for a, b in zip(u, weight))
        by_weight.setdefault(s, {})[u] = c
    top = max((s for s in by_weight if s > 0), default=0)
    laurent = LaurentPoly.constant(n, 0)
    numer = LaurentPoly.constant(n, 0)
    for s, terms in by_weight.items():
        part = LaurentPoly._raw(n, terms)
        if s <= 0:
            laurent = laurent + part * fpow(-s)
        else:
            numer = numer + part * fpow(top - s)
    if factor.is_constant():
        return laurent + numer
    for i in range(top):
        t = try_div_exact(numer, factor)
        if t is None:
            return NonLaurent(LocalizedPoly(numer, factor, top - i), laurent)
        numer = t
    return laurent + numer


def monomial_substitute(w: LaurentPoly, m: UnimodularMap | Sequence[Sequence[int]]) -> LaurentPoly:
    """Act by ``m`` on the torus: the exponent ``u`` goes to ``transpose(m) @ u``.

    For ``m = [[a, b], [c, d]]`` this is ``(x, y) -> (x^a y^b, x^c y^d)``.
    """
    if not isinstance(m, UnimodularMap):
        m = UnimodularMap(tuple(tuple(r) for r in m))
    if m.n != w.n:
        raise ValueError(f"map of size {m.n} on a polynomial in {w.n} variables")
    cols = list(zip(*m.entries))
    return w.map_exponents(cols)


# -- evaluation and derivatives -----------------------------------------------


def evaluate(w: LaurentPoly, point: Sequence[int | Fraction]) -> Fraction:
    """Exact value at a point of the torus (all coordinates nonzero)."""
    pt = [Fraction(a) for a in point]
    if len(pt) != w.n:
        raise ValueError(f"point has {len(pt)} coordinates, polynomial has {w.n} variables")
    if any(a == 0 for a in pt):
        raise ValueError("evaluation point must have nonzero coordinates")
    total = Fraction(0)
    for e, c in w._terms.items():
        v = Fraction(c)
        for a, k in zip(pt, e):
            if k:
                v *= a**k
        total += v
    return total


def log_derivative(w: LaurentPoly, i: int) -> LaurentPoly:
    """``x_i * d/dx_i`` applied to ``w``."""
    if not 0 <= i < w.n:
        raise IndexError(f"variable index {i} out of range for n={w.n}")
    return LaurentPoly._raw(w.n, {e: c * e[i] for e, c in w._terms.items() if e[i]})


def vanishing_order(w: LaurentPoly, g: LaurentPoly) -> tuple[int, bool]:
    """Largest ``m`` with ``g**m`` dividing ``w``.

    Returns ``(m, capped)``; ``capped`` is only true for ``w == 0`` where the
    order is infinite and ``m`` is the iteration cap.
    """
    if g.is_constant():
        raise ValueError("vanishing order along a constant is undefined")
    cap = w.total_degree_span() + 1
    if w.is_zero():
        return cap, True
    m = 0
    cur = w
    while True:
        t = try_div_exact(cur, g)
        if t is None:
            return m, False
        m += 1
        cur = t
        if m > cap:
            raise RuntimeError("vanishing order exceeded its degree cap on a nonzero polynomial")


# -- text format --------------------------------------------------------------


def variable_names(n: int) -> list[str]:
    return ["x", "y", "z"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)]


def format_poly(w: LaurentPoly) -> str:
    if w.is_zero():
        return "0"
    names = variable_names(w.n)
    out = []
    for e, c in w.items():
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        mono = "*".join(factors)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|(\*\*|[-+*^()/]))")


class ParseError(ValueError):
    pass


def parse_poly(text: str, n: int) -> LaurentPoly:
    """Parse a potential such as ``x + y + x^-1*y^-1`` or ``(1+x+y)^3*x^-1*y^-1 - 6``.

    Variables are ``x1..xn``; ``x, y, z`` are accepted when ``n <= 3``.
    Parentheses and nonnegative powers of parenthesised groups are allowed;
    negative powers only apply to variables (or monomials).
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        if m.group(1):
            tokens.append(("int", int(m.group(1))))
        elif m.group(2):
            tokens.append(("var", m.group(2)))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op))
    names = {f"x{i + 1}": i for i in range(n)}
    if n <= 3:
        names.update({v: i for i, v in enumerate("xyz"[:n])})
    gens = LaurentPoly.variables(n)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None)

    def take():
        nonlocal i
        tok = peek()
        i += 1
        return tok

    def expect(op):
        tok = take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r} in {text!r}")

    def expression():
        sign = 1
        kind, val = peek()
        if (kind, val) in (("op", "+"), ("op", "-")):
            take()
            sign = -1 if val == "-" else 1
        acc = term().scale(sign)
        while peek() in (("op", "+"), ("op", "-")):
            _, op = take()
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = power()
        while True:
            kind, val = peek()
            if (kind, val) == ("op", "*"):
                take()
                acc = acc * power()
            elif (kind, val) == ("op", "/"):
                take()
                d = power()
                if not d.is_monomial():
                    raise ParseError("division is only allowed by monomials")
                acc = acc * d**-1
            elif kind in ("var", "int") or (kind, val) == ("op", "("):
                acc = acc * power()
            else:
                return acc

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() in (("op", "-"), ("op", "+")):
                sign = -1 if take()[1] == "-" else 1
            kind, val = take()
            if kind != "int":
                raise ParseError(f"expected an integer exponent in {text!r}")
            base = base ** (sign * val)
        return base

    def atom():
        kind, val = take()
        if kind == "int":
            return LaurentPoly.constant(n, val)
        if kind == "var":
            if val not in names:
                raise ParseError(f"unknown variable {val!r} for n={n}")
            return gens[names[val]]
        if (kind, val) == ("op", "("):
            e = expression()
            expect(")")
            return e
        if (kind, val) == ("op", "-"):
            return -power()
        raise ParseError(f"unexpected token {val!r} in {text!r}")

    try:
        result = expression()
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    if i != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    return result
