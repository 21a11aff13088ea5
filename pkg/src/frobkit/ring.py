"""Sparse multivariate polynomials over a prime field F_p.

A polynomial is a mapping from exponent tuples to nonzero residues mod p,
stored in descending order for the ring's monomial order, so two equal
polynomials always have identical term sequences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import ContextMismatch, ExponentOverflow, ParseError

Monomial = tuple  # tuple[int, ...], one exponent per ring variable

# Exponents are conceptually machine integers; anything larger is refused.
MAX_EXPONENT = 2**63 - 1
# Largest Frobenius level e accepted when forming p**e.
MAX_FROBENIUS_LEVEL = 32

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def frobenius_power(p: int, e: int, cap: int | None = None) -> int:
    """Return p**e, refusing levels above ``cap`` (default MAX_FROBENIUS_LEVEL)."""
    cap = MAX_FROBENIUS_LEVEL if cap is None else cap
    if e < 0:
        raise ValueError(f"Frobenius level must be non-negative, got {e}")
    if e > cap:
        raise ExponentOverflow(f"Frobenius level {e} exceeds cap {cap}")
    q = p**e
    if q > MAX_EXPONENT:
        raise ExponentOverflow(f"{p}^{e} does not fit in a machine exponent")
    return q


def _check_exponent(n: int) -> int:
    if n > MAX_EXPONENT:
        raise ExponentOverflow(f"exponent {n} overflows")
    return n


def _grevlex_desc(m):
    return (-sum(m), m[::-1])


def _grevlex_asc(m):
    return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"elim"``; ``elim`` with
    ``block=k`` ranks monomials first by grevlex on the leading ``k``
    variables, breaking ties by grevlex on the rest, so that anything
    involving those ``k`` variables beats anything free of them.
    """

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise ValueError("elimination order needs block >= 1")
        if self.kind != "elim" and self.block:
            raise ValueError("block size only applies to elimination orders")

    @classmethod
    def parse(cls, text: str) -> MonomialOrder:
        text = text.strip().lower()
        m = re.fullmatch(r"elim\s*\(\s*(\d+)\s*\)", text)
        if m:
            return cls("elim", int(m.group(1)))
        aliases = {"grevlex": "grevlex", "degrevlex": "grevlex", "lex": "lex"}
        if text not in aliases:
            raise ValueError(f"unknown monomial order {text!r}")
        return cls(aliases[text])

    def __str__(self):
        return f"elim({self.block})" if self.kind == "elim" else self.kind

    @cached_property
    def key(self):
        """Sort key increasing with the order (bigger monomial, bigger key)."""
        if self.kind == "lex":
            return tuple
        if self.kind == "grevlex":
            return _grevlex_asc
        k = self.block
        return lambda m: (_grevlex_asc(m[:k]), _grevlex_asc(m[k:]))

    @cached_property
    def desc_key(self):
        """Sort key decreasing with the order; smallest key is the leading monomial."""
        if self.kind == "lex":
            return lambda m: tuple(-e for e in m)
        if self.kind == "grevlex":
            return _grevlex_desc
        k = self.block
        return lambda m: (_grevlex_desc(m[:k]), _grevlex_desc(m[k:]))

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class RingContext:
    """The polynomial ring F_p[x_1, ..., x_n] with a fixed monomial order."""

    characteristic: int
    variables: tuple
    order: MonomialOrder = field(default_factory=MonomialOrder)

    def __post_init__(self):
        if not isinstance(self.characteristic, int) or not is_prime(self.characteristic):
            raise ValueError(f"characteristic must be prime, got {self.characteristic!r}")
        names = tuple(self.variables)
        object.__setattr__(self, "variables", names)
        if not names:
            raise ValueError("a ring needs at least one variable")
        for v in names:
            if not isinstance(v, str) or not _IDENT.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if self.order.kind == "elim" and self.order.block >= len(names):
            raise ValueError("elimination block must leave at least one variable")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __str__(self):
        return f"F_{self.p}[{', '.join(self.variables)}] ({self.order})"

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: int) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, exps, coef: int = 1) -> Polynomial:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError(f"monomial {exps} has wrong length for {self}")
        return Polynomial(self, {exps: coef})

    def var(self, name: str) -> Polynomial:
        try:
            i = self.variables.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a variable of {self}") from None
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(e)

    def gens(self) -> list[Polynomial]:
        return [self.var(v) for v in self.variables]

    def parse(self, text: str) -> Polynomial:
        return parse_poly(self, text)

    def with_order(self, order: MonomialOrder) -> RingContext:
        return RingContext(self.p, self.variables, order)


class Polynomial:
    """An immutable polynomial in canonical form.

    Terms are kept in a dict whose iteration order is descending for the
    context's monomial order; zero coefficients are never stored.
    """

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: RingContext, terms: Mapping | Iterable = (), *, _trusted=False):
        self.ctx = ctx
        self._hash = None
        if _trusted:
            self._terms = terms
            return
        p = ctx.p
        n = ctx.nvars
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            m = tuple(m)
            if len(m) != n:
                raise ValueError(f"monomial {m} has wrong length for {ctx}")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            acc[m] = (acc.get(m, 0) + c) % p
        self._terms = _canonical(ctx, acc)

    @classmethod
    def _from_acc(cls, ctx: RingContext, acc: dict) -> Polynomial:
        """Build from a monomial->int dict whose values may be unreduced or zero."""
        p = ctx.p
        clean = {}
        for m, c in acc.items():
            c %= p
            if c:
                clean[m] = c
        return cls(ctx, _sort_terms(ctx, clean), _trusted=True)

    # -- inspection -------------------------------------------------------

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self._terms.items())

    def as_dict(self) -> dict:
        return dict(self._terms)

    def monomials(self) -> list[Monomial]:
        return list(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return next(iter(self._terms))

    def leading_coefficient(self) -> int:
        if not self._terms:
            return 0
        return next(iter(self._terms.values()))

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def coefficient(self, exps) -> int:
        return self._terms.get(tuple(exps), 0)

    def monic(self) -> Polynomial:
        lc = self.leading_coefficient()
        if lc in (0, 1):
            return self
        inv = pow(lc, -1, self.ctx.p)
        return self.scale(inv)

    def scale(self, c: int) -> Polynomial:
        c %= self.ctx.p
        if c == 0:
            return self.ctx.zero()
        p = self.ctx.p
        return Polynomial(self.ctx, {m: a * c % p for m, a in self._terms.items()}, _trusted=True)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, int):
            return self.ctx.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + c
        return Polynomial._from_acc(self.ctx, acc)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return poly_pow(self, k)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ctx == other.ctx and list(self._terms.items()) == list(other._terms.items())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, tuple(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"

    def frobenius(self, e: int = 1) -> Polynomial:
        """f**(p**e); over F_p this only scales exponents."""
        q = frobenius_power(self.ctx.p, e)
        if self._terms:
            _check_exponent(max(max(m, default=0) for m in self._terms) * q)
        return Polynomial(
            self.ctx,
            {tuple(a * q for a in m): c for m, c in self._terms.items()},
            _trusted=True,
        )


def _sort_terms(ctx: RingContext, terms: dict) -> dict:
    key = ctx.order.key
    return {m: terms[m] for m in sorted(terms, key=key, reverse=True)}


def _canonical(ctx, acc):
    return _sort_terms(ctx, {m: c for m, c in acc.items() if c})


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact product of two polynomials in the same ring."""
    if f.ctx != g.ctx:
        raise ContextMismatch(f"{f.ctx} vs {g.ctx}")
    if not f._terms or not g._terms:
        return f.ctx.zero()
    acc: dict = {}
    get = acc.get
    gt = list(g._terms.items())
    for m1, c1 in f._terms.items():
        for m2, c2 in gt:
            m = tuple([a + b for a, b in zip(m1, m2)])
            acc[m] = get(m, 0) + c1 * c2
    return Polynomial._from_acc(f.ctx, acc)


def poly_pow(f: Polynomial, k: int) -> Polynomial:
    """f**k by binary exponentiation; f**0 == 1 (including 0**0)."""
    if k < 0:
        raise ValueError("negative powers are not polynomials")
    if f._terms:
        _check_exponent(max(max(m, default=0) for m in f._terms) * k)
    result = f.ctx.one()
    base = f
    while k:
        if k & 1:
            result = poly_mul(result, base)
        k >>= 1
        if k:
            base = poly_mul(base, base)
    return result


# -- text format --------------------------------------------------------------


def format_monomial(ctx: RingContext, m: Monomial) -> str:
    parts = []
    for name, e in zip(ctx.variables, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    """Canonical text: descending terms joined by ' + ', coefficients in [1, p)."""
    if not f._terms:
        return "0"
    out = []
    for m, c in f._terms.items():
        mono = format_monomial(f.ctx, m)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if not text[pos:].strip():
            break
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            toks.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            toks.append((ch, ch, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, ctx, text, bindings=None):
        self.ctx = ctx
        self.bindings = bindings or {}
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        f = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while self.peek()[0] == "*":
            self.take()
            f = f * self.factor()
        return f

    def factor(self):
        kind = self.peek()[0]
        if kind in ("+", "-"):
            self.take()
            f = self.factor()
            return -f if kind == "-" else f
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                self.fail("negative exponent", tok)
            if tok[0] != "int":
                self.fail("exponent must be a non-negative integer literal", tok)
            self.take()
            k = int(tok[1])
            try:
                return poly_pow(base, k)
            except ExponentOverflow as exc:
                raise ParseError(str(exc), self.text, tok[2]) from None
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return self.ctx.const(int(val))
        if kind == "ident":
            if val not in self.ctx.variables:
                if val in self.bindings:
                    return self.bindings[val]
                raise ParseError(f"unknown identifier {val!r}", self.text, pos)
            return self.ctx.var(val)
        if kind == "(":
            f = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", self.text, pos)
        raise ParseError(f"unexpected {val!r}", self.text, pos)


def parse_poly(ctx: RingContext, text: str, bindings: Mapping | None = None) -> Polynomial:
    """Parse ``text`` with operators + - * ^ and parentheses into canonical form.

    Integer literals are reduced mod p. Identifiers that are not ring
    variables are looked up in ``bindings`` (name -> Polynomial). Errors
    carry the offending offset.
    """
    return _Parser(ctx, text, bindings).parse()
