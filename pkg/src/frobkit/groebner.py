"""Reduced Groebner bases and the ideal calculus built on them.

Buchberger's algorithm with the Gebauer-Moeller pair criteria and the
sugar selection strategy. Everything is deterministic: the pair queue is
ordered by (sugar, lcm, indices), so repeated runs give identical output.
"""

from __future__ import annotations

import threading
from heapq import heapify, heappop, heappush
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ContextMismatch, PreconditionError
from .ring import MonomialOrder, Polynomial, RingContext

# -- monomial helpers ----------------------------------------------------------


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _quo(a, b):
    return tuple([x - y for x, y in zip(a, b)])


# -- internal polynomial form --------------------------------------------------
#
# Inside the Buchberger loop a basis element is a pair (lm, tail) where the
# polynomial is monic, lm is its leading monomial and tail lists the other
# (monomial, coefficient) terms. Working polynomials are plain dicts.


def _reduce(f: dict, basis, desc_key, p: int, full: bool = True) -> dict:
    """Reduce ``f`` modulo ``basis``; return the remainder as a dict.

    With ``full`` false only the leading term is reduced (the remainder's
    lead is then irreducible but its tail may not be).
    """
    f = dict(f)
    heap = [(desc_key(m), m) for m in f]
    heapify(heap)
    out = {}
    while heap:
        _, m = heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        for lm, tail in basis:
            if _divides(lm, m):
                q = _quo(m, lm)
                for mg, cg in tail:
                    mm = tuple([x + y for x, y in zip(mg, q)])
                    old = f.get(mm)
                    if old is None:
                        f[mm] = (-c * cg) % p
                        heappush(heap, (desc_key(mm), mm))
                    else:
                        new = (old - c * cg) % p
                        if new:
                            f[mm] = new
                        else:
                            del f[mm]
                break
        else:
            out[m] = c
            if not full:
                out.update(f)
                return out
    return out


def _to_basis_elem(f: dict, key, p):
    """Sort ``f`` descending, make it monic and split off the leading monomial."""
    mons = sorted(f, key=key, reverse=True)
    lm = mons[0]
    inv = pow(f[lm], -1, p)
    tail = [(m, f[m] * inv % p) for m in mons[1:]]
    return lm, tail


def _buchberger(polys: Sequence[dict], ctx: RingContext):
    """Return the reduced Groebner basis of ``polys`` as (lm, tail) pairs, descending."""
    p = ctx.p
    key = ctx.order.key
    desc_key = ctx.order.desc_key
    one = (0,) * ctx.nvars

    elems = []  # every basis element ever added: (lm, tail, sugar)
    active = []  # indices into elems forming the current basis G
    pairs = []  # heap of (sugar, key(lcm), i, j, lcm)

    def basis():
        return [(elems[i][0], elems[i][1]) for i in active]

    def insert(h: dict, sugar: int) -> bool:
        lm, tail = _to_basis_elem(h, key, p)
        if lm == one:
            return True
        idx = len(elems)
        elems.append((lm, tail, sugar))

        cands = [(g, _lcm(lm, elems[g][0])) for g in active]
        kept = []
        for k, (g, l) in enumerate(cands):
            if _coprime(lm, elems[g][0]):
                kept.append((g, l, True))
                continue
            later = cands[k + 1:]
            if any(_divides(l2, l) for _, l2 in later) or any(_divides(l2, l) for _, l2, _ in kept):
                continue
            kept.append((g, l, False))

        survivors = []
        for entry in pairs:
            _, _, i, j, l = entry
            if (
                _divides(lm, l)
                and _lcm(elems[i][0], lm) != l
                and _lcm(elems[j][0], lm) != l
            ):
                continue
            survivors.append(entry)
        for g, l, cop in kept:
            if cop:
                continue
            lg, _, sg = elems[g]
            s = max(sg + sum(l) - sum(lg), sugar + sum(l) - sum(lm))
            survivors.append((s, key(l), g, idx, l))
        heapify(survivors)
        pairs[:] = survivors

        active[:] = [g for g in active if not _divides(lm, elems[g][0])]
        active.append(idx)
        return False

    def spoly(i, j, l):
        acc = {}
        for sign, (lm, tail, _) in ((1, elems[i]), (-1, elems[j])):
            q = _quo(l, lm)
            for m, c in tail:
                mm = tuple([x + y for x, y in zip(m, q)])
                acc[mm] = (acc.get(mm, 0) + sign * c) % p
        return {m: c for m, c in acc.items() if c}

    gens = [f for f in polys if f]
    gens.sort(key=lambda f: min(desc_key(m) for m in f), reverse=True)
    for f in gens:
        h = _reduce(f, basis(), desc_key, p)
        if h and insert(h, max(sum(m) for m in f)):
            return [(one, [])]

    while pairs:
        s, _, i, j, l = heappop(pairs)
        h = spoly(i, j, l)
        if not h:
            continue
        h = _reduce(h, basis(), desc_key, p)
        if h and insert(h, s):
            return [(one, [])]

    # interreduce
    G = [(elems[i][0], elems[i][1]) for i in active]
    G.sort(key=lambda t: key(t[0]), reverse=True)
    out = []
    for k, (lm, tail) in enumerate(G):
        others = G[:k] + G[k + 1:]
        r = _reduce(dict(tail), others, desc_key, p)
        out.append((lm, sorted(r.items(), key=lambda t: key(t[0]), reverse=True)))
    return out


# -- ideals --------------------------------------------------------------------


class Ideal:
    """A finitely generated ideal of a polynomial ring over F_p.

    The reduced Groebner basis is computed on first use and cached; the
    cache is set at most once under a lock so an ideal may be shared
    between threads.
    """

    def __init__(self, ctx: RingContext, gens: Iterable = ()):
        self.ctx = ctx
        polys = []
        for g in gens:
            if isinstance(g, str):
                g = ctx.parse(g)
            elif isinstance(g, int):
                g = ctx.const(g)
            if g.ctx != ctx:
                raise ContextMismatch(f"generator {g} is not in {ctx}")
            if g:
                polys.append(g)
        self.gens = tuple(polys)
        self._gb = None
        self._basis = None
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ctx: RingContext) -> Ideal:
        return cls._with_gb(ctx, [ctx.one()])

    @classmethod
    def zero(cls, ctx: RingContext) -> Ideal:
        return cls._with_gb(ctx, [])

    @classmethod
    def _with_gb(cls, ctx, gb):
        J = cls(ctx, gb)
        J._gb = tuple(gb)
        return J

    # -- Groebner data --

    def _ensure_gb(self):
        if self._gb is not None:
            return
        with self._lock:
            if self._gb is not None:
                return
            ctx = self.ctx
            G = _buchberger([g.as_dict() for g in self.gens], ctx)
            polys = tuple(
                Polynomial(ctx, {lm: 1, **dict(tail)}, _trusted=True) for lm, tail in G
            )
            self._basis = G
            self._gb = polys

    @property
    def groebner(self) -> tuple:
        """The reduced Groebner basis: monic, auto-reduced, sorted by leading monomial."""
        self._ensure_gb()
        return self._gb

    def _internal_basis(self):
        self._ensure_gb()
        if self._basis is None:
            self._basis = [(g.leading_monomial(), list(g.terms())[1:]) for g in self._gb]
        return self._basis

    def leading_monomials(self) -> list:
        return [g.leading_monomial() for g in self.groebner]

    def is_unit(self) -> bool:
        gb = self.groebner
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.gens

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f) -> bool:
        if isinstance(f, Ideal):
            return f <= self
        if isinstance(f, str):
            f = self.ctx.parse(f)
        return normal_form(f, self).is_zero()

    __contains__ = contains

    # -- comparisons --

    def _check(self, other):
        if not isinstance(other, Ideal):
            return False
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        return True

    def __le__(self, other):
        if not self._check(other):
            return NotImplemented
        if other.is_unit():
            return True
        return all(normal_form(g, other).is_zero() for g in self.gens)

    def __ge__(self, other):
        if not self._check(other):
            return NotImplemented
        return other <= self

    def __lt__(self, other):
        if not self._check(other):
            return NotImplemented
        return self <= other and not ideal_equal(self, other)

    def __gt__(self, other):
        if not self._check(other):
            return NotImplemented
        return other < self

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    def __hash__(self):
        return hash((self.ctx, self.groebner))

    # -- arithmetic --

    def __add__(self, other):
        if isinstance(other, Polynomial):
            other = Ideal(self.ctx, [other])
        return ideal_sum(self, other)

    def __mul__(self, other):
        if isinstance(other, (Polynomial, int)):
            if isinstance(other, int):
                other = self.ctx.const(other)
            return Ideal(self.ctx, [other * g for g in self.gens])
        return ideal_product(self, other)

    __rmul__ = __mul__

    def __and__(self, other):
        return ideal_intersect(self, other)

    def colon(self, other) -> Ideal:
        if isinstance(other, Polynomial):
            other = Ideal(self.ctx, [other])
        return ideal_colon(self, other)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"

    def __repr__(self):
        return f"Ideal({self})"


def _same_ctx(A: Ideal, B: Ideal):
    if A.ctx != B.ctx:
        raise ContextMismatch(f"{A.ctx} vs {B.ctx}")


def groebner_basis(J: Ideal) -> Ideal:
    """Return J with its reduced Groebner basis populated (and as generators)."""
    gb = J.groebner
    out = Ideal._with_gb(J.ctx, gb)
    out._basis = J._basis
    return out


def normal_form(f: Polynomial, J: Ideal) -> Polynomial:
    """The remainder of f modulo the reduced Groebner basis of J."""
    if f.ctx != J.ctx:
        raise ContextMismatch(f"{f.ctx} vs {J.ctx}")
    if not f:
        return f
    basis = J._internal_basis()
    if not basis:
        return f
    r = _reduce(f.as_dict(), basis, f.ctx.order.desc_key, f.ctx.p)
    return Polynomial(f.ctx, r)


def ideal_equal(A: Ideal, B: Ideal) -> bool:
    _same_ctx(A, B)
    return A.groebner == B.groebner


def ideal_sum(A: Ideal, B: Ideal) -> Ideal:
    _same_ctx(A, B)
    return groebner_basis(Ideal(A.ctx, A.gens + B.gens))


def ideal_product(A: Ideal, B: Ideal) -> Ideal:
    _same_ctx(A, B)
    return groebner_basis(Ideal(A.ctx, [f * g for f in A.gens for g in B.gens]))


def _aux_context(ctx: RingContext, k: int = 1) -> RingContext:
    names = []
    taken = set(ctx.variables)
    for i in range(k):
        name = f"_t{i}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        names.append(name)
    return RingContext(ctx.p, tuple(names) + ctx.variables, MonomialOrder("elim", k))


def _eliminate_dicts(polys, ctx: RingContext, k: int):
    """Groebner basis of ``polys`` under elim(k); keep elements free of the first k vars."""
    G = _buchberger(polys, ctx)
    out = []
    for lm, tail in G:
        if any(lm[:k]):
            continue
        d = {lm[k:]: 1}
        for m, c in tail:
            d[m[k:]] = c
        out.append(d)
    return out


def ideal_intersect(A: Ideal, B: Ideal) -> Ideal:
    """A ∩ B by eliminating t from t*A + (1 - t)*B."""
    _same_ctx(A, B)
    ctx = A.ctx
    if A <= B:
        return groebner_basis(A)
    if B <= A:
        return groebner_basis(B)
    aux = _aux_context(ctx)
    p = ctx.p
    polys = []
    for f in A.groebner:
        polys.append({(1,) + m: c for m, c in f.terms()})
    for g in B.groebner:
        d = {}
        for m, c in g.terms():
            d[(0,) + m] = c
            d[(1,) + m] = (-c) % p
        polys.append(d)
    gens = [Polynomial(ctx, d) for d in _eliminate_dicts(polys, aux, 1)]
    return groebner_basis(Ideal(ctx, gens))


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Return q with f == q*g, raising ValueError if g does not divide f."""
    if f.ctx != g.ctx:
        raise ContextMismatch(f"{f.ctx} vs {g.ctx}")
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    ctx = f.ctx
    p = ctx.p
    lm, tail = _to_basis_elem(g.as_dict(), ctx.order.key, p)
    inv = pow(g.leading_coefficient(), -1, p)
    desc_key = ctx.order.desc_key
    rem = f.as_dict()
    heap = [(desc_key(m), m) for m in rem]
    heapify(heap)
    q = {}
    while heap:
        _, m = heappop(heap)
        c = rem.pop(m, None)
        if c is None:
            continue
        if not _divides(lm, m):
            raise ValueError(f"{g} does not divide {f}")
        t = _quo(m, lm)
        q[t] = c * inv % p
        for mg, cg in tail:
            mm = tuple([x + y for x, y in zip(mg, t)])
            old = rem.get(mm)
            if old is None:
                rem[mm] = (-c * cg) % p
                heappush(heap, (desc_key(mm), mm))
            else:
                new = (old - c * cg) % p
                if new:
                    rem[mm] = new
                else:
                    del rem[mm]
    return Polynomial(ctx, q)


def _colon_poly(A: Ideal, b: Polynomial) -> Ideal:
    ctx = A.ctx
    if normal_form(b, A).is_zero():
        return Ideal.unit(ctx)
    meet = ideal_intersect(A, Ideal(ctx, [b]))
    return groebner_basis(Ideal(ctx, [exact_divide(f, b) for f in meet.groebner]))


def ideal_colon(A: Ideal, B: Ideal) -> Ideal:
    """(A : B) = {f : f*B ⊆ A}, intersecting (A : b) over the generators b of B."""
    _same_ctx(A, B)
    if B.is_zero():
        raise PreconditionError("colon by the zero ideal is undefined")
    ctx = A.ctx
    result = None
    for b in groebner_basis(B).gens:
        Q = _colon_poly(A, b)
        result = Q if result is None else ideal_intersect(result, Q)
        if ideal_equal(result, A):
            # (A : B) always contains A, so it cannot shrink further
            break
    return result if result is not None else Ideal.unit(ctx)


def eliminate(J: Ideal, k: int) -> Ideal:
    """J ∩ F_p[x_{k+1}, ..., x_n], returned as an ideal of the same ring."""
    ctx = J.ctx
    if not 0 <= k < ctx.nvars:
        raise ValueError(f"cannot eliminate {k} of {ctx.nvars} variables")
    if k == 0:
        return groebner_basis(J)
    ectx = ctx.with_order(MonomialOrder("elim", k))
    G = _buchberger([g.as_dict() for g in J.gens], ectx)
    gens = []
    for lm, tail in G:
        if any(lm[:k]):
            continue
        gens.append(Polynomial(ctx, {lm: 1, **dict(tail)}))
    return groebner_basis(Ideal(ctx, gens))


def quotient_dimension(J: Ideal) -> int:
    """Krull dimension of R/J; -1 when J is the unit ideal.

    The size of the largest set of variables containing the support of no
    leading monomial of J (an independent set modulo the initial ideal).
    """
    if J.is_unit():
        return -1
    n = J.ctx.nvars
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in J.leading_monomials()]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


class QuotientPresentation:
    """S = R/I for a proper ideal I."""

    def __init__(self, defining: Ideal):
        if defining.is_unit():
            raise PreconditionError("the defining ideal of a quotient must be proper")
        self.ctx = defining.ctx
        self.defining = defining

    def __repr__(self):
        return f"QuotientPresentation({self.ctx}, {self.defining})"
