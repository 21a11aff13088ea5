"""Frobenius powers and roots of ideals, star and sharp closures.

All ideals live in a polynomial ring R = F_p[x_1..x_n]. A quotient S = R/I
carries a Frobenius action on its injective hull determined by a multiplier
u with u*I ⊆ I^[p^e]; submodules of that hull correspond to ideals J ⊇ I
with u*J ⊆ J^[p] ("E_S-ideals"), which is what the routines here test and
manipulate.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import IterationCapExceeded, PreconditionError
from .groebner import Ideal, groebner_basis, ideal_equal, normal_form
from .ring import Monomial, Polynomial, frobenius_power

DEFAULT_ITER_CAP = 64


def iteration_cap(cap: int | None = None) -> int:
    """Resolve an iteration cap: explicit value, else $FROBKIT_ITER_CAP, else 64."""
    if cap is not None:
        return cap
    env = os.environ.get("FROBKIT_ITER_CAP")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"FROBKIT_ITER_CAP must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError("FROBKIT_ITER_CAP must be positive")
        return value
    return DEFAULT_ITER_CAP


def nu(p: int, e: int) -> int:
    """1 + p + ... + p^(e-1); zero for e = 0."""
    if e < 0:
        raise ValueError("nu is defined for e >= 0")
    return (frobenius_power(p, e) - 1) // (p - 1)


def bracket_power(J: Ideal, e: int) -> Ideal:
    """J^[p^e], generated by the p^e-th powers of the generators of J."""
    if e == 0:
        return J
    return Ideal(J.ctx, [g.frobenius(e) for g in J.gens])


def pth_root_decompose(f: Polynomial, e: int) -> dict[Monomial, Polynomial]:
    """Write f = sum_m g_m^(p^e) * m with every exponent of m below p^e.

    Coefficients pass through unchanged because c^(p^e) = c in F_p.
    """
    if e < 1:
        raise ValueError("pth_root_decompose needs e >= 1")
    ctx = f.ctx
    q = frobenius_power(ctx.p, e)
    parts: dict = {}
    for m, c in f.terms():
        rest = tuple(a % q for a in m)
        root = tuple(a // q for a in m)
        parts.setdefault(rest, {})[root] = c
    return {m: Polynomial(ctx, d) for m, d in parts.items()}


def frobenius_root(J: Ideal, e: int) -> Ideal:
    """I_e(J): the smallest ideal L with J ⊆ L^[p^e]."""
    if e == 0:
        return groebner_basis(J)
    gens = []
    for f in J.gens:
        gens.extend(pth_root_decompose(f, e).values())
    return groebner_basis(Ideal(J.ctx, gens))


@dataclass
class IdealChain:
    """An indexed sequence of ideals, ascending or descending.

    ``stabilized_at`` is the first index s with entries[s] == entries[s+1].
    """

    entries: list = field(default_factory=list)
    direction: str = "ascending"
    stabilized_at: int | None = None

    def __post_init__(self):
        if self.direction not in ("ascending", "descending"):
            raise ValueError(f"unknown chain direction {self.direction!r}")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def append(self, ideal: Ideal):
        self.entries.append(ideal)
        n = len(self.entries)
        if self.stabilized_at is None and n >= 2 and ideal_equal(self.entries[-2], ideal):
            self.stabilized_at = n - 2

    @property
    def last(self) -> Ideal:
        return self.entries[-1]

    def verify(self) -> list[str]:
        """Return a description of every monotonicity or stabilization violation."""
        problems = []
        for i in range(len(self.entries) - 1):
            a, b = self.entries[i], self.entries[i + 1]
            ok = a <= b if self.direction == "ascending" else b <= a
            if not ok:
                problems.append(f"entries {i} and {i + 1} are not {self.direction}")
        s = self.stabilized_at
        if s is not None:
            if s + 1 >= len(self.entries) or not ideal_equal(self.entries[s], self.entries[s + 1]):
                problems.append(f"stabilized_at={s} but entries {s} and {s + 1} differ")
        return problems


class FrobeniusMultiplier:
    """A multiplier u with u ∈ (I^[p^e] : I), checked on construction."""

    def __init__(self, u: Polynomial, base: Ideal, e: int = 1, *, check: bool = True):
        if u.ctx != base.ctx:
            raise PreconditionError("multiplier and base ideal live in different rings")
        if e < 1:
            raise ValueError("Frobenius level must be positive")
        self.u = u
        self.base = groebner_basis(base)
        self.e = e
        if check:
            bad = self.failing_generators()
            if bad:
                raise PreconditionError(
                    f"u = {u} is not in (I^[p^{e}] : I): u*g not in I^[p^{e}] for g = {bad[0]}"
                )

    @property
    def ctx(self):
        return self.u.ctx

    def failing_generators(self) -> list[Polynomial]:
        target = bracket_power(self.base, self.e)
        return [g for g in self.base.gens if not normal_form(self.u * g, target).is_zero()]

    def __repr__(self):
        return f"FrobeniusMultiplier(u={self.u}, e={self.e}, base={self.base})"


def star_closure(
    J: Ideal, v: Polynomial, e: int = 1, cap: int | None = None, *, history: list | None = None
) -> Ideal:
    """Smallest L ⊇ J with v*L ⊆ L^[p^e].

    Iterates A <- A + I_e(v*A) from A = J until nothing changes. If
    ``history`` is a list the successive iterates are appended to it.
    """
    if e < 1:
        raise ValueError("star closure needs a positive Frobenius level")
    cap = iteration_cap(cap)
    A = groebner_basis(J)
    if history is not None:
        history.append(A)
    for _ in range(cap):
        step = frobenius_root(Ideal(J.ctx, [v * g for g in A.gens]), e)
        nxt = groebner_basis(Ideal(J.ctx, A.gens + step.gens))
        if ideal_equal(nxt, A):
            return A
        A = nxt
        if history is not None:
            history.append(A)
    raise IterationCapExceeded(f"star closure did not stabilize in {cap} steps", partial=A)


class ESIdealCheck:
    """Outcome of an E_S-ideal test; truthy iff the ideal passed."""

    __slots__ = ("ok", "reason")

    def __init__(self, ok: bool, reason: str):
        self.ok = ok
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"ESIdealCheck({self.ok}, {self.reason!r})"


def is_es_ideal(J: Ideal, mult: FrobeniusMultiplier) -> ESIdealCheck:
    """Whether J ⊇ I and u*J ⊆ J^[p^e] for the multiplier's u and level."""
    if not mult.base <= J:
        return ESIdealCheck(False, "does not contain the base ideal")
    if J.is_unit():
        return ESIdealCheck(True, "unit ideal")
    target = bracket_power(groebner_basis(J), mult.e)
    for g in J.gens:
        if not normal_form(mult.u * g, target).is_zero():
            return ESIdealCheck(False, f"u*({g}) is not in the bracket power")
    return ESIdealCheck(True, "stable")


def _root_chain(start: Ideal, mult: FrobeniusMultiplier, cap: int, add_base: bool):
    """Descending chain C_0 = start, C_{k+1} = I_e(u*C_k) (+ I), until two entries agree."""
    chain = IdealChain(direction="descending")
    C = groebner_basis(start)
    chain.append(C)
    base = mult.base
    for _ in range(cap):
        nxt = frobenius_root(Ideal(C.ctx, [mult.u * g for g in C.gens]), mult.e)
        if add_base:
            nxt = groebner_basis(Ideal(C.ctx, nxt.gens + base.gens))
        chain.append(nxt)
        if chain.stabilized_at is not None:
            return chain
        C = nxt
    raise IterationCapExceeded(f"Frobenius root chain did not stabilize in {cap} steps", partial=chain)


def sharp_closure_chain(J: Ideal, mult: FrobeniusMultiplier, cap: int | None = None):
    """Return (J^#u, chain) where chain holds the ideals I_e(u^nu_e * J).

    Uses I_{e+1}(u^nu_{e+1} J) = I_1(u * I_e(u^nu_e J)); once two
    consecutive entries agree they agree forever, and the chain descends,
    so the last entry is the intersection.
    """
    check = is_es_ideal(J, mult)
    if not check:
        raise PreconditionError(f"sharp closure needs an E_S-ideal: {J} {check.reason}")
    chain = _root_chain(J, mult, iteration_cap(cap), add_base=False)
    result = groebner_basis(Ideal(J.ctx, chain.last.gens + mult.base.gens))
    return result, chain


def sharp_closure(J: Ideal, mult: FrobeniusMultiplier, cap: int | None = None) -> Ideal:
    return sharp_closure_chain(J, mult, cap)[0]


@dataclass
class HSLResult:
    eta: int
    nil_ideal: Ideal
    chain: IdealChain

    @property
    def f_injective(self) -> bool:
        return self.nil_ideal.is_unit()


def hsl_chain(mult: FrobeniusMultiplier, cap: int | None = None) -> HSLResult:
    """Index of nilpotency and the ideal whose annihilator is the nilpotent part.

    Runs D_0 = R, D_{k+1} = I_e(u*D_k) + I; eta is the first index with
    D_eta == D_{eta+1}, and D_eta is returned as the nil ideal.
    """
    chain = _root_chain(Ideal.unit(mult.ctx), mult, iteration_cap(cap), add_base=True)
    eta = chain.stabilized_at
    return HSLResult(eta, chain[eta], chain)


@dataclass
class ChainReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


def verify_sharp_chain(chain, mult: FrobeniusMultiplier, cap: int | None = None) -> ChainReport:
    """Check a chain of ideals for sharp-fixedness, strict ascent and endpoints.

    Saturation (that no sharp-closed ideal fits between neighbours) is not
    checked.
    """
    report = ChainReport()
    chain = list(chain)
    if not chain:
        report.violations.append("empty chain")
        return report
    for i, L in enumerate(chain):
        if not is_es_ideal(L, mult):
            report.violations.append(f"entry {i} is not an E_S-ideal")
            continue
        if not ideal_equal(sharp_closure(L, mult, cap), L):
            report.violations.append(f"entry {i} is not fixed by the sharp closure")
    for i in range(len(chain) - 1):
        a, b = chain[i], chain[i + 1]
        if not a <= b:
            report.violations.append(f"entries {i} and {i + 1} are not ascending")
        elif ideal_equal(a, b):
            report.violations.append(f"entries {i} and {i + 1} are equal (ascent not strict)")
    bottom = sharp_closure(mult.base, mult, cap)
    top = sharp_closure(Ideal.unit(mult.ctx), mult, cap)
    if not ideal_equal(chain[0], bottom):
        report.violations.append("first entry is not the sharp closure of the base ideal")
    if not ideal_equal(chain[-1], top):
        report.violations.append("last entry is not the sharp closure of the unit ideal")
    return report

