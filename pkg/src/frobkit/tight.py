"""Graded annihilators, weak parameter test ideals and tight closure in E_S.

Every submodule of the injective hull E_S of S = R/I is handled through
the ideal L ⊇ I it annihilates, so all inputs and outputs are ideals of R.
An S-ideal is represented by an R-ideal containing I.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FrobkitError, IterationCapExceeded, PreconditionError
from .frobenius import (
    FrobeniusMultiplier,
    IdealChain,
    bracket_power,
    frobenius_root,
    is_es_ideal,
    nu,
    sharp_closure,
    star_closure,
)
from .groebner import Ideal, QuotientPresentation, groebner_basis, ideal_colon, ideal_equal
from .ring import Polynomial


def _plus_base(J: Ideal, I: Ideal) -> Ideal:
    return groebner_basis(Ideal(J.ctx, J.gens + I.gens))


def _require_level_one(mult: FrobeniusMultiplier):
    if mult.e != 1:
        raise PreconditionError("this operation needs a Frobenius multiplier of level 1")


def _require_same_base(pres: QuotientPresentation, mult: FrobeniusMultiplier):
    if not ideal_equal(pres.defining, mult.base):
        raise PreconditionError("the multiplier was built for a different defining ideal")


class ESModuleDescriptor:
    """The submodule Ann_{E_S} L of E_S, recorded by L ⊇ I."""

    def __init__(self, presentation: QuotientPresentation, defining_ideal: Ideal):
        if not presentation.defining <= defining_ideal:
            raise PreconditionError("the annihilated ideal must contain the defining ideal")
        self.presentation = presentation
        self.defining_ideal = groebner_basis(defining_ideal)

    @property
    def ctx(self):
        return self.presentation.ctx


def graded_ann_component(desc: ESModuleDescriptor, mult: FrobeniusMultiplier, level: int) -> Ideal:
    """(L^[p^level] : u^nu_level), the annihilator of S T^level M."""
    _require_level_one(mult)
    if level < 0:
        raise ValueError("level must be non-negative")
    L = desc.defining_ideal
    k = nu(desc.ctx.p, level)
    return ideal_colon(bracket_power(L, level), Ideal(L.ctx, [mult.u**k]))


def graded_ann_chain(
    desc: ESModuleDescriptor,
    mult: FrobeniusMultiplier,
    max_level: int,
    continue_after: int = 0,
) -> IdealChain:
    """The ascending chain M^(0) ⊆ M^(1) ⊆ ... up to stabilization or ``max_level``.

    Levels are built by M^(e+1) = ((M^(e))^[p] : u), which agrees with the
    closed form because Frobenius is flat on R. ``continue_after`` extra
    levels are computed past the first repetition. A chain that never
    repeats within ``max_level`` comes back with ``stabilized_at`` unset.
    """
    _require_level_one(mult)
    L = desc.defining_ideal
    if not is_es_ideal(L, mult):
        raise PreconditionError("graded annihilator chains need an E_S-ideal")
    chain = IdealChain(direction="ascending")
    M = L
    chain.append(M)
    u_ideal = Ideal(L.ctx, [mult.u])
    extra = 0
    for _ in range(max_level):
        if chain.stabilized_at is not None:
            if extra >= continue_after:
                break
            extra += 1
        M = ideal_colon(bracket_power(M, 1), u_ideal)
        chain.append(M)
    return chain


def quotient_graded_ann(J: Ideal, K: Ideal, mult: FrobeniusMultiplier, level: int) -> Ideal:
    """((J^[p^level] : u^nu_level) : K), the graded annihilator of Ann J / Ann K."""
    _require_level_one(mult)
    if not J <= K:
        raise PreconditionError("quotient graded annihilator needs J ⊆ K")
    k = nu(J.ctx.p, level)
    b = ideal_colon(bracket_power(J, level), Ideal(J.ctx, [mult.u**k]))
    return ideal_colon(b, K)


# -- weak parameter test ideals ------------------------------------------------


def _test_ideal_seed(pres, mult, J, c):
    _require_level_one(mult)
    _require_same_base(pres, mult)
    I = pres.defining
    if not I <= J:
        raise PreconditionError("J must contain the defining ideal")
    cJ = Ideal(J.ctx, [c * g for g in J.gens])
    return star_closure(_plus_base(cJ, I), mult.u, 1)


def _tau(L, pres, mult, J, e):
    I = pres.defining
    k = nu(J.ctx.p, e)
    ue = mult.u**k
    denom = Ideal(J.ctx, [ue * g for g in J.gens])
    return _plus_base(ideal_colon(bracket_power(L, e), denom), I)


def wpti(pres: QuotientPresentation, mult: FrobeniusMultiplier, J: Ideal, c: Polynomial, e: int) -> Ideal:
    """The p^e-weak parameter test ideal of S, as an R-ideal containing I.

    ``J`` is the ideal whose image in S is the canonical module kernel and
    ``c`` a parameter test element; neither property is verified.
    """
    if e < 0:
        raise ValueError("level must be non-negative")
    L = _test_ideal_seed(pres, mult, J, c)
    return _tau(L, pres, mult, J, e)


@dataclass
class TestIdealResult:
    per_level: IdealChain
    stable_value: Ideal | None = None
    stable_index: int | None = None

    __test__ = False  # keep pytest from collecting this class


def wpti_limit(pres, mult, J, c, max_level: int) -> TestIdealResult:
    """Compute tau_0, tau_1, ... until two consecutive levels agree."""
    L = _test_ideal_seed(pres, mult, J, c)
    chain = IdealChain(direction="ascending")
    for e in range(max_level + 1):
        chain.append(_tau(L, pres, mult, J, e))
        if chain.stabilized_at is not None:
            break
    problems = chain.verify()
    if problems:
        raise FrobkitError("test ideal chain is not ascending: " + "; ".join(problems))
    s = chain.stabilized_at
    if s is None:
        return TestIdealResult(chain)
    return TestIdealResult(chain, chain[s], s)


# -- tight closure ------------------------------------------------------------


def n_phi_ideal(pres, v: Polynomial, e: int, J: Ideal, c: Polynomial) -> Ideal:
    """I_e(c*v*(J^[p^e] : v)) + I; its annihilator is {m : c*Theta*m ∈ S*Theta*N}."""
    FrobeniusMultiplier(v, pres.defining, e)
    I = pres.defining
    if not c:
        return groebner_basis(I)
    col = ideal_colon(bracket_power(J, e), Ideal(J.ctx, [v]))
    inner = Ideal(J.ctx, [c * v * g for g in col.gens])
    return _plus_base(frobenius_root(inner, e), I)


@dataclass
class TightClosureAnnihilator:
    """``ideal`` uses the multiplier u^nu_eta at level eta; ``plain_u_ideal`` uses u."""

    ideal: Ideal
    plain_u_ideal: Ideal | None

    @property
    def variants_agree(self) -> bool | None:
        if self.plain_u_ideal is None:
            return None
        return ideal_equal(self.ideal, self.plain_u_ideal)


def tc_annihilator(pres, mult: FrobeniusMultiplier, J: Ideal, c: Polynomial, eta: int) -> TightClosureAnnihilator:
    """The ideal whose annihilator in E_S is the tight closure N* of N = Ann J.

    Assumes the Frobenius operators on E_S are generated by u and that c is
    a weak p^eta test element for (N, E_S); neither is verified.
    """
    _require_level_one(mult)
    _require_same_base(pres, mult)
    if eta < 1:
        raise ValueError("eta must be positive")
    I = pres.defining
    if not I <= J:
        raise PreconditionError("J must contain the defining ideal")
    seed = _plus_base(Ideal(J.ctx, [c * g for g in J.gens]), I)
    p = J.ctx.p
    main = sharp_closure(star_closure(seed, mult.u ** nu(p, eta), eta), mult)
    if eta == 1:
        return TightClosureAnnihilator(main, main)
    try:
        plain = sharp_closure(star_closure(seed, mult.u, eta), mult)
    except PreconditionError:
        plain = None
    return TightClosureAnnihilator(main, plain)


def ci_direct_sum(pres, regular_sequence, c: Polynomial, max_level: int) -> list[Ideal]:
    """Partial sums sum_{e<=k} I_e(c*g^(p^e - 1)) + I for k = 0..max_level."""
    ctx = pres.ctx
    g = ctx.one()
    for f in regular_sequence:
        g = g * f
    p = ctx.p
    total = groebner_basis(pres.defining)
    out = []
    for e in range(max_level + 1):
        term = frobenius_root(Ideal(ctx, [c * g ** (p**e - 1)]), e)
        total = _plus_base(term, total)
        out.append(total)
    return out


def ci_zero_star(pres, regular_sequence, c: Polynomial, max_level: int = 4) -> Ideal:
    """sum_{e>=0} I_e(c*g^(p^e - 1)) + I for I generated by a regular sequence.

    Computed as the star closure of (c) with multiplier g^(p-1), whose k-th
    iterate equals the level-k partial sum; the first ``max_level`` partial
    sums are recomputed directly and compared.
    """
    ctx = pres.ctx
    seq = list(regular_sequence)
    if not seq or not ideal_equal(Ideal(ctx, seq), pres.defining):
        raise PreconditionError("the sequence must generate the defining ideal")
    g = ctx.one()
    for f in seq:
        g = g * f
    I = pres.defining
    history: list = []
    star = star_closure(Ideal(ctx, [c]), g ** (ctx.p - 1), 1, history=history)
    result = _plus_base(star, I)
    direct = ci_direct_sum(pres, seq, c, max_level)
    for k, expected in enumerate(direct):
        got = _plus_base(history[min(k, len(history) - 1)], I)
        if not ideal_equal(got, expected):
            raise FrobkitError(f"star-closure iterate {k} disagrees with the direct sum")
    if len(history) - 1 > max_level:
        raise IterationCapExceeded(
            f"direct sums up to level {max_level} do not reach the stable value "
            f"(needs {len(history) - 1} levels)"
        )
    return result


def quasi_gorenstein_test_ideal(pres, mult: FrobeniusMultiplier, c: Polynomial) -> Ideal:
    """((cR + I)^{*u})^{#u}, whose image in S is the test ideal.

    The quasi-Gorenstein, S_2 and equidimensional hypotheses and the test
    element property of c are taken on trust.
    """
    _require_level_one(mult)
    _require_same_base(pres, mult)
    seed = _plus_base(Ideal(pres.ctx, [c]), pres.defining)
    return sharp_closure(star_closure(seed, mult.u, 1), mult)
