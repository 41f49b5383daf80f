"""Small simplices, traces, and the extension operator.

A family cochain assigns one alternating cochain per base factor. The
extension operator evaluates the family on a group tuple by averaging
projections onto each relevant coset (the trace), translating the
factor cochain to the coset, and summing. All bounds certified by the
verifier are exact rational comparisons.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from weakref import WeakKeyDictionary

from .chains import (Chain, CochainSpec, ModuleVector, alternation_is_zero,
                     boundary, coboundary, evaluate, EDGE_FUNCTION, SCALAR)
from .coned import DomainError, INFINITE
from .factors import ConfigError
from .report import CheckRow


@dataclass(frozen=True)
class FamilyCochain:
    """One cochain per factor; None entries mean the zero cochain.

    Members must be alternating: the operator skips degenerate traces,
    which is only sound because each per-coset summand is alternating
    and smallness is permutation invariant.
    """

    degree: int
    kind: str
    members: tuple

    def __post_init__(self):
        for fi, spec in enumerate(self.members):
            if spec is None:
                continue
            if not isinstance(spec, CochainSpec):
                raise ConfigError("family member %d is not a CochainSpec" % fi)
            if spec.degree != self.degree or spec.kind != self.kind:
                raise ConfigError("family member %d disagrees on degree or kind" % fi)
            if spec.factor != fi:
                raise ConfigError("family member %d is pinned to factor %r" % (fi, spec.factor))
            if not spec.alternating:
                raise ConfigError("family members must be alternating")

    def spec_for(self, factor):
        return self.members[factor]

    def coboundary(self):
        return FamilyCochain(self.degree + 1, self.kind,
                             tuple(None if m is None else coboundary(m)
                                   for m in self.members))

    def nonzero_factors(self):
        return [fi for fi, m in enumerate(self.members)
                if m is not None and m.kernel != "zero"]


def one_hot_family(model, factor, spec):
    members = [None] * len(model.factors)
    members[factor] = spec
    return FamilyCochain(spec.degree, spec.kind, tuple(members))


# ---------------------------------------------------------------------------
# small simplices and traces


def is_small(space, simplex):
    """True iff all vertices share a coset with relative diameter < 2D."""
    simplex = tuple(simplex)
    base = simplex[0]
    witness = next((g for g in simplex if g != base), None)
    if witness is None:
        return True
    q = (~base * witness).word
    if len(q) != 1:
        return False
    factor = q[0][0]
    B = space.coset(base, factor)
    pts = []
    for g in simplex:
        if not space.coset_contains(B, g):
            return False
        pts.append(g)
    return space.relative_diameter(B, pts) < 2 * space.D


def is_relevant(space, simplex, B):
    sets = [space.projection(B, g) for g in simplex]
    pts = set().union(*sets)
    return space.relative_diameter(B, pts) >= 2 * space.D


def trace(space, simplex, B):
    """The averaged projected simplex, or zero when B is irrelevant."""
    simplex = tuple(simplex)
    n = len(simplex) - 1
    out = Chain(n)
    sets = [space.projection(B, g) for g in simplex]
    pts = set().union(*sets)
    if space.relative_diameter(B, pts) < 2 * space.D:
        return out
    weight = Fraction(1)
    for s in sets:
        if len(s) > 1:
            weight /= len(s)
    ordered = [list(s) if len(s) == 1 else sorted(s, key=lambda g: g.sort_key())
               for s in sets]
    for combo in product(*ordered):
        out.add_term(combo, weight)
    return out


def trace_chain(space, chain, B):
    out = Chain(chain.degree)
    for simplex, coeff in chain.terms.items():
        out = out + trace(space, simplex, B).scale(coeff)
    return out


def nondegenerate_trace_cosets(space, simplex):
    """Relevant cosets whose trace survives alternation."""
    out = []
    for B in space.relevant_cosets(simplex):
        if not alternation_is_zero(trace(space, simplex, B)):
            out.append(B)
    return out


def almost_chain_defect(space, simplex, B):
    """The chain (boundary of the trace) minus (trace of the boundary)."""
    simplex = tuple(simplex)
    if len(simplex) < 3:
        raise DomainError("the almost-chain comparison needs degree >= 2")
    tr = trace(space, simplex, B)
    lhs = boundary(tr) if not tr.is_zero() else Chain(len(simplex) - 2)
    rhs = Chain(len(simplex) - 2)
    sign = 1
    for j in range(len(simplex)):
        rhs = rhs + trace(space, simplex[:j] + simplex[j + 1:], B).scale(sign)
        sign = -sign
    return lhs - rhs


# ---------------------------------------------------------------------------
# K(phi)


def small_based_simplices(space, factor, length):
    """Based small tuples: first vertex the identity, the rest inside the
    factor word-ball of radius 2D-1, filtered to pairwise relative
    distance < 2D. Finite for every factor kind."""
    model = space.model
    fspec = model.factors[factor]
    reach = 2 * space.D - 1
    pool = [model.identity]
    for v in fspec.values_within(None if fspec.is_finite() else reach):
        if fspec.wlen(v) <= reach:
            pool.append(model.syllable(factor, v))
    B = space.coset(model.identity, factor)
    out = []
    for combo in product(pool, repeat=length - 1):
        simplex = (model.identity,) + combo
        if space.relative_diameter(B, simplex) < 2 * space.D:
            out.append(simplex)
    return out


def k_of_report(space, family):
    """K and its witness: the worst cochain norm over based small tuples.

    Based tuples suffice: smallness and the member norms are invariant
    under rebasing by the first vertex, which the tests certify.
    """
    best = Fraction(0)
    witness = None
    for fi in family.nonzero_factors():
        spec = family.spec_for(fi)
        for simplex in small_based_simplices(space, fi, family.degree + 1):
            val = evaluate(space.model, spec, simplex).norm_indicator()
            if val > best:
                best = val
                witness = (fi, simplex)
    return best, witness


def K_of(space, family):
    return k_of_report(space, family)[0]


# ---------------------------------------------------------------------------
# the extension operator


# per-space memo; sweeps evaluate the same primed cochain for many base
# tuples sharing a trace. Values are shared, callers must not mutate.
_PRIMED_CACHE = WeakKeyDictionary()
_PRIMED_CACHE_CAP = 8192


def coset_cochain(space, B, spec, chain):
    """Sum of coefficients times the coset-translated cochain, skipping
    small simplices: the primed cochain of the construction."""
    per = _PRIMED_CACHE.get(space)
    if per is None:
        per = _PRIMED_CACHE[space] = {}
    key = (B, spec, frozenset(chain.terms.items()))
    hit = per.get(key)
    if hit is not None:
        return hit
    model = space.model
    rep = B.rep
    rep_inv = ~rep
    out = ModuleVector.zero(spec.kind)
    for simplex, coeff in chain.terms.items():
        if is_small(space, simplex):
            continue
        based = tuple(rep_inv * b for b in simplex)
        out = out + evaluate(model, spec, based).translate(rep).scale(coeff)
    if len(per) >= _PRIMED_CACHE_CAP:
        per.clear()
    per[key] = out
    return out


def theta(space, family, simplex):
    """Extension operator: sum the primed coset cochains of the traces
    over relevant cosets. Degenerate traces are skipped; that is exact
    because the summand is alternating and smallness is invariant under
    permuting the tuple."""
    simplex = tuple(simplex)
    if len(simplex) != family.degree + 1:
        raise DomainError("tuple length %d does not match family degree %d"
                          % (len(simplex), family.degree))
    out = ModuleVector.zero(family.kind)
    for B in space.relevant_cosets(simplex):
        spec = family.spec_for(B.factor)
        if spec is None or spec.kernel == "zero":
            continue
        tr = trace(space, simplex, B)
        if alternation_is_zero(tr):
            continue
        out = out + coset_cochain(space, B, spec, tr)
    return out


def restricted_family_value(space, family, factor, simplex):
    """The primed factor cochain: zero on small tuples, the member value
    otherwise. This is what the restriction of the extension must equal."""
    spec = family.spec_for(factor)
    if spec is None or is_small(space, simplex):
        return ModuleVector.zero(family.kind)
    return evaluate(space.model, spec, simplex)


# ---------------------------------------------------------------------------
# verification


@dataclass
class ExtensionReport:
    k_value: Fraction
    k_witness: object
    rows: list
    window: dict

    def passed(self):
        return all(r.passed for r in self.rows)


def _factor_pool(model, factor, truncation):
    fspec = model.factors[factor]
    pool = [model.identity]
    for v in fspec.values_within(None if fspec.is_finite() else truncation):
        pool.append(model.syllable(factor, v))
    return pool


def based_tuples(model, pools):
    """(1, x_1, .., x_k) with x_i ranging over pools[i]."""
    for rest in product(*pools):
        yield (model.identity,) + rest


def theta_evaluator(space, family):
    cache = {}

    def ev(simplex):
        if simplex not in cache:
            cache[simplex] = theta(space, family, simplex)
        return cache[simplex]

    return ev


def delta_of(evaluator, kind, simplex):
    """Homogeneous coboundary of a tuple evaluator."""
    out = ModuleVector.zero(kind)
    sign = 1
    for j in range(len(simplex)):
        out = out + evaluator(simplex[:j] + simplex[j + 1:]).scale(sign)
        sign = -sign
    return out


def verify_extension(space, family, factor_truncation, radius, truncations,
                     quasi_shape):
    """Sweep the quantitative contracts of the extension over windows.

    factor_truncation bounds the factor tuples for restriction checks;
    radius/truncations give the group ball for the sup check; quasi_shape
    lists the ball radii of the non-based entries of the (n+2)-tuples
    used in the coboundary sweeps. Based tuples are used throughout: the
    swept quantities are invariant under left translation, which the
    test suite certifies separately.
    """
    model = space.model
    n = family.degree
    if len(quasi_shape) != n + 2 - 1:
        raise ConfigError("quasi_shape needs %d entries" % (n + 1,))
    k_value, k_witness = k_of_report(space, family)
    ev = theta_evaluator(space, family)
    dfamily = family.coboundary()
    ev_delta = theta_evaluator(space, dfamily)
    rows = []

    # restriction of the extension to each factor
    gap = Fraction(0)
    gap_witness = None
    leak = Fraction(0)
    leak_witness = None
    for fi in range(len(model.factors)):
        pool = _factor_pool(model, fi, factor_truncation)
        for simplex in based_tuples(model, [pool] * n):
            got = ev(simplex)
            want = restricted_family_value(space, family, fi, simplex)
            d = (got - want).norm_indicator()
            if d > gap:
                gap, gap_witness = d, simplex
            if family.kind == EDGE_FUNCTION:
                stray = Fraction(0)
                B = space.coset(model.identity, fi)
                for e, w in got.edges.items():
                    if e.factor != fi or not space.coset_contains(B, e.origin):
                        stray += abs(w)
                if stray > leak:
                    leak, leak_witness = stray, simplex
    rows.append(CheckRow("extension-restriction-gap", gap <= k_value,
                         bound=k_value, observed=gap, witness=gap_witness))
    rows.append(CheckRow(
        "extension-values-in-submodule", leak == 0, bound=Fraction(0),
        observed=leak, witness=leak_witness,
        note="scalar coefficients make this vacuous" if family.kind == SCALAR else ""))

    # sup bound over group tuples, n >= 2 only
    ball = model.enumerate_ball(radius, truncations)
    phi_sup = Fraction(0)
    for fi in family.nonzero_factors():
        pool = _factor_pool(model, fi, factor_truncation)
        spec = family.spec_for(fi)
        for simplex in based_tuples(model, [pool] * n):
            phi_sup = max(phi_sup, evaluate(model, spec, simplex).norm_indicator())
    sup_obs = Fraction(0)
    sup_witness = None
    for simplex in based_tuples(model, [ball] * n):
        v = ev(simplex).norm_indicator()
        if v > sup_obs:
            sup_obs, sup_witness = v, simplex
    if n >= 2:
        sup_bound = n * (n + 1) * phi_sup
        rows.append(CheckRow("extension-sup-bound", sup_obs <= sup_bound,
                             bound=sup_bound, observed=sup_obs, witness=sup_witness))
    else:
        rows.append(CheckRow("extension-sup-bound", True, bound=None,
                             observed=sup_obs, witness=sup_witness,
                             note="no bound asserted in degree 1"))

    # quasi-chain gap and defect over (n+2)-tuples
    pools = [model.enumerate_ball(r, truncations) for r in quasi_shape]
    quasi_obs = Fraction(0)
    quasi_witness = None
    defect_obs = Fraction(0)
    defect_witness = None
    for simplex in based_tuples(model, pools):
        d_theta = delta_of(ev, family.kind, simplex)
        v = (d_theta - ev_delta(simplex)).norm_indicator()
        if v > quasi_obs:
            quasi_obs, quasi_witness = v, simplex
        w = d_theta.norm_indicator()
        if w > defect_obs:
            defect_obs, defect_witness = w, simplex
    quasi_bound = 2 * (n + 1) * (n + 2) * k_value
    rows.append(CheckRow("extension-quasi-chain-gap", quasi_obs <= quasi_bound,
                         bound=quasi_bound, observed=quasi_obs, witness=quasi_witness))

    # windowed defect of the family itself
    d_window = Fraction(0)
    for fi in family.nonzero_factors():
        pool = _factor_pool(model, fi, factor_truncation)
        spec = family.spec_for(fi)
        dspec = coboundary(spec)
        for simplex in based_tuples(model, [pool] * (n + 1)):
            d_window = max(d_window, evaluate(model, dspec, simplex).norm_indicator())
    defect_bound = (n + 1) * (n + 2) * (d_window + 2 * k_value)
    rows.append(CheckRow(
        "extension-defect-bound", defect_obs <= defect_bound,
        bound=defect_bound, observed=defect_obs, witness=defect_witness,
        note="family defect taken over the window; a window violation disproves "
             "the implementation, a pass is evidence not proof"))

    # coboundary restriction: each face contributes at most K
    cb_obs = Fraction(0)
    cb_witness = None
    for fi in range(len(model.factors)):
        pool = _factor_pool(model, fi, factor_truncation)
        spec = family.spec_for(fi)
        for simplex in based_tuples(model, [pool] * (n + 1)):
            d_theta = delta_of(ev, family.kind, simplex)
            if spec is not None:
                want = evaluate(model, coboundary(spec), simplex)
            else:
                want = ModuleVector.zero(family.kind)
            v = (d_theta - want).norm_indicator()
            if v > cb_obs:
                cb_obs, cb_witness = v, simplex
    cb_bound = (n + 2) * k_value
    rows.append(CheckRow("extension-coboundary-restriction", cb_obs <= cb_bound,
                         bound=cb_bound, observed=cb_obs, witness=cb_witness))

    window = {
        "factor_truncation": factor_truncation,
        "radius": radius,
        "truncations": dict(truncations or {}),
        "quasi_shape": list(quasi_shape),
        "based": True,
    }
    return ExtensionReport(k_value=k_value, k_witness=k_witness, rows=rows,
                           window=window)
