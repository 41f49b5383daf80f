"""Exact chain and cochain algebra over group tuples.

Chains are finite rational combinations of (n+1)-tuples of group
elements. Cochain values are ModuleVectors: either exact scalars or
finitely supported edge functions (used by the edge-flow kernels).
Everything is computed over fractions.Fraction; there is no floating
point anywhere in this module.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial

from .coned import DomainError
from .factors import ConfigError


class DegreeError(ValueError):
    """Boundary of a degree-0 chain, or mismatched degrees."""


# ---------------------------------------------------------------------------
# chains


class Chain:
    """A formal rational combination of (degree+1)-tuples."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree, terms=None):
        self.degree = degree
        self.terms = {}
        if terms:
            for simplex, coeff in terms.items() if isinstance(terms, dict) else terms:
                self.add_term(simplex, coeff)

    def add_term(self, simplex, coeff):
        simplex = tuple(simplex)
        if len(simplex) != self.degree + 1:
            raise DegreeError("simplex %r does not have degree %d" % (simplex, self.degree))
        coeff = Fraction(coeff)
        new = self.terms.get(simplex, Fraction(0)) + coeff
        if new:
            self.terms[simplex] = new
        else:
            self.terms.pop(simplex, None)

    @classmethod
    def single(cls, simplex, coeff=1):
        c = cls(len(simplex) - 1)
        c.add_term(simplex, coeff)
        return c

    def __add__(self, other):
        if self.degree != other.degree:
            raise DegreeError("cannot add chains of different degrees")
        out = Chain(self.degree, dict(self.terms))
        for s, co in other.terms.items():
            out.add_term(s, co)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, coeff):
        coeff = Fraction(coeff)
        out = Chain(self.degree)
        if coeff:
            for s, co in self.terms.items():
                out.terms[s] = co * coeff
        return out

    def translate(self, g):
        out = Chain(self.degree)
        for s, co in self.terms.items():
            out.terms[tuple(g * x for x in s)] = co
        return out

    def l1_norm(self):
        return sum((abs(c) for c in self.terms.values()), Fraction(0))

    def is_zero(self):
        return not self.terms

    def items(self):
        """Deterministic term order."""
        return sorted(self.terms.items(), key=lambda kv: tuple(x.sort_key() for x in kv[0]))

    def __eq__(self, other):
        return isinstance(other, Chain) and self.degree == other.degree \
            and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("%s*%r" % (c, s) for s, c in self.items())


def boundary(chain):
    if chain.degree == 0:
        raise DegreeError("a degree-0 chain has no boundary")
    out = Chain(chain.degree - 1)
    for simplex, coeff in chain.terms.items():
        sign = 1
        for j in range(len(simplex)):
            out.add_term(simplex[:j] + simplex[j + 1:], coeff * sign)
            sign = -sign
    return out


def face(simplex, j):
    return simplex[:j] + simplex[j + 1:]


def alternate_chain(chain):
    """Linear extension of the symmetrization 1/(n+1)! sum sgn(s) s."""
    out = Chain(chain.degree)
    k = chain.degree + 1
    norm = Fraction(1, factorial(k))
    for simplex, coeff in chain.terms.items():
        for perm, sign in _signed_permutations(k):
            out.add_term(tuple(simplex[i] for i in perm), coeff * norm * sign)
    return out


def _signed_permutations(k):
    if k not in _PERM_CACHE:
        out = []
        for perm in permutations(range(k)):
            inv = 0
            for i in range(k):
                for j in range(i + 1, k):
                    if perm[i] > perm[j]:
                        inv += 1
            out.append((perm, -1 if inv % 2 else 1))
        _PERM_CACHE[k] = out
    return _PERM_CACHE[k]


_PERM_CACHE = {}
_TERMINUS_CACHE = {}


def is_degenerate(simplex):
    """A simplex killed by alternation, i.e. with a repeated vertex."""
    return len(set(simplex)) != len(simplex)


def _sort_sign(simplex):
    """(sorted simplex, permutation sign), or (None, 0) on a repeat."""
    order = sorted(range(len(simplex)), key=lambda i: simplex[i].sort_key())
    canon = tuple(simplex[i] for i in order)
    for i in range(len(canon) - 1):
        if canon[i] == canon[i + 1]:
            return None, 0
    inv = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                inv += 1
    return canon, -1 if inv % 2 else 1


def alternation_is_zero(chain):
    """Exact zero test for alternate_chain(chain), without expanding
    permutations: terms with a repeat alternate to zero on their own,
    and within each vertex-set orbit the signed coefficients must sum
    to zero."""
    orbits = {}
    for simplex, coeff in chain.terms.items():
        canon, sign = _sort_sign(simplex)
        if canon is None:
            continue
        orbits[canon] = orbits.get(canon, 0) + sign * coeff
    return all(v == 0 for v in orbits.values())


# ---------------------------------------------------------------------------
# module vectors


@dataclass(frozen=True)
class OrientedEdge:
    """An edge of a factor's Cayley graph in its positive orientation:
    from origin to origin*gen, where gen is the gen_index-th declared
    generator of the factor."""

    origin: object
    factor: int
    gen_index: int

    def terminus(self):
        hit = _TERMINUS_CACHE.get(self)
        if hit is None:
            model = self.origin.model
            spec = model.factors[self.factor]
            name, val = spec.signed_gens()[2 * self.gen_index]
            hit = self.origin * model.syllable(self.factor, val)
            if len(_TERMINUS_CACHE) >= 65536:
                _TERMINUS_CACHE.clear()
            _TERMINUS_CACHE[self] = hit
        return hit

    def gen_name(self):
        spec = self.origin.model.factors[self.factor]
        return spec.signed_gens()[2 * self.gen_index][0]

    def sort_key(self):
        return (self.origin.sort_key(), self.factor, self.gen_index)


SCALAR = "scalar"
EDGE_FUNCTION = "edge_function"


class ModuleVector:
    """A coefficient-module value: exact scalar or finite edge function.

    Edge functions are stored on positively oriented edges only; the
    value on a reversed edge is minus the stored value.
    """

    __slots__ = ("kind", "value", "edges")

    def __init__(self, kind, value=Fraction(0), edges=None):
        if kind not in (SCALAR, EDGE_FUNCTION):
            raise ConfigError("unknown module vector kind %r" % (kind,))
        self.kind = kind
        if kind == SCALAR:
            self.value = value if type(value) is Fraction else Fraction(value)
            self.edges = None
        else:
            self.value = None
            self.edges = {e: w if type(w) is Fraction else Fraction(w)
                          for e, w in (edges or {}).items() if w}

    @classmethod
    def zero(cls, kind):
        return cls(kind)

    @classmethod
    def scalar(cls, value):
        return cls(SCALAR, value=value)

    @classmethod
    def edge_function(cls, edges):
        return cls(EDGE_FUNCTION, edges=edges)

    def _check(self, other):
        if self.kind != other.kind:
            raise DomainError("mixed module vector kinds")

    def __add__(self, other):
        self._check(other)
        if self.kind == SCALAR:
            return ModuleVector.scalar(self.value + other.value)
        # adding zero returns the other operand itself; vectors are
        # treated as immutable throughout
        if not self.edges:
            return other
        if not other.edges:
            return self
        out = dict(self.edges)
        for e, w in other.edges.items():
            nw = out.get(e, Fraction(0)) + w
            if nw:
                out[e] = nw
            else:
                out.pop(e, None)
        return ModuleVector.edge_function(out)

    def scale(self, coeff):
        if coeff == 1:
            return self
        if self.kind == SCALAR:
            return ModuleVector.scalar(self.value * coeff)
        return ModuleVector.edge_function({e: w * coeff for e, w in self.edges.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def translate(self, g):
        """The module action of the group: move edge origins, fix scalars."""
        if self.kind == SCALAR:
            return self
        return ModuleVector.edge_function(
            {OrientedEdge(g * e.origin, e.factor, e.gen_index): w
             for e, w in self.edges.items()})

    def is_zero(self):
        if self.kind == SCALAR:
            return self.value == 0
        return not self.edges

    def norm_abs(self):
        """Absolute value; scalars only."""
        if self.kind != SCALAR:
            raise DomainError("edge functions are compared by the l1 norm")
        return abs(self.value)

    def norm_l1(self):
        """Sum of absolute weights; agrees with abs on scalars."""
        if self.kind == SCALAR:
            return abs(self.value)
        return sum((abs(w) for w in self.edges.values()), Fraction(0))

    def norm_indicator(self):
        """The exact quantity all reports compare. The l1 norm keeps every
        counting bound (sums of at most c terms, each of norm at most K)
        a faithful rational comparison; it is exact over the rationals,
        which a euclidean norm is not."""
        return self.norm_l1()

    def edge_items(self):
        return sorted(self.edges.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other):
        if not isinstance(other, ModuleVector) or self.kind != other.kind:
            return False
        return self.value == other.value if self.kind == SCALAR else self.edges == other.edges

    def __repr__(self):
        if self.kind == SCALAR:
            return "scalar(%s)" % (self.value,)
        return "edges(%s)" % (", ".join(
            "%r*%s->%s" % (w, e.origin, e.gen_name()) for e, w in self.edge_items()),)


# ---------------------------------------------------------------------------
# integer determinants (fraction-free elimination)


def int_det(rows):
    m = [[int(x) for x in row] for row in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if m[r][k]), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def signed_volume(points):
    """Signed volume of the simplex spanned by integer points: the
    determinant of the differences to the first point over n factorial."""
    base = points[0]
    rows = [[c - b for c, b in zip(p, base)] for p in points[1:]]
    return Fraction(int_det(rows), factorial(len(rows)))


# ---------------------------------------------------------------------------
# cochain specs and kernels


@dataclass(frozen=True)
class CochainSpec:
    """A cochain as data: degree, coefficient kind, kernel id and its
    parameters. ``factor`` pins the domain to tuples of one base factor;
    None means tuples of the whole group. ``alternating`` is an assertion
    that validators spot-check, not something evaluation enforces."""

    degree: int
    kind: str
    kernel: str
    params: tuple = ()
    factor: object = None
    alternating: bool = True

    def param_dict(self):
        return dict(self.params)


_KERNELS = {}


def register_kernel(name, fn):
    if name in _KERNELS:
        raise ConfigError("kernel %r registered twice" % (name,))
    _KERNELS[name] = fn


def kernel_names():
    return sorted(_KERNELS)


def _domain_check(model, spec, simplex):
    if len(simplex) != spec.degree + 1:
        raise DegreeError("tuple %r does not match degree %d" % (simplex, spec.degree))
    for g in simplex:
        model.check_same_model(g)
        if spec.factor is not None and not g.in_factor(spec.factor):
            raise DomainError("tuple entry %r is outside factor %d" % (g, spec.factor))


def evaluate(model, spec, target):
    """Evaluate a cochain on a simplex (tuple) or linearly on a Chain."""
    if isinstance(target, Chain):
        if target.degree != spec.degree:
            raise DegreeError("chain degree %d, cochain degree %d"
                              % (target.degree, spec.degree))
        out = ModuleVector.zero(spec.kind)
        for simplex, coeff in target.terms.items():
            out = out + evaluate(model, spec, simplex).scale(coeff)
        return out
    simplex = tuple(target)
    _domain_check(model, spec, simplex)
    if spec.kernel == "coboundary_of":
        inner = spec.param_dict()["inner"]
        return evaluate(model, inner, boundary(Chain.single(simplex)))
    if spec.kernel == "alternation_of":
        inner = spec.param_dict()["inner"]
        return evaluate(model, inner, alternate_chain(Chain.single(simplex)))
    try:
        fn = _KERNELS[spec.kernel]
    except KeyError:
        raise ConfigError("unknown kernel %r" % (spec.kernel,))
    return fn(model, spec, simplex)


def coboundary(spec):
    """The homogeneous coboundary, as evaluation on the boundary chain.

    Alternation is a chain map, so the coboundary of an alternating
    cochain is alternating and the flag carries over.
    """
    return CochainSpec(degree=spec.degree + 1, kind=spec.kind, kernel="coboundary_of",
                       params=(("inner", spec),), factor=spec.factor,
                       alternating=spec.alternating)


def alternate_cochain(spec):
    return CochainSpec(degree=spec.degree, kind=spec.kind, kernel="alternation_of",
                       params=(("inner", spec),), factor=spec.factor,
                       alternating=True)


def sup_norm_over_ball(model, spec, radius, truncations, based=True):
    """Max norm indicator over window tuples, with a witness.

    Factor cochains range over tuples of factor values inside the factor
    truncation; group cochains over ball elements. With based=True the
    first entry is pinned to the identity (the kernels in the catalog are
    translation invariant; validators sample that claim separately).
    """
    if spec.factor is not None:
        truncs = model.check_truncations(truncations)
        fspec = model.factors[spec.factor]
        pool = [model.identity] + [model.syllable(spec.factor, v)
                                   for v in fspec.values_within(truncs[spec.factor])]
    else:
        pool = model.enumerate_ball(radius, truncations)
    firsts = [model.identity] if based else pool
    best = Fraction(0)
    witness = None
    for first in firsts:
        for rest in _tuples(pool, spec.degree):
            simplex = (first,) + rest
            val = evaluate(model, spec, simplex).norm_indicator()
            if val > best:
                best = val
                witness = simplex
    return best, witness


def _tuples(pool, length):
    if length == 0:
        yield ()
        return
    for head in pool:
        for rest in _tuples(pool, length - 1):
            yield (head,) + rest


# -- catalog kernels ---------------------------------------------------------


def _lattice_points(model, spec, simplex):
    factor = spec.factor
    fs = model.factors[factor]
    if fs.kind != "free_abelian":
        raise ConfigError("lattice kernels need a free_abelian factor")
    return [g.factor_value(factor) for g in simplex]


def _volume_kernel(model, spec, simplex):
    points = _lattice_points(model, spec, simplex)
    if len(points) != model.factors[spec.factor].rank + 1:
        raise DegreeError("volume kernel degree must equal the lattice rank")
    return ModuleVector.scalar(signed_volume(points))


def _hom_cup_kernel(model, spec, simplex):
    params = spec.param_dict()
    points = _lattice_points(model, spec, simplex)
    if len(points) != 3:
        raise DegreeError("the cup kernel has degree 2")
    a = params["hom1"]
    b = params["hom2"]
    first = sum(ai * (p1 - p0) for ai, p0, p1 in zip(a, points[0], points[1]))
    second = sum(bi * (p2 - p1) for bi, p1, p2 in zip(b, points[1], points[2]))
    return ModuleVector.scalar(Fraction(first) * Fraction(second))


def _zero_kernel(model, spec, simplex):
    return ModuleVector.zero(spec.kind)


def _table_kernel(model, spec, simplex):
    params = spec.param_dict()
    key = tuple(g.word for g in simplex)
    entries = dict(params["entries"])
    return ModuleVector.scalar(entries.get(key, Fraction(0)))


register_kernel("zero", _zero_kernel)
register_kernel("lattice_volume", _volume_kernel)
register_kernel("hom_cup", _hom_cup_kernel)
register_kernel("table", _table_kernel)


def zero_cochain(degree, kind=SCALAR, factor=None):
    return CochainSpec(degree=degree, kind=kind, kernel="zero", factor=factor)


def volume_cochain(factor, rank):
    return CochainSpec(degree=rank, kind=SCALAR, kernel="lattice_volume", factor=factor)


def cup_cochain(factor, hom1, hom2):
    return CochainSpec(degree=2, kind=SCALAR, kernel="hom_cup",
                       params=(("hom1", tuple(hom1)), ("hom2", tuple(hom2))),
                       factor=factor, alternating=False)
