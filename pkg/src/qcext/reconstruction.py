"""Recovering coset projections from extended cochains.

Two routes. The general one extends the coboundary of a geodesic-
spreading edge cochain and reads the projection off the divergence of
the resulting edge function. The lattice route extends the volume
cochain of a rank >= 2 free abelian factor and recovers coordinates
through an exact floor formula.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, floor
from weakref import WeakKeyDictionary

from .chains import (CochainSpec, EDGE_FUNCTION, ModuleVector, OrientedEdge,
                     register_kernel, signed_volume, volume_cochain)
from .coned import DomainError
from .extension import one_hot_family, theta
from .factors import ConfigError, FREE, FREE_ABELIAN


class UnsupportedFactorError(ValueError):
    """The operation needs an infinite factor."""


class RetryError(ValueError):
    """The probe index is too small; carries the minimal admissible one."""

    def __init__(self, message, minimal):
        super().__init__("%s (minimal admissible: %d)" % (message, minimal))
        self.minimal = minimal


# ---------------------------------------------------------------------------
# the edge-flow cochain


def _multinomial(diffs):
    total = sum(abs(d) for d in diffs)
    out = 1
    for d in diffs:
        out *= comb(total, abs(d))
        total -= abs(d)
    return out


_BUNDLE_CACHE = WeakKeyDictionary()
_BUNDLE_CACHE_CAP = 65536


def geodesic_bundle(model, factor, l0, l1):
    """The raw spread sum over geodesics from l0 to l1: for each oriented
    edge, (number of geodesics through it forward) minus (backward).
    Stored on positive orientations; lattice counts use products of
    multinomials per edge, never path enumeration.

    Returns (weights, distance, geodesic count). Cached per value pair;
    callers must not mutate the weight dict.
    """
    spec = model.factors[factor]
    v0 = l0.factor_value(factor)
    v1 = l1.factor_value(factor)
    per = _BUNDLE_CACHE.get(model)
    if per is None:
        per = _BUNDLE_CACHE[model] = {}
    key = (factor, v0, v1)
    hit = per.get(key)
    if hit is None:
        hit = _bundle_raw(model, spec, factor, v0, v1)
        if len(per) >= _BUNDLE_CACHE_CAP:
            per.clear()
        per[key] = hit
    return hit


def _bundle_raw(model, spec, factor, v0, v1):
    weights = {}
    if spec.kind == FREE_ABELIAN:
        diffs = tuple(b - a for a, b in zip(v0, v1))
        d = sum(abs(x) for x in diffs)
        count = _multinomial(diffs)
        if d == 0:
            return weights, 0, count
        ranges = [range(min(a, b), max(a, b) + 1) for a, b in zip(v0, v1)]
        for i, s in enumerate((1 if x > 0 else -1 if x < 0 else 0) for x in diffs):
            if s == 0:
                continue
            sub = list(ranges)
            lo, hi = min(v0[i], v1[i]), max(v0[i], v1[i])
            sub[i] = range(lo, hi)
            for u in _box(sub):
                src = list(u)
                dst = list(u)
                if s > 0:
                    dst[i] += 1
                else:
                    src[i] += 1
                through = (_multinomial(tuple(x - y for x, y in zip(src, v0)))
                           * _multinomial(tuple(y - x for x, y in zip(dst, v1))))
                origin = model.syllable(factor, u)
                edge = OrientedEdge(origin, factor, i)
                weights[edge] = weights.get(edge, 0) + s * through
        return {e: w for e, w in weights.items() if w}, d, count
    if spec.kind == FREE:
        word = spec.mult(spec.inv(v0), v1)
        d = len(word)
        cur = v0
        for letter in word:
            nxt = spec.mult(cur, (letter,))
            gi = abs(letter) - 1
            if letter > 0:
                edge = OrientedEdge(model.syllable(factor, cur), factor, gi)
                weights[edge] = weights.get(edge, 0) + 1
            else:
                edge = OrientedEdge(model.syllable(factor, nxt), factor, gi)
                weights[edge] = weights.get(edge, 0) - 1
            cur = nxt
        return {e: w for e, w in weights.items() if w}, d, 1
    raise UnsupportedFactorError("geodesic spreading needs a lattice or free factor")


def _box(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for rest in _box(ranges[1:]):
            yield (head,) + rest


_FLOW_CACHE = WeakKeyDictionary()


def edge_flow(model, factor, l0, l1):
    """The spreading 1-cochain: distance over twice the geodesic count,
    times the bundle. Cached; the returned vector is shared and must not
    be mutated."""
    per = _FLOW_CACHE.get(model)
    if per is None:
        per = _FLOW_CACHE[model] = {}
    key = (factor, l0.factor_value(factor), l1.factor_value(factor))
    hit = per.get(key)
    if hit is None:
        weights, d, count = geodesic_bundle(model, factor, l0, l1)
        coeff = Fraction(d, 2 * count)
        hit = ModuleVector.edge_function({e: coeff * w for e, w in weights.items()})
        if len(per) >= _BUNDLE_CACHE_CAP:
            per.clear()
        per[key] = hit
    return hit


def _edge_flow_delta_kernel(model, spec, simplex):
    factor = spec.factor
    l0, l1, l2 = simplex
    return (edge_flow(model, factor, l1, l2)
            - edge_flow(model, factor, l0, l2)
            + edge_flow(model, factor, l0, l1))


register_kernel("edge_flow_delta", _edge_flow_delta_kernel)


def edge_flow_delta_cochain(factor):
    """Coboundary of the spreading cochain as a degree-2 family member."""
    return CochainSpec(degree=2, kind=EDGE_FUNCTION, kernel="edge_flow_delta",
                       factor=factor, alternating=True)


_PSI_CACHE = {}
_PSI_CACHE_CAP = 8192


def psi(vector, within=None):
    """Divergence of an edge function: incoming minus outgoing weight per
    vertex, summed over both orientations of every edge. The stored
    positive orientation carries w and its reversal -w, so each endpoint
    picks up twice the stored weight. ``within`` restricts to edges of
    one coset's subgraph.

    Memoized per vector object: upstream caches hand back shared vectors,
    and the entry pins its vector so an id can never be recycled while
    its entry is alive."""
    if vector.kind != EDGE_FUNCTION:
        raise DomainError("psi eats edge functions")
    key = (id(vector), within)
    entry = _PSI_CACHE.get(key)
    if entry is not None and entry[0] is vector:
        return dict(entry[1])
    out = {}
    for e, w in vector.edges.items():
        if within is not None and e.factor != within.factor:
            continue
        t = e.terminus()
        if within is not None:
            stripped = e.origin.word[:-1] if e.origin.word and \
                e.origin.word[-1][0] == within.factor else e.origin.word
            if stripped != within.rep.word:
                continue
        out[t] = out.get(t, Fraction(0)) + 2 * w
        out[e.origin] = out.get(e.origin, Fraction(0)) - 2 * w
    result = {v: w for v, w in out.items() if w}
    if len(_PSI_CACHE) >= _PSI_CACHE_CAP:
        _PSI_CACHE.clear()
    _PSI_CACHE[key] = (vector, result)
    return dict(result)


def h_sequence(model, factor, n):
    """The marker s1^(n^3) along the first declared generator."""
    spec = model.factors[factor]
    if spec.kind == FREE_ABELIAN:
        vec = tuple(n ** 3 if i == 0 else 0 for i in range(spec.rank))
        return model.syllable(factor, vec)
    if spec.kind == FREE:
        return model.syllable(factor, (1,) * n ** 3)
    raise UnsupportedFactorError("marker elements need an infinite factor")


@dataclass
class GeneralRecovery:
    coset: object
    point: object
    n_used: int
    markers: tuple
    vertex_values: dict
    recovered: frozenset


def _min_relative_distance(space, B, g, points):
    return min(space.relative_distance(B, g, p) for p in points)


_ADMISSIBLE_CACHE = WeakKeyDictionary()


def minimal_admissible_n(space, B, y, cap=64):
    """Smallest n whose markers clear the projection of y by more than
    2D. Depends on y only through that projection, which is what the
    per-space memo keys on."""
    proj = space.projection(B, y)
    per = _ADMISSIBLE_CACHE.get(space)
    if per is None:
        per = _ADMISSIBLE_CACHE[space] = {}
    key = (B, proj, cap)
    hit = per.get(key)
    if hit is not None:
        return hit
    model = space.model
    for n in range(1, cap):
        hn = B.rep * h_sequence(model, B.factor, n)
        hn1 = B.rep * h_sequence(model, B.factor, n + 1)
        if (_min_relative_distance(space, B, hn, proj) > 2 * space.D
                and _min_relative_distance(space, B, hn1, proj) > 2 * space.D
                and space.relative_distance(B, hn, hn1) > 2 * space.D):
            if len(per) >= _BUNDLE_CACHE_CAP:
                per.clear()
            per[key] = n
            return n
    raise ConfigError("no admissible marker index below %d" % cap)


def recover_projection_general(space, B, y, n):
    """Read the projection onto B off the extension of the spreading
    coboundary, evaluated on (marker, next marker, y)."""
    model = space.model
    hn = B.rep * h_sequence(model, B.factor, n)
    hn1 = B.rep * h_sequence(model, B.factor, n + 1)
    proj = space.projection(B, y)
    if not (_min_relative_distance(space, B, hn, proj) > 2 * space.D
            and _min_relative_distance(space, B, hn1, proj) > 2 * space.D
            and space.relative_distance(B, hn, hn1) > 2 * space.D):
        raise RetryError("marker index %d is not admissible" % n,
                         minimal_admissible_n(space, B, y))
    family = one_hot_family(model, B.factor, edge_flow_delta_cochain(B.factor))
    value = theta(space, family, (hn, hn1, y))
    divergence = psi(value)
    support = {}
    for v, w in divergence.items():
        if space.coset_contains(B, v) and v not in (hn, hn1):
            support[v] = w
    return GeneralRecovery(coset=B, point=y, n_used=n, markers=(hn, hn1),
                           vertex_values=support, recovered=frozenset(support))


# ---------------------------------------------------------------------------
# the lattice route


def volume_cocycle(points):
    """Signed volume of the integer simplex; the lattice kernel in raw
    coordinate form."""
    pts = [tuple(p) for p in points]
    if len(pts) != len(pts[0]) + 1:
        raise DomainError("volume needs an (n+1)-tuple of n-dim points")
    return signed_volume(pts)


def _probes(model, factor, m):
    spec = model.factors[factor]
    rank = spec.rank
    out = []
    for i in range(rank + 1):
        vec = [0] * rank
        vec[0] = m
        if i >= 1:
            if i == 1:
                vec[0] = 2 * m
            else:
                vec[i - 1] = m
        out.append(model.syllable(factor, tuple(vec)))
    return out


def minimal_admissible_m(space, factor, w, cap=4096):
    H = space.coset(space.model.identity, factor)
    proj = space.projection(H, w)
    for m in range(1, cap):
        probes = _probes(space.model, factor, m)
        if all(_min_relative_distance(space, H, p, proj) > space.D for p in probes):
            return m
    raise ConfigError("no admissible probe scale below %d" % cap)


@dataclass
class LatticeRecovery:
    factor: int
    base: object
    point: object
    m_used: int
    coordinates: tuple
    raw_values: tuple
    recovered: object


def recover_projection_zn(space, factor, g, z, m):
    """Recover the projection onto g times the lattice factor through the
    floor formula on extended volume values."""
    model = space.model
    spec = model.factors[factor]
    if spec.kind != FREE_ABELIAN or spec.rank < 2:
        raise UnsupportedFactorError("the lattice route needs a free_abelian factor "
                                     "of rank at least 2")
    rank = spec.rank
    w = ~g * z
    H = space.coset(model.identity, factor)
    probes = _probes(model, factor, m)
    proj = space.projection(H, w)
    if not all(_min_relative_distance(space, H, p, proj) > space.D for p in probes):
        raise RetryError("probe scale %d is not admissible" % m,
                         minimal_admissible_m(space, factor, w))
    family = one_hot_family(model, factor, volume_cochain(factor, rank))
    raw = []
    coords = []
    scale = Fraction(factorial(rank), m ** (rank - 1))
    for i in range(1, rank + 1):
        simplex = tuple(w if k == i else probes[k] for k in range(rank + 1))
        a_val = theta(space, family, simplex).value
        raw.append(a_val)
        shifted = scale * a_val + (m if i == 1 else 0)
        coords.append(floor(shifted))
    point = g * model.syllable(factor, tuple(coords))
    return LatticeRecovery(factor=factor, base=g, point=z, m_used=m,
                           coordinates=tuple(coords), raw_values=tuple(raw),
                           recovered=point)


def next_admissible_m(space, factor, g, z, m, cap=4096):
    model = space.model
    w = ~g * z
    H = space.coset(model.identity, factor)
    proj = space.projection(H, w)
    for m2 in range(m + 1, cap):
        probes = _probes(model, factor, m2)
        if all(_min_relative_distance(space, H, p, proj) > space.D for p in probes):
            return m2
    raise ConfigError("no admissible probe scale in (%d, %d)" % (m, cap))
