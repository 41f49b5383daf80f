"""The coned-off space over a product model.

Vertices are the group elements together with one cone point per coset
of a base factor; every member of a coset is joined to its cone point by
an edge of length 1/4. In factor_generators mode the relative
generating set also contributes edges of length 1 between elements.

Any two members of a coset are at distance 1/2 through the cone point,
so a relative generator edge (length 1, and its endpoints always share a
coset) can never occur in a geodesic. Both generator modes therefore
share one metric, computed in closed form from syllable words:

* between elements, half the syllable count of the quotient,
* from an element to a cone, 1/4 plus half the syllable count after
  absorbing a leading syllable of the cone's factor,
* between cones, 1/2 plus half the syllable count between the closest
  entry points.

Geodesics alternate element and cone vertices and are unique here; the
structural reason is that the built-in factor kinds make the coset
incidence graph a tree, and the test suite certifies uniqueness against
an exhaustive shortest-path oracle.
"""

from dataclasses import dataclass
from fractions import Fraction

from .factors import ConfigError
from .groups import GroupElement

INFINITE = float("inf")

QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)


class InfiniteProjectionError(ValueError):
    """Projection of a cone point onto its own coset."""


class IdenticalCosetError(ValueError):
    """Gate between a coset and itself."""


class DomainError(ValueError):
    """An argument lies outside the domain required by the operation."""


@dataclass(frozen=True)
class Coset:
    """A left coset of a base factor, keyed by its canonical representative.

    The canonical representative is the unique member whose syllable
    word has no trailing syllable of the coset's factor; it is also the
    member closest to the identity.
    """

    factor: int
    rep: GroupElement

    def sort_key(self):
        return (self.rep.sort_key(), self.factor)

    def __repr__(self):
        gens = "+".join(self.rep.model.factors[self.factor].generators)
        return "%r<%s>" % (self.rep, gens)


@dataclass(frozen=True)
class ConedVertex:
    """Either an element vertex or a cone vertex, never both."""

    element: object = None
    coset: object = None

    def __post_init__(self):
        if (self.element is None) == (self.coset is None):
            raise ConfigError("a vertex is exactly one of element / cone")

    @property
    def is_cone(self):
        return self.coset is not None

    def __repr__(self):
        if self.is_cone:
            return "cone(%r)" % (self.coset,)
        return "vx(%r)" % (self.element,)


def element_vertex(g):
    return ConedVertex(element=g)


def cone_vertex(coset):
    return ConedVertex(coset=coset)


@dataclass(frozen=True)
class Geodesic:
    """A shortest path as the full vertex sequence, cones included."""

    vertices: tuple
    length: Fraction


@dataclass(frozen=True)
class ConedSpaceConfig:
    model: object
    separation: int = 1
    relative_metric_mode: str = "infinity_offdiag"


class ConedSpace:
    """Geometry of the coned-off space: metric, geodesics, projections."""

    def __init__(self, config):
        model = config.model
        mode = config.relative_metric_mode
        if mode == "infinity_offdiag":
            if model.relative_generator_mode != "none":
                raise ConfigError(
                    "infinity_offdiag needs a model without relative generators")
        elif mode == "word_metric":
            if model.relative_generator_mode != "factor_generators":
                raise ConfigError("word_metric needs factor_generators mode")
        else:
            raise ConfigError("unknown relative_metric_mode %r" % (mode,))
        if not isinstance(config.separation, int) or config.separation < 1:
            raise ConfigError("separation constant must be a positive integer")
        self.config = config
        self.model = model
        self.mode = mode
        self.D = config.separation
        # pure-function caches; keys are frozen vertices and cosets.
        # Bounded: long sweeps would otherwise hold every projection ever
        # computed. A full reset is idempotent, queries stay pure.
        self._proj_cache = {}
        self._cones_cache = {}
        self._reldist_cache = {}
        self._cache_cap = 400000

    # -- cosets ------------------------------------------------------------

    def coset(self, g, factor):
        self.model.check_same_model(g)
        if not 0 <= factor < len(self.model.factors):
            raise ConfigError("factor index %r out of range" % (factor,))
        word = g.word
        if word and word[-1][0] == factor:
            word = word[:-1]
        return Coset(factor, GroupElement(self.model, word))

    def cosets_of(self, g):
        return [self.coset(g, f) for f in range(len(self.model.factors))]

    def coset_contains(self, B, g):
        w = g.word
        if w and w[-1][0] == B.factor:
            w = w[:-1]
        return w == B.rep.word

    def translate_coset(self, g, B):
        return self.coset(g * B.rep, B.factor)

    # -- metric --------------------------------------------------------------

    def hat_distance(self, u, v):
        """Distance between vertices; elements may be passed bare."""
        u = self._as_vertex(u)
        v = self._as_vertex(v)
        if u.is_cone and v.is_cone:
            return self._cone_cone(u.coset, v.coset)
        if u.is_cone:
            return self._element_cone(v.element, u.coset)
        if v.is_cone:
            return self._element_cone(u.element, v.coset)
        w = ~u.element * v.element
        return Fraction(len(w.word), 2)

    def _as_vertex(self, x):
        if isinstance(x, ConedVertex):
            return x
        if isinstance(x, GroupElement):
            return element_vertex(x)
        if isinstance(x, Coset):
            return cone_vertex(x)
        raise DomainError("not a vertex: %r" % (x,))

    def _element_cone(self, x, B):
        w = (~B.rep * x).word
        s = len(w)
        if w and w[0][0] == B.factor:
            s -= 1
        return QUARTER + Fraction(s, 2)

    def _cone_cone(self, B, B2):
        if B == B2:
            return Fraction(0)
        w = (~B.rep * B2.rep).word
        s = len(w)
        if w and w[0][0] == B.factor:
            s -= 1
        if w and w[-1][0] == B2.factor:
            s -= 1
        return HALF + Fraction(s, 2)

    # -- geodesics -------------------------------------------------------------

    def geodesic(self, u, v):
        """The geodesic between two vertices. Unique in the built-in
        models; the companion suite certifies that against an oracle."""
        u = self._as_vertex(u)
        v = self._as_vertex(v)
        head = []
        tail = []
        if u.is_cone:
            B = u.coset
            start = self._entry_from(B, v)
            head = [u]
        else:
            start = u.element
        if v.is_cone:
            B2 = v.coset
            end = self._entry_from(B2, u)
            tail = [v]
        else:
            end = v.element
        if u.is_cone and v.is_cone and u.coset == v.coset:
            return Geodesic((u,), Fraction(0))
        mid = self._element_geodesic(start, end)
        vertices = tuple(head) + mid + tuple(tail)
        return Geodesic(vertices, self.hat_distance(u, v))

    def geodesics(self, u, v):
        return [self.geodesic(u, v)]

    def _entry_from(self, B, other):
        """The member of B closest to the far vertex."""
        if other.is_cone:
            if other.coset == B:
                return B.rep
            point = other.coset.rep
        else:
            point = other.element
        return self._gate_point(B, point)

    def _gate_point(self, B, point):
        # first syllable of rep^-1 * point, by word surgery: it has the
        # coset's factor only when rep is a proper prefix of the point and
        # the next syllable is of that factor (rep never ends in it).
        r = B.rep.word
        p = point.word
        lr = len(r)
        if len(p) > lr and p[:lr] == r:
            syl = p[lr]
            if syl[0] == B.factor:
                return GroupElement(self.model, r + (syl,))
        return B.rep

    def _element_geodesic(self, a, b):
        """Vertex sequence a .. b, alternating elements and cones."""
        w = (~a * b).word
        vertices = [element_vertex(a)]
        cur = a
        for f, val in w:
            vertices.append(cone_vertex(self.coset(cur, f)))
            cur = cur * self.model.syllable(f, val)
            vertices.append(element_vertex(cur))
        return tuple(vertices)

    # -- projections --------------------------------------------------------------

    def projection(self, B, x):
        """Entry points in B of geodesics from x to the cone of B.

        Single-valued in the built-in models; returned as a frozenset to
        keep the contract stable for models with several geodesics.
        """
        # keyed on the argument as given; elements and their vertex
        # wrappers coexist as distinct keys. Error cases are never stored.
        key = (B, x)
        try:
            hit = self._proj_cache.get(key)
        except TypeError:
            hit = None
        if hit is None:
            x = self._as_vertex(x)
            if x.is_cone and x.coset == B:
                raise InfiniteProjectionError(
                    "the projection of a cone point on its own coset is the whole coset")
            point = x.coset.rep if x.is_cone else x.element
            hit = frozenset((self._gate_point(B, point),))
            if len(self._proj_cache) >= self._cache_cap:
                self._proj_cache.clear()
            self._proj_cache[key] = hit
        return hit

    def coset_gate(self, B, B2):
        """Projection of one cone point onto another coset."""
        if B == B2:
            raise IdenticalCosetError("gate of a coset with itself")
        return self.projection(B, cone_vertex(B2))

    # -- relative metric ---------------------------------------------------------

    def relative_distance(self, B, p, q):
        if not (self.coset_contains(B, p) and self.coset_contains(B, q)):
            raise DomainError("relative distance needs both points in the coset")
        if p == q:
            return 0
        if self.mode == "infinity_offdiag":
            return INFINITE
        # members are rep or rep * syllable; p^-1 q reduces to one syllable
        fi = B.factor
        lr = len(B.rep.word)
        wp, wq = p.word, q.word
        vp = wp[lr][1] if len(wp) > lr else None
        vq = wq[lr][1] if len(wq) > lr else None
        key = (fi, vp, vq)
        hit = self._reldist_cache.get(key)
        if hit is None:
            spec = self.model.factors[fi]
            if vp is None:
                hit = spec.wlen(vq)
            elif vq is None:
                hit = spec.wlen(spec.inv(vp))
            else:
                hit = spec.wlen(spec.mult(spec.inv(vp), vq))
            if len(self._reldist_cache) >= self._cache_cap:
                self._reldist_cache.clear()
            self._reldist_cache[key] = hit
        return hit

    def relative_diameter(self, B, points):
        points = list(points)
        best = 0
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                d = self.relative_distance(B, points[i], points[j])
                if d == INFINITE:
                    return INFINITE
                if d > best:
                    best = d
        return best

    def projection_diameter(self, B, vertices):
        pts = set()
        for v in vertices:
            pts |= self.projection(B, v)
        return self.relative_diameter(B, pts)

    # -- separated and relevant cosets ----------------------------------------------

    def interior_cones(self, u, v):
        u = self._as_vertex(u)
        v = self._as_vertex(v)
        key = (u, v)
        hit = self._cones_cache.get(key)
        if hit is None:
            rev = self._cones_cache.get((v, u))
            if rev is not None:
                # geodesics are unique here, so the reverse walk is the
                # reversal; certified against the oracle by the suite
                hit = tuple(reversed(rev))
            elif u.is_cone and v.is_cone and u.coset == v.coset:
                hit = ()
            else:
                start = self._entry_from(u.coset, v) if u.is_cone else u.element
                end = self._entry_from(v.coset, u) if v.is_cone else v.element
                hit = self._walk_cones(start, end)
            if len(self._cones_cache) >= self._cache_cap:
                self._cones_cache.clear()
            self._cones_cache[key] = hit
        return hit

    def _walk_cones(self, a, b):
        """Cone cosets along the element walk, in path order."""
        wa, wb = a.word, b.word
        if wa == wb:
            return ()
        model = self.model
        if not wa:
            # based walk: every prefix of b is already in normal form
            return tuple(Coset(f, GroupElement(model, wb[:k]))
                         for k, (f, _v) in enumerate(wb))
        # peel one step by common-prefix surgery, then recurse through
        # the cache; tails are shared between walks converging on b. The
        # walk either steps forward along b's word (when a's leftover is
        # at most a boundary syllable of the same factor) or retreats by
        # dropping a's last syllable.
        la, lb = len(wa), len(wb)
        i = 0
        m = la if la < lb else lb
        while i < m and wa[i] == wb[i]:
            i += 1
        if i == la or (i == la - 1 and i < lb and wa[i][0] == wb[i][0]):
            f = wb[i][0]
            first = self.coset(a, f)
            cur = GroupElement(model, wb[:i + 1])
        else:
            f = wa[-1][0]
            first = self.coset(a, f)
            cur = GroupElement(model, wa[:-1])
        return (first,) + self.interior_cones(element_vertex(cur), element_vertex(b))

    def separating_cosets(self, v0, v1):
        """Cosets whose joint projections have diameter >= the separation
        constant, in geodesic walk order (increasing distance from v0)."""
        out = []
        for B in self.interior_cones(v0, v1):
            if self.projection_diameter(B, (v0, v1)) >= self.D:
                out.append(B)
        return out

    def relevant_cosets(self, simplex):
        """Union over vertex pairs of the 2D-separated cosets, sorted."""
        seen = {}
        k = len(simplex)
        for i in range(k):
            for j in range(i + 1, k):
                if simplex[i] == simplex[j]:
                    continue
                for B in self.interior_cones(simplex[i], simplex[j]):
                    if B in seen:
                        continue
                    if self.projection_diameter(B, (simplex[i], simplex[j])) >= 2 * self.D:
                        seen[B] = True
        return sorted(seen, key=Coset.sort_key)

    # -- validation -----------------------------------------------------------------

    def validate_separation_constant(self, radius, truncations):
        """Search a ball for separated cosets missing from some geodesic.

        Returns a list of violation witnesses; any entry means the
        configured separation constant is unsound for this model.
        """
        ball = self.model.enumerate_ball(radius, truncations)
        cosets = window_cosets(self, ball)
        violations = []
        for w in ball:
            if w.is_identity():
                continue
            on_path = set(self.interior_cones(self.model.identity, w))
            for B in cosets:
                if self.projection_diameter(B, (self.model.identity, w)) >= self.D:
                    if B not in on_path:
                        violations.append({"pair": (self.model.identity, w), "coset": B})
        return violations


def window_cosets(space, elements):
    """All cosets met by a set of elements, deduplicated and sorted."""
    seen = set()
    for g in elements:
        for B in space.cosets_of(g):
            seen.add(B)
    return sorted(seen, key=Coset.sort_key)
