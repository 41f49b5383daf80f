"""Window sweeps for the coned-space lemmas.

Every check reports the worst case it saw with a witness. Sweeps are
quantified over based pairs and orbit-normalized coset pairs; the
equivariance rows certify that left translation preserves all the swept
quantities, which is what makes the basing sound.
"""

from dataclasses import dataclass

from .coned import cone_vertex, element_vertex, window_cosets
from .report import CheckRow


@dataclass
class GeometryReport:
    rows: list
    window: dict

    def passed(self):
        return all(r.passed for r in self.rows)


def _based_pairs(model, ball):
    return [(model.identity, y) for y in ball if not y.is_identity()]


def farproj_check(space, pairs, cosets, label="geometry-distant-projection-forces-cone"):
    """Whenever the joint projection on B has diameter >= D, the cone of
    B must lie on the geodesic. Exhaustive over the given pairs and
    cosets."""
    checked = 0
    bad = None
    for x, y in pairs:
        on_path = None
        for B in cosets:
            if space.projection_diameter(B, (x, y)) >= space.D:
                if on_path is None:
                    on_path = set(space.interior_cones(x, y))
                checked += 1
                if B not in on_path:
                    bad = (x, y, B)
                    break
        if bad:
            break
    return CheckRow(label, bad is None, observed=checked, witness=bad,
                    note="separated cosets found on every geodesic" if bad is None
                    else "separated coset off the geodesic")


def farproj_probe(space, pairs, perturbations):
    """Neighborhood probe at scale: candidate cosets are those met by
    perturbed prefixes of the endpoint, a superset of the geodesic cones."""
    checked = 0
    bad = None
    model = space.model
    for x, y in pairs:
        prefixes = [model.identity]
        w = y.word
        for i in range(1, len(w) + 1):
            prefixes.append(model.element(w[:i]))
        cands = {}
        for p in prefixes:
            for v in perturbations:
                for B in space.cosets_of(p * v):
                    cands[B] = None
        on_path = set(space.interior_cones(x, y))
        for B in cands:
            if space.projection_diameter(B, (x, y)) >= space.D:
                checked += 1
                if B not in on_path:
                    bad = (x, y, B)
                    break
        if bad:
            break
    return CheckRow("geometry-distant-projection-probe", bad is None,
                    observed=checked, witness=bad)


def smallproj_check(space, based_cosets, cosets, points):
    """Gates and point projections have diameter < D."""
    worst = -1
    wit = None
    for B in based_cosets:
        for B2 in cosets:
            if B2 == B:
                continue
            d = space.relative_diameter(B, space.coset_gate(B, B2))
            if d > worst:
                worst, wit = d, (B, B2)
        for x in points:
            d = space.relative_diameter(B, space.projection(B, x))
            if d > worst:
                worst, wit = d, (B, x)
    return CheckRow("geometry-projection-diameter-small", worst < space.D,
                    bound=space.D, observed=worst, witness=wit,
                    note="strict: observed must stay below the separation constant")


def linearord_check(space, pairs):
    """Along the separated-coset order, earlier cones project with v0 and
    later cones project with v1."""
    checked = 0
    bad = None
    for v0, v1 in pairs:
        sep = space.separating_cosets(element_vertex(v0), element_vertex(v1))
        for i, B0 in enumerate(sep):
            for B1 in sep[i + 1:]:
                checked += 1
                if space.projection(B1, v0) != space.projection(B1, cone_vertex(B0)):
                    bad = (v0, v1, B0, B1, "front")
                    break
                if space.projection(B0, cone_vertex(B1)) != space.projection(B0, v1):
                    bad = (v0, v1, B0, B1, "back")
                    break
            if bad:
                break
        if bad:
            break
    return CheckRow("geometry-separated-order-projections", bad is None,
                    observed=checked, witness=bad)


def three_points_check(space, pairs, thirds):
    """At most two relevant cosets of a pair see the third point away
    from both endpoint projections."""
    worst = -1
    wit = None
    for g0, g1 in pairs:
        rel = space.relevant_cosets((g0, g1))
        if not rel:
            continue
        for g2 in thirds:
            count = 0
            for B in rel:
                p2 = space.projection(B, g2)
                if p2 != space.projection(B, g0) and p2 != space.projection(B, g1):
                    count += 1
            if count > worst:
                worst, wit = count, (g0, g1, g2)
    return CheckRow("geometry-third-point-relevant-count", worst <= 2,
                    bound=2, observed=worst, witness=wit)


def separated_bound_check(space, pairs):
    """|S(v0,v1)| <= 2 * hat-distance, and reversal flips the order."""
    bad = None
    worst = None
    for v0, v1 in pairs:
        sep = space.separating_cosets(element_vertex(v0), element_vertex(v1))
        bound = 2 * space.hat_distance(v0, v1)
        if len(sep) > bound:
            bad = (v0, v1, "count", len(sep), bound)
            break
        if worst is None or len(sep) - bound > worst[0]:
            worst = (len(sep) - bound, v0, v1)
        rev = space.separating_cosets(element_vertex(v1), element_vertex(v0))
        if list(reversed(rev)) != sep:
            bad = (v0, v1, "reversal")
            break
    return CheckRow("geometry-separated-count-bound", bad is None,
                    witness=bad if bad else worst,
                    note="count <= 2*distance and reversal flips the walk order")


def equivariance_check(space, translators, pairs, cosets):
    """d-hat, projections, separated and relevant sets all commute with
    left translation."""
    bad = None
    for g in translators:
        for x, y in pairs:
            if space.hat_distance(g * x, g * y) != space.hat_distance(x, y):
                bad = ("hat", g, x, y)
                break
            s0 = space.separating_cosets(element_vertex(x), element_vertex(y))
            s1 = space.separating_cosets(element_vertex(g * x), element_vertex(g * y))
            if [space.translate_coset(g, B) for B in s0] != s1:
                bad = ("separated", g, x, y)
                break
            r0 = space.relevant_cosets((x, y))
            r1 = space.relevant_cosets((g * x, g * y))
            if sorted((space.translate_coset(g, B) for B in r0),
                      key=lambda B: B.sort_key()) != r1:
                bad = ("relevant", g, x, y)
                break
            for B in cosets:
                lhs = space.projection(space.translate_coset(g, B), g * x)
                rhs = frozenset(g * p for p in space.projection(B, x))
                if lhs != rhs:
                    bad = ("projection", g, x, B)
                    break
            if bad:
                break
        if bad:
            break
    return CheckRow("geometry-left-translation-equivariance", bad is None,
                    witness=bad)


def verify_geometry(space, radius, truncations, probe_radius=2, mid_radius=None,
                    thirds_radius=1):
    """The geometry suite over a window.

    Pairs are based at the identity. The distant-projection check runs
    exhaustively over the full coset universe at probe_radius, and as a
    prefix-neighborhood probe over mid_radius pairs (default: the full
    radius). The third-point count sweeps mid_radius pairs against
    thirds_radius third points. The projection-diameter check normalizes
    the first coset to a based one; the equivariance row is what
    transports the based sweeps to the whole window.
    """
    model = space.model
    if mid_radius is None:
        mid_radius = radius
    ball = model.enumerate_ball(radius, truncations)
    mid_ball = (ball if mid_radius == radius
                else model.enumerate_ball(mid_radius, truncations))
    small_ball = model.enumerate_ball(probe_radius, truncations)
    tiny_ball = model.enumerate_ball(1, truncations)
    thirds = model.enumerate_ball(thirds_radius, truncations)
    pairs = _based_pairs(model, ball)
    mid_pairs = _based_pairs(model, mid_ball)
    small_pairs = _based_pairs(model, small_ball)
    universe = window_cosets(space, small_ball)
    based_cosets = space.cosets_of(model.identity)
    perturbations = [model.identity] + [model.syllable(fi, v)
                                        for fi, fs in enumerate(model.factors)
                                        for v in fs.values_within(1)]

    rows = [
        farproj_check(space, small_pairs, universe),
        farproj_probe(space, mid_pairs, perturbations),
        smallproj_check(space, based_cosets, universe, ball),
        linearord_check(space, pairs),
        three_points_check(space, mid_pairs, thirds),
        separated_bound_check(space, pairs),
        equivariance_check(space,
                           [g for g in tiny_ball if not g.is_identity()],
                           small_pairs, based_cosets),
    ]
    window = {
        "radius": radius,
        "mid_radius": mid_radius,
        "probe_radius": probe_radius,
        "thirds_radius": thirds_radius,
        "truncations": dict(truncations or {}),
        "based": True,
    }
    return GeometryReport(rows=rows, window=window)
