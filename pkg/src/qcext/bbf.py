"""Projection-family axiom checks over coset windows.

The gates between cosets are the projections through cone points; the
checker sweeps a finite universe of cosets and reports, per axiom, the
extremal quantity and whether the supplied threshold passes. A separate
diagnostic estimates the linear-separation constant K from
window-restricted neighborhoods in the ambient word metric.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .coned import cone_vertex
from .factors import ConfigError


def _require_word_mode(space):
    if space.mode != "word_metric":
        raise ConfigError("projection distances need word_metric mode")


def pairwise_distance(space, Y, X, Z):
    """d_Y(X, Z): word-metric diameter of the union of the two gates."""
    _require_word_mode(space)
    pts = set(space.coset_gate(Y, X))
    if Z != X:
        pts |= space.coset_gate(Y, Z)
    return space.relative_diameter(Y, pts)


def window_coset_universe(space, radius, truncations):
    """Cosets of every window element for every factor, sorted."""
    seen = {}
    for g in space.model.enumerate_ball(radius, truncations):
        for B in space.cosets_of(g):
            seen[B] = None
    return sorted(seen, key=lambda B: B.sort_key())


@dataclass
class BBFReport:
    xi_candidate: object
    universe_size: int
    axiom0_max: object = None
    axiom0_witness: object = None
    axiom3_min_max: object = None
    axiom3_witness: object = None
    axiom4_counts: dict = field(default_factory=dict)
    axiom4_max: int = 0
    axiom4_bound_ok: bool = True
    axiom4_cross_ok: object = None
    minimal_xi: int = 1
    klgs_K: object = None
    axiom0_pass: bool = False
    axiom3_pass: bool = False
    axiom4_pass: bool = False

    def passed(self):
        flags = [self.axiom0_pass, self.axiom3_pass, self.axiom4_pass,
                 self.axiom4_bound_ok]
        if self.axiom4_cross_ok is not None:
            flags.append(self.axiom4_cross_ok)
        return all(flags)


def check_axioms(space, universe, xi, x_pool=None, z_pool=None):
    """Sweep the axioms over a coset universe.

    Axiom (0) runs over all ordered pairs. Axioms (3) and (4) place X
    (respectively X and Z) in the given pools, defaulting to the whole
    universe; callers shrink the pools and cover the rest through the
    equivariance property.

    At xi == D the axiom-(4) coset set is compared, as a set, with the
    separating cosets of the two cone points.
    """
    _require_word_mode(space)
    universe = list(universe)
    x_pool = universe if x_pool is None else list(x_pool)
    z_pool = universe if z_pool is None else list(z_pool)
    report = BBFReport(xi_candidate=xi, universe_size=len(universe))

    a0_max, a0_wit = -1, None
    for Y in universe:
        for X in universe:
            if X == Y:
                continue
            d = space.relative_diameter(Y, space.coset_gate(Y, X))
            if d > a0_max:
                a0_max, a0_wit = d, (Y, X)
    report.axiom0_max = a0_max
    report.axiom0_witness = a0_wit
    report.axiom0_pass = a0_max < xi

    a3_max, a3_wit = -1, None
    for i, Y in enumerate(universe):
        for Z in universe[i + 1:]:
            for X in x_pool:
                if X == Y or X == Z:
                    continue
                m = min(pairwise_distance(space, Y, X, Z),
                        pairwise_distance(space, Z, X, Y))
                if m > a3_max:
                    a3_max, a3_wit = m, (X, Y, Z)
    report.axiom3_min_max = a3_max
    report.axiom3_witness = a3_wit
    report.axiom3_pass = a3_max <= xi

    counts = {}
    cross_ok = True if xi == space.D else None
    for X in x_pool:
        for Z in z_pool:
            if X == Z:
                continue
            far = {Y for Y in universe if Y != X and Y != Z
                   and pairwise_distance(space, Y, X, Z) >= xi}
            size = len(far)
            counts[size] = counts.get(size, 0) + 1
            report.axiom4_max = max(report.axiom4_max, size)
            if size > 2 * space.hat_distance(X.rep, Z.rep) + 1:
                report.axiom4_bound_ok = False
            if cross_ok:
                sep = set(space.separating_cosets(cone_vertex(X), cone_vertex(Z)))
                if far != sep:
                    cross_ok = False
    report.axiom4_counts = dict(sorted(counts.items()))
    report.axiom4_cross_ok = cross_ok
    report.axiom4_pass = True
    report.minimal_xi = max(a0_max + 1, a3_max, 1)
    return report


def distance_rows(space, universe, x_pool=None):
    """(Y, X, Z, d_Y(X,Z)) rows for the CSV table."""
    x_pool = universe if x_pool is None else x_pool
    for Y in universe:
        for X in x_pool:
            if X == Y:
                continue
            for Z in universe:
                if Z == Y:
                    continue
                yield Y, X, Z, pairwise_distance(space, Y, X, Z)


@dataclass
class KlgsReport:
    k_value: object
    rows: tuple

    def passed(self):
        return True


def klgs_diagnostic(space, window, coset_pairs, d_max):
    """Smallest K with diam(N_D(A) n B) <= K*D over the tested pairs and
    D in 1..d_max, all sets restricted to the window and measured in the
    ambient word metric. Diagnostic only: window restriction
    under-approximates true neighborhoods.
    """
    _require_word_mode(space)
    model = space.model
    window = list(window)
    members = {}

    def in_window(B):
        if B not in members:
            members[B] = [g for g in window if space.coset_contains(B, g)]
        return members[B]

    def word_dist(u, v):
        return model.ambient_word_length(~u * v)

    best = Fraction(0)
    rows = []
    for d in range(1, d_max + 1):
        worst, wit = 0, None
        for A, B in coset_pairs:
            if A == B:
                raise ConfigError("separation diagnostic needs distinct cosets")
            close = [g for g in in_window(B)
                     if any(word_dist(a, g) <= d for a in in_window(A))]
            diam = 0
            for i, u in enumerate(close):
                for v in close[i + 1:]:
                    diam = max(diam, word_dist(u, v))
            if diam > worst:
                worst, wit = diam, (A, B)
        rows.append((d, worst, wit))
        best = max(best, Fraction(worst, d))
    return KlgsReport(k_value=best, rows=tuple(rows))
