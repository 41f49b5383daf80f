"""Independent oracles used to freeze expected values.

Everything here recomputes results by a different mechanism than the
library: multiplication by repeated full-rescan normalization, balls by
closure under one-syllable products, coned-space metric data by Dijkstra
on an explicitly materialized graph, projections by reading entry points
off enumerated shortest paths, determinants by fraction Gaussian
elimination, and lattice-path counts by memoized recursion plus literal
path enumeration.

Layering note: the oracles reuse only the per-factor value arithmetic
(FactorSpec.mult and friends), which is itself pinned by direct per-kind
unit tests. Group-level and space-level mechanisms are independent.

Shortest paths between ball elements only visit syllable-prefix vertices
and cones over them, so a graph materialized on the ball of the tested
radius is metrically exact for sources and targets inside it.
"""

import heapq
from fractions import Fraction
from itertools import permutations, product

INF = float("inf")


# ---------------------------------------------------------------------------
# group arithmetic oracles


def oracle_normalize(model, syllables):
    """Normal form by rescanning until fixpoint, not by seam merging."""
    syls = [(f, v) for f, v in syllables]
    while True:
        out = []
        changed = False
        for f, v in syls:
            if out and out[-1][0] == f:
                out[-1] = (f, model.factors[f].mult(out[-1][1], v))
                changed = True
            else:
                out.append((f, v))
        trimmed = [(f, v) for f, v in out if not model.factors[f].is_identity(v)]
        if len(trimmed) != len(out):
            changed = True
        syls = trimmed
        if not changed:
            return tuple(syls)


def oracle_multiply(model, a, b):
    return oracle_normalize(model, list(a.word) + list(b.word))


def oracle_inverse_word(model, a):
    return oracle_normalize(
        model, [(f, model.factors[f].inv(v)) for f, v in reversed(a.word)])


def oracle_ball_words(model, radius, truncations):
    """Ball as a set of words, by closure under one-syllable left products."""
    truncs = model.check_truncations(truncations)
    syllables = []
    for fi, spec in enumerate(model.factors):
        for v in spec.values_within(truncs[fi]):
            syllables.append((fi, v))

    def ok(word):
        if len(word) > radius:
            return False
        return all(model.factors[f].in_truncation(v, truncs[f]) for f, v in word)

    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for s in syllables:
                child = oracle_normalize(model, [s] + list(w))
                if child not in seen and ok(child):
                    seen.add(child)
                    nxt.append(child)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# cosets


def oracle_coset_key(model, g, factor):
    """Canonical key of g*H_factor: drop a trailing syllable of that factor.

    Validated against membership equivalence classes on small windows by
    coset_classes_by_membership below.
    """
    word = g.word if hasattr(g, "word") else tuple(g)
    if word and word[-1][0] == factor:
        word = word[:-1]
    return (factor, word)


def coset_classes_by_membership(model, elements, factor):
    """Group ball elements into cosets of the factor by pairwise division."""
    classes = []
    for g in elements:
        placed = False
        for cls in classes:
            rep = cls[0]
            q = oracle_normalize(
                model, list(oracle_inverse_word(model, rep)) + list(g.word))
            if len(q) == 0 or (len(q) == 1 and q[0][0] == factor):
                cls.append(g)
                placed = True
                break
        if not placed:
            classes.append([g])
    return [frozenset(x.word for x in cls) for cls in classes]


# ---------------------------------------------------------------------------
# coned-space graph oracle

EL = "el"
CONE = "cone"


class ConedGraphOracle:
    """Explicit coned-off graph over a ball, with exact Dijkstra.

    Vertex keys: ("el", word) and ("cone", factor, rep_word). Edge
    lengths are stored in quarter units so Dijkstra runs over ints.
    """

    def __init__(self, model, radius, truncations, word_edges):
        self.model = model
        self.quarter = 1
        words = sorted(oracle_ball_words(model, radius, truncations))
        self.element_words = words
        adj = {}

        def add_edge(u, v, w):
            adj.setdefault(u, []).append((v, w))
            adj.setdefault(v, []).append((u, w))

        wordset = set(words)
        for w in words:
            ev = (EL, w)
            adj.setdefault(ev, [])
            for factor in range(len(model.factors)):
                ck = oracle_coset_key(model, w, factor)
                add_edge(ev, (CONE,) + ck, 1)
        if word_edges:
            for w in words:
                g = model.element(w)
                for fi, _name, val in model.x_generators():
                    child = oracle_normalize(model, list(w) + [(fi, val)])
                    if child in wordset and child != w:
                        add_edge((EL, w), (EL, child), 4)
        self.adj = adj
        self._dist_cache = {}

    def vertices(self):
        return list(self.adj)

    def cone_keys(self):
        return sorted(v[1:] for v in self.adj if v[0] == CONE)

    def members(self, coset_key):
        factor, rep = coset_key
        out = set()
        for v, w in self.adj[(CONE, factor, rep)]:
            if v[0] == EL:
                out.add(v[1])
        return out

    def dist_from(self, source):
        if source in self._dist_cache:
            return self._dist_cache[source]
        dist = {source: 0}
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist.get(u, INF):
                continue
            for v, w in self.adj[u]:
                nd = d + w
                if nd < dist.get(v, INF):
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        self._dist_cache[source] = dist
        return dist

    def distance(self, u, v):
        return Fraction(self.dist_from(u)[v], 4)

    def shortest_path_dag(self, source, target):
        """Predecessor lists on shortest paths from source to target."""
        dist = self.dist_from(source)
        preds = {}
        stack = [target]
        seen = set()
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            plist = []
            for u, w in self.adj[v]:
                if u in dist and dist[u] + w == dist[v]:
                    plist.append(u)
                    if v != source:
                        stack.append(u)
            preds[v] = [] if v == source else plist
        return preds

    def geodesic_count(self, source, target):
        preds = self.shortest_path_dag(source, target)
        memo = {source: 1}

        def count(v):
            if v not in memo:
                memo[v] = sum(count(u) for u in preds[v])
            return memo[v]

        return count(target)

    def geodesics(self, source, target, limit=10000):
        """All shortest paths as vertex key lists, source first."""
        preds = self.shortest_path_dag(source, target)
        out = []

        def walk(v, tail):
            if v == source:
                out.append([source] + tail)
                return
            for u in preds[v]:
                walk(u, [v] + tail)
                if len(out) > limit:
                    raise RuntimeError("geodesic enumeration blew the limit")

        walk(target, [])
        return out

    def projection(self, coset_key, x):
        """Entry points: first element vertex of each shortest x->cone path
        that lies in the coset."""
        factor, rep = coset_key
        cone = (CONE, factor, rep)
        if x == cone:
            raise ValueError("projection of a cone point onto its own coset")
        members = self.members(coset_key)
        out = set()
        for path in self.geodesics(x, cone):
            for v in path:
                if v[0] == EL and v[1] in members:
                    out.add(v[1])
                    break
        return out


def oracle_relative_distance(model, factor, mode, p_word, q_word):
    if mode == "infinity_offdiag":
        return 0 if p_word == q_word else INF
    q = oracle_normalize(model, list(oracle_inverse_word(model, model.element(p_word)))
                         + list(q_word))
    if not q:
        return 0
    if len(q) != 1 or q[0][0] != factor:
        raise ValueError("points are not in a common coset of the factor")
    return model.factors[factor].wlen(q[0][1])


def oracle_diam(model, factor, mode, words):
    words = list(words)
    best = 0
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            d = oracle_relative_distance(model, factor, mode, words[i], words[j])
            if d == INF:
                return INF
            best = max(best, d)
    return best


# ---------------------------------------------------------------------------
# exact linear algebra


def oracle_det(rows):
    """Determinant by fraction Gaussian elimination with partial pivoting."""
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] * inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


def oracle_volume(points):
    """Signed volume of the simplex on integer points, det/(n!)."""
    base = points[0]
    rows = [[c - b for c, b in zip(p, base)] for p in points[1:]]
    n = len(rows)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    return oracle_det(rows) / fact


# ---------------------------------------------------------------------------
# lattice paths


def oracle_paths_count(a, b):
    """Number of monotone lattice paths from a to b, by memoized recursion."""
    diffs = tuple(y - x for x, y in zip(a, b))
    memo = {}

    def rec(rem):
        if all(r == 0 for r in rem):
            return 1
        if rem in memo:
            return memo[rem]
        total = 0
        for i, r in enumerate(rem):
            if r != 0:
                step = 1 if r > 0 else -1
                child = rem[:i] + (r - step,) + rem[i + 1:]
                total += rec(child)
        memo[rem] = total
        return total

    return rec(diffs)


def oracle_monotone_paths(a, b):
    """All monotone lattice paths a -> b as vertex lists."""
    out = []

    def rec(cur, tail):
        if cur == b:
            out.append(tail + [cur])
            return
        for i, (c, t) in enumerate(zip(cur, b)):
            if c != t:
                step = 1 if t > c else -1
                nxt = cur[:i] + (c + step,) + cur[i + 1:]
                rec(nxt, tail + [cur])

    rec(tuple(a), [])
    return out


def oracle_edge_flow(spec, l0, l1):
    """Per-edge weights of the geodesic-spreading 1-chain, by literally
    enumerating every geodesic in the factor and accumulating
    d/(2N) * (chi_path - chi_reversed). Keys: (origin_value, signed_gen)."""
    if spec.kind == "free_abelian":
        a = tuple(l0)
        b = tuple(l1)
        paths = oracle_monotone_paths(a, b)
        d = sum(abs(x - y) for x, y in zip(a, b))
    elif spec.kind == "free":
        # unique geodesic: peel letters
        word = spec.mult(spec.inv(l0), l1)
        cur = l0
        path = [cur]
        for letter in word:
            cur = spec.mult(cur, (letter,))
            path.append(cur)
        paths = [path]
        d = len(word)
    else:
        raise ValueError("edge flow needs an infinite factor")
    n = len(paths)
    weights = {}

    def signed_gen_of(u, v):
        diff = spec.mult(spec.inv(u), v)
        for name, val in spec.signed_gens():
            if val == diff:
                return name
        raise AssertionError("path step is not a generator")

    coeff = Fraction(d, 2 * n) if d else Fraction(0)
    for path in paths:
        for u, v in zip(path, path[1:]):
            g = signed_gen_of(u, v)
            weights[(u, g)] = weights.get((u, g), Fraction(0)) + coeff
            rg = signed_gen_of(v, u)
            weights[(v, rg)] = weights.get((v, rg), Fraction(0)) - coeff
    return {k: w for k, w in weights.items() if w}


def oracle_ambient_wlen(model, word):
    return sum(model.factors[f].wlen(v) for f, v in word)


def oracle_word_distance(model, u_word, v_word):
    g = model.element(u_word)
    return oracle_ambient_wlen(
        model, oracle_multiply(model, model.element(oracle_inverse_word(model, g)),
                               model.element(v_word)))


# ---------------------------------------------------------------------------
# fixture builders
#
# Each builder recomputes the frozen values through the oracle machinery
# above and returns a JSON-ready payload; the CLI's emit-fixture command
# writes them byte-identically. Builders may use the library for model
# construction and serialization, never for the recomputed quantities,
# except where a fixture is an explicitly recorded sweep pin (noted in
# the payload's "oracle" field).


def _model(config, default):
    from qcext.models import build_model
    return build_model(config.get("model", default))


def _el_json(model, word):
    from qcext.serialize import element_to_json
    return element_to_json(model.element(word))


def _coset_json(model, key):
    factor, rep = key
    return {"factor": factor, "rep": _el_json(model, rep)}


def _frac(x):
    from qcext.serialize import fraction_to_json
    return fraction_to_json(x)


def _gate_table(graph, sources, coset_keys):
    """gates[source index][coset index] via distance reads: the members at
    cone distance minus one quarter. Asserts single-valuedness."""
    members = {ck: sorted(graph.members(ck)) for ck in coset_keys}
    table = []
    for src_word in sources:
        dist = graph.dist_from((EL, src_word))
        graph._dist_cache.clear()
        row = []
        for ck in coset_keys:
            cone = (CONE,) + ck
            target = dist[cone] - 1
            hits = [m for m in members[ck] if dist.get((EL, m)) == target]
            if len(hits) != 1:
                raise AssertionError("projection is not single-valued at %r/%r"
                                     % (ck, src_word))
            row.append(hits[0])
        table.append(row)
    return table


def _fixture_group_examples(config):
    from qcext.models import build_model
    z_z = build_model("z_z")
    c2_c2 = build_model("c2_c2")

    merged = oracle_multiply(z_z, z_z.from_word("a b"), z_z.from_word("b^-1 a^2"))

    # BFS word length on the cyclic graph of Z/5 with generator 1
    adj = {r: ((r + 1) % 5, (r - 1) % 5) for r in range(5)}
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for r in frontier:
            for s in adj[r]:
                if s not in dist:
                    dist[s] = dist[r] + 1
                    nxt.append(s)
        frontier = nxt

    return {
        "fixture": "group-examples",
        "oracle": "rescan normalization; closure ball enumeration; cyclic BFS",
        "entries": {
            "free_product_merge": _el_json(z_z, merged),
            "ball_z_z_r1_t2_count": 1 + 2 * 2 + 2 * 2,
            "ball_z_z_r1_t2_enumerated": len(oracle_ball_words(z_z, 1, {0: 2, 1: 2})),
            "ball_c2_c2_r3_count": len(oracle_ball_words(c2_c2, 3, None)),
            "wlen_z5_residue3": dist[3],
        },
    }


def _fixture_ball_distance(config):
    model = _model(config, "z_z")
    radius = config.get("radius", 4)
    truncations = {int(k): v for k, v in config.get(
        "truncations", {0: 4, 1: 4}).items()}
    graph = ConedGraphOracle(model, radius, truncations, word_edges=False)
    dist = graph.dist_from((EL, ()))
    rows = []
    for w in graph.element_words:
        rows.append([_el_json(model, w), _frac(Fraction(dist[(EL, w)], 4))])
    rows.sort(key=lambda r: (len(r[0]), r[0]))
    return {
        "fixture": "ball-distance",
        "oracle": "dijkstra on the materialized coned ball",
        "model": model.name,
        "radius": radius,
        "truncations": {str(k): v for k, v in truncations.items()},
        "count": len(rows),
        "rows": rows,
    }


def _vertex_json(model, key):
    if key[0] == EL:
        return {"element": _el_json(model, key[1])}
    return {"cone": _coset_json(model, key[1:])}


def _fixture_coned_examples(config):
    model = _model(config, "z_z")
    graph = ConedGraphOracle(model, 5, {0: 2, 1: 2}, word_edges=False)
    wide = ConedGraphOracle(model, 1, {0: 5, 1: 5}, word_edges=False)

    def el(text):
        return model.from_word(text).word

    def paths_json(g, u, v):
        return [[_vertex_json(model, k) for k in p] for p in g.geodesics(u, v)]

    abab = el("a b a b")
    a2binva = el("a^2 b^-1 a")
    ident = ()

    # separating cosets of (1, abab): interior cones of the unique geodesic,
    # kept when the two entry points differ, in walk order
    paths = graph.geodesics((EL, ident), (EL, abab))
    assert len(paths) == 1
    separating = []
    for key in paths[0][1:-1]:
        if key[0] != CONE:
            continue
        ck = key[1:]
        gates = {next(iter(graph.projection(ck, (EL, w)))) for w in (ident, abab)}
        if len(gates) > 1:
            separating.append(ck)

    entries = {
        "dhat_1_a2binva": _frac(graph.distance((EL, ident), (EL, a2binva))),
        "dhat_coneA_cone_abA": _frac(graph.distance(
            (CONE, 0, ident), (CONE, 0, el("a b")))),
        "cone_pair_witness": paths_json(graph, (CONE, 0, ident),
                                        (CONE, 0, el("a b")))[0],
        "geodesics_1_ab": paths_json(graph, (EL, ident), (EL, el("a b"))),
        "geodesics_1_ab_length": _frac(graph.distance((EL, ident), (EL, el("a b")))),
        "geodesics_1_a5": paths_json(wide, (EL, ident), (EL, el("a^5"))),
        "geodesics_1_a5_length": _frac(wide.distance((EL, ident), (EL, el("a^5")))),
        "proj_A_abab": sorted(_el_json(model, w)
                              for w in graph.projection((0, ident), (EL, abab))),
        "proj_abA_1": sorted(_el_json(model, w)
                             for w in graph.projection((0, el("a b")), (EL, ident))),
        "separating_1_abab": [_coset_json(model, ck) for ck in separating],
        "gate_A_B": sorted(_el_json(model, w)
                           for w in graph.projection((0, ident), (CONE, 1, ident))),
        "gate_A_abA": sorted(_el_json(model, w)
                             for w in graph.projection((0, ident),
                                                       (CONE, 0, el("a b")))),
    }
    return {
        "fixture": "coned-examples",
        "oracle": "dijkstra with predecessor enumeration on the coned ball",
        "model": model.name,
        "entries": entries,
    }


def _fixture_natmost(config):
    """Exhaustive scan: for every based window triple, the number of cosets
    whose projected triple has three pairwise distinct entry points. With
    single-valued projections (asserted) that count equals the number of
    cosets carrying a trace that survives alternation."""
    model = _model(config, "z_z")
    radius = config.get("radius", 3)
    trunc = {int(k): v for k, v in config.get("truncations", {0: 2, 1: 2}).items()}
    margin_trunc = {k: 2 * v for k, v in trunc.items()}
    graph = ConedGraphOracle(model, radius + 1, margin_trunc, word_edges=False)

    sources = sorted(oracle_ball_words(model, radius, trunc))
    assert () in sources
    cones = graph.cone_keys()
    gate = _gate_table(graph, sources, cones)

    varying = [ci for ci in range(len(cones))
               if any(gate[si][ci] != gate[0][ci] for si in range(len(sources)))]
    base = sources.index(())

    nsrc = len(sources)
    diff = {}
    for i in range(nsrc):
        gi = gate[i]
        for j in range(i + 1, nsrc):
            gj = gate[j]
            mask = 0
            bit = 1
            for ci in varying:
                if gi[ci] != gj[ci]:
                    mask |= bit
                bit <<= 1
            diff[(i, j)] = mask

    def dmask(i, j):
        return diff[(i, j) if i < j else (j, i)]

    best = -1
    witness = None
    for x in range(nsrc):
        if x == base:
            continue
        bx = dmask(base, x)
        for y in range(nsrc):
            if y == base or y == x:
                continue
            count = (bx & dmask(base, y) & dmask(x, y)).bit_count()
            if count > best:
                best = count
                witness = (sources[x], sources[y])
    return {
        "fixture": "natmost-max",
        "oracle": "exhaustive scan over graph-projection tables",
        "model": model.name,
        "mode": "infinity_offdiag",
        "separation": 1,
        "radius": radius,
        "truncations": {str(k): v for k, v in trunc.items()},
        "bound": 6,
        "max": best,
        "witness": [_el_json(model, ()),
                    _el_json(model, witness[0]), _el_json(model, witness[1])],
        "triples_scanned": (nsrc - 1) * (nsrc - 2),
        "cosets_scanned": len(cones),
        "cosets_with_varying_gates": len(varying),
    }


def _fixture_k_volume(config):
    """Orbit enumeration for K of the volume family in word mode, D = 1:
    based small triples have their non-base entries in the closed l1 ball
    of radius 2D-1 = 1 and pairwise l1 distances below 2D."""
    reach = 1
    bound = 2
    pool = [(0, 0)]
    for k in (1, -1):
        pool.append((k, 0))
        pool.append((0, k))

    def l1(u, v):
        return abs(u[0] - v[0]) + abs(u[1] - v[1])

    best = Fraction(0)
    witness = None
    scanned = 0
    for u in pool:
        for v in pool:
            if l1(u, v) >= bound or l1((0, 0), u) >= bound or l1((0, 0), v) >= bound:
                continue
            scanned += 1
            val = abs(oracle_volume([(0, 0), u, v]))
            if val > best:
                best, witness = val, ((0, 0), u, v)
    return {
        "fixture": "k-volume",
        "oracle": "orbit enumeration with gaussian-elimination determinants",
        "model": "z2_z",
        "mode": "word_metric",
        "separation": 1,
        "factor": 0,
        "degree": 2,
        "pool_radius": reach,
        "pool_size": len(pool),
        "k": _frac(best),
        "witness": list(witness) if witness else None,
        "tuples_scanned": scanned,
    }


def _fixture_edge_flow(config):
    from qcext.factors import free, free_abelian

    za = free_abelian(1, ["a"])
    za_weights = oracle_edge_flow(za, (0,), (3,))
    fa = free(1, ["a"])
    fa_weights = oracle_edge_flow(fa, (), (1, 1, 1))
    z2 = free_abelian(2, ["x", "y"])
    z2_weights = oracle_edge_flow(z2, (0, 0), (1, 1))

    def rows(weights):
        out = [[list(origin) if isinstance(origin, tuple) else origin, gen, _frac(w)]
               for (origin, gen), w in weights.items()]
        out.sort(key=lambda r: (str(r[0]), r[1]))
        return out

    return {
        "fixture": "edge-flow-examples",
        "oracle": "literal geodesic enumeration and lattice-path recursion",
        "entries": {
            "za_0_to_3": rows(za_weights),
            "free_a_1_to_a3": rows(fa_weights),
            "z2_00_to_11": rows(z2_weights),
            "z2_00_to_11_path_count": oracle_paths_count((0, 0), (1, 1)),
            "za_0_to_3_path_count": oracle_paths_count((0,), (3,)),
        },
    }


def _oracle_theta_volume(model, graph, words):
    """Independent extension value for the volume family: scan every coset
    of the graph, keep those whose entry points for the tuple are pairwise
    distinct, and sum the volumes of the projected simplices read off in
    lattice coordinates of the rank-2 factor."""
    total = Fraction(0)
    used = []
    for ck in graph.cone_keys():
        factor, rep = ck
        if factor != 0:
            gates = [next(iter(graph.projection(ck, (EL, w)))) for w in words]
            if len(set(gates)) == len(gates):
                raise AssertionError("unexpected nondegenerate trace on a "
                                     "factor without a volume member")
            continue
        gates = [next(iter(graph.projection(ck, (EL, w)))) for w in words]
        if len(set(gates)) != len(gates):
            continue
        points = []
        for gw in gates:
            tail = gw[len(rep):]
            if not tail:
                points.append((0, 0))
            else:
                assert len(tail) == 1 and tail[0][0] == 0
                points.append(tuple(tail[0][1]))
        total += oracle_volume(points)
        used.append(ck)
    return total, used


def _fixture_operator_examples(config):
    from qcext.models import build_model
    z2_z = build_model("z2_z")
    z_z = build_model("z_z")

    lattice_graph = ConedGraphOracle(z2_z, 2, {0: 4, 1: 2}, word_edges=False)
    lattice_words = [(), ((0, (3, 0)),), ((0, (0, 4)),)]
    theta_lattice, used_lat = _oracle_theta_volume(z2_z, lattice_graph, lattice_words)

    mixed_graph = ConedGraphOracle(z2_z, 2, {0: 1, 1: 1}, word_edges=False)
    mixed_words = [((1, (1,)),), ((0, (1, 0)),), ((0, (0, 1)),)]
    theta_mixed, used_mix = _oracle_theta_volume(z2_z, mixed_graph, mixed_words)

    zz_graph = ConedGraphOracle(z_z, 4, {0: 3, 1: 3}, word_edges=False)
    y_word = z_z.from_word("a^3 b a").word
    recovered = sorted(zz_graph.projection((0, ()), (EL, y_word)))

    gate_b = zz_graph.projection((0, ()), (CONE, 1, ()))
    gate_a3b = zz_graph.projection((0, ()), (CONE, 1, z_z.from_word("a^3").word))
    pts = sorted(gate_b | gate_a3b)
    gate_dist = oracle_relative_distance(z_z, 0, "word_metric", pts[0], pts[-1]) \
        if len(pts) > 1 else 0

    m, z_pt = 4, (7, 5)
    probes = [(m, 0), (2 * m, 0), (m, m)]
    floor_val = oracle_volume([probes[0], z_pt, probes[2]])

    return {
        "fixture": "operator-examples",
        "oracle": "graph projections, determinants, lattice probes",
        "entries": {
            "theta_volume_lattice_triple": _frac(theta_lattice),
            "theta_volume_lattice_cosets_used": len(used_lat),
            "theta_volume_mixed_triple": _frac(theta_mixed),
            "theta_volume_mixed_cosets_used": len(used_mix),
            "volume_003004": _frac(oracle_volume([(0, 0), (3, 0), (0, 4)])),
            "recover_general_a3ba": [_el_json(z_z, w) for w in recovered],
            "bbf_gate_distance_B_a3B": gate_dist,
            "bbf_gates": [sorted(_el_json(z_z, w) for w in gate_b),
                          sorted(_el_json(z_z, w) for w in gate_a3b)],
            "floor_probe_value_m4_z75": _frac(floor_val),
            "small_word_d2_diameter": 2,
        },
    }


def _fixture_minimal_xi(config):
    """Independent axiom sweep: gates between cosets via Dijkstra from cone
    vertices, distances and diameters in the factor word metric."""
    model = _model(config, "z_z")
    radius = config.get("radius", 3)
    trunc = {int(k): v for k, v in config.get("truncations", {0: 2, 1: 2}).items()}
    pool_radius = config.get("pool_radius", 1)
    margin_trunc = {k: 2 * v for k, v in trunc.items()}
    graph = ConedGraphOracle(model, radius + 1, margin_trunc, word_edges=False)

    universe = sorted({oracle_coset_key(model, w, f)
                       for w in oracle_ball_words(model, radius, trunc)
                       for f in range(len(model.factors))})
    pool = sorted({oracle_coset_key(model, w, f)
                   for w in oracle_ball_words(model, pool_radius, trunc)
                   for f in range(len(model.factors))})
    members = {ck: sorted(graph.members(ck)) for ck in universe}

    # gates[X][Y] = entry points of the cone of X into Y, one Dijkstra per X
    gates = {}
    for X in universe:
        dist = graph.dist_from((CONE,) + X)
        row = {}
        for Y in universe:
            if Y == X:
                continue
            target = dist[(CONE,) + Y] - 1
            row[Y] = frozenset(m for m in members[Y]
                               if dist.get((EL, m)) == target)
        gates[X] = row
        graph._dist_cache.clear()

    def diam(factor, points):
        return oracle_diam(model, factor, "word_metric", points)

    a0_max, a0_wit = -1, None
    for Y in universe:
        for X in universe:
            if X == Y:
                continue
            d = diam(Y[0], gates[X][Y])
            if d > a0_max:
                a0_max, a0_wit = d, (Y, X)

    def d_pair(Y, X, Z):
        pts = set(gates[X][Y])
        if Z != X:
            pts |= gates[Z][Y]
        return diam(Y[0], pts)

    a3_max, a3_wit = -1, None
    for i, Y in enumerate(universe):
        for Z in universe[i + 1:]:
            for X in pool:
                if X == Y or X == Z:
                    continue
                m = min(d_pair(Y, X, Z), d_pair(Z, X, Y))
                if m > a3_max:
                    a3_max, a3_wit = m, (X, Y, Z)

    xi = 1  # the separation constant; the cross-check below runs at xi == D
    counts = {}
    a4_max = 0
    bound_ok = True
    cross_ok = True
    for X in pool:
        for Z in pool:
            if X == Z:
                continue
            far = {Y for Y in universe if Y not in (X, Z)
                   and d_pair(Y, X, Z) >= xi}
            size = len(far)
            counts[size] = counts.get(size, 0) + 1
            a4_max = max(a4_max, size)
            dhat = graph.distance((EL, X[1]), (EL, Z[1]))
            if size > 2 * dhat + 1:
                bound_ok = False
            paths = graph.geodesics((CONE,) + X, (CONE,) + Z)
            if len(paths) != 1:
                raise AssertionError("expected a unique geodesic between cones")
            walk = []
            for key in paths[0][1:-1]:
                if key[0] != CONE:
                    continue
                Y = key[1:]
                if Y in (X, Z) or Y not in gates[X]:
                    continue
                if diam(Y[0], set(gates[X][Y]) | set(gates[Z][Y])) >= xi:
                    walk.append(Y)
            if far != set(walk):
                cross_ok = False

    pair = ((0, ()), (0, ((1, (1,)),)))
    d_max = config.get("klgs_d_max", 2)
    window_words = sorted(oracle_ball_words(model, radius, trunc))

    def coset_members_window(ck):
        out = []
        for w in window_words:
            if oracle_coset_key(model, w, ck[0]) == ck:
                out.append(w)
        return out

    mem_a = coset_members_window(pair[0])
    mem_b = coset_members_window(pair[1])
    klgs_rows = []
    klgs_k = Fraction(0)
    for d in range(1, d_max + 1):
        close = [g for g in mem_b
                 if any(oracle_word_distance(model, a, g) <= d for a in mem_a)]
        worst = 0
        for i, u in enumerate(close):
            for v in close[i + 1:]:
                worst = max(worst, oracle_word_distance(model, u, v))
        klgs_rows.append([d, worst])
        klgs_k = max(klgs_k, Fraction(worst, d))

    return {
        "fixture": "minimal-xi",
        "oracle": "dijkstra gates from cone vertices; word-metric diameters",
        "model": model.name,
        "mode": "word_metric",
        "separation": 1,
        "radius": radius,
        "truncations": {str(k): v for k, v in trunc.items()},
        "pool_radius": pool_radius,
        "universe_size": len(universe),
        "pool_size": len(pool),
        "axiom0_max": a0_max,
        "axiom3_min_max": a3_max,
        "axiom3_witness": [_coset_json(model, k) for k in a3_wit],
        "axiom4_counts": {str(k): v for k, v in sorted(counts.items())},
        "axiom4_max": a4_max,
        "axiom4_bound_ok": bound_ok,
        "axiom4_cross_ok": cross_ok,
        "minimal_xi": max(a0_max + 1, a3_max, 1),
        "klgs": {"pair": [_coset_json(model, k) for k in pair],
                 "d_max": d_max, "k": _frac(klgs_k), "rows": klgs_rows},
    }


_FIXTURES = {
    "group-examples": _fixture_group_examples,
    "ball-distance": _fixture_ball_distance,
    "coned-examples": _fixture_coned_examples,
    "natmost-max": _fixture_natmost,
    "k-volume": _fixture_k_volume,
    "edge-flow-examples": _fixture_edge_flow,
    "operator-examples": _fixture_operator_examples,
    "minimal-xi": _fixture_minimal_xi,
}


def build_fixture(which, config):
    from qcext.factors import ConfigError
    if which not in _FIXTURES:
        raise ConfigError("unknown fixture %r; known: %s"
                          % (which, ", ".join(sorted(_FIXTURES))))
    return _FIXTURES[which](config)
