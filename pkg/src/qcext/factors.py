"""Base factor arithmetic for free products.

Each factor of a product model is one of four kinds:

* ``free_abelian`` of rank d: values are length-d tuples of ints,
* ``cyclic`` of order k: values are residues in [0, k),
* ``free`` of rank r: values are reduced tuples of signed generator
  indices (1-based, negative = inverse),
* ``finite_table``: values are indices into an explicit multiplication
  table.

Factor values equal to the identity never appear inside a syllable of a
product element; callers rely on ``is_identity`` to enforce that. All
word lengths are taken with respect to the declared generators together
with their inverses.
"""

from dataclasses import dataclass
from itertools import product


class ConfigError(ValueError):
    """Raised for invalid model or run configuration."""


FREE_ABELIAN = "free_abelian"
CYCLIC = "cyclic"
FREE = "free"
FINITE_TABLE = "finite_table"

_KINDS = (FREE_ABELIAN, CYCLIC, FREE, FINITE_TABLE)


@dataclass(frozen=True)
class FactorSpec:
    """One base factor: kind, kind parameters, and named generators.

    ``generators`` holds the generator names; for finite_table factors
    ``gen_values`` pins which table indices the names denote, for cyclic
    factors which residues. For free_abelian and free factors the i-th
    name denotes the i-th basis vector / letter.
    """

    kind: str
    rank: int = 0
    order: int = 0
    table: tuple = ()
    generators: tuple = ()
    gen_values: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigError("unknown factor kind %r" % (self.kind,))
        if self.kind == FREE_ABELIAN:
            if self.rank < 1:
                raise ConfigError("free_abelian factor needs rank >= 1")
            if len(self.generators) != self.rank:
                raise ConfigError("free_abelian factor needs one generator name per rank")
        elif self.kind == FREE:
            if self.rank < 1:
                raise ConfigError("free factor needs rank >= 1")
            if len(self.generators) != self.rank:
                raise ConfigError("free factor needs one generator name per rank")
        elif self.kind == CYCLIC:
            if self.order < 2:
                raise ConfigError("cyclic factor needs order >= 2")
            if not self.generators:
                raise ConfigError("cyclic factor needs at least one generator name")
            if not self.gen_values:
                if len(self.generators) != 1:
                    raise ConfigError("cyclic factor with several generators needs gen_values")
                object.__setattr__(self, "gen_values", (1,))
            elif len(self.gen_values) != len(self.generators):
                raise ConfigError("gen_values must match generators")
            for v in self.gen_values:
                if not 0 < v < self.order:
                    raise ConfigError("cyclic generator residue out of range")
        else:
            self._check_table()
        object.__setattr__(self, "_wlen", None)

    # -- finite table validation -------------------------------------

    def _check_table(self):
        t = self.table
        m = len(t)
        if m < 2:
            raise ConfigError("finite_table factor needs order >= 2")
        for row in t:
            if len(row) != m or any(not 0 <= x < m for x in row):
                raise ConfigError("multiplication table is not square over its indices")
        # identity: the spec of a group table pins index 0 as identity
        if any(t[0][x] != x or t[x][0] != x for x in range(m)):
            raise ConfigError("table index 0 must be the identity")
        inv = [None] * m
        for x in range(m):
            for y in range(m):
                if t[x][y] == 0:
                    inv[x] = y
            if inv[x] is None:
                raise ConfigError("table element %d has no inverse" % x)
        for x in range(m):
            for y in range(m):
                for z in range(m):
                    if t[t[x][y]][z] != t[x][t[y][z]]:
                        raise ConfigError("table is not associative at (%d,%d,%d)" % (x, y, z))
        if not self.generators:
            raise ConfigError("finite_table factor needs generator names")
        if len(self.gen_values) != len(self.generators):
            raise ConfigError("finite_table factor needs gen_values matching generators")
        for v in self.gen_values:
            if not 0 < v < m:
                raise ConfigError("table generator index out of range")
        object.__setattr__(self, "_inv_table", tuple(inv))

    # -- identity ------------------------------------------------------

    def identity(self):
        if self.kind == FREE_ABELIAN:
            return (0,) * self.rank
        if self.kind == FREE:
            return ()
        return 0

    def is_identity(self, v):
        if self.kind == FREE_ABELIAN:
            return all(c == 0 for c in v)
        if self.kind == FREE:
            return len(v) == 0
        return v == 0

    def check_value(self, v):
        """Validate a raw value, raising ConfigError when malformed."""
        if self.kind == FREE_ABELIAN:
            if not (isinstance(v, tuple) and len(v) == self.rank
                    and all(isinstance(c, int) for c in v)):
                raise ConfigError("bad free_abelian value %r" % (v,))
        elif self.kind == FREE:
            if not isinstance(v, tuple):
                raise ConfigError("bad free value %r" % (v,))
            for i, c in enumerate(v):
                if not isinstance(c, int) or c == 0 or abs(c) > self.rank:
                    raise ConfigError("bad free letter %r" % (c,))
                if i and v[i - 1] == -c:
                    raise ConfigError("free value %r is not reduced" % (v,))
        elif self.kind == CYCLIC:
            if not (isinstance(v, int) and 0 <= v < self.order):
                raise ConfigError("bad cyclic value %r" % (v,))
        else:
            if not (isinstance(v, int) and 0 <= v < len(self.table)):
                raise ConfigError("bad table value %r" % (v,))
        return v

    # -- multiplication ------------------------------------------------

    def mult(self, u, v):
        if self.kind == FREE_ABELIAN:
            return tuple(a + b for a, b in zip(u, v))
        if self.kind == CYCLIC:
            return (u + v) % self.order
        if self.kind == FINITE_TABLE:
            return self.table[u][v]
        # free: concatenate and cancel at the seam
        u = list(u)
        for c in v:
            if u and u[-1] == -c:
                u.pop()
            else:
                u.append(c)
        return tuple(u)

    def inv(self, v):
        if self.kind == FREE_ABELIAN:
            return tuple(-c for c in v)
        if self.kind == CYCLIC:
            return (-v) % self.order
        if self.kind == FINITE_TABLE:
            return self._inv_table[v]
        return tuple(-c for c in reversed(v))

    # -- word metric ----------------------------------------------------

    def _bfs_lengths(self):
        """Word lengths for the finite kinds, computed once by BFS."""
        if self._wlen is not None:
            return self._wlen
        if self.kind == CYCLIC:
            size = self.order
            steps = []
            for g in self.gen_values:
                steps += [g, self.order - g]
        else:
            size = len(self.table)
            steps = []
            for g in self.gen_values:
                steps += [g, self._inv_table[g]]
        dist = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in steps:
                    y = self.mult(x, s)
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        if len(dist) != size:
            raise ConfigError("declared generators do not generate the factor")
        object.__setattr__(self, "_wlen", dist)
        return dist

    def wlen(self, v):
        if self.kind == FREE_ABELIAN:
            return sum(abs(c) for c in v)
        if self.kind == FREE:
            return len(v)
        return self._bfs_lengths()[v]

    def is_finite(self):
        return self.kind in (CYCLIC, FINITE_TABLE)

    # -- enumeration ------------------------------------------------------

    def values_within(self, truncation):
        """All non-identity values in the truncation window, sorted.

        Truncation bounds the sup-norm of exponent vectors (free_abelian)
        or the word length (free); finite kinds ignore it and enumerate
        everything.
        """
        if self.kind == FREE_ABELIAN:
            if truncation is None:
                raise ConfigError("free_abelian factor needs a truncation")
            rng = range(-truncation, truncation + 1)
            out = [v for v in product(rng, repeat=self.rank) if not self.is_identity(v)]
            return sorted(out)
        if self.kind == FREE:
            if truncation is None:
                raise ConfigError("free factor needs a truncation")
            out = []
            words = [()]
            for _ in range(truncation):
                words = [w + (c,) for w in words
                         for c in range(-self.rank, self.rank + 1)
                         if c != 0 and not (w and w[-1] == -c)]
                out += words
            return sorted(out)
        if self.kind == CYCLIC:
            return list(range(1, self.order))
        return list(range(1, len(self.table)))

    def in_truncation(self, v, truncation):
        if self.kind == FREE_ABELIAN:
            return truncation is None or all(abs(c) <= truncation for c in v)
        if self.kind == FREE:
            return truncation is None or len(v) <= truncation
        return True

    # -- generator steps (for graph edges and geodesic walks) -----------

    def signed_gens(self):
        """(name, value) pairs for each declared generator and its inverse."""
        out = []
        if self.kind == FREE_ABELIAN:
            for i, name in enumerate(self.generators):
                e = tuple(1 if j == i else 0 for j in range(self.rank))
                out.append((name, e))
                out.append((name + "^-1", self.inv(e)))
        elif self.kind == FREE:
            for i, name in enumerate(self.generators):
                out.append((name, (i + 1,)))
                out.append((name + "^-1", (-(i + 1),)))
        else:
            for name, v in zip(self.generators, self.gen_values):
                out.append((name, v))
                out.append((name + "^-1", self.inv(v)))
        return out

    # -- serialization ----------------------------------------------------

    def value_to_json(self, v):
        if self.kind == FREE_ABELIAN:
            return list(v)
        if self.kind == FREE:
            parts = []
            for c in v:
                name = self.generators[abs(c) - 1]
                parts.append(name if c > 0 else name + "^-1")
            return " ".join(parts)
        return v

    def value_from_json(self, data):
        if self.kind == FREE_ABELIAN:
            return self.check_value(tuple(data))
        if self.kind == FREE:
            index = {name: i + 1 for i, name in enumerate(self.generators)}
            letters = []
            for tok in data.split():
                if tok.endswith("^-1"):
                    letters.append(-index[tok[:-3]])
                else:
                    letters.append(index[tok])
            return self.check_value(tuple(letters))
        return self.check_value(data)

    def sort_key(self, v):
        return v

    def value_str(self, v):
        """Compact human-readable form, used only in reprs and witnesses."""
        if self.kind == FREE_ABELIAN:
            parts = []
            for name, c in zip(self.generators, v):
                if c == 1:
                    parts.append(name)
                elif c:
                    parts.append("%s^%d" % (name, c))
            return "*".join(parts) or "1"
        if self.kind == FREE:
            parts = []
            for c in v:
                name = self.generators[abs(c) - 1]
                parts.append(name if c > 0 else name + "^-1")
            return "*".join(parts) or "1"
        if self.kind == CYCLIC and self.gen_values == (1,):
            name = self.generators[0]
            return name if v == 1 else "%s^%d" % (name, v)
        if v in self.gen_values:
            return self.generators[self.gen_values.index(v)]
        return "%s#%d" % (self.generators[0], v)

    def describe(self):
        if self.kind == FREE_ABELIAN:
            return "%s(rank=%d)" % (self.kind, self.rank)
        if self.kind == FREE:
            return "%s(rank=%d)" % (self.kind, self.rank)
        if self.kind == CYCLIC:
            return "%s(order=%d)" % (self.kind, self.order)
        return "%s(order=%d)" % (self.kind, len(self.table))


def free_abelian(rank, generators):
    return FactorSpec(kind=FREE_ABELIAN, rank=rank, generators=tuple(generators))


def cyclic(order, generators, gen_values=()):
    return FactorSpec(kind=CYCLIC, order=order, generators=tuple(generators),
                      gen_values=tuple(gen_values))


def free(rank, generators):
    return FactorSpec(kind=FREE, rank=rank, generators=tuple(generators))


def finite_table(table, generators, gen_values):
    return FactorSpec(kind=FINITE_TABLE, table=tuple(tuple(r) for r in table),
                      generators=tuple(generators), gen_values=tuple(gen_values))
