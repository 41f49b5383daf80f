"""Free products of base factors in syllable normal form.

An element is a tuple of syllables ``(factor_index, value)`` where
adjacent syllables have distinct factor indices and no value is the
identity of its factor. The empty tuple is the identity. Normal form is
unique, so equality and hashing are structural.
"""

from .factors import FactorSpec, ConfigError


class ModelMismatchError(ValueError):
    """Raised when elements of different models are combined."""


class Syllable(tuple):
    """A (factor_index, value) pair; plain tuples are accepted everywhere."""

    __slots__ = ()

    def __new__(cls, factor, value):
        return tuple.__new__(cls, (factor, value))

    @property
    def factor(self):
        return self[0]

    @property
    def value(self):
        return self[1]


class GroupElement:
    __slots__ = ("model", "word", "_hash")

    def __init__(self, model, word):
        self.model = model
        self.word = word
        self._hash = hash(word)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.word == other.word and (
            self.model is other.model or self.model.signature == other.model.signature)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return self._hash

    def __mul__(self, other):
        return self.model.multiply(self, other)

    def __invert__(self):
        return self.model.inverse(self)

    def __pow__(self, n):
        if n < 0:
            return self.model.inverse(self) ** (-n)
        out = self.model.identity
        for _ in range(n):
            out = self.model.multiply(out, self)
        return out

    def syllable_count(self):
        return len(self.word)

    def is_identity(self):
        return not self.word

    def in_factor(self, factor):
        """True when the element lies in the given base factor."""
        w = self.word
        return not w or (len(w) == 1 and w[0][0] == factor)

    def factor_value(self, factor):
        """The factor value of an element of that factor."""
        if not self.word:
            return self.model.factors[factor].identity()
        if len(self.word) == 1 and self.word[0][0] == factor:
            return self.word[0][1]
        raise ValueError("element %r does not lie in factor %d" % (self, factor))

    def sort_key(self):
        return (len(self.word), self.word)

    def __repr__(self):
        if not self.word:
            return "1"
        return " ".join(self.model.factors[f].value_str(v) for f, v in self.word)


class GroupModel:
    """A free product of base factors with optional relative generators.

    relative_generator_mode is "none" (no extra edges in the coned
    space) or "factor_generators" (the union of the declared factor
    generators acts as the finite relative generating set).
    """

    def __init__(self, factors, relative_generator_mode="none", name=""):
        factors = tuple(factors)
        if len(factors) < 2:
            raise ConfigError("a product model needs at least two factors")
        for f in factors:
            if not isinstance(f, FactorSpec):
                raise ConfigError("factors must be FactorSpec instances")
        if relative_generator_mode not in ("none", "factor_generators"):
            raise ConfigError("unknown relative_generator_mode %r" % (relative_generator_mode,))
        names = [n for f in factors for n in f.generators]
        if len(set(names)) != len(names):
            raise ConfigError("generator names must be globally unique")
        self.factors = factors
        self.relative_generator_mode = relative_generator_mode
        self.name = name
        self.signature = (relative_generator_mode, factors)
        self.identity = GroupElement(self, ())
        # product memo; multiply is pure and long sweeps repeat the same
        # small products constantly. Bounded, cleared wholesale when full.
        self._mul_cache = {}
        self._mul_cache_cap = 1 << 17

    # -- constructors ----------------------------------------------------

    def syllable(self, factor, value):
        spec = self.factors[factor]
        spec.check_value(value)
        if spec.is_identity(value):
            return self.identity
        return GroupElement(self, ((factor, value),))

    def element(self, word):
        """Build an element from explicit syllables, validating normal form."""
        word = tuple((f, v) for f, v in word)
        prev = None
        for f, v in word:
            if not 0 <= f < len(self.factors):
                raise ConfigError("factor index %r out of range" % (f,))
            self.factors[f].check_value(v)
            if self.factors[f].is_identity(v):
                raise ConfigError("identity value inside a syllable word")
            if prev == f:
                raise ConfigError("adjacent syllables share factor %d" % f)
            prev = f
        return GroupElement(self, word)

    def from_word(self, text):
        """Parse a whitespace-separated word in the declared generators.

        Tokens are generator names with an optional ^<int> exponent, e.g.
        "a b^-1 a^3". Convenience for tests and CLI arguments.
        """
        lookup = {}
        for fi, spec in enumerate(self.factors):
            for name, val in spec.signed_gens():
                if name.endswith("^-1"):
                    continue
                lookup[name] = (fi, val)
        out = self.identity
        for tok in text.split():
            if "^" in tok:
                name, _, exp = tok.partition("^")
                exp = int(exp)
            else:
                name, exp = tok, 1
            if name not in lookup:
                raise ConfigError("unknown generator %r" % name)
            fi, val = lookup[name]
            out = out * (self.syllable(fi, val) ** exp)
        return out

    # -- arithmetic --------------------------------------------------------

    def check_same_model(self, other_element):
        if other_element.model is not self and other_element.model.signature != self.signature:
            raise ModelMismatchError("elements belong to different models")

    def multiply(self, a, b):
        self.check_same_model(a)
        self.check_same_model(b)
        wa, wb = a.word, b.word
        if not wb:
            return a
        if not wa:
            return b
        key = (wa, wb)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        factors = self.factors
        out = list(wa)
        for syl in wb:
            if out and out[-1][0] == syl[0]:
                f = syl[0]
                spec = factors[f]
                merged = spec.mult(out[-1][1], syl[1])
                out.pop()
                if not spec.is_identity(merged):
                    out.append((f, merged))
            else:
                out.append(syl)
        product = GroupElement(self, tuple(out))
        if len(self._mul_cache) >= self._mul_cache_cap:
            self._mul_cache.clear()
        self._mul_cache[key] = product
        return product

    def inverse(self, a):
        self.check_same_model(a)
        if not a.word:
            return a
        factors = self.factors
        word = tuple((f, factors[f].inv(v)) for f, v in reversed(a.word))
        return GroupElement(self, word)

    # -- word metric inside one factor --------------------------------------

    def word_length(self, h, factor):
        """Word length of a factor element wrt the declared generators."""
        self.check_same_model(h)
        return self.factors[factor].wlen(h.factor_value(factor))

    def ambient_word_length(self, g):
        """Sum of the syllable word lengths; the word metric of the product."""
        self.check_same_model(g)
        return sum(self.factors[f].wlen(v) for f, v in g.word)

    # -- enumeration ---------------------------------------------------------

    def check_truncations(self, truncations):
        if truncations is None:
            truncations = {}
        truncs = []
        for fi, spec in enumerate(self.factors):
            t = truncations.get(fi)
            if t is None and not spec.is_finite():
                raise ConfigError("factor %d (%s) needs a truncation" % (fi, spec.describe()))
            if t is not None and (not isinstance(t, int) or t < 1):
                raise ConfigError("truncation for factor %d must be a positive int" % fi)
            truncs.append(t)
        return truncs

    def enumerate_ball(self, radius, truncations):
        """All elements with at most `radius` syllables, each value inside
        its factor truncation, sorted by (syllable count, word)."""
        if radius < 0:
            raise ConfigError("radius must be >= 0")
        truncs = self.check_truncations(truncations)
        vals = [spec.values_within(t) for spec, t in zip(self.factors, truncs)]
        out = [()]
        layer = [((), -1)]
        for _ in range(radius):
            nxt = []
            for word, last in layer:
                for fi in range(len(self.factors)):
                    if fi == last:
                        continue
                    for v in vals[fi]:
                        nxt.append((word + ((fi, v),), fi))
            out += [w for w, _ in nxt]
            layer = nxt
        out.sort()
        return [GroupElement(self, w) for w in out]

    def in_truncation(self, g, truncations):
        truncs = self.check_truncations(truncations)
        return all(self.factors[f].in_truncation(v, truncs[f]) for f, v in g.word)

    # -- relative generators -------------------------------------------------

    def x_generators(self):
        """The relative generating set as (factor, name, value) triples."""
        if self.relative_generator_mode == "none":
            return []
        out = []
        for fi, spec in enumerate(self.factors):
            for name, val in spec.signed_gens():
                out.append((fi, name, val))
        return out

    def __repr__(self):
        desc = " * ".join(f.describe() for f in self.factors)
        return "GroupModel(%s, mode=%s)" % (desc, self.relative_generator_mode)
