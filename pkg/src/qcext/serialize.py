"""JSON encodings of the exact types and deterministic report rendering.

Elements serialize as lists of [factor, value] syllables, with the
value encoding fixed by the factor kind: integer vector (free
abelian), residue (cyclic), signed-generator string (free), table
index (finite table). Rationals always serialize as "p/q" strings so
reports round-trip without loss; the one infinity that occurs (the
off-diagonal relative metric) serializes as "inf". ``render`` walks
arbitrary report structures and is deterministic: sets are emitted in
canonical sort order and dictionaries with stringified sorted keys.
"""

import json
from fractions import Fraction

from .chains import CochainSpec, ModuleVector, OrientedEdge, SCALAR
from .coned import (Coset, ConedVertex, Geodesic, INFINITE, cone_vertex,
                    element_vertex)
from .factors import (CYCLIC, ConfigError, FINITE_TABLE, FREE, FREE_ABELIAN,
                      cyclic, finite_table, free, free_abelian)
from .groups import GroupElement, GroupModel
from .models import MODEL_IDS, build_model
from .report import CheckRow


# -- rationals ----------------------------------------------------------------


def fraction_to_json(x):
    if x == INFINITE:
        return "inf"
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def fraction_from_json(data):
    if data == "inf":
        return INFINITE
    if isinstance(data, int):
        return Fraction(data)
    if not isinstance(data, str):
        raise ConfigError("expected a rational \"p/q\" string, got %r" % (data,))
    num, _, den = data.partition("/")
    try:
        return Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError("bad rational %r: %s" % (data, exc))


# -- elements and cosets --------------------------------------------------------


def element_to_json(g):
    return [[f, g.model.factors[f].value_to_json(v)] for f, v in g.word]


def element_from_json(model, data):
    """Parse an element: a syllable list, or a generator-word string."""
    if isinstance(data, str):
        return model.from_word(data)
    if not isinstance(data, list):
        raise ConfigError("an element is a [[factor, value], ...] list "
                          "or a generator word string, got %r" % (data,))
    word = []
    for pair in data:
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise ConfigError("element syllables are [factor, value] pairs")
        f = pair[0]
        if not isinstance(f, int) or not 0 <= f < len(model.factors):
            raise ConfigError("factor index %r out of range" % (f,))
        word.append((f, model.factors[f].value_from_json(pair[1])))
    return model.element(word)


def coset_to_json(B):
    return {"factor": B.factor, "rep": element_to_json(B.rep)}


def coset_from_json(model, data):
    if not (isinstance(data, dict) and "factor" in data and "rep" in data):
        raise ConfigError("a coset is {\"factor\": i, \"rep\": element}")
    factor = data["factor"]
    if not isinstance(factor, int) or not 0 <= factor < len(model.factors):
        raise ConfigError("coset factor %r out of range" % (factor,))
    rep = element_from_json(model, data["rep"])
    word = rep.word
    if word and word[-1][0] == factor:
        word = word[:-1]
    return Coset(factor, GroupElement(model, word))


def vertex_to_json(v):
    if v.is_cone:
        return {"cone": coset_to_json(v.coset)}
    return {"element": element_to_json(v.element)}


def vertex_from_json(model, data):
    if not isinstance(data, dict):
        raise ConfigError("a vertex is {\"element\": ...} or {\"cone\": ...}")
    if "cone" in data:
        return cone_vertex(coset_from_json(model, data["cone"]))
    if "element" in data:
        return element_vertex(element_from_json(model, data["element"]))
    raise ConfigError("a vertex is {\"element\": ...} or {\"cone\": ...}")


def geodesic_to_json(geo):
    return {"vertices": [vertex_to_json(v) for v in geo.vertices],
            "length": fraction_to_json(geo.length)}


# -- module vectors ---------------------------------------------------------------


def edge_function_to_json(vec):
    """Finite edge functions as [origin, generator, weight] rows."""
    return [[element_to_json(e.origin), e.gen_name(), fraction_to_json(w)]
            for e, w in vec.edge_items()]


def module_vector_to_json(vec):
    if vec.kind == SCALAR:
        return fraction_to_json(vec.value)
    return edge_function_to_json(vec)


def oriented_edge_from_json(model, data):
    if not (isinstance(data, (list, tuple)) and len(data) >= 2):
        raise ConfigError("an edge is [origin, generator-name, ...]")
    origin = element_from_json(model, data[0])
    name = data[1]
    for fi, spec in enumerate(model.factors):
        for gi, gname in enumerate(spec.generators):
            if gname == name:
                return OrientedEdge(origin, fi, gi)
    raise ConfigError("unknown generator %r" % (name,))


# -- factors and models --------------------------------------------------------------


def factor_to_json(spec):
    out = {"kind": spec.kind, "generators": list(spec.generators)}
    if spec.kind in (FREE_ABELIAN, FREE):
        out["rank"] = spec.rank
    elif spec.kind == CYCLIC:
        out["order"] = spec.order
        out["gen_values"] = list(spec.gen_values)
    else:
        out["table"] = [list(row) for row in spec.table]
        out["gen_values"] = list(spec.gen_values)
    return out


def factor_from_json(data):
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigError("a factor is an object with a \"kind\" field")
    kind = data["kind"]
    gens = data.get("generators", ())
    if kind == FREE_ABELIAN:
        return free_abelian(data.get("rank", 0), gens)
    if kind == FREE:
        return free(data.get("rank", 0), gens)
    if kind == CYCLIC:
        return cyclic(data.get("order", 0), gens, data.get("gen_values", ()))
    if kind == FINITE_TABLE:
        return finite_table(data.get("table", ()), gens, data.get("gen_values", ()))
    raise ConfigError("unknown factor kind %r" % (kind,))


def model_to_json(model):
    out = {"relative_generator_mode": model.relative_generator_mode,
           "factors": [factor_to_json(f) for f in model.factors]}
    if model.name:
        out["name"] = model.name
    return out


def model_from_json(data, relative_generator_mode="none"):
    """Build a model from a catalog id or an explicit factor list."""
    if isinstance(data, str):
        data = {"id": data}
    if not isinstance(data, dict):
        raise ConfigError("model must be an id string or an object")
    if "id" in data:
        mid = data["id"]
        if mid not in MODEL_IDS:
            raise ConfigError("unknown model id %r; catalog: %s"
                              % (mid, ", ".join(MODEL_IDS)))
        return build_model(mid, relative_generator_mode)
    if "factors" not in data:
        raise ConfigError("model needs an \"id\" or a \"factors\" list")
    factors = [factor_from_json(f) for f in data["factors"]]
    return GroupModel(factors, relative_generator_mode, name=data.get("name", ""))


# -- cochain specs and families ---------------------------------------------------------


def cochain_spec_to_json(model, spec):
    params = {}
    for key, val in spec.params:
        if key == "inner":
            params[key] = cochain_spec_to_json(model, val)
        elif key == "entries":
            params[key] = [
                [[element_to_json(GroupElement(model, w)) for w in words],
                 fraction_to_json(value)]
                for words, value in val]
        elif isinstance(val, tuple):
            params[key] = list(val)
        else:
            params[key] = val
    return {"kernel": spec.kernel, "degree": spec.degree,
            "coefficients": spec.kind, "params": params,
            "factor": spec.factor, "alternating": spec.alternating}


def cochain_spec_from_json(model, data):
    if not isinstance(data, dict) or "kernel" not in data or "degree" not in data:
        raise ConfigError("a cochain is {\"kernel\", \"degree\", \"coefficients\", ...}")
    raw = data.get("params", {})
    if not isinstance(raw, dict):
        raise ConfigError("cochain params must be an object")
    params = {}
    for key, val in raw.items():
        if key == "inner":
            params[key] = cochain_spec_from_json(model, val)
        elif key == "entries":
            rows = []
            for row in val:
                if not (isinstance(row, (list, tuple)) and len(row) == 2):
                    raise ConfigError("table entries are [tuple, value] pairs")
                words = tuple(element_from_json(model, e).word for e in row[0])
                rows.append((words, fraction_from_json(row[1])))
            params[key] = tuple(rows)
        elif isinstance(val, list):
            params[key] = tuple(val)
        else:
            params[key] = val
    return CochainSpec(degree=data["degree"],
                       kind=data.get("coefficients", SCALAR),
                       kernel=data["kernel"],
                       params=tuple(sorted(params.items())),
                       factor=data.get("factor"),
                       alternating=data.get("alternating", True))


def family_to_json(model, family):
    return {"degree": family.degree, "coefficients": family.kind,
            "members": [None if m is None else cochain_spec_to_json(model, m)
                        for m in family.members]}


def family_from_json(model, data):
    """Parse a family: explicit members, or a one-hot shortcut.

    Shortcuts: {"kind": "volume", "factor": i} extends the lattice
    volume of factor i (degree = its rank) by zero; {"kind":
    "edge_flow_delta", "factor": i} the spreading coboundary; {"kind":
    "zero", "degree": n} the zero family.
    """
    from .extension import FamilyCochain, one_hot_family
    from .reconstruction import edge_flow_delta_cochain
    from .chains import EDGE_FUNCTION, volume_cochain

    if not isinstance(data, dict):
        raise ConfigError("family must be an object")
    if "members" in data:
        members = [None if m is None else cochain_spec_from_json(model, m)
                   for m in data["members"]]
        if len(members) != len(model.factors):
            raise ConfigError("family needs one member slot per factor")
        degree = data.get("degree")
        kind = data.get("coefficients")
        sample = next((m for m in members if m is not None), None)
        if sample is None:
            if degree is None or kind is None:
                raise ConfigError("an all-None family needs degree and coefficients")
            return FamilyCochain(degree, kind, tuple(members))
        return FamilyCochain(sample.degree, sample.kind, tuple(members))
    kind = data.get("kind")
    if kind == "volume":
        factor = data.get("factor", 0)
        if not isinstance(factor, int) or not 0 <= factor < len(model.factors):
            raise ConfigError("family factor %r out of range" % (factor,))
        fspec = model.factors[factor]
        if fspec.kind != FREE_ABELIAN:
            raise ConfigError("the volume family needs a free_abelian factor")
        return one_hot_family(model, factor, volume_cochain(factor, fspec.rank))
    if kind == "edge_flow_delta":
        factor = data.get("factor", 0)
        if not isinstance(factor, int) or not 0 <= factor < len(model.factors):
            raise ConfigError("family factor %r out of range" % (factor,))
        return one_hot_family(model, factor, edge_flow_delta_cochain(factor))
    if kind == "zero":
        degree = data.get("degree")
        if not isinstance(degree, int) or degree < 1:
            raise ConfigError("the zero family needs a positive degree")
        vkind = data.get("coefficients", SCALAR)
        return FamilyCochain(degree, vkind, (None,) * len(model.factors))
    raise ConfigError("family needs \"members\" or a shortcut kind "
                      "(volume, edge_flow_delta, zero)")


# -- generic rendering -----------------------------------------------------------------


def render(x):
    """Map a report structure onto JSON-ready data, deterministically."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if x == INFINITE:
            return "inf"
        raise ConfigError("reports carry no finite floats, got %r" % (x,))
    if isinstance(x, Fraction):
        return fraction_to_json(x)
    if isinstance(x, GroupElement):
        return element_to_json(x)
    if isinstance(x, Coset):
        return coset_to_json(x)
    if isinstance(x, ConedVertex):
        return vertex_to_json(x)
    if isinstance(x, OrientedEdge):
        return [element_to_json(x.origin), x.gen_name()]
    if isinstance(x, ModuleVector):
        return module_vector_to_json(x)
    if isinstance(x, Geodesic):
        return geodesic_to_json(x)
    if isinstance(x, CheckRow):
        return x.to_json(render)
    if isinstance(x, (frozenset, set)):
        return sorted((render(v) for v in x), key=_json_key)
    if isinstance(x, (list, tuple)):
        return [render(v) for v in x]
    if isinstance(x, dict):
        if all(isinstance(k, (str, int)) for k in x):
            return {str(k): render(v)
                    for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
        pairs = [[render(k), render(v)] for k, v in x.items()]
        pairs.sort(key=lambda kv: _json_key(kv[0]))
        return pairs
    raise ConfigError("cannot render %r" % (type(x).__name__,))


def _json_key(rendered):
    return json.dumps(rendered, sort_keys=True)


def dumps(obj):
    """Canonical report text: rendered, sorted keys, trailing newline."""
    return json.dumps(render(obj), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"
