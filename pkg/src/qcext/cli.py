"""Command line harness: config ingestion, sweeps, reports.

Commands

  verify-geometry      exhaustive coned-space sweeps over a window
  verify-extension     quantitative extension contracts over a window
  trace                averaged projected simplices for tuples from a file
  theta                extension operator values for tuples from a file
  reconstruct-general  projection recovery through the spreading cochain
  reconstruct-zn       projection recovery through lattice volumes
  bbf-check            projection-family axioms over a coset window
  cup-table            growth table of the cup product of two homomorphisms
  emit-fixture         regenerate a committed oracle fixture

Exit status: 0 when every pass flag in the report is true, 1 when a
sweep found a counterexample (stderr carries the witness), 2 for
configuration problems (stderr carries the diagnostics). Reports are
JSON, rationals as "p/q"; identical configs produce byte-identical
reports. Tables can additionally be written as CSV.
"""

import argparse
import csv
import importlib.util
import json
import os
import sys
from fractions import Fraction

from .bbf import (check_axioms, distance_rows, klgs_diagnostic,
                  window_coset_universe)
from .chains import DegreeError, SCALAR, cup_cochain, evaluate
from .coned import (ConedSpace, ConedSpaceConfig, DomainError,
                    IdenticalCosetError, InfiniteProjectionError)
from .extension import theta, trace, verify_extension
from .factors import FREE_ABELIAN, ConfigError
from .geometry import verify_geometry
from .groups import ModelMismatchError
from .models import MODEL_IDS
from .reconstruction import (RetryError, UnsupportedFactorError,
                             minimal_admissible_m, minimal_admissible_n,
                             next_admissible_m, recover_projection_general,
                             recover_projection_zn)
from .report import CheckRow
from .serialize import (coset_from_json, dumps, element_from_json,
                        family_from_json, family_to_json, fraction_to_json,
                        model_from_json, model_to_json, render)

_CONFIG_ERRORS = (ConfigError, RetryError, UnsupportedFactorError, DomainError,
                  DegreeError, ModelMismatchError, InfiniteProjectionError,
                  IdenticalCosetError)

_MODES = {"infinity_offdiag": "none", "word_metric": "factor_generators"}


# -- config plumbing -----------------------------------------------------------


def _load_json_file(path, problems, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        problems.append("%s: cannot read %s: %s" % (path, what, exc))
    except ValueError as exc:
        problems.append("%s: invalid JSON: %s" % (path, exc))
    return None


def _is_int(v, minimum=None):
    return isinstance(v, int) and not isinstance(v, bool) \
        and (minimum is None or v >= minimum)


def _build_space(config, args, problems):
    model_cfg = config.get("model")
    if model_cfg is None:
        problems.append("model: required; a catalog id (%s) or {\"factors\": [...]}"
                        % ", ".join(MODEL_IDS))
    space_cfg = config.get("space", {})
    if not isinstance(space_cfg, dict):
        problems.append("space: expected an object")
        space_cfg = {}
    mode = space_cfg.get("mode", "infinity_offdiag")
    if mode not in _MODES:
        problems.append("space.mode: one of %s" % ", ".join(sorted(_MODES)))
    sep = space_cfg.get("separation", 1)
    if not _is_int(sep, 1):
        problems.append("space.separation: positive integer required")
    if problems:
        return None
    model = model_from_json(model_cfg, _MODES[mode])
    return ConedSpace(ConedSpaceConfig(model=model, separation=sep,
                                       relative_metric_mode=mode))


def _window(config, args, problems):
    win = config.get("window")
    if not isinstance(win, dict):
        problems.append("window: required object {\"radius\": n, \"truncations\": {...}}")
        return None, None
    radius = win.get("radius") if args.radius is None else args.radius
    if not _is_int(radius, 0):
        problems.append("window.radius: nonnegative integer required")
    raw = win.get("truncations", {})
    if not isinstance(raw, dict):
        problems.append("window.truncations: object mapping factor index to bound")
        raw = {}
    truncs = {}
    for k, v in raw.items():
        try:
            ki = int(k)
        except (TypeError, ValueError):
            problems.append("window.truncations: bad factor index %r" % (k,))
            continue
        if not _is_int(v, 1):
            problems.append("window.truncations[%s]: positive integer required" % (k,))
            continue
        truncs[ki] = v
    return radius, truncs


def _load_tuples(config, model, problems):
    inline = config.get("tuples")
    path = config.get("tuples_file")
    if inline is not None and path is not None:
        problems.append("tuples / tuples_file: give exactly one")
        return []
    if inline is None and path is None:
        problems.append("tuples: required; an inline list or a tuples_file path")
        return []
    if path is not None:
        inline = _load_json_file(path, problems, "tuples file")
        if inline is None:
            return []
    if not isinstance(inline, list):
        problems.append("tuples: expected a list of element tuples")
        return []
    out = []
    for i, row in enumerate(inline):
        if not isinstance(row, list):
            problems.append("tuples[%d]: expected a list of elements" % i)
            continue
        try:
            out.append(tuple(element_from_json(model, e) for e in row))
        except ConfigError as exc:
            problems.append("tuples[%d]: %s" % (i, exc))
    return out


def _envelope(command, space, extra):
    out = {"command": command, "model": model_to_json(space.model),
           "mode": space.mode, "separation": space.D}
    out.update(extra)
    return out


def _fail_lines(rows):
    out = []
    for r in rows:
        if r.passed:
            continue
        out.append("%s: observed=%s witness=%s" % (
            r.check,
            json.dumps(render(r.observed), sort_keys=True),
            json.dumps(render(r.witness), sort_keys=True)))
    return out


# -- commands ----------------------------------------------------------------


def _cmd_verify_geometry(config, args, problems):
    space = _build_space(config, args, problems)
    radius, truncs = _window(config, args, problems)
    params = config.get("geometry", {})
    if not isinstance(params, dict):
        problems.append("geometry: expected an object")
        params = {}
    probe = params.get("probe_radius", 2)
    mid = params.get("mid_radius")
    thirds = params.get("thirds_radius", 1)
    if not _is_int(probe, 0):
        problems.append("geometry.probe_radius: nonnegative integer required")
    if mid is not None and not _is_int(mid, 0):
        problems.append("geometry.mid_radius: nonnegative integer required")
    if not _is_int(thirds, 0):
        problems.append("geometry.thirds_radius: nonnegative integer required")
    if problems:
        return None
    rep = verify_geometry(space, radius, truncs, probe_radius=probe,
                          mid_radius=mid, thirds_radius=thirds)
    body = _envelope("verify-geometry", space,
                     {"window": rep.window, "rows": rep.rows, "pass": rep.passed()})
    return body, rep.passed(), _fail_lines(rep.rows)


def _perm_sign(perm):
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _sampled_alternation(space, family, radius, truncs, seed, count):
    """Seeded spot check that the extension alternates: permuting a tuple
    multiplies the value by the permutation sign."""
    import random
    rng = random.Random(seed)
    ball = space.model.enumerate_ball(radius, truncs)
    n = family.degree
    worst = Fraction(0)
    wit = None
    for _ in range(count):
        simplex = tuple(rng.choice(ball) for _ in range(n + 1))
        perm = list(range(n + 1))
        rng.shuffle(perm)
        permuted = tuple(simplex[i] for i in perm)
        gap = (theta(space, family, permuted)
               - theta(space, family, simplex).scale(_perm_sign(perm))).norm_indicator()
        if gap > worst:
            worst, wit = gap, (simplex, tuple(perm))
    return CheckRow("extension-sampled-alternation", worst == 0,
                    bound=Fraction(0), observed=worst, witness=wit,
                    note="seeded sample of %d permuted tuples" % count)


def _cmd_verify_extension(config, args, problems):
    space = _build_space(config, args, problems)
    radius, truncs = _window(config, args, problems)
    family = None
    if space is not None:
        fam_cfg = config.get("family")
        if fam_cfg is None:
            problems.append("family: required")
        else:
            try:
                family = family_from_json(space.model, fam_cfg)
            except ConfigError as exc:
                problems.append("family: %s" % exc)
    factor_truncation = config.get("factor_truncation")
    if not _is_int(factor_truncation, 1):
        problems.append("factor_truncation: positive integer required")
    quasi = config.get("quasi_shape")
    if family is not None:
        want = family.degree + 1
        if not (isinstance(quasi, list) and len(quasi) == want
                and all(_is_int(q, 0) for q in quasi)):
            problems.append("quasi_shape: list of %d nonnegative ball radii required"
                            % want)
    seed = args.seed if args.seed is not None else config.get("seed")
    if seed is not None and not _is_int(seed):
        problems.append("seed: integer required")
    sample_count = config.get("sampled_alternation_count", 8)
    if not _is_int(sample_count, 0):
        problems.append("sampled_alternation_count: nonnegative integer required")
    if problems:
        return None
    rep = verify_extension(space, family, factor_truncation, radius, truncs,
                           tuple(quasi))
    rows = list(rep.rows)
    if seed is not None and sample_count:
        rows.append(_sampled_alternation(space, family, radius, truncs,
                                         seed, sample_count))
    passed = all(r.passed for r in rows)
    body = _envelope("verify-extension", space, {
        "family": family_to_json(space.model, family),
        "k_value": rep.k_value, "k_witness": rep.k_witness,
        "window": rep.window, "rows": rows, "pass": passed})
    return body, passed, _fail_lines(rows)


def _cmd_trace(config, args, problems):
    space = _build_space(config, args, problems)
    tuples = [] if space is None else _load_tuples(config, space.model, problems)
    coset_cfg = config.get("coset")
    B = None
    if coset_cfg is not None and space is not None:
        try:
            B = coset_from_json(space.model, coset_cfg)
        except ConfigError as exc:
            problems.append("coset: %s" % exc)
    if problems:
        return None
    results = []
    for t in tuples:
        cosets = [B] if B is not None else space.relevant_cosets(t)
        entries = []
        for coset in cosets:
            ch = trace(space, t, coset)
            entries.append({"coset": coset,
                            "chain": [[list(s), c] for s, c in ch.items()]})
        results.append({"tuple": list(t), "traces": entries})
    body = _envelope("trace", space, {"results": results, "pass": True})
    return body, True, []


def _cmd_theta(config, args, problems):
    space = _build_space(config, args, problems)
    family = None
    if space is not None:
        fam_cfg = config.get("family")
        if fam_cfg is None:
            problems.append("family: required")
        else:
            try:
                family = family_from_json(space.model, fam_cfg)
            except ConfigError as exc:
                problems.append("family: %s" % exc)
    tuples = [] if space is None else _load_tuples(config, space.model, problems)
    if family is not None:
        for i, t in enumerate(tuples):
            if len(t) != family.degree + 1:
                problems.append("tuples[%d]: needs %d entries for degree %d"
                                % (i, family.degree + 1, family.degree))
    if problems:
        return None
    results = [{"tuple": list(t), "value": theta(space, family, t)}
               for t in tuples]
    body = _envelope("theta", space, {
        "family": family_to_json(space.model, family),
        "results": results, "pass": True})
    return body, True, []


def _cmd_reconstruct_general(config, args, problems):
    space = _build_space(config, args, problems)
    B = y = None
    if space is not None:
        try:
            B = coset_from_json(space.model, config.get("coset"))
        except ConfigError as exc:
            problems.append("coset: %s" % exc)
        if "point" not in config:
            problems.append("point: required")
        else:
            try:
                y = element_from_json(space.model, config["point"])
            except ConfigError as exc:
                problems.append("point: %s" % exc)
    n = config.get("n")
    if n is not None and not _is_int(n, 1):
        problems.append("n: positive integer required")
    if problems:
        return None
    if n is None:
        n = minimal_admissible_n(space, B, y)
    rec = recover_projection_general(space, B, y, n)
    oracle = space.projection(B, y)
    match = rec.recovered == oracle
    result = {"target_coset": B, "input_point": y, "n_or_m_used": n,
              "recovered": sorted(rec.recovered, key=lambda g: g.sort_key()),
              "oracle": oracle, "match": match}
    body = _envelope("reconstruct-general", space,
                     {"result": result, "pass": match})
    fails = [] if match else ["projection-recovery-mismatch: %s"
                              % json.dumps(render(result), sort_keys=True)]
    return body, match, fails


def _cmd_reconstruct_zn(config, args, problems):
    space = _build_space(config, args, problems)
    g = z = None
    factor = config.get("factor", 0)
    if not _is_int(factor, 0):
        problems.append("factor: nonnegative integer required")
    if space is not None:
        try:
            g = element_from_json(space.model, config.get("base", []))
        except ConfigError as exc:
            problems.append("base: %s" % exc)
        if "point" not in config:
            problems.append("point: required")
        else:
            try:
                z = element_from_json(space.model, config["point"])
            except ConfigError as exc:
                problems.append("point: %s" % exc)
    m = config.get("m")
    if m is not None and not _is_int(m, 1):
        problems.append("m: positive integer required")
    if problems:
        return None
    if m is None:
        m = minimal_admissible_m(space, factor, ~g * z)
    rec = recover_projection_zn(space, factor, g, z, m)
    B = space.coset(g, factor)
    oracle = space.projection(B, z)
    match = frozenset((rec.recovered,)) == oracle
    result = {"target_coset": B, "input_point": z, "n_or_m_used": m,
              "recovered": [rec.recovered], "oracle": oracle, "match": match}
    passed = match
    if config.get("check_next_m"):
        m2 = next_admissible_m(space, factor, g, z, m)
        rec2 = recover_projection_zn(space, factor, g, z, m2)
        result["next_m"] = m2
        result["stable"] = rec2.recovered == rec.recovered
        passed = passed and result["stable"]
    body = _envelope("reconstruct-zn", space, {"result": result, "pass": passed})
    fails = [] if passed else ["projection-recovery-mismatch: %s"
                               % json.dumps(render(result), sort_keys=True)]
    return body, passed, fails


def _cmd_bbf_check(config, args, problems):
    space = _build_space(config, args, problems)
    if space is not None and space.mode != "word_metric":
        problems.append("space.mode: bbf-check needs word_metric")
    radius, truncs = _window(config, args, problems)
    xi = config.get("xi", space.D if space is not None else 1)
    if not _is_int(xi, 1):
        problems.append("xi: positive integer required")
    xr = config.get("x_pool_radius")
    zr = config.get("z_pool_radius")
    for name, val in (("x_pool_radius", xr), ("z_pool_radius", zr)):
        if val is not None and not _is_int(val, 0):
            problems.append("%s: nonnegative integer required" % name)
    klgs_cfg = config.get("klgs")
    if klgs_cfg is not None and not isinstance(klgs_cfg, dict):
        problems.append("klgs: expected an object {\"d_max\": n, \"pair_radius\": n}")
        klgs_cfg = None
    if problems:
        return None
    universe = window_coset_universe(space, radius, truncs)
    x_pool = None if xr is None else window_coset_universe(space, xr, truncs)
    z_pool = None if zr is None else window_coset_universe(space, zr, truncs)
    rep = check_axioms(space, universe, xi, x_pool, z_pool)
    body = _envelope("bbf-check", space, {
        "window": {"radius": radius, "truncations": truncs,
                   "x_pool_radius": xr, "z_pool_radius": zr},
        "xi_candidate": rep.xi_candidate,
        "universe_size": rep.universe_size,
        "axiom0_max": rep.axiom0_max, "axiom0_witness": rep.axiom0_witness,
        "axiom0_pass": rep.axiom0_pass,
        "axiom3_min_max": rep.axiom3_min_max,
        "axiom3_witness": rep.axiom3_witness, "axiom3_pass": rep.axiom3_pass,
        "axiom4_counts": rep.axiom4_counts, "axiom4_max": rep.axiom4_max,
        "axiom4_bound_ok": rep.axiom4_bound_ok,
        "axiom4_cross_ok": rep.axiom4_cross_ok, "axiom4_pass": rep.axiom4_pass,
        "minimal_xi": rep.minimal_xi})
    if klgs_cfg is not None:
        d_max = klgs_cfg.get("d_max", space.D)
        pair_radius = klgs_cfg.get("pair_radius", 1)
        if not _is_int(d_max, 1) or not _is_int(pair_radius, 0):
            raise ConfigError("klgs.d_max and klgs.pair_radius must be positive"
                              " / nonnegative integers")
        pool = window_coset_universe(space, pair_radius, truncs)
        pairs = [(pool[i], pool[j]) for i in range(len(pool))
                 for j in range(i + 1, len(pool))]
        kl = klgs_diagnostic(space, space.model.enumerate_ball(radius, truncs),
                             pairs, d_max)
        body["klgs_K"] = kl.k_value
        body["klgs_rows"] = kl.rows
    table = config.get("distance_table")
    if table is not None:
        _write_distance_csv(table, space, universe, x_pool)
        body["distance_table"] = table
    body["pass"] = rep.passed()
    fails = []
    if not rep.axiom0_pass:
        fails.append("bbf-axiom0: observed=%s witness=%s"
                     % (rep.axiom0_max, json.dumps(render(rep.axiom0_witness),
                                                   sort_keys=True)))
    if not rep.axiom3_pass:
        fails.append("bbf-axiom3: observed=%s witness=%s"
                     % (rep.axiom3_min_max, json.dumps(render(rep.axiom3_witness),
                                                       sort_keys=True)))
    if not rep.axiom4_bound_ok:
        fails.append("bbf-axiom4-count-bound: max=%d" % rep.axiom4_max)
    if rep.axiom4_cross_ok is False:
        fails.append("bbf-axiom4-separating-cross-check failed")
    return body, rep.passed(), fails


def _write_distance_csv(path, space, universe, x_pool):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["Y", "X", "Z", "d_Y"])
        for Y, X, Z, d in distance_rows(space, universe, x_pool):
            writer.writerow([repr(Y), repr(X), repr(Z), fraction_to_json(d)])


def _cmd_cup_table(config, args, problems):
    model_cfg = config.get("model", "z2_z")
    try:
        model = model_from_json(model_cfg, "none")
    except ConfigError as exc:
        problems.append("model: %s" % exc)
        return None
    factor = config.get("factor")
    if factor is None:
        factor = next((i for i, f in enumerate(model.factors)
                       if f.kind == FREE_ABELIAN and f.rank >= 2), None)
        if factor is None:
            problems.append("factor: no free_abelian factor of rank >= 2 in the model")
    elif not (_is_int(factor, 0) and factor < len(model.factors)
              and model.factors[factor].kind == FREE_ABELIAN
              and model.factors[factor].rank >= 2):
        problems.append("factor: must name a free_abelian factor of rank >= 2")
        factor = None
    n_max = config.get("n_max", 10)
    if not _is_int(n_max, 1):
        problems.append("n_max: positive integer required")
    hom1 = hom2 = None
    if factor is not None:
        rank = model.factors[factor].rank
        hom1 = config.get("hom1", [1] + [0] * (rank - 1))
        hom2 = config.get("hom2", [0, 1] + [0] * (rank - 2))
        for name, hom in (("hom1", hom1), ("hom2", hom2)):
            if not (isinstance(hom, list) and len(hom) == rank
                    and all(_is_int(c) for c in hom)):
                problems.append("%s: integer list of length %d required" % (name, rank))
    if problems:
        return None
    spec = cup_cochain(factor, hom1, hom2)
    rank = model.factors[factor].rank
    a = model.syllable(factor, tuple(1 if i == 0 else 0 for i in range(rank)))
    b = model.syllable(factor, tuple(1 if i == 1 else 0 for i in range(rank)))
    rows = []
    for n in range(1, n_max + 1):
        an = a ** n
        bn = b ** n
        first = evaluate(model, spec, (model.identity, bn, an)).value
        second = evaluate(model, spec, (an, model.identity, bn)).value
        rows.append({"n": n, "id_bn_an": first, "an_id_bn": second})
    body = {"command": "cup-table", "model": model_to_json(model),
            "factor": factor, "hom1": list(hom1), "hom2": list(hom2),
            "rows": rows, "pass": True}
    table = config.get("csv")
    if table is not None:
        with open(table, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "id_bn_an", "an_id_bn"])
            for row in rows:
                writer.writerow([row["n"], fraction_to_json(row["id_bn_an"]),
                                 fraction_to_json(row["an_id_bn"])])
        body["csv"] = table
    return body, True, []


def _cmd_emit_fixture(config, args, problems):
    which = config.get("fixture")
    if not isinstance(which, str) or not which:
        problems.append("fixture: required fixture name")
    test_tree = config.get("test_tree", "tests")
    path = os.path.join(test_tree, "oracles.py")
    if not os.path.exists(path):
        problems.append("%s: oracle module not found; point test_tree at the "
                        "checkout's test directory" % path)
    if problems:
        return None
    spec = importlib.util.spec_from_file_location("qcext_test_oracles", path)
    module = importlib.util.module_from_spec(spec)
    try:
        spec.loader.exec_module(module)
        builder = getattr(module, "build_fixture", None)
        if builder is None:
            problems.append("%s: module has no build_fixture entry point" % path)
            return None
        payload = builder(which, config)
    except _CONFIG_ERRORS as exc:
        problems.append(str(exc))
        return None
    payload["command"] = "emit-fixture"
    return payload, True, []


_HANDLERS = {
    "verify-geometry": _cmd_verify_geometry,
    "verify-extension": _cmd_verify_extension,
    "trace": _cmd_trace,
    "theta": _cmd_theta,
    "reconstruct-general": _cmd_reconstruct_general,
    "reconstruct-zn": _cmd_reconstruct_zn,
    "bbf-check": _cmd_bbf_check,
    "cup-table": _cmd_cup_table,
    "emit-fixture": _cmd_emit_fixture,
}


def _parser():
    parser = argparse.ArgumentParser(
        prog="qcext",
        description="Verification harness for coned-off coset geometry and "
                    "cochain extension over free products.")
    parser.add_argument("command", choices=sorted(_HANDLERS))
    parser.add_argument("--config", required=True, help="JSON run config")
    parser.add_argument("--out", help="report path (default: stdout)")
    parser.add_argument("--radius", type=int, help="override window.radius")
    parser.add_argument("--degree", type=int,
                        help="override degree-like params where applicable")
    parser.add_argument("--seed", type=int,
                        help="seed for sampled permutation checks")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes (sweeps are deterministic; "
                             "values above 1 are accepted and ignored)")
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    problems = []
    if args.jobs is not None and args.jobs < 1:
        problems.append("--jobs: must be >= 1")
    config = _load_json_file(args.config, problems, "config")
    if config is not None and not isinstance(config, dict):
        problems.append("%s: config must be a JSON object" % args.config)
        config = None
    outcome = None
    if not problems and config is not None:
        try:
            outcome = _HANDLERS[args.command](config, args, problems)
        except _CONFIG_ERRORS as exc:
            problems.append(str(exc))
    if outcome is None:
        for p in problems:
            print("config error: %s" % p, file=sys.stderr)
        return 2
    body, passed, failures = outcome
    text = dumps(body)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print("config error: cannot write %s: %s" % (args.out, exc),
                  file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    if not passed:
        for line in failures:
            print("check failed: %s" % line, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
