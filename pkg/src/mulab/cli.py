"""Command-line interface.

One binary, one subcommand per analysis; every run writes exactly one
report file plus a manifest (config echo, version, wall time, outputs).
Reports embed the analysis config (without execution-only fields such as
jobs or paths), so identical analyses produce byte-identical reports for
any worker count; numbers print with 12 significant digits.

Exit codes: 0 success, 1 a check suite found a violated inequality,
2 invalid configuration, 3 coverage/budget failure during compute.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, averaging, correlations, furstenberg, nilseq
from . import pretentious as pret
from . import seqgen, uniformity
from .errors import ConfigError, MulabError
from .seqgen import MultFuncSpec, SyntheticSpec


def fmt(x) -> str:
    """12 significant digits."""
    return f"{float(x):.12g}"


def round12(x):
    return float(f"{float(x):.12g}")


def parse_count(text) -> int:
    """Integer flag accepting scientific notation (1e6)."""
    v = float(text)
    n = int(round(v))
    if abs(v - n) > 1e-9 * max(1.0, abs(v)):
        raise ConfigError(f"expected an integer count, got {text!r}")
    return n


def parse_int_list(text):
    return [parse_count(t) for t in str(text).split(",") if t != ""]


def _build_spec(args):
    """(spec, label) from --func/--dirichlet/--custom/--synthetic flags."""
    chosen = [k for k in ("func", "dirichlet", "custom", "synthetic")
              if getattr(args, k, None)]
    if len(chosen) != 1:
        raise ConfigError(
            "exactly one of --func, --dirichlet, --custom, --synthetic is required")
    kind = chosen[0]
    if kind == "func":
        if args.func == "liouville":
            return MultFuncSpec.liouville(), "liouville"
        if args.func == "mobius":
            return MultFuncSpec.mobius(), "mobius"
        raise ConfigError(f"unknown --func {args.func!r}")
    if kind == "dirichlet":
        try:
            q, index = (int(x) for x in args.dirichlet.split(":"))
        except ValueError as exc:
            raise ConfigError(f"--dirichlet wants q:index, got {args.dirichlet!r}") from exc
        return MultFuncSpec.dirichlet(q, index), f"dirichlet_{q}_{index}"
    if kind == "custom":
        try:
            table = json.loads(args.custom)
            phases = {int(p): (None if v is None else float(v))
                      for p, v in table.items()}
        except (ValueError, AttributeError) as exc:
            raise ConfigError(f"--custom wants a JSON object prime->turns: {exc}") from exc
        return MultFuncSpec.custom(phases), "custom"
    text = args.synthetic
    if text == "alternating":
        return SyntheticSpec.alternating(), "alternating"
    if text == "block-a":
        return SyntheticSpec.block_sign_a(), "block_sign_a"
    if text == "block-b":
        return SyntheticSpec.block_sign_b(), "block_sign_b"
    if text == "random":
        return SyntheticSpec.random(args.seed), f"random_{args.seed}"
    if text.startswith("constant:"):
        return SyntheticSpec.constant(complex(text.split(":", 1)[1])), "constant"
    if text.startswith("poly:"):
        coeffs = [nilseq.named_real(c) for c in text.split(":", 1)[1].split(",")]
        return SyntheticSpec.poly_phase(coeffs), "poly"
    raise ConfigError(f"unknown --synthetic {text!r}")


def _get_block(args, spec, label, start, end):
    """Materialize a block, honoring --use-cache for sieve outputs."""
    cache_dir = args.cache_dir or os.environ.get("MULAB_CACHE_DIR") or ""
    cacheable = label in ("liouville", "mobius")
    if args.use_cache and cacheable and cache_dir:
        path = seqgen.cache_path(cache_dir, label, start, end)
        if os.path.exists(path):
            return seqgen.read_cache(path)
    return seqgen.materialize(spec, start, end, jobs=args.jobs)


def _scheme(args, default_ends, kind):
    if getattr(args, "scheme", None):
        return averaging.IntervalScheme.from_json(args.scheme, kind)
    return averaging.IntervalScheme.prefixes(default_ends, kind)


def _analysis_config(args, sub, extra=None):
    """Config echoed into the report: analysis fields only."""
    skip = {"out", "jobs", "cache_dir", "use_cache", "write_cache", "command",
            "handler"}
    cfg = {"subcommand": sub}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None or callable(v):
            continue
        cfg[k] = v
    if extra:
        cfg.update(extra)
    return cfg


def _write_csv(path, config, header, rows):
    lines = ["# config: " + json.dumps(config, sort_keys=True)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(
            fmt(v) if isinstance(v, float) else str(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, float):
        return round12(obj)
    if isinstance(obj, complex):
        return {"re": round12(obj.real), "im": round12(obj.imag)}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return round12(float(obj))
    return obj


def _write_json(path, config, payload):
    doc = {"config": config}
    doc.update(payload)
    with open(path, "w") as fh:
        json.dump(_jsonable(doc), fh, sort_keys=True, indent=1)
        fh.write("\n")


def _write_manifest(args, config, wall_ms, outputs):
    manifest = {
        "config": dict(config, jobs=args.jobs),
        "tool_version": __version__,
        "wall_ms": int(wall_ms),
        "outputs": outputs,
    }
    path = args.out + ".manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_sieve(args):
    spec, label = _build_spec(args)
    block = _get_block(args, spec, label, args.start, args.end)
    config = _analysis_config(args, "sieve")
    total = complex(np.sum(block.values, dtype=np.int64)) \
        if block.storage != "complex_pair" else complex(np.sum(block.values))
    zeros = int(np.sum(block.values == 0))
    rows = [(block.start, block.end, len(block),
             float(total.real), float(total.imag), zeros)]
    _write_csv(args.out, config,
               ["start", "end", "length", "sum_re", "sum_im", "zeros"], rows)
    outputs = [args.out]
    if args.write_cache:
        cache_dir = args.cache_dir or os.environ.get("MULAB_CACHE_DIR") or "."
        os.makedirs(cache_dir, exist_ok=True)
        path = seqgen.cache_path(cache_dir, label, block.start, block.end)
        seqgen.write_cache(path, block)
        outputs.append(path)
    return config, outputs, 0


def cmd_correlate(args):
    spec, label = _build_spec(args)
    shifts = parse_int_list(args.shifts)
    dilations = parse_int_list(args.dilations) if args.dilations else [1] * len(shifts)
    conj = [bool(int(x)) for x in str(args.conj).split(",")] if args.conj \
        else [False] * len(shifts)
    if not len(shifts) == len(dilations) == len(conj):
        raise ConfigError("--shifts, --dilations, --conj must have equal length")
    query = correlations.CorrelationQuery.of(
        *[(c, n, k) for c, n, k in zip(dilations, shifts, conj)])
    scheme = _scheme(args, [args.n], args.avg)
    need = max(t.dilation * b + t.shift for t in query.terms
               for _, b in scheme) + 1
    block = _get_block(args, spec, label, 1, need + 1)
    rep = correlations.correlation(block, query, scheme, jobs=args.jobs)
    config = _analysis_config(args, "correlate")
    rows = [(a, b, scheme.kind, float(v.real), float(v.imag), int(rep.degenerate))
            for (a, b), v in zip(scheme, rep.per_interval)]
    _write_csv(args.out, config,
               ["interval_start", "interval_end", "kind", "re", "im",
                "degenerate_flag"], rows)
    return config, [args.out], 0


def cmd_patterns(args):
    spec, label = _build_spec(args)
    scheme = _scheme(args, [args.n], args.avg)
    _, b_last = scheme.last
    block = _get_block(args, spec, label, 1, b_last + args.ell + 1)
    stats = correlations.pattern_densities(block, args.ell, scheme, jobs=args.jobs)
    config = _analysis_config(args, "patterns")
    freqs = stats.frequencies
    rows = [(correlations.pattern_string(c, args.ell),
             float(stats.weights[c]), float(freqs[c]))
            for c in range(1 << args.ell)]
    _write_csv(args.out, config, ["pattern", "weight", "frequency"], rows)
    return config, [args.out], 0


def cmd_gowers(args):
    spec, label = _build_spec(args)
    block = _get_block(args, spec, label, 1, args.n + 1)
    vals = block.complex_values()[: args.n]
    if args.norm == "zn":
        res = uniformity.gowers_zn(vals, args.s, method=args.method,
                                   stride=args.stride)
    else:
        res = uniformity.gowers_interval(vals, args.s, method=args.method,
                                         stride=args.stride)
    config = _analysis_config(args, "gowers")
    _write_json(args.out, config, {"s": res.s, "method": res.method,
                                   "N": args.n, "H": None,
                                   "value": res.value, "clamped": res.clamped,
                                   "estimate": res.estimate})
    return config, [args.out], 0


def cmd_local_uniformity(args):
    spec, label = _build_spec(args)
    ends = parse_int_list(args.n_list)
    scheme = averaging.IntervalScheme.prefixes(ends)
    ladder = parse_int_list(args.h_ladder) if args.h_ladder else None
    need = max(ends) + args.s * max([args.h] + (ladder or [])) + 1
    block = _get_block(args, spec, label, 1, need + 1)
    res = uniformity.local_seminorm(block, scheme, args.s, args.h, ladder)
    config = _analysis_config(args, "local-uniformity")
    grid = [{"H": h, "interval": [a, b], "re": v.real, "im": v.imag}
            for (h, (a, b)), v in sorted(res.grid.items())]
    _write_json(args.out, config, {"s": res.s, "method": "box", "N": ends[-1],
                                   "H": res.h_box, "value": res.value,
                                   "clamped": res.clamped, "estimate": False,
                                   "grid": grid})
    return config, [args.out], 0


def cmd_star_uniformity(args):
    spec, label = _build_spec(args)
    scheme = _scheme(args, [args.n], args.avg)
    _, b_last = scheme.last
    block = _get_block(args, spec, label, 1, b_last + 2 * args.h + args.s + 2)
    res = uniformity.local_star_seminorm(block, scheme, args.s, args.h)
    config = _analysis_config(args, "star-uniformity")
    _write_json(args.out, config, {"s": res.s, "method": "star", "N": b_last,
                                   "H": res.window, "value": res.value,
                                   "clamped": False, "estimate": res.estimate,
                                   "per_interval": list(res.per_interval)})
    return config, [args.out], 0


def cmd_pretentious(args):
    spec, _ = _build_spec(args)
    n_list = parse_int_list(args.n_list)
    grid = pret.GridSpec(window=(args.window if args.window in ("auto", "full")
                                 else float(args.window)), step=args.step)
    rows, growth = pret.strong_aperiodicity_scan(spec, n_list, args.q_max, grid)
    config = _analysis_config(args, "pretentious")
    out_rows = [(r.modulus, r.index, r.n, float(r.min_value), float(r.argmin_t),
                 int(growth)) for r in rows]
    _write_csv(args.out, config,
               ["q", "character_index", "N", "min_value", "argmin_t",
                "growth_flag"], out_rows)
    return config, [args.out], 0


def cmd_katai(args):
    spec, label = _build_spec(args)
    block = _get_block(args, spec, label, 1, args.n + 1)
    res = correlations.katai_bilinear_max(block, args.n, args.k, jobs=args.jobs)
    config = _analysis_config(args, "katai")
    rows = [(p, q, m, float(v)) for (p, q, m, v) in res.table]
    _write_csv(args.out, config, ["p", "q", "M", "abs_value"], rows)
    print(f"katai max {fmt(res.max_value)} at (p, q) = {res.argmax}")
    return config, [args.out], 0


def cmd_furstenberg(args):
    spec, label = _build_spec(args)
    scheme = _scheme(args, [args.n], args.avg)
    a, b = scheme.last
    need = b + args.ell + 1
    if args.with_ergodicity:
        need = max(need, b + args.n_cap + args.shift_cap + 2)
    block = _get_block(args, spec, label, 1, need + 1)
    measure = furstenberg.empirical_measure(block, (a, b), args.ell, scheme.kind,
                                            jobs=args.jobs)
    config = _analysis_config(args, "furstenberg")
    _write_json(args.out, config, measure.report())
    outputs = [args.out]
    if args.with_ergodicity:
        rep = furstenberg.ergodicity_diagnostic(
            block, scheme, shift_cap=args.shift_cap, n_cap=args.n_cap,
            seed=args.seed)
        div = furstenberg.bernoulli_divergence(measure)
        epath = args.out + ".ergodicity.json"
        _write_json(epath, config, {
            "max_deviation": rep.max_deviation, "n_cap": rep.n_cap,
            "bernoulli": div,
            "pairs": [{"b_shifts": list(p.b_shifts), "c_shifts": list(p.c_shifts),
                       "lhs": p.lhs, "rhs": p.rhs, "deviation": p.deviation}
                      for p in rep.pairs]})
        outputs.append(epath)
    return config, outputs, 0


def cmd_nilseq(args):
    alpha = nilseq.named_real(args.alpha)
    beta = nilseq.named_real(args.beta)
    orbit = nilseq.heisenberg_orbit(nilseq.OrbitSpec(alpha, beta, args.length))
    config = _analysis_config(args, "nilseq",
                              {"alpha_value": alpha, "beta_value": beta})
    rows = [(i + 1, float(orbit.x[i]), float(orbit.y[i]), float(orbit.z[i]))
            for i in range(len(orbit))]
    _write_csv(args.out, config, ["n", "x", "y", "z"], rows)
    outputs = [args.out]
    if args.char_freq or args.weyl_xy:
        payload = {}
        if args.char_freq:
            vals = nilseq.vertical_character_eval(orbit, args.char_freq)
            payload["vertical_character"] = {
                "k": args.char_freq, "abs_mean": float(abs(np.mean(vals)))}
        if args.weyl_xy:
            freqs = [tuple(int(x) for x in v.split(","))
                     for v in args.weyl_xy.split(";")]
            pts = np.stack([orbit.x, orbit.y], axis=1)
            payload["weyl_xy"] = nilseq.weyl_test(pts, freqs)
        wpath = args.out + ".weyl.json"
        _write_json(wpath, config, payload)
        outputs.append(wpath)
    return config, outputs, 0


def _check_gcs(args, rng):
    eps = uniformity.eps_star(args.s)
    rows = []
    for seed in range(args.seeds):
        r = np.random.default_rng((args.seed, seed))
        seqs = [np.exp(2j * np.pi * r.random(args.m)) for _ in eps]
        chk = uniformity.gcs_check(seqs, args.s, args.m)
        rows.append({"seed": seed, "lhs": chk.lhs, "rhs": chk.rhs,
                     "holds": chk.holds})
    return rows


def _check_nonper(args, rng):
    eps = uniformity.eps_star(args.s)
    rows = []
    for seed in range(args.seeds):
        r = np.random.default_rng((args.seed, seed))
        seqs = [(r.integers(0, 2, (args.s + 1) * args.m) * 2 - 1).astype(float)
                for _ in eps]
        chk = uniformity.nonperiodic_gcs_check(seqs, args.s, args.m)
        rows.append({"seed": seed, "lhs": chk.lhs, "rhs": chk.rhs,
                     "holds": chk.holds, "needed": chk.detail["needed"]})
    return rows


def _check_vdc(args, rng):
    rows = []
    for seed in range(args.seeds):
        r = np.random.default_rng((args.seed, seed))
        m = int(r.integers(16, args.m + 1)) if args.m > 16 else args.m
        rr = int(r.integers(1, m + 1))
        vals = (r.integers(0, 2, m + rr) * 2 - 1).astype(float)
        chk = uniformity.vdc_check(vals, m, rr)
        rows.append({"seed": seed, "M": m, "R": rr, "lhs": chk.lhs,
                     "rhs": chk.rhs, "holds": chk.holds})
    return rows


def _check_monotonicity(args, rng):
    rows = []
    for seed in range(args.seeds):
        r = np.random.default_rng((args.seed, seed))
        n = int(r.integers(4, 65))
        a = (r.integers(0, 2, n) * 2 - 1).astype(float)
        u = [uniformity.gowers_zn(a, s, method="recursive").value
             for s in (1, 2, 3)]
        holds = u[0] <= u[1] + 1e-9 and u[1] <= u[2] + 1e-9
        rows.append({"seed": seed, "N": n, "u1": u[0], "u2": u[1], "u3": u[2],
                     "holds": holds})
    return rows


def cmd_check(args):
    suites = {"gcs": _check_gcs, "nonper": _check_nonper, "vdc": _check_vdc,
              "monotonicity": _check_monotonicity}
    names = list(suites) if args.suite == "all" else [args.suite]
    rng = np.random.default_rng(args.seed)
    payload = {}
    all_hold = True
    for name in names:
        rows = suites[name](args, rng)
        payload[name] = rows
        all_hold &= all(r["holds"] for r in rows)
    config = _analysis_config(args, "check")
    _write_json(args.out, config, {"suites": payload, "all_hold": all_hold})
    return config, [args.out], 0 if all_hold else 1


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(p, spec_flags=True):
    p.add_argument("--out", "-o", required=True, help="report file path")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=parse_count, default=0)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--use-cache", action="store_true")
    if spec_flags:
        p.add_argument("--func", choices=["liouville", "mobius"])
        p.add_argument("--dirichlet", help="q:index")
        p.add_argument("--custom", help="JSON {prime: phase-in-turns}")
        p.add_argument("--synthetic",
                       help="constant:<c> | alternating | poly:<c0,c1,..> | "
                            "block-a | block-b | random")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mulab",
        description="Finite-scale statistics of bounded multiplicative functions")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="materialize a sequence block")
    _add_common(p)
    p.add_argument("--start", type=parse_count, default=1)
    p.add_argument("--end", type=parse_count, required=True)
    p.add_argument("--write-cache", action="store_true")
    p.set_defaults(handler=cmd_sieve)

    p = sub.add_parser("correlate", help="Chowla/Elliott correlation averages")
    _add_common(p)
    p.add_argument("--shifts", required=True, help="comma list of shifts n_i")
    p.add_argument("--dilations", help="comma list of dilations c_i (default 1s)")
    p.add_argument("--conj", help="comma list of 0/1 conjugation flags")
    p.add_argument("--N", dest="n", type=parse_count, required=True)
    p.add_argument("--avg", choices=["cesaro", "log"], default="cesaro")
    p.add_argument("--scheme", help="JSON intervals or prefix rule")
    p.set_defaults(handler=cmd_correlate)

    p = sub.add_parser("patterns", help="sign-pattern densities")
    _add_common(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--N", dest="n", type=parse_count, required=True)
    p.add_argument("--avg", choices=["cesaro", "log"], default="cesaro")
    p.add_argument("--scheme")
    p.set_defaults(handler=cmd_patterns)

    p = sub.add_parser("gowers", help="Gowers norms over Z_N or [N]")
    _add_common(p)
    p.add_argument("--N", dest="n", type=parse_count, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--method", default="auto",
                   choices=["auto", "direct", "fft_u2", "recursive"])
    p.add_argument("--norm", choices=["zn", "interval"], default="interval")
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(handler=cmd_gowers)

    p = sub.add_parser("local-uniformity", help="box-truncated local seminorm")
    _add_common(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--H", dest="h", type=parse_count, required=True)
    p.add_argument("--N-list", dest="n_list", required=True)
    p.add_argument("--H-ladder", dest="h_ladder")
    p.set_defaults(handler=cmd_local_uniformity)

    p = sub.add_parser("star-uniformity", help="windowed-norm star seminorm")
    _add_common(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--H", dest="h", type=parse_count, required=True)
    p.add_argument("--N", dest="n", type=parse_count, required=True)
    p.add_argument("--avg", choices=["cesaro", "log"], default="cesaro")
    p.add_argument("--scheme")
    p.set_defaults(handler=cmd_star_uniformity)

    p = sub.add_parser("pretentious", help="distance scans M(f chi; N)")
    _add_common(p)
    p.add_argument("--N-list", dest="n_list", required=True)
    p.add_argument("--q-max", dest="q_max", type=int, default=1)
    p.add_argument("--window", default="auto")
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(handler=cmd_pretentious)

    p = sub.add_parser("katai", help="bilinear orthogonality criterion table")
    _add_common(p)
    p.add_argument("--N", dest="n", type=parse_count, required=True)
    p.add_argument("--K", dest="k", type=parse_count, required=True)
    p.set_defaults(handler=cmd_katai)

    p = sub.add_parser("furstenberg", help="empirical cylinder measure")
    _add_common(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--N", dest="n", type=parse_count, required=True)
    p.add_argument("--avg", choices=["cesaro", "log"], default="cesaro")
    p.add_argument("--scheme")
    p.add_argument("--with-ergodicity", action="store_true")
    p.add_argument("--n-cap", dest="n_cap", type=parse_count, default=1000)
    p.add_argument("--shift-cap", dest="shift_cap", type=int, default=5)
    p.set_defaults(handler=cmd_furstenberg)

    p = sub.add_parser("nilseq", help="Heisenberg orbit and Weyl sums")
    _add_common(p, False)
    p.add_argument("--alpha", required=True,
                   help="decimal or sqrt2m1 | sqrt3m1 | golden")
    p.add_argument("--beta", required=True)
    p.add_argument("--length", type=parse_count, required=True)
    p.add_argument("--char-freq", dest="char_freq", type=int, default=0)
    p.add_argument("--weyl-xy", dest="weyl_xy",
                   help="semicolon list of integer vectors, e.g. '1,0;0,1'")
    p.set_defaults(handler=cmd_nilseq)

    p = sub.add_parser("check", help="inequality suites")
    _add_common(p, False)
    p.add_argument("--suite", required=True,
                   choices=["gcs", "nonper", "vdc", "monotonicity", "all"])
    p.add_argument("--seeds", type=parse_count, default=100)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--M", dest="m", type=parse_count, default=16)
    p.set_defaults(handler=cmd_check)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    t0 = time.monotonic()
    try:
        if args.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
        config, outputs, code = args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MulabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    wall_ms = (time.monotonic() - t0) * 1000.0
    _write_manifest(args, config, wall_ms, outputs)
    return code


if __name__ == "__main__":
    sys.exit(main())
