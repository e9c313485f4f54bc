"""Command-line harness: ``expandlab <scenario> --config FILE [--out CSV]``.

Every scenario writes a CSV report (rows sorted by label, then n) and a
plain-text summary that echoes the constants used.

Exit status: 0 success, 2 invalid configuration, 3 budget exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from expandlab import constructions as cons
from expandlab import expansion as ex
from expandlab import groupaction as ga
from expandlab.config import (
    SCENARIOS,
    ExperimentConfig,
    GenContext,
    build_action,
    build_set,
    load_config,
    load_family,
    read_lines,
    resolve_path,
    split_args,
    split_list,
)
from expandlab.errors import (
    ArityError,
    BudgetExceededError,
    ConfigError,
    DegenerateInputError,
    InvariantViolation,
    KindMismatchError,
)
from expandlab.polyalg.addmul import detect_addmul
from expandlab.polyalg.decompose import decompose_uni
from expandlab.polyalg.family import ADDITIVE, MULTIPLICATIVE, PolyFamily, classify_family, eps_structured
from expandlab.polyalg.parser import parse_any, parse_poly
from expandlab.polyalg.unipoly import UniPoly

COLUMNS = ("scenario", "label", "n", "f_count", "image", "incidence", "log_scale",
           "coarse_dim", "slope", "residual", "value")

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class Report:
    scenario: str
    rows: list
    summary: list

    def add(self, label, **cols):
        self.rows.append({"scenario": self.scenario, "label": label, **cols})

    def sorted_rows(self) -> list:
        def key(r):
            n = r.get("n")
            return (r["label"], n is None, n if n is not None else 0)
        return sorted(self.rows, key=key)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.sorted_rows():
            w.writerow([_cell(r.get(c)) for c in COLUMNS])
        return buf.getvalue()


def _constants(cfg: ExperimentConfig) -> str:
    xi = cfg.params.get("xi")
    return (f"constants: c={cfg.param('c', 1.0)!r} c_prime={cfg.param('c_prime', 1.0)!r} "
            f"xi={'|A| per row' if xi is None else repr(xi)}")


def _sizes(cfg) -> list:
    return [int(s) for s in split_list(cfg.inputs["sizes"])] if "sizes" in cfg.inputs else [None]


def _fit(points):
    pts = [(n, m) for n, m in points if m >= 1]
    if len(pts) < 2:
        return None
    return ex.fit_exponent(pts)


# --------------------------------------------------------------------------
# scenarios


def run_measure(cfg, rep, workers):
    ctx = GenContext(cfg.seed, None, cfg.base_dir)
    poly = parse_poly(cfg.inputs["poly"]) if "poly" in cfg.inputs else None
    family = None if poly is not None else load_family(cfg)
    f_count = 1 if poly is not None else len(family)
    results = []
    for n in _sizes(cfg):
        ctx.n = n
        A = build_set(cfg.inputs["set"], ctx)
        if poly is not None:
            yspecs = split_list(cfg.inputs.get("ysets", ""), ";") or [cfg.inputs["set"]]
            if len(yspecs) == 1:
                yspecs = yspecs * (poly.arity - 1)
            Bs = [build_set(s, ctx) for s in yspecs]
            image = ex.image_size_multi(poly, A, Bs, workers)
        else:
            image = ex.image_size(family, A, workers)
        results.append((len(A), image))
    fit = _fit(results)
    for size, image in results:
        xi = cfg.param("xi", float(size)) if size > 1 or "xi" in cfg.params else None
        cd = ex.coarse_dim(image, xi) if xi else None
        rep.add(cfg.label, n=size, f_count=f_count, image=image,
                log_scale=math.log(xi) if xi else None, coarse_dim=cd.value if cd else None,
                slope=fit.slope if fit else None, residual=fit.residual if fit else None)
    what = cfg.inputs.get("poly") or cfg.inputs.get("family") or cfg.inputs.get("family_file")
    rep.summary.append(f"measured {what} on {cfg.inputs['set']}")
    if fit:
        rep.summary.append(f"fitted slope {fit.slope!r} (empirical 1+eta), rms log residual {fit.residual!r}")


def run_classify(cfg, rep, workers):
    family = PolyFamily(tuple(load_family(cfg)))
    eps = cfg.params["eps"]
    verdict = eps_structured(family, eps)
    n = len(family)
    for kind, flag, largest in ((ADDITIVE, verdict.eps_additive, verdict.largest_additive),
                                (MULTIPLICATIVE, verdict.eps_multiplicative, verdict.largest_multiplicative)):
        rep.add(f"{cfg.label}:{kind}:largest", n=n, f_count=n, value=largest)
        rep.add(f"{cfg.label}:{kind}:eps_structured", n=n, f_count=n, value=flag)
        classes = classify_family(family, kind)
        rep.add(f"{cfg.label}:{kind}:classes", n=n, f_count=n, value=len(classes))
        top = classes[0]
        rep.summary.append(f"{kind}: {len(classes)} classes, largest {len(top)} with inner "
                           f"{top.inner} and outer {top.outer}; eps={eps!r} structured={flag}")


def run_decompose(cfg, rep, workers):
    if "poly_file" in cfg.inputs:
        texts = read_lines(resolve_path(cfg.inputs["poly_file"], GenContext(base_dir=cfg.base_dir)))
    else:
        texts = split_list(cfg.inputs["poly"], ";")
    for i, text in enumerate(texts):
        f = parse_any(text)
        label = f"{cfg.label}:{i}"
        if isinstance(f, UniPoly):
            u = f
            decs = decompose_uni(u)
            rep.add(label, n=u.degree, value=len(decs))
            for d in decs:
                rep.summary.append(f"{text} = ({d.outer})∘({d.inner})")
            if not decs:
                rep.summary.append(f"{text}: indecomposable")
        else:
            form = detect_addmul(f)
            rep.add(label, n=f.total_degree(), value=form.kind)
            rep.summary.append(f"{text}: {form.describe()}")


def run_incidence(cfg, rep, workers):
    mode = cfg.inputs["mode"]
    vs = ex.GRAPH_VARIABLES if mode == "graph" else ex.IMPLICIT_VARIABLES
    U = ex.SurfaceSpec(mode, parse_poly(cfg.inputs["surface"], variables=vs))
    ctx = GenContext(cfg.seed, None, cfg.base_dir)
    results = []
    for n in _sizes(cfg):
        ctx.n = n
        A, D, B = (build_set(cfg.inputs[k], ctx) for k in ("A", "D", "B"))
        inc = ex.incidence_surface(U, A, D, B, workers)
        results.append((len(A) * len(D), inc, len(A)))
    fit = _fit([(ad, inc) for ad, inc, _ in results])
    for ad, inc, na in results:
        scale = cfg.param("xi", float(ad))
        cd = ex.coarse_dim(inc, scale).value if inc >= 1 and scale > 1 else None
        rep.add(cfg.label, n=na, incidence=inc, log_scale=math.log(scale) if scale > 1 else None,
                coarse_dim=cd, slope=fit.slope if fit else None, residual=fit.residual if fit else None)
    rep.summary.append(f"surface {mode}: {cfg.inputs['surface']}; coarse_dim is log|U∩(AxDxB)| / log(|A||D|)")


def run_construct(cfg, rep, workers):
    ctx = GenContext(cfg.seed, None, cfg.base_dir)
    for spec in split_list(cfg.inputs["specs"], ";"):
        obj = build_set(spec, ctx)
        if isinstance(obj, PolyFamily):
            rep.add(f"{cfg.label}:{spec}", n=len(obj), f_count=len(obj))
            rep.summary.append(f"{spec}: " + ", ".join(str(p) for p in obj.members[:8])
                               + (" ..." if len(obj) > 8 else ""))
        else:
            rep.add(f"{cfg.label}:{spec}", n=len(obj))
            rep.summary.append(f"{spec}: {len(obj)} elements of kind {obj.kind}")


def run_span(cfg, rep, workers):
    ks = [int(k) for k in split_list(cfg.inputs.get("k", "1,2,3"))]
    method = cfg.inputs.get("method", "auto")
    budget = cfg.param("budget", cons.DEFAULT_BUDGET, int)
    for N in (int(v) for v in split_list(cfg.inputs["N"])):
        inst = cons.gen_span(N)
        rep.summary.append(inst.describe())
        for k in ks:
            size, cd = cons.span_iterated_sumset(inst, k, method, budget)
            rep.add(f"{cfg.label}:k={k}", n=N, image=size, log_scale=math.log(N),
                    coarse_dim=cd.value, value=cons.span_limit(k))
    rep.summary.append("value column: large-N coarse dimension 2 - 2^-(k-1)")


def run_tower(cfg, rep, workers):
    for n in (int(v) for v in split_list(cfg.inputs["n"])):
        inst = cons.gen_counterexample(n)
        image = inst.image()
        check = None
        if n <= 4:
            check = sorted(t.value() for t in image) == sorted(inst.image_values())
            if not check:
                raise InvariantViolation(f"big-integer evaluation disagrees for n={n}")
        rep.add(cfg.label, n=n, f_count=n, image=len(image), value=check)
    rep.summary.append("family t^(2^i), 0<i<=n, on {2^(2^i) : i<=n}; value=1 marks a big-integer cross-check")


def _subset(cfg, action, key, role):
    parse = action.parse_element if role == ga.GROUP else action.parse_point
    universe = action.elements() if role == ga.GROUP else action.points()
    if f"{key}_file" in cfg.inputs:
        path = resolve_path(cfg.inputs[f"{key}_file"], GenContext(base_dir=cfg.base_dir))
        return ga.load_subset(action, path, role)
    spec = cfg.inputs[key].strip()
    if spec == "all":
        return ga.ActionSubset(role, frozenset(universe))
    if spec.startswith("range(") and spec.endswith(")"):
        lo, hi = (int(v) for v in split_args(spec[6:-1]))
        return ga.ActionSubset(role, frozenset(parse(str(v)) for v in range(lo, hi)))
    body = spec[1:-1] if spec.startswith("{") else spec
    return ga.ActionSubset(role, frozenset(parse(v) for v in split_list(body, ";")))


def run_bsg(cfg, rep, workers):
    action = build_action(cfg)
    S = _subset(cfg, action, "S", ga.GROUP)
    A = _subset(cfg, action, "A", ga.POINT)
    delta, n, t = cfg.param("delta", 0.3), cfg.param("n", 1, int), cfg.param("t", 0.0)
    K = cfg.param("K", 3, int)
    params = ex.BoundParams(delta=delta, n=n, t=t, c=cfg.param("c", 1.0), c_prime=cfg.param("c_prime", 1.0))
    res = ga.bsg_extract(action, S, A, params, max_pairs=cfg.param("max_pairs", 20_000, int))
    verdict = ga.verify_bsg(action, res, A, S, delta, n, t)
    cert = ga.verify_approx_subgroup(action, res.H, K)
    st = res.stats
    size = len(A)
    for name, v in (("H", st.H), ("T", st.T), ("H_cap_hS", st.H_cap_hS), ("HT", st.HT),
                    ("delta_star", res.delta_star), ("verify_bsg", verdict.ok),
                    ("approx_subgroup_K", cert.ok)):
        rep.add(f"{cfg.label}:{name}", n=size, incidence=st.incidences, value=v)
    rep.summary.append(f"{action.name}: |S|={len(S)} |A|={size} incidences={st.incidences}")
    rep.summary.append(f"h={action.format_element(res.h)} search choice={res.choice}")
    checks = {k: v for k, v in verdict.report.items() if k != "stats"}
    rep.summary.append(f"verify_bsg(delta={delta!r}, n={n}, t={t!r}): {verdict.ok} {checks}")
    cover = None if cert.cover is None else [action.format_element(g) for g in cert.cover]
    rep.summary.append(f"approximate subgroup K={K}: {cert.ok} cover={cover} ({cert.method})")


def run_stab(cfg, rep, workers):
    action = build_action(cfg)
    A = _subset(cfg, action, "A", ga.POINT)
    n = cfg.params["n"]
    budget = cfg.param("budget", 20_000_000, int)
    if "S" in cfg.inputs or "S_file" in cfg.inputs:
        S = _subset(cfg, action, "S", ga.GROUP)
        gen = ga.generated_subgroup(action, S, cfg.param("k", 6, int))
        W = gen.W
        rep.summary.append(f"W = S^{gen.steps} ({'generated subgroup, fixpoint reached' if gen.exact else 'no fixpoint yet'})")
    else:
        W = ga.ActionSubset.group(action.elements())
        rep.summary.append("W = whole group")
    report = ga.stab_count(action, W, A, n, budget)
    rep.add(f"{cfg.label}:nontrivial", n=n, value=report.count)
    for size, count in report.histogram.items():
        rep.add(f"{cfg.label}:stab={size}", n=n, value=count)
    rep.summary.append(f"{action.name}: {report.count} of {report.tuples} {n}-tuples have nontrivial stabilizer in W (|W|={report.w_size})")
    if "t" in cfg.params:
        thr = len(A) ** cfg.params["t"]
        rep.summary.append(f"tuples with |Stab| >= |A|^t = {thr!r}: {report.at_least(thr)}")


def run_bounds(cfg, rep, workers):
    p = cfg.params
    eps, c, cp = p["eps"], cfg.param("c", 1.0), cfg.param("c_prime", 1.0)
    m = cfg.param("m", 1, int)
    rep.add(f"{cfg.label}:eta_unbalanced", n=m, value=ex.eta_unbalanced_er(m, eps, cp))
    rep.add(f"{cfg.label}:eta0", value=ex.eta0_main1d(eps, c))
    bp = ex.BoundParams(eps=eps, gamma=cfg.param("gamma", 0.5), gamma_prime=cfg.param("gamma_prime", 0.75),
                        k=cfg.param("k", 3, int), r=cfg.param("r", 3.0), c=c, c_prime=cp)
    rep.add(f"{cfg.label}:delta_jz", n=bp.k, value=ex.delta_jz(bp))
    rep.summary.append(f"eps={eps!r} m={m} gamma={bp.gamma!r} gamma_prime={bp.gamma_prime!r} k={bp.k} r={bp.r!r}")
    rep.summary.append("c and c_prime are placeholders for unspecified absolute constants")


RUNNERS = {
    "measure": run_measure,
    "classify": run_classify,
    "decompose": run_decompose,
    "incidence": run_incidence,
    "construct": run_construct,
    "span": run_span,
    "tower": run_tower,
    "bsg": run_bsg,
    "stab": run_stab,
    "bounds": run_bounds,
}


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> Report:
    rep = Report(cfg.scenario, [], [])
    RUNNERS[cfg.scenario](cfg, rep, workers)
    rep.summary.insert(0, f"scenario={cfg.scenario} label={cfg.label} seed={cfg.seed}")
    rep.summary.insert(1, _constants(cfg))
    return rep


def plan(cfg: ExperimentConfig, out: Optional[str]) -> str:
    lines = [f"scenario: {cfg.scenario}", f"label: {cfg.label}", f"seed: {cfg.seed}"]
    for k, v in sorted(cfg.inputs.items()):
        lines.append(f"input {k} = {v}")
    for k, v in sorted(cfg.params.items()):
        lines.append(f"param {k} = {v!r}")
    lines.append(f"csv -> {out or 'stdout'}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="expandlab", description="Exact expansion and approximate-subgroup experiments.")
    sub = ap.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        sp = sub.add_parser(name, help=f"run the {name} scenario")
        sp.add_argument("--config", required=True, help="scenario config file")
        sp.add_argument("--out", help="CSV output path (default: [output] csv, else stdout)")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--threads", type=int, default=1, help="worker processes for counting")
        sp.add_argument("--dry-run", action="store_true", help="validate and print the plan only")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.scenario)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        if args.seed < 0 or args.seed >= 1 << 64:
            print("config error: seed must be an unsigned 64-bit integer", file=sys.stderr)
            return EXIT_CONFIG
        cfg.seed = args.seed
    if args.threads < 1:
        print("config error: threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or cfg.output.get("csv")
    if out and not Path(out).is_absolute() and not args.out:
        out = str(cfg.base_dir / out)
    if args.dry_run:
        print(plan(cfg, out))
        return EXIT_OK
    try:
        rep = run_experiment(cfg, args.threads)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except AssertionError as exc:  # InvariantViolation included
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (DegenerateInputError, KindMismatchError, ArityError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = rep.csv_text()
    summary = "\n".join(rep.summary) + "\n"
    if out:
        Path(out).write_text(text)
        summary_path = cfg.output.get("summary")
        summary_path = (cfg.base_dir / summary_path) if summary_path else Path(str(out) + ".summary.txt")
        Path(summary_path).write_text(summary)
    else:
        sys.stdout.write(text)
    sys.stderr.write(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
