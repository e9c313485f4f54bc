"""Experiment configuration: INI-style text, one scenario per file.

Sections: ``[scenario]`` (kind, label), ``[input]`` (generator specs,
polynomials, file paths), ``[params]`` (eps, delta, k, c, c_prime, xi,
budget, seed, ...), ``[output]`` (csv, summary). Validation collects every
problem instead of stopping at the first one.
"""

from __future__ import annotations

import configparser
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from expandlab.constructions import gen_ap, gen_counterexample, gen_gp, gen_span, gen_structured_family
from expandlab.errors import ConfigError
from expandlab.exactnum import parse_element, parse_rat
from expandlab.expansion import RATIONAL, FiniteSet
from expandlab.polyalg.parser import parse_any, parse_poly, parse_unipoly

SCENARIOS = ("measure", "classify", "decompose", "incidence", "construct", "span", "tower", "bsg", "stab", "bounds")

_CALL = re.compile(r"^\s*([A-Za-z_]\w*)\s*\((.*)\)\s*$", re.S)


def split_args(text: str) -> list:
    """Split on top-level commas, respecting (), {} and []."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail or out:
        out.append(tail)
    return out


def split_list(text: str, sep: str = ",") -> list:
    return [p.strip() for p in text.split(sep) if p.strip()]


@dataclass
class GenContext:
    seed: int = 0
    n: Optional[int] = None
    base_dir: Path = Path(".")


def _num(text: str, ctx: GenContext):
    """A rational literal or an arithmetic expression in the series size n."""
    text = text.strip()
    if "n" in text:
        if ctx.n is None:
            raise ValueError("'n' used outside a sized series")
        text = text.replace("n", f"({ctx.n})")
    try:
        return parse_rat(text)
    except ValueError:
        p = parse_poly(text, variables=("x",))
        if not p.is_constant():
            raise ValueError(f"{text!r} is not a number") from None
        return p.constant_term()


def _int(text: str, ctx: GenContext) -> int:
    v = _num(text, ctx)
    if getattr(v, "denominator", 1) != 1:
        raise ValueError(f"{text!r} is not an integer")
    return int(v)


def resolve_path(path: str, ctx: GenContext) -> Path:
    p = Path(path.strip())
    return p if p.is_absolute() else ctx.base_dir / p


def read_lines(path: Path) -> list:
    with open(path) as fh:
        return [ln.split("#", 1)[0].strip() for ln in fh if ln.split("#", 1)[0].strip()]


def build_set(spec: str, ctx: GenContext):
    """FiniteSet (or PolyFamily for family(...)) from a generator spec."""
    spec = spec.strip()
    if spec.startswith("{") and spec.endswith("}"):
        return FiniteSet.of([parse_element(x) for x in split_list(spec[1:-1])] or [], RATIONAL)
    m = _CALL.match(spec)
    if not m:
        raise ValueError(f"unrecognized generator spec {spec!r}")
    name, args = m.group(1), split_args(m.group(2))

    def want(k):
        if len(args) != k:
            raise ValueError(f"{name}() takes {k} arguments, got {len(args)}")

    if name == "ap":
        want(3)
        return gen_ap(_num(args[0], ctx), _num(args[1], ctx), _int(args[2], ctx))
    if name == "gp":
        want(3)
        return gen_gp(_num(args[0], ctx), _num(args[1], ctx), _int(args[2], ctx))
    if name == "range":
        want(2)
        lo, hi = _int(args[0], ctx), _int(args[1], ctx)
        if hi <= lo:
            raise ValueError("range(lo,hi) needs hi > lo")
        return FiniteSet.of(range(lo, hi), RATIONAL)
    if name == "rand":
        want(3)
        n, lo, hi = (_int(a, ctx) for a in args)
        if hi - lo + 1 < n:
            raise ValueError(f"rand({n},{lo},{hi}): range too small for {n} distinct values")
        rng = random.Random(f"{ctx.seed}:{spec}:{ctx.n}")
        return FiniteSet.of(rng.sample(range(lo, hi + 1), n), RATIONAL)
    if name == "file":
        want(1)
        return FiniteSet.of([parse_element(x) for x in read_lines(resolve_path(args[0], ctx))])
    if name == "span":
        want(1)
        return gen_span(_int(args[0], ctx)).elements()
    if name == "tower":
        want(1)
        return gen_counterexample(_int(args[0], ctx)).A
    if name == "family":
        want(4)
        g, h = parse_unipoly(args[1]), parse_unipoly(args[2])
        return gen_structured_family(args[0].strip(), g, h, build_set(args[3], ctx))
    raise ValueError(f"unknown generator {name!r}")


def spec_paths(spec: str) -> list:
    """File paths mentioned by file(...) specs."""
    return re.findall(r"file\(([^()]*)\)", spec)


@dataclass
class ExperimentConfig:
    scenario: str
    label: str
    inputs: dict
    params: dict
    output: dict
    base_dir: Path = Path(".")
    seed: int = 0
    raw: dict = field(default_factory=dict)

    def param(self, key, default=None, cast=float):
        v = self.params.get(key)
        return default if v is None else cast(v)


_FLOAT_PARAMS = ("eps", "delta", "t", "c", "c_prime", "xi", "gamma", "gamma_prime", "r")
_INT_PARAMS = ("k", "m", "n", "budget", "seed", "K", "max_pairs")

# (section, key) pairs every scenario needs; alternatives separated by "|"
_REQUIRED = {
    "measure": [("input", "set"), ("input", "sizes"), ("input", "family|family_file|poly")],
    "classify": [("input", "family|family_file"), ("params", "eps")],
    "decompose": [("input", "poly|poly_file")],
    "incidence": [("input", "surface"), ("input", "mode"), ("input", "A"), ("input", "D"), ("input", "B")],
    "construct": [("input", "specs")],
    "span": [("input", "N")],
    "tower": [("input", "n")],
    "bsg": [("input", "action"), ("input", "S|S_file"), ("input", "A|A_file")],
    "stab": [("input", "action"), ("input", "A|A_file"), ("params", "n")],
    "bounds": [("params", "eps")],
}


def validate_config(text: str, base_dir=".", scenario: Optional[str] = None):
    """Parse and check a config; returns (ExperimentConfig or None, list of errors)."""
    errors = []
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        return None, [f"malformed config: {exc}".splitlines()[0]]
    sec = {s: dict(cp[s]) for s in cp.sections()}
    kind = sec.get("scenario", {}).get("kind", scenario)
    if scenario and kind and kind != scenario:
        errors.append(f"config scenario {kind!r} does not match subcommand {scenario!r}")
    if kind not in SCENARIOS:
        errors.append(f"unknown scenario {kind!r}; expected one of {', '.join(SCENARIOS)}")
        return None, errors
    inputs, params, output = sec.get("input", {}), sec.get("params", {}), sec.get("output", {})
    label = sec.get("scenario", {}).get("label", kind)
    base = Path(base_dir)

    for section, keys in _REQUIRED[kind]:
        pool = {"input": inputs, "params": params}[section]
        if not any(k in pool for k in keys.split("|")):
            errors.append(f"[{section}] needs {' or '.join(keys.split('|'))}")

    for key in _FLOAT_PARAMS:
        if key in params:
            try:
                params[key] = float(parse_rat(params[key])) if "/" in params[key] else float(params[key])
            except (ValueError, ZeroDivisionError):
                errors.append(f"{key} must be a number, got {params[key]!r}")
                params.pop(key)
    for key in _INT_PARAMS:
        if key in params:
            try:
                params[key] = int(params[key])
            except ValueError:
                errors.append(f"{key} must be an integer, got {params[key]!r}")
                params.pop(key)
    if "eps" in params:
        eps = params["eps"]
        if kind == "bounds":
            if not 0 < eps <= 1:
                errors.append("eps must be in (0,1]")
        elif not 0 < eps < 1:
            errors.append("eps must be in (0,1)")
    for key in ("c", "c_prime"):
        if key in params and params[key] <= 0:
            errors.append(f"{key} must be positive")
    if "xi" in params and params["xi"] <= 1:
        errors.append("xi must exceed 1")
    if "delta" in params and params["delta"] < 0:
        errors.append("delta must be >= 0")
    if "budget" in params and params["budget"] < 1:
        errors.append("budget must be positive")

    # referenced files
    for key, value in sorted(inputs.items()):
        paths = []
        if key.endswith("_file") or key == "action_file":
            paths.append(value)
        paths.extend(spec_paths(value))
        for p in paths:
            full = resolve_path(p, GenContext(base_dir=base))
            if not full.is_file():
                errors.append(f"missing file: {full}")

    seed = params.get("seed", 0)
    cfg = ExperimentConfig(kind, label, inputs, params, output, base, seed, sec)
    if not errors:
        errors.extend(_check_inputs(cfg))
    return (None if errors else cfg), errors


def _check_inputs(cfg: ExperimentConfig) -> list:
    """Parse polynomials and generator specs once so syntax errors surface early."""
    errors = []
    ctx = GenContext(cfg.seed, None, cfg.base_dir)
    inp = cfg.inputs

    def attempt(what, fn):
        try:
            fn()
        except Exception as exc:  # every failure becomes a reported config error
            errors.append(f"{what}: {exc}")

    if "sizes" in inp:
        try:
            sizes = [int(s) for s in split_list(inp["sizes"])]
            if not sizes or min(sizes) < 1:
                raise ValueError
            if len(set(sizes)) != len(sizes):
                errors.append("sizes must be distinct")
            ctx.n = sizes[0]
        except ValueError:
            errors.append(f"sizes must be a comma list of positive integers, got {inp['sizes']!r}")
    for key in ("set", "A", "D", "B", "ysets", "params_set"):
        if key in inp and cfg.scenario not in ("bsg", "stab"):
            for spec in split_list(inp[key], ";"):
                attempt(f"[input] {key}", lambda s=spec: build_set(s, ctx))
    if "family" in inp:
        attempt("[input] family", lambda: load_family(cfg))
    if "poly" in inp:
        if cfg.scenario == "decompose":
            attempt("[input] poly", lambda: [parse_any(p) for p in split_list(inp["poly"], ";")])
        else:
            attempt("[input] poly", lambda: parse_poly(inp["poly"]))
    if "surface" in inp:
        mode = inp.get("mode", "graph")
        if mode not in ("graph", "implicit"):
            errors.append(f"mode must be graph or implicit, got {mode!r}")
        else:
            vs = ("x", "d") if mode == "graph" else ("x", "d", "y0")
            attempt("[input] surface", lambda: parse_poly(inp["surface"], variables=vs))
    if "specs" in inp:
        for spec in split_list(inp["specs"], ";"):
            attempt(f"[input] specs {spec}", lambda s=spec: build_set(s, ctx))
    for key in ("N", "n", "k"):
        if key in inp:
            try:
                vals = [int(s) for s in split_list(inp[key])]
                if key == "N" and min(vals) < 4:
                    errors.append("N must be >= 4")
                if min(vals) < 1:
                    errors.append(f"{key} values must be positive")
            except ValueError:
                errors.append(f"{key} must be a comma list of integers")
    if "action" in inp:
        attempt("[input] action", lambda: build_action(cfg))
    return errors


def load_family(cfg: ExperimentConfig):
    inp = cfg.inputs
    ctx = GenContext(cfg.seed, None, cfg.base_dir)
    if "family_file" in inp:
        return [parse_unipoly(ln) for ln in read_lines(resolve_path(inp["family_file"], ctx))]
    spec = inp["family"].strip()
    if spec.startswith("family("):
        return list(build_set(spec, ctx).members)
    return [parse_unipoly(p) for p in split_list(spec, ";")]


def build_action(cfg: ExperimentConfig):
    from expandlab.groupaction import make_action

    text = cfg.inputs["action"].strip()
    m = _CALL.match(text)
    if not m:
        raise ValueError(f"action must look like cyclic(n), agl1(p), psl2(p) or perm(path); got {text!r}")
    name, args = m.group(1).lower(), split_args(m.group(2))
    if name == "perm":
        path = resolve_path(args[0], GenContext(base_dir=cfg.base_dir))
        if not path.is_file():
            raise ValueError(f"missing file: {path}")
        return make_action("perm", path=path)
    key = "n" if name == "cyclic" else "p"
    return make_action(name, **{key: int(args[0])})


def load_config(path, scenario: Optional[str] = None) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError([f"missing file: {path}"])
    cfg, errors = validate_config(path.read_text(), path.parent, scenario)
    if errors:
        raise ConfigError(errors)
    return cfg


__all__ = [
    "SCENARIOS",
    "ExperimentConfig",
    "GenContext",
    "build_action",
    "build_set",
    "load_config",
    "load_family",
    "split_args",
    "split_list",
    "validate_config",
]
