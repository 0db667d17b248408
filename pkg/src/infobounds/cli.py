"""Command-line front end.

    infobounds <group> <command> [options] [--seed S] [--trials N]
               [--json PATH] [--csv PATH] [--config FILE] [--base bits|nats]

Groups mirror the modules: concentration, entropy, learn, infogen, minimax and
verify.  Exit codes: 0 ok, 1 computation or verification failure, 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from . import concentration as conc
from . import info_gen as ig
from . import learning as lrn
from . import metric_entropy as me
from . import minimax as mm
from . import verify as vf
from .errors import BoundsError
from .rng import substream, tag

SCHEMA_VERSION = "1"
SEED_ENV = "BOUNDS_SEED"
U64 = 1 << 64
LN2 = math.log(2.0)


class UsageError(Exception):
    """Bad flags, subcommands or configuration keys (exit code 2)."""


@dataclass(frozen=True)
class Info:
    """An information quantity with its base tag ("bits" or "nats")."""

    value: float
    base: str

    def __post_init__(self):
        if self.base not in ("bits", "nats"):
            raise ValueError(f"unknown base {self.base!r}")

    def to(self, base: str) -> "Info":
        if base == self.base:
            return self
        factor = LN2 if self.base == "bits" else 1.0 / LN2
        return Info(self.value * factor, base)

    def __add__(self, other: "Info") -> "Info":
        if not isinstance(other, Info):
            return NotImplemented
        if other.base != self.base:
            raise BoundsError(f"refusing to add {self.base} to {other.base}")
        return Info(self.value + other.value, self.base)


@dataclass
class ExperimentConfig:
    command: str
    parameters: dict
    seed: int
    trials: int | None
    output: dict = field(default_factory=dict)
    base: str | None = None


# ---------------------------------------------------------------------------
# command registry
# ---------------------------------------------------------------------------


def _floats(text) -> list:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


def _json_value(text):
    return text if not isinstance(text, str) else json.loads(text)


@dataclass(frozen=True)
class Opt:
    name: str
    type: Callable = str
    default: Any = None
    help: str = ""
    flag: bool = False
    choices: tuple | None = None


@dataclass(frozen=True)
class Command:
    group: str
    name: str
    handler: Callable[[dict, int, int | None], dict]
    opts: tuple = ()
    help: str = ""
    positional: Opt | None = None

    @property
    def key(self) -> str:
        return f"{self.group}.{self.name}"


COMMANDS: dict[str, Command] = {}


def command(group: str, name: str, *opts: Opt, help: str = "", positional: Opt | None = None):
    def wrap(fn):
        c = Command(group, name, fn, tuple(opts), help, positional)
        COMMANDS[c.key] = c
        return fn
    return wrap


def _req(p: dict, key: str):
    if p.get(key) is None:
        raise UsageError(f"missing required parameter --{key.replace('_', '-')}")
    return p[key]


# concentration ------------------------------------------------------------


def _source(name: str, sigma2: float | None):
    if name not in conc.SOURCES:
        raise UsageError(f"unknown source {name!r}; choose from {sorted(conc.SOURCES)}")
    if name == "gaussian" and sigma2 is not None:
        return conc.gaussian_source(0.0, sigma2)
    return conc.SOURCES[name]()


@command("concentration", "tail", Opt("source", str, "gaussian"), Opt("epsilon", float),
         Opt("n", int, 1), Opt("variant", str, "chernoff", choices=("chernoff", "two_sided", "sharp_gaussian")),
         Opt("sigma2", float), help="subgaussian tail bound for a named source")
def _conc_tail(p, seed, trials):
    src = _source(p["source"], p["sigma2"])
    b = conc.subgaussian_tail_bound(src.spec, _req(p, "epsilon"), p["variant"], p["n"])
    return {"bound": b.value, "raw": b.raw, "sided": b.sided, "variant": b.variant,
            "variance_proxy": src.variance_proxy}


@command("concentration", "mc", Opt("source", str, "gaussian"), Opt("epsilon", float), Opt("sample_size", int),
         Opt("sigma2", float), help="Monte Carlo tail frequency against the Chernoff bound")
def _conc_mc(p, seed, trials):
    src = _source(p["source"], p["sigma2"])
    eps = _req(p, "epsilon")
    rep = conc.empirical_tail_check(src, eps, trials or 100_000, seed, p["sample_size"])
    n = p["sample_size"] or 1
    bound = conc.subgaussian_tail_bound(src.spec, eps, "chernoff", n).value
    out = rep.as_dict()
    out.update(bound=bound, holds=rep.frequency <= bound + rep.hoeffding_halfwidth)
    return out


@command("concentration", "sandwich", Opt("a", float), Opt("sigma2", float, 1.0),
         help="Gaussian tail sandwich with the quadrature oracle")
def _conc_sandwich(p, seed, trials):
    lo, hi = conc.gaussian_tail_sandwich(p["sigma2"], _req(p, "a"))
    q = conc.gaussian_tail_quadrature(p["sigma2"], p["a"])
    return {"lower": lo, "upper": hi, "tail": q, "inside": lo - 1e-9 <= q <= hi + 1e-9}


@command("concentration", "maximal", Opt("sigma2", float, 1.0), Opt("n", int), Opt("epsilon", float, 0.0),
         Opt("kind", str, "expectation", choices=("expectation", "expectation_abs", "tail")),
         help="maximal inequalities for n subgaussian variables")
def _conc_maximal(p, seed, trials):
    return {"bound": conc.maximal_bounds(p["sigma2"], _req(p, "n"), p["epsilon"], p["kind"])}


# metric entropy -----------------------------------------------------------


@command("entropy", "hamming", Opt("n", int), Opt("delta", int), Opt("exact", flag=True),
         help="covering and packing numbers of the Hamming cube")
def _ent_hamming(p, seed, trials):
    n, delta = _req(p, "n"), _req(p, "delta")
    space = me.hamming_cube(n)
    net = me.greedy_net(space, delta)
    out: dict = {"greedy_net_size": len(net.centers), "space": f"hamming:{n}"}
    if 0 < delta < n / 2:
        b = me.analytic_entropy_bounds("hamming_cube", delta, n=n)
        out["analytic"] = {"lower": Info(b.lower, "bits"), "upper": Info(b.upper, "bits")}
    if p["exact"]:
        row = me.sandwich_row(n, delta)
        out.update(N=row["N"], M_delta=row["M_delta"], M_2delta=row["M_2delta"], sandwich=row["sandwich"])
        if row.get("H") is not None:
            out["H"] = Info(row["H"], "bits")
            out["within_bounds"] = row["within_bounds"]
    return out


@command("entropy", "analytic", Opt("family", str, "lipschitz",
                                    choices=("euclidean_ball", "hamming_cube", "lipschitz", "sup_cube")),
         Opt("delta", float), Opt("n", int), Opt("r", float), Opt("L", float, 1.0), Opt("d", int),
         help="closed-form metric entropy bounds")
def _ent_analytic(p, seed, trials):
    params = {k: p[k] for k in ("n", "r", "L", "d") if p[k] is not None}
    b = me.analytic_entropy_bounds(p["family"], _req(p, "delta"), **params)
    return {"lower": Info(b.lower, "bits"), "upper": Info(b.upper, "bits"), "resolution": b.resolution}


@command("entropy", "rd", Opt("source", str, "binary_symmetric", choices=("binary_symmetric", "gaussian")),
         Opt("D", float), Opt("n", int), Opt("P", float, 1.0),
         help="rate-distortion value against the per-dimension entropy sandwich")
def _ent_rd(p, seed, trials):
    r = me.rd_compare(p["source"], _req(p, "D"), _req(p, "n"), p["P"])
    return {"rd": Info(r.rd_value, "bits"), "lower": Info(r.per_dim_entropy_lower, "bits"),
            "upper": Info(r.per_dim_entropy_upper, "bits"), "delta": r.delta, "note": r.note}


@command("entropy", "gv", Opt("k", int), Opt("sep", int), help="greedy packing of the hypercube")
def _ent_gv(p, seed, trials):
    r = me.gv_hypercube_packing(_req(p, "k"), _req(p, "sep"), seed)
    return {"size": len(r.members), "log2_size": Info(math.log2(len(r.members)), "bits"),
            "certified": r.certified, "separation": r.separation}


@command("entropy", "lipschitz", Opt("L", float, 1.0), Opt("delta", float),
         help="packing family of Lipschitz functions")
def _ent_lipschitz(p, seed, trials):
    fam = me.lipschitz_packing_family(p["L"], _req(p, "delta"), seed)
    return {"size": len(fam), "min_separation": me.family_min_separation(fam), "target": 2 * p["delta"]}


# learning -----------------------------------------------------------------


@command("learn", "gap", Opt("problem", str, "finite-bernoulli:16"), Opt("n", int),
         help="Monte Carlo worst-case generalization gap and the finite-class bound")
def _learn_gap(p, seed, trials):
    prob = lrn.problem_from_name(p["problem"])
    n = _req(p, "n")
    est = lrn.worst_case_gap_mc(prob, n, trials or 10_000, seed)
    out = {"gap": est.as_dict()}
    if prob.model_class.size and prob.model_class.size >= 2 and prob.loss_range:
        a, b = prob.loss_range
        out["finite_class_bound"] = lrn.finite_class_bound((b - a) ** 2 / 4.0, prob.model_class.size, n).value
    return out


@command("learn", "rademacher", Opt("problem", str, "finite-bernoulli:4"), Opt("n", int, 10),
         Opt("method", str, "exact", choices=("exact", "mc")), Opt("index", int, 0),
         help="empirical Rademacher complexity of a built-in problem")
def _learn_rademacher(p, seed, trials):
    prob = lrn.problem_from_name(p["problem"])
    data = prob.draw(seed, p["index"], p["n"])
    r = lrn.rademacher(prob.model_class, data, prob.loss, p["method"], trials or 100_000, seed)
    return {"rademacher": r if isinstance(r, float) else r.as_dict(), "method": p["method"]}


@command("learn", "shatter", Opt("n", int), Opt("dim", int, 2), Opt("bias", flag=True),
         help="shatter coefficient of half-spaces on Gaussian points, with the Sauer bound")
def _learn_shatter(p, seed, trials):
    n = _req(p, "n")
    x = substream(seed, tag("cli-shatter"), n).standard_normal((n, p["dim"]))
    if p["bias"]:
        x = lrn.with_bias(x)
    cls = lrn.ModelClass("linear_classifier", dim=x.shape[1])
    count, shattered = lrn.shatter_coefficient(cls, x)
    out = {"count": count, "shattered": shattered, "features": int(x.shape[1])}
    if n >= x.shape[1]:
        out["sauer"] = lrn.vc_tools(x.shape[1], n, "sauer")
    return out


@command("learn", "vc-tools", Opt("D", int), Opt("n", int), Opt("request", str, "sauer",
                                                                 choices=("sauer", "vc_gen_bound", "vc_entropy")),
         Opt("delta", float), Opt("c", float, 1.0), help="Sauer bound, VC risk bound or VC entropy")
def _learn_vc(p, seed, trials):
    return {"value": lrn.vc_tools(_req(p, "D"), p["n"] or 0, p["request"], p["delta"], p["c"])}


# information-theoretic generalization -------------------------------------


def _finite_instance(p: dict, seed: int) -> ig.FiniteInstance:
    if p.get("pz") is not None or p.get("loss") is not None:
        return ig.FiniteInstance(_floats(_req(p, "pz")), np.asarray(_json_value(_req(p, "loss")), dtype=float))
    return ig.random_instance(substream(seed, tag("cli-instance")), p["symbols"], p["models"])


INSTANCE_OPTS = (Opt("symbols", int, 3), Opt("models", int, 4), Opt("pz", str, help="pmf, comma separated"),
                 Opt("loss", str, help="JSON loss table [[...], ...]"), Opt("prior", str, help="comma separated"))


@command("infogen", "mi", *INSTANCE_OPTS, Opt("learner", str, "gibbs", choices=("gibbs", "erm")),
         Opt("beta", float, 5.0), Opt("n", int, 10), Opt("sigma2", float, 0.25),
         help="exact I(W;Z^n) on a finite instance with the MI generalization bounds")
def _ig_mi(p, seed, trials):
    inst = _finite_instance(p, seed)
    prior = None if p["prior"] is None else np.asarray(_floats(p["prior"]))
    learner = ig.gibbs_learner(inst, p["beta"], prior) if p["learner"] == "gibbs" else ig.erm_learner(inst)
    n = p["n"]
    mi = ig.exact_mutual_information(learner, inst.pz, n)
    gen = ig.generalization_mc(inst, learner, n, trials or 20_000, seed)
    out = {"mi": Info(mi.nats, "nats"), "per_sample_mi": [Info(v, "nats") for v in mi.detail["per_sample"]],
           "mi_bound": ig.mi_gen_bound(p["sigma2"], n, "mi", mi.nats).value,
           "individual_bound": ig.mi_gen_bound(p["sigma2"], n, "individual", mi.detail["per_sample"]).value,
           "generalization": gen.as_dict()}
    if p["learner"] == "gibbs":
        out["gibbs_mi_cap"] = Info(p["beta"] ** 2 / (2 * n), "nats")
    return out


@command("infogen", "gibbs-bounds", Opt("beta", float), Opt("n", int),
         Opt("request", str, "gen", choices=("gen", "risk")), Opt("sigma2", float), Opt("d", int), Opt("A", float),
         help="Gibbs generalization and risk bounds")
def _ig_gibbs(p, seed, trials):
    r = ig.gibbs_bounds(_req(p, "beta"), _req(p, "n"), p["request"], p["sigma2"], p["d"], p["A"])
    return r.as_dict()


@command("infogen", "pac-bayes", Opt("sigma2", float, 0.25), Opt("n", int), Opt("kl", float), Opt("delta", float, 0.1),
         help="PAC-Bayes bound for a given posterior-prior KL (nats)")
def _ig_pac(p, seed, trials):
    return {"bound": ig.pac_bayes_bound(p["sigma2"], _req(p, "n"), _req(p, "kl"), p["delta"]),
            "kl": Info(p["kl"], "nats")}


@command("infogen", "coverage", *INSTANCE_OPTS, Opt("beta", float, 5.0), Opt("n", int, 50),
         Opt("delta", float, 0.1), Opt("sigma2", float, 0.25),
         help="PAC-Bayes coverage frequency for the exact finite Gibbs learner")
def _ig_coverage(p, seed, trials):
    inst = _finite_instance(p, seed)
    prior = None if p["prior"] is None else np.asarray(_floats(p["prior"]))
    return ig.pac_bayes_coverage(inst, p["beta"], p["n"], p["delta"], trials or 2000, seed, p["sigma2"],
                                 prior).as_dict()


# minimax ------------------------------------------------------------------


def _minimax_out(r: mm.MinimaxReport) -> dict:
    out = r.as_dict()
    out["mi_upper"] = Info(r.mi_upper, "bits")
    del out["base"]
    return out


@command("minimax", "gauss-mean", Opt("k", int), Opt("n", int), Opt("sigma2", float, 1.0),
         help="local Fano bound for the Gaussian mean")
def _mm_gauss(p, seed, trials):
    return _minimax_out(mm.gaussian_mean_pipeline(_req(p, "k"), _req(p, "n"), p["sigma2"], seed))


@command("minimax", "bump-densities", Opt("k", int, 8), Opt("n", int), Opt("c1", float),
         help="local Fano bound for density estimation")
def _mm_density(p, seed, trials):
    return _minimax_out(mm.density_packing_pipeline(p["k"], _req(p, "n"), p["c1"], seed=seed))


@command("minimax", "lipschitz-regression", Opt("sigma", float, 1.0), Opt("n", int),
         help="global Fano bound for Lipschitz regression")
def _mm_regression(p, seed, trials):
    return _minimax_out(mm.nonlinear_regression_pipeline(p["sigma"], _req(p, "n")))


@command("minimax", "family", Opt("n", int), positional=Opt("name", str, help="e.g. gauss-mean:30:1"),
         help="run a pipeline addressed by family name")
def _mm_family(p, seed, trials):
    fam = mm.family_from_name(_req(p, "name"))
    n = _req(p, "n")
    if fam["family"] == "gauss-mean":
        return _minimax_out(mm.gaussian_mean_pipeline(fam["k"], n, fam["sigma2"], seed))
    if fam["family"] == "bump-densities":
        return _minimax_out(mm.density_packing_pipeline(fam["k"], n, fam["c1"], seed=seed))
    return _minimax_out(mm.nonlinear_regression_pipeline(fam["sigma"], n))


@command("minimax", "binary", Opt("p0", str), Opt("p1", str), Opt("n", int, 1),
         help="exact minimax test between two finite pmfs")
def _mm_binary(p, seed, trials):
    return mm.binary_test_minimax(_floats(_req(p, "p0")), _floats(_req(p, "p1")), p["n"]).as_dict()


@command("minimax", "fano", Opt("I", float), Opt("m", int), help="Fano error lower bound (bits)")
def _mm_fano(p, seed, trials):
    return {"error_lower": mm.fano_error_lower(_req(p, "I"), _req(p, "m")), "I": Info(p["I"], "bits")}


# verify -------------------------------------------------------------------

VERIFY_GROUPS = {
    "concentration": ("tails",),
    "entropy": ("covering", "rate-distortion", "lipschitz"),
    "learn": ("rademacher", "finite-class", "vc"),
    "infogen": ("gibbs", "mi", "pac-bayes"),
    "minimax": ("gauss-fano", "density", "reduction", "binary"),
}
VERIFY_GROUPS["all"] = tuple(s for g in list(VERIFY_GROUPS.values()) for s in g)


@command("verify", "run", Opt("suite", str), positional=Opt("group", str, "all"),
         help="run invariant-check suites")
def _verify(p, seed, trials):
    group = p["group"]
    if group not in VERIFY_GROUPS:
        raise UsageError(f"unknown verify group {group!r}; choose from {sorted(VERIFY_GROUPS)}")
    names = VERIFY_GROUPS[group]
    if p["suite"] is not None:
        if p["suite"] not in names:
            raise UsageError(f"suite {p['suite']!r} is not in group {group!r}: {list(names)}")
        names = (p["suite"],)
    suites = {}
    for name in names:
        res = vf.run_suite(name, seed, trials)
        print(res.line(), file=sys.stderr)
        suites[name] = res.results
    return {"suites": suites, "passed": all(s["passed"] for s in suites.values())}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=str, default=None, help="64-bit seed (default: $BOUNDS_SEED or 0)")
    p.add_argument("--trials", type=int, default=None, help="Monte Carlo trial count override")
    p.add_argument("--json", dest="json_path", default=None, help="write the JSON report here")
    p.add_argument("--csv", dest="csv_path", default=None, help="write one CSV row per scalar result")
    p.add_argument("--config", default=None, help="JSON config file; flags take precedence")
    p.add_argument("--base", choices=("bits", "nats"), default=None, help="presentation base")


def _opt_flag(o: Opt) -> str:
    return "--" + o.name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infobounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"infobounds {__version__}")
    groups = parser.add_subparsers(dest="group", metavar="GROUP")
    by_group: dict[str, list[Command]] = {}
    for c in COMMANDS.values():
        by_group.setdefault(c.group, []).append(c)
    for g, cmds in by_group.items():
        if g == "verify":
            (c,) = cmds
            sp = groups.add_parser("verify", help=c.help)
            sp.set_defaults(command=c.key)
            sp.add_argument(c.positional.name, nargs="?", default=None, help="group of suites (default all)")
            sp.add_argument("--suite", default=None)
            _add_common(sp)
            continue
        gp = groups.add_parser(g, help=f"{g} commands")
        sub = gp.add_subparsers(dest="name", metavar="COMMAND")
        for c in cmds:
            sp = sub.add_parser(c.name, help=c.help)
            sp.set_defaults(command=c.key)
            if c.positional:
                sp.add_argument(c.positional.name, nargs="?", default=None, help=c.positional.help)
            for o in c.opts:
                if o.flag:
                    sp.add_argument(_opt_flag(o), dest=o.name, action="store_const", const=True, default=None)
                else:
                    sp.add_argument(_opt_flag(o), dest=o.name, type=o.type, default=None, choices=o.choices,
                                    help=o.help or None)
            _add_common(sp)
    return parser


CONFIG_KEYS = {"command", "parameters", "seed", "trials", "output", "base"}
OUTPUT_KEYS = {"json_path", "csv_path", "stdout"}


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if not isinstance(cfg.get("parameters", {}), dict):
        raise UsageError("config 'parameters' must be an object")
    bad = set(cfg.get("output", {})) - OUTPUT_KEYS
    if bad:
        raise UsageError(f"unknown config output keys: {sorted(bad)}")
    return cfg


def _parse_seed(value) -> int:
    try:
        seed = int(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"seed must be an integer, got {value!r}") from exc
    if not 0 <= seed < U64:
        raise UsageError("seed must be an unsigned 64-bit integer")
    return seed


def _coerce(o: Opt, value):
    if o.flag:
        if not isinstance(value, bool):
            raise UsageError(f"parameter {o.name!r} must be a boolean")
        return value
    try:
        if o.type is str and isinstance(value, (list, dict)):
            return json.dumps(value) if isinstance(value, dict) or any(isinstance(v, list) for v in value) \
                else ",".join(str(v) for v in value)
        v = o.type(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"parameter {o.name!r}: {exc}") from exc
    if o.choices and v not in o.choices:
        raise UsageError(f"parameter {o.name!r} must be one of {list(o.choices)}")
    return v


def parse_args(argv: list[str]) -> ExperimentConfig:
    """Parse flags and merge an optional JSON config (flags take precedence)."""
    argv = list(argv)
    pre = _Parser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    cfg = _load_config(known.config) if known.config else {}
    parser = build_parser()
    if (not argv or argv[0].startswith("-")) and not {"-h", "--help", "--version"} & set(argv[:1]):
        if "command" not in cfg:
            raise UsageError("no command given")
        path = str(cfg["command"]).split(".")
        argv = (path if path[0] != "verify" else ["verify"]) + argv
    ns = parser.parse_args(argv)
    key = getattr(ns, "command", None)
    if key is None:
        raise UsageError("incomplete command")
    if "command" in cfg and cfg["command"] != key:
        raise UsageError(f"config command {cfg['command']!r} conflicts with {key!r}")
    cmd = COMMANDS[key]
    opts = list(cmd.opts) + ([cmd.positional] if cmd.positional else [])
    names = {o.name: o for o in opts}
    given = cfg.get("parameters", {})
    unknown = set(given) - set(names)
    if unknown:
        raise UsageError(f"unknown parameters for {key}: {sorted(unknown)}")
    params = {}
    for o in opts:
        v = getattr(ns, o.name, None)
        if v is None and o.name in given:
            v = _coerce(o, given[o.name])
        if v is None:
            v = False if o.flag and o.default is None else o.default
        params[o.name] = v
    if ns.seed is not None:
        seed = _parse_seed(ns.seed)
    elif "seed" in cfg:
        seed = _parse_seed(cfg["seed"])
    else:
        seed = _parse_seed(os.environ.get(SEED_ENV, "0") or "0")
    trials = ns.trials if ns.trials is not None else cfg.get("trials")
    if trials is not None and (not isinstance(trials, int) or trials < 1):
        raise UsageError("trials must be a positive integer")
    out = dict(cfg.get("output", {}))
    if ns.json_path:
        out["json_path"] = ns.json_path
    if ns.csv_path:
        out["csv_path"] = ns.csv_path
    base = ns.base or cfg.get("base")
    if base not in (None, "bits", "nats"):
        raise UsageError("base must be bits or nats")
    return ExperimentConfig(key, params, seed, trials, out, base)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _plain(obj, base: str | None):
    """JSON-ready copy; Info becomes {"value", "base"} and non-finite floats become strings."""
    if isinstance(obj, Info):
        q = obj.to(base) if base else obj
        return {"value": _plain(q.value, base), "base": q.base}
    if isinstance(obj, dict):
        return {str(k): _plain(v, base) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v, base) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v, base) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def run(config: ExperimentConfig) -> dict:
    """Execute a parsed config and return the report."""
    cmd = COMMANDS[config.command]
    results = cmd.handler(dict(config.parameters), config.seed, config.trials)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": config.command,
        "inputs": _plain(config.parameters, None),
        "results": _plain(results, config.base),
        "provenance": {"seed": config.seed, "trials": config.trials, "version": __version__,
                       "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())},
    }


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def csv_rows(results, prefix: str = "") -> list[tuple]:
    """(path, value, units, base) for every scalar leaf of the results tree."""
    rows = []
    if isinstance(results, dict):
        if set(results) == {"value", "base"} and results["base"] in ("bits", "nats"):
            return [(prefix, results["value"], "information", results["base"])]
        for k in sorted(results):
            rows += csv_rows(results[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(results, list):
        for i, v in enumerate(results):
            rows += csv_rows(v, f"{prefix}[{i}]")
    elif isinstance(results, (int, float, bool)) and not isinstance(results, str):
        rows.append((prefix, results, "", ""))
    return rows


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["path", "value", "units", "base"])
    for path, value, units, base in csv_rows(report["results"]):
        w.writerow([path, json.dumps(value), units, base])
    return buf.getvalue()


def emit(report: dict, output: dict):
    text = to_json(report)
    if output.get("json_path"):
        with open(output["json_path"], "w", encoding="utf-8") as fh:
            fh.write(text)
    if output.get("csv_path"):
        with open(output["csv_path"], "w", encoding="utf-8", newline="") as fh:
            fh.write(to_csv(report))
    if output.get("stdout", True):
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except UsageError as exc:
        print(f"infobounds: usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = run(config)
    except UsageError as exc:
        print(f"infobounds: usage error: {exc}", file=sys.stderr)
        return 2
    except (BoundsError, ValueError, KeyError) as exc:
        print(f"infobounds: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    try:
        emit(report, config.output)
    except OSError as exc:
        print(f"infobounds: cannot write report: {exc}", file=sys.stderr)
        return 1
    if config.command == "verify.run" and not report["results"]["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
