"""Command-line front end.

Every command renders its whole output to a string before printing, so a
resource error never leaves a partial table behind.  Resource errors exit with
status 2 and a one-line JSON object on stderr; bad input exits with status 1.

If ``ALCOVEBM_CACHE`` names a directory, rendered outputs are stored there under
a hash of the normalized run configuration and replayed on identical runs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import re
import sys
from dataclasses import asdict, dataclass, fields

from . import alcoves as al
from . import coxeter_hecke as ch_
from . import graded_linalg as gl
from . import moment_graph as mg
from .bm_sheaves import SheafError, bm_build, skyscraper, summary, verify_axioms
from .hom_stability import (degree_zero_dim, hom_grk_formula, hom_space, stability_scan)
from .rootdata import RootDatumError, get_datum
from .translation_action import (DecompositionError, WindowStabilityError, ch, ch_times_bs,
                                 decompose, default_target, format_decomposition, star)

CACHE_ENV = "ALCOVEBM_CACHE"
FORMATS = ("text", "json", "csv", "dot")
LENGTH_NORMALIZATION = "l(A_0^+) = 0"

RESOURCE_ERRORS = (gl.CutoffError, ch_.BudgetError, al.WindowError, WindowStabilityError)


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    type: str = "A1"
    cutoff: int | None = None
    budget: int = 12
    window: str | None = None
    format: str = "text"
    seed: int = 0

    def __post_init__(self):
        if self.cutoff is not None and self.cutoff <= 0:
            raise ConfigError("cutoff must be positive")
        if self.budget <= 0:
            raise ConfigError("budget must be positive")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
        return cls(**data)


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def parse_word(text: str) -> list[int]:
    """``s0s1``, ``0,1``, ``01`` or ``e`` (empty)."""
    t = text.strip()
    if t in ("", "e", "[]"):
        return []
    if "s" in t:
        return [int(x) for x in re.findall(r"s(\d+)", t)]
    if "," in t:
        return [int(x) for x in t.split(",") if x.strip()]
    return [int(c) for c in t]


def parse_element(d, text: str):
    cx = ch_.coxeter(d.label)
    return cx.from_word(parse_word(text))


def parse_window(d, spec: str | None, top: al.Alcove | None = None):
    """``interval:A:B``, ``lower:B:minlen`` or ``depth:n`` (alcoves ``<= top`` of length ``>= l(top) - n``)."""
    if spec is None:
        if top is None:
            raise ConfigError("a window is required")
        spec = "depth:4"
    kind, _, rest = spec.partition(":")
    if kind == "interval":
        a, _, b = rest.partition(":")
        return al.interval(al.parse_alcove(d, a), al.parse_alcove(d, b))
    if kind == "lower":
        b, _, n = rest.rpartition(":")
        return al.lower_set(al.parse_alcove(d, b), int(n))
    if kind == "depth":
        if top is None:
            raise ConfigError("depth windows need a vertex")
        return al.lower_set(top, al.length(top) - int(rest))
    raise ConfigError(f"unknown window {spec!r}")


def _meta(cfg: RunConfig, d) -> dict:
    return {"type": cfg.type, "form_normalization": d.to_json()["form_normalization"],
            "length_normalization": LENGTH_NORMALIZATION, "seed": cfg.seed}


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _text_table(rows, header) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n"
                   for r in cells)


def _render_rows(cfg, d, rows, header, extra=None) -> str:
    if cfg.format == "json":
        data = {"meta": _meta(cfg, d), "columns": list(header),
                "rows": [[str(c) for c in r] for r in rows]}
        if extra:
            data.update(extra)
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if cfg.format == "csv":
        return _csv(rows, header)
    if cfg.format == "dot":
        raise ConfigError("dot output is only available for export")
    out = _text_table(rows, header)
    for k, v in (extra or {}).items():
        out += f"{k}: {v}\n"
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_kl(cfg: RunConfig, args) -> str:
    d = get_datum(cfg.type)
    cx = ch_.coxeter(d.label)
    top = parse_element(d, args.top)
    if cx.length(top) > cfg.budget:
        raise ch_.BudgetError(f"length {cx.length(top)} exceeds the budget {cfg.budget}")
    rows = []
    if args.flavor == "h":
        xs = sorted(cx.lower_interval(top), key=cx.sort_key)
        for x in xs:
            for y in sorted(cx.lower_interval(x), key=cx.sort_key):
                rows.append((mg._wname(d, y), mg._wname(d, x), ch_.kl_h(d, y, x, cfg.budget)))
    else:
        flavor = "triv" if args.flavor == "m" else "sgn"
        xs = sorted((x for x in cx.lower_interval(top) if cx.is_min_coset(x)), key=cx.sort_key)
        for x in xs:
            basis = ch_.parabolic_basis(d, x, flavor, cfg.budget)
            for y in sorted(basis, key=cx.sort_key):
                rows.append((mg._wname(d, y), mg._wname(d, x), basis[y]))
    return _render_rows(cfg, d, rows, ("y", "x", args.flavor))


def _sheaf_on_graph(cfg, d, args):
    """Build ``(graph, sheaf)`` for the ``bm``/``act``/``ch`` commands."""
    graph = getattr(args, "graph", "alcove")
    if graph == "bruhat":
        cx = ch_.coxeter(d.label)
        top = parse_element(d, args.vertex)
        g = mg.build_bruhat_graph(d, top, cfg.budget)
        x = parse_element(d, args.at) if getattr(args, "at", None) else top
    elif graph == "coset":
        top = parse_element(d, args.vertex)
        cx = ch_.coxeter(d.label)
        top = cx.min_coset_rep(top)
        g = mg.build_coset_graph(d, top, budget=cfg.budget)
        x = top
    else:
        top = al.parse_alcove(d, args.vertex)
        g = mg.build_alcove_graph(d, parse_window(d, cfg.window, top))
        x = al.parse_alcove(d, args.at) if getattr(args, "at", None) else top
        if x not in g.index:
            raise ConfigError("the vertex is not in the window")
    if getattr(args, "skyscraper", False):
        F = skyscraper(g, x)
    else:
        F = bm_build(g, x, cutoff=cfg.cutoff)
    return g, F


def _grk_rows(F):
    rows = []
    for name, length, st, co in summary(F):
        rows.append((name, length, st, "" if co is None else co))
    return rows


def cmd_bm(cfg: RunConfig, args) -> str:
    d = get_datum(cfg.type)
    g, F = _sheaf_on_graph(cfg, d, args)
    rep = verify_axioms(F, cutoff=cfg.cutoff)
    rows = _grk_rows(F)
    return _render_rows(cfg, d, rows, ("vertex", "length", "stalk", "costalk"),
                        {"axioms": json.dumps(rep.as_dict(), sort_keys=True)})


def cmd_act(cfg: RunConfig, args) -> str:
    d = get_datum(cfg.type)
    if args.word.startswith("random:"):
        n = int(args.word.split(":", 1)[1])
        rng = random.Random(cfg.seed)
        word = [rng.randrange(al.num_simple(d)) for _ in range(n)]
    else:
        word = parse_word(args.word)
    top = al.parse_alcove(d, args.vertex)
    win = parse_window(d, cfg.window, top)
    g = mg.build_alcove_graph(d, win)
    F = skyscraper(g, top) if args.skyscraper else bm_build(g, top, cutoff=cfg.cutoff)
    target = default_target(g, word)
    if not target:
        raise WindowStabilityError("no alcove of the window survives the word")
    G = star(F, word, target)
    rep = verify_axioms(G, cutoff=cfg.cutoff)
    before = {g.name(x): F.grk_stalk(x) for x in target}
    rows = [(G.graph.name(x), G.graph.lengths[x], before.get(G.graph.name(x), ""),
             G.grk_stalk(x)) for x in G.graph.vertices]
    extra = {"word": "".join(f"s{s}" for s in word) or "e",
             "axioms": json.dumps(rep.as_dict(), sort_keys=True)}
    if rep.ok:
        extra["decomposition"] = format_decomposition(G.graph, decompose(G))
    if args.check_assoc and len(word) >= 2:
        H = star(star(F, word[:1], backward_windows_target(g, word)), word[1:], target)
        extra["associative"] = all(H.stalks[x] == G.stalks[x] for x in G.graph.vertices)
    return _render_rows(cfg, d, rows, ("vertex", "length", "before", "after"), extra)


def backward_windows_target(g, word):
    """Target for the first letter so that the remaining letters can still act."""
    from .translation_action import backward_windows
    return sorted(backward_windows(default_target(g, word), word[1:])[0], key=al.sort_key)


def cmd_ch(cfg: RunConfig, args) -> str:
    d = get_datum(cfg.type)
    g, F = _sheaf_on_graph(cfg, d, args)
    p = ch(F)
    extra = {}
    out_rows = [(al.format_alcove(A), a) for A, a in sorted(p.c.items(), key=lambda t: al.sort_key(t[0]))]
    if args.check is not None:
        s = args.check
        G = star(F, [s], default_target(g, [s]))
        lhs = ch(G)
        rhs = ch_times_bs(p, s)
        keep = set(G.graph.vertices)
        rhs_c = {A: a for A, a in rhs.c.items() if A in keep}
        extra["homomorphism"] = lhs.c == rhs_c
    if cfg.format == "text" and not extra:
        return repr(p) + "\n"
    extra["ch"] = repr(p)
    return _render_rows(cfg, d, out_rows, ("alcove", "coefficient"), extra)


def cmd_hom(cfg: RunConfig, args) -> str:
    d = get_datum(cfg.type)
    if args.mode == "scan":
        top = al.parse_alcove(d, args.vertex)
        top_g = al.parse_alcove(d, args.other) if args.other else None
        res = stability_scan(d, top, steps=args.steps, top_g=top_g)
        rows = [(k, n, dim, "" if s is None else s) for k, n, dim, s in res.as_rows()]
        extra = {"verdict": res.verdict,
                 "stable_from": "" if res.stable_from is None else res.stable_from}
        if cfg.format == "csv":
            rows = [r + (res.verdict,) for r in rows]
            return _csv(rows, ("window", "size", "dimension", "surjective", "verdict"))
        return _render_rows(cfg, d, rows, ("window", "size", "dimension", "surjective"), extra)
    top = al.parse_alcove(d, args.vertex)
    other = al.parse_alcove(d, args.other) if args.other else top
    hi = top if al.leq(other, top) else other
    g = mg.build_alcove_graph(d, parse_window(d, cfg.window, hi))
    F = bm_build(g, top, cutoff=cfg.cutoff)
    G = F if other == top else bm_build(g, other, cutoff=cfg.cutoff)
    p = hom_grk_formula(F, G)
    if cfg.format == "text":
        return f"{p}\n"
    H = hom_space(F, G)
    rows = [(str(p), degree_zero_dim(p, g.nvars), H.dimension)]
    return _render_rows(cfg, d, rows, ("grk", "formula_degree0", "hom_space_degree0"))


def cmd_export(cfg: RunConfig, args) -> str:
    d = get_datum(cfg.type)
    if args.graph == "bruhat":
        g = mg.build_bruhat_graph(d, parse_element(d, args.vertex), cfg.budget)
    elif args.graph == "coset":
        cx = ch_.coxeter(d.label)
        g = mg.build_coset_graph(d, cx.min_coset_rep(parse_element(d, args.vertex)),
                                 budget=cfg.budget)
    else:
        top = al.parse_alcove(d, args.vertex) if args.vertex else None
        g = mg.build_alcove_graph(d, parse_window(d, cfg.window, top))
    if args.what == "dot":
        return mg.to_dot(g)
    data = json.loads(mg.to_json(g))
    data["meta"] = dict(data["meta"], **_meta(cfg, d))
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


COMMANDS = {"kl": cmd_kl, "bm": cmd_bm, "act": cmd_act, "ch": cmd_ch, "hom": cmd_hom,
            "export": cmd_export}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default=None, help="root system type (A1, A2, B2, G2)")
    common.add_argument("--cutoff", type=int, default=None, help="degree cutoff")
    common.add_argument("--budget", type=int, default=None, help="length budget")
    common.add_argument("--window", default=None,
                        help="interval:A:B, lower:B:minlen or depth:n")
    common.add_argument("--format", default=None, choices=FORMATS)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--config", default=None, help="JSON file with a RunConfig")

    p = argparse.ArgumentParser(prog="alcovebm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kl", parents=[common], help="Kazhdan-Lusztig tables")
    k.add_argument("top", help="word such as s0s1 or e")
    k.add_argument("--flavor", choices=("h", "m", "n"), default="h")

    for name, help_ in (("bm", "build and verify a BM sheaf"), ("ch", "character of a sheaf")):
        b = sub.add_parser(name, parents=[common], help=help_)
        b.add_argument("vertex", help="alcove such as (0,1) or k(0,1,1); a word for bruhat")
        b.add_argument("--graph", choices=("alcove", "bruhat", "coset"), default="alcove")
        b.add_argument("--at", default=None, help="build at this vertex instead of the top")
        b.add_argument("--skyscraper", action="store_true")
        if name == "ch":
            b.add_argument("--check", type=int, default=None,
                           help="also compare ch(theta_s F) with ch(F)(H_s + v)")

    a = sub.add_parser("act", parents=[common], help="act by a Bott-Samelson word")
    a.add_argument("vertex")
    a.add_argument("word", help="word such as s1s0, e, or random:N")
    a.add_argument("--skyscraper", action="store_true")
    a.add_argument("--check-assoc", action="store_true")

    h = sub.add_parser("hom", parents=[common], help="degree-zero Hom")
    h.add_argument("mode", choices=("scan", "grk"))
    h.add_argument("vertex")
    h.add_argument("--other", default=None, help="top of the second sheaf")
    h.add_argument("--steps", type=int, default=6)

    e = sub.add_parser("export", parents=[common], help="export a moment graph")
    e.add_argument("what", choices=("dot", "json"))
    e.add_argument("--graph", choices=("alcove", "bruhat", "coset"), default="alcove")
    e.add_argument("--vertex", default=None)
    return p


def config_from_args(args) -> RunConfig:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        RunConfig.from_dict(data)
    for f in fields(RunConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            data[f.name] = val
    return RunConfig.from_dict(data)


def _cache_path(cfg: RunConfig, argv) -> str | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    key = json.dumps({"config": asdict(cfg), "argv": list(argv)}, sort_keys=True)
    return os.path.join(root, hashlib.sha256(key.encode()).hexdigest() + ".out")


def run(argv=None) -> tuple[int, str, str]:
    """Run the CLI and return ``(status, stdout, stderr)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        path = _cache_path(cfg, argv)
        if path and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                return 0, fh.read(), ""
        out = COMMANDS[args.command](cfg, args)
        if path:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(out)
        return 0, out, ""
    except RESOURCE_ERRORS as exc:
        return 2, "", _error("resource", exc)
    except (ConfigError, RootDatumError, ValueError, mg.GraphError, SheafError,
            DecompositionError) as exc:
        return 1, "", _error("input", exc)


def _error(kind: str, exc: Exception) -> str:
    return json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)},
                      sort_keys=True) + "\n"


def main(argv=None) -> int:
    status, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
