"""Command-line front end.

Subcommands: census, conjugate, orbit-tree, enumerate, probe.  A run can be
described by a JSON config; command-line flags override config values.
Exit codes: 0 ok, 2 enumeration bound exceeded, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .census import census_gamma, census_iso, classify_growth, enumerate_group
from .groups import GroupSpec, SpecError, spec_from_dict
from .isometry import Portrait, ShapeError, conjugate
from .orbit import canonical_code, find_conjugator, orbit_tree
from .tree import CapacityError, enumeration_bound

EXIT_OK = 0
EXIT_BOUND = 2
EXIT_INPUT = 3


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    spec: GroupSpec
    gamma: GroupSpec | None
    max_level: int
    out: Path | None
    bound: int
    threads: int = 1
    seed: int = 0


def load_config(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("config must be a JSON object")
    if "spec" not in data:
        raise InputError("config has no 'spec'")
    try:
        spec = spec_from_dict(data["spec"])
        gamma = spec_from_dict(data["gamma"]) if data.get("gamma") else None
    except (SpecError, ValueError, TypeError) as exc:
        raise InputError(f"invalid group spec: {exc}") from None

    def pick(flag, key, default):
        value = getattr(args, flag, None)
        if value is not None:
            return value
        return data.get(key, default)

    level = int(pick("level", "max_level", spec.depth))
    if level > spec.depth:
        raise InputError(f"max level {level} exceeds spec depth {spec.depth}")
    out = pick("out", "out", None)
    return RunConfig(
        spec=spec,
        gamma=gamma,
        max_level=level,
        out=Path(out) if out else None,
        bound=int(pick("bound", "bound", enumeration_bound())),
        threads=int(pick("threads", "threads", 1)),
        seed=int(pick("seed", "seed", 0)),
    )


def _read_portrait(path) -> Portrait:
    try:
        return Portrait.from_json(Path(path).read_text())
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse portrait {path}: {exc}") from None


def _write(out: Path | None, name: str, text: str) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def cmd_census(args) -> int:
    cfg = load_config(args)
    if cfg.gamma is None:
        result = census_iso(cfg.spec, cfg.max_level, cfg.bound, workers=cfg.threads)
    else:
        result = census_gamma(cfg.spec, cfg.gamma, cfg.max_level, cfg.bound)
    report = result.to_dict()
    report["seed"] = cfg.seed
    if len(result.series) >= 4:
        ratios, growth, verdict = classify_growth(result.series)
        report["probe"] = {"growth": growth, "verdict": verdict, "heuristic": True}
    _write(cfg.out, "census.csv", result.to_csv())
    _write(cfg.out, "census.json", json.dumps(report, sort_keys=True, indent=1))
    print("level,c_n")
    for n, c in enumerate(result.series):
        print(f"{n},{c}")
    if result.fitted is not None:
        print(f"fit: P={result.fitted[0]} Q={result.fitted[1]}")
    else:
        print("fit: none")
    if "probe" in report:
        print(f"growth: {report['probe']['growth']} ({report['probe']['verdict']}, heuristic)")
    return EXIT_OK


def cmd_conjugate(args) -> int:
    g, h = _read_portrait(args.g), _read_portrait(args.h)
    if g.vs != h.vs or g.depth != h.depth:
        raise InputError("portraits have different shapes")
    a = find_conjugator(g, h)
    if a is None:
        print("DIFFERENT")
        return EXIT_OK
    if conjugate(g, a) != h:  # pragma: no cover - would be a library bug
        raise RuntimeError("constructed conjugator failed verification")
    print("SAME")
    if args.witness:
        Path(args.witness).write_text(a.to_json())
    return EXIT_OK


def cmd_orbit_tree(args) -> int:
    g = _read_portrait(args.g)
    t = orbit_tree(g)
    doc = t.to_dict()
    doc["code"] = canonical_code(t).hex
    text = json.dumps(doc, sort_keys=True, indent=1)
    out = Path(args.out) if args.out else None
    if out is None:
        print(text)
    else:
        _write(out, "orbit_tree.json", text)
        _write(out, "orbit_tree.dot", t.to_dot())
        print(f"{len(t.nodes)} orbits written to {out}")
    if args.dot:
        Path(args.dot).write_text(t.to_dot())
    return EXIT_OK


def cmd_enumerate(args) -> int:
    cfg = load_config(args)
    sizes = []
    for n in range(cfg.max_level + 1):
        lg = enumerate_group(cfg.spec, n, cfg.bound)
        sizes.append(len(lg))
        print(f"level {n}: {len(lg)} elements")
        if cfg.out is not None and n == cfg.max_level:
            lines = "".join(g.to_json() + "\n" for g in lg)
            _write(cfg.out, f"level_{n}.jsonl", lines)
    _write(cfg.out, "sizes.json", json.dumps(sizes))
    return EXIT_OK


def cmd_probe(args) -> int:
    cfg = load_config(args)
    series = census_iso(cfg.spec, cfg.max_level, cfg.bound, workers=cfg.threads).series
    try:
        ratios, growth, verdict = classify_growth(series)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    doc = {
        "series": series,
        "ratios": [str(r) for r in ratios],
        "growth": growth,
        "verdict": verdict,
        "heuristic": True,
    }
    _write(cfg.out, "probe.json", json.dumps(doc, sort_keys=True, indent=1))
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def _run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--level", type=int, help="maximum level N")
    p.add_argument("--bound", type=int, help="enumeration bound")
    p.add_argument("--threads", type=int, help="worker processes for canonical codes")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="seed recorded with the run")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rooted-iso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="class counts c_0..c_N with rational fit")
    _run_flags(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("conjugate", help="decide conjugacy of two portraits in Iso(T_n)")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--witness", help="write a conjugator portrait here when SAME")
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser("orbit-tree", help="orbit tree of a portrait as JSON and DOT")
    p.add_argument("g")
    p.add_argument("--out", help="output directory")
    p.add_argument("--dot", help="write DOT text here")
    p.set_defaults(func=cmd_orbit_tree)

    p = sub.add_parser("enumerate", help="sizes of the level groups")
    _run_flags(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("probe", help="heuristic growth probe of c_n")
    _run_flags(p)
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (InputError, ShapeError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
