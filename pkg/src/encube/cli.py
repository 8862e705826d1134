"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors and presentation files that cannot be parsed or validated.  Setting
``ENCUBE_OUTPUT_DIR`` additionally writes each JSON report to that
directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import bar as bar_mod
from .algebra import AlgebraPresentation, PresentationError, augmentation_ideal
from .chain import ChainComplexError, HomologyTable, is_quasi_iso
from .linalg import Coefficients, LinAlgError
from .simplicial import SimplicialIdentityError

OUTPUT_ENV = "ENCUBE_OUTPUT_DIR"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    target: str | None
    path: str | None
    coefficients: str | None
    max_degree: int
    simplicial_cap: int
    weight_cap: int
    power_cap: int
    n: int
    seed: int
    trials: int
    max_arity: int
    fmt: str
    strict: bool
    mode: str
    closed: bool


def resolve_fixture(name: str) -> Path:
    """A path as given, or a shipped fixture by bare name."""
    p = Path(name)
    if p.exists():
        return p
    stem = p.name if p.suffix == ".json" else p.name + ".json"
    shipped = resources.files("encube") / "fixtures" / stem
    if shipped.is_file():
        return Path(str(shipped))
    raise UsageError(f"no such presentation file: {name}")


def parse_presentation(path: str, coefficients: str | None = None) -> AlgebraPresentation:
    ring = Coefficients.parse(coefficients) if coefficients else None
    file = resolve_fixture(path)
    try:
        return AlgebraPresentation.load(file, ring=ring)
    except json.JSONDecodeError as exc:
        raise PresentationError(f"{file}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc


# ---------------------------------------------------------------------------
# commands

def _table_output(table: HomologyTable, cfg: RunConfig) -> tuple[str, dict]:
    doc = table.to_json()
    doc["ok"] = True
    text = table.to_tsv() if cfg.fmt == "tsv" else json.dumps(doc, sort_keys=True, indent=2) + "\n"
    return text, doc


def _plus_unit(table: HomologyTable) -> HomologyTable:
    entries = dict(table.entries)
    b, t = entries.get(0, (0, ()))
    entries[0] = (b + 1, t)
    return HomologyTable(table.ring, entries, table.window, dict(table.meta))


def cmd_thh(cfg: RunConfig):
    alg = parse_presentation(cfg.path, cfg.coefficients)
    return _table_output(bar_mod.thh(alg, cfg.max_degree), cfg)


def _bar_table(alg: AlgebraPresentation, cfg: RunConfig, closed: bool) -> HomologyTable:
    iterate = bar_mod.closed_iterated_bar if closed else bar_mod.iterated_bar
    if alg.unit is None:
        if cfg.n == 1 and not closed:
            return bar_mod.reduced_bar(alg, cfg.max_degree)
        return iterate(alg, cfg.n, cfg.max_degree)
    if cfg.n == 1 and not closed:
        return bar_mod.bar(alg, cfg.max_degree)
    table = _plus_unit(iterate(augmentation_ideal(alg), cfg.n, cfg.max_degree))
    table.meta["unit"] = "unit class added in degree 0 (unital input reduced to its augmentation ideal)"
    return table


def cmd_bar(cfg: RunConfig):
    alg = parse_presentation(cfg.path, cfg.coefficients)
    return _table_output(_bar_table(alg, cfg, closed=False), cfg)


def cmd_bar_closed(cfg: RunConfig):
    alg = parse_presentation(cfg.path, cfg.coefficients)
    return _table_output(_bar_table(alg, cfg, closed=True), cfg)


def _partial(alg: AlgebraPresentation, cap: int):
    from .power import partial_from_presentation, unitalize_system

    if alg.unit is None:
        return unitalize_system(alg, cap)
    return partial_from_presentation(alg, cap)


def cmd_rectify(cfg: RunConfig):
    from .power import rectify

    alg = parse_presentation(cfg.path, cfg.coefficients)
    pa = _partial(alg, cfg.power_cap)
    P = cfg.simplicial_cap
    total, aug = rectify(pa, P, cfg.power_cap, top=P)
    window = (0, P - 1)
    table = total.homology(range(window[0], window[1] + 1))
    ok = is_quasi_iso(aug, (window[0], window[1] + 1))
    table.meta.update({"construction": "truncated standard resolution, level 1",
                       "simplicial_cap": P, "power_cap": cfg.power_cap})
    doc = table.to_json()
    doc["augmentation_quasi_iso"] = ok
    doc["ok"] = ok
    text = table.to_tsv() if cfg.fmt == "tsv" else json.dumps(doc, sort_keys=True, indent=2) + "\n"
    return text, doc


def cmd_diagonal(cfg: RunConfig):
    from .diagonal import BarHomology

    alg = parse_presentation(cfg.path, cfg.coefficients)
    h = BarHomology(alg, cfg.max_degree)
    doc = {"coefficients": str(alg.ring), "window": [0, cfg.max_degree], "dims": list(h.dims()),
           "coproduct": h.coproduct_matrix(), "counit": h.counit_ok(), "coassociative": h.coassociative()}
    if alg.has("commutative"):
        fails = h.hopf_failures()
        doc["multiplicative"] = not fails
        doc["failures"] = [[list(a), list(b)] for a, b in fails]
    doc["ok"] = doc["counit"] and doc["coassociative"] and doc.get("multiplicative", True)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n", doc


def cmd_maintq(cfg: RunConfig):
    alg = parse_presentation(cfg.path, cfg.coefficients)
    bar_mod.require_nonunital(alg)
    doc = bar_mod.verify_maintq(alg, cfg.n, cfg.max_degree, mode=cfg.mode, closed=cfg.closed)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n", doc


def cmd_operad(cfg: RunConfig):
    from .verify import verify_interchange, verify_operad

    laws = verify_operad(cfg.trials, cfg.seed)
    inter = verify_interchange(max(1, cfg.trials // 2), cfg.seed)
    doc = {"ok": laws.ok and inter.ok, "suites": [laws.to_json(), inter.to_json()]}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n", doc


def cmd_moore(cfg: RunConfig):
    from .moore import verify_moore_functoriality

    doc = verify_moore_functoriality(cfg.trials, cfg.max_arity, cfg.seed).to_json()
    return json.dumps(doc, sort_keys=True, indent=2) + "\n", doc


def cmd_power_system(cfg: RunConfig):
    from .power import PowerSystemError, check_monad_laws

    alg = parse_presentation(cfg.path, cfg.coefficients)
    doc: dict = {"power_cap": cfg.power_cap, "strict": cfg.strict}
    try:
        pa = _partial(alg, cfg.power_cap)
        doc["power_system"] = pa.system.validate(strict=cfg.strict)
        pa.validate()
        doc["partial_algebra"] = True
        laws = {m: check_monad_laws(pa.system, min(cfg.weight_cap, cfg.power_cap), m)
                for m in range(1, min(2, cfg.power_cap) + 1)}
        doc["monad_laws"] = {str(m): v for m, v in laws.items()}
        doc["ok"] = all(all(v.values()) for v in laws.values())
    except PowerSystemError as exc:
        doc["ok"] = False
        doc["failure"] = str(exc)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n", doc


COMMANDS = {
    ("compute", "thh"): cmd_thh,
    ("compute", "bar"): cmd_bar,
    ("compute", "bar-closed"): cmd_bar_closed,
    ("compute", "rectify"): cmd_rectify,
    ("compute", "diagonal"): cmd_diagonal,
    ("verify", "operad"): cmd_operad,
    ("verify", "moore"): cmd_moore,
    ("verify", "power-system"): cmd_power_system,
    ("verify", "maintq"): cmd_maintq,
}
NEEDS_FILE = {"thh", "bar", "bar-closed", "rectify", "diagonal", "power-system", "maintq"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="encube", description="Exact operad, bar and power-system computations.")
    parser.add_argument("command", choices=["compute", "verify"])
    parser.add_argument("target", choices=sorted({t for _, t in COMMANDS}))
    parser.add_argument("path", nargs="?", help="presentation JSON file or shipped fixture name")
    parser.add_argument("--coefficients", help="override the coefficient ring (Z, Q, F<p>)")
    parser.add_argument("--max-degree", type=int, default=4)
    parser.add_argument("--simplicial-cap", type=int, default=3)
    parser.add_argument("--weight-cap", type=int, default=2)
    parser.add_argument("--power-cap", type=int, default=2)
    parser.add_argument("-n", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--max-arity", type=int, default=5)
    parser.add_argument("--format", dest="fmt", choices=["tsv", "json"], default="tsv")
    parser.add_argument("--strict", action="store_true")
    parser.add_argument("--mode", choices=["split", "free"], default="split")
    parser.add_argument("--closed", action="store_true", help="use the closed formula in maintq")
    return parser


def config_from_args(argv: list[str] | None) -> RunConfig:
    args = build_parser().parse_args(argv)
    if (args.command, args.target) not in COMMANDS:
        raise UsageError(f"unknown command: {args.command} {args.target}")
    if args.target in NEEDS_FILE and not args.path:
        raise UsageError(f"{args.command} {args.target} needs a presentation file")
    for name in ("max_degree", "simplicial_cap", "weight_cap", "power_cap", "n", "trials", "max_arity"):
        if getattr(args, name) < (0 if name == "max_degree" else 1):
            raise UsageError(f"--{name.replace('_', '-')} out of range")
    return RunConfig(args.command, args.target, args.path, args.coefficients, args.max_degree,
                     args.simplicial_cap, args.weight_cap, args.power_cap, args.n, args.seed,
                     args.trials, args.max_arity, args.fmt, args.strict, args.mode, args.closed)


def _emit_artifact(cfg: RunConfig, doc: dict) -> None:
    out = os.environ.get(OUTPUT_ENV)
    if not out:
        return
    Path(out).mkdir(parents=True, exist_ok=True)
    name = f"{cfg.command}-{cfg.target}"
    if cfg.path:
        name += "-" + Path(cfg.path).stem
    (Path(out) / f"{name}.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def run(cfg: RunConfig) -> int:
    try:
        text, doc = COMMANDS[(cfg.command, cfg.target)](cfg)
    except (PresentationError, UsageError, LinAlgError) as exc:
        failure = {"ok": False, "error": "input", "message": str(exc)}
        if isinstance(exc, PresentationError) and exc.witness:
            failure["witness"] = [str(w) for w in exc.witness]
        sys.stdout.write(json.dumps(failure, sort_keys=True) + "\n")
        return 2
    except (SimplicialIdentityError, ChainComplexError, bar_mod.BarError, ValueError) as exc:
        failure = {"ok": False, "error": "check", "message": str(exc)}
        sys.stdout.write(json.dumps(failure, sort_keys=True) + "\n")
        _emit_artifact(cfg, failure)
        return 1
    sys.stdout.write(text)
    _emit_artifact(cfg, doc)
    return 0 if doc.get("ok", True) else 1


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"encube: {exc}\n")
        return 2
    try:
        return run(cfg)
    except UsageError as exc:
        sys.stderr.write(f"encube: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
