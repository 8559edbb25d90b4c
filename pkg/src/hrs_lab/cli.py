"""Command-line front end.

    hrs-lab check-torsion WORKSPACE
    hrs-lab tilt WORKSPACE
    hrs-lab verify WORKSPACE --suite all|torsion|heart|lemma21|theorem
    hrs-lab resolve WORKSPACE COMPLEX

Exit codes: 0 all checks pass, 1 some check failed, 2 bad input (parse
errors, unknown names, a non-tilting pair where one is required).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from .complexes import is_quasi_iso
from .equivalence import t_resolve_complex
from .heart import NotInHeart, heart_hom_dim, torsion_decomposition
from .quiver import hom_dim
from .serialize import chain_map_to_dict, complex_to_dict
from .suites import (
    FAIL,
    NOT_RUN,
    PASS,
    CheckResult,
    SuiteConfig,
    heart_checks,
    exactness_comparison_checks,
    run_suites,
    tilting_facts,
    SUITES,
)
from .torsion import NotTilting, classify, is_tilting, is_torsion
from .workspace import Workspace, WorkspaceError, load_workspace

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class Report:
    command: list
    seed: int | None = None
    facts: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)  # CheckResult
    witnesses: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        verdicts = {c.verdict for c in self.checks}
        if FAIL in verdicts:
            return FAIL
        if PASS in verdicts or not verdicts:
            return PASS
        return NOT_RUN

    def to_dict(self) -> dict:
        return {"command": self.command, "seed": self.seed, "verdict": self.verdict, "facts": self.facts,
                "tables": self.tables, "checks": [c.to_dict() for c in self.checks],
                "witnesses": self.witnesses, "timing": self.timing}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(list(d["command"]), d.get("seed"), dict(d.get("facts", {})), dict(d.get("tables", {})),
                   [CheckResult.from_dict(c) for c in d.get("checks", [])], dict(d.get("witnesses", {})),
                   dict(d.get("timing", {})))

    @classmethod
    def from_json(cls, s: str) -> "Report":
        return cls.from_dict(json.loads(s))

    def verdicts(self) -> dict[str, str]:
        return {c.name: c.verdict for c in self.checks}

    def render_text(self) -> str:
        out = [f"$ hrs-lab {' '.join(self.command)}"]
        if self.seed is not None:
            out.append(f"seed: {self.seed}")
        for k, v in self.facts.items():
            if v == {} or v == []:
                continue
            if isinstance(v, list):
                for item in v:
                    out.append(f"{k}: {item}")
            else:
                out.append(f"{k}: {_fmt(v)}")
        for name, tab in self.tables.items():
            out.append(f"{name}:")
            out += _render_table(tab)
        for name, w in self.witnesses.items():
            out.append(f"{name}: {json.dumps(w)}")
        for c in self.checks:
            line = f"[{c.verdict.upper():7}] {c.name}"
            if c.trials:
                line += f"  ({c.trials} trials, {c.seconds:.2f}s)"
            if c.details:
                line += f"  {json.dumps(c.details, sort_keys=True)}"
            out.append(line)
            for f in c.failures[:5]:
                out.append(f"          failing witness: {json.dumps(f, sort_keys=True)}")
            if len(c.failures) > 5:
                out.append(f"          ... {len(c.failures) - 5} more")
        out.append(f"verdict: {self.verdict}")
        return "\n".join(out)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_fmt(x)}" for k, x in v.items())
    return str(v)


def _render_table(tab: dict) -> list[str]:
    rows, cols, vals = tab["rows"], tab["cols"], tab["values"]
    w = max([len(r) for r in rows + cols] + [3])
    lines = [" " * (w + 2) + " ".join(c.rjust(w) for c in cols)]
    for r, vs in zip(rows, vals):
        lines.append(f"  {r.rjust(w)} " + " ".join(str(x).rjust(w) for x in vs))
    return lines


# --- commands -------------------------------------------------------------------

def _default_objects(ws: Workspace) -> list[str]:
    """Standard modules that are torsion (as stalks) or torsion-free (shifted), deduplicated."""
    ctx, tp = ws.context, ws.pair
    seen, names = [], []
    for kind in "PIS":
        for v in range(ctx.n):
            name = f"{kind}{v + 1}"
            m = ws.module(name)
            k = classify(tp, m).kind.value
            if k == "mixed" or any(m == s for s in seen):
                continue
            seen.append(m)
            names.append(name if k == "torsion" else name + "[1]")
    return names


def cmd_check_torsion(ws: Workspace, cfg: SuiteConfig, argv: list) -> Report:
    r = Report(argv, cfg.seed)
    facts = tilting_facts(ws.pair)
    r.facts["tilting"] = facts["tilting"]
    r.facts["injectives"] = facts["injectives"]
    if facts["warnings"]:
        r.facts["warning"] = facts["warnings"]
    r.facts["classification"] = {n: classify(ws.pair, m).kind.value for n, m in ws.modules.items()}
    named = list(ws.modules.values())
    r.checks = run_suites(ws.pair, "torsion", cfg, named)
    return r


def cmd_tilt(ws: Workspace, cfg: SuiteConfig, argv: list) -> Report:
    tp = ws.pair
    if not is_tilting(tp):
        raise NotTilting(f"torsion pair ({tp}) is not tilting")
    r = Report(argv, cfg.seed)
    names = ws.heart_objects or _default_objects(ws)
    objs = [ws.heart_object(n) for n in names]
    table = [[heart_hom_dim(a, b) for b in objs] for a in objs]
    r.tables["heart Hom dimensions (rows = source)"] = {"rows": names, "cols": names, "values": table}
    if all(o.h_minus1.is_zero() and o.is_stalk() for o in objs):
        mt = [[hom_dim(a.module, b.module) for b in objs] for a in objs]
        r.facts["heart table equals module Hom table"] = mt == table

    # (F[1], T) is a torsion pair on the heart, checked on the named objects
    def named_t1():
        bad = []
        for i, a in enumerate(objs):
            for j, b in enumerate(objs):
                if a.h0.is_zero() and b.h_minus1.is_zero() and table[i][j]:
                    bad.append({"source": names[i], "target": names[j], "dim": table[i][j]})
        return CheckResult("heart pair (T1) on named objects", FAIL if bad else PASS, len(objs) ** 2, bad)

    def named_t2():
        bad = [n for n, o in zip(names, objs) if not torsion_decomposition(o).verify()]
        return CheckResult("heart pair (T2) on named objects", FAIL if bad else PASS, len(objs),
                           [{"object": n} for n in bad])

    r.checks = [named_t1(), named_t2()]
    r.checks += heart_checks(tp, cfg, only=("heart.T1", "heart.T2"))
    r.checks += exactness_comparison_checks(tp, cfg)
    return r


def cmd_verify(ws: Workspace, cfg: SuiteConfig, suite: str, argv: list) -> Report:
    r = Report(argv, cfg.seed)
    r.facts["tilting"] = bool(is_tilting(ws.pair))
    r.checks = run_suites(ws.pair, suite, cfg, list(ws.modules.values()))
    return r


def cmd_resolve(ws: Workspace, cfg: SuiteConfig, name: str, argv: list) -> Report:
    if name not in ws.complexes:
        raise WorkspaceError(f"complexes.{name}", f"unknown complex; known: {sorted(ws.complexes)}")
    tp = ws.pair
    x = ws.complexes[name]
    res = t_resolve_complex(tp, x)
    r = Report(argv, None)
    fw = cfg.full_witness
    r.witnesses["original"] = complex_to_dict(x, fw)
    r.witnesses["resolved"] = complex_to_dict(res.resolved, fw)
    r.witnesses["qis"] = chain_map_to_dict(res.qis, fw)["components"]
    r.facts["unchanged"] = res.resolved == x
    checks = [
        ("resolve.qis", is_quasi_iso(res.qis)),
        ("resolve.membership", all(is_torsion(tp, t) for t in res.resolved.terms.values())),
        ("resolve.support", res.support_ok()),
    ]
    r.checks = [CheckResult(n, PASS if ok else FAIL, 1) for n, ok in checks]
    return r


# --- argument parsing ---------------------------------------------------------------

def _seed_default() -> int:
    env = os.environ.get("HRS_LAB_SEED")
    try:
        return int(env) if env else 0
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("workspace", help="TOML workspace file")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $HRS_LAB_SEED or 0)")
    common.add_argument("--trials", type=int, default=50, help="trials per randomized check (default: 50)")
    common.add_argument("--prime-override", type=int, default=None, help="use this prime instead of the workspace's")
    common.add_argument("--format", choices=("text", "machine"), default="text", help="report format")
    common.add_argument("--full-witness", action="store_true", help="do not elide matrices larger than 12x12")

    ap = argparse.ArgumentParser(prog="hrs-lab", description="Torsion pairs, tilted hearts and derived equivalences "
                                 "for path algebras of acyclic quivers over F_p.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    sub.add_parser("check-torsion", parents=[common], help="torsion axioms, classification and tilting test")
    sub.add_parser("tilt", parents=[common], help="heart Hom table, torsion pair on the heart, exactness comparison")
    v = sub.add_parser("verify", parents=[common], help="run property suites")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--trial", type=int, default=None, help="replay a single trial index")
    r = sub.add_parser("resolve", parents=[common], help="resolve a named complex by torsion terms")
    r.add_argument("complex", help="name of a complex in the workspace")
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    seed = args.seed if args.seed is not None else _seed_default()
    cfg = SuiteConfig(seed=seed, trials=args.trials, only_trial=getattr(args, "trial", None),
                      full_witness=args.full_witness)
    t0 = time.perf_counter()
    try:
        ws = load_workspace(args.workspace, args.prime_override)
        if args.cmd == "check-torsion":
            rep = cmd_check_torsion(ws, cfg, argv)
        elif args.cmd == "tilt":
            rep = cmd_tilt(ws, cfg, argv)
        elif args.cmd == "verify":
            rep = cmd_verify(ws, cfg, args.suite, argv)
        else:
            rep = cmd_resolve(ws, cfg, args.complex, argv)
    except (WorkspaceError, NotTilting, NotInHeart, OSError) as exc:
        print(f"hrs-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep.timing["total_seconds"] = round(time.perf_counter() - t0, 3)
    print(rep.to_json() if args.format == "machine" else rep.render_text())
    return EXIT_FAIL if rep.verdict == FAIL else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
