"""Command-line entry point: ``evgeom construct | verify | bounds | code``.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors,
budget exhaustion or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import TextIO

from . import bounds as bounds_mod
from . import codes, verify
from .constructions import FAMILIES, ConstructionSpec, build
from .geometry import BudgetExceeded, GeometryError, read_pointset, write_pointset

VERIFY_CHECKS = ("general", "rs", "spectrum", "cubic-lemma", "seven-lemma", "transitive",
                 "complete", "affine")


@dataclass
class RunConfig:
    command: str
    check: str | None = None
    family: str | None = None
    q: int | None = None
    n: int | None = None
    r: int | None = None
    s: int | None = None
    k: int | None = None
    kind: str | None = None
    budget: int | None = None
    threads: int | None = None
    input: str | None = None
    output: str | None = None
    census: bool = False
    json: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in ("construct", "verify", "bounds", "code"):
            raise ValueError(f"unknown command {self.command!r}")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be at least 1")


class UsageError(ValueError):
    pass


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        flags = ", ".join("--" + ("in" if m == "input" else "out" if m == "output" else m)
                          for m in missing)
        raise UsageError(f"{cfg.command} {cfg.check or ''} needs {flags}".replace("  ", " "))


def _emit(obj: dict, cfg: RunConfig, out: TextIO) -> None:
    if cfg.json:
        out.write(json.dumps(obj, sort_keys=False) + "\n")
        return
    if "passed" in obj:
        verdict = "PASS" if obj["passed"] else "FAIL"
        out.write(f"{obj['check']}: {verdict}  counts={json.dumps(obj.get('counts', {}))}"
                  f"  work={obj.get('work')}  reduction={obj.get('reduction')}\n")
        if obj.get("sub_verdicts"):
            out.write("  conditions: " + ", ".join(
                f"{k}={'ok' if v else 'no'}" for k, v in obj["sub_verdicts"].items()) + "\n")
        if obj.get("witness"):
            out.write(f"  witness: {obj['witness']}\n")
    else:
        out.write(", ".join(f"{k}={v}" for k, v in obj.items()) + "\n")


def _verify(cfg: RunConfig) -> verify.VerificationReport:
    b = cfg.budget
    if cfg.check == "cubic-lemma":
        _need(cfg, "q")
        return verify.solid_cubic_lemma(cfg.q, reduction=cfg.extra.get("reduction") or "fix_three_points")
    if cfg.check == "seven-lemma":
        _need(cfg, "q")
        return verify.seven_point_lemma(cfg.q)
    _need(cfg, "input")
    X = read_pointset(cfg.input)
    if cfg.check == "general":
        _need(cfg, "k")
        return verify.is_k_general(X, cfg.k, census=cfg.census, budget=b)
    if cfg.check == "rs":
        _need(cfg, "r", "s")
        return verify.is_rs_set(X, cfg.r, cfg.s, census=cfg.census, budget=b)
    if cfg.check == "spectrum":
        return verify.hyperplane_spectrum(X, cfg.extra.get("allowed"), budget=b)
    if cfg.check == "transitive":
        return verify.is_transitive(X)
    if cfg.check == "complete":
        _need(cfg, "r", "s")
        return verify.completeness_check(X, cfg.r, cfg.s, budget=b)
    if cfg.check == "affine":
        return verify.affine_check(X, budget=b)
    raise UsageError(f"unknown check {cfg.check!r}")


def run(cfg: RunConfig, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    if cfg.threads:
        import numba
        numba.set_num_threads(max(1, min(cfg.threads, numba.config.NUMBA_NUM_THREADS)))
    try:
        if cfg.command == "construct":
            _need(cfg, "family", "q", "output")
            opts = {"with_group": not cfg.extra.get("no_group", False)}
            X = build(ConstructionSpec(cfg.family, cfg.q, opts))
            write_pointset(X, cfg.output)
            _emit({"command": "construct", "family": cfg.family, "q": cfg.q, "size": len(X),
                   "ambient_dim": X.ambient_dim, "generators": len(X.generators),
                   "out": cfg.output}, cfg, out)
            return 0
        if cfg.command == "bounds":
            _need(cfg, "kind", "n", "q")
            _emit(bounds_mod.bound(cfg.kind, cfg.n, cfg.q).to_json(), cfg, out)
            return 0
        if cfg.command == "code":
            if cfg.check == "export":
                _need(cfg, "input", "output")
                H = codes.export_check_matrix(read_pointset(cfg.input))
                codes.write_matrix(H, cfg.output)
                _emit({"command": "code export", "q": H.q, "rows": H.rows, "cols": H.cols,
                       "out": cfg.output}, cfg, out)
                return 0
            if cfg.check == "mindist":
                _need(cfg, "input")
                H = codes.read_matrix(cfg.input)
                d = codes.min_distance(H, budget=cfg.budget)
                _emit({"command": "code mindist", "q": H.q, "length": H.cols,
                       "dimension": H.dimension, "min_distance": d}, cfg, out)
                return 0
            raise UsageError("code needs a subcommand: export or mindist")
        report = _verify(cfg)
        _emit(report.to_json(), cfg, out)
        return 0 if report.passed else 1
    except BudgetExceeded as exc:
        err.write(f"budget exceeded: {exc}\n")
        return 2
    except (UsageError, GeometryError, codes.CodeError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, help="max rank evaluations (default 2e9 or $EVGEOM_BUDGET)")
    common.add_argument("--threads", type=int, help="worker threads for subset scans")
    common.add_argument("--census", action="store_true", help="count all violations instead of stopping at the first")
    common.add_argument("--json", action="store_true", help="emit JSON lines")

    p = argparse.ArgumentParser(prog="evgeom", description="(r,s)-sets in finite projective spaces")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a point set and write it to a file")
    c.add_argument("--family", choices=FAMILIES, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--out", dest="output", required=True)
    c.add_argument("--no-group", action="store_true", help="omit group generators from the file")

    v = sub.add_parser("verify", parents=[common], help="run a check")
    v.add_argument("check", choices=VERIFY_CHECKS)
    v.add_argument("--in", dest="input")
    v.add_argument("--q", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--r", type=int)
    v.add_argument("--s", type=int)
    v.add_argument("--allowed", help="comma-separated intersection sizes for spectrum")
    v.add_argument("--unreduced", action="store_true", help="cubic-lemma: scan every 5-subset")

    b = sub.add_parser("bounds", parents=[common], help="evaluate an upper bound")
    b.add_argument("--kind", choices=sorted(bounds_mod.KINDS), required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--q", type=int, required=True)

    k = sub.add_parser("code", parents=[common], help="check-matrix export and minimum distance")
    k.add_argument("check", choices=("export", "mindist"))
    k.add_argument("--in", dest="input", required=True)
    k.add_argument("--out", dest="output")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    extra = {}
    allowed = getattr(ns, "allowed", None)
    if allowed:
        try:
            extra["allowed"] = [int(x) for x in allowed.split(",")]
        except ValueError:
            raise UsageError(f"bad --allowed list {allowed!r}") from None
    if getattr(ns, "unreduced", False):
        extra["reduction"] = "none"
    if getattr(ns, "no_group", False):
        extra["no_group"] = True
    return RunConfig(command=ns.command, check=getattr(ns, "check", None),
                     family=getattr(ns, "family", None), q=getattr(ns, "q", None),
                     n=getattr(ns, "n", None), r=getattr(ns, "r", None), s=getattr(ns, "s", None),
                     k=getattr(ns, "k", None), kind=getattr(ns, "kind", None), budget=ns.budget,
                     threads=ns.threads, input=getattr(ns, "input", None),
                     output=getattr(ns, "output", None), census=ns.census, json=ns.json,
                     extra=extra)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
