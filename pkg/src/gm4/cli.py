"""Command-line interface: ``gm4 <command> [options]``.

Exit codes: 0 success; 1 invalid manifold; 2 unreadable input; 3 the
criterion refutes orthogonality; 4 the criterion does not apply; 5 a
transformation precondition fails; 6 an internal assertion fails.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import generators as gen
from .charge import charge_report, orthogonality_criterion
from .errors import (
    BadPermutation,
    BudgetExceeded,
    InternalAssertionError,
    InvalidManifold,
    NotApplicable,
    ParseError,
    PreconditionFailed,
)
from .invariants import invariant_report
from .jsonio import SCHEMA, dumps, dumps_manifold, encode_ints, load_with_reading, manifold_to_dict
from .transform import orthogonality_witness, orthogonalize, reglue, unwind
from .wstructure import GraphManifold, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_REFUTED = 3
EXIT_NOT_APPLICABLE = 4
EXIT_PRECONDITION = 5
EXIT_INTERNAL = 6


@dataclass
class CliConfig:
    command: str
    input: str = "-"
    output: str | None = None
    format: str = "json"
    transpose_gluing: bool = False
    seed: int = 0
    verbose: int = 0
    reading: str = "C1"


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc}") from exc


def _load(cfg: CliConfig) -> GraphManifold:
    try:
        g, cfg.reading = load_with_reading(_read_text(cfg.input), cfg.transpose_gluing)
        return g
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"parse error: {exc}") from exc


def _load_valid(cfg: CliConfig) -> GraphManifold:
    g = _load(cfg)
    report = validate(g)
    if not report.ok:
        raise _Exit(EXIT_INVALID, f"invalid manifold: {report.summary()}")
    return g


def _emit(cfg: CliConfig, doc: dict, text: str) -> None:
    sys.stdout.write(dumps(encode_ints(doc)) + "\n" if cfg.format == "json" else text.rstrip("\n") + "\n")


def _write_manifold(path: str, g: GraphManifold) -> None:
    if path == "-":
        sys.stdout.write(dumps_manifold(g))
    else:
        Path(path).write_text(dumps_manifold(g))


# ---------------------------------------------------------------------------
# commands


def cmd_validate(cfg: CliConfig) -> int:
    g = _load(cfg)
    report = validate(g)
    _emit(cfg, {"schema": SCHEMA, **report.to_json()}, report.summary())
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_report(cfg: CliConfig) -> int:
    g = _load_valid(cfg)
    inv = invariant_report(g, cfg.reading)
    charge = charge_report(g)
    doc = {"schema": SCHEMA, "invariants": inv.to_json(), "charge": charge}
    lines = [f"manifold type {inv.manifold_type}"]
    for e in inv.edges:
        lines.append(f"edge {e.edge}: i={e.i} P={e.P_w.basis[0]}")
    for v, c in zip(inv.vertices, charge):
        lines.append(f"vertex {v.vertex}: type={v.type} j={v.j} classes={[len(ws) for _, ws in v.classes]} "
                     f"dimQ={c['dimQ']} chargeVanishing={c['chargeVanishing']}")
    lines.extend(f"note: {n}" for n in inv.notes)
    _emit(cfg, doc, "\n".join(lines))
    return EXIT_OK


def cmd_check_orthogonal(cfg: CliConfig, witness_path: str | None) -> int:
    g = _load_valid(cfg)
    notes = list(invariant_report(g, cfg.reading).notes)
    try:
        verdict = orthogonality_criterion(g)
    except NotApplicable as exc:
        doc = {"schema": SCHEMA, "verdict": "not-applicable", "vertex": exc.vertex, "type": exc.vertex_type,
               "notes": notes}
        _emit(cfg, doc, f"not applicable: block {exc.vertex} has type {exc.vertex_type}")
        return EXIT_NOT_APPLICABLE
    doc = {"schema": SCHEMA, **verdict.to_json(), "notes": notes}
    if not verdict.passed:
        _emit(cfg, doc, f"refuted: condition {verdict.condition} fails at {verdict.location} ({verdict.detail})")
        return EXIT_REFUTED
    w = orthogonality_witness(g)
    if not w.found:
        raise InternalAssertionError("criterion passed but no orthogonal basis was found")
    doc["witness"] = {"basisChange": w.basis_change.to_json(g), "ledger": w.ledger.to_json()}
    if witness_path:
        _write_manifold(witness_path, w.manifold)
    _emit(cfg, doc, "pass: orthogonal basis found")
    return EXIT_OK


def _transform_output(cfg: CliConfig, stage: str, manifold: GraphManifold, ledger, extra: dict) -> int:
    doc = {"schema": SCHEMA, "stage": stage, "ok": ledger.ok, **extra, "ledger": ledger.to_json()}
    if cfg.output:
        _write_manifold(cfg.output, manifold)
    else:
        doc["manifold"] = manifold_to_dict(manifold)
    failed = [f"{c.stage}: {c.name} at {c.location}" for c in ledger.failures()]
    _emit(cfg, doc, f"{stage}: {'ok' if ledger.ok else 'FAILED'}" + "".join(f"\n  {f}" for f in failed))
    return EXIT_OK if ledger.ok else EXIT_INTERNAL


def cmd_reglue(cfg: CliConfig) -> int:
    r = reglue(_load_valid(cfg))
    g = r.input_adapted
    extra = {"basisChange": r.basis_change.to_json(g),
             "deltas": [{"edge": str(w), "delta": list(d)}
                        for w, d in sorted(r.deltas.items(), key=lambda kv: (kv[0].edge, not kv[0].forward))]}
    return _transform_output(cfg, "reglue", r.manifold, r.ledger, extra)


def cmd_unwind(cfg: CliConfig) -> int:
    r = unwind(_load_valid(cfg))
    return _transform_output(cfg, "unwind", r.manifold, r.ledger, {"unwind": r.to_json()})


def cmd_orthogonalize(cfg: CliConfig) -> int:
    r = orthogonalize(_load_valid(cfg))
    return _transform_output(cfg, "orthogonalize", r.manifold, r.ledger, {"unwind": r.unwound.to_json()})


def cmd_generate(cfg: CliConfig, args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "cycle":
        g = gen.gen_cycle_example(args.k, args.perturbed)
    elif kind == "orthogonal":
        shape = gen.cycle_shape(args.k)
        gluings = gen.alternating_gluings(args.k) if args.alternating else None
        if args.alternating and args.k % 2:
            raise _Exit(EXIT_PARSE, "--alternating needs an even --k")
        g = gen.gen_orthogonal(shape, gluings, seed=cfg.seed)
    elif kind == "random":
        g = gen.gen_random(seed=cfg.seed, target=args.target)
    else:  # argparse restricts the choices
        raise _Exit(EXIT_PARSE, f"unknown kind {kind}")
    _write_manifold(cfg.output or "-", g)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # subcommands repeat the global flags without defaults, so a flag given
    # before the command is not overwritten by the subparser
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=("json", "text"), default=d("json"))
    parser.add_argument("--transpose-gluing", action="store_true", default=d(False),
                        help="read stored matrices as transposes of the C1 convention")
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("-o", "--output", default=d(None))
    parser.add_argument("-v", "--verbose", action="count", default=d(0))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    p = argparse.ArgumentParser(prog="gm4", description="W-structure tools for 4D graph-manifolds")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate", "report", "reglue", "unwind", "orthogonalize"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("input", nargs="?", default="-")
    co = sub.add_parser("check-orthogonal", parents=[common])
    co.add_argument("input", nargs="?", default="-")
    co.add_argument("--witness", metavar="PATH", default=None, help="write the orthogonal gluing data here")
    ge = sub.add_parser("generate", parents=[common])
    ge.add_argument("kind", choices=("cycle", "orthogonal", "random"))
    ge.add_argument("--k", type=int, default=3)
    ge.add_argument("--perturbed", action="store_true")
    ge.add_argument("--alternating", action="store_true")
    ge.add_argument("--target", choices=("i1j1type2", "unconstrained"), default="i1j1type2")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig(args.command, getattr(args, "input", "-"), args.output, args.format,
                    args.transpose_gluing, args.seed, args.verbose)
    try:
        if cfg.command == "validate":
            return cmd_validate(cfg)
        if cfg.command == "report":
            return cmd_report(cfg)
        if cfg.command == "check-orthogonal":
            return cmd_check_orthogonal(cfg, args.witness)
        if cfg.command == "reglue":
            return cmd_reglue(cfg)
        if cfg.command == "unwind":
            return cmd_unwind(cfg)
        if cfg.command == "orthogonalize":
            return cmd_orthogonalize(cfg)
        return cmd_generate(cfg, args)
    except _Exit as exc:
        if str(exc):
            print(str(exc), file=sys.stderr)
        return exc.code
    except InvalidManifold as exc:
        print(f"invalid manifold: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PreconditionFailed as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InternalAssertionError as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        if exc.ledger is not None and cfg.format == "json":
            sys.stdout.write(dumps({"schema": SCHEMA, "ok": False, "ledger": exc.ledger.to_json()}) + "\n")
        return EXIT_INTERNAL
    except (BadPermutation, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
