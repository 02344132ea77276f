"""Command-line driver: ``sfqmap {map,verify,stats,sweep}``.

Exit codes: 0 ok, 1 usage or I/O error, 2 verification failure,
3 solver failure (infeasible, no solution in budget) or internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .decompose import OBJECTIVE_MODES, OR_STYLES, MappingConfig, decompose
from .dff import InfeasiblePathError
from .netlist import CycleError, NetlistError, parse_netlist, validate
from .phase import PhaseAssignmentError, build_phase_model, clocked_depth
from .pipeline import MappingResult, map_network
from .verify import (
    CostTableError,
    count_jjs,
    emit_dot,
    emit_netlist,
    emit_report_json,
    load_cost_table,
    parse_annotated,
    verify_timing,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_SOLVER = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2, which we reserve
        raise UsageError(message)


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {val}")
    return val


def _positive_float(text: str) -> float:
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {val}")
    return val


def _phase_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad phase list {text!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("phase counts must be >= 1")
    return vals


def _add_mapping_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--objective", choices=OBJECTIVE_MODES, default="gate-max")
    p.add_argument("--or-style", choices=OR_STYLES, default="merger")
    p.add_argument("--time-limit", type=_positive_float, default=MappingConfig.time_limit,
                   help="wall-clock limit per solver call in seconds")
    p.add_argument("--no-time-limit", action="store_true",
                   help="bound solver calls by --node-limit only (reproducible)")
    p.add_argument("--node-limit", type=_positive_int, default=MappingConfig.node_limit,
                   help="search-node limit per solver call")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cost-table", help="JSON {kind: jj}; default $SFQMAP_COST_TABLE or bundled")
    p.add_argument("--workers", type=_positive_int, default=os.cpu_count() or 1,
                   help="processes for per-path DFF solving")
    p.add_argument("--spacing", choices=("window", "literal"), default="window")
    p.add_argument("--no-embed", action="store_true",
                   help="do not try the stretched mapping of the largest divisor of n")
    p.add_argument("-o", "--output", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sfqmap", description="Multiphase SFQ technology mapping.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("map", help="map a netlist and write artifacts")
    p.add_argument("input")
    p.add_argument("--phases", "-n", type=_positive_int, default=1)
    p.add_argument("--emit", choices=("dot", "json", "netlist", "all"), action="append",
                   help="artifacts to write (repeatable; default json)")
    p.add_argument("--dump-model", action="store_true",
                   help="also write the phase-assignment model in text form")
    _add_mapping_flags(p)

    p = sub.add_parser("sweep", help="map at several phase counts and tabulate")
    p.add_argument("input")
    p.add_argument("--phases", "-n", type=_phase_list, default=[1, 2, 4, 7],
                   help="comma-separated phase counts (default 1,2,4,7)")
    _add_mapping_flags(p)

    p = sub.add_parser("verify", help="check an annotated mapped netlist")
    p.add_argument("input")
    p.add_argument("--phases", "-n", type=_positive_int,
                   help="override the phase count stored in the netlist")

    p = sub.add_parser("stats", help="print netlist statistics")
    p.add_argument("input")
    p.add_argument("--cost-table")
    return parser


def _costs(path: str | None) -> dict[str, int]:
    try:
        return load_cost_table(path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cost table: {exc}") from None


def _config(args, n: int) -> MappingConfig:
    return MappingConfig(
        n=n,
        objective_mode=args.objective,
        or_style=args.or_style,
        time_limit=None if args.no_time_limit else args.time_limit,
        node_limit=args.node_limit,
        seed=args.seed,
        workers=args.workers,
        spacing=args.spacing,
    )


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _outdir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create {path}: {exc.strerror}") from None
    return out


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _summary(res: MappingResult) -> str:
    r = res.report
    return (f"{r.circuit}: n={r.n} dff={r.dff_count} splitters={r.splitter_count} "
            f"jj={r.jj_count} epochs={r.epoch_depth} status={res.status.value} "
            f"verified={'yes' if res.verification.ok else 'no'}")


def _result_code(res: MappingResult) -> int:
    if not (res.verification.ok and res.equivalent):
        return EXIT_VERIFY
    if not (res.phase_status.has_solution and res.insertion.status.has_solution):
        return EXIT_SOLVER
    return EXIT_OK


def run_map(args, out=None) -> int:
    out = out or sys.stdout
    net = parse_netlist(_read(args.input))
    costs = _costs(args.cost_table)
    cfg = _config(args, args.phases)
    outdir = _outdir(args.output)
    res = map_network(net, cfg, costs, embed=not args.no_embed)
    emit = set(args.emit or ["json"])
    if "all" in emit:
        emit = {"dot", "json", "netlist"}
    if "json" in emit:
        _write(outdir / f"{net.name}.report.json", emit_report_json(res.report))
        timings = {k: round(v, 6) for k, v in res.timings.items()}
        _write(outdir / f"{net.name}.timings.json", json.dumps(timings, sort_keys=True, indent=2) + "\n")
    if "dot" in emit:
        _write(outdir / f"{net.name}.dot", emit_dot(res.sfq, res.stages))
    if "netlist" in emit:
        _write(outdir / f"{net.name}.mapped.json", emit_netlist(res.sfq, res.stages))
    if args.dump_model:
        model = build_phase_model(decompose(net, cfg), cfg.n, cfg.objective_mode)
        _write(outdir / f"{net.name}.model.txt", model.dump())
    print(_summary(res), file=out)
    for v in res.verification.violations[:20]:
        print(f"  violation: {v}", file=out)
    if not res.equivalent:
        print("  mapped network is not logically equivalent to the input", file=out)
    return _result_code(res)


def run_sweep(args, out=None) -> int:
    out = out or sys.stdout
    net = parse_netlist(_read(args.input))
    costs = _costs(args.cost_table)
    outdir = _outdir(args.output)
    memo: dict = {}
    rows = []
    code = EXIT_OK
    for n in args.phases:
        res = map_network(net, _config(args, n), costs, memo, embed=not args.no_embed)
        rows.append({"n": n, "dff_count": res.dff_count, "jj_count": res.report.jj_count,
                     "splitter_count": res.report.splitter_count, "status": res.status.value,
                     "verified": res.verification.ok, "source": res.source})
        print(_summary(res), file=out)
        code = max(code, _result_code(res))
    table = {"circuit": net.name, "rows": rows}
    _write(outdir / f"{net.name}.sweep.json", json.dumps(table, sort_keys=True, indent=2) + "\n")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _write(outdir / f"{net.name}.sweep.csv", buf.getvalue())
    return code


def run_verify(args, out=None) -> int:
    out = out or sys.stdout
    sfq, stages = parse_annotated(_read(args.input))
    if args.phases is not None:
        stages = type(stages)(args.phases, stages.sigma)
    report = verify_timing(sfq, stages)
    if report.ok:
        print(f"{sfq.net.name}: n={stages.n} timing ok", file=out)
        return EXIT_OK
    print(f"{sfq.net.name}: n={stages.n} {len(report.violations)} violation(s)", file=out)
    for v in report.violations:
        print(f"  {v}", file=out)
    return EXIT_VERIFY


def run_stats(args, out=None) -> int:
    out = out or sys.stdout
    text = _read(args.input)
    net = parse_netlist(text)
    report = validate(net)
    counts = net.count_kinds()
    stats = {"circuit": net.name, "nodes": len(net), "inputs": len(net.inputs),
             "outputs": len(net.outputs), "gate_counts": counts, "valid": report.ok}
    if report.ok:
        try:
            stats["clocked_depth"] = clocked_depth(decompose(net, MappingConfig()))
        except NetlistError:
            pass
    if '"stage"' in text:
        try:
            sfq, stages = parse_annotated(text)
            stats["phases"] = stages.n
            stats["verified"] = verify_timing(sfq, stages).ok
            stats["jj_count"] = count_jjs(sfq, _costs(args.cost_table))
        except (NetlistError, CostTableError) as exc:
            stats["annotation_error"] = str(exc)
    print(json.dumps(stats, sort_keys=True, indent=2), file=out)
    return EXIT_OK if report.ok else EXIT_USAGE


COMMANDS = {"map": run_map, "sweep": run_sweep, "verify": run_verify, "stats": run_stats}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sfqmap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NetlistError, CycleError) as exc:
        print(f"sfqmap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PhaseAssignmentError, InfeasiblePathError) as exc:
        print(f"sfqmap: solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except Exception as exc:  # pragma: no cover - last resort
        print(f"sfqmap: internal error: {exc!r}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
