"""Command-line front end: ``solve``, ``bench``, ``gen`` and ``oracle``.

Exit codes: 0 success, 1 usage or parameter error, 2 I/O error.
Output sequences and file indices are 1-based.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from statistics import mean

from .evaluation import fast_evaluate
from .genetic import HgsParams, SolveReport, run_hgs
from .instance import Instance, InstanceFormatError, generate_instance, read_instance, write_instance
from .local_search import NEIGHBORHOODS
from .oracle import OracleLimitError, exact_best_sequence, exact_min_loading

log = logging.getLogger("hgs_ssp")

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2
SEED_ENV = "HGS_SSP_SEED"

RUN_COLUMNS = [
    "instance", "run", "seed", "best_switches", "tie_break",
    "iterations", "elapsed_ms", "i_max", "params", "sequence",
]
SUMMARY_COLUMNS = ["n", "m", "C", "instances", "best", "avg", "t"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunRecord:
    instance: str
    run: int
    seed: int
    best_switches: int
    tie_break: float
    iterations: int
    elapsed_ms: float
    i_max: int
    params: str
    sequence: tuple[int, ...]

    @classmethod
    def from_report(cls, name: str, run: int, report: SolveReport) -> "RunRecord":
        return cls(
            instance=name,
            run=run,
            seed=report.params.seed,
            best_switches=report.best.switches,
            tie_break=report.best.tie_break,
            iterations=report.iterations,
            elapsed_ms=report.elapsed * 1000.0,
            i_max=report.params.i_max,
            params=report.params.snapshot(),
            sequence=tuple(j + 1 for j in report.best_sequence),
        )

    def row(self, timing: bool = True) -> list[str]:
        return [
            self.instance,
            str(self.run),
            str(self.seed),
            str(self.best_switches),
            f"{self.tie_break:.6f}",
            str(self.iterations),
            f"{self.elapsed_ms:.1f}" if timing else "",
            str(self.i_max),
            self.params,
            " ".join(map(str, self.sequence)),
        ]


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    d = HgsParams()
    g = p.add_argument_group("search parameters")
    g.add_argument("--mu", type=int, default=d.mu)
    g.add_argument("--lambda", dest="lambda_", type=int, default=d.lambda_)
    g.add_argument("--mu-elite", type=int, default=d.mu_elite)
    g.add_argument("--mu-close", type=int, default=d.mu_close)
    g.add_argument("--i-max", type=int, default=d.i_max,
                   help="consecutive children without improvement before stopping")
    g.add_argument("--time-limit", type=float, default=None, help="seconds per run")
    g.add_argument("--neighborhoods", default=",".join(NEIGHBORHOODS),
                   help="comma-separated local search order")
    g.add_argument("--ls-loop", action="store_true",
                   help="repeat the neighborhood pass until no improvement")
    g.add_argument("--seed", type=int, default=None,
                   help=f"base seed (falls back to ${SEED_ENV}, then 1)")
    g.add_argument("--runs", type=int, default=None)
    g.add_argument("--no-timing", action="store_true",
                   help="leave timing columns empty so output is byte-reproducible")


def _base_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 1
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"${SEED_ENV} is not an integer: {env!r}") from None


def _params(args, seed: int) -> HgsParams:
    try:
        return HgsParams(
            mu=args.mu,
            lambda_=args.lambda_,
            mu_elite=args.mu_elite,
            mu_close=args.mu_close,
            i_max=args.i_max,
            time_limit=args.time_limit,
            seed=seed,
            neighborhoods=tuple(s.strip() for s in args.neighborhoods.split(",") if s.strip()),
            ls_loop=args.ls_loop,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _solve_task(task) -> tuple[RunRecord, list]:
    instance, run, params, want_trace = task
    report = run_hgs(instance, params, record_population=want_trace)
    return RunRecord.from_report(instance.name, run, report), report.snapshots


def _write_csv(rows, header, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _load(path: str) -> Instance:
    try:
        return read_instance(path)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from None


def cmd_solve(args) -> int:
    instance = _load(args.instance)
    runs = args.runs if args.runs is not None else 1
    if runs < 1:
        raise UsageError("--runs must be at least 1")
    base = _base_seed(args)
    tasks = [(instance, r, _params(args, base + r), bool(args.trace)) for r in range(runs)]
    results = [_solve_task(t) for t in tasks]
    records = [rec for rec, _ in results]

    buf = io.StringIO()
    _write_csv([rec.row(not args.no_timing) for rec in records], RUN_COLUMNS, buf)
    best = min(rec.best_switches for rec in records)
    avg = mean(rec.best_switches for rec in records)
    t = "" if args.no_timing else f"{mean(rec.elapsed_ms for rec in records) / 1000:.3f}"
    buf.write(f"# summary best={best:.2f} avg={avg:.2f} t={t}\n")
    _emit(buf.getvalue(), args.out)

    if args.trace:
        tbuf = io.StringIO()
        rows = [
            [rec.run, k, sw, f"{tb:.6f}"]
            for rec, (_, snaps) in zip(records, results)
            for k, snap in enumerate(snaps)
            for sw, tb in snap
        ]
        _write_csv(rows, ["run", "selection", "switches", "tie_break"], tbuf)
        Path(args.trace).write_text(tbuf.getvalue())
    return EXIT_OK


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bench(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        raise OSError(f"{root} is not a directory")
    paths = sorted(p for p in root.glob(args.pattern) if p.is_file())
    if not paths:
        raise OSError(f"no instance files matching {args.pattern!r} in {root}")
    runs = args.runs if args.runs is not None else 10
    if runs < 1:
        raise UsageError("--runs must be at least 1")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    base = _base_seed(args)

    instances: list[Instance] = []
    skipped: list[str] = []
    for path in paths:
        try:
            instances.append(replace(read_instance(path), name=path.name))
        except (OSError, UnicodeDecodeError, InstanceFormatError) as exc:
            log.warning("skipping %s: %s", path, exc)
            skipped.append(f"{path.name}: {exc}")
    if not instances:
        raise OSError(f"no readable instances in {root}")

    tasks = [(inst, r, _params(args, base + r), False) for inst in instances for r in range(runs)]
    if args.workers == 1:
        results = [_solve_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_solve_task, tasks))
    # map() preserves task order, so records come out in (instance, run) order
    records = [rec for rec, _ in results]

    timing = not args.no_timing
    buf = io.StringIO()
    _write_csv([rec.row(timing) for rec in records], RUN_COLUMNS, buf)
    Path(args.out).write_text(buf.getvalue())

    summary = io.StringIO()
    _write_csv(summarize(instances, records, timing), SUMMARY_COLUMNS, summary)
    for line in skipped:
        summary.write(f"# skipped {line}\n")
    sys.stdout.write(summary.getvalue())
    if args.summary:
        Path(args.summary).write_text(summary.getvalue())
    return EXIT_OK


def summarize(instances: list[Instance], records: list[RunRecord], timing: bool = True) -> list[list[str]]:
    """Per (n, m, C) line: mean of per-instance best, mean of per-instance average, mean seconds."""
    by_name: dict[str, list[RunRecord]] = {}
    for rec in records:
        by_name.setdefault(rec.instance, []).append(rec)
    groups: dict[tuple[int, int, int], list[list[RunRecord]]] = {}
    for inst in instances:
        key = (inst.n_jobs, inst.n_tools, inst.capacity)
        groups.setdefault(key, []).append(by_name[inst.name])
    rows = []
    for (n, m, c), per_inst in sorted(groups.items()):
        best = mean(min(r.best_switches for r in recs) for recs in per_inst)
        avg = mean(mean(r.best_switches for r in recs) for recs in per_inst)
        t = mean(r.elapsed_ms for recs in per_inst for r in recs) / 1000
        rows.append([n, m, c, len(per_inst), f"{best:.2f}", f"{avg:.2f}", f"{t:.2f}" if timing else ""])
    return rows


def cmd_gen(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    base = _base_seed(args)
    try:
        made = [
            generate_instance(args.n, args.m, args.c, args.min_tools, args.max_tools, seed=base + k)
            for k in range(args.count)
        ]
    except (ValueError, InstanceFormatError) as exc:
        raise UsageError(str(exc)) from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for inst in made:
        path = out / f"{args.prefix}{inst.name}.ssp"
        write_instance(inst, path)
        print(path)
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = _load(args.instance)
    try:
        if args.sequence:
            seq = [int(tok) - 1 for tok in args.sequence.replace(",", " ").split()]
            instance.check_sequence(seq)
            dp = exact_min_loading(instance, seq)
            ktns = fast_evaluate(instance, seq).switches
            print(f"ktns_switches={ktns} dp_switches={dp}")
            return EXIT_OK
        res = exact_best_sequence(instance, max_n=args.max_n)
    except OracleLimitError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    seq = " ".join(str(j + 1) for j in res.best_sequence)
    print(f"best_switches={res.best_switches} tie_break={res.best.tie_break:.6f} "
          f"explored={res.explored} sequence={seq}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hgs-ssp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.add_argument("--trace", help="write population objective snapshots (CSV) here")
    _add_param_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run every instance in a directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--pattern", default="*.ssp")
    p.add_argument("--out", default="bench_runs.csv", help="per-run CSV")
    p.add_argument("--summary", help="also write the per-group summary CSV here")
    p.add_argument("--workers", type=int, default=1)
    _add_param_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate random instance files")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--m", type=int, default=75)
    p.add_argument("--c", type=int, default=25)
    p.add_argument("--min-tools", type=int, default=1)
    p.add_argument("--max-tools", type=int, default=None, help="defaults to --c")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="instances", help="output directory")
    p.add_argument("--prefix", default="")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exact optimum by enumeration (small instances)")
    p.add_argument("--instance", required=True)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--sequence", help="1-based job order; compare KTNS with the exact loading DP")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hgs-ssp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceFormatError as exc:
        print(f"hgs-ssp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hgs-ssp: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
