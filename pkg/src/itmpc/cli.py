"""Command-line scenario runner.

    itmpc run scenario.txt --format records --stats out.csv
    itmpc run --inline "protocol=veto n=4 s=20 inputs=0,1,0,0" --trials 100

Exit status is 0 when every trial completed, 2 when any trial aborted and 1
on a usage or configuration error.  The ``records`` format prints one
``record=<type>`` line per item with a fixed field order; everything except
the final ``record=timing`` line is byte-identical across runs of the same
scenario.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .amt import AmtResult
from .anon_bit import AbtReceipt
from .bits import Bits
from .runtime import Outcome
from .scenario import Scenario, parse_scenario, run_protocol
from .veto import VetoResult
from .vote import Tally

COMPLETED = "Completed"


@dataclass(frozen=True)
class TrialResult:
    index: int
    seed: int
    status: str  # "Completed" or the abort reason
    value: str
    bits_sent: tuple[int, ...]
    events: int
    digest: str
    stats: tuple[tuple[str, str], ...] = ()


@dataclass
class RunReport:
    scenario: Scenario
    trials: list[TrialResult]
    wall_time: float = 0.0
    counts: Counter = field(default_factory=Counter)

    def __post_init__(self):
        self.trials.sort(key=lambda t: t.index)
        self.counts = Counter(t.status for t in self.trials)

    @property
    def all_completed(self) -> bool:
        return all(t.status == COMPLETED for t in self.trials)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_completed else 2


def _payload(b: Bits) -> str:
    return b.hex() if len(b) % 4 == 0 else "b" + str(b)


def _pairs(d) -> str:
    return ",".join(f"{k}:{v}" for k, v in sorted(d.items()))


def render_value(value) -> str:
    """Compact whitespace-free rendering of a protocol output."""
    if isinstance(value, VetoResult):
        return f"result={value.result};saw={_pairs(value.saw_other_one)}"
    if isinstance(value, Tally):
        return f"counts={_pairs(value.counts)}"
    if isinstance(value, AmtResult):
        if value.receiver is None:
            return value.status.value
        return f"{value.status.value};{value.receiver}:{_payload(value.outputs[value.receiver])}"
    if isinstance(value, Bits):
        return _payload(value)
    if isinstance(value, dict):
        if value and all(isinstance(v, AbtReceipt) for v in value.values()):
            return ",".join(f"{j}:{r.zero_count}/{r.one_count}" for j, r in sorted(value.items()))
        return _pairs(value)
    return "-" if value is None else str(value)


def trial_stats(outcome: Outcome) -> list[tuple[str, str]]:
    """Per-trial statistics exported by ``--stats``."""
    v = outcome.value if outcome.completed else outcome.detail
    out: list[tuple[str, str]] = [("completed", str(int(outcome.completed)))]
    if isinstance(v, VetoResult):
        out.append(("veto_result", str(v.result)))
        out += [(f"saw_other_one_{i}", str(x)) for i, x in sorted(v.saw_other_one.items())]
    elif isinstance(v, Tally):
        out += [(f"sigma_{k}", str(float(sig))) for k, sig in sorted(v.sigma.items())]
        out += [(f"count_{k}", str(c)) for k, c in sorted(v.counts.items())]
    elif isinstance(v, AmtResult):
        out.append(("status", v.status.value))
    elif isinstance(v, int):
        out.append(("output", str(v)))
    elif isinstance(v, dict):
        for k, x in sorted(v.items()):
            if isinstance(x, AbtReceipt):
                out += [(f"zeros_{k}", str(x.zero_count)), (f"ones_{k}", str(x.one_count))]
            elif isinstance(x, int):
                out.append((f"output_{k}", str(x)))
    if not outcome.completed:
        out.append(("abort", outcome.abort.value))
    return out


def run_trial(scenario: Scenario, index: int) -> TrialResult:
    seed = scenario.seed + index
    outcome, transcript = run_protocol(scenario, seed=seed)
    status = COMPLETED if outcome.completed else outcome.abort.value
    value = render_value(outcome.value) if outcome.completed else "-"
    bits = tuple(transcript.total_bits_sent[i] for i in range(1, scenario.n + 1))
    return TrialResult(index, seed, status, value, bits, len(transcript), transcript.digest(),
                       tuple(trial_stats(outcome)))


def _run_indexed(args):
    return run_trial(*args)


def execute(scenario: Scenario, *, parallel: int = 1) -> RunReport:
    """Run every trial; with ``parallel > 1`` trials are spread over processes."""
    start = time.perf_counter()
    jobs = [(scenario, t) for t in range(scenario.trials)]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_run_indexed, jobs))
    else:
        results = [run_trial(*job) for job in jobs]
    return RunReport(scenario, results, time.perf_counter() - start)


def format_records(report: RunReport) -> str:
    sc = report.scenario
    lines = [f"record=scenario {sc.canonical()}"]
    for t in report.trials:
        lines.append(f"record=trial index={t.index} seed={t.seed} status={t.status} "
                     f"value={t.value} events={t.events} "
                     f"bits={','.join(map(str, t.bits_sent))} digest={t.digest[:16]}")
    statuses = sorted(report.counts)
    lines.append(f"record=summary trials={len(report.trials)} "
                 + " ".join(f"{s}={report.counts[s]}" for s in statuses))
    totals = [sum(t.bits_sent[i] for t in report.trials) for i in range(sc.n)]
    lines.append(f"record=bits total={','.join(map(str, totals))}")
    lines.append(f"record=timing wall_seconds={report.wall_time:.6f}")
    return "\n".join(lines) + "\n"


def format_text(report: RunReport) -> str:
    sc = report.scenario
    lines = [f"scenario: {sc.canonical()}"]
    for t in report.trials:
        detail = t.value if t.status == COMPLETED else f"aborted ({t.status})"
        lines.append(f"trial {t.index} (seed {t.seed}): {detail}")
    lines.append("summary: " + ", ".join(f"{report.counts[s]} {s}" for s in sorted(report.counts)))
    lines.append(f"wall time: {report.wall_time:.3f}s")
    return "\n".join(lines) + "\n"


def write_stats(report: RunReport, path: str) -> None:
    """Long-format CSV: one (trial, statistic, value) row per measurement."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "seed", "statistic", "value"])
        for t in report.trials:
            for key, value in t.stats:
                w.writerow([t.index, t.seed, key, value])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="itmpc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?", help="scenario file")
    src.add_argument("--inline", metavar="TEXT", help="scenario given on the command line")
    run.add_argument("--format", choices=("text", "records"), default="text")
    run.add_argument("--stats", metavar="CSV", help="write per-trial statistics to this file")
    run.add_argument("--trials", type=int, help="override the scenario's trial count")
    run.add_argument("--parallel", type=int, default=1, metavar="K", help="worker processes")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        if args.inline is not None:
            text = args.inline
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        scenario = parse_scenario(text)
        if args.trials is not None:
            if args.trials < 1:
                raise ValueError("--trials must be at least 1")
            scenario = replace(scenario, trials=args.trials)
        if args.parallel < 1:
            raise ValueError("--parallel must be at least 1")
        report = execute(scenario, parallel=args.parallel)
    except (OSError, ValueError) as exc:
        print(f"itmpc: error: {exc}", file=sys.stderr)
        return 1
    out = format_records(report) if args.format == "records" else format_text(report)
    sys.stdout.write(out)
    if args.stats:
        write_stats(report, args.stats)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
