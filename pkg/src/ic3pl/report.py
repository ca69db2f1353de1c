"""Run reports, success rates and corpus batches."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .aiger import AigerParseError, load
from .engine import IC3, Options, Safe, Unknown, Unsafe
from .prediction import PredictionStats
from .transition_system import encode

CSV_FIELDS = ("filename", "verdict", "wall_ms", "frames", "lemmas_generalized",
              "lemmas_predicted", "N_sp", "N_p", "N_fp", "N_g", "SR_lp", "SR_fp", "SR_adv",
              "sat_queries_total")


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def success_rates(stats: PredictionStats) -> tuple[Optional[float], Optional[float], Optional[float]]:
    """(SR_lp, SR_fp, SR_adv) = (N_sp/N_p, N_fp/N_g, N_sp/N_g); None on a zero denominator."""
    return (_ratio(stats.n_sp, stats.n_p), _ratio(stats.n_fp, stats.n_g),
            _ratio(stats.n_sp, stats.n_g))


@dataclass
class RunReport:
    filename: str
    verdict: str
    wall_ms: float = 0.0
    frames: int = 0
    lemmas_generalized: int = 0
    lemmas_predicted: int = 0
    lemmas_pushed: int = 0
    N_sp: int = 0
    N_p: int = 0
    N_fp: int = 0
    N_g: int = 0
    SR_lp: Optional[float] = None
    SR_fp: Optional[float] = None
    SR_adv: Optional[float] = None
    queries: dict = field(default_factory=dict)
    sat_queries_total: int = 0
    reason: str = ""
    trace_length: Optional[int] = None
    invariant_size: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=False)

    def csv_row(self) -> dict:
        row = {k: getattr(self, k) for k in CSV_FIELDS}
        for k in ("SR_lp", "SR_fp", "SR_adv"):
            row[k] = "" if row[k] is None else f"{row[k]:.6f}"
        row["wall_ms"] = f"{self.wall_ms:.1f}"
        return row

    def text(self) -> str:
        def sr(x):
            return "n/a" if x is None else f"{100 * x:.2f}%"

        lines = [
            f"file        {self.filename}",
            f"verdict     {self.verdict}" + (f" ({self.reason})" if self.reason else ""),
            f"time        {self.wall_ms:.1f} ms",
            f"frames      {self.frames}",
            f"lemmas      generalized={self.lemmas_generalized} predicted={self.lemmas_predicted}"
            f" pushed={self.lemmas_pushed}",
            f"prediction  N_sp={self.N_sp} N_p={self.N_p} N_fp={self.N_fp} N_g={self.N_g}",
            f"rates       SR_lp={sr(self.SR_lp)} SR_fp={sr(self.SR_fp)} SR_adv={sr(self.SR_adv)}",
            "queries     " + " ".join(f"{k}={v}" for k, v in self.queries.items())
            + f" total={self.sat_queries_total}",
        ]
        return "\n".join(lines)


def build_report(filename: str, engine: IC3, verdict, wall: float) -> RunReport:
    ps = engine.prediction_stats
    sr = success_rates(ps)
    queries = {p: engine.stats.queries.get(p, 0)
               for p in ("blocking", "generalization", "prediction", "propagation")}
    return RunReport(
        filename=filename,
        verdict=verdict_name(verdict),
        wall_ms=1000 * wall,
        frames=engine.k,
        lemmas_generalized=engine.stats.lemmas.get("generalized", 0),
        lemmas_predicted=engine.stats.lemmas.get("predicted", 0),
        lemmas_pushed=engine.stats.pushes,
        N_sp=ps.n_sp, N_p=ps.n_p, N_fp=ps.n_fp, N_g=ps.n_g,
        SR_lp=sr[0], SR_fp=sr[1], SR_adv=sr[2],
        queries=queries,
        sat_queries_total=sum(queries.values()),
        reason=verdict.reason if isinstance(verdict, Unknown) else "",
        trace_length=len(verdict.trace) if isinstance(verdict, Unsafe) else None,
        invariant_size=len(verdict.invariant) if isinstance(verdict, Safe) else None,
    )


def verdict_name(verdict) -> str:
    if isinstance(verdict, Safe):
        return "SAFE"
    if isinstance(verdict, Unsafe):
        return "UNSAFE"
    return "UNKNOWN"


def run_file(path, options: Optional[Options] = None):
    """Check one file. Returns (report, verdict, engine); parse errors propagate."""
    options = options or Options()
    model = load(path)
    ts = encode(model)
    engine = IC3(ts, options)
    start = time.monotonic()
    verdict = engine.check()
    return build_report(os.path.basename(str(path)), engine, verdict,
                        time.monotonic() - start), verdict, engine


def _corpus_job(args) -> RunReport:
    path, options = args
    start = time.monotonic()
    try:
        return run_file(path, options)[0]
    except (AigerParseError, OSError) as e:
        return RunReport(os.path.basename(path), "UNKNOWN",
                         wall_ms=1000 * (time.monotonic() - start), reason=str(e))


def corpus_files(directory) -> list[str]:
    d = Path(directory)
    return sorted(str(p) for p in d.iterdir() if p.suffix in (".aag", ".aig") and p.is_file())


def run_corpus(directory, options: Optional[Options] = None, jobs: int = 1) -> list[RunReport]:
    """One report per ``.aag``/``.aig`` file, ordered by file name.

    ``options.timeout`` applies per file. Files that fail to parse yield
    UNKNOWN rows instead of aborting the batch.
    """
    options = options or Options()
    work = [(p, options) for p in corpus_files(directory)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_corpus_job, work))
    else:
        reports = [_corpus_job(w) for w in work]
    return sorted(reports, key=lambda r: r.filename)


def write_csv(reports, fh=None) -> str:
    buf = fh or io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue() if fh is None else ""
