"""Batch classification of designs: certificates, p-ranks, automorphisms.

Every input design gets a record; designs with equal certificates form one
isomorphism class and the first input of each class is its representative.
Aggregate histograms are taken over representatives, since the published
statistics count classes.  Work fans out over a process pool and records
are sorted by digest afterwards, so reports do not depend on scheduling.
"""

from __future__ import annotations

import json
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .design import DesignParams, IncidenceStructure, validate_2design
from .errors import DesignError, FixtureMissing
from .gflinear import p_rank
from .hadamard import (
    diagonal_switching_sets,
    hadamard_to_menon,
    is_bush_type,
    menon_to_hadamard,
    normalize_row_sum,
    parse_sign_matrix,
)
from .isomorphism import design_certificate, hadamard_certificate, is_self_dual
from .switching import switching_closure

SCHEMA = 1


@dataclass(frozen=True)
class DesignRecord:
    index: int
    digest: str
    params: Optional[DesignParams]
    p_ranks: dict[int, int]
    aut_order: int
    self_dual: Optional[bool]
    hadamard_class: Optional[str]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p_ranks"] = {str(p): r for p, r in sorted(self.p_ranks.items())}
        return d


@dataclass(frozen=True)
class ClassificationReport:
    primes: tuple[int, ...]
    records: tuple[DesignRecord, ...]

    @property
    def representatives(self) -> list[DesignRecord]:
        first: dict[str, DesignRecord] = {}
        for rec in sorted(self.records, key=lambda r: r.index):
            first.setdefault(rec.digest, rec)
        return sorted(first.values(), key=lambda r: r.digest)

    @property
    def class_count(self) -> int:
        return len({r.digest for r in self.records})

    @property
    def hadamard_class_count(self) -> Optional[int]:
        reps = self.representatives
        if not reps or any(r.hadamard_class is None for r in reps):
            return None
        return len({r.hadamard_class for r in reps})

    def aut_histogram(self) -> dict[int, int]:
        return _hist(r.aut_order for r in self.representatives)

    def rank_histogram(self, p: int, representatives: bool = True) -> dict[int, int]:
        recs = self.representatives if representatives else self.records
        return _hist(r.p_ranks[p] for r in recs)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "primes": list(self.primes),
            "design_count": len(self.records),
            "class_count": self.class_count,
            "hadamard_class_count": self.hadamard_class_count,
            "aut_order_histogram": _keys(self.aut_histogram()),
            "p_rank_histograms": {
                str(p): {
                    "all": _keys(self.rank_histogram(p, representatives=False)),
                    "representatives": _keys(self.rank_histogram(p)),
                }
                for p in self.primes
            },
            "representatives": [r.digest for r in self.representatives],
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [
            f"designs             {len(self.records)}",
            f"isomorphism classes {self.class_count}",
        ]
        if self.hadamard_class_count is not None:
            lines.append(f"hadamard classes    {self.hadamard_class_count}")
        lines.append("")
        lines.append(_table("|Aut|", self.aut_histogram()))
        for p in self.primes:
            lines.append("")
            lines.append(_table(f"{p}-rank", self.rank_histogram(p)))
        return "\n".join(lines) + "\n"


def _hist(values) -> dict[int, int]:
    return dict(sorted(Counter(values).items()))


def _keys(h: dict) -> dict[str, int]:
    return {str(k): v for k, v in h.items()}


def _table(label: str, hist: dict[int, int]) -> str:
    width = max([len(label)] + [len(str(k)) for k in hist])
    rows = [f"{label.rjust(width)}  classes", f"{'-' * width}  -------"]
    rows += [f"{str(k).rjust(width)}  {v:7d}" for k, v in hist.items()]
    return "\n".join(rows)


def _menon_order(params: Optional[DesignParams]) -> Optional[int]:
    """``n`` when the parameters are (4n^2, 2n^2 - n, n^2 - n), else None."""
    if params is None or not params.symmetric:
        return None
    n = math.isqrt(params.v // 4)
    if n >= 1 and params.v == 4 * n * n and params.k == 2 * n * n - n:
        return n
    return None


def analyze(index: int, matrix: np.ndarray, primes: Sequence[int]) -> DesignRecord:
    """Record for one design; runs in a worker process."""
    inc = IncidenceStructure(matrix)
    try:
        params: Optional[DesignParams] = validate_2design(inc)
    except DesignError:
        params = None
    cert = design_certificate(inc)
    self_dual = is_self_dual(inc) if inc.v == inc.b else None
    had = None
    n = _menon_order(params)
    if n is not None:
        had = hadamard_certificate(menon_to_hadamard(inc, n)).digest
    return DesignRecord(
        index=index,
        digest=cert.digest,
        params=params,
        p_ranks={int(p): p_rank(inc, int(p)) for p in primes},
        aut_order=cert.group_order,
        self_dual=self_dual,
        hadamard_class=had,
    )


def classify(
    designs: Sequence[IncidenceStructure], primes: Sequence[int] = (), jobs: Optional[int] = None
) -> ClassificationReport:
    """Classify ``designs``; ``jobs`` worker processes (default: all CPUs, 1 = inline)."""
    primes = tuple(sorted({int(p) for p in primes}))
    for p in primes:
        p_rank(np.zeros((1, 1), dtype=np.uint8), p)  # reject non-primes up front
    jobs = jobs or os.cpu_count() or 1
    mats = [d.matrix for d in designs]
    if jobs == 1 or len(mats) < 2:
        recs = [analyze(i, m, primes) for i, m in enumerate(mats)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            recs = list(pool.map(analyze, range(len(mats)), mats, [primes] * len(mats)))
    recs.sort(key=lambda r: (r.digest, r.index))
    return ClassificationReport(primes, tuple(recs))


# -- golden comparisons against literature matrices --------------------------


@dataclass(frozen=True)
class GoldenCase:
    """Published statistics for the switching closure of one Bush-type matrix."""

    name: str
    fixture: str
    n: int
    prime: int
    class_count: int
    aut_histogram: dict[int, int]
    rank_histogram: dict[int, int]  # over representatives; may be partial
    rank_partial: bool
    start_rank: int
    hadamard_classes: int


GOLDEN = {
    "ex3.4": GoldenCase(
        "ex3.4", "janko-hadi-36.had", 3, 3, 64, {1: 64},
        {15: 1, 16: 10, 17: 28, 18: 18}, True, 15, 14,
    ),
    "ex3.5": GoldenCase(
        "ex3.5", "janko-36.had", 3, 3, 24, {1: 20, 3: 4},
        {15: 1, 16: 5, 17: 10, 18: 8}, False, 16, 16,
    ),
    "ex3.6": GoldenCase(
        "ex3.6", "jkt-100.had", 5, 5, 208, {20: 204, 100: 4},
        {38: 2, 39: 4, 40: 20, 41: 64, 42: 118}, False, 42, 120,
    ),
}
# ex3.6 gives no separate starting rank; start_rank there is unchecked
_START_CHECKED = {"ex3.4", "ex3.5"}


def fixture_path(case: GoldenCase, fixtures: Optional[os.PathLike] = None) -> Path:
    root = fixtures or os.environ.get("DESIGNSWITCH_FIXTURES")
    if not root:
        raise FixtureMissing(f"no fixture directory given for {case.name} ({case.fixture})")
    path = Path(root) / case.fixture
    if not path.is_file():
        raise FixtureMissing(f"literature fixture {path} is missing")
    return path


def bush_closure(h, n: int) -> list[IncidenceStructure]:
    """The 2^(2n) designs reachable from the Menon design of ``h`` by diagonal switching."""
    menon = hadamard_to_menon(normalize_row_sum(h))
    return switching_closure(menon, diagonal_switching_sets(menon, n))


def run_golden(
    name: str, fixtures: Optional[os.PathLike] = None, jobs: Optional[int] = None
) -> tuple[ClassificationReport, list[str]]:
    """Classify the closure of a literature matrix and list mismatches with the published counts."""
    case = GOLDEN[name]
    h = parse_sign_matrix(fixture_path(case, fixtures).read_text())
    if not is_bush_type(h, case.n):
        raise DesignError(f"{case.fixture} is not a Bush-type matrix of order {4 * case.n**2}")
    designs = bush_closure(h, case.n)
    report = classify(designs, [case.prime], jobs)
    return report, compare_golden(case, report)


def compare_golden(case: GoldenCase, report: ClassificationReport) -> list[str]:
    bad = []
    if report.class_count != case.class_count:
        bad.append(f"classes: {report.class_count} != {case.class_count}")
    if report.aut_histogram() != case.aut_histogram:
        bad.append(f"|Aut| histogram: {report.aut_histogram()} != {case.aut_histogram}")
    hist = report.rank_histogram(case.prime)
    if case.rank_partial:
        if any(hist.get(k, 0) < v for k, v in case.rank_histogram.items()):
            bad.append(f"{case.prime}-rank histogram {hist} lacks {case.rank_histogram}")
    elif hist != case.rank_histogram:
        bad.append(f"{case.prime}-rank histogram: {hist} != {case.rank_histogram}")
    start = next(r for r in report.records if r.index == 0)
    if case.name in _START_CHECKED and start.p_ranks[case.prime] != case.start_rank:
        bad.append(f"starting design rank {start.p_ranks[case.prime]} != {case.start_rank}")
    if report.hadamard_class_count != case.hadamard_classes:
        bad.append(f"hadamard classes: {report.hadamard_class_count} != {case.hadamard_classes}")
    return bad
