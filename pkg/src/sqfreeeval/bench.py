"""Benchmark families and the batch harness.

Each grid point ``(family, d, L)`` is generated, isolated on its benchmark
interval and run through the amortization bounds. Records are written as CSV
and JSON with identical field names.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

from .amortize import StoppingModel, bound_report, paper_constant_bound
from .isolator import isolate_benchmark
from .polynomial import IntPolynomial

__all__ = [
    "FAMILIES",
    "BenchmarkRecord",
    "family_generate",
    "run_benchmark",
    "make_grid",
    "write_outputs",
    "records_to_csv",
    "records_from_csv",
    "records_to_json",
    "records_from_json",
    "plot_text",
    "scaling_summary",
    "constant_slack",
    "default_seed",
]

FAMILIES = ("mignotte", "wilkinson", "chebyshev", "random")
DEFAULT_SEED = 20260101


def default_seed() -> int:
    env = os.environ.get("SQFE_SEED")
    return int(env) if env not in (None, "") else DEFAULT_SEED


def constant_slack(d: int) -> float:
    """Additive allowance for low-order terms on top of the leading-constant bound."""
    return 4.0 * d + 16.0


@dataclass(frozen=True)
class BenchmarkRecord:
    family: str
    degree_d: int
    bits_L: int
    partition_size: int
    bisections: int
    integral_bound: float
    closed_form_bound: float
    paper_constant_bound: float
    wall_time_ms: float

    def ok(self) -> bool:
        return self.partition_size >= 0

    def without_time(self) -> tuple:
        d = asdict(self)
        d.pop("wall_time_ms")
        return tuple(d.values())


_FIELDS = [f.name for f in fields(BenchmarkRecord)]
_INT_FIELDS = {"degree_d", "bits_L", "partition_size", "bisections"}


def _chebyshev(d: int) -> IntPolynomial:
    t0, t1 = IntPolynomial([1]), IntPolynomial([0, 1])
    if d == 0:
        return t0
    two_x = IntPolynomial([0, 2])
    for _ in range(d - 1):
        t0, t1 = t1, two_x * t1 - t0
    return t1


def family_generate(name: str, d: int, L: int, seed: int | None = None) -> IntPolynomial:
    """Polynomial of degree ``d`` from a named family.

    ``L`` only shapes ``mignotte`` and ``random``; Wilkinson and Chebyshev
    polynomials have fixed coefficients for each degree.
    """
    if d < 2 or L < 2:
        raise ValueError(f"need d >= 2 and L >= 2, got d={d}, L={L}")
    if name == "mignotte":
        if L % 2 or L < 4:
            raise ValueError("mignotte needs an even L >= 4")
        a = 1 << (L // 2 - 1)
        # X^d - 2 (a X - 1)^2
        return IntPolynomial([0] * d + [1]) - IntPolynomial([2]) * IntPolynomial([-1, a]) ** 2
    if name == "wilkinson":
        return IntPolynomial.from_roots(range(1, d + 1))
    if name == "chebyshev":
        return _chebyshev(d)
    if name == "random":
        rng = random.Random(default_seed() if seed is None else seed)
        top = (1 << L) - 1
        coeffs = [rng.randint(-top, top) for _ in range(d)]
        lead = 0
        while lead == 0:
            lead = rng.randint(-top, top)
        return IntPolynomial(coeffs + [lead])
    raise ValueError(f"unknown family {name!r}")


def _grid_seed(seed: int, family: str, d: int, L: int) -> int:
    # stable across processes, unlike hash()
    return seed * 1_000_003 + FAMILIES.index(family) * 10_007 + d * 101 + L


def _run_one(point: tuple[str, int, int, int]) -> BenchmarkRecord:
    family, d, L, seed = point
    start = time.perf_counter()
    try:
        f = family_generate(family, d, L, _grid_seed(seed, family, d, L))
        rep = isolate_benchmark(f)
    except Exception:
        return BenchmarkRecord(family, d, L, -1, -1, math.nan, math.nan, paper_constant_bound(d, L), math.nan)
    integral = closed = math.nan
    try:
        b = bound_report(f, StoppingModel.from_polynomial(f))
        integral = max(1.0, b.integral_2_over_G)
        closed = b.closed_form_sum
    except Exception:
        pass
    ms = (time.perf_counter() - start) * 1000.0
    return BenchmarkRecord(
        family,
        d,
        L,
        rep.stats.partition_size,
        rep.stats.bisections,
        integral,
        closed,
        paper_constant_bound(d, L),
        ms,
    )


def run_benchmark(grid, *, seed: int | None = None, jobs: int = 1) -> list[BenchmarkRecord]:
    """Run every ``(family, d, L)`` in ``grid``; results sorted by that key.

    A failing grid point yields a record with ``partition_size = -1`` and NaN
    bounds instead of aborting the run.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("empty benchmark grid")
    seed = default_seed() if seed is None else seed
    points = sorted({(fam, int(d), int(L)) for fam, d, L in grid}, key=lambda p: (p[0], p[1], p[2]))
    work = [(fam, d, L, seed) for fam, d, L in points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, work))
    return [_run_one(p) for p in work]


def make_grid(families, degrees, bits) -> list[tuple[str, int, int]]:
    out = []
    for fam in families:
        for d in degrees:
            for L in bits:
                if fam == "mignotte" and (L % 2 or L < 4):
                    continue
                out.append((fam, d, L))
    return out


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_FIELDS)
    for r in records:
        w.writerow([repr(v) if isinstance(v, float) else v for v in asdict(r).values()])
    return buf.getvalue()


def _convert(name: str, value):
    if name == "family":
        return str(value)
    if name in _INT_FIELDS:
        return int(value)
    return float(value)


def records_from_csv(text: str) -> list[BenchmarkRecord]:
    rows = csv.DictReader(io.StringIO(text))
    if rows.fieldnames != _FIELDS:
        raise ValueError(f"unexpected CSV columns {rows.fieldnames}")
    return [BenchmarkRecord(**{k: _convert(k, row[k]) for k in _FIELDS}) for row in rows]


def records_to_json(records) -> str:
    # NaN is not valid JSON; encode it as null
    def clean(r):
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in asdict(r).items()}

    return json.dumps([clean(r) for r in records], indent=2)


def records_from_json(text: str) -> list[BenchmarkRecord]:
    data = json.loads(text)
    out = []
    for row in data:
        if list(row) != _FIELDS:
            raise ValueError(f"unexpected JSON fields {list(row)}")
        out.append(
            BenchmarkRecord(**{k: math.nan if row[k] is None else _convert(k, row[k]) for k in _FIELDS})
        )
    return out


def plot_text(records) -> str:
    """Two columns: ``d (L + ln d)`` and ``partition_size``."""
    lines = ["# x=d*(L+ln d) y=partition_size"]
    for r in records:
        if r.ok():
            x = r.degree_d * (r.bits_L + math.log(r.degree_d))
            lines.append(f"{x:.6g} {r.partition_size}")
    return "\n".join(lines) + "\n"


def scaling_summary(records) -> dict[str, float]:
    """Largest ``partition_size / (d (L + ln d))`` per family."""
    out: dict[str, float] = {}
    for r in records:
        if not r.ok():
            continue
        ratio = r.partition_size / (r.degree_d * (r.bits_L + math.log(r.degree_d)))
        out[r.family] = max(out.get(r.family, 0.0), ratio)
    return out


def write_outputs(records, out_dir) -> dict[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "csv": os.path.join(out_dir, "records.csv"),
        "json": os.path.join(out_dir, "records.json"),
        "plot": os.path.join(out_dir, "scaling.txt"),
    }
    with open(paths["csv"], "w") as fh:
        fh.write(records_to_csv(records))
    with open(paths["json"], "w") as fh:
        fh.write(records_to_json(records))
    with open(paths["plot"], "w") as fh:
        fh.write(plot_text(records))
    return paths
