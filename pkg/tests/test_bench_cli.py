import json
import math

import pytest

from sqfreeeval.bench import (
    BenchmarkRecord,
    constant_slack,
    family_generate,
    make_grid,
    plot_text,
    records_from_csv,
    records_from_json,
    records_to_csv,
    records_to_json,
    run_benchmark,
    scaling_summary,
)
from sqfreeeval.cli import main
from sqfreeeval.oracle import sturm_count
from sqfreeeval.isolator import benchmark_interval
from sqfreeeval.polynomial import IntPolynomial as P


class TestFamilies:
    def test_examples(self):
        assert family_generate("mignotte", 3, 4, 0) == P([-2, 8, -8, 1])
        assert family_generate("wilkinson", 2, 2, 0) == P([2, -3, 1])
        assert family_generate("chebyshev", 2, 2, 0) == P([-1, 0, 2])

    def test_chebyshev_recurrence(self):
        assert family_generate("chebyshev", 5, 2) == P([0, 5, 0, -20, 0, 16])

    def test_random_is_seeded(self):
        a = family_generate("random", 9, 12, 41)
        assert a == family_generate("random", 9, 12, 41)
        assert a.degree == 9
        assert max(abs(c) for c in a.coeffs) <= 2**12 - 1

    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv("SQFE_SEED", "5")
        a = family_generate("random", 6, 8)
        assert a == family_generate("random", 6, 8, 5)

    @pytest.mark.parametrize(
        "args",
        [("mignotte", 4, 5), ("mignotte", 4, 2), ("wilkinson", 1, 4), ("random", 4, 1), ("bogus", 4, 4)],
    )
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            family_generate(*args, 0)


def test_wilkinson_record():
    (r,) = run_benchmark([("wilkinson", 5, 8)])
    assert r.ok()
    f = family_generate("wilkinson", 5, 8)
    assert sturm_count(f, benchmark_interval(f)) == 5
    assert r.partition_size == r.bisections + 1
    assert r.partition_size <= 1.01 * r.integral_bound


def test_grid_ordering_and_determinism():
    grid = [("random", 6, 8), ("chebyshev", 4, 8), ("mignotte", 4, 8), ("chebyshev", 3, 8)]
    a = run_benchmark(grid, seed=3)
    assert [(r.family, r.degree_d, r.bits_L) for r in a] == sorted((f, d, L) for f, d, L in grid)
    b = run_benchmark(list(reversed(grid)), seed=3, jobs=2)
    assert [r.without_time() for r in a] == [r.without_time() for r in b]


def test_mignotte_grid_within_constant_bound():
    records = run_benchmark(make_grid(["mignotte"], range(4, 17, 4), [8, 16, 32]))
    for r in records:
        assert r.partition_size <= r.paper_constant_bound
        assert r.partition_size <= math.ceil(1.01 * r.integral_bound)


def test_failed_record_keeps_run_going():
    (r,) = run_benchmark([("mignotte", 4, 5)])
    assert r.partition_size == -1 and math.isnan(r.integral_bound)


def test_round_trips():
    records = run_benchmark([("chebyshev", 4, 8), ("random", 5, 6)])
    records.append(BenchmarkRecord("mignotte", 4, 5, -1, -1, math.nan, math.nan, 10.5, math.nan))
    back_csv = records_from_csv(records_to_csv(records))
    back_json = records_from_json(records_to_json(records))
    for back in (back_csv, back_json):
        for a, b in zip(records, back):
            for x, y in zip(a.without_time() + (a.wall_time_ms,), b.without_time() + (b.wall_time_ms,)):
                assert x == y or (isinstance(x, float) and math.isnan(x) and math.isnan(y))
    header = records_to_csv(records).splitlines()[0]
    assert header == "family,degree_d,bits_L,partition_size,bisections,integral_bound,closed_form_bound,paper_constant_bound,wall_time_ms"


def test_plot_and_summary():
    records = run_benchmark([("wilkinson", 4, 8), ("wilkinson", 6, 8)])
    lines = plot_text(records).splitlines()
    assert len(lines) == 3 and all(len(l.split()) == 2 for l in lines[1:])
    ratio = scaling_summary(records)["wilkinson"]
    assert ratio == max(r.partition_size / (r.degree_d * (r.bits_L + math.log(r.degree_d))) for r in records)


def test_slack():
    assert constant_slack(4) == 32


class TestCli:
    def test_isolate_two_roots(self, capsys):
        assert main(["isolate", "-2,0,1"]) == 0
        out = capsys.readouterr().out
        assert "2 real roots" in out and out.count("interval") == 2

    def test_isolate_no_roots(self, capsys):
        assert main(["isolate", "1,0,1"]) == 0
        assert "0 real roots" in capsys.readouterr().out

    def test_isolate_json_interval(self, capsys):
        assert main(["isolate", "-2,0,1", "--interval", "0", "4", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["isolating_intervals"] == [["1", "1*2^1"]]

    def test_isolate_file(self, tmp_path, capsys):
        path = tmp_path / "p.txt"
        path.write_text("# two polynomials\n-2,0,1\n0,-1,0,1\n")
        assert main(["isolate", str(path)]) == 0
        out = capsys.readouterr().out
        assert "2 real roots" in out and "3 real roots" in out

    @pytest.mark.parametrize(
        "argv", [["isolate", "1,x"], ["isolate", "5"], ["isolate", "0,1", "--interval", "1", "0"], ["frobnicate"], []]
    )
    def test_invalid_input(self, argv, capsys):
        assert main(argv) == 1

    def test_bound(self, capsys):
        assert main(["bound", "-2,0,1", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["integral_2_over_G"] <= data["closed_form_sum"]

    def test_verify(self, capsys):
        assert main(["verify", "--random", "15", "--seed", "1"]) == 0
        assert main(["verify", "2,-3,0,1"]) == 0
        assert main(["verify"]) == 1

    def test_bench(self, tmp_path, capsys):
        out = tmp_path / "bench"
        assert main(["bench", "--families", "mignotte,chebyshev", "--dmax", "6", "--dstep", "2", "--L", "8", "--out", str(out)]) == 0
        records = records_from_csv((out / "records.csv").read_text())
        assert records_from_json((out / "records.json").read_text())[0].family == "chebyshev"
        assert len(records) == 4
        assert "max #P/(d(L+ln d))" in capsys.readouterr().out

    def test_bench_unknown_family(self, tmp_path):
        assert main(["bench", "--families", "legendre", "--out", str(tmp_path)]) == 1

    def test_oracle_failure_exit_code(self, monkeypatch, capsys):
        from sqfreeeval import cli
        from sqfreeeval.oracle import ConvergenceError

        def boom(f):
            raise ConvergenceError("no convergence")

        monkeypatch.setattr(cli, "bound_report", boom)
        assert main(["bound", "-2,0,1"]) == 3

    def test_invariant_exit_code(self, monkeypatch, capsys):
        from sqfreeeval import cli

        monkeypatch.setattr(cli, "verify_polynomial", lambda f: ["broken"])
        assert main(["verify", "-2,0,1"]) == 2
