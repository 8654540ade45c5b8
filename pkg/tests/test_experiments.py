import math
from pathlib import Path

import numpy as np
import pytest

from fballoc import SystemParams, asymptotic_minmax, avg_interference, distortion
from fballoc.experiments import (
    COLUMNS,
    FIGURES,
    SCHEMA_HEADER,
    Scenario,
    ScenarioError,
    bundled_scenarios,
    parse_scenario,
    read_csv,
    run,
    run_figure1,
    run_figure2,
    run_figure3,
    run_figure4,
    run_scenario,
)

GOLDEN = Path(__file__).parent / "golden"


def floats(cell):
    return [float(x) for x in cell.split(";")]


def assert_rows_recompute(csv_text):
    for rec in read_csv(csv_text):
        p = SystemParams(int(rec["num_antennas"]), floats(rec["gains"]), float(rec["tx_power"]))
        bits = floats(rec["bits"])
        interf = max(avg_interference(p.tx_power, g, distortion(b, p.num_antennas)) for g, b in zip(p.avg_gains, bits))
        assert float(rec["max_interference"]) == interf


@pytest.mark.parametrize("fig", sorted(FIGURES))
def test_figures_pass_their_checks(fig):
    res = FIGURES[fig]()
    failed = [c.name for c in res.checks if not c.passed]
    assert not failed, failed
    assert_rows_recompute(res.to_csv())


def test_figure1_zero_budget_rows():
    res = run_figure1(antennas=(4,))
    zero = [r for r in res.rows if r.sweep_value == 0]
    assert len(zero) == 4
    assert all(r.max_interference == 75.0 for r in zero)


def test_figure2_curves_ordered():
    res = run_figure2()
    by_g2 = {}
    for r in res.rows:
        if not r.rounded:
            by_g2.setdefault(r.params.avg_gains[1], []).append(r.max_interference)
    assert np.all(np.array(by_g2[90.0]) >= np.array(by_g2[10.0]))
    asym = {g2: asymptotic_minmax(SystemParams(4, [100, g2, 1]), 40) for g2 in by_g2}
    assert asym[90.0] > asym[50.0] > asym[10.0]
    # geometric means 20.8, 17.1, 10
    assert asym[10.0] == pytest.approx(0.75 * 10 * 2 ** (-40 / 9), rel=1e-12)


def test_figure3_gap_vanishes():
    res = run_figure3()
    for r in res.rows:
        if np.all(r.bits > 0):
            assert abs(r.max_interference - r.asymptotic) <= 1e-6 * r.asymptotic
    # with a weak PU still at zero bits the exact curve sits above the law
    small = [r for r in res.rows if r.sweep_value == 8]
    assert all(r.max_interference > r.asymptotic for r in small)


def test_figure4_totals():
    res = run_figure4(antennas=(4,), second_gains=(10.0,))
    rows = [r for r in res.rows if r.rounded]
    top = [r for r in rows if r.sweep_value >= 75]
    assert top and all(r.total_bits == 0 for r in top)
    for r in rows:
        assert np.all([avg_interference(1, g, distortion(b, 4)) <= r.sweep_value * (1 + 1e-12) for g, b in zip(r.params.avg_gains, r.bits)])


def test_csv_schema():
    text = run_figure1(antennas=(4,), budgets=(0, 2)).to_csv()
    lines = text.splitlines()
    assert lines[0] == SCHEMA_HEADER
    assert lines[1].split(",") == COLUMNS
    with pytest.raises(ValueError):
        read_csv("\n".join(lines[1:]))


def test_bundled_scenarios_present():
    assert {"figure1", "figure3", "figure4", "smoke_mc"} <= set(bundled_scenarios())


def test_golden_threshold_scenario():
    text = run_scenario(bundled_scenarios()["figure4"]).to_csv()
    assert text == (GOLDEN / "figure4.csv").read_text(encoding="utf-8")
    # independent check of the rounded rows: ceil of the closed-form requirement
    for rec in read_csv(text):
        if rec["rounded"] != "1":
            continue
        thr = float(rec["sweep_value"])
        expected = [max(0, math.ceil(3 * (math.log2(g) - math.log2(4 * thr / 3)) - 1e-9)) for g in (100, 10, 1)]
        assert floats(rec["bits"]) == expected


def test_smoke_monte_carlo_overlay():
    res = run_scenario(bundled_scenarios()["smoke_mc"])
    assert res.ok, res.summary()
    for r in res.rows:
        assert abs(r.max_interference_measured - r.max_interference_rvq) <= 3 * r.measured_std_error


def test_scenario_reproducible():
    path = bundled_scenarios()["smoke_mc"]
    assert run_scenario(path).to_csv() == run_scenario(path).to_csv()


def test_gain_sweep():
    scn = parse_scenario(
        """
name: gains
params: {num_antennas: 4, avg_gains: [100, 10, 1]}
sweep:
  gains: [[100, 10, 1], [100, 50, 1], [100, 90, 1]]
  budget: 20
solvers: [exact, brute]
"""
    )
    res = run(scn)
    exact = [r.max_interference for r in res.rows if r.solver.value == "ExactMinMax" and not r.rounded]
    assert exact == sorted(exact)
    brute = [r for r in res.rows if r.solver.value == "BruteForce"]
    assert len(brute) == 3 and all(r.total_bits <= 20 for r in brute)


def test_range_expansion():
    scn = parse_scenario("params: {num_antennas: 4, avg_gains: [1]}\nsweep: {budget: {start: 0, stop: 10, step: 5}}\n")
    assert scn.sweep_values == [0, 5, 10]


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("params: {num_antennas: 4, avg_gains: [1]}\nsweep: {budget: []}\n", "nonempty"),
        ("params: {num_antennas: 4, avg_gains: [1]}\nsweep: {budget: [1]}\nsolvers: []\n", "solver set"),
        ("params: {num_antennas: 4, avg_gains: [1]}\nsweep: {budget: [1]}\nsolvers: [magic]\n", "unknown solver"),
        ("params: {num_antennas: 4}\nsweep: {budget: [1]}\n", "avg_gains"),
        ("params: {num_antennas: 1, avg_gains: [1]}\nsweep: {budget: [1]}\n", "num_antennas"),
        ("params: {num_antennas: 4, avg_gains: [1]}\nsweep: {budget: [1], threshold: [1]}\n", "exactly one"),
        ("params: {num_antennas: 4, avg_gains: [1]}\nsweep: {budget: [1.5]}\n", "integer budgets"),
        ("params: {num_antennas: 4, avg_gains: [1]}\nsweep: {threshold: [0]}\n", "> 0"),
        ("params: {num_antennas: 2, avg_gains: [1, 1]}\nsweep: {budget: [1]}\nmonte_carlo: {trials: 5, seed: 1}\n", "K + 1"),
        ("params: {num_antennas: 4, avg_gains: [1]}\nsweep: {budget: [1]}\nbogus: 1\n", "unknown top-level"),
        ("params: [unclosed\n", "line 2"),
    ],
)
def test_scenario_validation(text, fragment):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(text)
    assert fragment in str(err.value)


def test_scenario_rejects_threshold_solver_mix():
    with pytest.raises(ScenarioError):
        Scenario("x", SystemParams(4, [1]), "threshold", [1.0], ("exact",))
