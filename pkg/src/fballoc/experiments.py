"""Scenario runner producing CSV sweeps and property checks.

A scenario fixes a :class:`~fballoc.model.SystemParams`, sweeps one quantity
(total budget, interference threshold or the gain vector), runs a set of
solvers at every point and optionally overlays a Monte Carlo measurement.
The ``figure*`` functions are canned scenarios with their own checks.

Scenario files are YAML::

    name: smoke
    params:
      num_antennas: 4
      tx_power: 1.0
      avg_gains: [100, 10, 1]
    sweep:
      budget: {start: 0, stop: 40, step: 2}   # or a list of values
    solvers: [exact, lnorm]
    l_exponent: 100
    rounding: [false, true]
    monte_carlo: {trials: 2000, seed: 7}

``sweep`` holds exactly one of ``budget``, ``threshold`` or ``gains``; a
``gains`` sweep also needs ``sweep.budget`` as a single number.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from .allocator import (
    allocate_lnorm,
    allocate_minmax_exact,
    brute_force_minmax,
    min_bits_for_threshold,
    round_allocation,
)
from .model import (
    AllocationReport,
    BitAllocation,
    SolverConfig,
    SolverTag,
    SystemParams,
    asymptotic_minmax,
    per_pu_interference,
)
from .simulator import measure_interference, rvq_interference

SCHEMA_VERSION = 1
SCHEMA_HEADER = f"# fballoc-sweep v{SCHEMA_VERSION}"
COLUMNS = [
    "scenario",
    "num_antennas",
    "tx_power",
    "gains",
    "sweep",
    "sweep_value",
    "solver",
    "rounded",
    "bits",
    "total_bits",
    "max_interference",
    "asymptotic",
    "max_interference_rvq",
    "max_interference_measured",
    "measured_std_error",
]

SOLVER_NAMES = {
    "exact": SolverTag.EXACT_MINMAX,
    "lnorm": SolverTag.LNORM_WATERFILL,
    "brute": SolverTag.BRUTE_FORCE,
    "threshold": SolverTag.THRESHOLD_MIN,
}
SWEEP_KINDS = ("budget", "threshold", "gains")

DEFAULT_BUDGET_GRID = tuple(range(0, 41, 2))
FIG_GAINS = (100.0, 10.0, 1.0)
FIG2_SECOND_GAINS = (90.0, 50.0, 10.0)
FIG3_BUDGET_GRID = tuple(range(0, 121, 4))
FIG4_THRESHOLDS = tuple(float(x) for x in np.round(10.0 ** np.linspace(-3, 2, 21), 12))
SURROGATE_RTOL = 0.02
ASYMPTOTE_RTOL = 1e-6
MC_SIGMAS = 3.0


class ScenarioError(ValueError):
    """Raised for unparsable or invalid scenario files."""


@dataclass(frozen=True)
class MonteCarloSpec:
    trials: int
    seed: int


@dataclass
class Scenario:
    name: str
    params: SystemParams
    sweep_kind: str
    sweep_values: list
    solvers: Tuple[str, ...]
    l_exponent: int = 100
    rounding: Tuple[bool, ...] = (False, True)
    budget: Optional[float] = None
    monte_carlo: Optional[MonteCarloSpec] = None

    def __post_init__(self):
        if self.sweep_kind not in SWEEP_KINDS:
            raise ScenarioError(f"sweep: kind must be one of {SWEEP_KINDS}, got {self.sweep_kind!r}")
        if not self.sweep_values:
            raise ScenarioError("sweep: sweep must be nonempty")
        if not self.solvers:
            raise ScenarioError("solvers: solver set must be nonempty")
        unknown = [s for s in self.solvers if s not in SOLVER_NAMES]
        if unknown:
            raise ScenarioError(f"solvers: unknown solver(s) {unknown}; known: {sorted(SOLVER_NAMES)}")
        if not self.rounding:
            raise ScenarioError("rounding: at least one of false/true required")
        if self.sweep_kind == "threshold":
            if set(self.solvers) != {"threshold"}:
                raise ScenarioError("solvers: a threshold sweep only supports the 'threshold' solver")
            if any(not v > 0 for v in self.sweep_values):
                raise ScenarioError("sweep.threshold: thresholds must be > 0")
        else:
            if "threshold" in self.solvers:
                raise ScenarioError("solvers: 'threshold' needs a threshold sweep")
            budgets = self.sweep_values if self.sweep_kind == "budget" else [self.budget]
            if self.sweep_kind == "gains":
                if self.budget is None:
                    raise ScenarioError("sweep.budget: a gains sweep needs a fixed budget")
                for g in self.sweep_values:
                    if len(g) != self.params.num_pus:
                        raise ScenarioError(f"sweep.gains: gain vector {g} does not have K={self.params.num_pus} entries")
            if any(b < 0 for b in budgets):
                raise ScenarioError("sweep.budget: budgets must be >= 0")
            needs_int = "brute" in self.solvers or True in self.rounding
            if needs_int and any(float(b) != int(b) for b in budgets):
                raise ScenarioError("sweep.budget: rounding and brute force need integer budgets")
        if self.monte_carlo is not None and self.params.num_antennas < self.params.num_pus + 1:
            raise ScenarioError("monte_carlo: zero-forcing needs num_antennas >= K + 1")

    def points(self):
        """Yields ``(sweep_value, params, budget_or_threshold)``."""
        for v in self.sweep_values:
            if self.sweep_kind == "gains":
                yield v, self.params.with_gains(v), self.budget
            else:
                yield v, self.params, v


@dataclass
class SweepRow:
    scenario: str
    params: SystemParams
    sweep: str
    sweep_value: object
    solver: SolverTag
    rounded: bool
    bits: np.ndarray
    max_interference: float
    asymptotic: Optional[float] = None
    max_interference_rvq: Optional[float] = None
    max_interference_measured: Optional[float] = None
    measured_std_error: Optional[float] = None

    @property
    def total_bits(self) -> float:
        return float(np.sum(self.bits))

    def as_record(self) -> Dict[str, str]:
        return {
            "scenario": self.scenario,
            "num_antennas": str(self.params.num_antennas),
            "tx_power": _fmt(self.params.tx_power),
            "gains": _fmt_vec(self.params.avg_gains),
            "sweep": self.sweep,
            "sweep_value": _fmt_vec(self.sweep_value) if np.ndim(self.sweep_value) else _fmt(self.sweep_value),
            "solver": self.solver.value,
            "rounded": "1" if self.rounded else "0",
            "bits": _fmt_vec(self.bits),
            "total_bits": _fmt(self.total_bits),
            "max_interference": _fmt(self.max_interference),
            "asymptotic": _fmt(self.asymptotic),
            "max_interference_rvq": _fmt(self.max_interference_rvq),
            "max_interference_measured": _fmt(self.max_interference_measured),
            "measured_std_error": _fmt(self.measured_std_error),
        }


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class RunResult:
    name: str
    rows: List[SweepRow]
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def select(self, **match) -> List[SweepRow]:
        return [r for r in self.rows if all(getattr(r, k) == v for k, v in match.items())]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(SCHEMA_HEADER + "\n")
        writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row.as_record())
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    def summary(self) -> str:
        lines = [f"{self.name}: {len(self.rows)} rows, {sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed"]
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}" + (f" -- {c.detail}" if c.detail else ""))
        return "\n".join(lines)


def _fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 2**53 else repr(x)


def _fmt_vec(v) -> str:
    return ";".join(_fmt(x) for x in np.atleast_1d(v))


def read_csv(text: str) -> List[Dict[str, str]]:
    """Parse CSV produced by :meth:`RunResult.to_csv`."""
    lines = text.splitlines()
    if not lines or lines[0] != SCHEMA_HEADER:
        raise ValueError(f"missing schema header {SCHEMA_HEADER!r}")
    return list(csv.DictReader(lines[1:]))


# -- running -----------------------------------------------------------------


def _solve(solver: str, params: SystemParams, budget, cfg: SolverConfig) -> AllocationReport:
    if solver == "exact":
        return allocate_minmax_exact(params, budget, cfg)
    if solver == "lnorm":
        return allocate_lnorm(params, budget, cfg)
    if solver == "brute":
        return brute_force_minmax(params, int(budget))
    return min_bits_for_threshold(params, budget)


def _row(scn, value, params, solver, rounded, bits, asymptote=None) -> SweepRow:
    bits = np.asarray(bits, dtype=float)
    row = SweepRow(
        scenario=scn.name,
        params=params,
        sweep=scn.sweep_kind,
        sweep_value=value,
        solver=SOLVER_NAMES[solver],
        rounded=rounded,
        bits=bits,
        max_interference=float(per_pu_interference(params, bits).max()),
        asymptotic=asymptote,
    )
    if rounded and params.num_antennas >= params.num_pus + 1:
        rvq = rvq_interference(params, bits)
        row.max_interference_rvq = float(rvq.max())
    if rounded and scn.monte_carlo is not None:
        mc = measure_interference(
            params, BitAllocation(bits, float(bits.sum())), scn.monte_carlo.trials, scn.monte_carlo.seed
        )
        # measured value of the PU predicted to be worst, so both columns refer to one PU
        worst = int(np.argmax(rvq))
        row.max_interference_measured = float(mc.mean_interference[worst])
        row.measured_std_error = float(mc.std_error[worst])
    return row


def run(scn: Scenario) -> RunResult:
    """Evaluate every sweep point and solver; attaches generic checks."""
    cfg = SolverConfig(l_exponent=scn.l_exponent)
    rows: List[SweepRow] = []
    for value, params, target in scn.points():
        asymptote = asymptotic_minmax(params, target) if scn.sweep_kind != "threshold" else None
        for solver in scn.solvers:
            report = _solve(solver, params, target, cfg)
            if solver == "brute":
                rows.append(_row(scn, value, params, solver, True, report.bits, asymptote))
                continue
            if solver == "threshold":
                if False in scn.rounding:
                    rows.append(_row(scn, value, params, solver, False, report.unrounded_bits))
                if True in scn.rounding:
                    rows.append(_row(scn, value, params, solver, True, report.bits))
                continue
            if False in scn.rounding:
                rows.append(_row(scn, value, params, solver, False, report.bits, asymptote))
            if True in scn.rounding:
                rounded = round_allocation(report.allocation, int(target), params)
                rows.append(_row(scn, value, params, solver, True, rounded.bits, asymptote))
    result = RunResult(scn.name, rows)
    _generic_checks(scn, result)
    return result


def _series(result: RunResult, **match) -> np.ndarray:
    return np.array([r.max_interference for r in result.select(**match)])


def _generic_checks(scn: Scenario, result: RunResult) -> None:
    result.check(
        "rows self-consistent with the interference model",
        all(r.max_interference == float(per_pu_interference(r.params, r.bits).max()) for r in result.rows),
    )
    if scn.sweep_kind == "budget":
        for solver in scn.solvers:
            for rounded in scn.rounding if solver != "brute" else (True,):
                ys = _series(result, solver=SOLVER_NAMES[solver], rounded=rounded)
                result.check(
                    f"{solver}{' rounded' if rounded else ''}: max interference non-increasing in budget",
                    np.all(np.diff(ys) <= 1e-12 * ys[:-1]),
                )
        if {"exact", "lnorm"} <= set(scn.solvers) and False in scn.rounding:
            ex = _series(result, solver=SolverTag.EXACT_MINMAX, rounded=False)
            ln = _series(result, solver=SolverTag.LNORM_WATERFILL, rounded=False)
            gap = float(np.max(np.abs(ln - ex) / ex))
            result.check(f"lnorm within {SURROGATE_RTOL:.0%} of exact", gap <= SURROGATE_RTOL, f"max relative gap {gap:.3e}")
    if scn.sweep_kind == "threshold":
        rows = result.select(solver=SolverTag.THRESHOLD_MIN, rounded=True)
        feasible = all(
            np.all(per_pu_interference(r.params, r.bits) <= r.sweep_value * (1 + 1e-12)) for r in rows
        )
        minimal = all(
            np.all(
                [
                    per_pu_interference(r.params, r.bits - np.eye(r.bits.size)[k])[k] > r.sweep_value
                    for k in np.flatnonzero(r.bits > 0)
                ]
            )
            for r in rows
        )
        totals = np.array([r.total_bits for r in sorted(rows, key=lambda r: r.sweep_value)])
        result.check("every PU at or below the threshold", feasible)
        result.check("no single bit can be removed", minimal)
        result.check("total bits non-increasing in threshold", np.all(np.diff(totals) <= 0))
    if scn.monte_carlo is not None:
        measured = [r for r in result.rows if r.max_interference_measured is not None]
        z = [abs(r.max_interference_measured - r.max_interference_rvq) / r.measured_std_error for r in measured]
        worst = max(z) if z else 0.0
        result.check(
            f"Monte Carlo within {MC_SIGMAS:g} std errors of the RVQ prediction",
            worst <= MC_SIGMAS,
            f"worst deviation {worst:.2f} std errors",
        )


# -- scenario files ------------------------------------------------------------


def _expand(values, where):
    if isinstance(values, dict):
        try:
            start, stop = values["start"], values["stop"]
            step = values.get("step", 1)
        except KeyError as exc:
            raise ScenarioError(f"{where}: range needs start and stop, missing {exc}") from None
        if step <= 0:
            raise ScenarioError(f"{where}: step must be > 0")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(max(n, 0))]
    if isinstance(values, list):
        return values
    raise ScenarioError(f"{where}: expected a list or a {{start, stop, step}} range")


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ScenarioError(f"parse error: {where}{getattr(exc, 'problem', exc)}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("parse error: top level must be a mapping")
    known = {"name", "params", "sweep", "solvers", "l_exponent", "rounding", "monte_carlo"}
    extra = set(doc) - known
    if extra:
        raise ScenarioError(f"unknown top-level field(s): {sorted(extra)}")
    try:
        p = doc["params"]
        params = SystemParams(
            num_antennas=p["num_antennas"],
            avg_gains=np.asarray(p["avg_gains"], dtype=float),
            tx_power=float(p.get("tx_power", 1.0)),
        )
    except KeyError as exc:
        raise ScenarioError(f"params: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"params: {exc}") from None

    sweep = doc.get("sweep") or {}
    if not isinstance(sweep, dict):
        raise ScenarioError("sweep: expected a mapping")
    kinds = [k for k in SWEEP_KINDS if k in sweep]
    fixed_budget = None
    if "gains" in kinds:
        kinds.remove("gains")
        fixed_budget = sweep.get("budget")
        kinds = ["gains"]
        if fixed_budget is None or isinstance(fixed_budget, (list, dict)):
            raise ScenarioError("sweep.budget: a gains sweep needs a single fixed budget")
    if len(kinds) != 1:
        raise ScenarioError(f"sweep: exactly one of {SWEEP_KINDS} required")
    kind = kinds[0]
    values = _expand(sweep[kind], f"sweep.{kind}")

    mc = doc.get("monte_carlo")
    if mc is not None:
        try:
            mc = MonteCarloSpec(int(mc["trials"]), int(mc["seed"]))
        except (KeyError, TypeError) as exc:
            raise ScenarioError(f"monte_carlo: needs integer trials and seed ({exc})") from None
        if mc.trials < 1:
            raise ScenarioError("monte_carlo.trials: must be >= 1")

    solvers = doc.get("solvers")
    if solvers is None:
        solvers = ["threshold"] if kind == "threshold" else ["exact"]
    rounding = doc.get("rounding", [False, True])
    if isinstance(rounding, bool):
        rounding = [rounding]
    return Scenario(
        name=str(doc.get("name", name)),
        params=params,
        sweep_kind=kind,
        sweep_values=values,
        solvers=tuple(solvers),
        l_exponent=int(doc.get("l_exponent", 100)),
        rounding=tuple(bool(r) for r in rounding),
        budget=fixed_budget,
        monte_carlo=mc,
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from None
    return parse_scenario(text, name=path.stem)


def run_scenario(path) -> RunResult:
    return run(load_scenario(path))


def bundled_scenarios() -> Dict[str, Path]:
    here = Path(__file__).parent / "scenarios"
    return {p.stem: p for p in sorted(here.glob("*.yaml"))}


# -- canned figures --------------------------------------------------------------


def _merge(name: str, parts: Sequence[RunResult]) -> RunResult:
    merged = RunResult(name, [r for p in parts for r in p.rows])
    for p in parts:
        merged.checks.extend(Check(f"{p.name}: {c.name}", c.passed, c.detail) for c in p.checks)
    return merged


def _decay_rate(ys: np.ndarray, budgets: Sequence[float]) -> float:
    """Average log2 decrease of interference per bit over the last half of the grid."""
    i = len(budgets) // 2
    return float((np.log2(ys[i]) - np.log2(ys[-1])) / (budgets[-1] - budgets[i]))


def run_figure1(antennas: Sequence[int] = (4, 8), budgets: Sequence[int] = DEFAULT_BUDGET_GRID) -> RunResult:
    """Optimal vs. L-norm (L=100) min-max interference over the budget grid."""
    parts = []
    for n in antennas:
        scn = Scenario(
            name=f"figure1-N{n}",
            params=SystemParams(n, FIG_GAINS),
            sweep_kind="budget",
            sweep_values=list(budgets),
            solvers=("exact", "lnorm"),
        )
        res = run(scn)
        zero = [r for r in res.rows if r.sweep_value == 0]
        expected = 100.0 * (n - 1) / n
        res.check(f"zero budget gives {expected:g}", all(abs(r.max_interference - expected) <= 1e-12 * expected for r in zero))
        ys = _series(res, solver=SolverTag.EXACT_MINMAX, rounded=False)
        res.check("unrounded exact strictly decreasing in budget", np.all(np.diff(ys) < 0))
        parts.append(res)
    merged = _merge("figure1", parts)
    if len(antennas) > 1:
        rates = {n: _decay_rate(_series(p, solver=SolverTag.EXACT_MINMAX, rounded=False), budgets) for n, p in zip(antennas, parts)}
        order = sorted(antennas)
        merged.check(
            "more antennas decay slower per bit",
            all(rates[a] > rates[b] for a, b in zip(order, order[1:])),
            ", ".join(f"N={n}: {rates[n]:.4f} log2/bit" for n in order),
        )
    return merged


def _gain_family(second: Sequence[float]) -> List[Tuple[float, Tuple[float, ...]]]:
    return [(g2, (FIG_GAINS[0], g2, FIG_GAINS[2])) for g2 in second]


def run_figure2(
    num_antennas: int = 4,
    budgets: Sequence[int] = DEFAULT_BUDGET_GRID,
    second_gains: Sequence[float] = FIG2_SECOND_GAINS,
) -> RunResult:
    """Exact min-max interference for several values of the middle PU's gain."""
    parts = []
    for g2, gains in _gain_family(second_gains):
        scn = Scenario(
            name=f"figure2-g2_{_fmt(g2)}",
            params=SystemParams(num_antennas, gains),
            sweep_kind="budget",
            sweep_values=list(budgets),
            solvers=("exact",),
        )
        parts.append(run(scn))
    merged = _merge("figure2", parts)
    curves = {g2: _series(p, solver=SolverTag.EXACT_MINMAX, rounded=False) for (g2, _), p in zip(_gain_family(second_gains), parts)}
    order = sorted(curves)
    merged.check(
        "larger middle gain never lowers the curve",
        all(np.all(curves[b] >= curves[a] * (1 - 1e-12)) for a, b in zip(order, order[1:])),
    )
    zero_val = 100.0 * (num_antennas - 1) / num_antennas
    merged.check("all curves start at the strongest PU's zero-bit interference", all(abs(c[0] - zero_val) <= 1e-12 * zero_val for c in curves.values()) if budgets[0] == 0 else True)
    asym = {g2: asymptotic_minmax(SystemParams(num_antennas, gains), budgets[-1]) for g2, gains in _gain_family(second_gains)}
    merged.check(
        "asymptote ordering follows the geometric mean of the gains",
        all(asym[b] > asym[a] for a, b in zip(order, order[1:])),
    )
    return merged


def run_figure3(
    num_antennas: int = 4,
    budgets: Sequence[int] = FIG3_BUDGET_GRID,
    second_gains: Sequence[float] = FIG2_SECOND_GAINS,
) -> RunResult:
    """Exact min-max interference against the large-budget law."""
    parts = []
    for g2, gains in _gain_family(second_gains):
        scn = Scenario(
            name=f"figure3-g2_{_fmt(g2)}",
            params=SystemParams(num_antennas, gains),
            sweep_kind="budget",
            sweep_values=list(budgets),
            solvers=("exact",),
            rounding=(False,),
        )
        res = run(scn)
        rows = res.select(solver=SolverTag.EXACT_MINMAX, rounded=False)
        gaps = np.array([abs(r.max_interference - r.asymptotic) / r.asymptotic for r in rows])
        all_active = [i for i, r in enumerate(rows) if np.all(r.bits > 0)]
        if all_active:
            i = all_active[0]
            res.check(
                f"matches the large-budget law once every PU gets bits (B={_fmt(rows[i].sweep_value)})",
                np.all(gaps[all_active] <= ASYMPTOTE_RTOL),
                f"max relative gap {gaps[all_active].max():.2e}",
            )
        else:
            res.check("some budget activates every PU", False, "extend the budget grid")
        res.check("gap to the large-budget law non-increasing", np.all(np.diff(gaps) <= 1e-12))
        parts.append(res)
    return _merge("figure3", parts)


def run_figure4(
    antennas: Sequence[int] = (2, 4, 8),
    thresholds: Sequence[float] = FIG4_THRESHOLDS,
    second_gains: Sequence[float] = FIG2_SECOND_GAINS,
) -> RunResult:
    """Minimum total bits against the interference threshold."""
    parts, totals = [], {}
    for n in antennas:
        for g2, gains in _gain_family(second_gains):
            scn = Scenario(
                name=f"figure4-N{n}-g2_{_fmt(g2)}",
                params=SystemParams(n, gains),
                sweep_kind="threshold",
                sweep_values=list(thresholds),
                solvers=("threshold",),
            )
            res = run(scn)
            rows = res.select(solver=SolverTag.THRESHOLD_MIN, rounded=True)
            totals[n, g2] = np.array([r.total_bits for r in rows])
            parts.append(res)
    merged = _merge("figure4", parts)
    g_order = sorted(second_gains)
    merged.check(
        "total bits non-decreasing in the middle gain",
        all(np.all(totals[n, b] >= totals[n, a]) for n in antennas for a, b in zip(g_order, g_order[1:])),
    )
    # compare antenna counts only where every PU needs bits for every N
    thr = np.asarray(thresholds)
    n_order = sorted(antennas)
    ok = True
    for g2, gains in _gain_family(second_gains):
        active = np.all([thr < min(gains) * (n - 1) / n for n in n_order], axis=0)
        for a, b in zip(n_order, n_order[1:]):
            ok &= bool(np.all(totals[b, g2][active] >= totals[a, g2][active]))
    merged.check("total bits non-decreasing in antennas where every PU needs bits", ok)
    return merged


FIGURES: Dict[int, Callable[[], RunResult]] = {
    1: run_figure1,
    2: run_figure2,
    3: run_figure3,
    4: run_figure4,
}
