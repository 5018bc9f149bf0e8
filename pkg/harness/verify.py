"""
Verify — the full cross-check suite behind ``sojourn verify``.

Every check returns a CheckReport; the suite passes only when no report
records a mismatch.
"""
from __future__ import annotations

from typing import Callable, Optional

from loguru import logger
from rich.console import Console
from rich.table import Table

from core.exact_ring import (
    HADAMARD,
    ONE,
    ZERO,
    ComplexQr2,
    Mat2,
    Qr2,
    multiplication_table,
    pqrs_basis,
    pqrs_decompose,
)
from core.measures import (
    classical_arcsine,
    classical_equidistribution,
    corollary_uniform_check,
    direct_weight,
    enumerate_classical_bridges,
    enumerate_classical_walks,
    general_weight_A,
    general_weight_B,
    sojourn_measure_A,
    sojourn_measure_B,
    symmetric_state_grid,
    symmetric_weight_A,
    symmetric_weight_B,
)
from core.theorems import (
    check_cor42,
    check_lemma41,
    classical_gf_check,
    corollary_series_check,
    theorem1_division_free_check,
    theorem1_vs_dp,
    theorem2_vs_dp,
    x_matrix_check,
)
from core.walk_paths import (
    PHI_STAR,
    QubitState,
    brute_force_table,
    position_distribution,
    sojourn_table,
)
from harness.goldens import check_all_goldens
from shared.types import CheckReport, Mismatch

BRUTE_FORCE_DEPTH = 10
CLASSICAL_DEPTH = 12
FORMULA_DEPTH = 16
UNIFORM_CASES = 5


def _record(report: CheckReport, relation: str, expected, actual, n=None, k=None, detail="") -> None:
    ok = expected == actual
    report.record(ok, None if ok else Mismatch(relation, n, k, expected, actual, detail))


def multiplication_table_check() -> CheckReport:
    report = CheckReport(name="pqrs-multiplication-table")
    elements = pqrs_basis(HADAMARD).elements()
    for (left, right), expected in multiplication_table(HADAMARD).items():
        _record(report, f"{left}{right}", expected, elements[left] @ elements[right])
    _record(report, "orthonormal basis", True, pqrs_basis(HADAMARD).is_orthonormal)
    return report


def dp_vs_brute_force(depth: int = BRUTE_FORCE_DEPTH) -> CheckReport:
    """DP path sums against explicit enumeration of all 2^n step sequences."""
    report = CheckReport(name="dp-vs-enumeration", metadata={"depth": depth})
    for start in (-1, 0, 1):
        table = sojourn_table(start, depth)
        for n in range(depth + 1):
            enumerated = brute_force_table(start, n)
            for y in table.positions(n):
                for k in range(n + 1):
                    _record(report, f"M^{start}->{y}", enumerated.get((y, k), Mat2.zero()),
                            table.operator(n, y, k), n, k)
    return report


def unitarity_check(depth: int) -> CheckReport:
    """Position probabilities sum to 1 for every tested unit state, and are
    symmetric for the initial state [1, i]/sqrt(2)."""
    report = CheckReport(name="unitarity-and-symmetry", metadata={"depth": depth})
    for n in range(depth + 1):
        distribution = position_distribution(n)
        _record(report, "total probability", ONE, sum(distribution.values(), ZERO), n)
        for x, p in distribution.items():
            _record(report, f"P(X = {x}) = P(X = {-x})", p, distribution.get(-x, ZERO), n)
        for phi in _asymmetric_states():
            total = sum(position_distribution(n, phi).values(), ZERO)
            _record(report, "total probability", ONE, total, n, detail=str(phi))
    return report


def _asymmetric_states() -> list[QubitState]:
    return [
        QubitState.from_parts(1, 0, 0, 0),
        QubitState.from_parts(0, 0, 0, 1),
        QubitState.from_parts("3/5", 0, 0, "4/5"),
        QubitState(ComplexQr2(Qr2(0, "1/2"), ZERO), ComplexQr2(Qr2(0, "1/2"), ZERO)),
    ]


def weight_formula_check(depth: int = FORMULA_DEPTH) -> CheckReport:
    """General weight formulas against the direct norm, and against the
    symmetric formulas whenever the state is symmetric."""
    report = CheckReport(name="weight-formulas", metadata={"depth": depth})
    table = sojourn_table(0, depth)
    symmetric = symmetric_state_grid()
    for n in range(2, depth + 1, 2):
        for k in range(n + 1):
            psi = table.psi(n, k)
            gamma = table.operator(n, 0, k)
            coeffs = pqrs_decompose(psi)
            for phi in symmetric:
                general_a = general_weight_A(coeffs, phi)
                general_b = general_weight_B(gamma, phi)
                _record(report, "A general vs symmetric", symmetric_weight_A(coeffs), general_a, n, k)
                _record(report, "B general vs symmetric", symmetric_weight_B(gamma), general_b, n, k)
                _record(report, "A general vs direct", direct_weight(psi, phi), general_a, n, k)
            for phi in _asymmetric_states():
                _record(report, "A general vs direct", direct_weight(psi, phi), general_weight_A(coeffs, phi), n, k)
                _record(report, "B general vs direct", direct_weight(gamma, phi), general_weight_B(gamma, phi), n, k)
    return report


def classical_check(depth: int = CLASSICAL_DEPTH) -> CheckReport:
    """Arc-sine and equidistribution laws against brute-force classical paths."""
    report = CheckReport(name="classical-baselines", metadata={"depth": depth})
    for n in range(2, depth + 1, 2):
        arcsine = classical_arcsine(n).weights
        walks = enumerate_classical_walks(n).weights
        uniform = classical_equidistribution(n).weights
        bridges = enumerate_classical_bridges(n).weights
        for k in range(n + 1):
            _record(report, "arc-sine vs enumeration", arcsine.get(k, ZERO), walks.get(k, ZERO), n, k)
            _record(report, "equidistribution vs enumeration", uniform.get(k, ZERO), bridges.get(k, ZERO), n, k)
        _record(report, "arc-sine extremes dominate", True,
                arcsine[n] == arcsine[0] and not any(arcsine[0] < w for w in arcsine.values()), n)
    return report


def measure_symmetry_check(depth: int) -> CheckReport:
    """A- and B-weights at k and n - k agree for [1, i]/sqrt(2)."""
    report = CheckReport(name="measure-symmetry", metadata={"depth": depth})
    for n in range(2, depth + 1, 2):
        for measure in (sojourn_measure_A(n, PHI_STAR), sojourn_measure_B(n, PHI_STAR)):
            _record(report, f"{measure.kind.value}-measure symmetric", True, measure.is_symmetric, n)
            odd = [k for k in measure.weights if k % 2]
            _record(report, f"{measure.kind.value}-measure odd support", [], odd, n)
    return report


def run_verification(order: int = 12, x_min: int = -5, x_max: int = 5) -> list[CheckReport]:
    """Run every check; order bounds the series and DP depths."""
    steps: list[tuple[str, Callable[[], CheckReport | list[CheckReport]]]] = [
        ("goldens", check_all_goldens),
        ("psi0 closed form vs DP", lambda: theorem1_vs_dp(order)),
        ("psi0 division-free", lambda: theorem1_division_free_check(order)),
        ("gamma three-way", lambda: theorem2_vs_dp(order)),
        ("excursion matrix", lambda: x_matrix_check(order)),
        ("first-step relations", lambda: check_lemma41(x_min, x_max, order)),
        ("three-term recurrences", lambda: check_cor42(x_min, x_max, order)),
        ("gamma 4n sub-series", lambda: corollary_series_check(order)),
        ("classical GF", lambda: classical_gf_check(10)),
        ("multiplication table", multiplication_table_check),
        ("DP vs enumeration", lambda: dp_vs_brute_force(min(BRUTE_FORCE_DEPTH, order))),
        ("unitarity", lambda: unitarity_check(order)),
        ("weight formulas", lambda: weight_formula_check(min(FORMULA_DEPTH, order))),
        ("measure symmetry", lambda: measure_symmetry_check(order)),
        ("classical baselines", lambda: classical_check(CLASSICAL_DEPTH)),
        ("bridge uniform at 4n", lambda: _merge(
            "bridge-uniform-at-4n", [corollary_uniform_check(n) for n in range(1, UNIFORM_CASES + 1)])),
    ]
    reports: list[CheckReport] = []
    for label, step in steps:
        logger.info(f"Verifying: {label}")
        result = step()
        reports.extend(result if isinstance(result, list) else [result])
    failed = [r.name for r in reports if not r.passed]
    logger.info(f"Verification finished | {len(reports)} checks, {len(failed)} failed")
    return reports


def _merge(name: str, reports: list[CheckReport]) -> CheckReport:
    merged = CheckReport(name=name)
    for report in reports:
        merged.extend(report)
    return merged


def first_failure(reports: list[CheckReport]) -> Optional[tuple[CheckReport, Mismatch]]:
    for report in reports:
        if report.first_mismatch is not None:
            return report, report.first_mismatch
    return None


def render_summary(reports: list[CheckReport], console: Optional[Console] = None) -> None:
    """Human-readable table on stderr."""
    console = console or Console(stderr=True)
    table = Table(title="Verification summary")
    table.add_column("Check")
    table.add_column("Compared", justify="right")
    table.add_column("Mismatches", justify="right")
    table.add_column("Status")
    for report in reports:
        status = "[green]PASS[/green]" if report.passed else "[red]FAIL[/red]"
        table.add_row(report.name, str(report.checked), str(len(report.mismatches)), status)
    console.print(table)
