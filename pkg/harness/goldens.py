"""
Goldens — recompute every displayed table and compare it with harness/golden/*.json.

Values are compared as exact strings: a file entry must equal the computed
value printed in the canonical "p/q" or "p/q + c/d*sqrt(2)" form.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from loguru import logger

from core.exact_ring import ZERO, Mat2, Qr2, pqrs_decompose
from core.measures import (
    classical_arcsine,
    compare_central_terms,
    sojourn_measure_A,
    sojourn_measure_B,
)
from core.theorems import PQRS, theorem1_series, theorem2_series
from core.walk_paths import sojourn_table
from shared.serialize import exact
from shared.types import CheckReport, Mismatch

GOLDEN_DIR = Path(__file__).parent / "golden"

GOLDEN_FILES = ("operators", "theorem1_display", "theorem2_display", "measures")


def load_golden(name: str) -> dict[str, Any]:
    path = GOLDEN_DIR / f"{name}.json"
    if not path.exists():
        raise FileNotFoundError(f"Golden file not found: {path}")
    with open(path) as f:
        return json.load(f)


def _cells(matrix: Mat2) -> list[list[str]]:
    return [[exact(x) for x in row] for row in matrix.rows()]


def _check(report: CheckReport, relation: str, expected, actual, n=None, k=None, detail="") -> None:
    ok = expected == actual
    report.record(ok, None if ok else Mismatch(relation, n, k, expected, actual, detail))


def check_operators() -> CheckReport:
    report = CheckReport(name="golden-operators")
    for case in load_golden("operators")["cases"]:
        kind, n = case["kind"], case["n"]
        label = case["label"]
        if kind == "gamma":
            actual = sojourn_table(0, n).operator(n, 0, case["k"])
            _check(report, label, case["matrix"], _cells(actual), n, case["k"])
        elif kind == "psi":
            actual = sojourn_table(case["start"], n).psi(n, case["k"])
            _check(report, label, case["matrix"], _cells(actual), n, case["k"])
        elif kind == "psi_pqrs":
            coeffs = pqrs_decompose(sojourn_table(case["start"], n).psi(n, case["k"]))
            for u in PQRS:
                _check(report, f"{label} [{u}]", case["pqrs"][u], exact(coeffs[u]), n, case["k"])
        elif kind == "propagator":
            actual = sojourn_table(case["start"], n).propagator(n, case["y"])
            _check(report, label, case["matrix"], _cells(actual), n)
        else:
            raise ValueError(f"Unknown golden operator kind: {kind}")
    return report


def check_theorem1_display() -> CheckReport:
    golden = load_golden("theorem1_display")
    closed = theorem1_series(golden["order"])
    report = CheckReport(name="golden-psi0-expansion")
    for u, blocks in golden["series"].items():
        series = closed.component(u)
        for z_power, values in blocks.items():
            n = int(z_power)
            for k in range(0, n + 1, 2):
                index = k // 2
                expected = values[index] if index < len(values) else exact(ZERO)
                _check(report, f"{u}-bar display", expected, exact(series.coefficient(n, k)), n, k)
    return report


def check_theorem2_display() -> CheckReport:
    golden = load_golden("theorem2_display")
    closed = theorem2_series(golden["order"])
    report = CheckReport(name="golden-gamma-expansion")
    for z_power, blocks in golden["blocks"].items():
        n = int(z_power)
        for k in range(0, n + 1, 2):
            index = k // 2
            expected = blocks[index] if index < len(blocks) else _cells(Mat2.zero())
            _check(report, "Gamma-bar display", expected, _cells(closed.coefficient(n, k)), n, k)
    return report


def _check_values(report: CheckReport, relation: str, n: int,
                  expected: dict[str, str], actual: dict[int, Qr2]) -> None:
    for key, text in expected.items():
        k = int(key)
        _check(report, relation, text, exact(actual.get(k, ZERO)), n, k)


def check_measures() -> CheckReport:
    golden = load_golden("measures")
    report = CheckReport(name="golden-measures")
    for entry in golden["A_weights"]:
        _check_values(report, "Q(A)", entry["n"], entry["values"], sojourn_measure_A(entry["n"]).weights)
    for entry in golden["A_normalized"]:
        _check_values(report, "P(A)", entry["n"], entry["values"], sojourn_measure_A(entry["n"]).normalized)
    for entry in golden["B_weights"]:
        _check_values(report, "Q(B)", entry["n"], entry["values"], sojourn_measure_B(entry["n"]).weights)
    for entry in golden["B_normalized"]:
        _check_values(report, "P(B)", entry["n"], entry["values"], sojourn_measure_B(entry["n"]).normalized)
    for entry in golden["classical_arcsine"]:
        _check_values(report, "arc-sine", entry["n"], entry["values"], classical_arcsine(entry["n"]).weights)
    for entry in golden["central_terms"]:
        comparison = compare_central_terms(entry["n"])
        _check_values(report, "central term (quantum)", entry["n"], entry["quantum"], comparison.quantum)
        _check_values(report, "central term (classical)", entry["n"], entry["classical"], comparison.classical)
        _check(report, "quantum central term smaller", True, comparison.quantum_smaller, entry["n"])
    return report


def check_all_goldens() -> list[CheckReport]:
    reports = [check_operators(), check_theorem1_display(), check_theorem2_display(), check_measures()]
    for report in reports:
        logger.debug(f"Golden {report.name}: {report.checked} values, {len(report.mismatches)} mismatches")
    return reports
