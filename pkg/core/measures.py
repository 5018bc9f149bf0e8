"""
Measures — sojourn-time distributions of the Hadamard walk and their classical baselines.

The A-measure weighs every path from the origin, the B-measure only the
bridges back to it. Weights Q(.) are kept unnormalized; ``normalized``
divides by the total mass.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import comb

from loguru import logger

from core.errors import DegenerateMeasureError, ParameterError
from core.exact_ring import ZERO, ComplexQr2, Mat2, PqrsCoeffs, Qr2, pqrs_decompose
from core.walk_paths import PHI_STAR, QubitState, interval_counted, output_weight, sojourn_table
from shared.types import CheckReport, MeasureKind, Mismatch


@dataclass
class SojournMeasure:
    """Weights k -> Q(sojourn = k) at time n."""
    n: int
    weights: dict[int, Qr2]
    kind: MeasureKind
    metadata: dict = field(default_factory=dict)

    @property
    def total(self) -> Qr2:
        return sum(self.weights.values(), ZERO)

    @cached_property
    def normalized(self) -> dict[int, Qr2]:
        total = self.total
        if not total:
            raise DegenerateMeasureError(f"{self.kind.value}-measure at n={self.n} has zero total weight")
        return {k: w / total for k, w in self.weights.items()}

    def probability(self, k: int) -> Qr2:
        return self.normalized.get(k, ZERO)

    @property
    def support(self) -> list[int]:
        return sorted(k for k, w in self.weights.items() if w)

    @property
    def is_symmetric(self) -> bool:
        return all(self.weights.get(self.n - k, ZERO) == w for k, w in self.weights.items())


def _require_even(n: int, minimum: int = 0) -> None:
    if n < minimum or n % 2:
        raise ParameterError(f"n must be even and >= {minimum}, got {n}")


# --- Weight formulas ---

def symmetric_weight_A(c: PqrsCoeffs) -> Qr2:
    """(p^2 + r^2 + q^2 + s^2) / 2."""
    return (c.p * c.p + c.r * c.r + c.q * c.q + c.s * c.s) / 2


def general_weight_A(c: PqrsCoeffs, phi: QubitState) -> Qr2:
    """Q(A = k) for an arbitrary unit state, from the PQRS coefficients of Psi."""
    imbalance = phi.alpha.abs2() - phi.beta.abs2()
    return (
        symmetric_weight_A(c)
        + (c.p * c.r + c.q * c.s) * imbalance
        + (c.p * c.p - c.r * c.r - c.q * c.q + c.s * c.s) / 2 * phi.cross_term()
    )


def symmetric_weight_B(g: Mat2) -> Qr2:
    """Half the sum of the squared entries of Gamma."""
    return sum((x * x for x in g.entries()), ZERO) / 2


def general_weight_B(g: Mat2, phi: QubitState) -> Qr2:
    """Q(B = k) for an arbitrary unit state, from the entries of Gamma."""
    return (
        (g.a * g.a + g.c * g.c) * phi.alpha.abs2()
        + (g.b * g.b + g.d * g.d) * phi.beta.abs2()
        + (g.a * g.b + g.c * g.d) * phi.cross_term()
    )


def direct_weight(matrix: Mat2, phi: QubitState) -> Qr2:
    """||matrix phi||^2 computed from the complex amplitudes themselves."""
    return output_weight(matrix, phi)


# --- Quantum measures ---

def _collect(n: int, raw: dict[int, Qr2], kind: MeasureKind) -> SojournMeasure:
    weights = {}
    for k, w in raw.items():
        if k % 2 == 0:
            weights[k] = w
        elif w:
            logger.warning(f"{kind.value}-measure has weight {w} at odd k={k} (n={n})")
            weights[k] = w
    return SojournMeasure(n=n, weights=weights, kind=kind)


def sojourn_measure_A(n: int, phi: QubitState = PHI_STAR) -> SojournMeasure:
    """Sojourn measure of the free walk started at the origin."""
    _require_even(n)
    phi.require_unit()
    table = sojourn_table(0, n)
    raw = {k: general_weight_A(pqrs_decompose(table.psi(n, k)), phi) for k in range(n + 1)}
    return _collect(n, raw, MeasureKind.A)


def sojourn_measure_B(n: int, phi: QubitState = PHI_STAR) -> SojournMeasure:
    """Sojourn measure of the bridge walk (paths returning to the origin)."""
    _require_even(n)
    phi.require_unit()
    table = sojourn_table(0, n)
    raw = {k: general_weight_B(table.operator(n, 0, k), phi) for k in range(n + 1)}
    return _collect(n, raw, MeasureKind.B)


# --- Classical baselines ---

def classical_arcsine(n: int) -> SojournMeasure:
    """Discrete arc-sine law: C(2k,k) C(2(m-k),m-k) / 4^m at 2k, with n = 2m."""
    _require_even(n)
    m = n // 2
    weights = {
        2 * k: Qr2(Fraction(comb(2 * k, k) * comb(2 * (m - k), m - k), 4 ** m))
        for k in range(m + 1)
    }
    return SojournMeasure(n=n, weights=weights, kind=MeasureKind.CLASSICAL_ARCSINE)


def classical_equidistribution(n: int) -> SojournMeasure:
    """Uniform 1/(m+1) on {0, 2, ..., n}, n = 2m."""
    _require_even(n, 2)
    m = n // 2
    weights = {2 * k: Qr2(Fraction(1, m + 1)) for k in range(m + 1)}
    return SojournMeasure(n=n, weights=weights, kind=MeasureKind.CLASSICAL_UNIFORM)


def _classical_counts(n: int, bridges_only: bool) -> tuple[dict[int, int], int]:
    counts: dict[int, int] = {}
    paths = 0
    for steps in product((-1, 1), repeat=n):
        if bridges_only and sum(steps):
            continue
        position, positive = 0, 0
        for step in steps:
            positive += interval_counted(position, position + step)
            position += step
        counts[positive] = counts.get(positive, 0) + 1
        paths += 1
    return counts, paths


def enumerate_classical_walks(n: int) -> SojournMeasure:
    """Brute-force positive-interval counts over all 2^n simple random walk paths."""
    if n < 0:
        raise ParameterError(f"n must be non-negative, got {n}")
    counts, paths = _classical_counts(n, bridges_only=False)
    weights = {k: Qr2(Fraction(c, paths)) for k, c in counts.items()}
    return SojournMeasure(n=n, weights=weights, kind=MeasureKind.CLASSICAL_ARCSINE,
                          metadata={"paths": paths})


def enumerate_classical_bridges(n: int) -> SojournMeasure:
    """Same over the C(n, n/2) paths that end at the origin."""
    _require_even(n, 2)
    counts, paths = _classical_counts(n, bridges_only=True)
    weights = {k: Qr2(Fraction(c, paths)) for k, c in counts.items()}
    return SojournMeasure(n=n, weights=weights, kind=MeasureKind.CLASSICAL_UNIFORM,
                          metadata={"paths": paths})


# --- Reports ---

def corollary_uniform_check(n: int) -> CheckReport:
    """The normalized B-measure at time 4n is uniform on {2, 4, ..., 4n - 2}."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    report = CheckReport(name="bridge-uniform-at-4n", metadata={"n": n})
    measure = sojourn_measure_B(4 * n)
    share = Qr2(Fraction(1, 2 * n - 1))
    for k in range(0, 4 * n + 1, 2):
        expected = share if 2 <= k <= 4 * n - 2 else ZERO
        got = measure.probability(k)
        ok = expected == got
        report.record(ok, None if ok else Mismatch("normalized B-measure", 4 * n, k, expected, got))
    return report


@dataclass
class CentralTermComparison:
    n: int
    positions: list[int]
    quantum: dict[int, Qr2]
    classical: dict[int, Qr2]

    @property
    def quantum_smaller(self) -> bool:
        return all(self.quantum[k] < self.classical[k] for k in self.positions)


def central_positions(n: int) -> list[int]:
    """Middle of {0, 2, ..., n}: n/2 when n/2 is even, else its two even neighbours."""
    m = n // 2
    return [m] if m % 2 == 0 else [m - 1, m + 1]


def compare_central_terms(n: int) -> CentralTermComparison:
    """Central term(s) of the normalized A-measure against the arc-sine law."""
    _require_even(n, 4)
    positions = central_positions(n)
    quantum = sojourn_measure_A(n)
    classical = classical_arcsine(n)
    comparison = CentralTermComparison(
        n=n,
        positions=positions,
        quantum={k: quantum.probability(k) for k in positions},
        classical={k: classical.probability(k) for k in positions},
    )
    logger.info(
        f"Central terms n={n}: quantum {[str(v) for v in comparison.quantum.values()]} "
        f"vs classical {[str(v) for v in comparison.classical.values()]}"
    )
    return comparison


def symmetric_state_grid() -> list[QubitState]:
    """Unit states with |alpha| = |beta| = 1/sqrt(2) and a zero cross term: beta = +-i alpha."""
    half_root = Qr2(0, Fraction(1, 2))
    half = Qr2(Fraction(1, 2))
    alphas = [
        ComplexQr2(half_root, ZERO),
        ComplexQr2(ZERO, half_root),
        ComplexQr2(half, half),
        ComplexQr2(half, -half),
    ]
    states = []
    for alpha in alphas:
        i_alpha = ComplexQr2(-alpha.im, alpha.re)
        states.append(QubitState(alpha, i_alpha))
        states.append(QubitState(alpha, ComplexQr2(-i_alpha.re, -i_alpha.im)))
    return states
