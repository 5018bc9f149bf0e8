"""
Theorems — closed-form generating functions of the Hadamard sojourn operators.

The closed forms for the PQRS coefficients of Psi^0 and for the bridge
operators Gamma are functions of z^2 and t^2 only, so they are expanded in
the squared variables Z = z^2, T = t^2 and dilated back afterwards. Every
expansion is cross-checked against the path-sum DP, the first-return
convolution and the first-step functional equations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from loguru import logger

from core.errors import ParameterError
from core.exact_ring import (
    HADAMARD,
    HADAMARD_BASIS,
    ONE,
    SQRT2,
    ZERO,
    Mat2,
    PqrsCoeffs,
    Qr2,
    pqrs_basis,
    pqrs_decompose,
)
from core.series_engine import BiSeries, dilate, even_part, series_sqrt
from core.walk_paths import SojournTable, evolve_sojourn_table, sojourn_table
from shared.types import CheckReport, Mismatch

PQRS = ("p", "q", "r", "s")

# Extra squared-variable orders carried through the monomial divisions.
_MARGIN = 2


def _require_order(order: int, minimum: int = 2) -> None:
    if order < minimum:
        raise ParameterError(f"order must be >= {minimum}, got {order}")


@dataclass(frozen=True)
class _SquaredVariables:
    """Z = z^2, T = t^2 and the two radicals A = sqrt(1+Z^2), B = sqrt(1+Z^2 T^2)."""
    Z: BiSeries
    T: BiSeries
    ZT: BiSeries
    A: BiSeries
    B: BiSeries


@lru_cache(maxsize=16)
def _squared_variables(n: int) -> _SquaredVariables:
    Z = BiSeries.monomial(1, 0, n, n)
    T = BiSeries.monomial(0, 1, n, n)
    ZT = Z * T
    return _SquaredVariables(
        Z=Z,
        T=T,
        ZT=ZT,
        A=series_sqrt(1 + Z * Z),
        B=series_sqrt(1 + ZT * ZT),
    )


def _to_zt(f: BiSeries, order: int) -> BiSeries:
    """Squared-variable series -> series in z, t truncated at (order, order)."""
    return dilate(f, 2, 2).truncate(order, order)


# --- PQRS-valued series ---

@dataclass(frozen=True)
class PqrsSeries:
    """u~(z, t) for u in {p, q, r, s}."""
    p: BiSeries
    q: BiSeries
    r: BiSeries
    s: BiSeries

    def __getitem__(self, name: str) -> BiSeries:
        return getattr(self, name)

    def coefficient(self, n: int, k: int) -> PqrsCoeffs:
        return PqrsCoeffs(*(self[u].coefficient(n, k) for u in PQRS))


def generating_series(x: int, order: int, coin: Mat2 = HADAMARD) -> PqrsSeries:
    """u~^x(z, t) = sum over n >= 1 and k of u^x_n(k) z^n t^k, read off the DP table.

    A coin other than the Hadamard one must be real orthogonal, so that its
    PQRS basis is orthonormal.
    """
    _require_order(order, 1)
    if coin == HADAMARD:
        table, basis = sojourn_table(x, order), HADAMARD_BASIS
    else:
        table, basis = evolve_sojourn_table(x, order, coin), pqrs_basis(coin)
    terms: dict[str, dict[tuple[int, int], Qr2]] = {u: {} for u in PQRS}
    for n in range(1, order + 1):
        by_k: dict[int, Mat2] = {}
        for _, k, matrix in table.layer(n):
            by_k[k] = by_k[k] + matrix if k in by_k else matrix
        for k, matrix in by_k.items():
            coeffs = pqrs_decompose(matrix, basis)
            for u in PQRS:
                terms[u][(n, k)] = coeffs[u]
    return PqrsSeries(*(BiSeries.from_terms(terms[u], order, order) for u in PQRS))


# --- Closed form for Psi^0 ---

@dataclass(frozen=True)
class Theorem1Series:
    """Closed-form p-bar, q-bar, r-bar, s-bar: coefficient z^2n t^2k is u^0_2n(2k)."""
    order: int
    p_bar: BiSeries
    q_bar: BiSeries
    r_bar: BiSeries
    s_bar: BiSeries

    def component(self, name: str) -> BiSeries:
        return getattr(self, f"{name}_bar")

    def coefficient(self, n: int, k: int) -> PqrsCoeffs:
        return PqrsCoeffs(*(self.component(u).coefficient(n, k) for u in PQRS))


def _theorem1_quotients(n: int) -> dict[str, tuple[BiSeries, BiSeries]]:
    """Numerator and denominator (scalar factors included) of each component, in Z, T."""
    v = _squared_variables(n)
    Z, T, ZT, A, B = v.Z, v.T, v.ZT, v.A, v.B
    common = (1 - Z) * (1 - ZT)
    one_plus_a = 1 + A
    q_tail = 1 - (1 - A) * T + B

    p_num = ZT * ((1 - T) * Z * 2 + (1 - ZT) * A + (1 - Z) * B)
    p_den = common * (-1 + one_plus_a * T + B) * SQRT2

    r_num = -(Z * Z * T) + one_plus_a * (1 - B) + Z * (1 + one_plus_a * T - B)
    r_den = common * (SQRT2 * 2)

    q_num = ZT * (-(Z * Z) + Z * Z * Z * T + one_plus_a * (-1 + (2 - T) * Z - (1 - Z) * B))
    q_den = common * one_plus_a * q_tail * SQRT2

    s_num = Z * Z * T * (
        (1 - ZT * ZT) * A + (1 - Z) * (1 + ZT) * B + (1 - ZT) * A * B + (1 - Z) * B * B
    )
    s_den = common * one_plus_a * (-1 + ZT + B) * q_tail * SQRT2

    return {"p": (p_num, p_den), "q": (q_num, q_den), "r": (r_num, r_den), "s": (s_num, s_den)}


@lru_cache(maxsize=8)
def theorem1_series(order: int) -> Theorem1Series:
    """Expand the four closed-form quotients exactly up to z^order."""
    _require_order(order)
    n = order // 2 + _MARGIN
    logger.debug(f"Expanding Psi^0 closed forms | order={order}")
    parts = {
        u: _to_zt(num / den, order)
        for u, (num, den) in _theorem1_quotients(n).items()
    }
    return Theorem1Series(
        order=order,
        p_bar=parts["p"],
        q_bar=parts["q"],
        r_bar=parts["r"],
        s_bar=parts["s"],
    )


# --- 2x2 matrices of series ---

@dataclass(frozen=True)
class SeriesMat2:
    """[[a, b], [c, d]] with BiSeries entries."""
    a: BiSeries
    b: BiSeries
    c: BiSeries
    d: BiSeries

    def entries(self) -> tuple[BiSeries, BiSeries, BiSeries, BiSeries]:
        return (self.a, self.b, self.c, self.d)

    def entry(self, i: int, j: int) -> BiSeries:
        """1-based (i, j) component."""
        return self.entries()[2 * (i - 1) + (j - 1)]

    def coefficient(self, n: int, k: int) -> Mat2:
        return Mat2(*(f.coefficient(n, k) for f in self.entries()))

    def __add__(self, other: SeriesMat2) -> SeriesMat2:
        return SeriesMat2(*(x + y for x, y in zip(self.entries(), other.entries())))

    def __sub__(self, other: SeriesMat2) -> SeriesMat2:
        return SeriesMat2(*(x - y for x, y in zip(self.entries(), other.entries())))

    def __matmul__(self, other: SeriesMat2) -> SeriesMat2:
        return SeriesMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> BiSeries:
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> SeriesMat2:
        return SeriesMat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> SeriesMat2:
        """Adjugate over determinant, each entry an exact series quotient."""
        det = self.det()
        return SeriesMat2(*(f / det for f in self.adjugate().entries()))

    def map(self, fn) -> SeriesMat2:
        return SeriesMat2(*(fn(f) for f in self.entries()))

    @classmethod
    def identity(cls, trunc_z: int, trunc_t: int) -> SeriesMat2:
        one = BiSeries.constant(1, trunc_z, trunc_t)
        zero = BiSeries(trunc_z, trunc_t, {})
        return cls(one, zero, zero, one)


class Theorem2Series(SeriesMat2):
    """Gamma-bar(z, t) entrywise: coefficient z^2n t^2k is Gamma_2n(2k)."""


@lru_cache(maxsize=8)
def theorem2_series(order: int) -> Theorem2Series:
    """Expand the closed form (1/C)[...] for Gamma-bar exactly up to z^order.

    The (1,1) entry is (z^2 - A)(1 + z^2 t^2 - B)/C; this sign is the one that
    reproduces X(I - X)^{-1} and the path sums.
    """
    _require_order(order)
    n = order // 2 + _MARGIN
    v = _squared_variables(n)
    Z, ZT, A, B = v.Z, v.ZT, v.A, v.B
    C = -1 - (Z - A) * (ZT - B)
    w_part = 1 + ZT - B
    z_part = -1 - Z + A
    logger.debug(f"Expanding Gamma closed form | order={order}")
    entries = (
        (Z - A) * w_part / C,
        w_part / C,
        z_part / C,
        -(z_part * (ZT - B)) / C,
    )
    return Theorem2Series(*(_to_zt(f, order) for f in entries))


# --- First returns and the bridge convolution ---

@dataclass(frozen=True)
class FirstReturnAmplitudes:
    """Coefficients a_n of (-1 - z^2 + sqrt(1 + z^4)) / z."""
    n_max: int
    a: dict[int, Fraction] = field(default_factory=dict)

    def amplitude(self, n: int) -> Fraction:
        if n < 1 or n > self.n_max:
            raise ParameterError(f"a_{n} outside computed range 1..{self.n_max}")
        return self.a.get(n, Fraction(0))

    def positive_excursion(self, r: int) -> Mat2:
        """First-return block for a 2r-step excursion on the positive side."""
        half = self.amplitude(2 * r - 1) / 2
        return Mat2.from_rows([[-half, half], [0, 0]])

    def negative_excursion(self, r: int) -> Mat2:
        """First-return block for a 2r-step excursion on the negative side."""
        half = self.amplitude(2 * r - 1) / 2
        return Mat2.from_rows([[0, 0], [-half, -half]])


def first_return_amplitudes(n_max: int) -> FirstReturnAmplitudes:
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    z2 = BiSeries.monomial(2, 0, n_max + 1, 0)
    root = series_sqrt(1 + z2 * z2)
    series = (root - 1 - z2).shift(-1, 0)
    return FirstReturnAmplitudes(
        n_max=n_max,
        a={i: c.to_fraction() for i, j, c in series.terms() if i >= 1},
    )


def sqrt_one_plus_z(n_max: int) -> dict[int, Fraction]:
    """b_n of sqrt(1 + z) = sum b_n z^n for n = 0..n_max."""
    root = series_sqrt(1 + BiSeries.monomial(1, 0, n_max, 0))
    return {i: root.coefficient(i, 0).to_fraction() for i in range(n_max + 1)}


def gamma_via_convolution(n_max: int) -> SojournTable:
    """Gamma_2m(2k) from the first-return blocks alone.

    Gamma_2m(2k) = sum_{r=1..k} Gamma_{2m-2r}(2k-2r) F+_2r
                 + sum_{r=1..m-k} Gamma_{2m-2r}(2k) F-_2r,   Gamma_0(0) = I.
    """
    if n_max < 0 or n_max % 2:
        raise ParameterError(f"n_max must be even and non-negative, got {n_max}")
    m_max = n_max // 2
    amplitudes = first_return_amplitudes(max(n_max - 1, 1))
    plus = {r: amplitudes.positive_excursion(r) for r in range(1, m_max + 1)}
    minus = {r: amplitudes.negative_excursion(r) for r in range(1, m_max + 1)}

    halves: dict[tuple[int, int], Mat2] = {(0, 0): Mat2.identity()}
    for m in range(1, m_max + 1):
        for k in range(m + 1):
            total = Mat2.zero()
            for r in range(1, k + 1):
                total = total + halves[(m - r, k - r)] @ plus[r]
            for r in range(1, m - k + 1):
                total = total + halves[(m - r, k)] @ minus[r]
            halves[(m, k)] = total

    table = SojournTable(start=0, n_max=n_max)
    for (m, k), matrix in halves.items():
        table.entries[(2 * m, 0, 2 * k)] = matrix
    logger.debug(f"Bridge convolution built | n_max={n_max}")
    return table


# --- Cross-checks ---

def _compare_series(
    report: CheckReport, relation: str, expected: BiSeries, actual: BiSeries
) -> None:
    """Record one comparison per retained coefficient of the common truncation."""
    tz = min(expected.trunc_z, actual.trunc_z)
    tt = min(expected.trunc_t, actual.trunc_t)
    for i in range(tz + 1):
        for j in range(tt + 1):
            want = expected.coeffs.get((i, j), ZERO)
            got = actual.coeffs.get((i, j), ZERO)
            ok = want == got
            report.record(ok, None if ok else Mismatch(relation, i, j, want, got))


def _compare_matrix(report: CheckReport, relation: str, n: int, k: int,
                    expected: Mat2, actual: Mat2) -> None:
    ok = expected == actual
    report.record(ok, None if ok else Mismatch(relation, n, k, expected, actual))


def theorem1_vs_dp(order: int) -> CheckReport:
    """Closed-form series against the (even, even) part of the DP series from 0."""
    _require_order(order)
    report = CheckReport(name="psi0-closed-form-vs-dp", metadata={"order": order})
    closed = theorem1_series(order)
    dp = generating_series(0, order)
    for u in PQRS:
        _compare_series(report, f"{u}-bar closed form vs DP", even_part(dp[u]), closed.component(u))
    return report


def theorem1_division_free_check(order: int) -> CheckReport:
    """numerator == DP series * denominator for each quotient, with no division."""
    _require_order(order)
    report = CheckReport(name="psi0-division-free", metadata={"order": order})
    dp = generating_series(0, order)
    for u, (num, den) in _theorem1_quotients(order // 2 + _MARGIN).items():
        lhs = _to_zt(num, order)
        rhs = (even_part(dp[u]) * _to_zt(den, order)).truncate(order, order)
        _compare_series(report, f"{u}-bar numerator vs DP x denominator", lhs, rhs)
    return report


def theorem2_vs_dp(order: int) -> CheckReport:
    """Gamma closed form against both the DP and the first-return convolution."""
    _require_order(order)
    report = CheckReport(name="gamma-closed-form-three-way", metadata={"order": order})
    closed = theorem2_series(order)
    dp = sojourn_table(0, order)
    even_order = order - order % 2
    convolution = gamma_via_convolution(even_order)
    for n in range(2, even_order + 1, 2):
        for k in range(n + 1):
            expected = dp.operator(n, 0, k)
            _compare_matrix(report, "Gamma closed form vs DP", n, k, expected, closed.coefficient(n, k))
            _compare_matrix(report, "Gamma convolution vs DP", n, k, expected, convolution.operator(n, 0, k))
    return report


def _x_from_radicals(n: int) -> SeriesMat2:
    """X with rows (alpha, -alpha) and (beta, beta), alpha = (1 + ZT - B)/2, beta = (1 + Z - A)/2."""
    v = _squared_variables(n)
    alpha = (1 + v.ZT - v.B).scale(Fraction(1, 2))
    beta = (1 + v.Z - v.A).scale(Fraction(1, 2))
    return SeriesMat2(alpha, -alpha, beta, beta)


def _x_from_excursions(n: int) -> SeriesMat2:
    """X = sum_r F+_2r (zt)^2r + F-_2r z^2r, in squared variables."""
    amplitudes = first_return_amplitudes(2 * n - 1)
    terms: list[dict[tuple[int, int], Qr2]] = [{}, {}, {}, {}]
    for r in range(1, n + 1):
        for block, key in (
            (amplitudes.positive_excursion(r), (r, r)),
            (amplitudes.negative_excursion(r), (r, 0)),
        ):
            for slot, value in enumerate(block.entries()):
                if value:
                    terms[slot][key] = terms[slot].get(key, ZERO) + value
    return SeriesMat2(*(BiSeries.from_terms(t, n, n) for t in terms))


def x_matrix_check(order: int) -> CheckReport:
    """X(I - X)^{-1} with X from the radicals equals the Gamma closed form.

    Also checks that the excursion sum gives the same X, that X has no
    constant term and that (I - X)^{-1} starts with I.
    """
    _require_order(order)
    n = order // 2 + _MARGIN
    report = CheckReport(name="excursion-matrix", metadata={"order": order})
    x = _x_from_radicals(n)
    identity = SeriesMat2.identity(n, n)
    resolvent = (identity - x).inverse()

    _compare_matrix(report, "X constant term", 0, 0, Mat2.zero(), x.coefficient(0, 0))
    _compare_matrix(report, "(I - X)^-1 constant term", 0, 0, Mat2.identity(), resolvent.coefficient(0, 0))

    excursions = _x_from_excursions(n)
    for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)):
        _compare_series(
            report, f"X[{i},{j}] radicals vs excursions",
            _to_zt(x.entry(i, j), order), _to_zt(excursions.entry(i, j), order),
        )

    product = (x @ resolvent).map(lambda f: _to_zt(f, order))
    closed = theorem2_series(order)
    for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)):
        _compare_series(report, f"X(I-X)^-1[{i},{j}] vs closed form", closed.entry(i, j), product.entry(i, j))
    return report


def _coin_entries(coin: Mat2) -> dict[str, Qr2]:
    return {"a": coin.a, "b": coin.b, "c": coin.c, "d": coin.d}


def _step_monomial(x: int, component: str) -> tuple[int, int]:
    """z (not counted) or zt (counted) for the first step of each relation at x."""
    if x >= 1:
        return (1, 1)
    if x == 0:
        return (1, 1) if component in ("r", "q") else (1, 0)
    return (1, 0)


def check_lemma41(x_min: int, x_max: int, order: int, coin: Mat2 = HADAMARD) -> CheckReport:
    """The twelve first-step functional equations on DP series, x in [x_min, x_max].

        p~^x = m{a p~^{x-1} + c r~^{x-1} + 1}     r~^x = m{b p~^{x+1} + d r~^{x+1}}
        q~^x = m{d q~^{x+1} + b s~^{x+1} + 1}     s~^x = m{c q~^{x-1} + a s~^{x-1}}

    with m = z or zt depending on whether the first interval is counted.
    """
    if not x_min <= -1 < 1 <= x_max:
        raise ParameterError(f"Need x_min <= -1 < 1 <= x_max, got [{x_min}, {x_max}]")
    _require_order(order, 1)
    e = _coin_entries(coin)
    series = {x: generating_series(x, order, coin) for x in range(x_min - 1, x_max + 2)}
    report = CheckReport(
        name="first-step-relations", metadata={"x_min": x_min, "x_max": x_max, "order": order}
    )

    for x in range(x_min, x_max + 1):
        left, here, right = series[x - 1], series[x], series[x + 1]
        for u in PQRS:
            report.record(
                here[u].coefficients_at_origin() == ZERO,
                Mismatch(relation=f"{u}~^{x} constant term", n=0, k=0,
                         expected=ZERO, actual=here[u].coefficients_at_origin()),
            )
        bodies = {
            "p": left.p * e["a"] + left.r * e["c"] + 1,
            "r": right.p * e["b"] + right.r * e["d"],
            "q": right.q * e["d"] + right.s * e["b"] + 1,
            "s": left.q * e["c"] + left.s * e["a"],
        }
        for u, body in bodies.items():
            rhs = body.shift(*_step_monomial(x, u))
            _compare_series(report, f"first-step relation {u}~^{x}", here[u], rhs)

    logger.debug(f"First-step relations checked | {report.checked} coefficients")
    return report


# Inhomogeneous part (constant, coefficient of the step monomial) per component.
_RECURRENCE_SOURCE = {
    "p": lambda e: (ONE, -e["d"]),
    "r": lambda e: (ZERO, e["b"]),
    "q": lambda e: (ONE, -e["a"]),
    "s": lambda e: (ZERO, e["c"]),
}


def check_cor42(x_min: int, x_max: int, order: int, coin: Mat2 = HADAMARD) -> CheckReport:
    """Three-term recurrences in x, multiplied through by the step monomial m:

        d m u~^{x+2} - (det m^2 + 1) u~^{x+1} + a m u~^x + m (c0 + c1 m) = 0

    with m = z for x <= -2 and m = zt for x >= 0.
    """
    if not x_min <= -1 < 1 <= x_max:
        raise ParameterError(f"Need x_min <= -1 < 1 <= x_max, got [{x_min}, {x_max}]")
    _require_order(order, 1)
    e = _coin_entries(coin)
    delta = coin.det()
    series = {x: generating_series(x, order, coin) for x in range(x_min, x_max + 1)}
    report = CheckReport(
        name="three-term-recurrences", metadata={"x_min": x_min, "x_max": x_max, "order": order}
    )

    starts = [x for x in range(x_min, x_max - 1) if x <= -2 or x >= 0]
    for x in starts:
        dz, dt = (1, 0) if x <= -2 else (1, 1)
        for u in PQRS:
            f0, f1, f2 = series[x][u], series[x + 1][u], series[x + 2][u]
            c0, c1 = _RECURRENCE_SOURCE[u](e)
            source = BiSeries.from_terms({(dz, dt): c0, (2 * dz, 2 * dt): c1}, order, order)
            total = (
                f2.shift(dz, dt) * e["d"]
                - f1.shift(2 * dz, 2 * dt) * delta
                - f1
                + f0.shift(dz, dt) * e["a"]
                + source
            )
            _compare_series(report, f"recurrence {u} from x={x}", BiSeries(order, order, {}), total)

    logger.debug(f"Three-term recurrences checked | {report.checked} coefficients")
    return report


def corollary_series_check(order: int) -> CheckReport:
    """The z^{4n} part of Gamma-bar is (1/2) b_n (t^2 + ... + t^{4n-2}) [[-1,-1],[1,-1]] z^{4n}."""
    _require_order(order)
    report = CheckReport(name="gamma-4n-subseries", metadata={"order": order})
    closed = theorem2_series(order)
    b = sqrt_one_plus_z(max(order // 4, 1))
    shape = Mat2.from_rows([[-1, -1], [1, -1]])
    for n in range(1, order // 4 + 1):
        for k in range(2 * n + 1):
            weight = b[n] / 2 if 1 <= k <= 2 * n - 1 else Fraction(0)
            _compare_matrix(report, "Gamma z^4n sub-series", 4 * n, 2 * k, shape * weight,
                            closed.coefficient(4 * n, 2 * k))
    return report


def classical_gf_check(n_max: int = 10) -> CheckReport:
    """Coefficients of 1/(sqrt(1-z^2) sqrt(1-z^2 t^2)) against the arc-sine weights."""
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    Z = BiSeries.monomial(1, 0, n_max, n_max)
    ZT = Z * BiSeries.monomial(0, 1, n_max, n_max)
    gf = BiSeries.constant(1, n_max, n_max) / (series_sqrt(1 - Z) * series_sqrt(1 - ZT))
    report = CheckReport(name="classical-generating-function", metadata={"n_max": n_max})
    for n in range(n_max + 1):
        for k in range(n + 1):
            expected = Qr2(Fraction(comb(2 * k, k) * comb(2 * (n - k), n - k), 4 ** n))
            got = gf.coefficient(n, k)
            report.record(
                expected == got,
                Mismatch(relation="classical GF coefficient", n=2 * n, k=2 * k,
                         expected=expected, actual=got),
            )
    return report
