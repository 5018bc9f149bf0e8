"""
Series Engine — truncated bivariate power series in z and t over Q[sqrt(2)].

A BiSeries knows every coefficient z^i t^j with i <= trunc_z and
j <= trunc_t; coefficients are stored sparsely (zeros are dropped).
Arithmetic results are truncated to the orders both operands know, so
they are exact on every retained coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Union

from core.errors import SeriesDivisionError, SeriesDomainError
from core.exact_ring import ONE, ZERO, Qr2

Scalar = Union[Qr2, int, Fraction]
Index = tuple[int, int]


@dataclass(frozen=True)
class BiSeries:
    trunc_z: int
    trunc_t: int
    coeffs: Mapping[Index, Qr2] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.trunc_z < 0 or self.trunc_t < 0:
            raise SeriesDomainError(f"Negative truncation ({self.trunc_z}, {self.trunc_t})")

    # --- Constructors ---

    @classmethod
    def from_terms(cls, terms: Mapping[Index, Scalar], trunc_z: int, trunc_t: int) -> BiSeries:
        kept: dict[Index, Qr2] = {}
        for (i, j), value in terms.items():
            coeff = Qr2.coerce(value)
            if coeff and i <= trunc_z and j <= trunc_t:
                if i < 0 or j < 0:
                    raise SeriesDomainError(f"Negative exponent ({i}, {j})")
                kept[(i, j)] = coeff
        return cls(trunc_z, trunc_t, kept)

    @classmethod
    def constant(cls, value: Scalar, trunc_z: int, trunc_t: int) -> BiSeries:
        return cls.from_terms({(0, 0): value}, trunc_z, trunc_t)

    @classmethod
    def monomial(cls, i: int, j: int, trunc_z: int, trunc_t: int, coeff: Scalar = 1) -> BiSeries:
        return cls.from_terms({(i, j): coeff}, trunc_z, trunc_t)

    # --- Inspection ---

    def coefficient(self, i: int, j: int) -> Qr2:
        if i > self.trunc_z or j > self.trunc_t:
            raise IndexError(f"z^{i} t^{j} beyond truncation ({self.trunc_z}, {self.trunc_t})")
        return self.coeffs.get((i, j), ZERO)

    def z_slice(self, i: int) -> dict[int, Qr2]:
        """Coefficient of z^i as a polynomial in t: {j: coeff}."""
        return {j: c for (ii, j), c in sorted(self.coeffs.items()) if ii == i}

    def terms(self) -> Iterator[tuple[int, int, Qr2]]:
        for (i, j), c in sorted(self.coeffs.items()):
            yield i, j, c

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Index:
        """Greatest common monomial of the support: (min i, min j)."""
        if not self.coeffs:
            raise SeriesDivisionError("Zero series has no valuation")
        return (min(i for i, _ in self.coeffs), min(j for _, j in self.coeffs))

    def truncate(self, trunc_z: int, trunc_t: int) -> BiSeries:
        trunc_z, trunc_t = min(trunc_z, self.trunc_z), min(trunc_t, self.trunc_t)
        return BiSeries(
            trunc_z,
            trunc_t,
            {(i, j): c for (i, j), c in self.coeffs.items() if i <= trunc_z and j <= trunc_t},
        )

    def first_discrepancy(self, other: BiSeries) -> tuple[int, int, Qr2, Qr2] | None:
        """First (i, j, mine, theirs) that differs on the common truncation."""
        tz, tt = min(self.trunc_z, other.trunc_z), min(self.trunc_t, other.trunc_t)
        for i, j in sorted(set(self.coeffs) | set(other.coeffs)):
            if i > tz or j > tt:
                continue
            mine, theirs = self.coeffs.get((i, j), ZERO), other.coeffs.get((i, j), ZERO)
            if mine != theirs:
                return i, j, mine, theirs
        return None

    def agrees_with(self, other: BiSeries) -> bool:
        return self.first_discrepancy(other) is None

    # --- Arithmetic ---

    def _lift(self, other: BiSeries | Scalar) -> BiSeries:
        if isinstance(other, BiSeries):
            return other
        return BiSeries.constant(other, self.trunc_z, self.trunc_t)

    def __add__(self, other: BiSeries | Scalar) -> BiSeries:
        other = self._lift(other)
        tz, tt = min(self.trunc_z, other.trunc_z), min(self.trunc_t, other.trunc_t)
        out = dict(self.truncate(tz, tt).coeffs)
        for (i, j), c in other.coeffs.items():
            if i <= tz and j <= tt:
                total = out.get((i, j), ZERO) + c
                if total:
                    out[(i, j)] = total
                else:
                    out.pop((i, j), None)
        return BiSeries(tz, tt, out)

    __radd__ = __add__

    def __neg__(self) -> BiSeries:
        return BiSeries(self.trunc_z, self.trunc_t, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: BiSeries | Scalar) -> BiSeries:
        return self + (-self._lift(other))

    def __rsub__(self, other: Scalar) -> BiSeries:
        return (-self) + other

    def scale(self, factor: Scalar) -> BiSeries:
        factor = Qr2.coerce(factor)
        if not factor:
            return BiSeries(self.trunc_z, self.trunc_t, {})
        return BiSeries(self.trunc_z, self.trunc_t, {k: c * factor for k, c in self.coeffs.items()})

    def __mul__(self, other: BiSeries | Scalar) -> BiSeries:
        if isinstance(other, BiSeries):
            return series_mul(self, other)
        if isinstance(other, (Qr2, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: BiSeries | Scalar) -> BiSeries:
        if isinstance(other, BiSeries):
            return series_div(self, other)
        return self.scale(Qr2.coerce(other).inverse())

    def shift(self, dz: int, dt: int) -> BiSeries:
        """Multiply by z^dz t^dt; negative shifts must divide every term."""
        trunc_z, trunc_t = self.trunc_z + dz, self.trunc_t + dt
        if trunc_z < 0 or trunc_t < 0:
            raise SeriesDivisionError(f"Shift by z^{dz} t^{dt} leaves no known coefficients")
        out: dict[Index, Qr2] = {}
        for (i, j), c in self.coeffs.items():
            ni, nj = i + dz, j + dt
            if ni < 0 or nj < 0:
                raise SeriesDivisionError(
                    f"non-power-series quotient: z^{i} t^{j} not divisible by z^{-dz} t^{-dt}"
                )
            out[(ni, nj)] = c
        return BiSeries(trunc_z, trunc_t, out)

    def coefficients_at_origin(self) -> Qr2:
        return self.coeffs.get((0, 0), ZERO)


def series_mul(f: BiSeries, g: BiSeries) -> BiSeries:
    """Cauchy product truncated to the smaller orders."""
    tz, tt = min(f.trunc_z, g.trunc_z), min(f.trunc_t, g.trunc_t)
    out: dict[Index, Qr2] = {}
    right = [(i, j, c) for (i, j), c in g.coeffs.items() if i <= tz and j <= tt]
    for (i1, j1), a in f.coeffs.items():
        if i1 > tz or j1 > tt:
            continue
        for i2, j2, b in right:
            i, j = i1 + i2, j1 + j2
            if i > tz or j > tt:
                continue
            out[(i, j)] = out.get((i, j), ZERO) + a * b
    return BiSeries(tz, tt, {k: c for k, c in out.items() if c})


def series_div(num: BiSeries, den: BiSeries) -> BiSeries:
    """Exact quotient num / den.

    The greatest common monomial z^a t^b of den's support is factored out of
    both sides first; the result is known up to (trunc_z - a, trunc_t - b).
    """
    if den.is_zero:
        raise SeriesDivisionError("Division by the zero series")
    a, b = den.valuation()
    num_reduced = num.shift(-a, -b)
    den_reduced = den.shift(-a, -b)
    lead = den_reduced.coefficients_at_origin()
    if not lead:
        raise SeriesDivisionError(
            f"non-power-series quotient: denominator has no unit part after removing z^{a} t^{b}"
        )
    lead_inv = lead.inverse()
    tz = min(num_reduced.trunc_z, den_reduced.trunc_z)
    tt = min(num_reduced.trunc_t, den_reduced.trunc_t)
    tail = [
        (i, j, c)
        for (i, j), c in den_reduced.coeffs.items()
        if (i, j) != (0, 0) and i <= tz and j <= tt
    ]

    quotient: dict[Index, Qr2] = {}
    for i in range(tz + 1):
        for j in range(tt + 1):
            acc = num_reduced.coeffs.get((i, j), ZERO)
            for di, dj, c in tail:
                if di <= i and dj <= j:
                    known = quotient.get((i - di, j - dj))
                    if known is not None:
                        acc = acc - c * known
            if acc:
                quotient[(i, j)] = acc * lead_inv
    return BiSeries(tz, tt, quotient)


def series_sqrt(f: BiSeries) -> BiSeries:
    """Square root with constant term 1, solved coefficient by coefficient.

    From g^2 = f: 2 g_ij = f_ij - sum of g_pq g_rs over the split (p+r, q+s) = (i, j)
    with neither factor the constant term, taken in lexicographic order.
    """
    if f.coefficients_at_origin() != ONE:
        raise SeriesDomainError("series_sqrt needs constant term exactly 1")
    root: dict[Index, Qr2] = {(0, 0): ONE}
    half = Fraction(1, 2)
    for i in range(f.trunc_z + 1):
        for j in range(f.trunc_t + 1):
            if (i, j) == (0, 0):
                continue
            acc = f.coeffs.get((i, j), ZERO)
            for (p, q), c in root.items():
                if (p, q) == (0, 0) or p > i or q > j:
                    continue
                partner = root.get((i - p, j - q))
                if partner is not None and (i - p, j - q) != (0, 0):
                    acc = acc - c * partner
            if acc:
                root[(i, j)] = acc * half
    return BiSeries(f.trunc_z, f.trunc_t, root)


def substitute_sign(f: BiSeries, flip_z: bool, flip_t: bool) -> BiSeries:
    """f(+-z, +-t): coefficient (i, j) times (-1)^(i*flip_z + j*flip_t)."""
    out = {}
    for (i, j), c in f.coeffs.items():
        odd = (i * flip_z + j * flip_t) % 2
        out[(i, j)] = -c if odd else c
    return BiSeries(f.trunc_z, f.trunc_t, out)


def symmetrize(f: BiSeries) -> BiSeries:
    """f(z,t) + f(-z,t) + f(z,-t) + f(-z,-t): four times the (even, even) part."""
    return (
        f
        + substitute_sign(f, True, False)
        + substitute_sign(f, False, True)
        + substitute_sign(f, True, True)
    )


def even_part(f: BiSeries) -> BiSeries:
    """Sub-series of (even, even) exponents, i.e. symmetrize(f) / 4."""
    return symmetrize(f).scale(Fraction(1, 4))


def dilate(f: BiSeries, kz: int, kt: int) -> BiSeries:
    """Substitute z -> z^kz, t -> t^kt.

    Exponents that are not multiples of kz (kt) are zero in the result, so
    the truncation grows to kz*(trunc_z + 1) - 1.
    """
    if kz < 1 or kt < 1:
        raise SeriesDomainError(f"Dilation factors must be positive, got ({kz}, {kt})")
    return BiSeries(
        kz * (f.trunc_z + 1) - 1,
        kt * (f.trunc_t + 1) - 1,
        {(i * kz, j * kt): c for (i, j), c in f.coeffs.items()},
    )
