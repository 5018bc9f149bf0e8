"""
Exact Ring — arithmetic in Q[sqrt(2)], 2x2 matrices over it, and the PQRS basis.

Every amplitude of the Hadamard walk is a + b*sqrt(2) with rational a, b,
so nothing here ever rounds. All values are immutable.
"""
from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Iterator, Sequence, Union

from core.errors import ExactDivisionError, ParameterError

_ZERO = Fraction(0)

Rational = Union[int, Fraction]


@total_ordering
class Qr2:
    """Exact scalar ``rat_part + rad_part * sqrt(2)``.

    Both parts are ``Fraction``s, so they are always in lowest terms with a
    positive denominator and equality is structural.
    """

    __slots__ = ("_a", "_b")

    def __init__(self, rat_part: Rational | str = 0, rad_part: Rational | str = 0) -> None:
        self._a = rat_part if type(rat_part) is Fraction else Fraction(rat_part)
        self._b = rad_part if type(rad_part) is Fraction else Fraction(rad_part)

    @property
    def rat_part(self) -> Fraction:
        return self._a

    @property
    def rad_part(self) -> Fraction:
        return self._b

    @classmethod
    def coerce(cls, value: Qr2 | Rational | str) -> Qr2:
        if isinstance(value, Qr2):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(value)

    # --- Exact-string format ---

    def __str__(self) -> str:
        rat = f"{self._a.numerator}/{self._a.denominator}"
        if not self._b:
            return rat
        return f"{rat} + {self._b.numerator}/{self._b.denominator}*sqrt(2)"

    def __repr__(self) -> str:
        return f"Qr2({self._a}, {self._b})"

    _BODY_RE = re.compile(r"(?:(\d+(?:/\d+)?)(\*sqrt\(2\))?|(sqrt\(2\)))")
    _TERM_RE = re.compile(r"([+-]*)([^+-]+)")
    _SPLIT_TOKEN_RE = re.compile(r"[\w/)]\s+[\w/(]")

    @classmethod
    def parse(cls, text: str) -> Qr2:
        """Parse the exact-string format.

        Accepts the canonical ``"a/b"`` / ``"a/b + c/d*sqrt(2)"`` output and,
        more leniently, any signed sum of rational and ``*sqrt(2)`` terms
        (``"-3/4*sqrt(2)"``, ``"2/8"``, ``"1 - sqrt(2)"``).
        """
        if gap := cls._SPLIT_TOKEN_RE.search(text):
            raise ValueError(f"Whitespace inside a term at {gap.group()!r} in {text!r}")
        compact = text.replace(" ", "").replace("−", "-")
        if not compact:
            raise ValueError("Empty exact-number string")
        rat, rad = _ZERO, _ZERO
        consumed = 0
        for match in cls._TERM_RE.finditer(compact):
            if match.start() != consumed:
                break
            consumed = match.end()
            signs, body = match.groups()
            sign = -1 if signs.count("-") % 2 else 1
            parsed = cls._BODY_RE.fullmatch(body)
            if parsed is None:
                raise ValueError(f"Malformed exact-number term {body!r} in {text!r}")
            number, times_root, bare_root = parsed.groups()
            if bare_root:
                rad += sign
            elif times_root:
                rad += sign * cls._fraction(number, text)
            else:
                rat += sign * cls._fraction(number, text)
        if consumed != len(compact):
            raise ValueError(f"Malformed exact-number string {text!r}")
        return cls(rat, rad)

    @staticmethod
    def _fraction(number: str, text: str) -> Fraction:
        try:
            return Fraction(number)
        except ZeroDivisionError:
            raise ValueError(f"Zero denominator in {text!r}") from None

    # --- Comparison ---

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Qr2):
            return self._a == other._a and self._b == other._b
        if isinstance(other, (int, Fraction)):
            return not self._b and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self._b:
            return hash(self._a)
        return hash((self._a, self._b))

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def sign(self) -> int:
        """Sign of the real number a + b*sqrt(2)."""
        a, b = self._a, self._b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: |a| vs |b|*sqrt(2)
        return sa if a * a > 2 * b * b else sb

    def __lt__(self, other: Qr2 | Rational) -> bool:
        if not isinstance(other, (Qr2, int, Fraction)):
            return NotImplemented
        return (self - other).sign() < 0

    # --- Field operations ---

    def __neg__(self) -> Qr2:
        return Qr2(-self._a, -self._b)

    def __add__(self, other: Qr2 | Rational) -> Qr2:
        if isinstance(other, Qr2):
            return Qr2(self._a + other._a, self._b + other._b)
        if isinstance(other, (int, Fraction)):
            return Qr2(self._a + other, self._b)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: Qr2 | Rational) -> Qr2:
        if isinstance(other, Qr2):
            return Qr2(self._a - other._a, self._b - other._b)
        if isinstance(other, (int, Fraction)):
            return Qr2(self._a - other, self._b)
        return NotImplemented

    def __rsub__(self, other: Rational) -> Qr2:
        return (-self) + other

    def __mul__(self, other: Qr2 | Rational) -> Qr2:
        if isinstance(other, Qr2):
            a, b, c, d = self._a, self._b, other._a, other._b
            if not b and not d:
                return Qr2(a * c, _ZERO)
            return Qr2(a * c + 2 * b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return Qr2(self._a * other, self._b * other)
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> Qr2:
        """Galois conjugate a - b*sqrt(2)."""
        return Qr2(self._a, -self._b)

    def norm(self) -> Fraction:
        """Field norm a^2 - 2 b^2; zero only for the zero element."""
        return self._a * self._a - 2 * self._b * self._b

    def inverse(self) -> Qr2:
        if not self:
            raise ExactDivisionError("Division by zero in Q[sqrt(2)]")
        n = self.norm()
        return Qr2(self._a / n, -self._b / n)

    def __truediv__(self, other: Qr2 | Rational) -> Qr2:
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ExactDivisionError("Division by zero in Q[sqrt(2)]")
            return Qr2(self._a / other, self._b / other)
        if isinstance(other, Qr2):
            if not other._b:
                return self / other._a
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other: Rational) -> Qr2:
        return Qr2(other) / self

    # --- Helpers ---

    def to_fraction(self) -> Fraction:
        if self._b:
            raise ValueError(f"{self} is irrational")
        return self._a


ZERO = Qr2(0)
ONE = Qr2(1)
SQRT2 = Qr2(0, 1)
INV_SQRT2 = Qr2(0, Fraction(1, 2))


class ArithOp(Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


_ARITH: dict[ArithOp, Callable[[Qr2, Qr2], Qr2]] = {
    ArithOp.ADD: operator.add,
    ArithOp.SUB: operator.sub,
    ArithOp.MUL: operator.mul,
    ArithOp.DIV: operator.truediv,
}


def qr2_arith(lhs: Qr2, rhs: Qr2, op: ArithOp | str) -> Qr2:
    """Exact field arithmetic; division by zero raises ExactDivisionError."""
    return _ARITH[ArithOp(op)](Qr2.coerce(lhs), Qr2.coerce(rhs))


# --- Complex numbers over Q[sqrt(2)] ---

@dataclass(frozen=True, slots=True)
class ComplexQr2:
    """re + i*im with both parts in Q[sqrt(2)]; used for qubit amplitudes."""
    re: Qr2 = ZERO
    im: Qr2 = ZERO

    def __add__(self, other: ComplexQr2) -> ComplexQr2:
        return ComplexQr2(self.re + other.re, self.im + other.im)

    def __mul__(self, other: ComplexQr2) -> ComplexQr2:
        return ComplexQr2(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, factor: Qr2) -> ComplexQr2:
        return ComplexQr2(self.re * factor, self.im * factor)

    def conj(self) -> ComplexQr2:
        return ComplexQr2(self.re, -self.im)

    def abs2(self) -> Qr2:
        return self.re * self.re + self.im * self.im


# --- 2x2 matrices ---

@dataclass(frozen=True, slots=True)
class Mat2:
    """The matrix [[a, b], [c, d]] over Q[sqrt(2)]."""
    a: Qr2
    b: Qr2
    c: Qr2
    d: Qr2

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Qr2 | Rational | str]]) -> Mat2:
        (a, b), (c, d) = rows
        return cls(Qr2.coerce(a), Qr2.coerce(b), Qr2.coerce(c), Qr2.coerce(d))

    @classmethod
    def identity(cls) -> Mat2:
        return cls(ONE, ZERO, ZERO, ONE)

    @classmethod
    def zero(cls) -> Mat2:
        return cls(ZERO, ZERO, ZERO, ZERO)

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def rows(self) -> tuple[tuple[Qr2, Qr2], tuple[Qr2, Qr2]]:
        return ((self.a, self.b), (self.c, self.d))

    def entries(self) -> Iterator[Qr2]:
        yield from (self.a, self.b, self.c, self.d)

    def entry(self, i: int, j: int) -> Qr2:
        """1-based (i, j) component."""
        return self.rows()[i - 1][j - 1]

    @property
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def __add__(self, other: Mat2) -> Mat2:
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: Mat2) -> Mat2:
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __mul__(self, scalar: Qr2 | Rational) -> Mat2:
        if not isinstance(scalar, (Qr2, int, Fraction)):
            return NotImplemented
        return Mat2(self.a * scalar, self.b * scalar, self.c * scalar, self.d * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Qr2 | Rational) -> Mat2:
        inv = Qr2.coerce(scalar).inverse()
        return self * inv

    def transpose(self) -> Mat2:
        return Mat2(self.a, self.c, self.b, self.d)

    def trace(self) -> Qr2:
        return self.a + self.d

    def det(self) -> Qr2:
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> Mat2:
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> Mat2:
        det = self.det()
        if not det:
            raise ExactDivisionError("Singular 2x2 matrix")
        return self.adjugate() / det

    def inner(self, other: Mat2) -> Qr2:
        """Trace inner product tr(A* B); conjugation is the identity on real entries."""
        return self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d

    def apply(self, alpha: ComplexQr2, beta: ComplexQr2) -> tuple[ComplexQr2, ComplexQr2]:
        """Act on the column vector [alpha, beta]."""
        return (
            alpha.scale(self.a) + beta.scale(self.b),
            alpha.scale(self.c) + beta.scale(self.d),
        )


def mat2_mul(lhs: Mat2, rhs: Mat2) -> Mat2:
    return lhs @ rhs


# --- Coin split and the PQRS basis ---

def coin_split(coin: Mat2) -> tuple[Mat2, Mat2]:
    """Split U = P + Q: P keeps the top row (left move), Q the bottom row (right move)."""
    return (
        Mat2(coin.a, coin.b, ZERO, ZERO),
        Mat2(ZERO, ZERO, coin.c, coin.d),
    )


@dataclass(frozen=True, slots=True)
class PqrsCoeffs:
    p: Qr2
    q: Qr2
    r: Qr2
    s: Qr2

    def as_dict(self) -> dict[str, Qr2]:
        return {"p": self.p, "q": self.q, "r": self.r, "s": self.s}

    def __getitem__(self, name: str) -> Qr2:
        return self.as_dict()[name]


@dataclass(frozen=True, slots=True)
class PqrsBasis:
    """P, Q from the coin split plus R = [[c, d], [0, 0]] and S = [[0, 0], [a, b]]."""
    P: Mat2
    Q: Mat2
    R: Mat2
    S: Mat2

    def elements(self) -> dict[str, Mat2]:
        return {"P": self.P, "Q": self.Q, "R": self.R, "S": self.S}

    @property
    def is_orthonormal(self) -> bool:
        items = list(self.elements().values())
        return all(
            x.inner(y) == (1 if i == j else 0)
            for i, x in enumerate(items)
            for j, y in enumerate(items)
        )


def pqrs_basis(coin: Mat2) -> PqrsBasis:
    P, Q = coin_split(coin)
    return PqrsBasis(
        P=P,
        Q=Q,
        R=Mat2(coin.c, coin.d, ZERO, ZERO),
        S=Mat2(ZERO, ZERO, coin.a, coin.b),
    )


HADAMARD = Mat2(INV_SQRT2, INV_SQRT2, INV_SQRT2, -INV_SQRT2)
HADAMARD_BASIS = pqrs_basis(HADAMARD)


def pqrs_decompose(matrix: Mat2, basis: PqrsBasis = HADAMARD_BASIS) -> PqrsCoeffs:
    """Coordinates of ``matrix`` via the trace inner product.

    Only meaningful for an orthonormal basis (any real orthogonal coin).
    """
    if basis is not HADAMARD_BASIS and not basis.is_orthonormal:
        raise ParameterError("PQRS decomposition needs an orthonormal basis")
    return PqrsCoeffs(
        p=basis.P.inner(matrix),
        q=basis.Q.inner(matrix),
        r=basis.R.inner(matrix),
        s=basis.S.inner(matrix),
    )


def pqrs_compose(coeffs: PqrsCoeffs, basis: PqrsBasis = HADAMARD_BASIS) -> Mat2:
    return (
        basis.P * coeffs.p
        + basis.Q * coeffs.q
        + basis.R * coeffs.r
        + basis.S * coeffs.s
    )


# Row X, column Y: X @ Y == coin_entry * basis element, e.g. PQ = bR.
MULTIPLICATION_TABLE: dict[tuple[str, str], tuple[str, str]] = {
    ("P", "P"): ("a", "P"), ("P", "Q"): ("b", "R"), ("P", "R"): ("a", "R"), ("P", "S"): ("b", "P"),
    ("Q", "P"): ("c", "S"), ("Q", "Q"): ("d", "Q"), ("Q", "R"): ("c", "Q"), ("Q", "S"): ("d", "S"),
    ("R", "P"): ("c", "P"), ("R", "Q"): ("d", "R"), ("R", "R"): ("c", "R"), ("R", "S"): ("d", "P"),
    ("S", "P"): ("a", "S"), ("S", "Q"): ("b", "Q"), ("S", "R"): ("a", "Q"), ("S", "S"): ("b", "S"),
}


def coin_entry(coin: Mat2, name: str) -> Qr2:
    return {"a": coin.a, "b": coin.b, "c": coin.c, "d": coin.d}[name]


def multiplication_table(coin: Mat2) -> dict[tuple[str, str], Mat2]:
    """The 16 products X @ Y predicted by the table, evaluated for ``coin``."""
    elements = pqrs_basis(coin).elements()
    return {
        pair: elements[target] * coin_entry(coin, entry)
        for pair, (entry, target) in MULTIPLICATION_TABLE.items()
    }
