"""
Walk Paths — operator-valued path sums of the Hadamard walk.

The DP runs over (time n, position y, sojourn count k). An interval
from -> to is counted as "positive" when max(from, to) >= 1, and later
steps multiply on the LEFT: the path 0 -> -1 -> 0 contributes QP.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator

from loguru import logger

from core.errors import InvalidStateError, ParameterError
from core.exact_ring import (
    HADAMARD,
    INV_SQRT2,
    ONE,
    ZERO,
    ComplexQr2,
    Mat2,
    Qr2,
    coin_split,
    mat2_mul,
)


def interval_counted(src: int, dst: int) -> int:
    """1 if the step src -> dst spends its interval on the positive side."""
    return 1 if max(src, dst) >= 1 else 0


@dataclass
class SojournTable:
    """Path sums M_n(y, k) from a fixed start, for n = 0..n_max.

    Only the reachable light cone is stored; everything else is O.
    """
    start: int
    n_max: int
    entries: dict[tuple[int, int, int], Mat2] = field(default_factory=dict)

    def operator(self, n: int, y: int, k: int) -> Mat2:
        """Psi^{start -> y}_n(k)."""
        return self.entries.get((n, y, k), Mat2.zero())

    def layer(self, n: int) -> Iterator[tuple[int, int, Mat2]]:
        """All stored (y, k, matrix) at time n, sorted by (y, k)."""
        self._check_depth(n)
        for (m, y, k) in sorted(key for key in self.entries if key[0] == n):
            yield y, k, self.entries[(m, y, k)]

    def psi(self, n: int, k: int) -> Mat2:
        """Psi^x_n(k): sum over every endpoint of the time-n slice."""
        self._check_depth(n)
        if k < 0 or k > n:
            return Mat2.zero()
        total = Mat2.zero()
        for y in range(self.start - n, self.start + n + 1):
            matrix = self.entries.get((n, y, k))
            if matrix is not None:
                total = total + matrix
        return total

    def propagator(self, n: int, y: int) -> Mat2:
        """Unrestricted n-step path sum from start to y (sum over k)."""
        self._check_depth(n)
        total = Mat2.zero()
        for k in range(n + 1):
            matrix = self.entries.get((n, y, k))
            if matrix is not None:
                total = total + matrix
        return total

    def positions(self, n: int) -> range:
        return range(self.start - n, self.start + n + 1)

    def _check_depth(self, n: int) -> None:
        if n < 0 or n > self.n_max:
            raise ParameterError(f"Time {n} outside table depth 0..{self.n_max}")


def evolve_sojourn_table(x0: int, n_max: int, coin: Mat2 = HADAMARD) -> SojournTable:
    """Build M_n(y, k) for 0 <= n <= n_max by pushing each path one step.

    M_0(x0, 0) = I and M_{n+1}(y, k) = P M_n(y+1, k - c(y+1, y)) + Q M_n(y-1, k - c(y-1, y)).
    """
    if n_max < 0:
        raise ParameterError(f"n_max must be non-negative, got {n_max}")

    P, Q = coin_split(coin)
    table = SojournTable(start=x0, n_max=n_max)
    layer: dict[tuple[int, int], Mat2] = {(x0, 0): Mat2.identity()}
    table.entries[(0, x0, 0)] = Mat2.identity()

    for n in range(1, n_max + 1):
        nxt: dict[tuple[int, int], Mat2] = {}
        for (y, k), matrix in layer.items():
            for dst, step in ((y - 1, P), (y + 1, Q)):
                key = (dst, k + interval_counted(y, dst))
                moved = step @ matrix
                nxt[key] = nxt[key] + moved if key in nxt else moved
        for (y, k), matrix in nxt.items():
            table.entries[(n, y, k)] = matrix
        layer = nxt

    logger.debug(f"Sojourn table built | start={x0} n_max={n_max} entries={len(table.entries)}")
    return table


@lru_cache(maxsize=64)
def sojourn_table(x0: int, n_max: int) -> SojournTable:
    """Cached Hadamard table; callers must treat it as read-only."""
    return evolve_sojourn_table(x0, n_max)


def psi(x: int, n: int, k: int) -> Mat2:
    return sojourn_table(x, n).psi(n, k)


def gamma(n: int, k: int) -> Mat2:
    """Gamma_n(k) = Psi^{0 -> 0}_n(k)."""
    return sojourn_table(0, n).operator(n, 0, k)


def brute_force_table(x0: int, n: int, coin: Mat2 = HADAMARD) -> dict[tuple[int, int], Mat2]:
    """Enumerate all 2^n step sequences; (endpoint, k) -> ordered product sum.

    Independent of the DP: each path is walked explicitly and its matrices
    are multiplied in time order, later steps on the left.
    """
    if n < 0:
        raise ParameterError(f"Path length must be non-negative, got {n}")
    P, Q = coin_split(coin)
    sums: dict[tuple[int, int], Mat2] = {}
    for steps in product((-1, 1), repeat=n):
        position, count, path = x0, 0, Mat2.identity()
        for step in steps:
            nxt = position + step
            count += interval_counted(position, nxt)
            path = mat2_mul(P if step < 0 else Q, path)
            position = nxt
        key = (position, count)
        sums[key] = sums[key] + path if key in sums else path
    return sums


# --- Qubit states and position distributions ---

@dataclass(frozen=True)
class QubitState:
    """Initial chirality state [alpha, beta] with complex Q[sqrt(2)] amplitudes."""
    alpha: ComplexQr2
    beta: ComplexQr2

    @classmethod
    def from_parts(cls, a_re, a_im, b_re, b_im) -> QubitState:
        return cls(
            ComplexQr2(Qr2.coerce(a_re), Qr2.coerce(a_im)),
            ComplexQr2(Qr2.coerce(b_re), Qr2.coerce(b_im)),
        )

    @classmethod
    def parse(cls, text: str) -> QubitState:
        """Parse ``"a_re,a_im,b_re,b_im"`` of exact strings."""
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"State needs four comma-separated components, got {text!r}")
        return cls.from_parts(*parts)

    def norm2(self) -> Qr2:
        return self.alpha.abs2() + self.beta.abs2()

    @property
    def is_unit(self) -> bool:
        return self.norm2() == ONE

    def require_unit(self) -> QubitState:
        if not self.is_unit:
            raise InvalidStateError(f"|alpha|^2 + |beta|^2 = {self.norm2()}, expected 1")
        return self

    def cross_term(self) -> Qr2:
        """alpha * conj(beta) + conj(alpha) * beta, always real."""
        return (self.alpha * self.beta.conj() + self.alpha.conj() * self.beta).re

    @property
    def is_symmetric(self) -> bool:
        """|alpha| = |beta| = 1/sqrt(2) and a zero cross term."""
        half = Qr2(1, 0) / 2
        return (
            self.alpha.abs2() == half
            and self.beta.abs2() == half
            and not self.cross_term()
        )


PHI_STAR = QubitState(
    alpha=ComplexQr2(INV_SQRT2, ZERO),
    beta=ComplexQr2(ZERO, INV_SQRT2),
)


def output_weight(matrix: Mat2, phi: QubitState) -> Qr2:
    """||matrix phi||^2."""
    top, bottom = matrix.apply(phi.alpha, phi.beta)
    return top.abs2() + bottom.abs2()


def position_distribution(n: int, phi: QubitState = PHI_STAR) -> dict[int, Qr2]:
    """P(X_n = x) = ||Xi_n phi||^2 for the walk started at the origin."""
    phi.require_unit()
    if n < 0:
        raise ParameterError(f"Time must be non-negative, got {n}")
    table = sojourn_table(0, n)
    distribution: dict[int, Qr2] = {}
    for y in range(-n, n + 1, 2):
        distribution[y] = output_weight(table.propagator(n, y), phi)
    return distribution
