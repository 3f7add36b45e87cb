"""
Exact rational scalars, vectors and matrices.
Every cycle point, digit and scale matrix in the toolkit lives in these types;
floating point only appears in the expansiveness fast path and in callers
that exponentiate already-reduced angles.
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from backend.utils.config import (
    EIGENVALUE_MARGIN, EXPANSIVE_POWER_CAP, INTEGRALITY_STATE_CAP, INVERSE_POWER_CACHE_SIZE,
    TAIL_POWER_CAP
)
from backend.utils.exceptions import (
    ExpansivenessUndecidedError, IterationCapError, NonIntegerMatrixError,
    NotExpansiveError, SingularMatrixError, ValidationError
)
from backend.utils.logging import get_logger

logger = get_logger("algebra")

Rational = Fraction
RationalLike = Union[int, Fraction, str, float]


def parse_rational(value: RationalLike) -> Fraction:
    """
    Convert an integer, Fraction, "num/den" string or decimal string to a Fraction.

    Floats are converted exactly (their binary value), so no rounding happens here.

    Args:
        value: The value to convert

    Returns:
        The exact rational value

    Raises:
        ValidationError: If the value cannot be read as a rational number
    """
    if isinstance(value, bool):
        raise ValidationError(f"Boolean {value!r} is not a rational number")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValidationError(f"Non-finite value {value!r} is not a rational number")
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"Cannot read {value!r} as a rational number") from e
    raise ValidationError(f"Unsupported rational value of type {type(value).__name__}")


@dataclass(frozen=True, order=True)
class RVector:
    """Exact rational vector of fixed dimension; ordering is lexicographic."""
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(parse_rational(x) for x in self.entries))

    @classmethod
    def of(cls, *values: RationalLike) -> "RVector":
        return cls(tuple(values))

    @classmethod
    def zero(cls, dim: int) -> "RVector":
        return cls((Fraction(0),) * dim)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> Fraction:
        return self.entries[index]

    def _check_dim(self, other: "RVector") -> None:
        if other.dim != self.dim:
            raise ValidationError(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "RVector") -> "RVector":
        self._check_dim(other)
        return RVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RVector") -> "RVector":
        self._check_dim(other)
        return RVector(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RVector":
        return RVector(tuple(-a for a in self.entries))

    def scaled(self, factor: RationalLike) -> "RVector":
        c = parse_rational(factor)
        return RVector(tuple(c * a for a in self.entries))

    def dot(self, other: "RVector") -> Fraction:
        self._check_dim(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def is_integer(self) -> bool:
        return all(a.denominator == 1 for a in self.entries)

    def sup_norm(self) -> Fraction:
        return max((abs(a) for a in self.entries), default=Fraction(0))

    def l1_norm(self) -> Fraction:
        return sum((abs(a) for a in self.entries), Fraction(0))

    def to_numpy(self) -> np.ndarray:
        return np.array([float(a) for a in self.entries], dtype=float)

    def __str__(self) -> str:
        if self.dim == 1:
            return str(self.entries[0])
        return "(" + ",".join(str(a) for a in self.entries) + ")"


def as_vector(value: Union[RVector, Sequence[RationalLike], RationalLike]) -> RVector:
    """Coerce a scalar or a sequence of rationals to an RVector."""
    if isinstance(value, RVector):
        return value
    if isinstance(value, (list, tuple, np.ndarray)):
        return RVector(tuple(parse_rational(x.item() if isinstance(x, np.generic) else x) for x in value))
    return RVector((parse_rational(value),))


@dataclass(frozen=True)
class RMatrix:
    """Exact rational square matrix."""
    rows: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rational(x) for x in row) for row in self.rows)
        size = len(rows)
        if size == 0 or any(len(row) != size for row in rows):
            raise ValidationError("RMatrix must be a non-empty square array")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]]) -> "RMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, dim: int) -> "RMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)))

    @classmethod
    def scalar(cls, value: RationalLike, dim: int = 1) -> "RMatrix":
        c = parse_rational(value)
        return cls(tuple(tuple(c if i == j else Fraction(0) for j in range(dim)) for i in range(dim)))

    @classmethod
    def diagonal(cls, values: Sequence[RationalLike]) -> "RMatrix":
        dim = len(values)
        return cls(tuple(
            tuple(parse_rational(values[i]) if i == j else Fraction(0) for j in range(dim))
            for i in range(dim)
        ))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def transpose(self) -> "RMatrix":
        return RMatrix(tuple(zip(*self.rows)))

    def __matmul__(self, other: Union["RMatrix", RVector]) -> Union["RMatrix", RVector]:
        if isinstance(other, RVector):
            if other.dim != self.dim:
                raise ValidationError(f"Dimension mismatch: matrix {self.dim} vs vector {other.dim}")
            return RVector(tuple(
                sum((a * x for a, x in zip(row, other.entries)), Fraction(0)) for row in self.rows
            ))
        if other.dim != self.dim:
            raise ValidationError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        cols = list(zip(*other.rows))
        return RMatrix(tuple(
            tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
            for row in self.rows
        ))

    def __add__(self, other: "RMatrix") -> "RMatrix":
        return RMatrix(tuple(
            tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        return RMatrix(tuple(
            tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows)
        ))

    def scaled(self, factor: RationalLike) -> "RMatrix":
        c = parse_rational(factor)
        return RMatrix(tuple(tuple(c * a for a in row) for row in self.rows))

    def determinant(self) -> Fraction:
        """Exact determinant by fraction-preserving Gaussian elimination."""
        a = [list(row) for row in self.rows]
        n = self.dim
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            for r in range(col + 1, n):
                factor = a[r][col] / a[col][col]
                if factor:
                    for c in range(col, n):
                        a[r][c] -= factor * a[col][c]
        return det

    def inverse(self) -> "RMatrix":
        """
        Exact inverse by Gauss-Jordan elimination.

        Raises:
            SingularMatrixError: If the matrix is singular
        """
        return _inverse(self)

    def power(self, k: int) -> "RMatrix":
        """Integer power; negative exponents go through the exact inverse."""
        if k < 0:
            return inverse_powers(self, -k)[-1]
        result = RMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_integer(self) -> bool:
        return all(a.denominator == 1 for row in self.rows for a in row)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def row_sum_norm(self) -> Fraction:
        """Max-row-sum norm, the operator norm induced by the sup norm."""
        return max(sum((abs(a) for a in row), Fraction(0)) for row in self.rows)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(a) for a in row] for row in self.rows], dtype=float)

    def to_int_rows(self) -> List[List[int]]:
        if not self.is_integer():
            raise NonIntegerMatrixError(f"Matrix {self} has non-integer entries")
        return [[int(a) for a in row] for row in self.rows]

    def __str__(self) -> str:
        if self.dim == 1:
            return str(self.rows[0][0])
        return "[" + "; ".join(" ".join(str(a) for a in row) for row in self.rows) + "]"


@lru_cache(maxsize=256)
def _inverse(matrix: RMatrix) -> RMatrix:
    n = matrix.dim
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix.rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"Matrix {matrix} is singular")
        a[col], a[pivot] = a[pivot], a[col]
        pivot_value = a[col][col]
        a[col] = [x / pivot_value for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return RMatrix(tuple(tuple(row[n:]) for row in a))


_inverse_power_lock = threading.Lock()


@lru_cache(maxsize=INVERSE_POWER_CACHE_SIZE)
def _power_list(matrix: RMatrix) -> List[RMatrix]:
    return []


def inverse_powers(matrix: RMatrix, count: int) -> List[RMatrix]:
    """
    Return [M^{-1}, M^{-2}, ..., M^{-count}].

    Powers are kept for the INVERSE_POWER_CACHE_SIZE most recently used
    matrices.

    Raises:
        SingularMatrixError: If the matrix is singular
    """
    if count <= 0:
        return []
    with _inverse_power_lock:
        powers = _power_list(matrix)
        if len(powers) < count:
            inv = matrix.inverse()
            current = powers[-1] if powers else RMatrix.identity(matrix.dim)
            while len(powers) < count:
                current = current @ inv
                powers.append(current)
        return powers[:count]


def is_expansive(matrix: RMatrix) -> bool:
    """
    Decide whether every eigenvalue of the matrix has modulus greater than one.

    A floating-point eigenvalue check runs first; a clear non-expansive verdict
    returns immediately. Otherwise the exact norms ||M^{-k}|| are computed for
    k = 1, 2, ... until one drops below one, which proves expansiveness.

    Args:
        matrix: Square nonsingular matrix

    Returns:
        True iff the matrix is expansive

    Raises:
        SingularMatrixError: If the matrix is singular
        ExpansivenessUndecidedError: If the exact and floating checks disagree
    """
    if matrix.determinant() == 0:
        raise SingularMatrixError(f"Matrix {matrix} is singular")

    min_modulus = float(np.min(np.abs(np.linalg.eigvals(matrix.to_numpy()))))
    if min_modulus < 1.0 - EIGENVALUE_MARGIN:
        logger.debug(f"Eigenvalue fast path: min |lambda| = {min_modulus:.12g}, not expansive")
        return False

    for k, power in enumerate(inverse_powers(matrix, EXPANSIVE_POWER_CAP), start=1):
        if power.row_sum_norm() < 1:
            if min_modulus < 1.0:
                raise ExpansivenessUndecidedError(
                    f"||M^-{k}|| < 1 but floating eigenvalue modulus is {min_modulus:.12g}"
                )
            logger.debug(f"Expansive: ||M^-{k}|| = {power.row_sum_norm()} < 1")
            return True

    if min_modulus <= 1.0 + EIGENVALUE_MARGIN:
        return False
    raise ExpansivenessUndecidedError(
        f"No inverse power up to {EXPANSIVE_POWER_CAP} has norm below 1, "
        f"but the smallest eigenvalue modulus is {min_modulus:.12g}"
    )


@lru_cache(maxsize=4096)
def contraction_tail_bound(matrix: RMatrix, K: int) -> Fraction:
    """
    Upper bound for the sum of ||M^{-k}|| over k > K (max-row-sum norm).

    With j the first exponent for which q = ||M^{-j}|| < 1, submultiplicativity
    gives ||M^{-(K+i+mj)}|| <= ||M^{-(K+i)}|| q^m, so the tail is bounded by
    (||M^{-(K+1)}|| + ... + ||M^{-(K+j)}||) / (1 - q). For a scalar matrix
    j = 1 and the bound is the exact geometric sum.

    Args:
        matrix: Expansive matrix
        K: Number of leading terms excluded from the sum (K >= 0)

    Returns:
        Exact rational upper bound

    Raises:
        NotExpansiveError: If no inverse power contracts within the cap
    """
    if K < 0:
        raise ValidationError(f"K must be non-negative, got {K}")
    j, q = _contraction_period(matrix)
    powers = inverse_powers(matrix, K + j)
    head = sum((p.row_sum_norm() for p in powers[K:K + j]), Fraction(0))
    return head / (1 - q)


@lru_cache(maxsize=256)
def _contraction_period(matrix: RMatrix) -> Tuple[int, Fraction]:
    for j, power in enumerate(inverse_powers(matrix, TAIL_POWER_CAP), start=1):
        q = power.row_sum_norm()
        if q < 1:
            return j, q
    raise NotExpansiveError(f"Matrix {matrix} has no contracting inverse power up to {TAIL_POWER_CAP}")


def _lcm_of_denominators(vector: RVector) -> int:
    return math.lcm(*(a.denominator for a in vector.entries)) if vector.dim else 1


def integrality_forever(R: RMatrix, b: RVector, l: RVector) -> bool:
    """
    Decide R^k b . l in Z for every k >= 0.

    With e and D the common denominators of b and l, the condition reads
    (R^k (e b)) . (D l) = 0 mod eD. The residues R^k (e b) mod eD live in a
    finite set, so the orbit is eventually periodic and every visited state is
    checked once.

    Args:
        R: Integer matrix
        b: Rational vector
        l: Rational vector

    Returns:
        True iff the dot product is an integer for all k

    Raises:
        NonIntegerMatrixError: If R has non-integer entries
        IterationCapError: If the orbit exceeds the sanity cap
    """
    rows = R.to_int_rows()
    e = _lcm_of_denominators(b)
    D = _lcm_of_denominators(l)
    modulus = e * D
    if modulus == 1:
        return True

    u = tuple(int(x * e) % modulus for x in b.entries)
    v = tuple(int(x * D) for x in l.entries)

    seen = set()
    state = u
    while state not in seen:
        if sum(a * c for a, c in zip(state, v)) % modulus != 0:
            return False
        seen.add(state)
        if len(seen) > INTEGRALITY_STATE_CAP:
            raise IterationCapError(f"Integrality orbit exceeded {INTEGRALITY_STATE_CAP} states")
        state = tuple(sum(r * s for r, s in zip(row, state)) % modulus for row in rows)
    return True


def reduced_angle(angle: Fraction) -> Fraction:
    """Reduce an exact angle (in turns) to [0, 1)."""
    return angle - math.floor(angle)
