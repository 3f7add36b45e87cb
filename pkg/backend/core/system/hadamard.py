"""
Hadamard systems (R, B, L): validation, the associated complex Hadamard
matrix, and the matrix closure operations (row/column permutation, row phase,
tensor product).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from backend.core.algebra import (
    RMatrix, RVector, RationalLike, as_vector, integrality_forever, is_expansive,
    parse_rational, reduced_angle
)
from backend.models.results import Side
from backend.utils.config import HADAMARD_MODULUS_TOL, UNITARITY_TOL
from backend.utils.exceptions import (
    ExpansivenessUndecidedError, InvalidSystemError, MalformedSystemError,
    SingularMatrixError, ValidationError
)
from backend.utils.formatting import format_float, format_point
from backend.utils.logging import get_logger

logger = get_logger("system.hadamard")

MatrixLike = Union[RMatrix, RationalLike, Sequence[Sequence[RationalLike]]]
DigitsLike = Sequence[Union[RVector, RationalLike, Sequence[RationalLike]]]


@dataclass(frozen=True)
class HadamardSystem:
    """
    A validated triple (R, B, L).

    Instances come out of validate(); constructing one directly skips every
    check, which the tests use to build deliberately broken systems.
    """
    R: RMatrix
    B: Tuple[RVector, ...]
    L: Tuple[RVector, ...]
    name: Optional[str] = None

    @property
    def N(self) -> int:
        return len(self.B)

    @property
    def d(self) -> int:
        return self.R.dim

    def scale(self, side: Side) -> RMatrix:
        """Scale matrix for a side: R^T for mu_B, R for mu_L."""
        return self.R.transpose() if side is Side.B else self.R

    def measure_digits(self, side: Side) -> Tuple[RVector, ...]:
        """Digits of the measure, which is also the set tested for extremality."""
        return self.B if side is Side.B else self.L

    def frequency_digits(self, side: Side) -> Tuple[RVector, ...]:
        """Digits building the candidate spectrum and driving the dual cycles."""
        return self.L if side is Side.B else self.B

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "R": [[str(a) for a in row] for row in self.R.rows],
            "B": [format_point(b) for b in self.B],
            "L": [format_point(l) for l in self.L],
        }


@dataclass(frozen=True)
class ValidationFailure:
    check: str
    detail: str
    pair: Optional[Tuple[str, str]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"check": self.check, "detail": self.detail, "pair": list(self.pair) if self.pair else None}


@dataclass
class ValidationReport:
    """Outcome of validate(); failures are data, never exceptions."""
    failures: List[ValidationFailure] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    system: Optional[HadamardSystem] = None
    max_unitarity_deviation: Optional[float] = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def require(self) -> HadamardSystem:
        """
        Return the validated system.

        Raises:
            InvalidSystemError: If any check failed
        """
        if not self.ok or self.system is None:
            checks = ", ".join(sorted({f.check for f in self.failures}))
            raise InvalidSystemError(f"System failed validation: {checks}", failures=self.failures)
        return self.system

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "failures": [f.to_dict() for f in self.failures],
            "notes": list(self.notes),
            "max_unitarity_deviation": (
                format_float(self.max_unitarity_deviation)
                if self.max_unitarity_deviation is not None else None
            ),
            "system": self.system.to_dict() if self.system else None,
        }


def coerce_matrix(R: MatrixLike) -> RMatrix:
    """Accept an RMatrix, a scalar (dimension one) or nested rows."""
    if isinstance(R, RMatrix):
        return R
    try:
        if isinstance(R, (list, tuple)):
            return RMatrix.from_rows(R)
        return RMatrix.scalar(parse_rational(R))
    except ValidationError as e:
        raise MalformedSystemError(f"Bad scale matrix {R!r}: {e}") from e


def coerce_digits(digits: DigitsLike, dim: int) -> Tuple[RVector, ...]:
    """
    Convert a digit list to RVectors of the given dimension.

    Raises:
        MalformedSystemError: If a digit has the wrong dimension
    """
    vectors = []
    for raw in digits:
        try:
            vector = as_vector(raw)
        except ValidationError as e:
            raise MalformedSystemError(f"Bad digit {raw!r}: {e}") from e
        if vector.dim != dim:
            raise MalformedSystemError(
                f"Digit {format_point(vector)} has dimension {vector.dim}, expected {dim}"
            )
        vectors.append(vector)
    return tuple(vectors)


def _phase_matrix(R: RMatrix, B: Sequence[RVector], L: Sequence[RVector]) -> np.ndarray:
    inverse = R.inverse()
    scaled_rows = [inverse @ b for b in B]
    angles = np.array(
        [[float(reduced_angle(rb.dot(l))) for l in L] for rb in scaled_rows],
        dtype=float,
    )
    return np.exp(2j * np.pi * angles) / np.sqrt(len(B))


def unitarity_deviation(M: np.ndarray) -> float:
    """Largest entry of |M* M - I|."""
    size = M.shape[0]
    return float(np.max(np.abs(M.conj().T @ M - np.eye(size))))


def is_unitary(M: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return unitarity_deviation(M) < tol


def is_hadamard(M: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    """Unitary with every entry of modulus 1/sqrt(N)."""
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    modulus = 1.0 / np.sqrt(M.shape[0])
    if np.max(np.abs(np.abs(M) - modulus)) >= HADAMARD_MODULUS_TOL:
        return False
    return is_unitary(M, tol)


def _duplicates(digits: Sequence[RVector]) -> List[RVector]:
    seen = set()
    repeated = []
    for d in digits:
        if d in seen and d not in repeated:
            repeated.append(d)
        seen.add(d)
    return repeated


def validate(R: MatrixLike, B: DigitsLike, L: DigitsLike, name: Optional[str] = None) -> ValidationReport:
    """
    Run every Hadamard-system check on a triple.

    Args:
        R: Scale matrix (scalar accepted in dimension one)
        B: Digit set of mu_B
        L: Digit set of mu_L
        name: Optional label carried by the resulting system

    Returns:
        ValidationReport, with report.system set when every check passed

    Raises:
        MalformedSystemError: If dimensions are inconsistent or a set is empty
    """
    matrix = coerce_matrix(R)
    dim = matrix.dim
    B_vectors = coerce_digits(B, dim)
    L_vectors = coerce_digits(L, dim)
    if not B_vectors or not L_vectors:
        raise MalformedSystemError("Digit sets B and L must be non-empty")

    report = ValidationReport()
    failures = report.failures

    if not matrix.is_integer():
        failures.append(ValidationFailure("integer_matrix", f"R = {matrix} has non-integer entries"))

    try:
        if not is_expansive(matrix):
            failures.append(ValidationFailure("expansive", f"R = {matrix} has an eigenvalue of modulus <= 1"))
    except SingularMatrixError:
        failures.append(ValidationFailure("expansive", f"R = {matrix} is singular"))
    except ExpansivenessUndecidedError as e:
        failures.append(ValidationFailure("expansive", f"Expansiveness undecided: {e}"))

    zero = RVector.zero(dim)
    for label, digits in (("B", B_vectors), ("L", L_vectors)):
        if zero not in digits:
            failures.append(ValidationFailure(f"zero_in_{label}", f"0 is not a digit of {label}"))
        for d in _duplicates(digits):
            failures.append(ValidationFailure(f"duplicates_{label}", f"Digit {format_point(d)} repeats in {label}"))

    if len(B_vectors) != len(L_vectors):
        failures.append(ValidationFailure(
            "cardinality", f"#B = {len(B_vectors)} but #L = {len(L_vectors)}"
        ))

    if matrix.is_integer():
        for b in B_vectors:
            for l in L_vectors:
                if not integrality_forever(matrix, b, l):
                    failures.append(ValidationFailure(
                        "integrality",
                        "R^k b.l is not an integer for some k >= 0",
                        (format_point(b), format_point(l)),
                    ))

    if len(B_vectors) == len(L_vectors) and matrix.determinant() != 0:
        H = _phase_matrix(matrix, B_vectors, L_vectors)
        deviation = unitarity_deviation(H)
        report.max_unitarity_deviation = deviation
        if deviation >= UNITARITY_TOL:
            failures.append(ValidationFailure(
                "unitarity", f"max |H*H - I| = {format_float(deviation)} exceeds {UNITARITY_TOL}"
            ))

    if not all(b.is_integer() for b in B_vectors):
        report.notes.append("B is not contained in Z^d")

    if report.ok:
        report.system = HadamardSystem(matrix, B_vectors, L_vectors, name)
        logger.info(f"Validated system {name or '(unnamed)'}: d={dim}, N={len(B_vectors)}")
    else:
        logger.debug(f"Validation failed with {len(failures)} failure(s)")
    return report


def hadamard_matrix(system: HadamardSystem) -> np.ndarray:
    """(1/sqrt(N)) exp(2 pi i R^{-1} b . l), rows indexed by B and columns by L."""
    return _phase_matrix(system.R, system.B, system.L)


def fourier_matrix(N: int) -> np.ndarray:
    """Fourier matrix of the cyclic group Z_N."""
    if N <= 0:
        raise ValidationError(f"N must be positive, got {N}")
    j = np.arange(N)
    angles = (np.outer(j, j) % N) / N
    return np.exp(2j * np.pi * angles) / np.sqrt(N)


def _as_matrix(value: Union[HadamardSystem, np.ndarray]) -> np.ndarray:
    if isinstance(value, HadamardSystem):
        return hadamard_matrix(value)
    M = np.asarray(value, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"Expected a square matrix, got shape {M.shape}")
    return M


def tensor(U: Union[HadamardSystem, np.ndarray], V: Union[HadamardSystem, np.ndarray]) -> np.ndarray:
    """
    Tensor product U (x) V with e_j (x) f_k indexed by j + N k.

    The first factor's index varies fastest, which in numpy's Kronecker
    convention is kron(V, U).
    """
    return np.kron(_as_matrix(V), _as_matrix(U))


def _check_permutation(permutation: Sequence[int], size: int) -> List[int]:
    perm = [int(i) for i in permutation]
    if sorted(perm) != list(range(size)):
        raise ValidationError(f"{list(permutation)} is not a permutation of 0..{size - 1}")
    return perm


def _require_hadamard(M: np.ndarray, operation: str) -> np.ndarray:
    if not is_hadamard(M):
        raise ValidationError(f"{operation} produced a matrix that is not Hadamard")
    return M


def permute_rows(M: np.ndarray, permutation: Sequence[int]) -> np.ndarray:
    """
    Row i of the result is row permutation[i] of M.

    Raises:
        ValidationError: If permutation is not a permutation or the result is not Hadamard
    """
    M = _as_matrix(M)
    return _require_hadamard(M[_check_permutation(permutation, M.shape[0]), :], "permute_rows")


def permute_cols(M: np.ndarray, permutation: Sequence[int]) -> np.ndarray:
    """Column j of the result is column permutation[j] of M."""
    M = _as_matrix(M)
    return _require_hadamard(M[:, _check_permutation(permutation, M.shape[1])], "permute_cols")


def phase_row(M: np.ndarray, row: int, phase: complex) -> np.ndarray:
    """
    Multiply one row by a unimodular phase.

    Raises:
        ValidationError: If the row is out of range, |phase| != 1, or the
            result is not Hadamard
    """
    M = _as_matrix(M).copy()
    if not 0 <= row < M.shape[0]:
        raise ValidationError(f"Row {row} out of range for a {M.shape[0]}x{M.shape[0]} matrix")
    if abs(abs(phase) - 1.0) >= HADAMARD_MODULUS_TOL:
        raise ValidationError(f"Phase {phase} is not of modulus one")
    M[row, :] *= phase
    return _require_hadamard(M, "phase_row")


def standard_system(N: int, q: int) -> HadamardSystem:
    """
    The system R = qN, B = {0, q, ..., (N-1)q}, L = {0, 1, ..., N-1}.

    Raises:
        ValidationError: If q <= 1 or N < 1
    """
    if q <= 1:
        raise ValidationError(f"q must be greater than 1, got {q}")
    if N < 1:
        raise ValidationError(f"N must be positive, got {N}")
    return validate(q * N, [q * k for k in range(N)], list(range(N)), name=f"standard N={N} q={q}").require()


def row_orthogonality_factors(system: HadamardSystem) -> Dict[Tuple[str, str], float]:
    """
    |chi_L(R^{-1}(b - beta))| for every ordered pair of distinct digits of B.

    These vanish exactly when the rows of the Hadamard matrix are orthogonal.
    """
    inverse = system.R.inverse()
    factors = {}
    for b in system.B:
        for beta in system.B:
            if b == beta:
                continue
            x = inverse @ (b - beta)
            total = sum(np.exp(2j * np.pi * float(reduced_angle(l.dot(x)))) for l in system.L)
            factors[(format_point(b), format_point(beta))] = float(abs(total) / system.N)
    return factors
