"""Dense dual complex matrices and their determinant theory.

The production determinant expands ``det(A_st + A_in ε)`` into the
determinant of the standard part plus, in the ε slot, the sum of ``m``
determinants obtained by swapping one row of ``A_st`` for the matching row
of ``A_in``.  Each of those is an ordinary complex determinant, so the
formula stays valid when ``A_st`` is singular.

Matrices whose arrays have ``dtype=object`` (holding ``int``/``Fraction``)
are "exact": determinants, characteristic polynomials and the tilde
determinants are then computed without rounding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .config import get_tolerances
from .errors import NoCompletion, NotAnEigenpair, NotAppreciable, NotInvertible, ShapeError, SizeLimit
from .scalar import DualComplex, DualReal, as_dual

LEIBNIZ_MAX = 8
SUM_EXPANSION_MAX = 5


def _as_array(data, exact: bool) -> np.ndarray:
    if exact:
        arr = np.array(data, dtype=object)
        return np.vectorize(_exact_number, otypes=[object])(arr) if arr.size else arr
    return np.array(data, dtype=complex)


def _exact_number(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    return x


class DCMatrix:
    """Immutable ``rows x cols`` matrix over the dual complex numbers."""

    __slots__ = ("st", "in_")

    def __init__(self, st, in_=None, *, exact: bool | None = None):
        if exact is None:
            exact = isinstance(st, np.ndarray) and st.dtype == object
        st = _as_array(st, exact)
        if st.ndim != 2:
            raise ShapeError(f"expected a 2-d array, got shape {st.shape}")
        in_ = np.zeros_like(st) if in_ is None else _as_array(in_, exact)
        if in_.shape != st.shape:
            raise ShapeError(f"standard part {st.shape} and infinitesimal part {in_.shape} differ")
        st.setflags(write=False)
        in_.setflags(write=False)
        object.__setattr__(self, "st", st)
        object.__setattr__(self, "in_", in_)

    def __setattr__(self, name, value):
        raise AttributeError("DCMatrix is immutable")

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence) -> DCMatrix:
        if len(entries) != rows * cols:
            raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        ds = [as_dual(e, DualComplex) for e in entries]
        exact = any(isinstance(d.st, Fraction) or isinstance(d.in_, Fraction) for d in ds)
        st = np.array([d.st for d in ds], dtype=object if exact else complex).reshape(rows, cols)
        in_ = np.array([d.in_ for d in ds], dtype=object if exact else complex).reshape(rows, cols)
        return cls(st, in_, exact=exact)

    @classmethod
    def identity(cls, m: int) -> DCMatrix:
        return cls(np.eye(m))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> DCMatrix:
        return cls(np.zeros((rows, cols)))

    @classmethod
    def diag(cls, values: Sequence) -> DCMatrix:
        ds = [as_dual(v, DualComplex) for v in values]
        return cls(np.diag([d.st for d in ds]).astype(complex), np.diag([d.in_ for d in ds]).astype(complex))

    @property
    def shape(self) -> tuple[int, int]:
        return self.st.shape

    @property
    def rows(self) -> int:
        return self.st.shape[0]

    @property
    def cols(self) -> int:
        return self.st.shape[1]

    @property
    def exact(self) -> bool:
        return self.st.dtype == object

    @property
    def entries(self) -> tuple[DualComplex, ...]:
        cast = (lambda x: x) if self.exact else complex
        return tuple(DualComplex(cast(s), cast(i)) for s, i in zip(self.st.ravel(), self.in_.ravel()))

    def __getitem__(self, key):
        i, j = key
        if isinstance(i, int) and isinstance(j, int):
            if self.exact:
                return DualComplex(self.st[i, j], self.in_[i, j])
            return DualComplex(complex(self.st[i, j]), complex(self.in_[i, j]))
        return DCMatrix(np.atleast_2d(self.st[i, j]), np.atleast_2d(self.in_[i, j]), exact=self.exact)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> DCMatrix:
        ix = np.ix_(list(rows), list(cols))
        return DCMatrix(self.st[ix], self.in_[ix], exact=self.exact)

    def __add__(self, other: DCMatrix) -> DCMatrix:
        _same_shape(self, other)
        return DCMatrix(self.st + other.st, self.in_ + other.in_, exact=self.exact and other.exact)

    def __sub__(self, other: DCMatrix) -> DCMatrix:
        _same_shape(self, other)
        return DCMatrix(self.st - other.st, self.in_ - other.in_, exact=self.exact and other.exact)

    def __neg__(self) -> DCMatrix:
        return DCMatrix(-self.st, -self.in_, exact=self.exact)

    def __matmul__(self, other: DCMatrix) -> DCMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return DCMatrix(
            self.st @ other.st,
            self.st @ other.in_ + self.in_ @ other.st,
            exact=self.exact and other.exact,
        )

    def scale(self, alpha) -> DCMatrix:
        a = as_dual(alpha, DualComplex)
        return DCMatrix(a.st * self.st, a.st * self.in_ + a.in_ * self.st, exact=self.exact)

    __rmul__ = scale

    def conj(self) -> DCMatrix:
        return DCMatrix(np.conj(self.st), np.conj(self.in_), exact=self.exact)

    @property
    def T(self) -> DCMatrix:
        return DCMatrix(self.st.T, self.in_.T, exact=self.exact)

    @property
    def H(self) -> DCMatrix:
        return DCMatrix(np.conj(self.st).T, np.conj(self.in_).T, exact=self.exact)

    def to_complex(self) -> DCMatrix:
        if not self.exact:
            return self
        return DCMatrix(self.st.astype(complex), self.in_.astype(complex))

    def is_hermitian(self, tol: float | None = None) -> bool:
        if self.rows != self.cols:
            return False
        tol = 1e-10 if tol is None else tol
        scale = max(1.0, float(np.max(np.abs(self.st.astype(complex)), initial=0.0)))
        return bool(
            np.allclose(self.st, np.conj(self.st).T, atol=tol * scale, rtol=0)
            and np.allclose(self.in_, np.conj(self.in_).T, atol=tol * scale, rtol=0)
        )

    def allclose(self, other: DCMatrix, atol: float = 1e-10) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self.st, other.st, atol=atol, rtol=0) and np.allclose(self.in_, other.in_, atol=atol, rtol=0)
        )

    def __eq__(self, other):
        if not isinstance(other, DCMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.st == other.st) and np.all(self.in_ == other.in_))

    __hash__ = None

    def __repr__(self) -> str:
        return f"DCMatrix(st={self.st.tolist()!r}, in_={self.in_.tolist()!r})"


def _same_shape(a: DCMatrix, b: DCMatrix):
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")


def _require_square(A: DCMatrix) -> int:
    if A.rows != A.cols:
        raise ShapeError(f"square matrix required, got {A.shape}")
    return A.rows


def hstack(*blocks: DCMatrix) -> DCMatrix:
    return DCMatrix(np.hstack([b.st for b in blocks]), np.hstack([b.in_ for b in blocks]))


def block(grid: Sequence[Sequence[DCMatrix]]) -> DCMatrix:
    exact = all(b.exact for row in grid for b in row)
    return DCMatrix(
        np.block([[b.st for b in row] for row in grid]),
        np.block([[b.in_ for b in row] for row in grid]),
        exact=exact,
    )


# complex determinants ------------------------------------------------------


def complex_det(M: np.ndarray):
    """Determinant of a plain complex (or exact) square array by pivoted elimination."""
    n = M.shape[0]
    if n == 0:
        return Fraction(1) if M.dtype == object else 1.0 + 0j
    if M.dtype != object:
        return complex(np.linalg.det(M))
    a = [list(row) for row in M]
    det = Fraction(1)
    for k in range(n):
        p = next((r for r in range(k, n) if a[r][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] / a[k][k]
            if f != 0:
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    return det


def _row_replaced(base: np.ndarray, i: int, row: np.ndarray) -> np.ndarray:
    M = base.copy()
    M[i, :] = row
    return M


# determinants ----------------------------------------------------------------


def det_leibniz(A: DCMatrix) -> DualComplex:
    """Permutation-sum determinant with dual multiplication (oracle path)."""
    m = _require_square(A)
    if m > LEIBNIZ_MAX:
        raise SizeLimit(f"Leibniz expansion limited to m <= {LEIBNIZ_MAX}, got {m}")
    zero = Fraction(0) if A.exact else 0j
    total = DualComplex(zero, zero)
    for perm in itertools.permutations(range(m)):
        inversions = sum(1 for a in range(m) for b in range(a + 1, m) if perm[a] > perm[b])
        term = DualComplex(Fraction(1) if A.exact else 1 + 0j, zero)
        for row, col in enumerate(perm):
            term = term * A[row, col]
        total = total - term if inversions % 2 else total + term
    return total


def det(A: DCMatrix) -> DualComplex:
    """det(A_st) + (sum_i det A(i)) ε, where A(i) swaps in row i of A_in."""
    m = _require_square(A)
    st = complex_det(A.st)
    inf = Fraction(0) if A.exact else 0j
    for i in range(m):
        inf = inf + complex_det(_row_replaced(A.st, i, A.in_[i]))
    return DualComplex(st, inf)


def det_sum_expansion(A: DCMatrix, B: DCMatrix) -> DualComplex:
    """det(A + B) as the sum over matched minors of B times signed complementary minors of A."""
    _same_shape(A, B)
    m = _require_square(A)
    if m > SUM_EXPANSION_MAX:
        raise SizeLimit(f"sum expansion limited to m <= {SUM_EXPANSION_MAX}, got {m}")
    idx = range(m)
    total = DualComplex(0j, 0j)
    for k in range(m + 1):
        for rows in itertools.combinations(idx, k):
            r_rest = [r for r in idx if r not in rows]
            for cols in itertools.combinations(idx, k):
                c_rest = [c for c in idx if c not in cols]
                sign = -1 if (sum(rows) + sum(cols)) % 2 else 1
                minor_b = det(B.submatrix(rows, cols)) if k else DualComplex(1 + 0j, 0j)
                cof_a = det(A.submatrix(r_rest, c_rest)) if k < m else DualComplex(1 + 0j, 0j)
                total = total + minor_b * cof_a * sign
    return total


def det_block_triangular(A: DCMatrix, B: DCMatrix, C: DCMatrix | None = None, D: DCMatrix | None = None) -> DualComplex:
    """det [[A, D], [C, B]] when one of the off-diagonal blocks C (lower) or D (upper) is zero."""
    m = _require_square(A)
    n = _require_square(B)
    if C is not None and D is not None:
        raise ShapeError("give at most one off-diagonal block")
    if C is not None and C.shape != (n, m):
        raise ShapeError(f"lower block must be {n}x{m}, got {C.shape}")
    if D is not None and D.shape != (m, n):
        raise ShapeError(f"upper block must be {m}x{n}, got {D.shape}")
    return det(A) * det(B)


def assemble_block_triangular(A: DCMatrix, B: DCMatrix, C: DCMatrix | None = None, D: DCMatrix | None = None) -> DCMatrix:
    m, n = A.rows, B.rows
    lower = C if C is not None else DCMatrix.zeros(n, m)
    upper = D if D is not None else DCMatrix.zeros(m, n)
    return block([[A, upper], [lower, B]])


def inverse(A: DCMatrix) -> DCMatrix:
    """A_st^{-1} - A_st^{-1} A_in A_st^{-1} ε."""
    _require_square(A)
    A = A.to_complex()
    if abs(complex_det(A.st)) <= get_tolerances().tau_zero:
        raise NotInvertible("standard part is singular")
    try:
        inv_st = np.linalg.inv(A.st)
    except np.linalg.LinAlgError as exc:
        raise NotInvertible("standard part is singular") from exc
    return DCMatrix(inv_st, -inv_st @ A.in_ @ inv_st)


def schur_det(A: DCMatrix, B: DCMatrix, C: DCMatrix, D: DCMatrix) -> DualComplex:
    """det [[A, B], [C, D]] = det(A) det(D - C A^{-1} B)."""
    m = _require_square(A)
    n = _require_square(D)
    if B.shape != (m, n) or C.shape != (n, m):
        raise ShapeError(f"blocks B {B.shape} and C {C.shape} do not conform to A {A.shape}, D {D.shape}")
    return det(A) * det(D - C @ inverse(A) @ B)


# characteristic polynomial ----------------------------------------------


def _interpolate(nodes: Sequence, values: Sequence) -> list:
    """Ascending coefficients of the unique polynomial of degree < len(nodes) through the data."""
    n = len(nodes)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j])
    # expand Newton form into the monomial basis
    zero = coef[0] * 0
    poly = [zero] * n
    for k in range(n - 1, -1, -1):
        shifted = [zero] + poly[:-1]
        poly = [s - nodes[k] * p for s, p in zip(shifted, poly)]
        poly[0] = poly[0] + coef[k]
    return poly


def _horner(coeffs: Sequence, x):
    acc = coeffs[-1] * 0 if len(coeffs) else 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _derivative(coeffs: Sequence) -> list:
    return [k * c for k, c in enumerate(coeffs)][1:]


@dataclass(frozen=True)
class CharPoly:
    """f_A(λ_st + λ_in ε) = g(λ_st) + (λ_in g'(λ_st) + tau(λ_st)) ε, coefficients ascending."""

    g: tuple
    tau: tuple

    @property
    def degree(self) -> int:
        return len(self.g) - 1

    def g_at(self, x):
        return _horner(self.g, x)

    def dg_at(self, x):
        return _horner(_derivative(self.g), x)

    def tau_at(self, x):
        return _horner(self.tau, x)

    def __call__(self, lam) -> DualComplex:
        return charpoly_eval(self, lam)


def _shifted_st(A: DCMatrix, x) -> np.ndarray:
    m = A.rows
    eye = np.eye(m, dtype=object) * Fraction(1) if A.exact else np.eye(m)
    return x * eye - A.st


def _tau_value(A: DCMatrix, x):
    base = _shifted_st(A, x)
    zero = Fraction(0) if A.exact else 0j
    return sum((complex_det(_row_replaced(base, i, -A.in_[i])) for i in range(A.rows)), zero)


def charpoly(A: DCMatrix) -> CharPoly:
    m = _require_square(A)
    nodes = [Fraction(k) for k in range(m + 1)] if A.exact else [float(k) for k in range(m + 1)]
    g = _interpolate(nodes, [complex_det(_shifted_st(A, x)) for x in nodes])
    tau = _interpolate(nodes[:m], [_tau_value(A, x) for x in nodes[:m]])
    return CharPoly(tuple(g), tuple(tau))


def charpoly_eval(f: CharPoly, lam) -> DualComplex:
    lam = as_dual(lam, DualComplex)
    return DualComplex(f.g_at(lam.st), lam.in_ * f.dg_at(lam.st) + f.tau_at(lam.st))


def ai_tilde_det(A: DCMatrix, lam, i: int):
    """det of λI - A with row ``i`` (1-based) taken from the ε part, λ_in on its diagonal."""
    m = _require_square(A)
    if not 1 <= i <= m:
        raise IndexError(f"row index {i} outside 1..{m}")
    lam = as_dual(lam, DualComplex)
    k = i - 1
    base = _shifted_st(A, lam.st)
    row = -A.in_[k].copy()
    row[k] = row[k] + lam.in_
    return complex_det(_row_replaced(base, k, row))


@dataclass(frozen=True)
class CharRoot:
    lambda_st: complex
    kind: Literal["unique", "free", "none"]
    lambda_in: complex | None = None
    multiplicity: int = 1

    @property
    def exists(self) -> bool:
        return self.kind != "none"


def _cluster(values: Sequence[complex], rel: float) -> list[list[complex]]:
    clusters: list[list[complex]] = []
    for v in values:
        for c in clusters:
            center = sum(c) / len(c)
            if abs(v - center) <= rel * max(1.0, abs(center)):
                c.append(v)
                break
        else:
            clusters.append([v])
    return clusters


def char_roots(A: DCMatrix) -> list[CharRoot]:
    """Candidate characteristic roots, one per distinct eigenvalue of A_st."""
    _require_square(A)
    tol = get_tolerances()
    f = charpoly(A)
    A = A.to_complex()
    g = [complex(c) for c in f.g]
    tau = [complex(c) for c in f.tau]
    dg = _derivative(g)
    deriv_tol = tol.tau_deriv * max(1.0, max((abs(c) for c in dg), default=0.0))
    tau_tol = tol.tau_zero * max(1.0, max((abs(c) for c in tau), default=0.0))
    eig = sorted(np.linalg.eigvals(A.st), key=lambda z: (z.real, z.imag))
    roots = []
    for members in _cluster(eig, tol.cluster_rel):
        lam = complex(sum(members) / len(members))
        lam = complex(_snap(lam.real), _snap(lam.imag))
        d = _horner(dg, lam)
        t = _horner(tau, lam)
        if abs(d) > deriv_tol:
            roots.append(CharRoot(lam, "unique", complex(-t / d), len(members)))
        elif abs(t) <= tau_tol:
            roots.append(CharRoot(lam, "free", None, len(members)))
        else:
            roots.append(CharRoot(lam, "none", None, len(members)))
    return roots


def _snap(x: float) -> float:
    # drop rounding residue on components that are zero up to machine precision
    return 0.0 if abs(x) < 1e-13 else x


# eigenpairs ------------------------------------------------------------------


@dataclass(frozen=True)
class EigenCompletion:
    lambda_in: complex
    x_in: np.ndarray
    unique: bool
    residual: float


def _column(x) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(x, DCMatrix):
        if x.cols != 1:
            raise ShapeError(f"expected a column vector, got {x.shape}")
        return x.st[:, 0].astype(complex), x.in_[:, 0].astype(complex)
    ds = [as_dual(v, DualComplex) for v in x]
    return np.array([d.st for d in ds], dtype=complex), np.array([d.in_ for d in ds], dtype=complex)


def complete_eigenpair(A: DCMatrix, lambda_st: complex, x_st, lambda_in: complex | None = None) -> EigenCompletion:
    """Find (λ_in, x_in) making (λ_st + λ_in ε, x_st + x_in ε) an eigenpair of A.

    With ``lambda_in`` given, only x_in is solved for and NoCompletion signals that
    this particular λ_in is not an eigenvalue.
    """
    m = _require_square(A)
    tol = get_tolerances()
    A = A.to_complex()
    x = np.asarray(x_st, dtype=complex).reshape(m)
    scale = max(1.0, float(np.linalg.norm(A.st)))
    if np.linalg.norm(x) <= tol.tau_zero:
        raise NotAppreciable("x_st must be nonzero")
    shifted = A.st - lambda_st * np.eye(m)
    if np.linalg.norm(shifted @ x) > tol.solve_resid * scale * np.linalg.norm(x):
        raise NotAnEigenpair(f"x_st is not an eigenvector of A_st for {lambda_st}")
    rank_shifted = np.linalg.matrix_rank(shifted, tol=tol.solve_resid * scale)
    rank_aug = np.linalg.matrix_rank(np.column_stack([shifted, x]), tol=tol.solve_resid * scale)
    unique = rank_aug > rank_shifted
    if lambda_in is None:
        M = np.column_stack([shifted, -x])
        rhs = -A.in_ @ x
    else:
        M = shifted
        rhs = (lambda_in * np.eye(m) - A.in_) @ x
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=tol.solve_resid)
    resid = float(np.linalg.norm(M @ sol - rhs))
    if resid > tol.solve_resid * max(scale, float(np.linalg.norm(rhs))) * max(1.0, float(np.linalg.norm(x))):
        raise NoCompletion(f"no infinitesimal completion (residual {resid:.3e})")
    if lambda_in is None:
        return EigenCompletion(complex(sol[m]), sol[:m], bool(unique), resid)
    return EigenCompletion(complex(lambda_in), sol, bool(unique), resid)


def dual_frobenius_parts(st: np.ndarray, inf: np.ndarray) -> DualReal:
    """Dual Frobenius norm from real or complex component arrays."""
    n_st = float(np.sqrt(np.sum(np.abs(st) ** 2)))
    if n_st > get_tolerances().tau_zero:
        cross = float(np.sum(np.real(np.conj(st) * inf)))
        return DualReal(n_st, cross / n_st)
    return DualReal(0.0, float(np.sqrt(np.sum(np.abs(inf) ** 2))))


def frobenius(A: DCMatrix) -> DualReal:
    A = A.to_complex()
    return dual_frobenius_parts(A.st, A.in_)


def verify_eigenpair(A: DCMatrix, lam, x) -> DualReal:
    """Dual Frobenius norm of A x - λ x."""
    _require_square(A)
    A = A.to_complex()
    lam = as_dual(lam, DualComplex)
    x_st, x_in = _column(x)
    if np.linalg.norm(x_st) <= get_tolerances().tau_zero:
        raise NotAppreciable("eigenvector must be appreciable")
    r_st = A.st @ x_st - complex(lam.st) * x_st
    r_in = A.st @ x_in + A.in_ @ x_st - complex(lam.st) * x_in - complex(lam.in_) * x_st
    return dual_frobenius_parts(r_st, r_in)
