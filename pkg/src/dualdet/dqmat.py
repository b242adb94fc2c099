"""Dual quaternion matrices and their complex-adjoint representation.

A dual quaternion ``a`` maps to the 2x2 dual complex block
``ω(a) = [[u, v], [-v̄, ū]]`` with ``u = a0 + a1 i`` and ``v = a2 + a3 i``.
The quasi-determinant of a square dual quaternion matrix is the ordinary
dual complex determinant of the blockwise image ``ω̃(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np

from . import _quat as qa
from .config import get_tolerances
from .dcmat import DCMatrix, dual_frobenius_parts
from .dcmat import det as dc_det
from .errors import NotAppreciable, NotInvertible, ShapeError
from .scalar import DualComplex, DualQuaternion, DualReal, Quaternion, as_dual


def _q_array(q: Quaternion) -> np.ndarray:
    return np.array([q.w, q.x, q.y, q.z], dtype=float)


def _q_from(arr) -> Quaternion:
    return Quaternion(*(float(c) for c in arr))


class DQMatrix:
    """Immutable ``rows x cols`` matrix over the dual quaternions.

    ``st`` and ``in_`` are real arrays of shape ``(rows, cols, 4)``.
    """

    __slots__ = ("st", "in_")

    def __init__(self, st, in_=None):
        st = np.array(st, dtype=float)
        if st.ndim != 3 or st.shape[2] != 4:
            raise ShapeError(f"expected an array of shape (rows, cols, 4), got {st.shape}")
        in_ = np.zeros_like(st) if in_ is None else np.array(in_, dtype=float)
        if in_.shape != st.shape:
            raise ShapeError(f"standard part {st.shape} and infinitesimal part {in_.shape} differ")
        st.setflags(write=False)
        in_.setflags(write=False)
        object.__setattr__(self, "st", st)
        object.__setattr__(self, "in_", in_)

    def __setattr__(self, name, value):
        raise AttributeError("DQMatrix is immutable")

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence) -> DQMatrix:
        if len(entries) != rows * cols:
            raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        ds = [as_dual(e, DualQuaternion) for e in entries]
        st = np.array([_q_array(d.st) for d in ds]).reshape(rows, cols, 4)
        in_ = np.array([_q_array(d.in_) for d in ds]).reshape(rows, cols, 4)
        return cls(st, in_)

    @classmethod
    def from_complex(cls, A: DCMatrix) -> DQMatrix:
        """Embed a dual complex matrix (complex numbers as w + x i)."""
        A = A.to_complex()

        def lift(c):
            out = np.zeros(c.shape + (4,))
            out[..., 0] = c.real
            out[..., 1] = c.imag
            return out

        return cls(lift(A.st), lift(A.in_))

    @classmethod
    def identity(cls, m: int) -> DQMatrix:
        return cls(qa.qeye(m))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> DQMatrix:
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def diag(cls, values: Sequence) -> DQMatrix:
        m = len(values)
        ds = [as_dual(v, DualQuaternion) for v in values]
        st = np.zeros((m, m, 4))
        in_ = np.zeros((m, m, 4))
        for i, d in enumerate(ds):
            st[i, i] = _q_array(d.st)
            in_[i, i] = _q_array(d.in_)
        return cls(st, in_)

    @property
    def shape(self) -> tuple[int, int]:
        return self.st.shape[:2]

    @property
    def rows(self) -> int:
        return self.st.shape[0]

    @property
    def cols(self) -> int:
        return self.st.shape[1]

    @property
    def entries(self) -> tuple[DualQuaternion, ...]:
        st = self.st.reshape(-1, 4)
        in_ = self.in_.reshape(-1, 4)
        return tuple(DualQuaternion(_q_from(s), _q_from(i)) for s, i in zip(st, in_))

    def __getitem__(self, key):
        i, j = key
        if isinstance(i, int) and isinstance(j, int):
            return DualQuaternion(_q_from(self.st[i, j]), _q_from(self.in_[i, j]))
        st = self.st[i, j]
        in_ = self.in_[i, j]
        if st.ndim == 2:
            st = st[None, :] if isinstance(i, int) else st[:, None]
            in_ = in_[None, :] if isinstance(i, int) else in_[:, None]
        return DQMatrix(st, in_)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> DQMatrix:
        ix = np.ix_(list(rows), list(cols))
        return DQMatrix(self.st[ix], self.in_[ix])

    def __add__(self, other: DQMatrix) -> DQMatrix:
        _same_shape(self, other)
        return DQMatrix(self.st + other.st, self.in_ + other.in_)

    def __sub__(self, other: DQMatrix) -> DQMatrix:
        _same_shape(self, other)
        return DQMatrix(self.st - other.st, self.in_ - other.in_)

    def __neg__(self) -> DQMatrix:
        return DQMatrix(-self.st, -self.in_)

    def __matmul__(self, other: DQMatrix) -> DQMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return DQMatrix(
            qa.qmatmul(self.st, other.st),
            qa.qmatmul(self.st, other.in_) + qa.qmatmul(self.in_, other.st),
        )

    def lscale(self, alpha) -> DQMatrix:
        """alpha * A (scalar on the left)."""
        a = as_dual(alpha, DualQuaternion)
        s, i = _q_array(a.st), _q_array(a.in_)
        return DQMatrix(qa.qmul(s, self.st), qa.qmul(s, self.in_) + qa.qmul(i, self.st))

    def rscale(self, alpha) -> DQMatrix:
        """A * alpha (scalar on the right)."""
        a = as_dual(alpha, DualQuaternion)
        s, i = _q_array(a.st), _q_array(a.in_)
        return DQMatrix(qa.qmul(self.st, s), qa.qmul(self.st, i) + qa.qmul(self.in_, s))

    @property
    def H(self) -> DQMatrix:
        return DQMatrix(qa.qH(self.st), qa.qH(self.in_))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        if self.rows != self.cols:
            return False
        scale = max(1.0, float(np.max(np.abs(self.st), initial=0.0)))
        return bool(
            np.allclose(self.st, qa.qH(self.st), atol=tol * scale, rtol=0)
            and np.allclose(self.in_, qa.qH(self.in_), atol=tol * scale, rtol=0)
        )

    def is_unitary(self, tol: float = 1e-10) -> bool:
        if self.rows != self.cols:
            return False
        p = self.H @ self
        return bool(
            np.allclose(p.st, qa.qeye(self.rows), atol=tol, rtol=0) and np.allclose(p.in_, 0, atol=tol, rtol=0)
        )

    def allclose(self, other: DQMatrix, atol: float = 1e-10) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self.st, other.st, atol=atol, rtol=0) and np.allclose(self.in_, other.in_, atol=atol, rtol=0)
        )

    def __eq__(self, other):
        if not isinstance(other, DQMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.st == other.st) and np.all(self.in_ == other.in_))

    __hash__ = None

    def __repr__(self) -> str:
        return f"DQMatrix(st={self.st.tolist()!r}, in_={self.in_.tolist()!r})"


def _same_shape(a: DQMatrix, b: DQMatrix):
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")


def _require_square(A: DQMatrix) -> int:
    if A.rows != A.cols:
        raise ShapeError(f"square matrix required, got {A.shape}")
    return A.rows


# ω and the Z subring --------------------------------------------------------


@dataclass(frozen=True)
class ZBlock:
    """[[u, v], [-conj(v), conj(u)]], stored by its first row only."""

    u: DualComplex
    v: DualComplex

    def __add__(self, other: ZBlock) -> ZBlock:
        return ZBlock(self.u + other.u, self.v + other.v)

    def __sub__(self, other: ZBlock) -> ZBlock:
        return ZBlock(self.u - other.u, self.v - other.v)

    def __neg__(self) -> ZBlock:
        return ZBlock(-self.u, -self.v)

    def __mul__(self, other: ZBlock) -> ZBlock:
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return ZBlock(u1 * u2 - v1 * v2.conjugate(), u1 * v2 + v1 * u2.conjugate())

    def adjoint(self) -> ZBlock:
        return ZBlock(self.u.conjugate(), -self.v)

    def det(self) -> DualComplex:
        """u ū + v v̄; real in both parts."""
        return self.u * self.u.conjugate() + self.v * self.v.conjugate()

    def det_st(self) -> float:
        return abs(self.u.st) ** 2 + abs(self.v.st) ** 2

    def inverse(self) -> ZBlock:
        d = self.det()
        if abs(d.st) <= get_tolerances().tau_zero:
            raise NotInvertible("Z block with infinitesimal determinant")
        inv = DualComplex(1 / d.st, -d.in_ / d.st**2)
        return ZBlock(self.u.conjugate() * inv, -(self.v * inv))

    def expand(self) -> DCMatrix:
        u, v = self.u, self.v
        return DCMatrix(
            [[u.st, v.st], [-v.st.conjugate(), u.st.conjugate()]],
            [[u.in_, v.in_], [-v.in_.conjugate(), u.in_.conjugate()]],
        )

    @classmethod
    def identity(cls) -> ZBlock:
        return cls(DualComplex(1 + 0j, 0j), DualComplex(0j, 0j))

    @classmethod
    def zero(cls) -> ZBlock:
        return cls(DualComplex(0j, 0j), DualComplex(0j, 0j))


@dataclass(frozen=True)
class ZBlockMatrix:
    m: int
    n: int
    blocks: tuple[tuple[ZBlock, ...], ...]

    def __post_init__(self):
        if len(self.blocks) != self.m or any(len(r) != self.n for r in self.blocks):
            raise ShapeError(f"block grid does not match {self.m}x{self.n}")

    def __add__(self, other: ZBlockMatrix) -> ZBlockMatrix:
        if (self.m, self.n) != (other.m, other.n):
            raise ShapeError("block grid shape mismatch")
        return ZBlockMatrix(
            self.m, self.n, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.blocks, other.blocks))
        )

    def __matmul__(self, other: ZBlockMatrix) -> ZBlockMatrix:
        if self.n != other.m:
            raise ShapeError("block grid shape mismatch")
        out = []
        for i in range(self.m):
            row = []
            for j in range(other.n):
                acc = ZBlock.zero()
                for k in range(self.n):
                    acc = acc + self.blocks[i][k] * other.blocks[k][j]
                row.append(acc)
            out.append(tuple(row))
        return ZBlockMatrix(self.m, other.n, tuple(out))

    def expand(self) -> DCMatrix:
        st = np.empty((2 * self.m, 2 * self.n), dtype=complex)
        in_ = np.empty_like(st)
        for i, row in enumerate(self.blocks):
            for j, b in enumerate(row):
                e = b.expand()
                st[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = e.st
                in_[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = e.in_
        return DCMatrix(st, in_)


def omega(a) -> ZBlock:
    a = as_dual(a, DualQuaternion)
    s, i = a.st, a.in_
    return ZBlock(DualComplex(complex(s.w, s.x), complex(i.w, i.x)), DualComplex(complex(s.y, s.z), complex(i.y, i.z)))


def omega_inv(Z: ZBlock) -> DualQuaternion:
    u, v = Z.u, Z.v
    return DualQuaternion(
        Quaternion(u.st.real, u.st.imag, v.st.real, v.st.imag),
        Quaternion(u.in_.real, u.in_.imag, v.in_.real, v.in_.imag),
    )


def omega_mat(A: DQMatrix) -> ZBlockMatrix:
    return ZBlockMatrix(A.rows, A.cols, tuple(tuple(omega(A[i, j]) for j in range(A.cols)) for i in range(A.rows)))


def omega_expand(A: DQMatrix) -> DCMatrix:
    """ω̃(A) as a 2m x 2n dual complex matrix (vectorised)."""
    return DCMatrix(qa.chi(A.st), qa.chi(A.in_))


def omega_mat_inv(Z: ZBlockMatrix) -> DQMatrix:
    return DQMatrix.from_entries(Z.m, Z.n, [omega_inv(b) for row in Z.blocks for b in row])


# quasi-determinants ---------------------------------------------------------


def qdet(A: DQMatrix) -> DualComplex:
    _require_square(A)
    return dc_det(omega_expand(A))


def qdet_block_triangular(A: DQMatrix, B: DQMatrix, C: DQMatrix | None = None, D: DQMatrix | None = None) -> DualComplex:
    """qdet [[A, D], [C, B]] when one of the off-diagonal blocks C (lower) or D (upper) is zero."""
    m, n = _require_square(A), _require_square(B)
    if C is not None and D is not None:
        raise ShapeError("give at most one off-diagonal block")
    if C is not None and C.shape != (n, m):
        raise ShapeError(f"lower block must be {n}x{m}, got {C.shape}")
    if D is not None and D.shape != (m, n):
        raise ShapeError(f"upper block must be {m}x{n}, got {D.shape}")
    return qdet(A) * qdet(B)


def assemble_block_triangular(A: DQMatrix, B: DQMatrix, C: DQMatrix | None = None, D: DQMatrix | None = None) -> DQMatrix:
    m, n = A.rows, B.rows
    st = np.zeros((m + n, m + n, 4))
    in_ = np.zeros_like(st)
    st[:m, :m], in_[:m, :m] = A.st, A.in_
    st[m:, m:], in_[m:, m:] = B.st, B.in_
    if C is not None:
        st[m:, :m], in_[m:, :m] = C.st, C.in_
    if D is not None:
        st[:m, m:], in_[:m, m:] = D.st, D.in_
    return DQMatrix(st, in_)


def q_charpoly_eval(A: DQMatrix, lam) -> DualComplex:
    """f^q_A(λ) = qdet(λI - A)."""
    m = _require_square(A)
    return qdet(DQMatrix.identity(m).lscale(lam) - A)


def _vector(x, m: int) -> DQMatrix:
    if isinstance(x, DQMatrix):
        if x.shape != (m, 1):
            raise ShapeError(f"expected an {m}x1 vector, got {x.shape}")
        return x
    xs = list(x)
    if len(xs) != m:
        raise ShapeError(f"expected {m} vector entries, got {len(xs)}")
    return DQMatrix.from_entries(m, 1, xs)


def frobenius(A: DQMatrix) -> DualReal:
    return dual_frobenius_parts(A.st, A.in_)


def verify_right_eigenpair(A: DQMatrix, lam, x) -> tuple[DualReal, DualComplex]:
    """Residual of ``Ax - xλ`` and the quasi-characteristic value at λ."""
    m = _require_square(A)
    x = _vector(x, m)
    if float(np.sqrt(np.sum(x.st**2))) <= get_tolerances().tau_zero:
        raise NotAppreciable("eigenvector must be appreciable")
    r = A @ x - x.rscale(lam)
    return frobenius(r), q_charpoly_eval(A, lam)


# block elimination -----------------------------------------------------------

Grid = list[list[ZBlock]]


def _eliminate(A: DQMatrix, B: DQMatrix, pivot: Literal["max", "first"], on_step: Callable | None) -> DQMatrix:
    m = _require_square(A)
    if B.rows != m:
        raise ShapeError(f"right-hand side must have {m} rows, got {B.rows}")
    d = qdet(A)
    tau = get_tolerances().tau_zero
    if abs(d.st) <= tau:
        raise NotInvertible(f"quasi-determinant {d.st!r} is not appreciable")
    p = B.cols
    grid: Grid = [[omega(A[i, j]) for j in range(m)] + [omega(B[i, j]) for j in range(p)] for i in range(m)]
    for k in range(m):
        cands = [r for r in range(k, m) if grid[r][k].det_st() > tau]
        if not cands:
            raise NotInvertible(f"no invertible pivot block in column {k}")
        piv = max(cands, key=lambda r: grid[r][k].det_st()) if pivot == "max" else cands[0]
        grid[k], grid[piv] = grid[piv], grid[k]
        inv = grid[k][k].inverse()
        # normalise the pivot row, then clear column k everywhere else
        grid[k] = [inv * b for b in grid[k]]
        for r in range(m):
            if r == k:
                continue
            f = grid[r][k]
            grid[r] = [a - f * b for a, b in zip(grid[r], grid[k])]
        if on_step is not None:
            on_step(k, tuple(tuple(row) for row in grid))
    return DQMatrix.from_entries(m, p, [omega_inv(grid[i][m + j]) for i in range(m) for j in range(p)])


def solve_zblock(
    A: DQMatrix,
    B: DQMatrix,
    *,
    pivot: Literal["max", "first"] = "max",
    on_step: Callable[[int, tuple[tuple[ZBlock, ...], ...]], None] | None = None,
) -> DQMatrix:
    """Solve ``AX = B`` by Gauss-Jordan elimination over Z blocks.

    ``pivot="max"`` picks, in each column, the candidate block whose
    standard part has the largest determinant; ``"first"`` takes the first
    invertible one.  ``on_step`` receives the step index and the block grid
    after every elimination step.
    """
    return _eliminate(A, B, pivot, on_step)


def dq_inverse(A: DQMatrix) -> DQMatrix:
    m = _require_square(A)
    return _eliminate(A, DQMatrix.identity(m), "max", None)
