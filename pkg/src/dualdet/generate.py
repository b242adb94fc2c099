"""Seeded random instances for the property suites.

Hermitian matrices are built as ``B + B*``, positive semidefinite ones as
``B* B`` and unitary ones from the eigendecomposition of a random Hermitian
matrix, so every instance is reproducible from a ``numpy`` Generator.
"""

from __future__ import annotations

import numpy as np

from .dcmat import DCMatrix
from .dqmat import DQMatrix
from .scalar import DualQuaternion, Quaternion


def dc(rng: np.random.Generator, m: int, n: int | None = None) -> DCMatrix:
    n = m if n is None else n

    def part():
        return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))

    return DCMatrix(part(), part())


def dc_hermitian(rng: np.random.Generator, m: int) -> DCMatrix:
    B = dc(rng, m)
    return B + B.H


def dc_psd(rng: np.random.Generator, m: int, rank: int | None = None) -> DCMatrix:
    B = dc(rng, rank if rank is not None else m, m)
    return B.H @ B


def dc_unitary(rng: np.random.Generator, m: int) -> DCMatrix:
    from .spectra import herm_eig_dc

    return herm_eig_dc(dc_hermitian(rng, m)).U


def dq(rng: np.random.Generator, m: int, n: int | None = None) -> DQMatrix:
    n = m if n is None else n
    return DQMatrix(rng.standard_normal((m, n, 4)), rng.standard_normal((m, n, 4)))


def dq_hermitian(rng: np.random.Generator, m: int) -> DQMatrix:
    B = dq(rng, m)
    return B + B.H


def dq_psd(rng: np.random.Generator, m: int) -> DQMatrix:
    B = dq(rng, m)
    return B.H @ B


def dq_unitary(rng: np.random.Generator, m: int) -> DQMatrix:
    from .spectra import herm_eig_dq

    return herm_eig_dq(dq_hermitian(rng, m)).U


def dual_quaternion(rng: np.random.Generator, infinitesimal: bool = False) -> DualQuaternion:
    st = Quaternion(0.0, 0.0, 0.0, 0.0) if infinitesimal else Quaternion(*rng.standard_normal(4))
    return DualQuaternion(st, Quaternion(*rng.standard_normal(4)))


def dq_singular(rng: np.random.Generator, m: int) -> DQMatrix:
    """Square matrix whose standard part has a zero last row (so qdet is infinitesimal)."""
    A = dq(rng, m)
    st = np.array(A.st)
    st[-1] = 0.0
    return DQMatrix(st, A.in_)
