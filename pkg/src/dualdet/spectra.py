"""Hermitian eigendecompositions, dual quaternion SVD and spectral inequalities.

Both decompositions are first-order perturbation constructions: decompose
the standard part, then recover the infinitesimal parts by compressing
``A_in`` onto each cluster of equal standard eigenvalues (or singular
values) and solving the commutator equation between clusters.
"""

from __future__ import annotations

import hashlib
import itertools
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _quat as qa
from .config import get_tolerances
from .dcmat import DCMatrix, det
from .dqmat import DQMatrix, omega_expand
from .errors import IllConditioned, NotHermitian, NotPartiallyUnitary, NotPSD, PairingFailure, ShapeError
from .scalar import DualReal, dual_pow, magnitude

# relative slack used when comparing computed dual reals
COMPARE_RTOL = 1e-8


@dataclass(frozen=True)
class HermEig:
    """A = U diag(lambdas) U* with lambdas descending in the total order."""

    U: DCMatrix | DQMatrix
    lambdas: tuple[DualReal, ...]

    def reconstruct(self):
        U = self.U
        if isinstance(U, DQMatrix):
            return U @ DQMatrix.diag(list(self.lambdas)) @ U.H
        return U @ DCMatrix.diag(list(self.lambdas)) @ U.H


@dataclass(frozen=True)
class DqSvd:
    """A = U Σ V* with Σ the m x n diagonal embedding of ``sigmas``."""

    U: DQMatrix
    V: DQMatrix
    sigmas: tuple[DualReal, ...]
    r: int
    s: int

    def reconstruct(self) -> DQMatrix:
        m, n = self.U.rows, self.V.rows
        st = np.zeros((m, n, 4))
        in_ = np.zeros((m, n, 4))
        for i, sg in enumerate(self.sigmas):
            st[i, i, 0] = sg.st
            in_[i, i, 0] = sg.in_
        return self.U @ DQMatrix(st, in_) @ self.V.H


def _desc_key(lam: DualReal):
    return (-lam.st, -lam.in_)


def _check_gaps(values: Sequence[float]):
    tol = get_tolerances()
    scale = max(1.0, max((abs(v) for v in values), default=0.0))
    gaps = [abs(a - b) for a, b in zip(values, values[1:])]
    if gaps and min(gaps) < tol.gap_warn * scale:
        warnings.warn(
            f"minimum gap {min(gaps):.3g} between distinct clusters is below {tol.gap_warn:g}",
            IllConditioned,
            stacklevel=3,
        )


def _herm_parts(A: DCMatrix) -> tuple[np.ndarray, np.ndarray]:
    if not A.is_hermitian(1e-10):
        raise NotHermitian("matrix is not Hermitian")
    A = A.to_complex()
    return (A.st + A.st.conj().T) / 2, (A.in_ + A.in_.conj().T) / 2


def _eig_first_order(hs: np.ndarray, hi: np.ndarray):
    """Return (U_st, U_in, lam_st, lam_in) for complex Hermitian parts, descending."""
    tol = get_tolerances()
    w, u0 = np.linalg.eigh(hs)
    w, u0 = w[::-1], u0[:, ::-1].copy()
    groups = qa.cluster_sorted(w, tol.cluster_rel)
    lam_st = np.empty_like(w)
    lam_in = np.empty_like(w)
    for g in groups:
        ui = u0[:, g]
        wc, wv = np.linalg.eigh(ui.conj().T @ hi @ ui)
        u0[:, g] = ui @ wv[:, ::-1]
        lam_in[g] = wc[::-1]
        lam_st[g] = np.mean(w[g])
    _check_gaps([float(lam_st[g[0]]) for g in groups])
    b = u0.conj().T @ hi @ u0
    diff = lam_st[None, :] - lam_st[:, None]  # σ_q - σ_p
    same = np.zeros_like(diff, dtype=bool)
    for g in groups:
        same[np.ix_(g, g)] = True
    omega = np.where(same, 0.0, b / np.where(same, 1.0, diff))
    return u0, u0 @ omega, lam_st, lam_in


def herm_eig_dc(A: DCMatrix) -> HermEig:
    hs, hi = _herm_parts(A)
    ust, uin, ls, li = _eig_first_order(hs, hi)
    order = sorted(range(len(ls)), key=lambda k: (-ls[k], -li[k]))
    lambdas = tuple(DualReal(float(ls[k]), float(li[k])) for k in order)
    return HermEig(DCMatrix(ust[:, order], uin[:, order]), lambdas)


def _pair_groups(lambdas: Sequence[DualReal]) -> list[list[int]]:
    """Check that the spectrum comes in equal consecutive pairs and group equal pairs."""
    tol = get_tolerances().pairing
    if len(lambdas) % 2:
        raise PairingFailure("odd spectrum length")

    def close(a: DualReal, b: DualReal) -> bool:
        scale = max(1.0, abs(a.st), abs(b.st), abs(a.in_), abs(b.in_))
        return abs(a.st - b.st) <= tol * scale and abs(a.in_ - b.in_) <= tol * scale

    groups: list[list[int]] = []
    for k in range(0, len(lambdas), 2):
        a, b = lambdas[k], lambdas[k + 1]
        if not close(a, b):
            raise PairingFailure(f"eigenvalues {a} and {b} of the complex adjoint do not pair")
        if groups and close(lambdas[groups[-1][0]], a):
            groups[-1].extend([k, k + 1])
        else:
            groups.append([k, k + 1])
    return groups


def herm_eig_dq(A: DQMatrix) -> HermEig:
    """Eigendecomposition of a dual quaternion Hermitian matrix through ω̃(A)."""
    if not A.is_hermitian(1e-10):
        raise NotHermitian("matrix is not Hermitian")
    m = A.rows
    E = herm_eig_dc(omega_expand(A))
    groups = _pair_groups(E.lambdas)
    Ust, Uin = np.asarray(E.U.st), np.asarray(E.U.in_)
    cand_st = np.stack([qa.column_to_quat(Ust[:, j]) for j in range(2 * m)])
    cand_in = np.stack([qa.column_to_quat(Uin[:, j]) for j in range(2 * m)])
    q_st, q_in, owner = qa.orthonormal_quaternion_basis(cand_st, cand_in, groups, [len(g) // 2 for g in groups])
    lambdas = tuple(E.lambdas[groups[o][0]] for o in owner)
    return HermEig(DQMatrix(q_st, q_in), lambdas)


def herm_eig(A: DCMatrix | DQMatrix) -> HermEig:
    return herm_eig_dq(A) if isinstance(A, DQMatrix) else herm_eig_dc(A)


# singular values ---------------------------------------------------------------


def dq_svd(A: DQMatrix | DCMatrix) -> DqSvd:
    if isinstance(A, DCMatrix):
        A = DQMatrix.from_complex(A)
    tol = get_tolerances()
    m, n = A.shape
    t = min(m, n)
    a_st, a_in = np.asarray(A.st), np.asarray(A.in_)
    s_probe = np.linalg.svd(qa.chi(a_st), compute_uv=False) if t else np.zeros(0)
    rank_tol = tol.tau_zero * max(1.0, float(s_probe[0]) if t else 0.0)
    U, s, V = qa.quat_svd(a_st, rank_tol)
    r = int(np.sum(s > rank_tol))
    s[r:] = 0.0

    # appreciable block: rotate each σ-cluster by the Hermitian part of its compression
    groups = qa.cluster_sorted(s[:r], tol.cluster_rel)
    M = qa.qmatmul(qa.qmatmul(qa.qH(U), a_in), V)
    sig_in = np.zeros(t)
    for g in groups:
        P = M[np.ix_(g, g)]
        H = (P + qa.qH(P)) / 2
        w, W = qa.quat_eigh(H)
        U[:, g] = qa.qmatmul(U[:, g], W)
        V[:, g] = qa.qmatmul(V[:, g], W)
        sig_in[g] = w
        s[g] = np.mean(s[g])
    _check_gaps([float(s[g[0]]) for g in groups] + ([0.0] if r < t else []))

    # null block: the residual coupling is purely infinitesimal
    M = qa.qmatmul(qa.qmatmul(qa.qH(U), a_in), V)
    in_scale = max(1.0, float(np.sqrt(np.sum(a_in**2))))
    if r < t:
        P2, t_vals, Q2 = qa.quat_svd(M[r:, r:], tol.tau_zero * in_scale)
        U[:, r:] = qa.qmatmul(U[:, r:], P2)
        V[:, r:] = qa.qmatmul(V[:, r:], Q2)
        sig_in[r:] = t_vals
        M = qa.qmatmul(qa.qmatmul(qa.qH(U), a_in), V)
    s_count = r + int(np.sum(sig_in[r:] > tol.tau_zero * in_scale))
    sig_in[s_count:] = 0.0

    # skew generators Ω (m x m) and Φ (n x n) with M - Σ_in = Ω D - D Φ
    E = M.copy()
    for p in range(t):
        E[p, p, 0] -= sig_in[p]
    Om = np.zeros((m, m, 4))
    Ph = np.zeros((n, n, 4))
    cl = {}
    for gi, g in enumerate(groups):
        for p in g:
            cl[p] = gi
    for p in range(r):
        for q in range(r):
            if cl[p] == cl[q]:
                Om[p, q] = E[p, q] / s[p]
            else:
                den = s[q] ** 2 - s[p] ** 2
                Om[p, q] = (s[q] * E[p, q] + s[p] * qa.qconj(E[q, p])) / den
                Ph[p, q] = (s[p] * E[p, q] + s[q] * qa.qconj(E[q, p])) / den
        for q in range(r, m):
            Om[q, p] = E[q, p] / s[p]
            Om[p, q] = -qa.qconj(Om[q, p])
        for q in range(r, n):
            Ph[p, q] = -E[p, q] / s[p]
            Ph[q, p] = -qa.qconj(Ph[p, q])
    sigmas = tuple(DualReal(float(s[k]), float(sig_in[k])) for k in range(t))
    return DqSvd(
        DQMatrix(U, qa.qmatmul(U, Om)),
        DQMatrix(V, qa.qmatmul(V, Ph)),
        sigmas,
        r,
        s_count,
    )


def rank_arank(A: DQMatrix | DCMatrix) -> tuple[int, int]:
    """(rank s, appreciable rank r)."""
    d = dq_svd(A)
    return d.s, d.r


# verdicts ------------------------------------------------------------------------


def instance_digest(*mats) -> str:
    h = hashlib.sha256()
    for M in mats:
        if M is None:
            h.update(b"-")
            continue
        st = np.ascontiguousarray(np.asarray(M.st, dtype=float if isinstance(M, DQMatrix) else complex))
        inf = np.ascontiguousarray(np.asarray(M.in_, dtype=st.dtype))
        h.update(repr(st.shape).encode())
        h.update(st.tobytes())
        h.update(inf.tobytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class Verdict:
    theorem: str
    passed: bool
    margins: tuple[DualReal, ...]
    instance_digest: str
    details: dict = field(default_factory=dict, compare=False)

    def worst_margin(self) -> DualReal | None:
        return min(self.margins, key=lambda d: (d.st, d.in_)) if self.margins else None

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "pass": self.passed,
            "margins": [[m.st, m.in_] for m in self.margins],
            "instance_digest": self.instance_digest,
        }


def dual_leq(a: DualReal, b: DualReal, rtol: float = COMPARE_RTOL) -> bool:
    """a <= b in the total order, treating standard parts within ``rtol`` as tied."""
    scale = max(1.0, abs(a.st), abs(b.st))
    if b.st - a.st > rtol * scale:
        return True
    if a.st - b.st > rtol * scale:
        return False
    return a.in_ <= b.in_ + rtol * max(scale, abs(a.in_), abs(b.in_))


def _real_det(A: DCMatrix) -> DualReal:
    d = det(A)
    return DualReal(float(np.real(d.st)), float(np.real(d.in_)))


def _product(values) -> DualReal:
    out = DualReal(1.0, 0.0)
    for v in values:
        out = out * v
    return out


def is_psd(A: DCMatrix | DQMatrix) -> Verdict:
    """Positive semidefiniteness from the eigenvalues (``details['pd']`` for definiteness)."""
    tol = get_tolerances()
    lambdas = herm_eig(A).lambdas
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(np.asarray(A.in_)) ** 2))))

    def nonneg(lam: DualReal) -> bool:
        if lam.st > tol.tau_zero:
            return True
        if lam.st < -tol.tau_zero:
            return False
        return lam.in_ >= -tol.tau_zero * scale

    psd = all(nonneg(x) for x in lambdas)
    pd = all(x.st > tol.tau_zero for x in lambdas)
    return Verdict("psd", psd, tuple(lambdas), instance_digest(A), {"pd": pd, "lambdas": lambdas})


def _require_psd(*mats):
    for M in mats:
        if not is_psd(M).passed:
            raise NotPSD("matrix is not positive semidefinite")


def sturm_check(A: DCMatrix | DQMatrix, index_set: Sequence[int]) -> Verdict:
    """λ_{m-k+i}(A) <= λ_i(A_k) <= λ_i(A) for the principal submatrix on ``index_set``."""
    m = A.rows
    idx = list(index_set)
    if not idx or len(set(idx)) != len(idx) or not all(0 <= i < m for i in idx):
        raise ShapeError(f"invalid principal index set {idx} for size {m}")
    k = len(idx)
    la = herm_eig(A).lambdas
    lk = herm_eig(A.submatrix(idx, idx)).lambdas
    margins = []
    ok = True
    for i in range(k):
        ok &= dual_leq(la[m - k + i], lk[i]) and dual_leq(lk[i], la[i])
        margins += [lk[i] - la[m - k + i], la[i] - lk[i]]
    return Verdict("sturm", ok, tuple(margins), instance_digest(A))


def bloomfield_watson_check(A: DCMatrix, X: DCMatrix) -> Verdict:
    m, k = X.shape
    if A.shape != (m, m):
        raise ShapeError(f"A must be {m}x{m}, got {A.shape}")
    G = X.H @ X
    if not G.allclose(DCMatrix.identity(k), 1e-8):
        raise NotPartiallyUnitary("X* X is not the identity")
    _require_psd(A)
    lam = herm_eig_dc(A).lambdas
    d = _real_det(X.H @ A @ X)
    lo = _product(lam[m - k :])
    hi = _product(lam[:k])
    ok = dual_leq(lo, d) and dual_leq(d, hi)
    return Verdict("bloomfield-watson", ok, (d - lo, hi - d), instance_digest(A, X), {"det": d, "lower": lo, "upper": hi})


def cauchy_schwarz_check(A: DCMatrix, B: DCMatrix) -> Verdict:
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch {A.shape} vs {B.shape}")
    lhs = dual_pow(magnitude(det(A.H @ B)), 2)
    rhs = _real_det(A.H @ A) * _real_det(B.H @ B)
    return Verdict("cauchy-schwarz", dual_leq(lhs, rhs), (rhs - lhs,), instance_digest(A, B), {"lhs": lhs, "rhs": rhs})


def psd_det_inequalities(A: DCMatrix, B: DCMatrix, C: DCMatrix | None = None) -> Verdict:
    """Superadditivity, the block (Fischer) bound and the Hadamard bound.

    With ``D = [[A, C], [C*, B]]``: det(A+B) >= det A + det B (square blocks
    of equal size only), det D <= det A det B, and det M <= prod diag(M) for
    M in (A, B, D).
    """
    m, n = A.rows, B.rows
    C = DCMatrix.zeros(m, n) if C is None else C
    if C.shape != (m, n):
        raise ShapeError(f"off-diagonal block must be {m}x{n}, got {C.shape}")
    Dst = np.block([[A.to_complex().st, C.to_complex().st], [C.to_complex().st.conj().T, B.to_complex().st]])
    Din = np.block([[A.to_complex().in_, C.to_complex().in_], [C.to_complex().in_.conj().T, B.to_complex().in_]])
    D = DCMatrix(Dst, Din)
    _require_psd(A, B, D)
    dA, dB, dD = _real_det(A), _real_det(B), _real_det(D)
    margins = []
    ok = True
    if A.shape == B.shape:
        dS = _real_det(A + B)
        ok &= dual_leq(dA + dB, dS)
        margins.append(dS - (dA + dB))
    ok &= dual_leq(dD, dA * dB)
    margins.append(dA * dB - dD)
    for M, dM in ((A, dA), (B, dB), (D, dD)):
        diag = _product(DualReal(float(np.real(M.st[i, i])), float(np.real(M.in_[i, i]))) for i in range(M.rows))
        ok &= dual_leq(dM, diag)
        margins.append(diag - dM)
    return Verdict("psd-det", ok, tuple(margins), instance_digest(A, B, C))


def sturm_all(A: DCMatrix | DQMatrix, k: int) -> list[Verdict]:
    return [sturm_check(A, idx) for idx in itertools.combinations(range(A.rows), k)]
