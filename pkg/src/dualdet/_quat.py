"""Vectorised quaternion array kernels.

Quaternion arrays carry the four real components on the last axis
(w, x, y, z).  Dual quaternion arrays are ``(st, in_)`` pairs of such arrays.
"""

from __future__ import annotations

import numpy as np

from .config import get_tolerances
from .errors import PairingFailure

# (a*b)_r = sum_pq HAMILTON[p, q, r] a_p b_q
HAMILTON = np.zeros((4, 4, 4))
for _p, _q, _r, _s in [
    (0, 0, 0, 1), (1, 1, 0, -1), (2, 2, 0, -1), (3, 3, 0, -1),
    (0, 1, 1, 1), (1, 0, 1, 1), (2, 3, 1, 1), (3, 2, 1, -1),
    (0, 2, 2, 1), (1, 3, 2, -1), (2, 0, 2, 1), (3, 1, 2, 1),
    (0, 3, 3, 1), (1, 2, 3, 1), (2, 1, 3, -1), (3, 0, 3, 1),
]:
    HAMILTON[_p, _q, _r] = _s

CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise Hamilton product with broadcasting over leading axes."""
    return np.einsum("...p,...q,pqr->...r", a, b, HAMILTON)


def qmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("ikp,kjq,pqr->ijr", a, b, HAMILTON)


def qconj(a: np.ndarray) -> np.ndarray:
    return a * CONJ


def qH(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, 0, 1) * CONJ


def qeye(m: int) -> np.ndarray:
    out = np.zeros((m, m, 4))
    out[np.arange(m), np.arange(m), 0] = 1.0
    return out


def chi(a: np.ndarray) -> np.ndarray:
    """Complex adjoint: each quaternion becomes [[u, v], [-conj v, conj u]]."""
    m, n = a.shape[:2]
    u = a[..., 0] + 1j * a[..., 1]
    v = a[..., 2] + 1j * a[..., 3]
    out = np.empty((2 * m, 2 * n), dtype=complex)
    out[0::2, 0::2] = u
    out[0::2, 1::2] = v
    out[1::2, 0::2] = -np.conj(v)
    out[1::2, 1::2] = np.conj(u)
    return out


def chi_inv(c: np.ndarray) -> np.ndarray:
    u = c[0::2, 0::2]
    v = c[0::2, 1::2]
    return np.stack([u.real, u.imag, v.real, v.imag], axis=-1)


def column_to_quat(z: np.ndarray) -> np.ndarray:
    """Quaternion vector whose complex adjoint has ``z`` as its first column."""
    u = z[0::2]
    v = -np.conj(z[1::2])
    return np.stack([u.real, u.imag, v.real, v.imag], axis=-1)


# dual quaternion vectors ---------------------------------------------------


def dq_inner(q_st, q_in, p_st, p_in):
    """<q, p> = sum conj(p_i) q_i as a dual quaternion (st, in_)."""
    st = qmul(qconj(p_st), q_st).sum(axis=0)
    inf = (qmul(qconj(p_st), q_in) + qmul(qconj(p_in), q_st)).sum(axis=0)
    return st, inf


def dq_norm(q_st, q_in) -> tuple[float, float]:
    n = float(np.sqrt(np.sum(q_st**2)))
    return n, (float(np.sum(q_st * q_in)) / n if n > 0 else 0.0)


def orthonormal_quaternion_basis(cols_st, cols_in, groups, needed, fixed=None):
    """Pick ``needed[g]`` dual quaternion vectors from each group of candidates.

    ``cols_*`` hold candidate quaternion vectors as (count, m, 4) arrays.
    Groups are processed in order; inside a group the candidate with the
    largest residual after projecting out every accepted vector is taken
    next (greedy pivoted Gram-Schmidt over the dual quaternions).  Columns of
    ``fixed`` (orthonormal, standard) are projected out but not returned.
    """
    acc_st: list[np.ndarray] = [] if fixed is None else [fixed[:, j] for j in range(fixed.shape[1])]
    acc_in: list[np.ndarray] = [np.zeros_like(v) for v in acc_st]
    owner: list[int] = []
    for g, (members, k) in enumerate(zip(groups, needed)):
        pool = list(members)
        for _ in range(k):
            best = None
            for idx in pool:
                r_st, r_in = cols_st[idx].copy(), cols_in[idx].copy()
                for p_st, p_in in zip(acc_st, acc_in):
                    c_st, c_in = dq_inner(r_st, r_in, p_st, p_in)
                    r_in = r_in - qmul(p_st, c_in) - qmul(p_in, c_st)
                    r_st = r_st - qmul(p_st, c_st)
                n_st = float(np.sqrt(np.sum(r_st**2)))
                if best is None or n_st > best[0]:
                    best = (n_st, idx, r_st, r_in)
            if best is None or best[0] < 1e-6:
                raise PairingFailure("candidate vectors do not span a quaternion subspace of the expected size")
            _, idx, r_st, r_in = best
            pool.remove(idx)
            n, dn = dq_norm(r_st, r_in)
            # (r_st + r_in ε) / (n + dn ε)
            acc_st.append(r_st / n)
            acc_in.append(r_in / n - r_st * dn / n**2)
            owner.append(g)
    skip = 0 if fixed is None else fixed.shape[1]
    m = cols_st.shape[1]
    if len(acc_st) == skip:
        return np.zeros((m, 0, 4)), np.zeros((m, 0, 4)), owner
    return np.stack(acc_st[skip:], axis=1), np.stack(acc_in[skip:], axis=1), owner


def cluster_sorted(values: np.ndarray, rel: float) -> list[list[int]]:
    """Group consecutive entries of a sorted sequence that lie within ``rel`` relative distance."""
    groups: list[list[int]] = []
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    for i, v in enumerate(values):
        if groups and abs(v - values[groups[-1][0]]) <= rel * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def quat_eigh(h: np.ndarray):
    """Eigenvalues (descending) and unitary eigenvector matrix of a quaternion Hermitian matrix."""
    m = h.shape[0]
    w, z = np.linalg.eigh(chi(h))
    w, z = w[::-1], z[:, ::-1]
    groups = cluster_sorted(w, get_tolerances().cluster_rel)
    for g in groups:
        if len(g) % 2:
            raise PairingFailure("complex adjoint spectrum is not paired")
    cand = np.stack([column_to_quat(z[:, j]) for j in range(2 * m)])
    q_st, _, owner = orthonormal_quaternion_basis(cand, np.zeros_like(cand), groups, [len(g) // 2 for g in groups])
    vals = np.array([float(np.mean(w[groups[o]])) for o in owner])
    return vals, q_st


def quat_complete(basis: np.ndarray, m: int) -> np.ndarray:
    """Extend orthonormal quaternion columns (m, k, 4) to a full unitary (m, m, 4)."""
    k = basis.shape[1]
    if k == m:
        return basis
    cand = np.zeros((m, m, 4))
    cand[np.arange(m), np.arange(m), 0] = 1.0
    extra, _, _ = orthonormal_quaternion_basis(cand, np.zeros_like(cand), [list(range(m))], [m - k], fixed=basis)
    return np.concatenate([basis, extra], axis=1)


def quat_svd(a: np.ndarray, rank_tol: float | None = None):
    """Full quaternion SVD a = U diag(s) V^* with U (m,m,4), V (n,n,4), s descending (length min(m, n))."""
    m, n = a.shape[:2]
    t = min(m, n)
    if t == 0:
        return qeye(m), np.zeros(0), qeye(n)
    uc, sc, _ = np.linalg.svd(chi(a))
    s = sc[0::2][:t].copy()
    if rank_tol is None:
        rank_tol = max(m, n) * np.finfo(float).eps * max(1.0, float(s[0]) if t else 1.0)
    r = int(np.sum(s > rank_tol))
    groups = cluster_sorted(sc[: 2 * r], get_tolerances().cluster_rel)
    if any(len(g) % 2 for g in groups):
        raise PairingFailure("complex adjoint singular values are not paired")
    if r:
        cand = np.stack([column_to_quat(uc[:, j]) for j in range(2 * r)])
        u_r, _, owner = orthonormal_quaternion_basis(cand, np.zeros_like(cand), groups, [len(g) // 2 for g in groups])
        s[:r] = [float(np.mean(sc[groups[o]])) for o in owner]
        v_r = qmatmul(qH(a), u_r) / s[:r][None, :, None]
    else:
        u_r = np.zeros((m, 0, 4))
        v_r = np.zeros((n, 0, 4))
    s[r:] = 0.0
    return quat_complete(u_r, m), s, quat_complete(v_r, n)
