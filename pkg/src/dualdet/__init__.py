"""Dual complex and dual quaternion matrix algebra."""

__version__ = "0.1.0"

from .config import Tolerances, get_tolerances, using
from .dcmat import (
    CharPoly,
    CharRoot,
    DCMatrix,
    ai_tilde_det,
    char_roots,
    charpoly,
    charpoly_eval,
    complete_eigenpair,
    det,
    det_leibniz,
    inverse,
    verify_eigenpair,
)
from .dqmat import (
    DQMatrix,
    ZBlock,
    ZBlockMatrix,
    dq_inverse,
    omega,
    omega_inv,
    omega_mat,
    q_charpoly_eval,
    qdet,
    solve_zblock,
    verify_right_eigenpair,
)
from .io import dumps_matrix, parse_matrix
from .scalar import DualComplex, DualQuaternion, DualReal, Quaternion, magnitude, total_cmp
from .spectra import (
    DqSvd,
    HermEig,
    Verdict,
    dq_svd,
    herm_eig_dc,
    herm_eig_dq,
    is_psd,
    rank_arank,
)
