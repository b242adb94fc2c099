"""Numerical thresholds shared by every module.

Thresholds live in a context variable so that callers (the CLI, test
suites, worker threads) can scope overrides without threading a parameter
through every function::

    with using(tau_zero=1e-12):
        roots = char_roots(A)
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    tau_zero: float = 1e-10  # appreciability threshold on standard parts
    tau_deriv: float = 1e-8  # simple-root threshold, scaled by ||g'||
    cluster_rel: float = 1e-6  # relative distance for merging eigenvalues
    gap_warn: float = 1e-4  # conditioning warning for first-order splits
    solve_resid: float = 1e-8  # residual bound for linear completions
    pairing: float = 1e-8  # complex-adjoint spectrum pairing

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be strictly positive, got {value!r}")


_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "dualdet_tolerances", default=Tolerances()
)


def get_tolerances() -> Tolerances:
    return _current.get()


@contextmanager
def using(tol: Tolerances | None = None, **overrides):
    """Temporarily replace the active tolerances."""
    base = tol if tol is not None else _current.get()
    token = _current.set(replace(base, **overrides) if overrides else base)
    try:
        yield _current.get()
    finally:
        _current.reset(token)
