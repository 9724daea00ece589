"""Self-consistent operator/source pairs on a chain complex.

Given a boundary operator d of degree n, the quadratic-form kernel is
K = beta * d @ d.T and a source built from cell values e is
J = alpha * d @ e.  When e is itself the gradient of vertex values v
(degree 1: e_link = v_head - v_tail), the pair satisfies the exact
identity

    alpha * K @ v == beta * J

which is what ``verify_scc`` checks -- in integer arithmetic whenever
the inputs allow it.  K always annihilates the constant vector, and
any J produced this way sums to zero (a divergence-free source).
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Integral

import numpy as np

from .chain_complex import ChainComplex
from .errors import SccViolation


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _select_boundary(c: ChainComplex, n: int) -> np.ndarray:
    if n == 1:
        return c.d1
    if n == 2:
        return c.d2
    raise ValueError(f"unsupported chain degree {n}; expected 1 or 2")


@dataclass(frozen=True)
class SccSystem:
    """Operator K, source J, the couplings that built them, and the boundary used.

    alpha scales the source (units of momentum), beta the operator
    (momentum per length), hbar the action quantum used by phase code.
    """

    n: int
    alpha: float
    beta: float
    hbar: float
    K: np.ndarray
    J: np.ndarray
    boundary: np.ndarray

    @property
    def size(self) -> int:
        return self.K.shape[0]


def build_operator(c: ChainComplex, n: int, beta: float) -> np.ndarray:
    """K = beta * d_n @ d_n.T.  Integer beta keeps the result exact."""
    d = _select_boundary(c, n)
    gram = d @ d.T
    if isinstance(beta, Integral):
        return _frozen(int(beta) * gram)
    return _frozen(float(beta) * gram)


def build_source(c: ChainComplex, n: int, cell_values, alpha: float) -> np.ndarray:
    """J = alpha * d_n @ e for cell values e one degree up."""
    d = _select_boundary(c, n)
    e = np.asarray(cell_values)
    if e.shape != (d.shape[1],):
        raise ValueError(
            f"cell values have shape {e.shape}, expected ({d.shape[1]},) for degree {n}"
        )
    if not np.all(np.isfinite(e)):
        raise ValueError("cell values must be finite")
    if np.issubdtype(e.dtype, np.integer) and isinstance(alpha, Integral):
        return _frozen(int(alpha) * (d @ e))
    return _frozen(float(alpha) * (d @ e.astype(float)))


def build_system(
    c: ChainComplex,
    n: int,
    cell_values,
    alpha: float = 1.0,
    beta: float = 1.0,
    hbar: float = 1.0,
) -> SccSystem:
    """Bundle operator and source built from one complex and one cell assignment."""
    return SccSystem(
        n=n,
        alpha=alpha,
        beta=beta,
        hbar=hbar,
        K=build_operator(c, n, beta),
        J=build_source(c, n, cell_values, alpha),
        boundary=_select_boundary(c, n),
    )


def gradient_link_values(c: ChainComplex, vertex_values) -> np.ndarray:
    """e = d1.T @ v: each link gets head value minus tail value."""
    v = np.asarray(vertex_values)
    if v.shape != (c.d1.shape[0],):
        raise ValueError(f"vertex values have shape {v.shape}, expected ({c.d1.shape[0]},)")
    return _frozen(c.d1.T @ v)


@dataclass(frozen=True)
class SccReport:
    """Outcome of a successful verify_scc: residuals for the checked identities.

    verify_scc raises on failure, so holding a report means the system
    passed; the fields record how tight the identities actually were.
    """

    max_identity_residual: float
    source_sum: float
    max_constant_mode_residual: float
    exact: bool


def verify_scc(system: SccSystem, vertex_values, tol: float = 1e-12) -> SccReport:
    """Check alpha * K @ v == beta * J plus the two structural side conditions.

    Integer inputs are compared exactly; otherwise the identity residual
    is measured against ``tol`` times the scale of the compared vectors.
    Raises SccViolation if the source was not built from the gradient of
    ``vertex_values``.
    """
    v = np.asarray(vertex_values)
    if v.shape != (system.size,):
        raise ValueError(f"vertex values have shape {v.shape}, expected ({system.size},)")

    exact = (
        np.issubdtype(system.K.dtype, np.integer)
        and np.issubdtype(system.J.dtype, np.integer)
        and np.issubdtype(v.dtype, np.integer)
        and isinstance(system.alpha, Integral)
        and isinstance(system.beta, Integral)
    )

    lhs = system.alpha * (system.K @ v)
    rhs = system.beta * system.J
    diff = np.max(np.abs(lhs - rhs)) if lhs.size else 0.0

    if exact:
        violated = bool(np.any(lhs != rhs))
        max_residual = float(diff)
    else:
        scale = max(float(np.max(np.abs(lhs), initial=0.0)), float(np.max(np.abs(rhs), initial=0.0)), 1.0)
        max_residual = float(diff)
        violated = max_residual > tol * scale

    if violated:
        raise SccViolation(
            f"SCC violated: link values are not a vertex gradient (max residual {max_residual:.6e})",
            max_residual=max_residual,
        )

    ones = np.ones(system.size, dtype=system.K.dtype if exact else float)
    const_resid = float(np.max(np.abs(system.K @ ones)))
    return SccReport(
        max_identity_residual=max_residual,
        source_sum=float(np.sum(system.J)),
        max_constant_mode_residual=const_resid,
        exact=exact,
    )


def null_space_basis(K, tol: float = 1e-9) -> list[np.ndarray]:
    """Orthonormal basis of the numerical null space of a symmetric matrix.

    A direction x counts as null when its eigenvalue magnitude is at
    most ``tol`` times the largest eigenvalue magnitude.  Vectors are
    sign-fixed (largest-magnitude component positive) so the basis is
    reproducible.
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {K.shape}")
    asym = np.max(np.abs(K - K.T), initial=0.0)
    scale = np.max(np.abs(K), initial=0.0)
    if asym > 1e-12 * max(scale, 1.0):
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")

    vals, vecs = np.linalg.eigh(K)
    top = np.max(np.abs(vals), initial=0.0)
    if top == 0.0:
        keep = np.arange(K.shape[0])
    else:
        keep = np.flatnonzero(np.abs(vals) <= tol * top)

    basis = []
    for i in keep:
        x = vecs[:, i].copy()
        pivot = int(np.argmax(np.abs(x)))
        if x[pivot] < 0:
            x = -x
        basis.append(_frozen(x))
    return basis
