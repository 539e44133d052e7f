"""Maximum-entropy pmfs on ``Z_m`` under linear moment constraints."""

import numpy as np
from scipy.optimize import linprog
from scipy.special import logsumexp, softmax

from .._numerics import check_m
from ..errors import DomainError, NoSolutionError


def _design(m, constraint_fns):
    r = np.arange(m)
    cols = [np.broadcast_to(np.asarray(f(r), dtype=float), (m,)) for f in constraint_fns]
    if not cols:
        raise DomainError("at least one constraint function is required")
    return np.column_stack(cols)


def maxent_pmf(T, coef):
    """``exp(T @ coef)`` normalized; ``T`` is the ``m x q`` design matrix."""
    return softmax(T @ np.asarray(coef, dtype=float))


def _interior_margin(T, targets):
    """Largest ``s`` such that some pmf with all entries ``>= s`` meets the targets."""
    m, q = T.shape
    # variables: p_0..p_{m-1}, s ; maximize s
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.zeros((q + 1, m + 1))
    A_eq[:q, :m] = T.T
    A_eq[q, :m] = 1.0
    b_eq = np.append(targets, 1.0)
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])  # s - p_r <= 0
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * m + [(None, None)], method="highs")
    if res.status != 0:
        return -np.inf
    return -res.fun


def max_entropy_coefficients(m, constraint_fns, targets, tol=1e-10, max_iter=200, b0=None):
    """Solve the moment equations for the exponential-family coefficients.

    Damped Newton on the convex dual ``log Z(b) - b . a``.

    Raises
    ------
    NoSolutionError
        If the targets are not interior to the convex hull of the constraint
        values, or Newton stalls (step underflow) or diverges.
    """
    m = check_m(m)
    T = _design(m, constraint_fns)
    a = np.asarray(targets, dtype=float).reshape(-1)
    if a.shape[0] != T.shape[1]:
        raise DomainError("need one target per constraint function")
    if _interior_margin(T, a) <= 1e-12:
        raise NoSolutionError("targets are not interior to the attainable moment set")

    b = np.zeros(T.shape[1]) if b0 is None else np.asarray(b0, dtype=float).copy()

    def dual(bv):
        return logsumexp(T @ bv) - bv @ a

    f = dual(b)
    for _ in range(max_iter):
        p = softmax(T @ b)
        mean = p @ T
        g = mean - a
        if np.max(np.abs(g)) < tol:
            return b
        centered = T - mean
        H = centered.T @ (centered * p[:, None])
        step = -np.linalg.lstsq(H, g, rcond=None)[0]
        alpha = 1.0
        while True:
            cand = b + alpha * step
            fc = dual(cand)
            if fc <= f + 1e-4 * alpha * (g @ step):
                break
            alpha *= 0.5
            if alpha < 1e-12:
                raise NoSolutionError("Newton step underflow while solving moment equations")
        b, f = cand, fc
        if np.max(np.abs(b)) > 1e8:
            raise NoSolutionError("coefficients diverged while solving moment equations")
    raise NoSolutionError(f"moment equations not solved within {max_iter} Newton steps")


def fit_max_entropy(m, constraint_fns, targets, tol=1e-10, max_iter=200):
    """Maximum-entropy pmf with ``E[t_i(r)] = a_i``.

    Parameters
    ----------
    m : int
        Lattice size.
    constraint_fns : list of callables
        Each maps an integer array ``r`` to real values ``t_i(r)``.
    targets : sequence of float
        Target expectations ``a_i``.

    Examples
    --------
    >>> import numpy as np
    >>> p = fit_max_entropy(6, [lambda r: np.cos(2*np.pi*r/6)], [0.0])
    >>> np.allclose(p, 1/6)
    True
    """
    T = _design(check_m(m), constraint_fns)
    b = max_entropy_coefficients(m, constraint_fns, targets, tol=tol, max_iter=max_iter)
    return maxent_pmf(T, b)
