"""Dense symmetric eigensolver wrapper and bracketing root finder.

The spin Hamiltonians here are real symmetric and at most 16x16, so the
eigensolver is a thin layer over LAPACK (numpy.linalg.eigh) that adds input
validation and a deterministic ordering/sign convention, making sweep output
reproducible run to run:

* eigenvalues ascending;
* each eigenvector scaled so its first component with magnitude above 1e-12
  is positive;
* inside a degenerate cluster, vectors ordered by the row index of that
  first significant component.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import BracketingError

_SIGN_TOL = 1e-12


class EigenSystem(NamedTuple):
    values: np.ndarray   # ascending, shape (n,)
    vectors: np.ndarray  # orthonormal columns, shape (n, n)


class RootResult(NamedTuple):
    root: float
    bracket_width: float
    residual: float
    iterations: int


def _first_significant(v: np.ndarray) -> int:
    idx = np.flatnonzero(np.abs(v) > _SIGN_TOL)
    return int(idx[0]) if idx.size else 0


def eig_sym(matrix: np.ndarray) -> EigenSystem:
    """Full spectrum of a real symmetric matrix with deterministic ordering.

    Raises ValueError for non-square, non-finite or non-symmetric input
    (symmetry is required exactly: callers construct these matrices
    symmetric by assignment, so any mismatch is a builder bug).
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix is not exactly symmetric")

    values, vectors = np.linalg.eigh(m)

    n = m.shape[0]
    for j in range(n):
        lead = _first_significant(vectors[:, j])
        if vectors[lead, j] < 0:
            vectors[:, j] = -vectors[:, j]

    # canonical order inside degenerate clusters
    scale = max(1.0, float(np.max(np.abs(values))))
    order = list(range(n))
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[j + 1] - values[i] <= 1e-10 * scale:
            j += 1
        if j > i:
            cluster = sorted(order[i:j + 1],
                             key=lambda k: _first_significant(vectors[:, k]))
            order[i:j + 1] = cluster
        i = j + 1
    order = np.array(order)
    return EigenSystem(values[order], vectors[:, order])


def find_root(f: Callable[[float], float], lo: float, hi: float,
              tol: float = 1e-10, max_iter: int = 200,
              return_details: bool = False):
    """Bisection root of a continuous scalar function on [lo, hi].

    Guaranteed to converge for any sign-changing bracket; the bracket is
    halved each step until its width is <= tol.  Raises BracketingError when
    f(lo) and f(hi) have the same sign.
    """
    if not lo < hi:
        raise ValueError("bracket requires lo < hi")
    if tol <= 0:
        raise ValueError("tol must be positive")
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return RootResult(lo, 0.0, 0.0, 0) if return_details else lo
    if f_hi == 0.0:
        return RootResult(hi, 0.0, 0.0, 0) if return_details else hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketingError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}")

    iterations = 0
    f_mid = f_lo
    while hi - lo > tol and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket at floating-point resolution
        f_mid = f(mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        iterations += 1

    root = 0.5 * (lo + hi)
    if return_details:
        return RootResult(root, hi - lo, abs(f(root)), iterations)
    return root
