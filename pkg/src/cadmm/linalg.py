# -*- coding: utf-8 -*-

"""
Dense symmetric-matrix utilities, sparse symmetric constraint collections,
and the spectral / Gram-system routines the solvers are built on.

Symmetric matrices are plain ``(n, n)`` ndarrays; the upper triangle is
authoritative and ``symmetrize`` is applied wherever round-off could break
symmetry. All inner products are Frobenius / Euclidean.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse


class GramSingularError(ValueError):
    """Raised when the Gram matrix of a constraint collection is numerically
    singular; carries the index of the offending constraint row."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


class PowerIterationWarning(UserWarning):
    """Power iteration did not reach its tolerance; a trace-based upper
    bound was returned instead."""


# Gram matrices are formed explicitly (m x m dense) and factored once;
# beyond this row count the desk-scale dense path is refused.
MAX_DENSE_GRAM = 5000


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def is_symmetric(a: np.ndarray, tol: float = 1e-12) -> bool:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.abs(a).max()) if a.size else 1.0)
    return bool(np.abs(a - a.T).max() <= tol * scale)


def frob_inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.vdot(a, b))


def _svec_index(i: np.ndarray, j: np.ndarray, n: int) -> np.ndarray:
    # row-major upper-triangle (including diagonal) flat position of (i, j), i <= j
    return i * (2 * n - i + 1) // 2 + (j - i)


_SQRT2 = np.sqrt(2.0)


def svec(x: np.ndarray) -> np.ndarray:
    """Scaled upper-triangle vectorization: off-diagonals carry sqrt(2) so
    that ``svec(a) @ svec(b)`` equals the Frobenius inner product."""
    n = x.shape[0]
    iu, ju = np.triu_indices(n)
    v = x[iu, ju].astype(float).copy()
    v[iu != ju] *= _SQRT2
    return v


def smat(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`svec`."""
    iu, ju = np.triu_indices(n)
    w = np.asarray(v, dtype=float).copy()
    w[iu != ju] /= _SQRT2
    out = np.zeros((n, n))
    out[iu, ju] = w
    out[ju, iu] = w
    return out


def project_psd(m: np.ndarray) -> np.ndarray:
    """Nearest (Frobenius) positive semidefinite matrix.

    Eigendecomposes the symmetrized input, clamps negative eigenvalues to
    zero and reassembles. Raises ``ValueError`` on non-finite input.
    """
    m = np.asarray(m, dtype=float)
    if not np.isfinite(m).all():
        raise ValueError("project_psd: input has non-finite entries")
    b = symmetrize(m)
    w, v = np.linalg.eigh(b)
    if w[0] >= 0.0:
        return b
    w = np.where(w > 0.0, w, 0.0)
    return symmetrize((v * w) @ v.T)


class SparseSymList:
    """A list of m sparse symmetric n x n matrices, i.e. a linear map
    from the symmetric matrices into R^m and its adjoint.

    Each matrix is given by COO triples ``(i, j, value)`` with ``i <= j``;
    a triple with ``i < j`` stands for the pair of symmetric entries.
    Internally the collection is a CSR matrix over svec coordinates, so
    ``apply`` and ``adjoint`` are single sparse mat-vecs and the Gram
    matrix of the collection is ``P @ P.T``.
    """

    def __init__(self, n: int, triples: Sequence[tuple], copy_validate: bool = True):
        if n < 1:
            raise ValueError("matrix order must be >= 1")
        self.n = int(n)
        self.m = len(triples)
        if self.m == 0:
            raise ValueError("constraint list must be nonempty")
        rows, cols, vals = [], [], []
        for k, (ii, jj, vv) in enumerate(triples):
            ii = np.asarray(ii, dtype=np.int64).ravel()
            jj = np.asarray(jj, dtype=np.int64).ravel()
            vv = np.asarray(vv, dtype=float).ravel()
            if copy_validate:
                if ii.shape != jj.shape or ii.shape != vv.shape:
                    raise ValueError(f"constraint {k}: triple arrays disagree in length")
                if ii.size and (ii.min() < 0 or jj.max() >= n):
                    raise ValueError(f"constraint {k}: index out of range")
                if np.any(ii > jj):
                    raise ValueError(f"constraint {k}: triples must have i <= j")
                flat = _svec_index(ii, jj, n)
                if np.unique(flat).size != flat.size:
                    raise ValueError(f"constraint {k}: duplicate (i, j) entry")
            rows.append(np.full(ii.shape, k, dtype=np.int64))
            cols.append(_svec_index(ii, jj, n))
            svals = vv.copy()
            svals[ii != jj] *= _SQRT2
            vals.append(svals)
        dim = n * (n + 1) // 2
        self._csr = scipy.sparse.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.m, dim),
        )
        self._triples = [
            (np.asarray(t[0], dtype=np.int64).ravel().copy(),
             np.asarray(t[1], dtype=np.int64).ravel().copy(),
             np.asarray(t[2], dtype=float).ravel().copy())
            for t in triples
        ]
        self._gram_cho = None

    def triples(self, k: int) -> tuple:
        return self._triples[k]

    def matrix(self, k: int) -> np.ndarray:
        """Dense symmetric matrix of constraint k."""
        i, j, v = self._triples[k]
        out = np.zeros((self.n, self.n))
        out[i, j] = v
        out[j, i] = v
        return out

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Evaluate [<A_k, X>]_k."""
        return self._csr @ svec(x)

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        """Evaluate sum_k y_k A_k."""
        return smat(self._csr.T @ np.asarray(y, dtype=float), self.n)

    def as_block_map(self) -> "LinearBlockMap":
        return LinearBlockMap(apply=self.apply, apply_adjoint=self.adjoint)

    def gram(self) -> np.ndarray:
        """Dense m x m Gram matrix <A_k, A_l>."""
        if self.m > MAX_DENSE_GRAM:
            raise ValueError(
                f"Gram matrix with m={self.m} exceeds the dense limit {MAX_DENSE_GRAM}")
        return (self._csr @ self._csr.T).toarray()

    def frob_norms_sq(self) -> np.ndarray:
        return np.asarray(self._csr.multiply(self._csr).sum(axis=1)).ravel()

    def gram_apply(self, y: np.ndarray) -> np.ndarray:
        """Matrix-free application of the Gram operator A A*."""
        return self._csr @ (self._csr.T @ np.asarray(y, dtype=float))


@dataclass(frozen=True)
class LinearBlockMap:
    """A linear map from the shared space into a block space, with adjoint."""

    apply: Callable[[np.ndarray], np.ndarray]
    apply_adjoint: Callable[[np.ndarray], np.ndarray]


def identity_block_map() -> LinearBlockMap:
    return LinearBlockMap(apply=lambda x: x, apply_adjoint=lambda z: z)


def lambda_max_gram(a: SparseSymList, max_iters: int = 200, rel_tol: float = 1e-8,
                    seed: int = 0) -> float:
    """Safe upper estimate of the largest eigenvalue of A A*.

    Power iteration on the m x m Gram operator (matrix-free), inflated by
    (1 + 1e-6) so that rho*I - A A* stays positive semidefinite. If the
    iteration does not reach ``rel_tol`` a trace bound sum_k ||A_k||_F^2 is
    returned and a :class:`PowerIterationWarning` is issued.
    """
    trace_bound = float(a.frob_norms_sq().sum())
    if trace_bound == 0.0:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(a.m)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iters):
        w = a.gram_apply(v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            v = rng.standard_normal(a.m)
            v /= np.linalg.norm(v)
            continue
        lam = float(v @ w)
        v_new = w / nw
        res = np.linalg.norm(a.gram_apply(v_new) - lam * v_new)
        v = v_new
        if res <= rel_tol * max(lam, 1e-300):
            return lam * (1.0 + 1e-6)
    warnings.warn(
        "power iteration did not converge; returning the trace upper bound",
        PowerIterationWarning)
    return trace_bound


def gram_factor(a: SparseSymList):
    """Cholesky factor of the Gram matrix, cached on the collection.

    Raises :class:`GramSingularError` when a pivot falls below
    1e-12 times the largest pivot (the constraint rows are then linearly
    dependent to working precision).
    """
    if a._gram_cho is not None:
        return a._gram_cho
    g = a.gram()
    c, info = scipy.linalg.lapack.dpotrf(g, lower=1)
    if info > 0:
        raise GramSingularError(
            info - 1,
            f"Gram matrix singular: constraint {info - 1} is dependent on earlier rows")
    if info < 0:
        raise ValueError(f"dpotrf: illegal argument {-info}")
    piv = np.diag(c) ** 2
    if piv.min() < 1e-12 * piv.max():
        k = int(np.argmin(piv))
        raise GramSingularError(
            k, f"Gram matrix numerically singular at constraint {k} "
               f"(pivot ratio {piv.min() / piv.max():.2e})")
    a._gram_cho = (c, True)
    return a._gram_cho


def gram_solve(a: SparseSymList, rhs: np.ndarray) -> np.ndarray:
    """Solve (A A*) y = rhs using the cached Cholesky factorization."""
    cho = gram_factor(a)
    return scipy.linalg.cho_solve(cho, np.asarray(rhs, dtype=float))
