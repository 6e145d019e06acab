"""Kalman rank and PBH tests for single LTI pairs.

These are the reference oracles the network criteria are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InputError
from .linalg import (DEFAULT_TOL, TolerancePolicy, as_matrix, eig_left, nullspace_basis,
                     format_complex, rank_from_singular_values)


@dataclass(frozen=True)
class Witness:
    """Numerical evidence behind a negative verdict.

    ``vector`` is a left eigenvector (row) for controllability-type tests and a
    right eigenvector (column) for observability-type tests.  ``residual`` is
    the eigen-residual of that vector and ``input_residual`` the norm of
    ``v B`` (or ``C v``).  ``node`` is 1-based.
    """

    eigenvalue: complex | None = None
    vector: tuple[complex, ...] | None = None
    residual: float | None = None
    input_residual: float | None = None
    node: int | None = None
    reason: str | None = None


@dataclass(frozen=True)
class Verdict:
    holds: bool
    applicable: bool = True
    witness: Witness | None = None
    detail: str = ""
    error: str | None = None

    @property
    def failed(self) -> bool:
        """True for an applicable check that does not hold, or one that errored."""
        return self.error is not None or (self.applicable and not self.holds)


def _pair(A, B, left: str, right: str, transpose: bool = False):
    A = as_matrix(A, left)
    B = as_matrix(B, right)
    n = A.shape[0]
    if A.shape != (n, n):
        raise InputError(f"{left} must be square, got {A.shape[0]}x{A.shape[1]}")
    rows = B.shape[1] if transpose else B.shape[0]
    if rows != n:
        side = "columns" if transpose else "rows"
        raise InputError(f"{right} has {rows} {side}, expected {n}")
    return A, B


def controllability_matrix(A, B) -> np.ndarray:
    """``[B | AB | ... | A^(n-1) B]``."""
    A, B = _pair(A, B, "A", "B")
    blocks = [B]
    for _ in range(A.shape[0] - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def observability_matrix(C, A) -> np.ndarray:
    """``[C; CA; ...; C A^(n-1)]``."""
    A, C = _pair(A, C, "A", "C", transpose=True)
    blocks = [C]
    for _ in range(A.shape[0] - 1):
        blocks.append(blocks[-1] @ A)
    return np.vstack(blocks)


def krylov_rank(A, B, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    """Rank of the controllability matrix, computed by an orthogonal staircase.

    Builds an orthonormal basis of ``span{B, AB, A^2 B, ...}`` one block at a
    time, deflating directions whose norm after projection falls below
    ``sqrt(rank_rtol)`` on the norm-scaled pair.  Raw powers of ``A`` lose the
    small singular values of that matrix in double precision; this recursion
    does not.
    """
    A, B = _pair(A, B, "A", "B")
    n = A.shape[0]
    a = float(np.linalg.norm(A, 2))
    b = float(np.linalg.norm(B, 2)) if B.size else 0.0
    if b == 0.0:
        return 0
    An = A / a if a > 0 else A
    cutoff = math.sqrt(tol.rank_rtol)

    def directions(W):
        U, s, _ = scipy.linalg.svd(W, full_matrices=False, lapack_driver="gesvd")
        return U[:, s > cutoff]

    basis = directions(B / b)
    new = basis
    while 0 < new.shape[1] and basis.shape[1] < n:
        W = An @ new
        for _ in range(2):
            W = W - basis @ (basis.conj().T @ W)
        new = directions(W)
        basis = np.hstack([basis, new])
    return min(basis.shape[1], n)


def kalman_controllable(A, B, tol: TolerancePolicy = DEFAULT_TOL) -> Verdict:
    A, B = _pair(A, B, "A", "B")
    n = A.shape[0]
    r = krylov_rank(A, B, tol)
    return Verdict(r == n, detail=f"controllability matrix rank {r} of {n}")


def kalman_observable(C, A, tol: TolerancePolicy = DEFAULT_TOL) -> Verdict:
    A, C = _pair(A, C, "A", "C", transpose=True)
    n = A.shape[0]
    r = krylov_rank(A.conj().T, C.conj().T, tol)
    return Verdict(r == n, detail=f"observability matrix rank {r} of {n}")


def _left_null(M: np.ndarray, tol: TolerancePolicy):
    U, s, _ = scipy.linalg.svd(M, full_matrices=True, lapack_driver="gesvd")
    r = rank_from_singular_values(s, M.shape, tol)
    return r, U[:, r:].conj().T


def pbh_controllable(A, B, tol: TolerancePolicy = DEFAULT_TOL) -> Verdict:
    """``rank [A - lambda I | B] == n`` at every distinct eigenvalue of `A`.

    On failure the witness is a left eigenvector ``v`` with ``v B ~ 0`` at the
    first failing eigenvalue (eigenvalues in lexicographic order).
    """
    A, B = _pair(A, B, "A", "B")
    n = A.shape[0]
    eye = np.eye(n)
    spectrum = eig_left(A, tol)
    for entry in spectrum:
        lam = entry.value
        r, null_rows = _left_null(np.hstack([A - lam * eye, B]), tol)
        if r < n:
            v = null_rows[0]
            return Verdict(
                False,
                witness=Witness(lam, tuple(complex(x) for x in v),
                                float(np.linalg.norm(v @ A - lam * v)),
                                float(np.linalg.norm(v @ B))),
                detail=f"rank [A - lambda I | B] = {r} < {n} at lambda = {format_complex(lam)}",
            )
    return Verdict(True, detail=f"full rank at all {len(spectrum)} distinct eigenvalue(s)")


def pbh_observable(C, A, tol: TolerancePolicy = DEFAULT_TOL) -> Verdict:
    """No right eigenvector ``v`` of `A` with ``C v = 0``."""
    A, C = _pair(A, C, "A", "C", transpose=True)
    n = A.shape[0]
    eye = np.eye(n)
    spectrum = eig_left(A, tol)
    for entry in spectrum:
        lam = entry.value
        M = np.vstack([A - lam * eye, C])
        null = nullspace_basis(M, tol)
        if null.shape[1] > 0:
            v = null[:, 0]
            return Verdict(
                False,
                witness=Witness(lam, tuple(complex(x) for x in v),
                                float(np.linalg.norm(A @ v - lam * v)),
                                float(np.linalg.norm(C @ v))),
                detail=f"rank [A - lambda I; C] = {n - null.shape[1]} < {n} at lambda = {format_complex(lam)}",
            )
    return Verdict(True, detail=f"full rank at all {len(spectrum)} distinct eigenvalue(s)")

