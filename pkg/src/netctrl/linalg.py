"""Numerical primitives: rank, nullspace, clustering and left eigenvectors.

Everything here works in complex double precision.  Real inputs are promoted
so that complex-conjugate spectra need no special casing downstream.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ComputationError, InputError

EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class TolerancePolicy:
    """Tolerances shared by every numerical decision in the package.

    Parameters
    ----------
    rank_rtol : float
        Relative singular-value cutoff factor.  A singular value counts
        towards the rank when it exceeds ``rank_rtol * max(rows, cols) * s_max``.
    eig_cluster_atol : float
        Eigenvalues closer than this are treated as one.
    residual_atol : float
        Acceptance threshold for eigen-residuals and orthogonality tests.
    """

    rank_rtol: float = EPS
    eig_cluster_atol: float = 1e-8
    residual_atol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rtol", "eig_cluster_atol", "residual_atol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InputError(f"tolerance {name} must be a positive finite number, got {value!r}")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "TolerancePolicy":
        """Defaults, then ``NETCTRL_TOL_{RANK,EIG,RES}``, then explicit overrides."""
        env = os.environ if environ is None else environ
        values = {}
        for key, name in (("RANK", "rank_rtol"), ("EIG", "eig_cluster_atol"), ("RES", "residual_atol")):
            raw = env.get(f"NETCTRL_TOL_{key}")
            if raw:
                try:
                    values[name] = float(raw)
                except ValueError:
                    raise InputError(f"NETCTRL_TOL_{key}={raw!r} is not a number") from None
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> dict:
        return {
            "rank_rtol": self.rank_rtol,
            "eig_cluster_atol": self.eig_cluster_atol,
            "residual_atol": self.residual_atol,
        }


DEFAULT_TOL = TolerancePolicy()


def as_matrix(M, name: str = "matrix", dtype=complex) -> np.ndarray:
    """Return `M` as a finite 2-D array, raising InputError otherwise."""
    try:
        arr = np.array(M, dtype=dtype)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: not a numeric matrix ({exc})") from None
    if arr.ndim != 2:
        raise InputError(f"{name}: expected a 2-D matrix, got {arr.ndim} dimension(s)")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name}: contains non-finite entries")
    return arr


def _singular_values(M: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.svd(M, compute_uv=False, lapack_driver="gesvd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ComputationError(f"SVD failed for {M.shape[0]}x{M.shape[1]} matrix: {exc}") from None


def rank_from_singular_values(s: np.ndarray, shape, tol: TolerancePolicy) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = tol.rank_rtol * max(shape) * s[0]
    return int(np.count_nonzero(s > cutoff))


def numerical_rank(M, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    """Number of singular values above ``rank_rtol * max(rows, cols) * s_max``."""
    M = as_matrix(M)
    if M.size == 0:
        return 0
    return rank_from_singular_values(_singular_values(M), M.shape, tol)


def nullspace_basis(M, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the right nullspace of `M`.

    Returns an array of shape ``(cols, k)`` whose columns span the nullspace at
    the numerical-rank cutoff; ``k == 0`` exactly when `M` has full column rank.
    """
    M = as_matrix(M)
    rows, cols = M.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=complex)
    if rows == 0:
        return np.eye(cols, dtype=complex)
    try:
        _, s, vh = scipy.linalg.svd(M, full_matrices=True, lapack_driver="gesvd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ComputationError(f"SVD failed for {rows}x{cols} matrix: {exc}") from None
    r = rank_from_singular_values(s, M.shape, tol)
    return vh[r:].conj().T.copy()


def left_nullspace_basis(M, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Rows ``w`` with ``w @ M == 0``, orthonormal, shape ``(k, rows)``."""
    M = as_matrix(M)
    return nullspace_basis(M.conj().T, tol).conj().T


def cluster_values(values, atol: float) -> list[tuple[complex, int]]:
    """Single-linkage clustering of complex numbers.

    Two values share a cluster when a chain of pairwise gaps no larger than
    `atol` connects them.  Returns ``(mean, count)`` pairs sorted by real then
    imaginary part of the mean.
    """
    if not atol > 0:
        raise InputError("atol must be positive")
    vals = np.asarray(list(values), dtype=complex).ravel()
    if not np.all(np.isfinite(vals)):
        raise InputError("cluster_values: non-finite input")
    groups = [[i] for i in range(vals.size)]
    return [(complex(vals[g].mean()), len(g)) for g in _sorted_groups(_link(vals, groups, atol), vals)]


def _link(vals: np.ndarray, groups: list[list[int]], atol: float) -> list[list[int]]:
    parent = list(range(len(groups)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(len(groups)):
        for b in range(a + 1, len(groups)):
            if find(a) == find(b):
                continue
            if any(abs(vals[i] - vals[j]) <= atol for i in groups[a] for j in groups[b]):
                parent[find(b)] = find(a)
    merged: dict[int, list[int]] = {}
    for g, members in enumerate(groups):
        merged.setdefault(find(g), []).extend(members)
    return list(merged.values())


def _sort_key(z: complex):
    # rounding keeps conjugate pairs and near-ties in a stable order
    return (round(z.real, 9), round(z.imag, 9))


def _sorted_groups(groups, vals):
    return sorted(groups, key=lambda g: _sort_key(complex(vals[g].mean())))


@dataclass(frozen=True)
class SpectrumEntry:
    """One distinct eigenvalue with its left eigenvectors (rows, unit norm)."""

    value: complex
    algebraic_multiplicity: int
    left_eigenvectors: np.ndarray = field(repr=False, compare=False)

    @property
    def geometric_multiplicity(self) -> int:
        return int(self.left_eigenvectors.shape[0])


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[SpectrumEntry, ...]
    order: int

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def values(self) -> list[complex]:
        """Eigenvalues repeated according to algebraic multiplicity."""
        out = []
        for e in self.entries:
            out.extend([e.value] * e.algebraic_multiplicity)
        return out

    def summary(self) -> list[tuple[complex, int]]:
        return [(e.value, e.algebraic_multiplicity) for e in self.entries]

    def find(self, value: complex, atol: float) -> SpectrumEntry | None:
        best = min(self.entries, key=lambda e: abs(e.value - value), default=None)
        if best is not None and abs(best.value - value) <= atol:
            return best
        return None


def _smallest_singular_value(M: np.ndarray) -> float:
    s = _singular_values(M)
    return float(s[-1]) if s.size else 0.0


def _looks_split(M: np.ndarray, pts: np.ndarray, scale: float, tol: TolerancePolicy) -> bool:
    """Whether `pts` can be roundoff copies of one defective eigenvalue of `M`.

    Three tests, cheapest first: the points lie within ``10 * scale * eps**(1/k)``
    of their mean ``mu``; the power sums ``sum (p - mu)**j`` for ``j = 2..k``
    are at roundoff level, as they are for a perturbed nilpotent block (trace
    identity) but not for distinct eigenvalues placed symmetrically; and
    ``M - mu I`` is numerically singular.
    """
    k = pts.size
    n = M.shape[0]
    mu = pts.mean()
    d = pts - mu
    if np.max(np.abs(d)) > max(tol.eig_cluster_atol, 10.0 * scale * EPS ** (1.0 / k)):
        return False
    for j in range(2, k + 1):
        if abs(np.sum(d ** j)) > k * n * 10.0 ** j * EPS * scale ** j:
            return False
    return _smallest_singular_value(M - mu * np.eye(n)) <= tol.residual_atol * scale


def _merge_defective(M: np.ndarray, vals: np.ndarray, groups, tol: TolerancePolicy):
    """Merge clusters that are split copies of one defective eigenvalue.

    A Jordan block of size k perturbed by roundoff splits into k eigenvalues
    about eps**(1/k) apart, while their mean stays accurate.  Starting from
    each cluster, nearest neighbouring clusters are added one at a time and
    the largest set passing :func:`_looks_split` is merged; this repeats
    until nothing changes.
    """
    n = M.shape[0]
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    reach = 10.0 * scale * EPS ** (1.0 / n)
    while len(groups) > 1:
        means = [vals[g].mean() for g in groups]
        best = None
        for a in range(len(groups)):
            near = sorted((b for b in range(len(groups)) if b != a and abs(means[b] - means[a]) <= 2 * reach),
                          key=lambda b: abs(means[b] - means[a]))
            chosen = [a]
            for b in near:
                chosen = chosen + [b]
                members = [i for c in chosen for i in groups[c]]
                if (best is None or len(members) > best[0]) and _looks_split(M, vals[members], scale, tol):
                    best = (len(members), tuple(chosen))
        if best is None:
            break
        merged = [i for c in best[1] for i in groups[c]]
        groups = [g for c, g in enumerate(groups) if c not in best[1]] + [merged]
    return groups


def eigenvalues(M) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise InputError(f"eigenvalues need a square matrix, got {M.shape[0]}x{M.shape[1]}")
    try:
        return scipy.linalg.eigvals(M)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ComputationError(f"eigenvalue solver failed for matrix of order {M.shape[0]}: {exc}") from None


def eig_left(M, tol: TolerancePolicy = DEFAULT_TOL) -> Spectrum:
    """Distinct eigenvalues of `M` with bases of their left eigenspaces.

    Each left eigenspace is the nullspace of ``(M - lambda I)^H``, so the
    number of returned vectors is the numerical geometric multiplicity.
    Defective eigenvalues keep fewer vectors than their algebraic
    multiplicity; nothing is padded with generalized eigenvectors.
    """
    M = as_matrix(M)
    n = M.shape[0]
    real_input = not np.any(M.imag)
    vals = eigenvalues(M)
    groups = _link(vals, [[i] for i in range(n)], tol.eig_cluster_atol)
    groups = _merge_defective(M, vals, groups, tol)
    eye = np.eye(n)
    entries = []
    for g in _sorted_groups(groups, vals):
        lam = complex(vals[g].mean())
        if real_input and abs(lam.imag) <= tol.eig_cluster_atol:
            lam = complex(lam.real, 0.0)
        shifted = M - lam * eye
        basis = left_nullspace_basis(shifted, tol)
        if basis.shape[0] == 0:
            # eigenvalue error left the shift just above the cutoff; keep the best direction
            # S^H x = 0 for x = vh[-1]^H, so the left null row of S is vh[-1]
            _, _, vh = scipy.linalg.svd(shifted.conj().T, lapack_driver="gesvd")
            basis = vh[-1:]
        if basis.shape[0] > len(g):
            basis = _closest_rows(shifted, basis, len(g))
        entries.append(SpectrumEntry(lam, len(g), basis))
    return Spectrum(tuple(entries), n)


def _closest_rows(shifted: np.ndarray, basis: np.ndarray, k: int) -> np.ndarray:
    # restrict an over-wide basis to its k best left-null directions
    _, _, vh = scipy.linalg.svd(basis @ shifted @ shifted.conj().T @ basis.conj().T)
    return vh[-k:] @ basis


def left_residual(v, M, lam: complex) -> float:
    """``||v M - lam v||`` for a row vector `v`."""
    v = np.asarray(v, dtype=complex).ravel()
    return float(np.linalg.norm(v @ np.asarray(M) - lam * v))


def right_residual(v, M, lam: complex) -> float:
    v = np.asarray(v, dtype=complex).ravel()
    return float(np.linalg.norm(np.asarray(M) @ v - lam * v))


def format_complex(z: complex, digits: int = 6) -> str:
    """Compact text for a complex scalar, real part only when the imaginary part is zero."""
    z = complex(z)
    # components at roundoff level relative to |z| print as 0
    floor = 1e-12 * max(1.0, abs(z))
    z = complex(0.0 if abs(z.real) < floor else z.real, 0.0 if abs(z.imag) < floor else z.imag)
    if z.imag == 0:
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"
