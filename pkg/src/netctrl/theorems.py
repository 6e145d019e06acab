"""Network-level controllability and observability criteria.

The checks here work node by node and are cross-validated against the
whole-network oracles in :mod:`netctrl.classical`:

* a per-node matrix-equation test that is PBH written blockwise;
* a spectral characterisation for block-triangular couplings, where every left
  eigenvector of the network matrix is a zero-padded left eigenvector of one
  node block;
* the resulting decomposed controllability test (every node block
  controllable and every node externally driven);
* node-wise observability;
* three necessary conditions and the path/cycle/star/wheel special cases.

Every verdict carries an ``applicable`` flag instead of raising when a
criterion's hypotheses fail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import AssembledSystem, assemble
from .classical import Verdict, Witness, pbh_controllable, pbh_observable
from .errors import InputError
from .linalg import (DEFAULT_TOL, Spectrum, TolerancePolicy, eig_left, format_complex, left_nullspace_basis,
                     numerical_rank)
from .network import NetworkSpec, validate

NO_INPUT = "no external control input"
UNCONTROLLABLE_PAIR = "uncontrollable pair"


def node_block(spec: NetworkSpec, i: int) -> np.ndarray:
    """``A_i + beta_ii H_i C_i`` for 0-based `i`."""
    node = spec.nodes[i]
    return node.A + spec.L[i, i] * (node.H @ node.C)


def node_spectra(spec: NetworkSpec, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[Spectrum, ...]:
    return tuple(eig_left(node_block(spec, i), tol) for i in range(spec.N))


def _cvec(v) -> tuple[complex, ...]:
    return tuple(complex(x) for x in np.asarray(v).ravel())


def _scale(M) -> float:
    return max(1.0, float(np.linalg.norm(M, 2)))


# -- per-node matrix equations -------------------------------------------------

def thm1_solution_space(sys: AssembledSystem, spec: NetworkSpec, lam: complex,
                        tol: TolerancePolicy = DEFAULT_TOL) -> list[tuple[np.ndarray, ...]]:
    """Basis of the solutions ``(v_1, ..., v_N)`` of the per-node equations at `lam`.

    The equations ``v_i (lam I - A_i) - sum_j beta_ji v_j H_j C_i = 0`` and
    ``delta_i v_i B_i = 0`` stacked over all nodes say exactly that
    ``v = [v_1 ... v_N]`` is in the left nullspace of ``[calA - lam I | calB]``;
    each basis vector of that nullspace is returned cut into node pieces.
    """
    validate(spec)
    n = sys.order
    M = np.hstack([sys.calA - complex(lam) * np.eye(n), sys.calB])
    return [sys.split_row(row) for row in left_nullspace_basis(M, tol)]


def thm1_controllable(sys: AssembledSystem, spec: NetworkSpec,
                      tol: TolerancePolicy = DEFAULT_TOL) -> Verdict:
    """Controllable iff the per-node equations have only the zero solution at every eigenvalue."""
    spectrum = eig_left(sys.calA, tol)
    for entry in spectrum:
        basis = thm1_solution_space(sys, spec, entry.value, tol)
        if basis:
            v = np.concatenate(basis[0])
            support = [i + 1 for i, piece in enumerate(basis[0])
                       if np.linalg.norm(piece) > tol.residual_atol]
            return Verdict(
                False,
                witness=Witness(entry.value, _cvec(v),
                                float(np.linalg.norm(v @ sys.calA - entry.value * v)),
                                float(np.linalg.norm(v @ sys.calB))),
                detail=(f"{len(basis)}-dimensional nonzero solution space at lambda = "
                        f"{format_complex(entry.value)}, supported on node(s) {support}"),
            )
    return Verdict(True, detail=f"only the zero solution at all {len(spectrum)} distinct eigenvalue(s)")


# -- coupling hypotheses -------------------------------------------------------

@dataclass(frozen=True)
class HypothesisViolation:
    """One failed coupling hypothesis; node indices are 1-based.

    ``kind`` is ``"lower_block"`` (``H_i C_j`` nonzero below the diagonal) or
    ``"orthogonality"`` (left eigenvector ``k`` of node ``i`` at ``eigenvalue``
    does not annihilate ``H_i C_j``).  ``value`` is the offending norm.
    """

    i: int
    j: int
    kind: str
    value: float
    eigenvalue: complex | None = None
    k: int | None = None


@dataclass(frozen=True)
class HypothesisReport:
    lower_blocks_vanish: bool
    upper_orthogonality: bool
    violations: tuple[HypothesisViolation, ...] = ()

    @property
    def satisfied(self) -> bool:
        return self.lower_blocks_vanish and self.upper_orthogonality


def check_hypotheses(spec: NetworkSpec, tol: TolerancePolicy = DEFAULT_TOL,
                     spectra: tuple[Spectrum, ...] | None = None) -> HypothesisReport:
    """Test the block-triangularity and orthogonality hypotheses.

    For every coupled pair (``beta_ij != 0``): below the diagonal (``i > j``)
    ``H_i C_j`` must vanish entrywise; above it (``i < j``) every left
    eigenvector of node block ``i`` must annihilate ``H_i C_j``.
    """
    validate(spec)
    if spectra is None:
        spectra = node_spectra(spec, tol)
    violations = []
    lower_ok = upper_ok = True
    for i in range(spec.N):
        Hi = spec.nodes[i].H
        for j in range(spec.N):
            if i == j or spec.L[i, j] == 0.0:
                continue
            Cj = spec.nodes[j].C
            HC = Hi @ Cj
            bound = tol.residual_atol * (1.0 + np.linalg.norm(Hi, 2) * np.linalg.norm(Cj, 2))
            if i > j:
                worst = float(np.max(np.abs(HC))) if HC.size else 0.0
                if worst > bound:
                    lower_ok = False
                    violations.append(HypothesisViolation(i + 1, j + 1, "lower_block", worst))
                continue
            for entry in spectra[i]:
                for k, zeta in enumerate(entry.left_eigenvectors, start=1):
                    value = float(np.linalg.norm(zeta @ HC))
                    if value > bound * np.linalg.norm(zeta):
                        upper_ok = False
                        violations.append(HypothesisViolation(
                            i + 1, j + 1, "orthogonality", value, entry.value, k))
    return HypothesisReport(lower_ok, upper_ok, tuple(violations))


# -- spectral characterisation --------------------------------------------------

@dataclass(frozen=True)
class LiftedEigenvector:
    """Left eigenvector of node block ``node`` zero-padded to the network size."""

    node: int
    eigenvalue: complex
    k: int
    eta: tuple[complex, ...]
    residual: float


@dataclass(frozen=True)
class SpectrumCheck:
    applicable: bool
    hypotheses: HypothesisReport
    node_spectra: tuple[Spectrum, ...]
    network_spectrum: Spectrum
    lifted: tuple[LiftedEigenvector, ...] = ()
    union_match: bool | None = None
    complete: bool | None = None
    max_residual: float | None = None
    detail: str = ""

    def verdict(self, tol: TolerancePolicy = DEFAULT_TOL) -> Verdict:
        if not self.applicable:
            return Verdict(False, applicable=False, detail=self.detail)
        ok = bool(self.union_match) and (self.max_residual or 0.0) <= tol.residual_atol
        return Verdict(ok, detail=self.detail)


def _match_tol(tol: TolerancePolicy, M) -> float:
    return tol.eig_cluster_atol * _scale(M)


def thm2_spectrum(sys: AssembledSystem, spec: NetworkSpec,
                  tol: TolerancePolicy = DEFAULT_TOL) -> SpectrumCheck:
    """Spectrum of the network as the union of node-block spectra, with lifted eigenvectors.

    Only meaningful when :func:`check_hypotheses` passes; otherwise the result
    is marked not applicable and no claim is made.  ``complete`` records
    whether, at every network eigenvalue, the lifted vectors are as many as the
    network's geometric multiplicity.
    """
    spectra = node_spectra(spec, tol)
    hyp = check_hypotheses(spec, tol, spectra)
    network = eig_left(sys.calA, tol)
    if not hyp.satisfied:
        return SpectrumCheck(False, hyp, spectra, network,
                             detail=f"coupling hypotheses fail ({len(hyp.violations)} violation(s))")
    lifted = []
    for i, spectrum in enumerate(spectra):
        for entry in spectrum:
            for k, zeta in enumerate(entry.left_eigenvectors, start=1):
                eta = sys.lift(i, zeta / np.linalg.norm(zeta))
                res = float(np.linalg.norm(eta @ sys.calA - entry.value * eta))
                lifted.append(LiftedEigenvector(i + 1, entry.value, k, _cvec(eta), res))

    mtol = _match_tol(tol, sys.calA)
    union_match = True
    complete = True
    used = [[False] * len(s) for s in spectra]
    for net in network:
        alg = 0
        for i, spectrum in enumerate(spectra):
            for e, entry in enumerate(spectrum):
                if abs(entry.value - net.value) <= mtol:
                    used[i][e] = True
                    alg += entry.algebraic_multiplicity
        if alg != net.algebraic_multiplicity:
            union_match = False
        count = sum(1 for lv in lifted if abs(lv.eigenvalue - net.value) <= mtol)
        if count != net.geometric_multiplicity:
            complete = False
    if not all(all(row) for row in used):
        union_match = False
    max_res = max((lv.residual for lv in lifted), default=0.0)
    detail = (f"union of node spectra {'matches' if union_match else 'does not match'} the network spectrum; "
              f"{len(lifted)} lifted eigenvector(s), max residual {max_res:.3g}"
              + ("" if complete else "; lifted vectors do not span every left eigenspace"))
    return SpectrumCheck(True, hyp, spectra, network, tuple(lifted), union_match, complete, max_res, detail)


# -- decomposed controllability ------------------------------------------------

def _lifted_witness(sys: AssembledSystem, i: int, zeta, lam: complex, reason: str) -> Witness:
    eta = sys.lift(i, np.asarray(zeta) / np.linalg.norm(zeta))
    return Witness(lam, _cvec(eta),
                   float(np.linalg.norm(eta @ sys.calA - lam * eta)),
                   float(np.linalg.norm(eta @ sys.calB)),
                   node=i + 1, reason=reason)


def thm3_controllable(sys: AssembledSystem, spec: NetworkSpec,
                      tol: TolerancePolicy = DEFAULT_TOL) -> Verdict:
    """Decomposed test: every node block controllable and every node driven.

    Applicable only when the coupling hypotheses hold and the lifted
    eigenvectors account for every left eigenvector of the network matrix.
    """
    check = thm2_spectrum(sys, spec, tol)
    if not check.applicable:
        return Verdict(False, applicable=False, detail=check.detail)
    if not check.complete or not check.union_match:
        return Verdict(False, applicable=False,
                       detail="lifted node eigenvectors do not certify the network spectrum; use the oracles")
    failures = []
    witness = None
    for i in range(spec.N):
        node = spec.nodes[i]
        pair = pbh_controllable(node_block(spec, i), node.B, tol)
        if not pair.holds:
            block = f"A_{i + 1}" if spec.L[i, i] == 0.0 else f"A_{i + 1} + beta_{i + 1}{i + 1} H_{i + 1} C_{i + 1}"
            failures.append(f"node {i + 1}: {UNCONTROLLABLE_PAIR} ({block}, B_{i + 1})")
            if witness is None:
                w = pair.witness
                witness = _lifted_witness(sys, i, w.vector, w.eigenvalue, UNCONTROLLABLE_PAIR)
        if spec.delta[i] == 0:
            failures.append(f"node {i + 1}: {NO_INPUT}")
            if witness is None:
                entry = check.node_spectra[i].entries[0]
                witness = _lifted_witness(sys, i, entry.left_eigenvectors[0], entry.value, NO_INPUT)
    if failures:
        return Verdict(False, witness=witness, detail="; ".join(failures))
    return Verdict(True, detail="every node block is controllable and every node has external input")


# -- observability ------------------------------------------------------------

def thm4_observable(spec: NetworkSpec, tol: TolerancePolicy = DEFAULT_TOL,
                    sys: AssembledSystem | None = None) -> Verdict:
    """The network is observable iff every ``(C_i, A_i)`` is; the topology plays no part."""
    sys = assemble(spec) if sys is None else sys
    bad = []
    witness = None
    for i, node in enumerate(spec.nodes):
        v = pbh_observable(node.C, node.A, tol)
        if v.holds:
            continue
        bad.append(i + 1)
        if witness is None:
            lam = v.witness.eigenvalue
            V = sys.lift(i, v.witness.vector)
            witness = Witness(lam, _cvec(V),
                              float(np.linalg.norm(sys.calA @ V - lam * V)),
                              float(np.linalg.norm(sys.calC @ V)),
                              node=i + 1, reason="unobservable node")
    if bad:
        return Verdict(False, witness=witness, detail=f"unobservable node(s): {bad}")
    return Verdict(True, detail="every node pair (C_i, A_i) is observable")


# -- necessary conditions --------------------------------------------------------

def nc_no_incoming(spec: NetworkSpec, tol: TolerancePolicy = DEFAULT_TOL,
                   sys: AssembledSystem | None = None) -> Verdict:
    """A node without incoming edges must be driven and have ``(A_i, B_i)`` controllable."""
    validate(spec)
    sources = [i for i in range(spec.N) if not np.any(spec.L[i] != 0.0)]
    if not sources:
        return Verdict(False, applicable=False, detail="every node has an incoming edge")
    sys = assemble(spec) if sys is None else sys
    failures = []
    witness = None
    for i in sources:
        node = spec.nodes[i]
        pair = pbh_controllable(node.A, node.B, tol)
        if not pair.holds:
            failures.append(f"node {i + 1}: {UNCONTROLLABLE_PAIR} (A_{i + 1}, B_{i + 1})")
            if witness is None:
                witness = _lifted_witness(sys, i, pair.witness.vector, pair.witness.eigenvalue,
                                          UNCONTROLLABLE_PAIR)
        if spec.delta[i] == 0:
            failures.append(f"node {i + 1}: {NO_INPUT}")
            if witness is None:
                entry = eig_left(node.A, tol).entries[0]
                witness = _lifted_witness(sys, i, entry.left_eigenvectors[0], entry.value, NO_INPUT)
    nodes = [i + 1 for i in sources]
    if failures:
        return Verdict(False, witness=witness, detail="; ".join(failures))
    return Verdict(True, detail=f"source node(s) {nodes} are driven and controllable")


def nc_no_external(spec: NetworkSpec, tol: TolerancePolicy = DEFAULT_TOL,
                   sys: AssembledSystem | None = None) -> Verdict:
    """An undriven node must have ``(A_i, H_i)`` controllable."""
    validate(spec)
    undriven = [i for i in range(spec.N) if spec.delta[i] == 0]
    if not undriven:
        return Verdict(False, applicable=False, detail="every node has external input")
    sys = assemble(spec) if sys is None else sys
    failures = []
    witness = None
    for i in undriven:
        node = spec.nodes[i]
        pair = pbh_controllable(node.A, node.H, tol)
        if not pair.holds:
            failures.append(f"node {i + 1}: (A_{i + 1}, H_{i + 1}) is uncontrollable")
            if witness is None:
                witness = _lifted_witness(sys, i, pair.witness.vector, pair.witness.eigenvalue,
                                          "uncontrollable (A, H) at undriven node")
    if failures:
        return Verdict(False, witness=witness, detail="; ".join(failures))
    return Verdict(True, detail=f"undriven node(s) {[i + 1 for i in undriven]} have (A_i, H_i) controllable")


def nc_rank_bound(spec: NetworkSpec, tol: TolerancePolicy = DEFAULT_TOL) -> Verdict:
    """When ``N`` exceeds the summed input rank of driven nodes, some node must be observable.

    Implements the condition exactly as stated for ``(C_j, A_j + beta_jj H_j C_j)``.
    It is not a valid necessary condition in general: nodes unobservable at
    different eigenvalues can still form a controllable network.
    """
    validate(spec)
    driven = [i for i in range(spec.N) if spec.delta[i] == 1]
    s = sum(numerical_rank(spec.nodes[i].B, tol) for i in driven)
    if spec.N <= s:
        return Verdict(False, applicable=False, detail=f"N = {spec.N} <= summed input rank {s}")
    observable = [j + 1 for j in range(spec.N)
                  if pbh_observable(spec.nodes[j].C, node_block(spec, j), tol).holds]
    if observable:
        return Verdict(True, detail=f"N = {spec.N} > {s}; observable node(s) {observable}")
    return Verdict(False, detail=f"N = {spec.N} > {s} and no node (C_j, A_j + beta_jj H_j C_j) is observable")


# -- special topologies ----------------------------------------------------------

TOPOLOGY_KINDS = ("path", "cycle", "star", "wheel")


def _pattern(kind: str, N: int, hub: int) -> tuple[set, set]:
    """Required and optional edge sets (0-based ``(target, source)``)."""
    required, optional = set(), set()
    if kind in ("path", "cycle"):
        required = {(i + 1, i) for i in range(N - 1)}
        if kind == "cycle":
            required.add((0, N - 1))
    elif kind in ("star", "wheel"):
        required = {(i, hub) for i in range(N) if i != hub}
        if kind == "wheel":
            rim = [i for i in range(N) if i != hub]
            required |= {(rim[(k + 1) % len(rim)], rim[k]) for k in range(len(rim))}
            optional.add((hub, rim[-1]))
    else:
        raise InputError(f"unknown topology kind {kind!r}; expected one of {TOPOLOGY_KINDS}")
    return required, optional


def _min_nodes(kind: str) -> int:
    return {"path": 2, "cycle": 3, "star": 2, "wheel": 4}[kind]


def match_topology(L, kind: str, hub: int | None = None) -> tuple[bool, tuple[int, int] | None, int | None]:
    """Compare the sparsity of `L` with a named topology.

    Returns ``(matches, first_offending_entry, hub)`` with 1-based indices.
    For star and wheel the hub is inferred when not given.
    """
    L = np.asarray(L)
    N = L.shape[0]
    if kind not in TOPOLOGY_KINDS:
        raise InputError(f"unknown topology kind {kind!r}; expected one of {TOPOLOGY_KINDS}")
    if N < _min_nodes(kind):
        return False, None, hub
    hubs = [hub - 1] if hub is not None else (list(range(N)) if kind in ("star", "wheel") else [0])
    if hub is not None and not 1 <= hub <= N:
        raise InputError(f"hub {hub} out of range 1..{N}")
    first_bad = None
    for h in hubs:
        required, optional = _pattern(kind, N, h)
        bad = None
        for i in range(N):
            for j in range(N):
                nz = L[i, j] != 0.0
                if nz != ((i, j) in required) and not (nz and (i, j) in optional):
                    bad = (i + 1, j + 1)
                    break
            if bad:
                break
        if bad is None:
            return True, None, (h + 1 if kind in ("star", "wheel") else None)
        if first_bad is None:
            first_bad = bad
    return False, first_bad, hub


def special_topology_controllable(spec: NetworkSpec, kind: str, tol: TolerancePolicy = DEFAULT_TOL,
                                  hub: int | None = None, sys: AssembledSystem | None = None) -> Verdict:
    """Controllability for path, cycle, star and wheel networks.

    The topologies have no self-loops, so node blocks are plain ``A_i``.  The
    decomposed test decides the answer when its coupling hypotheses hold.
    For a path, node 1 has no incoming edge, so a driven, controllable
    ``(A_1, B_1)`` is necessary in any case and is reported first.
    """
    validate(spec)
    ok, offending, hub = match_topology(spec.L, kind, hub)
    if not ok:
        where = f"; first offending entry {offending}" if offending else ""
        return Verdict(False, applicable=False, detail=f"L does not have {kind} structure{where}")
    sys = assemble(spec) if sys is None else sys
    label = kind if hub is None else f"{kind} (hub {hub})"
    prefix = ""
    if kind == "path":
        node = spec.nodes[0]
        pair = pbh_controllable(node.A, node.B, tol)
        reasons = []
        witness = None
        if not pair.holds:
            reasons.append(f"(A_1, B_1) is an {UNCONTROLLABLE_PAIR}")
            witness = _lifted_witness(sys, 0, pair.witness.vector, pair.witness.eigenvalue, UNCONTROLLABLE_PAIR)
        if spec.delta[0] == 0:
            reasons.append(f"node 1 has {NO_INPUT}")
            if witness is None:
                entry = eig_left(node.A, tol).entries[0]
                witness = _lifted_witness(sys, 0, entry.left_eigenvectors[0], entry.value, NO_INPUT)
        if reasons:
            return Verdict(False, witness=witness,
                           detail="path necessary condition on node 1 fails: " + "; ".join(reasons))
        prefix = "path necessary condition on node 1 holds; "
    verdict = thm3_controllable(sys, spec, tol)
    if not verdict.applicable:
        return Verdict(False, applicable=False,
                       detail=f"{prefix}{label} coupling hypotheses fail: {verdict.detail}")
    return Verdict(verdict.holds, witness=verdict.witness, detail=f"{prefix}{label}: {verdict.detail}")

