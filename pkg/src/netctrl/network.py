"""Networked system description, validation and topology generators.

Edge convention: ``L[i, j] != 0`` is an edge from node ``j`` into node ``i``
(row = target).  Node indices in user-facing messages are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ValidationError


def _real_matrix(value, label: str) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{label}: not a real numeric matrix") from None
    if arr.ndim != 2:
        raise InputError(f"{label}: expected a 2-D matrix, got {arr.ndim} dimension(s)")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{label}: contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NodeDynamics:
    """Matrices of one node: state ``A``, input ``B``, output ``C``, inner coupling ``H``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        for name in "ABCH":
            object.__setattr__(self, name, _real_matrix(getattr(self, name), name))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.B.shape[1]

    def __eq__(self, other):
        if not isinstance(other, NodeDynamics):
            return NotImplemented
        return all(np.array_equal(getattr(self, k), getattr(other, k)) for k in "ABCH")

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Topology:
    """Coupling weights ``L`` (N x N, row = target) and input indicators ``delta``."""

    L: np.ndarray
    delta: tuple[int, ...]

    def __post_init__(self):
        L = _real_matrix(self.L, "L")
        if L.shape[0] != L.shape[1] or L.shape[0] < 1:
            raise InputError(f"L must be square of order >= 1, got {L.shape[0]}x{L.shape[1]}")
        delta = tuple(self.delta)
        bad = [d for d in delta if isinstance(d, bool) or d not in (0, 1)]
        if bad:
            raise InputError(f"delta entries must be 0 or 1, got {bad[0]!r}")
        if len(delta) != L.shape[0]:
            raise InputError(f"delta has length {len(delta)} but L has order {L.shape[0]}")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "delta", tuple(int(d) for d in delta))

    @property
    def order(self) -> int:
        return self.L.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Topology):
            return NotImplemented
        return np.array_equal(self.L, other.L) and self.delta == other.delta

    __hash__ = None


@dataclass(frozen=True)
class NetworkSpec:
    nodes: tuple[NodeDynamics, ...]
    topology: Topology
    m: int

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    @property
    def N(self) -> int:
        return len(self.nodes)

    @property
    def L(self) -> np.ndarray:
        return self.topology.L

    @property
    def delta(self) -> tuple[int, ...]:
        return self.topology.delta


def validate(spec: NetworkSpec) -> tuple[int, int]:
    """Check all dimensional invariants and return ``(total_state_dim, total_input_dim)``.

    Raises
    ------
    ValidationError
        Listing every mismatch found, e.g. ``node 2: C has 3 rows, expected m=2``.
    """
    problems = []
    m = spec.m
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 1:
        problems.append(f"m must be a positive integer, got {m!r}")
        m = None
    if len(spec.nodes) != spec.topology.order:
        problems.append(f"{len(spec.nodes)} node(s) given but L has order {spec.topology.order}")
    if not spec.nodes:
        problems.append("network has no nodes")
    for idx, node in enumerate(spec.nodes, start=1):
        A, B, C, H = node.A, node.B, node.C, node.H
        where = f"node {idx}"
        if A.shape[0] != A.shape[1] or A.shape[0] < 1:
            problems.append(f"{where}: A must be square and non-empty, got {A.shape[0]}x{A.shape[1]}")
            continue
        n = A.shape[0]
        if B.shape[0] != n:
            problems.append(f"{where}: B has {B.shape[0]} rows, expected n={n}")
        if B.shape[1] < 1:
            problems.append(f"{where}: B has no columns")
        if C.shape[1] != n:
            problems.append(f"{where}: C has {C.shape[1]} columns, expected n={n}")
        if H.shape[0] != n:
            problems.append(f"{where}: H has {H.shape[0]} rows, expected n={n}")
        if m is not None:
            if C.shape[0] != m:
                problems.append(f"{where}: C has {C.shape[0]} rows, expected m={m}")
            if H.shape[1] != m:
                problems.append(f"{where}: H has {H.shape[1]} columns, expected m={m}")
    if problems:
        raise ValidationError(problems)
    return sum(node.n for node in spec.nodes), sum(node.p for node in spec.nodes)


def _weights(weights, count: int, what: str) -> list[float]:
    weights = [float(w) for w in weights]
    if len(weights) != count:
        raise InputError(f"{what}: expected {count} weight(s), got {len(weights)}")
    if any(w == 0.0 or not np.isfinite(w) for w in weights):
        raise InputError(f"{what}: weights must be finite and nonzero (a zero weight means no edge)")
    return weights


def _delta(delta, N: int) -> tuple[int, ...]:
    return tuple(delta) if delta is not None else (1,) * N


def path_topology(N: int, weights=None, delta=None) -> Topology:
    """Directed path ``1 -> 2 -> ... -> N``; ``weights[i]`` sits at ``L[i+1, i]``."""
    if N < 2:
        raise InputError("path topology needs N >= 2")
    w = _weights(weights if weights is not None else [1.0] * (N - 1), N - 1, "path")
    L = np.zeros((N, N))
    for i in range(N - 1):
        L[i + 1, i] = w[i]
    return Topology(L, _delta(delta, N))


def cycle_topology(N: int, weights=None, delta=None) -> Topology:
    """Directed cycle ``1 -> 2 -> ... -> N -> 1``; the last weight closes the cycle."""
    if N < 3:
        raise InputError("cycle topology needs N >= 3")
    w = _weights(weights if weights is not None else [1.0] * N, N, "cycle")
    L = np.zeros((N, N))
    for i in range(N - 1):
        L[i + 1, i] = w[i]
    L[0, N - 1] = w[N - 1]
    return Topology(L, _delta(delta, N))


def _check_hub(N: int, hub: int) -> int:
    if not 1 <= hub <= N:
        raise InputError(f"hub {hub} out of range 1..{N}")
    return hub - 1


def star_topology(N: int, hub: int = 1, weights=None, delta=None) -> Topology:
    """Hub ``hub`` (1-based) broadcasts to every other node: ``L[i, hub] != 0``."""
    if N < 2:
        raise InputError("star topology needs N >= 2")
    h = _check_hub(N, hub)
    w = _weights(weights if weights is not None else [1.0] * (N - 1), N - 1, "star")
    L = np.zeros((N, N))
    for k, i in enumerate(i for i in range(N) if i != h):
        L[i, h] = w[k]
    return Topology(L, _delta(delta, N))


def wheel_topology(N: int, hub: int = 1, hub_weights=None, rim_weights=None, delta=None,
                   closing_weight: float | None = None) -> Topology:
    """Star from `hub` plus a directed rim cycle through the other nodes.

    Rim nodes are visited in increasing index order and the last rim weight
    closes the rim (for ``N=5, hub=1``: ``2 -> 3 -> 4 -> 5 -> 2``).
    `closing_weight`, when given, adds the edge from the last rim node back
    into the hub, the block that appears top-right in the hub-1 layout.
    """
    if N < 4:
        raise InputError("wheel topology needs N >= 4")
    h = _check_hub(N, hub)
    hw = _weights(hub_weights if hub_weights is not None else [1.0] * (N - 1), N - 1, "wheel hub")
    rw = _weights(rim_weights if rim_weights is not None else [1.0] * (N - 1), N - 1, "wheel rim")
    rim = [i for i in range(N) if i != h]
    L = np.zeros((N, N))
    for k, i in enumerate(rim):
        L[i, h] = hw[k]
    for k in range(len(rim)):
        src, dst = rim[k], rim[(k + 1) % len(rim)]
        L[dst, src] = rw[k]
    if closing_weight is not None:
        L[h, rim[-1]] = _weights([closing_weight], 1, "wheel closing")[0]
    return Topology(L, _delta(delta, N))


def homogeneous_spec(A, B, C, H, N: int, L=None, delta=None) -> NetworkSpec:
    """N identical nodes ``(A, B, C, H)`` on topology ``(L, delta)``."""
    if N < 1:
        raise InputError("N must be >= 1")
    node = NodeDynamics(A, B, C, H)
    L = np.zeros((N, N)) if L is None else L
    spec = NetworkSpec((node,) * N, Topology(L, _delta(delta, N)), node.C.shape[0])
    validate(spec)
    return spec
