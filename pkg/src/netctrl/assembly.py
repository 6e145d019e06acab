"""Dense assembly of the compact network matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .network import NetworkSpec, validate


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """Global matrices of the network.

    ``calA = blockdiag(A_i) + [beta_ij H_i C_j]``, ``calB = blockdiag(delta_i B_i)``,
    ``calC = blockdiag(C_i)``.  ``offsets[i]`` is the ``(state, input)`` start
    index of node ``i`` (0-based) inside those matrices.
    """

    calA: np.ndarray
    calB: np.ndarray
    calC: np.ndarray
    offsets: tuple[tuple[int, int], ...]
    state_dims: tuple[int, ...]
    input_dims: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.calA.shape[0]

    def state_slice(self, i: int) -> slice:
        """Slice of node `i` (0-based) in the global state vector."""
        start = self.offsets[i][0]
        return slice(start, start + self.state_dims[i])

    def input_slice(self, i: int) -> slice:
        start = self.offsets[i][1]
        return slice(start, start + self.input_dims[i])

    def split_row(self, v) -> tuple[np.ndarray, ...]:
        """Cut a global row vector into per-node pieces."""
        v = np.asarray(v).ravel()
        return tuple(v[self.state_slice(i)] for i in range(len(self.offsets)))

    def lift(self, i: int, v) -> np.ndarray:
        """Zero-pad a node-level vector into the global state dimension."""
        out = np.zeros(self.order, dtype=complex)
        out[self.state_slice(i)] = np.asarray(v).ravel()
        return out


def coupling_block(spec: NetworkSpec, i: int, j: int) -> np.ndarray:
    """``beta_ij * H_i @ C_j`` for 1-based node indices (coupling only, no ``A_i``)."""
    N = spec.N
    if not (1 <= i <= N and 1 <= j <= N):
        raise InputError(f"node index ({i}, {j}) out of range 1..{N}")
    beta = spec.L[i - 1, j - 1]
    Hi, Cj = spec.nodes[i - 1].H, spec.nodes[j - 1].C
    if beta == 0.0:
        return np.zeros((Hi.shape[0], Cj.shape[1]))
    return beta * (Hi @ Cj)


def assemble(spec: NetworkSpec) -> AssembledSystem:
    total_n, total_p = validate(spec)
    ns = [node.n for node in spec.nodes]
    ps = [node.p for node in spec.nodes]
    s_off = np.concatenate([[0], np.cumsum(ns)]).astype(int)
    p_off = np.concatenate([[0], np.cumsum(ps)]).astype(int)
    N, m = spec.N, spec.m
    calA = np.zeros((total_n, total_n))
    calB = np.zeros((total_n, total_p))
    calC = np.zeros((N * m, total_n))
    for i, node in enumerate(spec.nodes):
        rows = slice(s_off[i], s_off[i + 1])
        calA[rows, rows] = node.A
        for j in range(N):
            if spec.L[i, j] != 0.0:
                calA[rows, s_off[j]:s_off[j + 1]] += coupling_block(spec, i + 1, j + 1)
        calB[rows, p_off[i]:p_off[i + 1]] = spec.delta[i] * node.B
        calC[i * m:(i + 1) * m, rows] = node.C
    for arr in (calA, calB, calC):
        arr.setflags(write=False)
    offsets = tuple((int(s_off[i]), int(p_off[i])) for i in range(N))
    return AssembledSystem(calA, calB, calC, offsets, tuple(ns), tuple(ps))
