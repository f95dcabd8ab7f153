"""
Neighbor structure of the support-state MRF and per-edge message storage
"""
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ..core.errors import DimensionError
from ..core.models.vsp_config import TopologyKind, TopologySpec


@dataclass(frozen=True)
class MrfTopology:
    """
    Chain(n) or 4-connected Grid(rows, cols) over N = rows * cols nodes

    Nodes are numbered in raster order (row-major). Directed edges are
    stored sorted by (source, target), which is also the sweep order.

    Attributes:
        neighbors: D_i for every node, ascending
        edges: directed edges (j, i), meaning the message j -> i
        incoming: per node, ids of the edges k -> i
        cavity: per edge j -> i, ids of the edges k -> j with k != i
    """
    kind: TopologyKind
    rows: int
    cols: int
    neighbors: Tuple[Tuple[int, ...], ...]
    edges: Tuple[Tuple[int, int], ...] = field(init=False)
    incoming: Tuple[Tuple[int, ...], ...] = field(init=False)
    cavity: Tuple[Tuple[int, ...], ...] = field(init=False)
    edge_index: Dict[Tuple[int, int], int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        edges = [(j, i) for j, nbrs in enumerate(self.neighbors) for i in nbrs]
        index = {edge: e for e, edge in enumerate(edges)}
        incoming = tuple(tuple(index[(k, i)] for k in nbrs) for i, nbrs in enumerate(self.neighbors))
        cavity = tuple(
            tuple(index[(k, j)] for k in self.neighbors[j] if k != i)
            for j, i in edges
        )
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "edge_index", index)
        object.__setattr__(self, "incoming", incoming)
        object.__setattr__(self, "cavity", cavity)

    @property
    def n(self) -> int:
        return len(self.neighbors)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @classmethod
    def chain(cls, n: int) -> "MrfTopology":
        if n < 1:
            raise DimensionError(f"chain length must be >= 1, got {n}")
        neighbors = tuple(
            tuple(k for k in (i - 1, i + 1) if 0 <= k < n) for i in range(n)
        )
        return cls(kind=TopologyKind.CHAIN, rows=1, cols=n, neighbors=neighbors)

    @classmethod
    def grid(cls, rows: int, cols: int) -> "MrfTopology":
        if rows < 1 or cols < 1:
            raise DimensionError(f"grid shape must be positive, got {rows}x{cols}")
        neighbors: List[Tuple[int, ...]] = []
        for r in range(rows):
            for c in range(cols):
                nbrs = []
                if r > 0:
                    nbrs.append((r - 1) * cols + c)
                if c > 0:
                    nbrs.append(r * cols + c - 1)
                if c < cols - 1:
                    nbrs.append(r * cols + c + 1)
                if r < rows - 1:
                    nbrs.append((r + 1) * cols + c)
                neighbors.append(tuple(nbrs))
        return cls(kind=TopologyKind.GRID, rows=rows, cols=cols, neighbors=tuple(neighbors))

    @classmethod
    def from_spec(cls, spec: TopologySpec, n: int) -> "MrfTopology":
        """
        Size a topology description against the signal length

        Raises:
            DimensionError: grid rows * cols != n
        """
        if spec.kind == TopologyKind.CHAIN:
            return cls.chain(n)
        if spec.rows * spec.cols != n:
            raise DimensionError(f"grid {spec.rows}x{spec.cols} does not cover N={n}")
        return cls.grid(spec.rows, spec.cols)

    def is_symmetric(self) -> bool:
        return all(j in self.neighbors[i] for j, i in self.edges)


@dataclass
class MessageBoard:
    """Bernoulli parameter λ_{j→i} = P(s_i = +1) of every directed message"""
    topology: MrfTopology
    values: np.ndarray
    degeneracies: int = 0

    @classmethod
    def uniform(cls, topology: MrfTopology) -> "MessageBoard":
        return cls(topology=topology, values=np.full(topology.num_edges, 0.5))

    def copy(self) -> "MessageBoard":
        return MessageBoard(self.topology, self.values.copy(), self.degeneracies)

    def message(self, src: int, dst: int) -> float:
        return float(self.values[self.topology.edge_index[(src, dst)]])

    def max_change(self, other: "MessageBoard") -> float:
        if self.values.size == 0:
            return 0.0
        return float(np.max(np.abs(self.values - other.values)))
