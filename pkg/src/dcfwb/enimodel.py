"""Two-sorted fiber models: an indiscernible sort A, and above every ordered
pair of A-points a fiber of successor chains. The number of chains in a fiber
is its dimension; bumping the dimension from 1 to 2 exactly on the fibers of
graph edges codes a graph so that the A-permutations extending to model
automorphisms are exactly the graph automorphisms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DcfwbError
from .graphcode import Graph


@dataclass(frozen=True)
class TModel:
    """Desk-scale model data: A-sort size plus fiber dimensions (>= 1).

    Only dimensions different from 1 are stored; the prime model is the empty
    map. Coding keeps dims symmetric across the ordered pair (a,b)/(b,a)."""

    a_count: int
    dims: tuple[tuple[tuple[int, int], int], ...] = ()

    @classmethod
    def make(cls, a_count: int, dims: dict[tuple[int, int], int] | None = None) -> "TModel":
        canon = {}
        for (a, b), d in (dims or {}).items():
            if not (0 <= a < a_count and 0 <= b < a_count):
                raise DcfwbError(f"fiber ({a},{b}) outside A-sort")
            if d < 1:
                raise DcfwbError(f"dimension of fiber ({a},{b}) must be >= 1, got {d}")
            if d != 1:
                canon[(a, b)] = d
        return cls(a_count, tuple(sorted(canon.items())))

    def dim(self, a: int, b: int) -> int:
        return dict(self.dims).get((a, b), 1)

    def to_json(self) -> dict:
        return {"a_count": self.a_count,
                "dims": [[a, b, d] for (a, b), d in self.dims]}

    @classmethod
    def from_json(cls, data: dict) -> "TModel":
        return cls.make(int(data["a_count"]),
                        {(a, b): d for a, b, d in data.get("dims", [])})


def encode_graph(g: Graph) -> TModel:
    """Bump both ordered fibers of each edge to dimension 2; diagonal stays 1."""
    dims = {}
    for a, b in g.edges:
        dims[(a, b)] = 2
        dims[(b, a)] = 2
    return TModel.make(g.node_count, dims)


def decode_graph(m: TModel) -> Graph:
    """Read edges off dimensions >= 2; only dims in {1, 2} are a graph coding."""
    edges = set()
    for (a, b), d in m.dims:
        if d not in (1, 2):
            raise DcfwbError(f"fiber ({a},{b}) has dimension {d}: not a graph coding")
        if a == b:
            raise DcfwbError(f"diagonal fiber ({a},{a}) has dimension {d}: not a graph coding")
        if d == 2:
            if m.dim(b, a) != 2:
                raise DcfwbError(f"fiber dimensions not symmetric at ({a},{b})")
            edges.add((min(a, b), max(a, b)))
    return Graph.make(m.a_count, edges)


@dataclass
class TFragment:
    """Finite window of a model: F-points are (ordered pair, chain id, offset)
    with the successor defined inside the window and the projections total."""

    a_points: list[int]
    f_points: list[tuple[tuple[int, int], int, int]]
    pi1: dict = field(default_factory=dict)
    pi2: dict = field(default_factory=dict)
    succ: dict = field(default_factory=dict)

    def element_count(self) -> int:
        return len(self.a_points) + len(self.f_points)

    def check_axioms(self) -> bool:
        """The universal axioms on the window: projections commute with the
        successor, and the successor is injective and acyclic per chain."""
        for p, q in self.succ.items():
            if self.pi1[q] != self.pi1[p] or self.pi2[q] != self.pi2[p]:
                return False
        if len(set(self.succ.values())) != len(self.succ):
            return False
        for start in self.succ:
            cur, hops = start, 0
            while cur in self.succ:
                cur = self.succ[cur]
                hops += 1
                if cur == start or hops > len(self.f_points):
                    return False
        return True


def materialize(m: TModel, w: int) -> TFragment:
    """Window of radius w: every chain of every fiber contributes offsets
    -w..w, with the successor defined up to the boundary."""
    if w < 0:
        raise DcfwbError("window radius must be >= 0")
    frag = TFragment(a_points=list(range(m.a_count)), f_points=[])
    for a in range(m.a_count):
        for b in range(m.a_count):
            for chain in range(m.dim(a, b)):
                for off in range(-w, w + 1):
                    pt = ((a, b), chain, off)
                    frag.f_points.append(pt)
                    frag.pi1[pt] = a
                    frag.pi2[pt] = b
                    if off > -w:
                        frag.succ[((a, b), chain, off - 1)] = pt
    return frag


def count_extendable_perms(m: TModel) -> list[tuple[int, ...]]:
    """All A-permutations preserving every fiber dimension (brute force).

    For a model in graph-coding range these are exactly the automorphisms of
    the decoded graph."""
    if m.a_count > 7:
        raise DcfwbError("extendable-permutation scan is capped at 7 A-points")
    out = []
    for perm in itertools.permutations(range(m.a_count)):
        if all(m.dim(perm[a], perm[b]) == m.dim(a, b)
               for a in range(m.a_count) for b in range(m.a_count)):
            out.append(perm)
    return out


def graph_automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """Brute-force automorphism group, for cross-checking the coding."""
    es = set(g.edges)
    out = []
    for perm in itertools.permutations(range(g.node_count)):
        if all(((min(perm[a], perm[b]), max(perm[a], perm[b])) in es) == ((a, b) in es)
               for a in range(g.node_count) for b in range(a + 1, g.node_count)):
            out.append(perm)
    return out
