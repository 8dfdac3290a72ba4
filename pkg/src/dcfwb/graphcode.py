"""Codings between graphs-up-to-computable-copy and graphs-up-to-enumerable-copy.

One direction tags every node with a pendant K4 gadget and joins coding
nodes by paths of length 6 (edge) or 9 (non-edge); its decoder watches an
edge enumeration for K4 tags and reads adjacency off path lengths, which is
sound because any route through a third coding node has length at least 12.
The converse direction also tags representatives with K4 gadgets but records
each enumerated edge with a fresh witness node adjacent to both endpoints.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import DcfwbError

Edge = tuple[int, int]


def _norm_edge(a: int, b: int) -> Edge:
    if a == b:
        raise DcfwbError(f"irreflexive graph cannot have a loop at {a}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    """Finite symmetric irreflexive graph; edges stored sorted as (a, b) with a < b."""

    node_count: int
    edges: tuple[Edge, ...]

    @classmethod
    def make(cls, node_count: int, edges) -> "Graph":
        canon = sorted({_norm_edge(a, b) for a, b in edges})
        for a, b in canon:
            if not (0 <= a < node_count and 0 <= b < node_count):
                raise DcfwbError(f"edge ({a},{b}) outside node range 0..{node_count - 1}")
        return cls(node_count, tuple(canon))

    def has_edge(self, a: int, b: int) -> bool:
        return _norm_edge(a, b) in set(self.edges)

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.node_count)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency()]

    def relabel(self, perm: list[int]) -> "Graph":
        return Graph.make(self.node_count, [(perm[a], perm[b]) for a, b in self.edges])

    def to_json(self) -> dict:
        return {"nodes": self.node_count, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls.make(int(data["nodes"]), [tuple(e) for e in data["edges"]])


@dataclass(frozen=True)
class EdgeStream:
    """Stage-indexed enumeration: cumulative edge sets plus the node
    appearance schedule (cumulative node lists, one per stage)."""

    stages: tuple[tuple[Edge, ...], ...]
    nodes: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, stages, nodes=None) -> "EdgeStream":
        cum_edges: list[tuple[Edge, ...]] = []
        seen: set[Edge] = set()
        for st in stages:
            seen |= {_norm_edge(a, b) for a, b in st}
            cum_edges.append(tuple(sorted(seen)))
        if nodes is None:
            seen_nodes: set[int] = set()
            nodes_out = []
            for st in cum_edges:
                seen_nodes |= {v for e in st for v in e}
                nodes_out.append(tuple(sorted(seen_nodes)))
        else:
            seen_nodes = set()
            nodes_out = []
            for st in nodes:
                seen_nodes |= set(st)
                nodes_out.append(tuple(sorted(seen_nodes)))
            while len(nodes_out) < len(cum_edges):
                nodes_out.append(nodes_out[-1] if nodes_out else ())
        for st, ns in zip(cum_edges, nodes_out):
            missing = {v for e in st for v in e} - set(ns)
            if missing:
                raise DcfwbError(f"edges mention nodes not yet appeared: {sorted(missing)}")
        return cls(tuple(cum_edges), tuple(nodes_out))

    @classmethod
    def from_graph(cls, g: Graph, order: list[Edge] | None = None,
                   rng: random.Random | None = None) -> "EdgeStream":
        """One edge per stage; optionally in a given or seeded-random order.
        All nodes (including isolated ones) appear at stage 0."""
        edges = list(g.edges)
        if order is not None:
            if sorted(order) != sorted(edges):
                raise DcfwbError("order must be a permutation of the edge set")
            edges = list(order)
        elif rng is not None:
            rng.shuffle(edges)
        all_nodes = [tuple(range(g.node_count))]
        if not edges:
            return cls.make([()], nodes=all_nodes)
        return cls.make([[e] for e in edges], nodes=all_nodes * len(edges))

    def final_graph(self) -> Graph:
        nodes = self.nodes[-1] if self.nodes else ()
        n = (max(nodes) + 1) if nodes else 0
        return Graph.make(n, self.stages[-1] if self.stages else ())

    def to_json(self) -> dict:
        return {"stages": [[list(e) for e in st] for st in self.stages],
                "nodes": [list(ns) for ns in self.nodes]}

    @classmethod
    def from_json(cls, data: dict) -> "EdgeStream":
        return cls.make([[tuple(e) for e in st] for st in data["stages"]],
                        nodes=data.get("nodes"))


# -- direction 1: computable G  ->  enumerable H -----------------------------

GADGET_SIZE = 5          # coding node + K4
EDGE_PATH_INTERIOR = 5   # path of length 6
NONEDGE_PATH_INTERIOR = 8  # path of length 9


def encode_comp_to_enum(g: Graph) -> Graph:
    """Build H: a K4-tagged coding node per node of G, a 6-path per edge,
    a 9-path per non-edge. Node labels: coding node first, then its K4
    block, then path interiors in lexicographic pair order."""
    edges: list[Edge] = []
    for n in range(g.node_count):
        base = GADGET_SIZE * n
        k4 = [base + 1, base + 2, base + 3, base + 4]
        edges.extend((k4[i], k4[j]) for i in range(4) for j in range(i + 1, 4))
        edges.append((base, k4[0]))
    nxt = GADGET_SIZE * g.node_count
    edge_set = set(g.edges)
    for m in range(g.node_count):
        for n in range(m + 1, g.node_count):
            interior = EDGE_PATH_INTERIOR if (m, n) in edge_set else NONEDGE_PATH_INTERIOR
            chain = [GADGET_SIZE * m] + list(range(nxt, nxt + interior)) + [GADGET_SIZE * n]
            edges.extend(zip(chain, chain[1:]))
            nxt += interior
    return Graph.make(nxt, edges)


def coding_nodes_of_encoding(node_count: int) -> list[int]:
    """Coding-node labels produced by encode_comp_to_enum for an N-node input."""
    return [GADGET_SIZE * n for n in range(node_count)]


def k4_cliques(g: Graph) -> list[tuple[int, int, int, int]]:
    """All 4-cliques, ascending; used for the tag-uniqueness scan."""
    adj = g.adjacency()
    found = set()
    for a, b in g.edges:
        common = adj[a] & adj[b]
        for c in common:
            for d in common & adj[c]:
                if c < d:
                    found.add(tuple(sorted((a, b, c, d))))
    return sorted(found)


def _bfs_dist(adj: list[set[int]], src: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


@dataclass
class DecodeResult:
    graph: Graph
    incomplete: bool
    coding_nodes: list[int] = field(default_factory=list)
    stages_consumed: int = 0


def decode_enum_to_comp(stream: EdgeStream, stage_budget: int | None = None) -> DecodeResult:
    """Stream processor for the first coding: label the pendant neighbor of
    each completed K4 tag as the next coding node, then decide adjacency of a
    labeled pair as soon as their distance is 6 (adjacent) or 9 (not).
    Routes through other coding nodes have length >= 12, so deciding on a
    distance in {6, 9} is stable under further stages."""
    budget = len(stream.stages) if stage_budget is None else min(stage_budget, len(stream.stages))
    labels: list[int] = []           # labels[k] = coding node for decoded node k
    labeled_cliques: set[tuple] = set()
    decided: dict[tuple[int, int], bool] = {}
    consumed = 0
    for s in range(budget):
        consumed = s + 1
        edges = stream.stages[s]
        g = Graph.make((max(stream.nodes[s]) + 1) if stream.nodes[s] else 0, edges)
        adj = g.adjacency()
        for clique in k4_cliques(g):
            if clique in labeled_cliques:
                continue
            members = set(clique)
            outside = sorted({v for u in clique for v in adj[u]} - members)
            if len(outside) == 1:
                labeled_cliques.add(clique)
                labels.append(outside[0])
        for i in range(len(labels)):
            di = _bfs_dist(adj, labels[i])
            for j in range(i + 1, len(labels)):
                if (i, j) in decided:
                    continue
                d = di.get(labels[j])
                if d == 6:
                    decided[(i, j)] = True
                elif d == 9:
                    decided[(i, j)] = False
    n = len(labels)
    undecided = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in decided]
    graph = Graph.make(n, [p for p, yes in decided.items() if yes])
    return DecodeResult(graph=graph, incomplete=(n == 0 or bool(undecided)),
                        coding_nodes=labels, stages_consumed=consumed)


# -- converse direction: enumerable H  ->  computable G ----------------------

@dataclass
class ConverseEncoding:
    graph: Graph
    representatives: list[int]   # representatives[n] = y_n in G
    witnesses: list[tuple[int, Edge]]  # (witness node, H-edge it records)


def encode_enum_to_comp(stream: EdgeStream) -> ConverseEncoding:
    """Build the converse G from an enumeration of H: a K4-tagged
    representative per H-node at its appearance stage, and per enumerated
    H-edge a fresh witness node adjacent to exactly its two representatives
    (adjacency decided at node-creation time, witnesses have valence 2)."""
    edges: list[Edge] = []
    reps: dict[int, int] = {}
    witnesses: list[tuple[int, Edge]] = []
    nxt = 0
    seen_edges: set[Edge] = set()
    for s in range(len(stream.stages)):
        for v in stream.nodes[s]:
            if v in reps:
                continue
            base = nxt
            reps[v] = base
            k4 = [base + 1, base + 2, base + 3, base + 4]
            edges.extend((k4[i], k4[j]) for i in range(4) for j in range(i + 1, 4))
            edges.append((base, k4[0]))
            nxt += GADGET_SIZE
        for e in stream.stages[s]:
            if e in seen_edges:
                continue
            seen_edges.add(e)
            w = nxt
            nxt += 1
            edges.append(_norm_edge(w, reps[e[0]]))
            edges.append(_norm_edge(w, reps[e[1]]))
            witnesses.append((w, e))
    ordered = sorted(reps)
    rep_list = [reps[v] for v in ordered]
    return ConverseEncoding(Graph.make(nxt, edges), rep_list, witnesses)


def decode_comp_to_enum(g: Graph) -> EdgeStream:
    """Recover an enumeration of H from a copy of the converse G: find each
    K4 tag, name its unique fifth node as the next representative, and emit
    an edge whenever a node adjacent to exactly two representatives shows up."""
    adj = g.adjacency()
    cliques = k4_cliques(g)
    reps: list[int] = []
    for clique in cliques:
        members = set(clique)
        outside = sorted({v for u in clique for v in adj[u]} - members)
        if len(outside) == 1:
            reps.append(outside[0])
    index_of = {y: n for n, y in enumerate(reps)}
    rep_set = set(reps)
    clique_members = {u for c in cliques for u in c}
    emitted: list[Edge] = []
    for w in range(g.node_count):
        if w in rep_set or w in clique_members:
            continue
        nbrs = sorted(adj[w])
        if len(nbrs) == 2 and all(v in rep_set for v in nbrs):
            emitted.append(_norm_edge(index_of[nbrs[0]], index_of[nbrs[1]]))
    all_nodes = [tuple(range(len(reps)))]
    if not emitted:
        return EdgeStream.make([()], nodes=all_nodes)
    return EdgeStream.make([[e] for e in emitted], nodes=all_nodes * len(emitted))


# -- verification oracle ------------------------------------------------------

ISO_NODE_CAP = 24


def iso_check(a: Graph, b: Graph) -> tuple[bool, list[int] | None]:
    """Brute-force isomorphism with degree-sequence pruning; witness
    permutation maps nodes of ``a`` to nodes of ``b``."""
    if a.node_count > ISO_NODE_CAP or b.node_count > ISO_NODE_CAP:
        raise DcfwbError(f"iso_check is capped at {ISO_NODE_CAP} nodes")
    if a.node_count != b.node_count or len(a.edges) != len(b.edges):
        return False, None
    da, db = a.degrees(), b.degrees()
    if sorted(da) != sorted(db):
        return False, None
    adj_a, adj_b = a.adjacency(), b.adjacency()
    order = sorted(range(a.node_count), key=lambda v: -da[v])
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        u = order[k]
        for v in range(b.node_count):
            if v in used or db[v] != da[u]:
                continue
            ok = True
            for w in mapping:
                if (w in adj_a[u]) != (mapping[w] in adj_b[v]):
                    ok = False
                    break
            if not ok:
                continue
            mapping[u] = v
            used.add(v)
            if extend(k + 1):
                return True
            del mapping[u]
            used.discard(v)
        return False

    if extend(0):
        return True, [mapping[i] for i in range(a.node_count)]
    return False, None


def detour_bound_holds(h: Graph, coding_nodes: list[int]) -> bool:
    """BFS check: any route between two coding nodes through a third has
    length >= 12 in the encoded graph."""
    adj = h.adjacency()
    dists = {c: _bfs_dist(adj, c) for c in coding_nodes}
    for i, a in enumerate(coding_nodes):
        for b in coding_nodes[i + 1:]:
            for c in coding_nodes:
                if c in (a, b):
                    continue
                via = dists[a].get(c, 10 ** 9) + dists[c].get(b, 10 ** 9)
                if via < 12:
                    return False
    return True
