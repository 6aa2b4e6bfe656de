"""Breadth-first exploration of the seed mutation graph."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .analysis import newton, normal_form_2d
from .laurent import NonLaurent
from .seeds import LGSeed, canonical_form, seed_mutate

DEFAULT_MAX_DEPTH = 8


class LaurentPhenomenonViolation(RuntimeError):
    """A mutation of a seed reachable from the root was not Laurent."""

    def __init__(self, path: list[int], witness: NonLaurent):
        self.path = path
        self.witness = witness
        super().__init__(f"non-Laurent mutation along index path {path}: {witness.witness.numerator} "
                         f"over ({witness.witness.factor})^{witness.witness.power}")


@dataclass
class Node:
    id: int
    seed: LGSeed
    depth: int


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    index: int


@dataclass
class MutationGraph:
    nodes: list[Node] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)

    def out_edges(self, node_id: int) -> list[Edge]:
        return [e for e in self.edges if e.source == node_id]

    def depth_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for node in self.nodes:
            out[node.depth] = out.get(node.depth, 0) + 1
        return out


def max_depth_limit() -> int:
    value = os.environ.get("LGMUT_MAX_DEPTH")
    return int(value) if value else DEFAULT_MAX_DEPTH


def _expand(seed: LGSeed, reflections: bool = True) -> list[tuple[int, LGSeed | NonLaurent, tuple | None]]:
    out = []
    for j in range(len(seed.directions)):
        child = seed_mutate(seed, j)
        if isinstance(child, NonLaurent):
            out.append((j, child, None))
        else:
            cf = canonical_form(child, reflections)
            out.append((j, cf.seed(), cf.key))
    return out


def explore(root: LGSeed, depth: int, workers: int = 1, limit: int | None = None,
            reflections: bool = True) -> MutationGraph:
    """Mutate every frontier seed at every direction index, ``depth`` levels deep.

    Nodes are keyed by the canonical form of the whole seed and store that
    canonical representative; edge indices refer to its direction order.  By
    default mirror images count as the same node (GL(2,Z) classes, which are
    preserved by mutation); ``reflections=False`` keys by det=+1 classes only.
    Node ids follow discovery order, which does not depend on ``workers``.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    limit = max_depth_limit() if limit is None else limit
    if depth > limit:
        raise ValueError(f"depth {depth} exceeds the configured limit {limit} (set LGMUT_MAX_DEPTH to raise it)")
    cf = canonical_form(root, reflections)
    graph = MutationGraph([Node(0, cf.seed(), 0)])
    ids = {cf.key: 0}
    paths = {0: []}
    frontier = [0]
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for level in range(depth):
            seeds = [graph.nodes[i].seed for i in frontier]
            flags = [reflections] * len(seeds)
            results = list(pool.map(_expand, seeds, flags)) if pool else [_expand(s, reflections) for s in seeds]
            nxt = []
            for src, children in zip(frontier, results):
                for j, child, key in children:
                    if isinstance(child, NonLaurent):
                        raise LaurentPhenomenonViolation(paths[src] + [j], child)
                    if key not in ids:
                        ids[key] = len(graph.nodes)
                        graph.nodes.append(Node(ids[key], child, level + 1))
                        paths[ids[key]] = paths[src] + [j]
                        nxt.append(ids[key])
                    graph.edges.append(Edge(src, ids[key], j))
            frontier = nxt
    finally:
        if pool:
            pool.shutdown()
    return graph


def node_signature(seed: LGSeed) -> str:
    """Affine normal form of the Newton polygon, as ``x,y;x,y;...``."""
    return normal_form_2d(newton(seed.potential)).signature()


def export_graph(g: MutationGraph, fmt: str = "json") -> bytes:
    if fmt == "json":
        data = {
            "nodes": [{"id": n.id, "seed": n.seed.to_json(), "depth": n.depth} for n in g.nodes],
            "edges": [{"from": e.source, "to": e.target, "index": e.index} for e in g.edges],
        }
        return (json.dumps(data, indent=1, sort_keys=True) + "\n").encode()
    if fmt == "dot":
        lines = ["digraph mutations {"]
        for n in g.nodes:
            lines.append(f'  n{n.id} [label="{node_signature(n.seed)}", depth={n.depth}];')
        for e in g.edges:
            lines.append(f'  n{e.source} -> n{e.target} [label="{e.index}"];')
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown graph format {fmt!r}; expected json or dot")


def import_graph(data: bytes | str) -> MutationGraph:
    raw = json.loads(data)
    nodes = [Node(int(n["id"]), LGSeed.from_json(n["seed"]), int(n["depth"])) for n in raw["nodes"]]
    edges = [Edge(int(e["from"]), int(e["to"]), int(e["index"])) for e in raw["edges"]]
    return MutationGraph(nodes, edges)
