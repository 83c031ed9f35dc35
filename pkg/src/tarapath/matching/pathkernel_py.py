"""Pure-Python simple-path enumeration kernel.

Fallback for the compiled kernel; both implementations must produce the
same paths in the same order. The order is fixed by construction: sources
in the given order, out-edges in declaration order, depth-first.
"""

from __future__ import annotations

KERNEL_NAME = "python"


def find_simple_paths(
    n_nodes: int,
    edge_src: list[int],
    edge_dst: list[int],
    sources: list[int],
    targets: list[int],
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All simple directed paths with at least one edge from a source to a target.

    Returns ``(nodes, edges)`` pairs; ``nodes`` has one more entry than
    ``edges``. Paths never repeat a node. A path that reaches one target
    may keep growing toward another, yielding both.
    """
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n_nodes)]
    for edge_id, (src, dst) in enumerate(zip(edge_src, edge_dst)):
        adjacency[src].append((dst, edge_id))

    target_set = set(targets)
    results: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    visited = [False] * n_nodes
    node_path: list[int] = []
    edge_path: list[int] = []

    def walk(node: int) -> None:
        visited[node] = True
        node_path.append(node)
        if node in target_set and edge_path:
            results.append((tuple(node_path), tuple(edge_path)))
        for neighbor, edge_id in adjacency[node]:
            if not visited[neighbor]:
                edge_path.append(edge_id)
                walk(neighbor)
                edge_path.pop()
        node_path.pop()
        visited[node] = False

    for source in sources:
        walk(source)
    return results
