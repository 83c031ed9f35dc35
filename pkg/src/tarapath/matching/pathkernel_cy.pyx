# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled simple-path enumeration kernel.

Same contract and traversal order as ``pathkernel_py``: sources in the
given order, out-edges in declaration order, depth-first, emit on every
target hit with at least one edge. The inner loop runs on C arrays; only
the emitted paths touch Python objects.
"""

from libc.stdlib cimport free, malloc

KERNEL_NAME = "cython"


def find_simple_paths(int n_nodes, edge_src, edge_dst, sources, targets):
    """All simple directed paths with at least one edge from a source to a target."""
    cdef int n_edges = len(edge_src)
    cdef int i, node, depth, neighbor, edge_id, source
    cdef list results = []

    if n_nodes == 0:
        return results

    # CSR adjacency: out-edges of node v live in adj_*[start[v]:start[v+1]],
    # in edge declaration order.
    cdef int *start = <int *> malloc((n_nodes + 1) * sizeof(int))
    cdef int *adj_node = <int *> malloc(max(n_edges, 1) * sizeof(int))
    cdef int *adj_edge = <int *> malloc(max(n_edges, 1) * sizeof(int))
    cdef int *fill = <int *> malloc(n_nodes * sizeof(int))
    cdef char *visited = <char *> malloc(n_nodes * sizeof(char))
    cdef char *is_target = <char *> malloc(n_nodes * sizeof(char))
    cdef int *node_path = <int *> malloc(n_nodes * sizeof(int))
    cdef int *edge_path = <int *> malloc(max(n_nodes, 1) * sizeof(int))
    cdef int *cursor = <int *> malloc(n_nodes * sizeof(int))

    if (start == NULL or adj_node == NULL or adj_edge == NULL or fill == NULL
            or visited == NULL or is_target == NULL or node_path == NULL
            or edge_path == NULL or cursor == NULL):
        free(start); free(adj_node); free(adj_edge); free(fill)
        free(visited); free(is_target); free(node_path); free(edge_path); free(cursor)
        raise MemoryError()

    try:
        for i in range(n_nodes + 1):
            start[i] = 0
        for i in range(n_edges):
            start[<int> edge_src[i] + 1] += 1
        for i in range(n_nodes):
            start[i + 1] += start[i]
            fill[i] = start[i]
        for i in range(n_edges):
            node = <int> edge_src[i]
            adj_node[fill[node]] = <int> edge_dst[i]
            adj_edge[fill[node]] = i
            fill[node] += 1

        for i in range(n_nodes):
            visited[i] = 0
            is_target[i] = 0
        for i in targets:
            is_target[<int> i] = 1

        for source in sources:
            # Iterative DFS; cursor[d] is the next adjacency slot to try at depth d.
            depth = 0
            node_path[0] = source
            visited[source] = 1
            cursor[0] = start[source]
            while depth >= 0:
                node = node_path[depth]
                if cursor[depth] < start[node + 1]:
                    i = cursor[depth]
                    cursor[depth] += 1
                    neighbor = adj_node[i]
                    edge_id = adj_edge[i]
                    if not visited[neighbor]:
                        depth += 1
                        node_path[depth] = neighbor
                        edge_path[depth - 1] = edge_id
                        visited[neighbor] = 1
                        cursor[depth] = start[neighbor]
                        if is_target[neighbor]:
                            results.append((
                                tuple(node_path[j] for j in range(depth + 1)),
                                tuple(edge_path[j] for j in range(depth)),
                            ))
                else:
                    visited[node] = 0
                    depth -= 1
    finally:
        free(start); free(adj_node); free(adj_edge); free(fill)
        free(visited); free(is_target); free(node_path); free(edge_path); free(cursor)

    return results
