"""Published transition tables of the threefold and fivefold examples.

Each row maps a state ``n`` to a list of ``(targets, label)``: the image of
``P_n`` restricted to digit ``label`` is the union of ``P_k`` for ``k`` in
``targets``.  Transcribed by hand; states are numbered from 1.
"""

THREEFOLD = {
    1: [((7,), "b")],
    2: [((11, 12), "b"), ((4, 7, 8), "c")],
    3: [((12,), "c")],
    4: [((11,), "c"), ((4, 7, 8, 12), "d")],
    5: [((9,), "a"), ((1, 2, 5, 6), "b"), ((7, 11, 12), "f"), ((4, 7, 8), "g")],
    6: [((9, 10), "b"), ((2, 3, 6), "c"), ((12,), "g")],
    7: [((1, 5), "c"), ((11,), "g"), ((4, 7, 8), "h")],
    8: [((9, 10), "c"), ((2, 3, 6), "d"), ((12,), "h")],
    9: [((9,), "e"), ((1, 2), "f"), ((7, 11, 12), "j"), ((4,), "k")],
    10: [((5, 6, 9, 10), "f"), ((2, 3, 6), "g"), ((7, 8, 12), "k")],
    11: [((1, 5), "g"), ((11,), "k"), ((4, 7, 8), "l")],
    12: [((9, 10), "g"), ((2, 3, 6), "h"), ((12,), "l")],
}

FIVEFOLD = {
    1: [((28, 29), "b")],
    2: [((30, 32, 33), "b")],
    3: [((31, 34, 35), "b")],
    4: [((9, 12, 19, 20, 21, 22), "b")],
    5: [((6, 7, 18), "b")],
    6: [((11,), "b"), ((2,), "d")],
    7: [((37, 40), "a"), ((8, 10), "b"), ((26, 27, 28, 29), "c"), ((1,), "d")],
    8: [((36, 38, 39), "a"), ((25,), "c")],
    9: [((30, 31), "c")],
    10: [((23, 24), "a"), ((13, 14, 15, 16), "c")],
    11: [((17, 18), "c")],
    12: [((19,), "c")],
    13: [((37,), "b")],
    14: [((40,), "b"), ((26, 27), "d")],
    15: [((36,), "b")],
    16: [((38, 39), "b"), ((25,), "d")],
    17: [((23, 24), "b"), ((13, 14), "d")],
    18: [((3, 15, 16), "d")],
    19: [((4, 17), "d")],
    20: [((33, 35), "c"), ((5,), "d")],
    21: [((32, 34), "c")],
    22: [((20,), "c")],
    23: [((21,), "c")],
    24: [((22,), "c")],
    25: [((28, 29), "d")],
    26: [((30, 32), "d")],
    27: [((33,), "d")],
    28: [((35,), "d")],
    29: [((31, 34), "d")],
    30: [((19, 20), "d")],
    31: [((6, 18), "d")],
    32: [((9, 21), "d")],
    33: [((11, 12, 22), "d"), ((2,), "f")],
    34: [((36, 37), "c"), ((7, 8), "d")],
    35: [((39, 40), "c"), ((10,), "d"), ((27, 28), "e"), ((1,), "f")],
    36: [((38,), "c"), ((25, 26, 29), "e")],
    37: [((30, 31), "e")],
    38: [((23,), "c"), ((13, 15), "e")],
    39: [((24,), "c"), ((14, 16), "e")],
    40: [((17, 18, 19), "e")],
}


def table_edges(table):
    """Edges ``(source, label, target)`` with 0-based states."""
    return sorted((n - 1, lab, k - 1) for n, rows in table.items() for ks, lab in rows for k in ks)


def _multigraph(n, edges):
    import networkx as nx

    g = nx.MultiDiGraph()
    g.add_nodes_from(range(n))
    for j, d, k in edges:
        g.add_edge(j, k, label=d)
    return g


def isomorphic_to_table(graph, table):
    """Is the labelled graph equal to the table up to renumbering the states?"""
    import networkx as nx
    from networkx.algorithms import isomorphism

    edges = table_edges(table)
    if graph.n != len(table) or len(graph.edges) != len(edges):
        return False
    em = isomorphism.categorical_multiedge_match("label", None)
    return nx.is_isomorphic(_multigraph(graph.n, graph.edges), _multigraph(len(table), edges), edge_match=em)
