from cdislogging import get_logger

from agreetest.errors import ParameterError
from agreetest.sets import EMPTY, VertexSet

logger = get_logger(__name__)


def _as_vertex_set(edge):
    if isinstance(edge, VertexSet):
        return edge
    return VertexSet(edge)


class Hypergraph(object):
    """
    Immutable family of distinct hyperedges over the ground set [n].

    The empty edge is representable: it is the single edge of the
    0-uniform hypergraph that the pruning recursion bottoms out on, and any
    set contains it.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n, edges=()):
        if n < 0:
            raise ParameterError("ground set size must be >= 0, got {}".format(n))
        edges = frozenset(_as_vertex_set(e) for e in edges)
        for edge in edges:
            if not edge.fits(n):
                raise ParameterError(
                    "hyperedge {} does not lie in [0, {})".format(edge, n)
                )
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", edges)

    def __setattr__(self, name, value):
        raise AttributeError("Hypergraph is immutable")

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.sorted_edges())

    def __contains__(self, edge):
        return _as_vertex_set(edge) in self.edges

    def __eq__(self, other):
        return (
            isinstance(other, Hypergraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return "Hypergraph(n={}, edges=[{}])".format(
            self.n, ", ".join(e.key() or "{}" for e in self.sorted_edges())
        )

    def sorted_edges(self):
        """
        Edges in canonical order: by size, then lexicographically.
        """
        return sorted(self.edges, key=lambda e: (len(e), e.members))

    def is_empty(self):
        return not self.edges

    def has_empty_edge(self):
        return EMPTY in self.edges

    @property
    def uniformity(self):
        if not self.edges:
            return 0
        return max(len(e) for e in self.edges)

    def is_uniform(self, d):
        return all(len(e) == d for e in self.edges)

    def vertices(self):
        union = EMPTY
        for edge in self.edges:
            union = union | edge
        return union

    def issubset(self, other):
        return self.edges <= other.edges

    def with_edges(self, edges):
        return Hypergraph(self.n, edges)

    def union(self, other):
        return Hypergraph(self.n, self.edges | other.edges)

    def difference(self, other):
        if isinstance(other, Hypergraph):
            other = other.edges
        return Hypergraph(self.n, self.edges - frozenset(other))

    def without(self, edge):
        return Hypergraph(self.n, self.edges - {_as_vertex_set(edge)})

    def restrict(self, S):
        """
        Sub-hypergraph induced by S: the edges contained in S. The ground
        set is unchanged.
        """
        return Hypergraph(self.n, (e for e in self.edges if e.issubset(S)))

    def link_delete(self, A):
        """
        Remove the vertices of A from every edge. The empty edge is dropped
        and edges that coincide afterwards are merged.
        """
        out = set()
        for edge in self.edges:
            rest = edge - A
            if rest:
                out.add(rest)
        return Hypergraph(self.n, out)

    def extensions(self, A, size=None):
        """
        Edges containing A, optionally only those of a given size.
        """
        return [
            e
            for e in self.sorted_edges()
            if e.issuperset(A) and (size is None or len(e) == size)
        ]

    def relabel(self, vertices):
        """
        Map the ordered vertices onto 0..len(vertices)-1. Every edge must lie
        inside `vertices`.

        Args:
            vertices (VertexSet or sequence): the new ground set, in order

        Return:
            Hypergraph: over [len(vertices)]
        """
        order = list(vertices)
        index = {v: i for i, v in enumerate(order)}
        out = []
        for edge in self.edges:
            try:
                out.append(VertexSet(index[v] for v in edge))
            except KeyError as exc:
                raise ParameterError(
                    "edge {} leaves the relabeled ground set at vertex {}".format(
                        edge, exc.args[0]
                    )
                )
        return Hypergraph(len(order), out)

    def to_lists(self):
        return [list(e.members) for e in self.sorted_edges()]
