"""
Hypergraph text format: a header line "n m" followed by m lines, each the
space separated vertex indices of one edge.
"""

from cdislogging import get_logger

from agreetest.errors import ParameterError, ParseError
from agreetest.hypergraph.core import Hypergraph
from agreetest.sets import VertexSet

logger = get_logger(__name__)


def _ints(line, lineno, path):
    try:
        return [int(token) for token in line.split()]
    except ValueError as exc:
        raise ParseError(str(exc), path=path, line=lineno, column=None)


def parse_hypergraph(text, path=None):
    """
    Parse the text format.

    Args:
        text (str): file contents
        path (str): used in error messages only

    Return:
        Hypergraph
    """
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty hypergraph file", path=path, line=1)
    header = _ints(lines[0], 1, path)
    if len(header) != 2 or header[0] < 0 or header[1] < 0:
        raise ParseError(
            "header must be two non-negative integers 'n m'", path=path, line=1
        )
    n, m = header
    body = lines[1:]
    # trailing blank lines are tolerated
    while body and not body[-1].strip():
        body.pop()
    if len(body) != m:
        raise ParseError(
            "header announces {} edges, found {}".format(m, len(body)),
            path=path,
            line=len(body) + 2 if len(body) < m else m + 2,
        )
    edges = []
    for offset, line in enumerate(body):
        lineno = offset + 2
        vertices = _ints(line, lineno, path)
        if not vertices:
            raise ParseError("empty hyperedge", path=path, line=lineno)
        if len(set(vertices)) != len(vertices):
            raise ParseError("repeated vertex in hyperedge", path=path, line=lineno)
        bad = [v for v in vertices if not 0 <= v < n]
        if bad:
            raise ParseError(
                "vertex {} outside [0, {})".format(bad[0], n), path=path, line=lineno
            )
        edges.append(VertexSet(vertices))
    if len(set(edges)) != len(edges):
        logger.warning(
            "{}: duplicate hyperedges merged".format(path or "hypergraph input")
        )
    return Hypergraph(n, edges)


def format_hypergraph(H):
    if H.has_empty_edge():
        raise ParameterError("the empty hyperedge has no text representation")
    lines = ["{} {}".format(H.n, len(H))]
    lines.extend(" ".join(str(v) for v in e.members) for e in H.sorted_edges())
    return "\n".join(lines) + "\n"


def read_hypergraph(path):
    with open(path) as f:
        return parse_hypergraph(f.read(), path=path)


def write_hypergraph(H, path):
    with open(path, "w") as f:
        f.write(format_hypergraph(H))
