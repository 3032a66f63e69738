import os

import pytest

from agreetest.errors import ParameterError, ParseError
from agreetest.hypergraph import (
    Hypergraph,
    format_hypergraph,
    parse_hypergraph,
    read_hypergraph,
    write_hypergraph,
)


def test_parse_hypergraph():
    H = parse_hypergraph("5 2\n0 1\n2 3 4\n")
    assert H == Hypergraph(5, [(0, 1), (2, 3, 4)])


def test_format_is_canonical():
    H = Hypergraph(6, [(4, 5), (0,), (2, 1)])
    assert format_hypergraph(H) == "6 3\n0\n1 2\n4 5\n"


def test_read_and_write(tmpdir, star):
    path = os.path.join(str(tmpdir), "star.txt")
    write_hypergraph(star, path)
    assert read_hypergraph(path) == star


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("5\n", 1),
        ("5 2\n0 1\n", 3),
        ("5 1\n0 x\n", 2),
        ("5 1\n0 7\n", 2),
        ("5 2\n0 1\n\n", 3),
        ("5 1\n1 1\n", 2),
    ],
)
def test_malformed_input_names_the_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_hypergraph(text, path="h.txt")
    assert exc.value.line == line
    assert exc.value.path == "h.txt"
    assert "line {}".format(line) in exc.value.message


def test_empty_edge_has_no_text_form():
    with pytest.raises(ParameterError):
        format_hypergraph(Hypergraph(3, [()]))
