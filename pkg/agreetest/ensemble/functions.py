"""
Local and global functions on small sets.

A global function assigns a symbol to every subset of [n] of size 1..d
(0..d with include_empty); a local function does the same for the subsets
of one set S.
"""

import math

from cdislogging import get_logger

from agreetest.errors import ParameterError
from agreetest.sets import (
    VertexSet,
    count_small_subsets,
    enumerate_small_subsets,
    sample_k_subset,
)

logger = get_logger(__name__)


def _check_symbol(value, alphabet_size):
    if not isinstance(value, int) or not 0 <= value < alphabet_size:
        raise ParameterError(
            "symbol {!r} outside the alphabet [0, {})".format(value, alphabet_size)
        )


class LocalFunction(object):
    """
    f_S: the table of one set S, over enumerate_small_subsets(S, d).
    """

    __slots__ = ("S", "d", "include_empty", "table")

    def __init__(self, S, d, table, include_empty=False):
        self.S = S
        self.d = d
        self.include_empty = include_empty
        self.table = dict(table)
        expected = count_small_subsets(len(S), d, include_empty)
        if len(self.table) != expected:
            raise ParameterError(
                "local function on {} has {} entries, expected {}".format(
                    S, len(self.table), expected
                )
            )

    def __getitem__(self, A):
        return self.table[A]

    def __eq__(self, other):
        return (
            isinstance(other, LocalFunction)
            and self.S == other.S
            and self.table == other.table
        )

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "LocalFunction(S={}, {} entries)".format(self.S, len(self.table))

    def domain(self):
        return list(enumerate_small_subsets(self.S, self.d, self.include_empty))

    def values(self):
        return tuple(self.table[A] for A in self.domain())

    def frame(self, sets):
        """
        Values on the given sets, in the given order.
        """
        return tuple(self.table[A] for A in sets)

    def to_record(self):
        return {
            "S": list(self.S.members),
            "f": {A.key(): self.table[A] for A in self.domain()},
        }


class GlobalFunction(object):
    """
    F: a symbol for every subset of [n] of size 1..d (0..d with
    include_empty).
    """

    def __init__(self, n, d, alphabet_size, values, include_empty=False):
        if d < 1:
            raise ParameterError("d must be >= 1, got {}".format(d))
        if alphabet_size < 2:
            raise ParameterError(
                "alphabet_size must be >= 2, got {}".format(alphabet_size)
            )
        self.n = n
        self.d = d
        self.alphabet_size = alphabet_size
        self.include_empty = include_empty
        self.values = {}
        low = 0 if include_empty else 1
        for A, value in values.items():
            A = A if isinstance(A, VertexSet) else VertexSet.from_key(A)
            if not low <= len(A) <= d or not A.fits(n):
                raise ParameterError(
                    "global function key {} outside its domain".format(A)
                )
            _check_symbol(value, alphabet_size)
            self.values[A] = value
        expected = count_small_subsets(n, d, include_empty)
        if len(self.values) != expected:
            raise ParameterError(
                "global function has {} values, its domain has {} sets".format(
                    len(self.values), expected
                )
            )

    @classmethod
    def random(cls, n, d, alphabet_size, rng, include_empty=False):
        ground = VertexSet(range(n))
        domain = list(enumerate_small_subsets(ground, d, include_empty))
        symbols = rng.integers(0, alphabet_size, size=len(domain))
        return cls(
            n,
            d,
            alphabet_size,
            {A: int(s) for A, s in zip(domain, symbols)},
            include_empty=include_empty,
        )

    @classmethod
    def constant(cls, n, d, alphabet_size, symbol=0, include_empty=False):
        ground = VertexSet(range(n))
        return cls(
            n,
            d,
            alphabet_size,
            {A: symbol for A in enumerate_small_subsets(ground, d, include_empty)},
            include_empty=include_empty,
        )

    def __getitem__(self, A):
        return self.values[A]

    def __eq__(self, other):
        return (
            isinstance(other, GlobalFunction)
            and self.n == other.n
            and self.d == other.d
            and self.alphabet_size == other.alphabet_size
            and self.values == other.values
        )

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "GlobalFunction(n={}, d={}, alphabet_size={})".format(
            self.n, self.d, self.alphabet_size
        )

    def domain(self):
        return list(
            enumerate_small_subsets(VertexSet(range(self.n)), self.d, self.include_empty)
        )

    def restrict(self, S):
        """
        F|_S as a local function.
        """
        return LocalFunction(
            S,
            self.d,
            {
                A: self.values[A]
                for A in enumerate_small_subsets(S, self.d, self.include_empty)
            },
            include_empty=self.include_empty,
        )

    def differences(self, other):
        """
        Sets on which two global functions over the same domain differ.
        """
        return [A for A in self.domain() if self.values[A] != other.values[A]]

    def to_dict(self):
        return {
            "n": self.n,
            "d": self.d,
            "alphabet_size": self.alphabet_size,
            "include_empty": self.include_empty,
            "values": {A.key(): self.values[A] for A in self.domain()},
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            data["n"],
            data["d"],
            data["alphabet_size"],
            dict(data["values"]),
            include_empty=data.get("include_empty", False),
        )


def random_planted_sets(n, d, count, rng):
    """
    `count` distinct d-sets of [n], sorted: the planted set D of the
    planted_disagreement corruption.
    """
    if count > math.comb(n, d):
        raise ParameterError(
            "cannot plant {} distinct {}-sets in [{}]".format(count, d, n)
        )
    planted = set()
    while len(planted) < count:
        planted.add(sample_k_subset(n, d, rng))
    return tuple(sorted(planted))
