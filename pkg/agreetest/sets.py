"""
Canonical subsets of the ground set [n], the parameter records of the
agreement tests, and the samplers for every distribution the library draws
from.

Attributes:
    VertexSet: immutable subset of [n] backed by an integer bitmask
    TestParams: (n, k, t, d, alphabet_size) of a uniform agreement test
    BiasedPairParams: (p, q) of the correlated biased pair distribution
"""

import hashlib
import itertools
import math
from dataclasses import dataclass

import numpy as np
from cdislogging import get_logger

from agreetest.config import config
from agreetest.errors import ParameterError

logger = get_logger(__name__)


class VertexSet(object):
    """
    Finite subset of [n] stored as a bitmask. Two VertexSets are equal iff
    their member sequences are identical; ordering is lexicographic on the
    increasing member sequence.
    """

    __slots__ = ("mask",)

    def __init__(self, members=()):
        mask = 0
        for v in members:
            v = int(v)
            if v < 0:
                raise ParameterError("vertex indices must be >= 0, got {}".format(v))
            mask |= 1 << v
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("VertexSet is immutable")

    @classmethod
    def from_mask(cls, mask):
        if mask < 0:
            raise ParameterError("bitmask must be non-negative")
        vs = cls.__new__(cls)
        object.__setattr__(vs, "mask", int(mask))
        return vs

    @classmethod
    def from_key(cls, key):
        """
        Parse a comma-joined key ("" is the empty set).
        """
        key = key.strip()
        if not key:
            return cls()
        return cls(int(part) for part in key.split(","))

    @property
    def members(self):
        mask = self.mask
        out = []
        v = 0
        while mask:
            if mask & 1:
                out.append(v)
            mask >>= 1
            v += 1
        return tuple(out)

    def key(self):
        return ",".join(str(v) for v in self.members)

    def max_vertex(self):
        return self.mask.bit_length() - 1

    def fits(self, n):
        return self.mask >> n == 0

    def __len__(self):
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v):
        return v >= 0 and bool(self.mask >> v & 1)

    def __bool__(self):
        return self.mask != 0

    def __eq__(self, other):
        return isinstance(other, VertexSet) and self.mask == other.mask

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.mask)

    def __lt__(self, other):
        return self.members < other.members

    def __le__(self, other):
        return self.members <= other.members

    def __or__(self, other):
        return VertexSet.from_mask(self.mask | other.mask)

    def __and__(self, other):
        return VertexSet.from_mask(self.mask & other.mask)

    def __sub__(self, other):
        return VertexSet.from_mask(self.mask & ~other.mask)

    def union(self, other):
        return self | other

    def intersection(self, other):
        return self & other

    def difference(self, other):
        return self - other

    def issubset(self, other):
        return self.mask & ~other.mask == 0

    def issuperset(self, other):
        return other.mask & ~self.mask == 0

    def isdisjoint(self, other):
        return self.mask & other.mask == 0

    def complement(self, n):
        return VertexSet.from_mask(((1 << n) - 1) & ~self.mask)

    def subsets(self, size=None):
        """
        Yield subsets of this set, all of them or those of one size, by
        increasing size then lexicographically.
        """
        members = self.members
        sizes = range(len(members) + 1) if size is None else [size]
        for s in sizes:
            for combo in itertools.combinations(members, s):
                yield VertexSet(combo)

    def __repr__(self):
        return "VertexSet({%s})" % ", ".join(str(v) for v in self.members)


EMPTY = VertexSet()


@dataclass(frozen=True)
class TestParams(object):
    n: int
    k: int
    t: int
    d: int
    alphabet_size: int

    __test__ = False

    def __post_init__(self):
        if not (self.n >= self.k >= self.t >= 0):
            raise ParameterError(
                "need n >= k >= t >= 0, got n={} k={} t={}".format(
                    self.n, self.k, self.t
                )
            )
        if self.d < 1:
            raise ParameterError("dimension d must be >= 1, got {}".format(self.d))
        if self.alphabet_size < 2:
            raise ParameterError(
                "alphabet_size must be >= 2, got {}".format(self.alphabet_size)
            )

    def validate(self, log=True):
        """
        Report the derived ratios and the size conditions the agreement
        guarantees rely on. Violations are warnings only.

        Return:
            dict: {"alpha", "beta", "C", "warnings"}
        """
        minima = config["PARAMETER_WARNINGS"]
        alpha = self.t / self.k if self.k else 0.0
        beta = (self.k - self.t) / self.k if self.k else 0.0
        ratio = self.n / self.k if self.k else math.inf
        warnings = []
        if self.t < 2 * self.d:
            warnings.append("t={} < 2d={}".format(self.t, 2 * self.d))
        if self.k - self.t < self.d:
            warnings.append("k-t={} < d={}".format(self.k - self.t, self.d))
        if alpha < minima["alpha"]:
            warnings.append("t/k={:.3f} below {}".format(alpha, minima["alpha"]))
        if beta < minima["beta"]:
            warnings.append("(k-t)/k={:.3f} below {}".format(beta, minima["beta"]))
        if ratio < minima["C"]:
            warnings.append("n/k={:.3f} below {}".format(ratio, minima["C"]))
        if self.n < 2 * self.k - self.t:
            warnings.append(
                "n={} < 2k-t={}: nu_(n,k,t) pairs do not exist".format(
                    self.n, 2 * self.k - self.t
                )
            )
        if log:
            for warning in warnings:
                logger.warning("TestParams {}: {}".format(self, warning))
        return {"alpha": alpha, "beta": beta, "C": ratio, "warnings": warnings}

    def to_dict(self):
        return {
            "n": self.n,
            "k": self.k,
            "t": self.t,
            "d": self.d,
            "alphabet_size": self.alphabet_size,
        }


@dataclass(frozen=True)
class BiasedPairParams(object):
    p: float
    q: float

    def __post_init__(self):
        if not 0 <= self.p <= 1 or not 0 <= self.q <= 1:
            raise ParameterError(
                "p and q must lie in [0, 1], got p={} q={}".format(self.p, self.q)
            )
        if self.p * (2 - self.q) > 1 + 1e-12:
            raise ParameterError(
                "mu_(p,q) needs p(2-q) <= 1, got p={} q={}".format(self.p, self.q)
            )

    def to_dict(self):
        return {"p": self.p, "q": self.q}


def derive_stream(seed, *names):
    """
    Derive an independent numpy Generator from a master seed and a path of
    stream names (strings or integers). Identical arguments give identical
    streams.
    """
    words = [int(seed) & 0xFFFFFFFF, (int(seed) >> 32) & 0xFFFFFFFF]
    for name in names:
        if isinstance(name, (int, np.integer)):
            words.append(int(name) & 0xFFFFFFFF)
        else:
            digest = hashlib.sha256(str(name).encode("utf-8")).digest()
            words.append(int.from_bytes(digest[:4], "little"))
    return np.random.default_rng(np.random.SeedSequence(words))


def _check_size(n, k):
    if not 0 <= k <= n:
        raise ParameterError("need 0 <= k <= n, got k={} n={}".format(k, n))


def _from_indices(indices):
    mask = 0
    for v in indices:
        mask |= 1 << int(v)
    return VertexSet.from_mask(mask)


def sample_k_subset(n, k, rng):
    """
    Uniform k-subset of [n].
    """
    _check_size(n, k)
    if k == 0:
        return EMPTY
    return _from_indices(rng.choice(n, size=k, replace=False))


def sample_superset(n, k, A, rng):
    """
    Uniform k-subset of [n] conditioned on containing A.
    """
    _check_size(n, k)
    if len(A) > k or not A.fits(n):
        raise ParameterError("{} cannot lie in a {}-subset of [{}]".format(A, k, n))
    rest = np.array(A.complement(n).members, dtype=np.int64)
    extra = k - len(A)
    if extra == 0:
        return A
    return A | _from_indices(rng.choice(rest, size=extra, replace=False))


def sample_mu(n, p, rng, containing=None):
    """
    mu_p sample on [n], optionally conditioned on containing a set.
    """
    if not 0 <= p <= 1:
        raise ParameterError("p must lie in [0, 1], got {}".format(p))
    picked = np.flatnonzero(rng.random(n) < p)
    S = _from_indices(picked)
    if containing is not None:
        S = S | containing
    return S


def sample_pair_nu(params, rng):
    """
    (S1, S2) from nu_(n,k,t): draw U uniform of size t, then S1 \\ U and
    S2 \\ U as disjoint uniform (k-t)-subsets of [n] \\ U.
    """
    return sample_pair_nu_containing(params, EMPTY, rng)


def sample_pair_nu_containing(params, T, rng):
    """
    nu_(n,k,t) conditioned on S1 & S2 containing T: the missing t-|T|
    intersection elements are drawn first.
    """
    n, k, t = params.n, params.k, params.t
    if n < 2 * k - t:
        raise ParameterError(
            "nu_(n,k,t) needs n >= 2k-t, got n={} k={} t={}".format(n, k, t)
        )
    if len(T) > t or not T.fits(n):
        raise ParameterError("{} does not fit in an intersection of size {}".format(T, t))
    rest = np.array(T.complement(n).members, dtype=np.int64)
    drawn = rng.choice(rest, size=(t - len(T)) + 2 * (k - t), replace=False)
    cut = t - len(T)
    U = T | _from_indices(drawn[:cut])
    S1 = U | _from_indices(drawn[cut : cut + k - t])
    S2 = U | _from_indices(drawn[cut + k - t :])
    return S1, S2


def sample_pair_nu_through(params, U, rng):
    """
    nu_(n,k,t) conditioned on S1 & S2 == U exactly (|U| == t).
    """
    n, k, t = params.n, params.k, params.t
    if len(U) != t:
        raise ParameterError("intersection must have size t={}, got {}".format(t, U))
    if n < 2 * k - t:
        raise ParameterError(
            "nu_(n,k,t) needs n >= 2k-t, got n={} k={} t={}".format(n, k, t)
        )
    rest = np.array(U.complement(n).members, dtype=np.int64)
    drawn = rng.choice(rest, size=2 * (k - t), replace=False)
    return U | _from_indices(drawn[: k - t]), U | _from_indices(drawn[k - t :])


def sample_pair_mu(n, params, rng):
    """
    (S1, S2) from mu_(p,q): per element, only in S1 or only in S2 with
    probability p(1-q) each, in both with probability pq.
    """
    p, q = params.p, params.q
    only = p * (1 - q)
    u = rng.random(n)
    in_first = np.flatnonzero(u < only)
    in_second = np.flatnonzero((u >= only) & (u < 2 * only))
    in_both = np.flatnonzero((u >= 2 * only) & (u < 2 * only + p * q))
    both = _from_indices(in_both)
    return both | _from_indices(in_first), both | _from_indices(in_second)


def enumerate_k_subsets(n, k):
    """
    Every k-subset of [n] exactly once, lexicographic order.
    """
    _check_size(n, k)
    for combo in itertools.combinations(range(n), k):
        yield VertexSet(combo)


def enumerate_small_subsets(S, d, include_empty=False):
    """
    Every subset of S with size in [1, d] ([0, d] with include_empty), by
    size then lexicographically. This order is the canonical order of local
    function tables.
    """
    if d < 1:
        raise ParameterError("d must be >= 1, got {}".format(d))
    members = S.members
    start = 0 if include_empty else 1
    for size in range(start, min(d, len(members)) + 1):
        for combo in itertools.combinations(members, size):
            yield VertexSet(combo)


def count_small_subsets(size, d, include_empty=False):
    start = 0 if include_empty else 1
    return sum(math.comb(size, j) for j in range(start, min(d, size) + 1))


def sample_mask_matrix_uniform(n, k, samples, rng):
    """
    Boolean (samples x n) matrix whose rows are independent uniform
    k-subsets of [n].
    """
    _check_size(n, k)
    out = np.zeros((samples, n), dtype=bool)
    if k == 0 or samples == 0:
        return out
    if k == n:
        out[:] = True
        return out
    picks = np.argpartition(rng.random((samples, n)), k - 1, axis=1)[:, :k]
    np.put_along_axis(out, picks, True, axis=1)
    return out


def sample_mask_matrix_mu(n, p, samples, rng):
    return rng.random((samples, n)) < p


def row_to_set(row):
    return _from_indices(np.flatnonzero(row))


def count_pairs_nu(params, W=EMPTY):
    """
    Size of the support of nu_(n,k,t) conditioned on S1 & S2 containing W.
    """
    n, k, t = params.n, params.k, params.t
    if len(W) > t or n < 2 * k - t:
        return 0
    return (
        math.comb(n - len(W), t - len(W))
        * math.comb(n - t, k - t)
        * math.comb(n - k, k - t)
    )


def enumerate_pairs_nu(params, W=EMPTY):
    """
    Every ordered pair (S1, S2) with |S1| = |S2| = k, S1 & S2 of size t and
    containing W, each once. Uniform weights over this stream give nu_(n,k,t)
    conditioned on S1 & S2 ⊇ W.
    """
    n, k, t = params.n, params.k, params.t
    if n < 2 * k - t:
        raise ParameterError(
            "nu_(n,k,t) needs n >= 2k-t, got n={} k={} t={}".format(n, k, t)
        )
    outside = W.complement(n).members
    for extra in itertools.combinations(outside, t - len(W)):
        U = W | VertexSet(extra)
        rest = U.complement(n).members
        for first in itertools.combinations(rest, k - t):
            S1 = U | VertexSet(first)
            remaining = [v for v in rest if v not in first]
            for second in itertools.combinations(remaining, k - t):
                yield S1, U | VertexSet(second)
