import math

from cdislogging import get_logger

from agreetest.config import config
from agreetest.ensemble.corruption import CorruptionLayer
from agreetest.ensemble.functions import LocalFunction
from agreetest.errors import ExactInfeasibleError, ParameterError
from agreetest.sets import (
    BiasedPairParams,
    TestParams,
    VertexSet,
    enumerate_k_subsets,
    enumerate_small_subsets,
)

logger = get_logger(__name__)

IMPLICIT = "implicit"
EXPLICIT = "explicit"

_SEED_BOUND = 2 ** 63


class LocalEnsemble(object):
    """
    An ensemble {f_S}: one local function per k-subset S of [n], or per
    subset of [n] of any size in the biased regime.

    Implicit ensembles are a global function plus a stack of corruption
    layers; f_S is computed on demand. Explicit ensembles store every table.
    """

    def __init__(
        self,
        params,
        global_function=None,
        layers=(),
        tables=None,
        include_empty=False,
        bias=None,
    ):
        self.params = params
        self.global_function = global_function
        self.layers = tuple(layers)
        self.include_empty = include_empty
        self.bias = bias
        if (global_function is None) == (tables is None):
            raise ParameterError(
                "an ensemble is backed by either a global function or explicit tables"
            )
        if global_function is not None:
            if (
                global_function.n != params.n
                or global_function.d != params.d
                or global_function.alphabet_size != params.alphabet_size
                or global_function.include_empty != include_empty
            ):
                raise ParameterError(
                    "global function does not match the ensemble parameters"
                )
            self.tables = None
        else:
            self.tables = {}
            for S, f in tables.items():
                if bias is None and len(S) != params.k:
                    raise ParameterError(
                        "explicit table on {} but k={}".format(S, params.k)
                    )
                if f.S != S or f.d != params.d or f.include_empty != include_empty:
                    raise ParameterError("table stored under {} is for {}".format(S, f.S))
                self.tables[S] = f

    @property
    def kind(self):
        return IMPLICIT if self.tables is None else EXPLICIT

    @property
    def is_biased(self):
        return self.bias is not None

    def __repr__(self):
        return "LocalEnsemble({}, {}, layers={})".format(
            self.kind, self.params, len(self.layers)
        )

    def with_params(self, **changes):
        """
        Same backing with other test parameters (t of the agreement test).
        """
        values = self.params.to_dict()
        values.update(changes)
        return LocalEnsemble(
            TestParams(**values),
            global_function=self.global_function,
            layers=self.layers,
            tables=self.tables,
            include_empty=self.include_empty,
            bias=self.bias,
        )

    def _check_set(self, S):
        if not S.fits(self.params.n):
            raise ParameterError("{} is not a subset of [{}]".format(S, self.params.n))
        if self.bias is None and len(S) != self.params.k:
            raise ParameterError(
                "local functions live on {}-sets, got |S|={}".format(
                    self.params.k, len(S)
                )
            )

    def domain(self, S):
        return list(enumerate_small_subsets(S, self.params.d, self.include_empty))

    def value(self, S, A):
        """
        f_S(A) without materializing the whole table.
        """
        if self.tables is not None:
            try:
                return self.tables[S][A]
            except KeyError:
                self._check_set(S)
                raise ParameterError("no table stored for {}".format(S))
        value = self.global_function[A]
        for layer in self.layers:
            value = layer.apply(S, A, value, self.params.alphabet_size)
        return value

    def materialize_local(self, S):
        """
        f_S as a LocalFunction. Deterministic for a fixed ensemble and S.
        """
        self._check_set(S)
        if self.tables is not None:
            if S not in self.tables:
                raise ParameterError("no table stored for {}".format(S))
            return self.tables[S]
        return LocalFunction(
            S,
            self.params.d,
            {A: self.value(S, A) for A in self.domain(S)},
            include_empty=self.include_empty,
        )

    def corrupt(self, spec, rng):
        """
        New ensemble with one more corruption layer; rate 0 leaves the
        ensemble unchanged.

        Args:
            spec (CorruptionSpec)
            rng (numpy.random.Generator): supplies the layer seed

        Return:
            LocalEnsemble
        """
        if spec.rate == 0:
            return self
        layer = CorruptionLayer(spec=spec, seed=int(rng.integers(0, _SEED_BOUND)))
        logger.debug("adding {} corruption at rate {}".format(spec.mode, spec.rate))
        if self.tables is None:
            return LocalEnsemble(
                self.params,
                global_function=self.global_function,
                layers=self.layers + (layer,),
                include_empty=self.include_empty,
                bias=self.bias,
            )
        tables = {}
        for S, f in self.tables.items():
            tables[S] = LocalFunction(
                S,
                self.params.d,
                {
                    A: layer.apply(S, A, f[A], self.params.alphabet_size)
                    for A in self.domain(S)
                },
                include_empty=self.include_empty,
            )
        return LocalEnsemble(
            self.params,
            tables=tables,
            include_empty=self.include_empty,
            bias=self.bias,
        )

    def sets(self):
        """
        Every set carrying a local function, in lexicographic order. Explicit
        ensembles list their stored sets; implicit ones enumerate all
        k-subsets under DECODE_EXACT_MAX_SETS.
        """
        if self.tables is not None:
            return sorted(self.tables)
        n, k = self.params.n, self.params.k
        if self.bias is not None:
            total = 2 ** n
        else:
            total = math.comb(n, k)
        if total > config["DECODE_EXACT_MAX_SETS"]:
            raise ExactInfeasibleError(
                "enumerating {} local functions".format(total), alternative="mc mode"
            )
        if self.bias is not None:
            return [VertexSet.from_mask(mask) for mask in range(2 ** n)]
        return list(enumerate_k_subsets(n, k))

    def to_explicit(self):
        tables = {S: self.materialize_local(S) for S in self.sets()}
        return LocalEnsemble(
            self.params, tables=tables, include_empty=self.include_empty, bias=self.bias
        )


def from_global(F, k, t=None, bias=None):
    """
    The ensemble f_S = F|_S.

    Args:
        F (GlobalFunction)
        k (int): local set size
        t (int): intersection size of the agreement test, k // 2 by default
        bias (BiasedPairParams): switches to the biased regime

    Return:
        LocalEnsemble
    """
    if not F.d <= k <= F.n:
        raise ParameterError(
            "from_global needs d <= k <= n, got d={} k={} n={}".format(F.d, k, F.n)
        )
    if bias is not None and not isinstance(bias, BiasedPairParams):
        raise ParameterError("bias must be BiasedPairParams")
    params = TestParams(
        n=F.n,
        k=k,
        t=k // 2 if t is None else t,
        d=F.d,
        alphabet_size=F.alphabet_size,
    )
    return LocalEnsemble(
        params, global_function=F, include_empty=F.include_empty, bias=bias
    )


def materialize_local(E, S):
    return E.materialize_local(S)


def corrupt(E, spec, rng):
    return E.corrupt(spec, rng)
