"""
JSON persistence of ensembles and global functions.

Ensemble files carry a header {n, k, t, d, alphabet_size, kind,
include_empty, bias} and either a generator {global, corruption: [layers]}
(implicit) or records [{S, f}] (explicit). A-keys are comma-joined sorted
vertex indices, "" for the empty set.
"""

import json

from cdislogging import get_logger

from agreetest.ensemble.corruption import CorruptionLayer
from agreetest.ensemble.functions import GlobalFunction, LocalFunction
from agreetest.ensemble.local import EXPLICIT, IMPLICIT, LocalEnsemble
from agreetest.errors import ParameterError, ParseError
from agreetest.sets import BiasedPairParams, TestParams, VertexSet

logger = get_logger(__name__)


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def ensemble_to_dict(E):
    header = dict(E.params.to_dict())
    header.update(
        {
            "kind": E.kind,
            "include_empty": E.include_empty,
            "bias": E.bias.to_dict() if E.bias is not None else None,
        }
    )
    data = {"header": header}
    if E.kind == IMPLICIT:
        data["generator"] = {
            "global": E.global_function.to_dict()["values"],
            "corruption": [layer.to_dict() for layer in E.layers],
        }
    else:
        data["records"] = [E.tables[S].to_record() for S in sorted(E.tables)]
    return data


def ensemble_from_dict(data, path=None):
    try:
        header = data["header"]
        params = TestParams(
            n=header["n"],
            k=header["k"],
            t=header["t"],
            d=header["d"],
            alphabet_size=header["alphabet_size"],
        )
        include_empty = bool(header.get("include_empty", False))
        bias = BiasedPairParams(**header["bias"]) if header.get("bias") else None
        kind = header["kind"]
        if kind == IMPLICIT:
            generator = data["generator"]
            F = GlobalFunction(
                params.n,
                params.d,
                params.alphabet_size,
                dict(generator["global"]),
                include_empty=include_empty,
            )
            layers = [CorruptionLayer.from_dict(c) for c in generator["corruption"]]
            return LocalEnsemble(
                params,
                global_function=F,
                layers=layers,
                include_empty=include_empty,
                bias=bias,
            )
        if kind == EXPLICIT:
            tables = {}
            for record in data["records"]:
                S = VertexSet(record["S"])
                if S in tables:
                    raise ParseError("duplicate record for {}".format(S), path=path)
                tables[S] = LocalFunction(
                    S,
                    params.d,
                    {VertexSet.from_key(a): v for a, v in record["f"].items()},
                    include_empty=include_empty,
                )
            return LocalEnsemble(
                params, tables=tables, include_empty=include_empty, bias=bias
            )
        raise ParseError("unknown ensemble kind {!r}".format(kind), path=path)
    except KeyError as exc:
        raise ParseError("missing field {}".format(exc), path=path)
    except (TypeError, ValueError, ParameterError) as exc:
        raise ParseError(getattr(exc, "message", str(exc)), path=path)


def _load_json(text, path):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=path, line=exc.lineno, column=exc.colno)


def save_ensemble(E, path):
    with open(path, "w") as f:
        f.write(dumps(ensemble_to_dict(E)))
    logger.debug("wrote {} ensemble to {}".format(E.kind, path))


def load_ensemble(path):
    """
    Load an ensemble file. Malformed input raises ParseError and returns no
    partial ensemble.
    """
    with open(path) as f:
        text = f.read()
    return ensemble_from_dict(_load_json(text, path), path=path)


def save_global_function(G, path):
    with open(path, "w") as f:
        f.write(dumps(G.to_dict()))


def load_global_function(path):
    with open(path) as f:
        text = f.read()
    data = _load_json(text, path)
    try:
        return GlobalFunction.from_dict(data)
    except KeyError as exc:
        raise ParseError("missing field {}".format(exc), path=path)
    except (TypeError, ValueError, ParameterError) as exc:
        raise ParseError(getattr(exc, "message", str(exc)), path=path)
