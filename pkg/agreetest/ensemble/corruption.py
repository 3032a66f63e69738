"""
Corruption models for implicit ensembles.

Every random decision is a keyed hash of (layer seed, S, A), so a given
entry f_S(A) is corrupted the same way by every caller, in every process,
without storing anything.
"""

import hashlib
from dataclasses import dataclass, field
from typing import Tuple

from agreetest.errors import ParameterError
from agreetest.sets import VertexSet

REPLACE_SET = "replace_set"
FLIP_ENTRY = "flip_entry"
PLANTED_DISAGREEMENT = "planted_disagreement"
MODES = (REPLACE_SET, FLIP_ENTRY, PLANTED_DISAGREEMENT)

_SCALE = float(1 << 53)


@dataclass(frozen=True)
class CorruptionSpec(object):
    """
    Args:
        mode (str): replace_set, flip_entry or planted_disagreement
        rate (float): probability of corrupting a set (replace_set) or an entry
        planted (tuple): the sets D whose entries planted_disagreement flips
    """

    mode: str
    rate: float
    planted: Tuple[VertexSet, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParameterError(
                "corruption mode must be one of {}, got {}".format(MODES, self.mode)
            )
        if not 0 <= self.rate <= 1:
            raise ParameterError(
                "corruption rate must lie in [0, 1], got {}".format(self.rate)
            )
        planted = tuple(
            A if isinstance(A, VertexSet) else VertexSet(A) for A in self.planted
        )
        object.__setattr__(self, "planted", planted)
        if self.mode == PLANTED_DISAGREEMENT and not planted:
            raise ParameterError("planted_disagreement needs a non-empty planted set")

    def to_dict(self):
        return {
            "mode": self.mode,
            "rate": self.rate,
            "planted": [list(A.members) for A in self.planted],
        }


def keyed_uniform(seed, tag, S, A=None):
    """
    Deterministic float in [0, 1) from (seed, tag, S, A).
    """
    key = int(seed).to_bytes(8, "little", signed=False)
    message = "{}|{:x}|{}".format(
        tag, S.mask, "" if A is None else "{:x}".format(A.mask)
    ).encode("ascii")
    digest = hashlib.blake2b(message, key=key, digest_size=8).digest()
    return (int.from_bytes(digest, "little") >> 11) / _SCALE


def keyed_symbol(seed, tag, S, A, size):
    return min(int(keyed_uniform(seed, tag, S, A) * size), size - 1)


def _flip(seed, S, A, value, alphabet_size):
    shift = 1 + keyed_symbol(seed, "shift", S, A, alphabet_size - 1)
    return (value + shift) % alphabet_size


@dataclass(frozen=True)
class CorruptionLayer(object):
    spec: CorruptionSpec
    seed: int

    def set_replaced(self, S):
        return (
            self.spec.mode == REPLACE_SET
            and keyed_uniform(self.seed, "set", S) < self.spec.rate
        )

    def apply(self, S, A, value, alphabet_size):
        """
        Value of f_S(A) after this layer, given its value before.
        """
        mode = self.spec.mode
        if mode == REPLACE_SET:
            if self.set_replaced(S):
                return keyed_symbol(self.seed, "table", S, A, alphabet_size)
            return value
        if mode == PLANTED_DISAGREEMENT and A not in self.spec.planted:
            return value
        if keyed_uniform(self.seed, "entry", S, A) < self.spec.rate:
            return _flip(self.seed, S, A, value, alphabet_size)
        return value

    def to_dict(self):
        out = self.spec.to_dict()
        out["seed"] = self.seed
        return out

    @classmethod
    def from_dict(cls, data):
        spec = CorruptionSpec(
            mode=data["mode"],
            rate=data["rate"],
            planted=tuple(VertexSet(A) for A in data.get("planted") or ()),
        )
        return cls(spec=spec, seed=int(data["seed"]))
