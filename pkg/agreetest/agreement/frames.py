"""
Restriction frames around a seed set T.

T^(i) holds the small sets with at most i elements outside T and T^(A) the
small sets whose elements outside T all lie in A. Two local functions are
related on a frame when they agree on every set of the frame inside both
domains. Frames are predicates over sets, never materialized domains.
"""

from agreetest.sets import enumerate_small_subsets


def in_level_frame(B, T, i):
    return len(B - T) <= i


def in_set_frame(B, T, A):
    return (B - T).issubset(A)


def frame_sets(U, T, d, include_empty=False, level=None, A=None):
    """
    Small subsets of U inside T^(level) (when level is given) and inside
    T^(A) (when A is given), in canonical order.
    """
    out = []
    for B in enumerate_small_subsets(U, d, include_empty):
        if level is not None and not in_level_frame(B, T, level):
            continue
        if A is not None and not in_set_frame(B, T, A):
            continue
        out.append(B)
    return out


def seed_event(disagreements, T, A=None):
    """
    Evaluate the seed disagreement event on a pair, given the sets where
    the pair disagrees.

    With A None: the pair disagrees somewhere inside T. With |A| = i: the
    pair agrees on T^(i-1) and disagrees on T^(A).
    """
    if A is None:
        return any(B.issubset(T) for B in disagreements)
    level = len(A) - 1
    if any(in_level_frame(B, T, level) for B in disagreements):
        return False
    return any(in_set_frame(B, T, A) for B in disagreements)
