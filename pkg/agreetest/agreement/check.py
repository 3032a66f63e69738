from agreetest.errors import ParameterError
from agreetest.sets import enumerate_small_subsets


def agree_check(f1, f2, d=None, include_empty=None):
    """
    True iff f1 and f2 agree on every set of size 1..d (0..d with
    include_empty) inside the intersection of their domains.

    Args:
        f1 (LocalFunction): f_{S1}
        f2 (LocalFunction): f_{S2}
        d (int): dimension, the smaller of the two by default
        include_empty (bool): the flag of f1 by default

    Return:
        bool
    """
    d = min(f1.d, f2.d) if d is None else d
    if d > min(f1.d, f2.d):
        raise ParameterError("cannot check dimension {} on these tables".format(d))
    include_empty = f1.include_empty if include_empty is None else include_empty
    common = f1.S & f2.S
    return all(
        f1[A] == f2[A] for A in enumerate_small_subsets(common, d, include_empty)
    )


def disagreement_set(E, S1, S2):
    """
    The small subsets of S1 & S2 on which f_{S1} and f_{S2} differ.
    """
    common = S1 & S2
    return [
        A
        for A in enumerate_small_subsets(common, E.params.d, E.include_empty)
        if E.value(S1, A) != E.value(S2, A)
    ]


def table_disagreement_set(f1, f2):
    common = f1.S & f2.S
    return [
        A
        for A in enumerate_small_subsets(common, f1.d, f1.include_empty)
        if f1[A] != f2[A]
    ]
