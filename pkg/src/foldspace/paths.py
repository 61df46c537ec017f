"""Edge paths as tuples of signed edge indices.

An oriented edge is a nonzero int: +k is the positive orientation of the
unoriented edge with 1-based index k, -k its reverse.  A path is a tuple of
oriented edges; the empty tuple is the trivial path.  Reversal negates and
reverses.  These helpers are graph-agnostic; composability checks live on
OrientedGraph, which knows endpoints.
"""

from .errors import MalformedPathError


def reverse_path(path):
    return tuple(-e for e in reversed(path))


def is_reduced(path):
    return all(path[i] != -path[i + 1] for i in range(len(path) - 1))


def is_cyclically_reduced(path):
    if not is_reduced(path):
        return False
    return len(path) < 2 or path[0] != -path[-1]


def tighten(path):
    """Freely reduce: cancel adjacent (e, -e) pairs until none remain."""
    out = []
    for e in path:
        if out and out[-1] == -e:
            out.pop()
        else:
            out.append(e)
    return tuple(out)


def cyclic_tighten(path):
    """Freely reduce as a cyclic word (reduce, then cancel around the seam)."""
    out = list(tighten(path))
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
    return tuple(out)


def concat_reduced(*paths):
    """Concatenate and tighten."""
    joined = []
    for p in paths:
        joined.extend(p)
    return tighten(joined)


def count_occurrences(word, pattern):
    """Occurrences of ``pattern`` as a contiguous subword of ``word``,
    overlaps allowed, orientation not symmetrized."""
    if not pattern or len(pattern) > len(word):
        return 0
    k = len(pattern)
    first = pattern[0]
    total = 0
    for i in range(len(word) - k + 1):
        if word[i] == first and word[i:i + k] == pattern:
            total += 1
    return total


def cyclic_rotations(path):
    n = len(path)
    return [path[i:] + path[:i] for i in range(n)] or [path]


def canonical_cycle(path):
    """Canonical representative of a cyclic path up to rotation and reversal.

    Deterministic (lexicographic minimum over all rotations of both
    orientations); used to deduplicate candidate loops and cycles.
    """
    if not path:
        return path
    best = None
    for p in (path, reverse_path(path)):
        for rot in cyclic_rotations(p):
            if best is None or rot < best:
                best = rot
    return best


def require_reduced(path, what="path"):
    if not is_reduced(path):
        raise MalformedPathError(f"{what} is not reduced: {path}")
    return path
