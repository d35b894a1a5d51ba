import math
from typing import List, Sequence, Tuple


def two_sum(a: float, b: float) -> Tuple[float, float]:
    """Error-free transformation: a + b == s + e exactly."""
    s = a + b
    bp = s - a
    e = (a - (s - bp)) + (b - bp)
    return s, e


def block_sum(values) -> float:
    """Correctly rounded sum of one block of terms."""
    return math.fsum(values)


def tree_reduce(partials: Sequence[float]) -> float:
    """
    Combine block partial sums pairwise in a fixed binary-tree order.

    Each node carries (sum, compensation); rounding errors from two_sum are
    accumulated alongside and folded back in at the root. The tree shape
    depends only on len(partials), never on how the partials were produced.
    """
    if not partials:
        return 0.0
    nodes: List[Tuple[float, float]] = [(float(p), 0.0) for p in partials]
    while len(nodes) > 1:
        merged = []
        for k in range(0, len(nodes) - 1, 2):
            (s1, c1), (s2, c2) = nodes[k], nodes[k + 1]
            s, e = two_sum(s1, s2)
            merged.append((s, c1 + c2 + e))
        if len(nodes) % 2:
            merged.append(nodes[-1])
        nodes = merged
    total, compensation = nodes[0]
    return total + compensation
