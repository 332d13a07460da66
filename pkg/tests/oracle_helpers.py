"""Independent oracle implementations used to cross-check the library.

Everything here deliberately avoids the library's BFS tables and boundary
formulas: balls come from brute enumeration of generator words, distances
from iterative-deepening word search, and the unitriangular product from
literal 3x3 integer matrix multiplication.
"""

from itertools import product


def word_ball(group, radius):
    """All products of at most `radius` generators, by brute word enumeration."""
    gens = group.generating_set.elements
    seen = {group.identity()}
    for n in range(1, radius + 1):
        for word in product(gens, repeat=n):
            acc = group.identity()
            for s in word:
                acc = group.mul(s, acc)
            seen.add(acc)
    return seen


def word_length_by_enumeration(group, g, max_depth):
    """Minimal n such that some product of n generators equals g; None if
    nothing within max_depth reaches it."""
    if g == group.identity():
        return 0
    gens = group.generating_set.elements
    mul = group.mul

    def reaches(cur, remaining):
        if remaining == 0:
            return cur == g
        return any(reaches(mul(s, cur), remaining - 1) for s in gens)

    for n in range(1, max_depth + 1):
        if reaches(group.identity(), n):
            return n
    return None


def naive_outer_boundary(group, members):
    """(S*D) \\ D computed from scratch on a plain set."""
    out = set()
    for s in group.generating_set.elements:
        for x in members:
            h = group.mul(s, x)
            if h not in members:
                out.add(h)
    return out


def naive_inner_boundary(group, members, side):
    """Inner boundary on a plain set; side is "left" (s*x) or "right" (x*s)."""
    gens = group.generating_set.elements
    out = set()
    for x in members:
        for s in gens:
            h = group.mul(s, x) if side == "left" else group.mul(x, s)
            if h not in members:
                out.add(x)
                break
    return out


def unitriangular_matmul(p, q):
    """Multiply two 3x3 upper unitriangular integer matrices given as
    (a, b, c) encoding [[1, a, c], [0, 1, b], [0, 0, 1]]."""
    mp = [[1, p[0], p[2]], [0, 1, p[1]], [0, 0, 1]]
    mq = [[1, q[0], q[2]], [0, 1, q[1]], [0, 0, 1]]
    out = [[sum(mp[i][k] * mq[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert out[0][0] == out[1][1] == out[2][2] == 1 and out[1][0] == out[2][0] == out[2][1] == 0
    return (out[0][1], out[1][2], out[0][2])
