"""Independent brute-force oracles used by the tests.

Nothing here calls the package's algorithms; only plain Python data and
``fractions`` are used, so agreement is a genuine cross-check.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations, permutations, product
from math import gcd


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------

def det(rows):
    n = len(rows)
    if n == 0:
        return 1
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def invariant_factors(rows):
    """Nonzero invariant factors via determinantal divisors ``d_k = gcd of k x k minors``."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in combinations(range(m), k):
            for c in combinations(range(n), k):
                g = gcd(g, det([[rows[i][j] for j in c] for i in r]))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[k] // divisors[k - 1] for k in range(1, len(divisors)))


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# fixed points of a lattice automorphism on N-torsion
# ---------------------------------------------------------------------------

def torsion_fixed_points(M, N):
    """Phase vectors ``p in (1/N Z / Z)^r`` with ``p (M - I) = 0 mod 1``."""
    r = len(M)
    out = []
    for xs in product(range(N), repeat=r):
        if all(sum(xs[i] * (M[i][j] - (i == j)) for i in range(r)) % N == 0 for j in range(r)):
            out.append(xs)
    return out


def fixed_rank(M):
    """Rank of ``ker(M - I)`` over Q by Gaussian elimination on fractions."""
    r = len(M)
    A = [[Fraction(M[i][j] - (i == j)) for j in range(r)] for i in range(r)]
    rank = 0
    for col in range(r):
        piv = next((i for i in range(rank, r) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(r):
            if i != rank and A[i][col] != 0:
                f = A[i][col] / A[rank][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
    return r - rank


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

def closure(generators):
    """All products of the generators, as tuples of tuples."""
    n = len(generators[0])
    e = tuple(map(tuple, identity(n)))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for h in generators:
                p = tuple(map(tuple, matmul(g, h)))
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return seen


def class_count(elements):
    elems = list(elements)
    inv = {}
    for g in elems:
        for h in elems:
            if matmul(g, h) == identity(len(g)):
                inv[g] = h
                break
    seen = set()
    count = 0
    for g in elems:
        if g in seen:
            continue
        count += 1
        for h in elems:
            seen.add(tuple(map(tuple, matmul(matmul(h, g), inv[h]))))
    return count


def partition_count(n):
    """Number of partitions of n by the standard recursion on the largest part."""
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        table[0][k] = 1
    for m in range(1, n + 1):
        for k in range(1, n + 1):
            table[m][k] = table[m][k - 1] + (table[m - k][k] if k <= m else 0)
    return table[n][n] if n else 1


# ---------------------------------------------------------------------------
# multisegments
# ---------------------------------------------------------------------------

def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def brute_force_fibers(sigma, step):
    """Distinct multisegments on ``sigma``: every set partition, each block
    checked to be a chain ``x, x*step, ..., x*step^(m-1)``.

    ``sigma`` and ``step`` support ``*`` and ``==`` and are hashable and
    orderable.  A multisegment is recorded as the sorted multiset of its
    blocks, each block as its sorted entries.
    """
    found = set()
    for part in set_partitions(list(range(len(sigma)))):
        blocks = []
        for block in part:
            vals = sorted(sigma[i] for i in block)
            if not _is_chain(vals, step):
                break
            blocks.append(tuple(vals))
        else:
            found.add(tuple(sorted(blocks)))
    return found


def _is_chain(vals, step):
    m = len(vals)
    for x in vals:
        chain = [x]
        for _ in range(m - 1):
            chain.append(chain[-1] * step)
        if sorted(chain) == vals:
            return True
    return False


# ---------------------------------------------------------------------------
# exact matrices over Q
# ---------------------------------------------------------------------------

def qmatmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for i in range(len(a))]


def qpow(a, k):
    out = [[Fraction(int(i == j)) for j in range(len(a))] for i in range(len(a))]
    for _ in range(k):
        out = qmatmul(out, a)
    return out


def lcm_all(xs):
    return reduce(lambda a, b: a * b // gcd(a, b), xs, 1)
