"""Brute-force oracles, written without the library's search code.

Everything here enumerates the definition directly over plain Python values
so that expected results never come from the implementation under test.
"""

from __future__ import annotations

import itertools


def topology_count(n: int) -> int:
    """Number of families of subsets of an n-point set that contain the empty
    set and the carrier and are closed under pairwise union and intersection."""
    subsets = list(range(1 << n))
    full = (1 << n) - 1
    inner = [s for s in subsets if s not in (0, full)]
    count = 0
    for k in range(len(inner) + 1):
        for chosen in itertools.combinations(inner, k):
            fam = set(chosen) | {0, full}
            if all((a | b) in fam and (a & b) in fam for a in fam for b in fam):
                count += 1
    return count


def topologies(n: int) -> set[frozenset[int]]:
    full = (1 << n) - 1
    inner = [s for s in range(1 << n) if s not in (0, full)]
    out = set()
    for k in range(len(inner) + 1):
        for chosen in itertools.combinations(inner, k):
            fam = frozenset(set(chosen) | {0, full})
            if all((a | b) in fam and (a & b) in fam for a in fam for b in fam):
                out.add(fam)
    return out


def normal_subgroups(table: list[list[int]]) -> set[int]:
    """Subsets (as bitmasks) closed under the operation, containing the identity
    and invariant under conjugation."""
    n = len(table)
    e = next(x for x in range(n) if all(table[x][y] == y for y in range(n)))
    inv = [next(y for y in range(n) if table[x][y] == e) for x in range(n)]
    found = set()
    for mask in range(1, 1 << n):
        members = [x for x in range(n) if mask >> x & 1]
        if e not in members:
            continue
        if any(not mask >> table[a][b] & 1 for a in members for b in members):
            continue
        if any(not mask >> table[table[g][h]][inv[g]] & 1 for g in range(n) for h in members):
            continue
        found.add(mask)
    return found


def homomorphisms(t1: list[list[int]], t2: list[list[int]]) -> set[tuple[int, ...]]:
    n, m = len(t1), len(t2)
    return {
        f for f in itertools.product(range(m), repeat=n)
        if all(f[t1[a][b]] == t2[f[a]][f[b]] for a in range(n) for b in range(n))
    }


def is_group_topology(table: list[list[int]], opens: frozenset[int]) -> bool:
    """Inversion and multiplication continuous, checked pointwise on opens."""
    n = len(table)
    e = next(x for x in range(n) if all(table[x][y] == y for y in range(n)))
    inv = [next(y for y in range(n) if table[x][y] == e) for x in range(n)]
    for w in opens:
        pre = sum(1 << x for x in range(n) if w >> inv[x] & 1)
        if pre not in opens:
            return False
    for w in opens:
        for x in range(n):
            for y in range(n):
                if not w >> table[x][y] & 1:
                    continue
                ok = any(
                    all(w >> table[a][b] & 1 for a in range(n) if u >> a & 1 for b in range(n) if v >> b & 1)
                    for u in opens if u >> x & 1 for v in opens if v >> y & 1
                )
                if not ok:
                    return False
    return True


def is_continuous(table: tuple[int, ...], dom_opens, cod_opens) -> bool:
    for v in cod_opens:
        pre = sum(1 << i for i, y in enumerate(table) if v >> y & 1)
        if pre not in dom_opens:
            return False
    return True


# -- axioms, evaluated literally ---------------------------------------------


def c1(phi, pi, compose) -> bool:
    return all(
        any(
            all(
                any(all(compose(f1, f2) is not None and compose(f1, f2) in e3 for f1 in e1 for f2 in e2)
                    for e3 in f3)
                for e1 in a for e2 in b
            )
            for f3 in phi
        )
        for a, b in pi
    )


def c2(phi, pi, compose, strict: bool = True) -> bool:
    def inner(f1, f2, f3, e4) -> bool:
        f12, f23 = compose(f1, f2), compose(f2, f3)
        if f12 is None or f23 is None:
            return False
        left, right = compose(f1, f23), compose(f12, f3)
        if left is None or right is None or left != right:
            return False
        return not strict or left in e4

    chains = [(a, b, c) for a, b in pi for b2, c in pi if b2 == b]
    return all(
        any(
            all(
                any(all(inner(f1, f2, f3, e4) for f1 in e1 for f2 in e2 for f3 in e3) for e4 in f4)
                for e1 in a for e2 in b for e3 in c
            )
            for f4 in phi
        )
        for a, b, c in chains
    )


def c3(phi, pi, compose) -> bool:
    def neutral_left(g, obj) -> bool:
        return all(compose(g, f) == f for e in obj for f in e)

    def neutral_right(g, obj) -> bool:
        return all(compose(f, g) == f for e in obj for f in e)

    for obj in phi:
        lefts = [a for a, b in pi if b == obj]
        rights = [b for a, b in pi if a == obj]
        if not lefts or not rights:
            return False
        if not any(neutral_left(g, obj) for a in lefts for e in a for g in e):
            return False
        if not any(neutral_right(g, obj) for b in rights for e in b for g in e):
            return False
    return True
