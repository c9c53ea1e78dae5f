"""Small permutation-group utilities: orbits, group order (Schreier-Sims).

Permutations act on 0..n-1 and are stored as lists with p[i] = image of i.
"""

from __future__ import annotations


def identity(n: int) -> list[int]:
    return list(range(n))

def multiply(p: list[int], q: list[int]) -> list[int]:
    """(p * q)(i) = p(q(i)): apply q first."""
    return [p[q[i]] for i in range(len(p))]


def inverse(p: list[int]) -> list[int]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return out


def cycle_count(p: list[int]) -> int:
    seen = [False] * len(p)
    count = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        count += 1
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
    return count


def cycles(p: list[int]) -> list[list[int]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(cyc)
    return out


def orbits(gens: list[list[int]], n: int) -> list[list[int]]:
    """Orbits of the generated group on 0..n-1 (union-find flavored BFS)."""
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        orbit = [s]
        seen[s] = True
        frontier = [s]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
                    frontier.append(y)
        out.append(sorted(orbit))
    return out


def is_transitive(gens: list[list[int]], n: int) -> bool:
    return len(orbits(gens, n)) == 1 if n > 0 else True


def group_order(gens: list[list[int]], n: int) -> int:
    """Order of <gens> via a deterministic Schreier-Sims stabilizer chain.

    Rebuild-and-verify formulation: transversals are rebuilt from scratch
    after every strong-generator addition; a returned sifting residue always
    extends some level's orbit, so the loop terminates."""
    ident = identity(n)
    strong = []
    for g in gens:
        g = list(g)
        if g != ident and g not in strong:
            strong.append(g)
    if not strong:
        return 1

    base: list[int] = []

    def extend_base_for(g):
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(n) if g[i] != i))

    for g in strong:
        extend_base_for(g)

    while True:
        # stabilizer-chain transversals; level i uses generators fixing base[:i]
        levels = []
        for i, b in enumerate(base):
            S_i = [g for g in strong if all(g[base[j]] == base[j] for j in range(i))]
            tr = {b: ident}
            frontier = [b]
            while frontier:
                x = frontier.pop()
                for g in S_i:
                    y = g[x]
                    if y not in tr:
                        tr[y] = multiply(g, tr[x])
                        frontier.append(y)
            levels.append((S_i, tr))

        def sift(h, from_level):
            for lv in range(from_level, len(base)):
                if h == ident:
                    return None
                _, tr = levels[lv]
                y = h[base[lv]]
                if y not in tr:
                    return h
                h = multiply(inverse(tr[y]), h)
            return None if h == ident else h

        residue = None
        for i in range(len(base)):
            S_i, tr = levels[i]
            for x, u in tr.items():
                for g in S_i:
                    rep = tr[g[x]]
                    schreier = multiply(inverse(rep), multiply(g, u))
                    residue = sift(schreier, i + 1)
                    if residue is not None:
                        break
                if residue is not None:
                    break
            if residue is not None:
                break
        if residue is None:
            order = 1
            for _, tr in levels:
                order *= len(tr)
            return order
        strong.append(residue)
        extend_base_for(residue)
