"""Slow reference implementations the fast code is tested against."""

from itertools import permutations

from unitals.autgroup import ColoredGraph


def brute_force_aut_order(g: ColoredGraph) -> int:
    """Count vertex permutations preserving colors and adjacency. Exponential;
    keep graphs at 8 vertices or fewer."""
    n = g.n
    edges = set()
    for v in range(n):
        for e in range(g.indptr[v], g.indptr[v + 1]):
            u = int(g.nbrs[e])
            if v < u:
                edges.add((v, u))
    colors = [int(c) for c in g.colors]
    count = 0
    for perm in permutations(range(n)):
        if any(colors[perm[v]] != colors[v] for v in range(n)):
            continue
        # a bijection mapping every edge to an edge maps the edge set onto itself
        ok = True
        for (a, b) in edges:
            x, y = perm[a], perm[b]
            if (min(x, y), max(x, y)) not in edges:
                ok = False
                break
        if ok:
            count += 1
    return count


def brute_force_plane_aut_order(plane) -> int:
    """Count point permutations mapping the line set onto itself."""
    lineset = {frozenset(l) for l in plane.lines}
    count = 0
    for perm in permutations(range(plane.v)):
        if all(frozenset(perm[p] for p in l) in lineset for l in plane.lines):
            count += 1
    return count


def random_colored_graph(rng, max_n: int = 8) -> ColoredGraph:
    n = rng.randint(1, max_n)
    edges = set()
    for _ in range(rng.randint(0, 2 * n)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    colors = [rng.randrange(3) for _ in range(n)]
    return ColoredGraph(n, sorted(edges), colors)


def ag23_blocks():
    """The 12 lines of AG(2,3) on points 3x+y, a 2-(9,3,1) design."""
    blocks = []
    for m in range(3):
        for c in range(3):
            blocks.append(tuple(sorted(3 * x + ((m * x + c) % 3) for x in range(3))))
    for c in range(3):
        blocks.append(tuple(sorted(3 * c + y for y in range(3))))
    return sorted(blocks)
