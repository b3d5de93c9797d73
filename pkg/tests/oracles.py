"""Independent reference implementations used only by the tests.

Trees are handled here as parent arrays (vertex 0 is the root and every
other vertex points at an earlier one), so nothing below reuses the
recursive machinery of the package.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from itertools import combinations, product

from branched_decay.trees import Forest, RootedTree


def ahu(parents: tuple, labels: tuple, root: int = 0) -> str:
    """Canonical string of the subtree at ``root`` (AHU encoding)."""
    kids = sorted(ahu(parents, labels, v) for v in range(len(parents)) if parents[v] == root
                  and v != root)
    return f"({labels[root]}{''.join(kids)})"


def brute_force_tree_count(n: int, alphabet: int | None = None) -> int:
    """Distinct trees among all parent arrays and labellings of size n."""
    if n == 0:
        return 0
    labels_choices = [(None,) * n] if alphabet is None else list(product(range(alphabet),
                                                                          repeat=n))
    seen = set()
    for tail in product(*[range(i) for i in range(1, n)]):
        parents = (0,) + tail
        for labels in labels_choices:
            seen.add(ahu(parents, labels))
    return len(seen)


def euler_transform_counts(n_max: int) -> list[int]:
    """Rooted unlabelled tree counts via the Euler transform recurrence."""
    a = [0, 1]
    for n in range(1, n_max):
        total = 0
        for k in range(1, n + 1):
            total += sum(d * a[d] for d in range(1, k + 1) if k % d == 0) * a[n - k + 1]
        a.append(total // n)
    return a[1:n_max + 1]


def to_parent_array(t: RootedTree) -> tuple[tuple, tuple]:
    parents, labels = [0], [t.label]
    stack = [(t, 0)]
    while stack:
        node, idx = stack.pop()
        for c in node.children:
            parents.append(idx)
            labels.append(c.label)
            stack.append((c, len(parents) - 1))
    return tuple(parents), tuple(labels)


def _build(parents, labels, root, alive) -> RootedTree:
    kids = [_build(parents, labels, v, alive) for v in range(len(parents))
            if v != root and parents[v] == root and v in alive]
    return RootedTree(labels[root], kids)


def brute_force_cuts(t: RootedTree) -> Counter:
    """Coproduct by enumerating every edge subset and keeping admissible ones."""
    parents, labels = to_parent_array(t)
    n = len(parents)
    edges = list(range(1, n))  # edge v is (parents[v], v)

    def path_to_root(v):
        out = []
        while v != 0:
            out.append(v)
            v = parents[v]
        return out

    out: Counter = Counter()
    for r in range(len(edges) + 1):
        for cut in combinations(edges, r):
            cutset = set(cut)
            if any(len(cutset.intersection(path_to_root(v))) > 1 for v in range(n)):
                continue
            below = set()
            for v in range(n):
                if cutset.intersection(path_to_root(v)):
                    below.add(v)
            trunk_vertices = set(range(n)) - below
            pruned = Forest(_build(parents, labels, c, below) for c in cut)
            trunk = Forest((_build(parents, labels, 0, trunk_vertices),))
            out[(pruned, trunk)] += 1
    out[(Forest((t,)), Forest())] += 1
    return out


def brute_force_forest_cuts(f: Forest) -> Counter:
    acc: Counter = Counter({(Forest(), Forest()): 1})
    for t in f.trees:
        nxt: Counter = Counter()
        for (p, tr), m in acc.items():
            for (q, s), k in brute_force_cuts(t).items():
                nxt[(p * q, tr * s)] += m * k
        acc = nxt
    return acc


def brute_force_star(x_values: dict, y_values: dict, f: Forest):
    """⟨X⋆Y, f⟩ for characters given on trees (empty forest maps to 1)."""

    def ev(values, g: Forest):
        return math.prod((values.get(t, 0) for t in g.trees), start=Fraction(1))

    return sum(ev(x_values, p) * ev(y_values, tr) * m
               for (p, tr), m in brute_force_forest_cuts(f).items())


def brute_force_factorial(t: RootedTree) -> int:
    """Product over vertices of the size of the subtree they root."""
    parents, _ = to_parent_array(t)
    n = len(parents)
    size = [1] * n
    for v in range(n - 1, 0, -1):
        size[parents[v]] += size[v]
    return math.prod(size)


def sympy_tree_integral(t: RootedTree, components, s, u):
    """⟨X_{s,u}, τ⟩ for a polynomial path by symbolic iterated integration.

    ``components[i]`` is a sympy expression in ``u`` for x^i.
    """
    import sympy as sp

    r = sp.Symbol("r")

    def integral(node):
        integrand = sp.Integer(1)
        for c in node.children:
            integrand *= integral(c)
        x = components[0 if node.label is None else node.label]
        dx = sp.diff(x, u).subs(u, r)
        return sp.integrate(integrand.subs(u, r) * dx, (r, s, u))

    return sp.expand(integral(t))
