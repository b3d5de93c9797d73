"""Hypothesis strategies for trees and forests."""

from hypothesis import strategies as st

from branched_decay.trees import Forest, RootedTree


def trees(max_size: int = 6, alphabet=None):
    """Random rooted trees with at most ``max_size`` vertices."""
    labels = st.none() if alphabet is None else st.integers(0, alphabet - 1)

    @st.composite
    def build(draw, budget):
        label = draw(labels)
        children = []
        remaining = budget - 1
        while remaining > 0 and draw(st.booleans()):
            size = draw(st.integers(1, remaining))
            children.append(draw(build(size)))
            remaining -= children[-1].size
        return RootedTree(label, children)

    return st.integers(1, max_size).flatmap(build)


def forests(max_trees: int = 3, max_size: int = 4, alphabet=None):
    return st.lists(trees(max_size, alphabet), max_size=max_trees).map(Forest)
