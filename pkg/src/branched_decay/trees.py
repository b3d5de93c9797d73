"""Rooted trees and forests in canonical form.

A tree is a root label plus a multiset of child trees. Labels are ints in
``range(d)`` for an alphabet of size ``d``, or ``None`` for unlabelled trees.
Children are kept sorted by their canonical key, so structurally equal trees
compare and hash equal regardless of the order they were built in.

Text notation
-------------
``*`` or ``*i`` is a single vertex, ``[f]i`` grafts the forest ``f`` onto a
new root labelled ``i``, ``.`` multiplies trees into a forest and ``1`` is
the empty forest.  Examples: ``[*.*]`` is the cherry, ``[*0]1`` a labelled
two-vertex ladder.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Iterator, Optional

Label = Optional[int]


def _label_code(label: Label) -> int:
    return -1 if label is None else label


class RootedTree:
    """Immutable rooted tree with sorted children."""

    __slots__ = ("label", "children", "size", "factorial", "key", "_hash")

    def __init__(self, label: Label = None, children: Iterable["RootedTree"] = ()):
        if label is not None and (not isinstance(label, int) or label < 0):
            raise ValueError(f"labels must be non-negative ints or None, got {label!r}")
        kids = tuple(sorted(children, key=lambda c: c.key))
        self.label = label
        self.children = kids
        self.size = 1 + sum(c.size for c in kids)
        self.factorial = self.size * math.prod(c.factorial for c in kids)
        self.key = (self.size, _label_code(label), tuple(c.key for c in kids))
        self._hash = hash(self.key)

    def __setattr__(self, name, value):
        if hasattr(self, "_hash"):
            raise AttributeError("RootedTree is immutable")
        object.__setattr__(self, name, value)

    def __eq__(self, other):
        return isinstance(other, RootedTree) and self.key == other.key

    def __lt__(self, other: "RootedTree") -> bool:
        return self.key < other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"RootedTree({self.notation()!r})"

    def __str__(self):
        return self.notation()

    def notation(self) -> str:
        tag = "" if self.label is None else str(self.label)
        if not self.children:
            return "*" + tag
        return "[" + ".".join(c.notation() for c in self.children) + "]" + tag

    @property
    def labels(self) -> frozenset:
        out = {self.label}
        for c in self.children:
            out |= c.labels
        return frozenset(out)

    def as_forest(self) -> "Forest":
        return Forest((self,))

    def vertices(self) -> Iterator["RootedTree"]:
        """Yield the subtree hanging at every vertex, root first."""
        yield self
        for c in self.children:
            yield from c.vertices()


class Forest:
    """Commutative product of trees; the empty forest is the unit."""

    __slots__ = ("trees", "size", "key", "_hash")

    def __init__(self, trees: Iterable[RootedTree] = ()):
        ts = tuple(sorted(trees, key=lambda t: t.key))
        object.__setattr__(self, "trees", ts)
        object.__setattr__(self, "size", sum(t.size for t in ts))
        object.__setattr__(self, "key", tuple(t.key for t in ts))
        object.__setattr__(self, "_hash", hash(("F",) + self.key))

    def __setattr__(self, name, value):
        raise AttributeError("Forest is immutable")

    def __eq__(self, other):
        return isinstance(other, Forest) and self.key == other.key

    def __lt__(self, other: "Forest") -> bool:
        return (self.size, self.key) < (other.size, other.key)

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "Forest | RootedTree") -> "Forest":
        if isinstance(other, RootedTree):
            return Forest(self.trees + (other,))
        return Forest(self.trees + other.trees)

    __rmul__ = __mul__

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def __bool__(self):
        return bool(self.trees)

    def __repr__(self):
        return f"Forest({self.notation()!r})"

    def __str__(self):
        return self.notation()

    @property
    def factorial(self) -> int:
        return math.prod(t.factorial for t in self.trees)

    @property
    def components(self) -> int:
        return len(self.trees)

    def is_tree(self) -> bool:
        return len(self.trees) == 1

    def notation(self) -> str:
        if not self.trees:
            return "1"
        return ".".join(t.notation() for t in self.trees)


EMPTY = Forest()


def single_vertex(label: Label = None, alphabet: Optional[int] = None) -> RootedTree:
    if label is not None and alphabet is not None and label >= alphabet:
        raise ValueError(f"label {label} outside alphabet of size {alphabet}")
    return RootedTree(label)


vertex = single_vertex


def forest_multiply(a: "Forest | RootedTree", b: "Forest | RootedTree") -> Forest:
    return as_forest(a) * as_forest(b)


def stats(f: "Forest | RootedTree") -> tuple[int, int]:
    """(vertex count, number of non-empty components)."""
    f = as_forest(f)
    return f.size, f.components


def join(forest: "Forest | Iterable[RootedTree]", label: Label = None) -> RootedTree:
    """Graft the trees of ``forest`` onto a fresh root."""
    trees = forest.trees if isinstance(forest, Forest) else tuple(forest)
    return RootedTree(label, trees)


def forest(*trees: RootedTree) -> Forest:
    return Forest(trees)


def as_forest(obj: "Forest | RootedTree") -> Forest:
    if isinstance(obj, Forest):
        return obj
    if isinstance(obj, RootedTree):
        return Forest((obj,))
    raise TypeError(f"expected a tree or forest, got {type(obj).__name__}")


def ladder(n: int, label: Label = None) -> RootedTree:
    """Linear chain of ``n`` vertices."""
    if n < 1:
        raise ValueError("a tree has at least one vertex")
    t = RootedTree(label)
    for _ in range(n - 1):
        t = RootedTree(label, (t,))
    return t


def bushy(n: int, label: Label = None) -> RootedTree:
    """Root with ``n`` leaf children (``n + 1`` vertices in total)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return RootedTree(label, [RootedTree(label)] * n)


def tree_factorial(t: "RootedTree | Forest") -> int:
    return t.factorial


# ---------------------------------------------------------------- notation


class NotationError(ValueError):
    pass


class _Parser:
    def __init__(self, text: str):
        self.text = text.replace(" ", "")
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, msg: str):
        raise NotationError(f"{msg} at position {self.pos} in {self.text!r}")

    def label(self) -> Label:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            return None
        return int(self.text[start:self.pos])

    def tree(self) -> RootedTree:
        c = self.peek()
        if c == "*":
            self.pos += 1
            return RootedTree(self.label())
        if c == "[":
            self.pos += 1
            inner = self.forest()
            if self.peek() != "]":
                self.fail("expected ']'")
            self.pos += 1
            return RootedTree(self.label(), inner.trees)
        self.fail("expected '*' or '['")

    def forest(self) -> Forest:
        if self.peek() == "1":
            self.pos += 1
            return EMPTY
        if self.peek() in ("]", ""):
            return EMPTY
        trees = [self.tree()]
        while self.peek() == ".":
            self.pos += 1
            trees.append(self.tree())
        return Forest(trees)


def parse_forest(text: str) -> Forest:
    p = _Parser(text)
    if not p.text:
        raise NotationError("empty string is not a forest; use '1'")
    f = p.forest()
    if p.pos != len(p.text):
        p.fail("trailing characters")
    return f


def parse_tree(text: str) -> RootedTree:
    f = parse_forest(text)
    if not f.is_tree():
        raise NotationError(f"{text!r} is a forest with {len(f)} components, not a tree")
    return f.trees[0]


def to_notation(obj: "RootedTree | Forest") -> str:
    return obj.notation()


# ------------------------------------------------------------- enumeration


def _labels(alphabet: Optional[int]) -> tuple:
    if alphabet is None:
        return (None,)
    if alphabet < 1:
        raise ValueError("alphabet size must be at least 1")
    return tuple(range(alphabet))


@lru_cache(maxsize=None)
def _trees_of_size(n: int, alphabet: Optional[int]) -> tuple:
    if n < 1:
        return ()
    out = [RootedTree(lab, f.trees)
           for f in _forests_of_size(n - 1, alphabet)
           for lab in _labels(alphabet)]
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _forests_of_size(n: int, alphabet: Optional[int]) -> tuple:
    if n < 0:
        return ()
    if n == 0:
        return (EMPTY,)
    pool = [t for k in range(1, n + 1) for t in _trees_of_size(k, alphabet)]
    out = []

    def grow(remaining: int, start: int, acc: list):
        if remaining == 0:
            out.append(Forest(acc))
            return
        for i in range(start, len(pool)):
            t = pool[i]
            if t.size > remaining:
                break
            acc.append(t)
            grow(remaining - t.size, i, acc)
            acc.pop()

    grow(n, 0, [])
    return tuple(sorted(out))


def enumerate_trees(n: int, alphabet: Optional[int] = None) -> list[RootedTree]:
    """All non-isomorphic trees with exactly ``n`` vertices, canonical order."""
    if n < 0:
        raise ValueError("size must be non-negative")
    return list(_trees_of_size(n, alphabet))


def enumerate_trees_upto(n: int, alphabet: Optional[int] = None) -> list[RootedTree]:
    return [t for k in range(1, n + 1) for t in _trees_of_size(k, alphabet)]


def enumerate_forests(n: int, alphabet: Optional[int] = None) -> list[Forest]:
    """All forests with exactly ``n`` vertices; ``n == 0`` gives the unit."""
    if n < 0:
        raise ValueError("size must be non-negative")
    return list(_forests_of_size(n, alphabet))


def enumerate_forests_upto(n: int, alphabet: Optional[int] = None,
                           include_empty: bool = True) -> list[Forest]:
    start = 0 if include_empty else 1
    return [f for k in range(start, n + 1) for f in _forests_of_size(k, alphabet)]


def count_trees(n: int, alphabet: Optional[int] = None) -> int:
    """|T^n| with the convention that the empty tree is the only size-0 tree."""
    if n == 0:
        return 1
    return len(_trees_of_size(n, alphabet))


def count_trees_upto(n: int, alphabet: Optional[int] = None) -> int:
    """Number of non-empty trees with at most ``n`` vertices."""
    return sum(len(_trees_of_size(k, alphabet)) for k in range(1, n + 1))
