"""Finite rooted ordered trees with level-preserving embeddings.

A tree is encoded as its preorder child-count tuple: entry i is the number of
children of the i-th node in preorder.  (0,) is a single node, (2, 0, 0) is a
root with two leaf children, (1, 1, 0) is a path of three nodes.

An embedding S -> T sends the root to the root and, at every node v, maps the
children of v injectively and order-preservingly into the children of the
image of v.  Morphisms exist only between trees of equal height.  Payloads are
tuples giving the T preorder index of each S node.

The truncation functor removes the deepest level of any tree with at least
two levels and fixes the single-node tree; morphisms are restricted and
reindexed.
"""

from __future__ import annotations

from itertools import combinations, count
from typing import Any, Iterator

from ..core import Category, EncodingError, Functor, Morph, sort_morphs


def structure(t: tuple) -> tuple[list, list, list]:
    """children lists, depths, parents by preorder index; validates t."""
    if not (isinstance(t, tuple) and t and all(isinstance(c, int) and c >= 0 for c in t)):
        raise EncodingError(f"not a child-count tuple: {t!r}")
    n = len(t)
    children: list[list[int]] = [[] for _ in range(n)]
    depth = [0] * n
    parent = [-1] * n
    stack: list[list[int]] = []
    for i, c in enumerate(t):
        if stack:
            p = stack[-1][0]
            children[p].append(i)
            parent[i] = p
            depth[i] = depth[p] + 1
            stack[-1][1] -= 1
        elif i > 0:
            raise EncodingError(f"forest, not a tree: {t!r}")
        stack.append([i, c])
        while stack and stack[-1][1] == 0:
            stack.pop()
    if stack:
        raise EncodingError(f"truncated encoding: {t!r}")
    return children, depth, parent


def height(t: tuple) -> int:
    _, depth, _ = structure(t)
    return max(depth)


def grow(t: tuple, extra: dict[int, int]) -> tuple:
    """Append extra leaf children to selected nodes (by preorder index)."""
    ch, _, _ = structure(t)

    def emit(i: int) -> list[int]:
        e = extra.get(i, 0)
        out = [t[i] + e]
        for c in ch[i]:
            out.extend(emit(c))
        out.extend([0] * e)
        return out

    return tuple(emit(0))


def star(k: int) -> tuple:
    """Root with k leaf children."""
    return (k,) + (0,) * k


def _ordered_trees(n: int) -> list[tuple]:
    if n == 1:
        return [(0,)]
    out = []
    for c in range(1, n):
        for parts in _compositions(n - 1, c):
            for subs in _tree_products(parts):
                out.append((c,) + subs)
    return sorted(out)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _tree_products(parts: tuple[int, ...]) -> Iterator[tuple]:
    if not parts:
        yield ()
        return
    for head in _ordered_trees(parts[0]):
        for tail in _tree_products(parts[1:]):
            yield head + tail


class TreeCategory(Category):
    name = "trees"
    encoding_version = "1"

    def is_object(self, a: Any) -> bool:
        try:
            structure(a)
        except EncodingError:
            return False
        return True

    def iter_objects(self) -> Iterator[Any]:
        for n in count(1):
            yield from _ordered_trees(n)

    def hom(self, a: Any, b: Any) -> tuple[Morph, ...]:
        cha, deptha, _ = structure(a)
        chb, depthb, _ = structure(b)
        if max(deptha) != max(depthb):
            return ()

        def maps(v: int, w: int) -> list[dict[int, int]]:
            kids = cha[v]
            if not kids:
                return [{v: w}]
            out = []
            for targets in combinations(chb[w], len(kids)):
                partials = [{v: w}]
                for u, x in zip(kids, targets):
                    sub = maps(u, x)
                    partials = [{**p, **m} for p in partials for m in sub]
                    if not partials:
                        break
                out.extend(partials)
            return out

        n = len(a)
        return sort_morphs(Morph(a, b, tuple(m[i] for i in range(n)))
                           for m in maps(0, 0))

    def identity(self, a: Any) -> Morph:
        structure(a)
        return Morph(a, a, tuple(range(len(a))))

    def compose(self, g: Morph, f: Morph) -> Morph:
        if f.cod != g.dom:
            raise ValueError("non-composable tree embeddings")
        return Morph(f.dom, g.cod, tuple(g.data[j] for j in f.data))

    def spec(self) -> dict:
        return {"kind": "trees"}


class TreeTruncation(Functor):
    """Drop the deepest level; only the single-node tree is fixed."""

    name = "tree-truncation"

    def __init__(self, cat: TreeCategory | None = None):
        cat = cat or TreeCategory()
        super().__init__(cat, cat)

    def obj(self, a: Any) -> Any:
        _, depth, _ = structure(a)
        h = max(depth)
        if h == 0:
            return a
        return tuple((0 if depth[i] == h - 1 else a[i])
                     for i in range(len(a)) if depth[i] < h)

    def morph(self, f: Morph) -> Morph:
        _, deptha, _ = structure(f.dom)
        _, depthb, _ = structure(f.cod)
        h = max(deptha)
        if h == 0:
            return f
        keep_b = [i for i in range(len(f.cod)) if depthb[i] < h]
        remap = {old: new for new, old in enumerate(keep_b)}
        data = tuple(remap[f.data[i]] for i in range(len(f.dom)) if deptha[i] < h)
        return Morph(self.obj(f.dom), self.obj(f.cod), data)

    def frank_lift(self, a: Any, b_prime: Any) -> Any:
        _, depth_a, _ = structure(a)
        _, depth_b, _ = structure(b_prime)
        hs, hb = max(depth_a), max(depth_b)
        if hs == hb + 1:
            # restrictions of embeddings a -> lift must cover hom(obj a, b'):
            # wide enough leaf fans under every deepest node extend any of them
            fan = max(a)
            deepest = [i for i in range(len(b_prime)) if depth_b[i] == hb]
            return grow(b_prime, {i: fan for i in deepest})
        if hb == 0:
            return b_prime
        # heights rule out morphisms on both sides; any preimage works
        first_deep = min(i for i in range(len(b_prime)) if depth_b[i] == hb)
        return grow(b_prime, {first_deep: 1})

    def spec(self) -> dict:
        return {"kind": "tree-truncation"}


def tree_category() -> TreeCategory:
    return TreeCategory()


def tree_truncation(cat: TreeCategory | None = None) -> TreeTruncation:
    return TreeTruncation(cat)
