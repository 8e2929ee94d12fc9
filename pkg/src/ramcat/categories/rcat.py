"""Finite linear orders with increasing injections, presented by image subsets.

Objects are naturals n >= 0 standing for [n] = {1,...,n}.  A morphism m -> n is
the image of the unique increasing injection, stored as a sorted tuple x of m
elements of [n].  Composition pushes the smaller subset through the increasing
enumeration of the larger one.  The boundary functor drops the top element of
the image and the top point of the target.
"""

from __future__ import annotations

from itertools import combinations, count
from typing import Any, Iterator

from ..core import Category, Functor, LiftError, Morph, binomial


class SubsetCategory(Category):
    name = "subset"
    encoding_version = "1"

    def is_object(self, a: Any) -> bool:
        return isinstance(a, int) and a >= 0

    def iter_objects(self) -> Iterator[Any]:
        return count(0)

    def hom(self, a: Any, b: Any) -> tuple[Morph, ...]:
        return tuple(self.iter_hom(a, b))

    def iter_hom(self, a: Any, b: Any) -> Iterator[Morph]:
        # combinations() is ascending-lex, which is the canonical payload order
        for x in combinations(range(1, b + 1), a):
            yield Morph(a, b, x)

    def hom_size(self, a: Any, b: Any) -> int:
        return binomial(b, a)

    def identity(self, a: Any) -> Morph:
        return Morph(a, a, tuple(range(1, a + 1)))

    def compose(self, g: Morph, f: Morph) -> Morph:
        if f.cod != g.dom:
            raise ValueError("non-composable subset morphisms")
        y = g.data  # increasing enumeration of g's image inside [g.cod]
        return Morph(f.dom, g.cod, tuple(y[i - 1] for i in f.data))

    def spec(self) -> dict:
        return {"kind": "subset"}


class SubsetBoundary(Functor):
    """Drop the maximum of the image and shrink the target by one."""

    name = "subset-boundary"

    def __init__(self, cat: SubsetCategory | None = None):
        cat = cat or SubsetCategory()
        super().__init__(cat, cat)

    def obj(self, a: Any) -> Any:
        return max(a - 1, 0)

    def morph(self, f: Morph) -> Morph:
        data = f.data[:-1] if f.data else ()
        return Morph(self.obj(f.dom), self.obj(f.cod), data)

    def frank_lift(self, a: Any, b_prime: Any) -> Any:
        # hom(a, n+1) maps onto hom(a-1, n) by dropping the forced top point
        return b_prime + 1

    def spec(self) -> dict:
        return {"kind": "subset-boundary"}


def subset_category() -> SubsetCategory:
    return SubsetCategory()


def subset_boundary(cat: SubsetCategory | None = None) -> SubsetBoundary:
    return SubsetBoundary(cat)
