"""Witness constructions that mirror the partition-condition proofs.

Each builder returns a witness object together with a trace recording every
oracle call, intermediate object and selected morphism.  Builders never verify
their own output; the engine does that separately, and the certificates module
packages trace + verdict.

Color blow-ups (R = r**M) use exact integers; a stage whose color count would
exceed ``max_color_bits`` bits aborts explicitly instead of attempting the
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Any, Callable, Iterable, Sequence

from .categories.pcat import StepCategory, step_boundary
from .categories.product import ProductCategory, ProductFunctor
from .categories.rcat import SubsetBoundary, subset_boundary
from .categories.trees import TreeTruncation, grow, height, structure, tree_truncation
from .categories.hjcat import word_boundary, word_category
from .core import Category, Functor, LiftError, Morph, canon_hex, sort_morphs
from .engine import BudgetExceeded, FpInstance, functor_image

DEFAULT_MAX_COLOR_BITS = 1_000_000
DEFAULT_CHECK_PAIRS = 500_000

CONSTRUCTED = "constructed-by-theorem"
SEARCHED = "found-by-search"


class ConstructionError(RuntimeError):
    """A construction stage could not complete; the message names the stage."""


def _stage(label: str, thunk: Callable[[], Any]) -> Any:
    try:
        return thunk()
    except ConstructionError as exc:
        raise ConstructionError(f"{label}: {exc}") from exc
    except (ValueError, LiftError) as exc:
        raise ConstructionError(f"{label}: {exc}") from exc


def obj_doc(obj: Any) -> dict:
    return {"hex": canon_hex(obj), "show": repr(obj)}


def morph_doc(f: Morph) -> dict:
    return {"hex": f.encode().hex(), "show": repr((f.dom, f.cod, f.data))}


@dataclass(frozen=True)
class WitnessProvider:
    """Uniform witness source: fn(a, b, r) -> c, tagged with its provenance."""

    fn: Callable[[Any, Any, int], Any]
    provenance: str
    note: str = ""

    def __call__(self, a: Any, b: Any, r: int) -> Any:
        return self.fn(a, b, r)


# ---------------------------------------------------------------------------
# pigeonhole witness for the step category


def p_pigeonhole_witness(k1: int, l: int, r: int) -> tuple[int, int]:
    """Target (m, 2) making the boundary-collapsed step arrows monochromatic.

    The only nontrivial fiber consists of the two-block vectors, one per split
    position; a unit-step surjection [m] -> [l] selects l-1 of the m-1
    available splits, so m-1 = (l-1)r+1 split values pigeonhole into a
    monochromatic set of size l-1.
    """
    if k1 < 2 or l < 1 or r < 1:
        raise ValueError(f"need k1 >= 2, l >= 1, r >= 1, got {(k1, l, r)}")
    return ((l - 1) * r + 2, 2)


def pigeonhole_provider() -> WitnessProvider:
    """Stage provider for the step boundary at ((k1,1), (l,2)) pairs."""

    def fn(a: Any, b: Any, r: int) -> Any:
        l, tag = b
        if tag != 2:
            raise ValueError(f"pigeonhole target must be a (l, 2) object, got {b!r}")
        return p_pigeonhole_witness(max(2, a[0]), l, r)

    return WitnessProvider(fn, CONSTRUCTED, note="split-position pigeonhole")


# ---------------------------------------------------------------------------
# fiber-condition oracles


def r_fp_witness(inst: FpInstance,
                 delta: SubsetBoundary | None = None) -> tuple[Any, Morph, Morph]:
    """Fiber-condition witness over the subset category.

    Nontrivial instances (1 <= k < l) get c = (r+1)l, the s-element whose
    payload maximum is largest (empty payload counts as 0, ties broken by
    canonical order), and the prefix inclusion [l-1] -> [m-1].  Instances with
    at most one arrow in hom(a, b) are already monochromatic and return b.
    """
    delta = delta or subset_boundary()
    k, l, s, r = inst.a, inst.b, inst.s, inst.r
    if not s:
        raise ValueError("the arrow selection s must be non-empty")
    if r < 1:
        raise ValueError("need at least one color")
    if delta.dom.hom_size(k, l) <= 1:
        return l, sort_morphs(s)[0], delta.morph(delta.dom.identity(l))
    m = (r + 1) * l
    top = max((max(e.data) if e.data else 0) for e in s)
    f_prime = next(e for e in sort_morphs(s)
                   if (max(e.data) if e.data else 0) == top)
    g_prime = Morph(l - 1, m - 1, tuple(range(1, l)))
    return m, f_prime, g_prime


def tree_fp_witness(inst: FpInstance,
                    product_ramsey: Callable[[tuple, tuple, int], tuple],
                    delta: TreeTruncation | None = None) -> tuple[Any, Morph, Morph]:
    """Fiber-condition witness over trees.

    Keeps the truncation of T and regrows its deepest level: under the
    f'-image of every truncated S-leaf with children, a fan sized by the
    product Ramsey numbers for the child counts; under every other deepest
    node, a fan matching its child count in T (so embeddings of T restricting
    to the identity survive).  f' is the first element of s in canonical
    order; g' is the identity on truncated T.
    """
    delta = delta or tree_truncation()
    s_tree, t_tree, s, r = inst.a, inst.b, inst.s, inst.r
    if not s:
        raise ValueError("the arrow selection s must be non-empty")
    h = height(s_tree)
    if height(t_tree) != h:
        raise ValueError("instances with morphisms require equal heights")
    f_prime = sort_morphs(s)[0]
    if h == 0:
        return t_tree, f_prime, delta.morph(delta.dom.identity(t_tree))
    t_star = delta.obj(t_tree)
    g_prime = delta.dom.identity(t_star)
    _, depth_s, _ = structure(s_tree)
    _, depth_t, _ = structure(t_tree)
    kept_s = [i for i in range(len(s_tree)) if depth_s[i] < h]
    kept_t = [i for i in range(len(t_tree)) if depth_t[i] < h]
    star_rank_s = {node: pos for pos, node in enumerate(kept_s)}
    # deepest S-nodes that still have children; their images need Ramsey fans
    v_nodes = [i for i in kept_s if depth_s[i] == h - 1 and s_tree[i] > 0]
    kvec = tuple(s_tree[v] for v in v_nodes)
    targets = tuple(f_prime.data[star_rank_s[v]] for v in v_nodes)
    pvec = tuple(t_tree[kept_t[w]] for w in targets)
    for kk, pp in zip(kvec, pvec):
        assert kk <= pp, "embeddings force child counts to fit"
    fans = {w: t_tree[kept_t[w]]
            for w in range(len(t_star)) if depth_t[kept_t[w]] == h - 1}
    if v_nodes:
        qvec = product_ramsey(kvec, pvec, r)
        for w, q, pp in zip(targets, qvec, pvec):
            assert q >= pp, "constructed fans must absorb the original ones"
            fans[w] = q
    return grow(t_star, fans), f_prime, g_prime


# ---------------------------------------------------------------------------
# the fiber-condition -> partition-condition recursion


@dataclass(frozen=True)
class FpStage:
    index: int
    c_prev: Any
    s: tuple[Morph, ...]
    picked: Morph
    origin: Morph
    g: Morph
    c_next: Any

    def doc(self) -> dict:
        return {"stage": self.index, "c_prev": obj_doc(self.c_prev),
                "s": [morph_doc(e) for e in self.s],
                "picked": morph_doc(self.picked),
                "origin": morph_doc(self.origin), "g": morph_doc(self.g),
                "c_next": obj_doc(self.c_next)}


@dataclass(frozen=True)
class FpToPTrace:
    a: Any
    b: Any
    r: int
    n: int
    c: Any
    selection: str
    stages: tuple[FpStage, ...]

    def doc(self) -> dict:
        return {"kind": "fp-to-p", "a": obj_doc(self.a), "b": obj_doc(self.b),
                "r": self.r, "image_size": self.n, "witness": obj_doc(self.c),
                "selection": self.selection,
                "stages": [st.doc() for st in self.stages]}


def fp_to_p_construct(delta: Functor, a: Any, b: Any, r: int,
                      oracle: Callable[[FpInstance], tuple[Any, Morph, Morph]],
                      *, selection: str = "oracle-defined") -> tuple[Any, FpToPTrace]:
    """Iterate a fiber-condition oracle once per image element of hom(a, b).

    Stage k hands the oracle the images of the still-unhandled arrows pushed
    through the accumulated g-chain; the oracle's pick is mapped back to the
    first remaining image element whose pushed copy matches it.  The stages
    certify that the picks are pairwise distinct and exhaust the image.
    """
    image = functor_image(delta, a, b)
    n = len(image)
    if n == 0:
        return b, FpToPTrace(a, b, r, 0, b, selection, ())
    cod = delta.cod
    remaining: list[Morph] = list(image)
    chain: list[Morph] = []   # g'_1 ... g'_{k-1}, applied in order

    def pushed(e: Morph) -> Morph:
        out = e
        for g in chain:
            out = cod.compose(g, out)
        return out

    c_cur = b
    stages: list[FpStage] = []
    for k in range(1, n + 1):
        s_k = sort_morphs(pushed(e) for e in remaining)
        inst = FpInstance(a=a, b=c_cur, s=s_k, r=r)
        c_next, picked, g = _stage(f"oracle at stage {k}", lambda: oracle(inst))
        origin = next((e for e in remaining if pushed(e) == picked), None)
        if origin is None:
            raise ConstructionError(
                f"stage {k}: oracle picked {picked!r} outside the admissible set "
                f"{[m.data for m in s_k]!r}")
        remaining.remove(origin)
        chain.append(g)
        stages.append(FpStage(k, c_cur, s_k, picked, origin, g, c_next))
        c_cur = c_next
    assert not remaining, "every image element must be handled exactly once"
    picks = {st.origin.encode() for st in stages}
    assert len(picks) == n, "stage picks must be pairwise distinct"
    return c_cur, FpToPTrace(a, b, r, n, c_cur, selection, tuple(stages))


def r_fp_oracle(delta: SubsetBoundary | None = None) -> Callable[[FpInstance], tuple]:
    delta = delta or subset_boundary()
    return lambda inst: r_fp_witness(inst, delta)


def fp_provider(delta: Functor, oracle: Callable[[FpInstance], tuple],
                *, note: str = "") -> WitnessProvider:
    def fn(a: Any, b: Any, r: int) -> Any:
        return fp_to_p_construct(delta, a, b, r, oracle)[0]

    return WitnessProvider(fn, CONSTRUCTED, note=note)


def search_provider(delta: Functor, pool: Callable[[Any, Any, int], Iterable[Any]],
                    **engine_kw) -> WitnessProvider:
    from .engine import search_p_witness

    def fn(a: Any, b: Any, r: int) -> Any:
        found = search_p_witness(delta, a, b, r, pool(a, b, r), **engine_kw)
        if found is None:
            raise ConstructionError(f"search pool exhausted at {(a, b, r)!r}")
        return found[0]

    return WitnessProvider(fn, SEARCHED)


# ---------------------------------------------------------------------------
# composition of witnesses along a functor word


@dataclass(frozen=True)
class CompositionTrace:
    a: Any
    b: Any
    r: int
    d: Any
    c_prime: Any
    c: Any
    inner_provenance: str
    outer_provenance: str

    def doc(self) -> dict:
        return {"kind": "composition", "a": obj_doc(self.a), "b": obj_doc(self.b),
                "r": self.r, "d": obj_doc(self.d), "c_prime": obj_doc(self.c_prime),
                "witness": obj_doc(self.c),
                "inner_provenance": self.inner_provenance,
                "outer_provenance": self.outer_provenance}


def composition_witness(gamma: Functor, delta: Functor, a: Any, b: Any, r: int,
                        inner: WitnessProvider,
                        outer: WitnessProvider) -> tuple[Any, CompositionTrace]:
    """Witness for delta-after-gamma from witnesses of the factors.

    d witnesses delta at the gamma-images; the lift c' of d along gamma turns
    gamma-witnessing at (a, c') into a witness for the composite: selectors
    compose as g''.g' with g'' from the outer stage and g' below the lift.
    """
    d = _stage("inner provider", lambda: inner(gamma.obj(a), gamma.obj(b), r))
    c_prime = _stage("lift of the inner witness", lambda: gamma.frank_lift(b, d))
    c = _stage("outer provider", lambda: outer(a, c_prime, r))
    return c, CompositionTrace(a, b, r, d, c_prime, c,
                               inner.provenance, outer.provenance)


@dataclass(frozen=True)
class WordStage:
    index: int
    a: Any
    b: Any
    witness: Any
    lifted_from: Any | None
    note: dict = field(default_factory=dict)

    def doc(self) -> dict:
        out = {"stage": self.index, "a": obj_doc(self.a), "b": obj_doc(self.b),
               "witness": obj_doc(self.witness)}
        if self.lifted_from is not None:
            out["lifted_from"] = obj_doc(self.lifted_from)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class WordTrace:
    length: int
    stages: tuple[WordStage, ...]

    def doc(self) -> dict:
        return {"kind": "word", "length": self.length,
                "stages": [st.doc() for st in self.stages]}


StageProvider = Callable[[int, Functor, Any, Any, int], tuple[Any, dict]]


def word_witness(word: Sequence[Functor], a: Any, b: Any, r: int,
                 provider: StageProvider) -> tuple[Any, WordTrace]:
    """Chain single-functor witnesses along a composition word.

    word[0] is applied first.  The provider is called once per stage with the
    stage's own functor and the pair actually in play there (inner stages see
    pushed objects, outer stages see lifted witnesses); it returns the stage
    witness and a JSON-able note for the trace.
    """
    if not word:
        raise ValueError("empty words need no construction; b itself works")
    if len(word) == 1:
        c, note = provider(0, word[0], a, b, r)
        return c, WordTrace(1, (WordStage(0, a, b, c, None, note),))
    gamma = word[0]

    def shifted(i: int, fun: Functor, x: Any, y: Any, rr: int) -> tuple[Any, dict]:
        return provider(i + 1, fun, x, y, rr)

    d, inner = word_witness(word[1:], gamma.obj(a), gamma.obj(b), r, shifted)
    c_prime = _stage("lift between stages", lambda: gamma.frank_lift(b, d))
    c, note = provider(0, gamma, a, c_prime, r)
    stages = (WordStage(0, a, c_prime, c, d, note),) + inner.stages
    return c, WordTrace(len(word), stages)


# ---------------------------------------------------------------------------
# products


@dataclass(frozen=True)
class ProductCoordinate:
    delta: Functor
    a: Any
    b: Any
    provider: WitnessProvider


@dataclass(frozen=True)
class ProductStage:
    index: int
    a: Any
    b: Any
    m_exponent: int
    base_colors: int
    witness: Any
    provenance: str

    def doc(self) -> dict:
        return {"coordinate": self.index, "a": obj_doc(self.a),
                "b": obj_doc(self.b), "m": self.m_exponent,
                "colors": {"base": self.base_colors, "exponent": self.m_exponent},
                "witness": obj_doc(self.witness), "provenance": self.provenance}


@dataclass(frozen=True)
class ProductTrace:
    r: int
    a_values: tuple
    b_values: tuple
    c_values: tuple
    stages: tuple[ProductStage, ...]

    def doc(self) -> dict:
        return {"kind": "product", "r": self.r,
                "a": [obj_doc(x) for x in self.a_values],
                "b": [obj_doc(x) for x in self.b_values],
                "witness": [obj_doc(x) for x in self.c_values],
                "stages": [st.doc() for st in self.stages]}


def product_witness(coords: Sequence[ProductCoordinate], r: int, *,
                    max_color_bits: int = DEFAULT_MAX_COLOR_BITS
                    ) -> tuple[tuple, ProductTrace]:
    """Coordinate-staged witness for the product of the coordinate functors.

    Coordinates are handled in ascending index order; the stage for
    coordinate p sees the other coordinates' current hom-sizes as the color
    blow-up exponent M and asks its provider for a witness at r**M colors.
    Stage color counts beyond max_color_bits bits abort explicitly.
    """
    if not coords:
        raise ValueError("a product needs at least one coordinate")
    if r < 1:
        raise ValueError("need at least one color")
    k = len(coords)
    stages: dict[int, ProductStage] = {}

    def go(p: int, x_vals: tuple, y_vals: tuple) -> tuple:
        coord = coords[p]
        if p == k - 1:
            y_cur = y_vals
        else:
            gx = list(x_vals)
            gx[p] = coord.delta.obj(x_vals[p])
            gy = list(y_vals)
            gy[p] = coord.delta.obj(y_vals[p])
            d_vals = go(p + 1, tuple(gx), tuple(gy))
            y_cur = list(d_vals)
            y_cur[p] = _stage(f"coordinate {p} lift",
                              lambda: coord.delta.frank_lift(y_vals[p], d_vals[p]))
            y_cur = tuple(y_cur)
        m_exp = 1
        for i in range(k):
            if i == p:
                continue
            cat = coords[i].delta.cod if i < p else coords[i].delta.dom
            m_exp *= cat.hom_size(x_vals[i], y_cur[i])
        bits = m_exp * max(1, r.bit_length())
        if bits > max_color_bits:
            # refusal, not failure: the blow-up r**M is representable but useless
            raise BudgetExceeded(f"coordinate {p} color bits", bits,
                                 max_color_bits)
        big_r = r ** m_exp
        c_p = _stage(f"coordinate {p} provider",
                     lambda: coord.provider(x_vals[p], y_cur[p], big_r))
        stages[p] = ProductStage(p, x_vals[p], y_cur[p], m_exp, r, c_p,
                                 coord.provider.provenance)
        out = list(y_cur)
        out[p] = c_p
        return tuple(out)

    a_vals = tuple(c.a for c in coords)
    b_vals = tuple(c.b for c in coords)
    c_vals = go(0, a_vals, b_vals)
    ordered = tuple(stages[p] for p in range(k))
    return c_vals, ProductTrace(r, a_vals, b_vals, c_vals, ordered)


def product_ramsey_numbers(kvec: Sequence[int], pvec: Sequence[int], r: int, *,
                           max_color_bits: int = DEFAULT_MAX_COLOR_BITS
                           ) -> tuple[tuple, ProductTrace]:
    """Grid Ramsey dimensions via the staged product of subset boundaries."""
    if len(kvec) != len(pvec) or not kvec:
        raise ValueError("need equally long, non-empty vectors")
    for kk, pp in zip(kvec, pvec):
        if not 0 <= kk <= pp:
            raise ValueError(f"need 0 <= k <= p per coordinate, got {(kk, pp)}")
    coords = []
    for kk, pp in zip(kvec, pvec):
        delta = subset_boundary()
        coords.append(ProductCoordinate(
            delta, kk, pp, fp_provider(delta, r_fp_oracle(delta),
                                       note="max-rule fiber oracle")))
    c_vals, trace = product_witness(coords, r, max_color_bits=max_color_bits)
    return c_vals, trace


# ---------------------------------------------------------------------------
# brute-force minima (independent small-scale oracles)


def brute_minimal_single(k: int, p: int, r: int, *, cap: int = 12,
                         max_colorings: int = 1_000_000) -> int | None:
    """Least c <= cap witnessing the subset-boundary partition condition."""
    from .engine import SearchBudget, check_p_witness
    delta = subset_boundary()
    budget = SearchBudget(max_colorings=max_colorings)
    for c in range(p, cap + 1):
        if check_p_witness(delta, k, p, c, r, mode="exhaustive",
                           budget=budget).ok:
            return c
    return None


def rectangle_free_exists(q: int, r: int) -> bool:
    """Is there an r-coloring of the q x q grid with no monochromatic
    combinatorial rectangle (two rows and two columns agreeing in color)?

    Columns are assigned depth-first in nondecreasing order (colorings are
    closed under column permutation); a partial assignment dies as soon as
    two columns agree, in the same color, on two rows.
    """
    if q < 2:
        return True
    columns = list(iproduct(range(r), repeat=q))

    def compatible(col_a: tuple, col_b: tuple) -> bool:
        agree = [0] * r
        for x, y in zip(col_a, col_b):
            if x == y:
                agree[x] += 1
                if agree[x] > 1:
                    return False
        return True

    def extend(chosen: list[int], start: int) -> bool:
        if len(chosen) == q:
            return True
        for idx in range(start, len(columns)):
            cand = columns[idx]
            if all(compatible(columns[got], cand) for got in chosen):
                chosen.append(idx)
                if extend(chosen, idx):
                    return True
                chosen.pop()
        return False

    return extend([], 0)


def brute_minimal_grid(r: int, *, cap: int = 6) -> int | None:
    """Least q <= cap forcing a monochromatic rectangle in every r-coloring."""
    for q in range(2, cap + 1):
        if not rectangle_free_exists(q, r):
            return q
    return None


def brute_minimal_hj_dimension(alphabet: int, r: int, *, cap: int = 3,
                               max_colorings: int = 1_000_000) -> int | None:
    """Least m <= cap such that every r-coloring of the alphabet**m words
    contains a monochromatic combinatorial line (direct enumeration)."""
    if alphabet < 1 or r < 1:
        raise ValueError("need a nonempty alphabet and at least one color")
    for m in range(1, cap + 1):
        words = list(iproduct(range(1, alphabet + 1), repeat=m))
        index = {w: i for i, w in enumerate(words)}
        lines = []
        for mask in range(1, 1 << m):
            wild = [i for i in range(m) if mask >> i & 1]
            fixed_pos = [i for i in range(m) if not mask >> i & 1]
            for fixed in iproduct(range(1, alphabet + 1), repeat=len(fixed_pos)):
                line = []
                for letter in range(1, alphabet + 1):
                    w = [0] * m
                    for i in wild:
                        w[i] = letter
                    for i, v in zip(fixed_pos, fixed):
                        w[i] = v
                    line.append(index[tuple(w)])
                lines.append(tuple(line))
        total = r ** len(words)
        if total > max_colorings:
            raise ValueError(f"m={m} needs {total} colorings, cap {max_colorings}")
        forced = True
        for idx in range(total):
            colors = [(idx // r ** j) % r for j in range(len(words))]
            if not any(len({colors[w] for w in line}) == 1 for line in lines):
                forced = False
                break
        if forced:
            return m
    return None


# ---------------------------------------------------------------------------
# cross-relations and modeling


@dataclass(frozen=True)
class CrossRelation:
    """Transfer data letting hom-compositions in one category simulate another.

    phi maps (f in hom(c1,c2), g in hom(d2,d3)) into hom(d1,d2); psi maps
    g in hom(d2,d3) into hom(c2,c3); zeta, when present, maps hom(d1,d3)
    into hom(c1,c3) and satisfies zeta(g.phi(f,g)) = psi(g).f.
    """

    c1: Any
    c2: Any
    c3: Any
    d1: Any
    d2: Any
    d3: Any
    c_cat: Category
    d_cat: Category
    phi: Callable[[Morph, Morph], Morph]
    psi: Callable[[Morph], Morph]
    zeta: Callable[[Morph], Morph] | None = None
    phi_depends_on_g: bool = True


@dataclass(frozen=True)
class RelationCheck:
    ok: bool
    checked: int
    partial: bool
    violation: str = ""


def check_cross_zeta(rel: CrossRelation, *,
                     max_pairs: int = DEFAULT_CHECK_PAIRS) -> RelationCheck:
    """zeta(g.phi(f,g)) == psi(g).f over all in-cap (f, g) pairs."""
    if rel.zeta is None:
        raise ValueError("relation carries no zeta")
    hom_fc = rel.c_cat.hom(rel.c1, rel.c2)
    hom_gd = rel.d_cat.hom(rel.d2, rel.d3)
    checked = 0
    for g in hom_gd:
        psi_g = rel.psi(g)
        for f in hom_fc:
            if checked >= max_pairs:
                return RelationCheck(True, checked, partial=True)
            lhs = rel.zeta(rel.d_cat.compose(g, rel.phi(f, g)))
            rhs = rel.c_cat.compose(psi_g, f)
            checked += 1
            if lhs != rhs:
                return RelationCheck(False, checked, False,
                                     f"zeta identity fails at f={f.data!r}, "
                                     f"g={g.data!r}")
    return RelationCheck(True, checked, partial=False)


def check_cross_welldefined(rel: CrossRelation, *,
                            max_pairs: int = DEFAULT_CHECK_PAIRS) -> RelationCheck:
    """g.phi(f,g) == g'.phi(f',g') implies psi(g).f == psi(g').f'."""
    hom_fc = rel.c_cat.hom(rel.c1, rel.c2)
    hom_gd = rel.d_cat.hom(rel.d2, rel.d3)
    pairs = []
    for g in hom_gd:
        psi_g = rel.psi(g)
        for f in hom_fc:
            pairs.append((rel.d_cat.compose(g, rel.phi(f, g)).encode(),
                          rel.c_cat.compose(psi_g, f)))
    checked = 0
    seen: dict[bytes, Morph] = {}
    partial = False
    for key, value in pairs:
        if checked >= max_pairs:
            partial = True
            break
        checked += 1
        if key in seen:
            if seen[key] != value:
                return RelationCheck(False, checked, False,
                                     "well-definedness fails: equal composites "
                                     "with different transfers")
        else:
            seen[key] = value
    return RelationCheck(True, checked, partial)


def check_modeling_compatibility(rel: CrossRelation, gamma: Functor,
                                 delta: Functor, *,
                                 max_pairs: int = DEFAULT_CHECK_PAIRS
                                 ) -> RelationCheck:
    """gamma f == gamma f' implies delta phi(f,g) == delta phi(f',g)."""
    hom_fc = rel.c_cat.hom(rel.c1, rel.c2)
    by_image: dict[bytes, list[Morph]] = {}
    for f in hom_fc:
        by_image.setdefault(gamma.morph(f).encode(), []).append(f)
    gs: Sequence[Morph | None]
    if rel.phi_depends_on_g:
        gs = rel.d_cat.hom(rel.d2, rel.d3)
    else:
        gs = [None]
    checked = 0
    for group in by_image.values():
        lead = group[0]
        for other in group[1:]:
            for g in gs:
                if checked >= max_pairs:
                    return RelationCheck(True, checked, partial=True)
                checked += 1
                if delta.morph(rel.phi(lead, g)) != delta.morph(rel.phi(other, g)):
                    return RelationCheck(
                        False, checked, False,
                        f"compatibility fails at f={lead.data!r}, "
                        f"f'={other.data!r}, g={getattr(g, 'data', None)!r}")
    return RelationCheck(True, checked, partial=False)


def identity_modeling(cat: Category, a: Any, b: Any, c: Any) -> CrossRelation:
    """Self-modeling: phi forgets g, psi and zeta are identities."""
    return CrossRelation(a, b, c, a, b, c, cat, cat,
                         phi=lambda f, g: f, psi=lambda g: g,
                         zeta=lambda h: h, phi_depends_on_g=False)


@dataclass(frozen=True)
class ModelingTrace:
    a: Any
    b: Any
    r: int
    d1: Any
    d2: Any
    d3: Any
    c: Any
    compatibility: RelationCheck
    welldefined: RelationCheck
    welldefined_via: str
    delta_provenance: str
    note: dict = field(default_factory=dict)

    def doc(self) -> dict:
        return {"kind": "modeling", "a": obj_doc(self.a), "b": obj_doc(self.b),
                "r": self.r, "d1": obj_doc(self.d1), "d2": obj_doc(self.d2),
                "d3": obj_doc(self.d3), "witness": obj_doc(self.c),
                "compatibility_pairs": self.compatibility.checked,
                "compatibility_partial": self.compatibility.partial,
                "welldefined_via": self.welldefined_via,
                "welldefined_pairs": self.welldefined.checked,
                "welldefined_partial": self.welldefined.partial,
                "delta_provenance": self.delta_provenance,
                **({"note": self.note} if self.note else {})}


def modeling_transfer(rel_provider: Callable[[Any], tuple[Any, CrossRelation]],
                      delta_witness: WitnessProvider, gamma: Functor,
                      delta: Functor, d1: Any, d2: Any, a: Any, b: Any, r: int,
                      *, max_pairs: int = DEFAULT_CHECK_PAIRS,
                      note: dict | None = None) -> tuple[Any, ModelingTrace]:
    """Pull a witness for gamma at (a, b) across modeling data.

    d3 witnesses delta at (d1, d2); the relation returned for d3 is checked
    for modeling compatibility and well-definedness (through zeta when
    available) before its c3 is accepted.
    """
    d3 = _stage("delta witness", lambda: delta_witness(d1, d2, r))
    c3, rel = _stage("relation provider", lambda: rel_provider(d3))
    if (rel.c1, rel.c2, rel.c3) != (a, b, c3):
        raise ConstructionError("relation triple disagrees with (a, b, c)")
    if (rel.d1, rel.d2, rel.d3) != (d1, d2, d3):
        raise ConstructionError("relation triple disagrees with (d1, d2, d3)")
    compat = check_modeling_compatibility(rel, gamma, delta, max_pairs=max_pairs)
    if not compat.ok:
        raise ConstructionError(f"modeling {compat.violation}")
    if rel.zeta is not None:
        wd = check_cross_zeta(rel, max_pairs=max_pairs)
        via = "zeta-identity"
    else:
        wd = check_cross_welldefined(rel, max_pairs=max_pairs)
        via = "equal-composite-scan"
    if not wd.ok:
        raise ConstructionError(f"modeling {wd.violation}")
    trace = ModelingTrace(a, b, r, d1, d2, d3, c3, compat, wd, via,
                          delta_witness.provenance, note or {})
    return c3, trace


def r_modeling_transfer(rel_provider: Callable[[Any], tuple[Any, CrossRelation]],
                        degree_provider: Callable[[Any, Any, int], tuple[Any, int]],
                        d1: Any, d2: Any, r: int, *,
                        max_pairs: int = DEFAULT_CHECK_PAIRS
                        ) -> tuple[Any, int, RelationCheck]:
    """Degree-bound transfer: only zeta data is needed, no functors.

    degree_provider returns (d3, k) with d3 forcing at most k colors over
    copies of d2; the relation's zeta identity then caps the transferred
    degree at k with witness c3 = rel.c3.
    """
    d3, k = _stage("degree provider", lambda: degree_provider(d1, d2, r))
    c3, rel = _stage("relation provider", lambda: rel_provider(d3))
    if rel.zeta is None:
        raise ConstructionError("degree transfer needs zeta data")
    check = check_cross_zeta(rel, max_pairs=max_pairs)
    if not check.ok:
        raise ConstructionError(check.violation)
    return c3, k, check


# ---------------------------------------------------------------------------
# Hales-Jewett modeling and pipeline


def hj_modeling(v: Any, l: int, c_values: Sequence[tuple], *,
                k0: int | None = None) -> tuple[int, CrossRelation]:
    """Model word substitutions at (v, l) inside a product of step categories.

    Coordinate i of the product contributes a block of length m_i; the block
    reads the step value: its variable segment copies input letter i, the
    left segment pins the top alphabet letter, the right segment the letter
    below it.  Returns the concatenated dimension and the relation.
    """
    if v[0] != "V":
        raise ValueError(f"not a window object: {v!r}")
    vals = v[1]
    if k0 is None:
        k0 = len(vals) - 1
    if len(vals) != k0 + 1:
        raise ValueError("window length disagrees with k0")
    if l < 1:
        raise ValueError("need at least one input position")
    ms = []
    for pair in c_values:
        if not (isinstance(pair, tuple) and len(pair) == 2 and pair[1] == 2):
            raise ValueError(f"coordinates must be (m, 2) objects, got {pair!r}")
        if pair[0] < 3:
            raise ValueError("blocks need room for three segments (m >= 3)")
        ms.append(pair[0])
    if len(ms) != l:
        raise ValueError("need one block per input position")
    letters = sorted(set(vals))
    k1 = len(letters)
    rank = {letter: i + 1 for i, letter in enumerate(letters)}
    top = letters[-1]
    low = letters[max(0, k1 - 2)]       # letter of rank max(1, k1-1)
    l_prime = sum(ms)
    starts = [sum(ms[:i]) for i in range(l)]
    wcat = word_category(k0)
    d_coord = (k1, 1) if k1 >= 2 else (1, 0)
    pcat = ProductCategory(tuple(StepCategory("definition") for _ in range(l)))
    d1 = pcat.pack(tuple(d_coord for _ in range(l)))
    d2 = pcat.pack(tuple((3, 2) for _ in range(l)))
    d3 = pcat.pack(tuple((m, 2) for m in ms))
    c2 = ("L", l)
    c3 = ("L", l_prime)
    mid_cap = max(1, k1 - 1)
    u_top = min(t for t in range(-k0, 1) if vals[t + k0] == top)
    u_low = min(t for t in range(-k0, 1) if vals[t + k0] == low)

    def phi(f: Morph, _g: Morph | None = None) -> Morph:
        fvals = f.data[1]
        payload = tuple((k1, rank[fvals[i]], mid_cap) for i in range(l))
        return Morph(d1, d2, payload)

    def psi(p: Morph) -> Morph:
        out = []
        for i in range(l):
            block = p.data[i]
            for t in block:
                out.append(i + 1 if t == 2 else (u_top if t == 1 else u_low))
        return Morph(c2, c3, ("G", tuple(out)))

    def zeta(h: Morph) -> Morph:
        out = []
        for i in range(l):
            for t in h.data[i]:
                out.append(letters[t - 1])
        return Morph(v, c3, ("F", tuple(out)))

    rel = CrossRelation(v, c2, c3, d1, d2, d3, wcat, pcat,
                        phi=phi, psi=psi, zeta=zeta, phi_depends_on_g=False)
    return l_prime, rel


def hj_stage_provider(max_color_bits: int, max_pairs: int) -> StageProvider:
    def provider(index: int, fun: Functor, a: Any, b: Any, r: int
                 ) -> tuple[Any, dict]:
        if a[0] != "V" or b[0] != "L":
            raise ConstructionError(f"stage {index}: unexpected pair {(a, b)!r}")
        lam = b[1]
        vals = a[1]
        k0 = len(vals) - 1
        k1 = len(set(vals))
        d_coord = (k1, 1) if k1 >= 2 else (1, 0)
        coords = tuple(ProductCoordinate(step_boundary("definition"), d_coord,
                                         (3, 2), pigeonhole_provider())
                       for _ in range(lam))
        pcat = ProductCategory(tuple(c.delta.dom for c in coords))
        product_note: dict = {}

        def delta_fn(d1: Any, d2: Any, rr: int) -> Any:
            vals_c, trace = product_witness(coords, rr,
                                            max_color_bits=max_color_bits)
            product_note["product"] = trace.doc()
            return pcat.pack(vals_c)

        delta_witness = WitnessProvider(delta_fn, CONSTRUCTED,
                                        note="pigeonhole blocks")

        def rel_provider(d3: Any) -> tuple[Any, CrossRelation]:
            l_prime, rel = hj_modeling(a, lam, pcat.values(d3), k0=k0)
            return ("L", l_prime), rel

        delta_fun = ProductFunctor(tuple(c.delta for c in coords))
        d1 = pcat.pack(tuple(d_coord for _ in range(lam)))
        d2 = pcat.pack(tuple((3, 2) for _ in range(lam)))
        c3, trace = modeling_transfer(rel_provider, delta_witness, fun,
                                      delta_fun, d1, d2, a, b, r,
                                      max_pairs=max_pairs, note=product_note)
        return c3, trace.doc()

    return provider


def hj_witness(k: int, l: int, r: int, *,
               max_color_bits: int = DEFAULT_MAX_COLOR_BITS,
               max_pairs: int = DEFAULT_CHECK_PAIRS) -> tuple[int, WordTrace]:
    """Dimension m for the combinatorial-line statement at window size k.

    Runs the boundary word of length k at (standard window, l) where each
    stage transfers a staged product of pigeonhole witnesses through the
    block modeling; the final object ("L", m) carries the dimension.
    """
    if k < 1 or l < 1 or r < 1:
        raise ValueError(f"need k, l, r >= 1, got {(k, l, r)}")
    bound = word_boundary(k)
    v0 = ("V", tuple(range(1, k + 2)))
    word = [bound] * k
    c, trace = word_witness(word, v0, ("L", l), r,
                            hj_stage_provider(max_color_bits, max_pairs))
    return c[1], trace


# ---------------------------------------------------------------------------
# trees: the end-to-end pipeline


def fouche_witness(s_tree: tuple, t_tree: tuple, r: int, *,
                   max_color_bits: int = DEFAULT_MAX_COLOR_BITS
                   ) -> tuple[tuple, WordTrace | None]:
    """Tree V making embeddings of S into T monochromatic inside V.

    Equal heights run the truncation word of length edge-height(S) with the
    fiber-condition recursion per stage (tree oracle backed by the product
    Ramsey numbers); height mismatches and single nodes return T directly.
    """
    if r < 1:
        raise ValueError("need at least one color")
    trunc = tree_truncation()
    if height(s_tree) != height(t_tree) or height(s_tree) == 0:
        return t_tree, None

    def product_ramsey(kvec: tuple, pvec: tuple, rr: int) -> tuple:
        return product_ramsey_numbers(kvec, pvec, rr,
                                      max_color_bits=max_color_bits)[0]

    oracle = lambda inst: tree_fp_witness(inst, product_ramsey, trunc)

    def provider(index: int, fun: Functor, a: Any, b: Any, rr: int
                 ) -> tuple[Any, dict]:
        c, trace = fp_to_p_construct(fun, a, b, rr, oracle,
                                     selection="first-canonical")
        return c, trace.doc()

    word = [trunc] * height(s_tree)
    return word_witness(word, s_tree, t_tree, r, provider)
