"""Coloring search engine for partition conditions over finite hom sets.

Checks run in one of two modes.

Exhaustive mode enumerates every r-coloring of hom(a, c) as a mixed-radix
index: coloring idx assigns cell j (the j-th arrow of hom(a, c) in canonical
order) the color (idx // r**j) % r, so the first arrow is the least
significant digit.  The mode refuses to start when r**|hom(a, c)| exceeds the
coloring budget.

Sampled mode draws colorings from a deterministic pseudorandom function: the
color of cell j in sample i is splitmix64 applied to seed, i and j in turn,
reduced mod r (see prf_color).  Colorings are never materialized up front;
cells are computed on access.  A sampled pass is probabilistic evidence only
and is flagged as such.  A sampled failure is a genuine disproof: the reported
coloring is explicit and every candidate arrow was checked against it.

With jobs > 1 the coloring index range is split into contiguous chunks scanned
in parallel; the reported failure is the minimum failing index, so results and
certificates are identical for any job count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from multiprocessing import get_context
from typing import Any, Iterable

from .core import Category, Functor, Morph, sort_morphs

DEFAULT_SEED = 1729
DEFAULT_SAMPLES = 10_000
COUNTEREXAMPLE_INLINE_CAP = 4096

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    """Finalizer of the splitmix64 generator."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def prf_color(seed: int, sample: int, cell: int, r: int) -> int:
    """Color of one cell in one sampled coloring, deterministic in (seed, sample, cell)."""
    z = splitmix64(seed)
    z = splitmix64(z + (sample + 1) * _GOLDEN)
    z = splitmix64(z + (cell + 1) * _GOLDEN)
    return z % r


class BudgetExceeded(Exception):
    """An exhaustive scan or hom materialization would overrun its cap."""

    def __init__(self, quantity: str, needed: int, cap: int):
        super().__init__(f"{quantity}: need {needed}, cap {cap}")
        self.quantity = quantity
        self.needed = needed
        self.cap = cap


@dataclass(frozen=True)
class SearchBudget:
    max_colorings: int = 1_000_000
    max_hom_size: int = 2_000_000


@dataclass(frozen=True)
class Coloring:
    """A concrete coloring, either inlined or reconstructible from its index."""

    r: int
    size: int
    kind: str  # "index" (exhaustive) or "sample"
    index: int
    seed: int | None = None
    cells: tuple[int, ...] | None = None

    def cell(self, j: int) -> int:
        if not 0 <= j < self.size:
            raise IndexError(j)
        if self.cells is not None:
            return self.cells[j]
        if self.kind == "sample":
            return prf_color(self.seed, self.index, j, self.r)
        return (self.index // self.r ** j) % self.r


@dataclass(frozen=True)
class PCheckResult:
    ok: bool
    exhaustive: bool
    r: int
    cells: int
    arrows: int
    checked: int
    total: int | None = None
    samples: int | None = None
    seed: int | None = None
    counterexample: Coloring | None = None

    @property
    def probabilistic(self) -> bool:
        return self.ok and not self.exhaustive


@dataclass(frozen=True)
class FpInstance:
    a: Any
    b: Any
    s: tuple[Morph, ...]
    r: int


@dataclass(frozen=True)
class DegreeResult:
    degree: int | None
    witness: Any
    r: int
    trail: tuple[tuple[int, Any, bool], ...]
    result: PCheckResult | None


def fiber(delta: Functor, a: Any, b: Any, target: Morph) -> tuple[Morph, ...]:
    """Arrows of hom(a, b) that the functor sends to target."""
    return tuple(f for f in delta.dom.hom(a, b) if delta.morph(f) == target)


def functor_image(delta: Functor, a: Any, b: Any) -> tuple[Morph, ...]:
    """Distinct images of hom(a, b) under the functor, canonically ordered."""
    seen: dict[bytes, Morph] = {}
    for f in delta.dom.hom(a, b):
        m = delta.morph(f)
        seen.setdefault(m.encode(), m)
    return sort_morphs(seen.values())


def _hom_checked(cat: Category, a: Any, b: Any, budget: SearchBudget) -> tuple[Morph, ...]:
    size = cat.hom_size(a, b)
    if size > budget.max_hom_size:
        raise BudgetExceeded("hom-set size", size, budget.max_hom_size)
    return cat.hom(a, b)


# A check is (groups, spread, cap): every group must be monochromatic and,
# when spread is not None, the cells in spread must use at most cap colors.
Check = tuple[tuple[tuple[int, ...], ...], tuple[int, ...] | None, int | None]


def _passes(cell, checks: list[Check]) -> bool:
    for groups, spread, cap in checks:
        ok = True
        for grp in groups:
            c0 = cell(grp[0])
            for p in grp[1:]:
                if cell(p) != c0:
                    ok = False
                    break
            if not ok:
                break
        if ok and spread is not None:
            seen = set()
            for p in spread:
                seen.add(cell(p))
                if len(seen) > cap:
                    ok = False
                    break
        if ok:
            return True
    return False


def _scan_range(kind: str, seed: int | None, r: int, n: int,
                checks: list[Check], lo: int, hi: int) -> int | None:
    """First failing coloring index in [lo, hi), or None."""
    rpow = [r ** j for j in range(n)] if kind == "index" else None
    for idx in range(lo, hi):
        memo: dict[int, int] = {}
        if kind == "index":
            def cell(j: int, idx=idx, memo=memo) -> int:
                v = memo.get(j)
                if v is None:
                    v = (idx // rpow[j]) % r
                    memo[j] = v
                return v
        else:
            def cell(j: int, idx=idx, memo=memo) -> int:
                v = memo.get(j)
                if v is None:
                    v = prf_color(seed, idx, j, r)
                    memo[j] = v
                return v
        if not _passes(cell, checks):
            return idx
    return None


def _scan_args(args) -> int | None:
    return _scan_range(*args)


def _ranges(total: int, jobs: int) -> list[tuple[int, int]]:
    jobs = max(1, min(jobs, total))
    q, rem = divmod(total, jobs)
    out = []
    lo = 0
    for i in range(jobs):
        hi = lo + q + (1 if i < rem else 0)
        if lo < hi:
            out.append((lo, hi))
        lo = hi
    return out


def _first_failure(kind: str, seed: int | None, r: int, n: int,
                   checks: list[Check], total: int, jobs: int) -> int | None:
    if jobs <= 1 or total <= 1:
        return _scan_range(kind, seed, r, n, checks, 0, total)
    parts = _ranges(total, jobs)
    with ProcessPoolExecutor(max_workers=len(parts),
                             mp_context=get_context("fork")) as pool:
        hits = list(pool.map(_scan_args,
                             [(kind, seed, r, n, checks, lo, hi) for lo, hi in parts]))
    hits = [h for h in hits if h is not None]
    return min(hits) if hits else None


def _run_scan(n: int, r: int, checks: list[Check], *, mode: str,
              budget: SearchBudget, seed: int, samples: int, jobs: int) -> PCheckResult:
    if r < 0:
        raise ValueError("color count must be nonnegative")
    if r == 0:
        if n > 0:
            raise ValueError("no 0-colorings of a nonempty hom set")
        # 0-colorings exist only on an empty hom set; the check is vacuous
        return PCheckResult(ok=True, exhaustive=True, r=0, cells=0,
                            arrows=len(checks), checked=1, total=1)
    total = r ** n
    if mode == "exhaustive":
        if total > budget.max_colorings:
            raise BudgetExceeded("colorings", total, budget.max_colorings)
        exhaustive = True
    elif mode == "sampled":
        exhaustive = False
    elif mode == "auto":
        exhaustive = total <= budget.max_colorings
    else:
        raise ValueError(f"unknown mode {mode!r}")
    count = total if exhaustive else samples
    kind = "index" if exhaustive else "sample"
    scan_seed = None if exhaustive else seed
    hit = _first_failure(kind, scan_seed, r, n, checks, count, jobs)
    if hit is None:
        return PCheckResult(ok=True, exhaustive=exhaustive, r=r, cells=n,
                            arrows=len(checks), checked=count,
                            total=total if exhaustive else None,
                            samples=None if exhaustive else samples,
                            seed=scan_seed)
    cells = None
    if n <= COUNTEREXAMPLE_INLINE_CAP:
        if exhaustive:
            cells = tuple((hit // r ** j) % r for j in range(n))
        else:
            cells = tuple(prf_color(seed, hit, j, r) for j in range(n))
    cex = Coloring(r=r, size=n, kind=kind, index=hit, seed=scan_seed, cells=cells)
    return PCheckResult(ok=False, exhaustive=exhaustive, r=r, cells=n,
                        arrows=len(checks), checked=hit + 1,
                        total=total if exhaustive else None,
                        samples=None if exhaustive else samples,
                        seed=scan_seed, counterexample=cex)


def check_p_witness(delta: Functor, a: Any, b: Any, c: Any, r: int, *,
                    mode: str = "auto", budget: SearchBudget | None = None,
                    seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
                    jobs: int = 1) -> PCheckResult:
    """Does c witness the partition condition for delta at (a, b) with r colors?

    Pass means: every r-coloring of hom(a, c) admits g in hom(b, c) such that
    arrows of hom(a, b) identified by delta get equal colors after composing
    with g.
    """
    budget = budget or SearchBudget()
    cat = delta.dom
    hom_ab = _hom_checked(cat, a, b, budget)
    hom_bc = _hom_checked(cat, b, c, budget)
    hom_ac = _hom_checked(cat, a, c, budget)
    pos = {f: i for i, f in enumerate(hom_ac)}
    by_image: dict[bytes, list[int]] = {}
    for i, f in enumerate(hom_ab):
        by_image.setdefault(delta.morph(f).encode(), []).append(i)
    nontrivial = [grp for grp in by_image.values() if len(grp) > 1]
    checks: list[Check] = []
    for g in hom_bc:
        act = [pos[cat.compose(g, f)] for f in hom_ab]
        checks.append((tuple(tuple(act[i] for i in grp) for grp in nontrivial),
                       None, None))
    return _run_scan(len(hom_ac), r, checks, mode=mode, budget=budget,
                     seed=seed, samples=samples, jobs=jobs)


def check_fp_witness(delta: Functor, inst: FpInstance, c: Any, f_prime: Morph,
                     g_prime: Morph, *, mode: str = "auto",
                     budget: SearchBudget | None = None, seed: int = DEFAULT_SEED,
                     samples: int = DEFAULT_SAMPLES, jobs: int = 1) -> PCheckResult:
    """Does (c, f_prime, g_prime) witness the fiber condition for the instance?

    Pass means: every r-coloring of hom(a, c) admits g in hom(b, c) whose
    image under delta agrees with g_prime on every arrow of s, and which makes
    the fiber of f_prime monochromatic after composition.
    """
    budget = budget or SearchBudget()
    a, b, s, r = inst.a, inst.b, inst.s, inst.r
    if not s:
        raise ValueError("the arrow selection s must be non-empty")
    if f_prime not in s:
        raise ValueError("f_prime must belong to s")
    cat, cod = delta.dom, delta.cod
    hom_ab = _hom_checked(cat, a, b, budget)
    hom_bc = _hom_checked(cat, b, c, budget)
    hom_ac = _hom_checked(cat, a, c, budget)
    image_ab = {delta.morph(f).encode() for f in hom_ab}
    for e in s:
        if e.encode() not in image_ab:
            raise ValueError("s must lie in the image of hom(a, b)")
    if not any(delta.morph(g) == g_prime for g in hom_bc):
        raise ValueError("g_prime must lie in the image of hom(b, c)")
    fiber_ab = [f for f in hom_ab if delta.morph(f) == f_prime]
    pos = {f: i for i, f in enumerate(hom_ac)}
    checks: list[Check] = []
    for g in hom_bc:
        dg = delta.morph(g)
        if all(cod.compose(dg, e) == cod.compose(g_prime, e) for e in s):
            grp = tuple(pos[cat.compose(g, f)] for f in fiber_ab)
            checks.append(((grp,) if grp else (), None, None))
    return _run_scan(len(hom_ac), r, checks, mode=mode, budget=budget,
                     seed=seed, samples=samples, jobs=jobs)


def check_degree_witness(cat: Category, a: Any, b: Any, c: Any, r: int, k: int, *,
                         mode: str = "auto", budget: SearchBudget | None = None,
                         seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
                         jobs: int = 1) -> PCheckResult:
    """Does c force every r-coloring onto at most k colors over some copy of b?"""
    if k < 0:
        raise ValueError("color cap must be nonnegative")
    budget = budget or SearchBudget()
    hom_ab = _hom_checked(cat, a, b, budget)
    hom_bc = _hom_checked(cat, b, c, budget)
    hom_ac = _hom_checked(cat, a, c, budget)
    pos = {f: i for i, f in enumerate(hom_ac)}
    checks: list[Check] = []
    for g in hom_bc:
        act = tuple(pos[cat.compose(g, f)] for f in hom_ab)
        checks.append(((), act, k))
    return _run_scan(len(hom_ac), r, checks, mode=mode, budget=budget,
                     seed=seed, samples=samples, jobs=jobs)


def search_p_witness(delta: Functor, a: Any, b: Any, r: int,
                     pool: Iterable[Any], **kw) -> tuple[Any, PCheckResult] | None:
    """First object in the pool that witnesses the partition condition."""
    for c in pool:
        res = check_p_witness(delta, a, b, c, r, **kw)
        if res.ok:
            return c, res
    return None


def ramsey_degree(cat: Category, a: Any, b: Any, r: int, pool: Iterable[Any], *,
                  mode: str = "auto", budget: SearchBudget | None = None,
                  seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
                  jobs: int = 1) -> DegreeResult:
    """Least k with a pool witness forcing at most k colors over copies of b.

    An empty hom(a, b) has degree 0 witnessed by b itself.  Returns degree
    None when no pool object works even at the trivial cap |hom(a, b)|.
    """
    pool = tuple(pool)
    hom_ab = cat.hom(a, b)
    if not hom_ab:
        return DegreeResult(degree=0, witness=b, r=r, trail=(), result=None)
    trail: list[tuple[int, Any, bool]] = []
    for k in range(1, len(hom_ab) + 1):
        for c in pool:
            res = check_degree_witness(cat, a, b, c, r, k, mode=mode,
                                       budget=budget, seed=seed,
                                       samples=samples, jobs=jobs)
            trail.append((k, c, res.ok))
            if res.ok:
                return DegreeResult(degree=k, witness=c, r=r,
                                    trail=tuple(trail), result=res)
    return DegreeResult(degree=None, witness=None, r=r, trail=tuple(trail),
                        result=None)


@dataclass(frozen=True)
class DegreeBoundReport:
    bound: int
    word: tuple[int, ...]
    trivial: int
    degree: DegreeResult | None


def check_degree_bound(deltas: tuple[Functor, ...], a: Any, b: Any, r: int,
                       pool: Iterable[Any] | None, *, word_cap: int = 3,
                       mode: str = "auto", budget: SearchBudget | None = None,
                       seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
                       jobs: int = 1) -> DegreeBoundReport:
    """Image-size degree bound over composition words, checked against brute force.

    For functors fulfilling the partition condition the image size of hom(a, b)
    under any composition word bounds the Ramsey degree; when a pool is given
    the brute-forced degree is computed and the bound is asserted against it.
    """
    cat = deltas[0].dom
    bound, word = degree_upper_bound(a, b, tuple(deltas), word_cap)
    trivial = cat.hom_size(a, b)
    deg = None
    if pool is not None:
        deg = ramsey_degree(cat, a, b, r, pool, mode=mode, budget=budget,
                            seed=seed, samples=samples, jobs=jobs)
        if deg.degree is not None:
            # the image bound holds for the true degree; a pool lacking the
            # witness object overshoots it, which this surfaces loudly
            assert deg.degree <= bound, (
                f"brute degree {deg.degree} exceeds image bound {bound}; "
                f"the pool is missing a witness object")
    return DegreeBoundReport(bound=bound, word=word, trivial=trivial, degree=deg)


def degree_upper_bound(a: Any, b: Any, deltas: tuple[Functor, ...],
                       word_cap: int = 3) -> tuple[int, tuple[int, ...]]:
    """Smallest image size of hom(a, b) over composition words of endofunctors.

    Scans words of length 1..word_cap over the given functors (applied left to
    right) plus the empty word, whose image size is |hom(a, b)| itself.
    Returns the bound and the indices of the best word.
    """
    cat = deltas[0].dom if deltas else None
    if cat is None:
        raise ValueError("need at least one functor")
    hom_ab = cat.hom(a, b)
    best, best_word = len(hom_ab), ()
    for length in range(1, word_cap + 1):
        for word in product(range(len(deltas)), repeat=length):
            images = set()
            for f in hom_ab:
                m = f
                for i in word:
                    m = deltas[i].morph(m)
                images.add(m.encode())
            if len(images) < best:
                best, best_word = len(images), word
    return best, best_word
