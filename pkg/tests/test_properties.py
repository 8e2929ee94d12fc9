"""Law-level invariants checked over drawn inputs."""

from hypothesis import given, settings
from hypothesis import strategies as st

from ramcat import (canon_bytes, canon_parse, check_p_witness, fiber,
                    functor_image, prf_color, ramsey_degree, degree_upper_bound,
                    subset_boundary, subset_category)
from ramcat.certificates import canonical_json

DR = subset_boundary()
CAT = subset_category()

scalars = st.one_of(
    st.integers(min_value=-(2 ** 63), max_value=2 ** 63 - 1),
    st.text(max_size=12))
values = st.recursive(scalars,
                      lambda kids: st.lists(kids, max_size=4).map(tuple),
                      max_leaves=12)


@given(values)
def test_canon_round_trip(value):
    assert canon_parse(canon_bytes(value)) == value


@given(st.integers(min_value=-(2 ** 63), max_value=2 ** 63 - 1),
       st.integers(min_value=-(2 ** 63), max_value=2 ** 63 - 1))
def test_canon_int_encoding_preserves_order(a, b):
    assert (a < b) == (canon_bytes(a) < canon_bytes(b))


@given(st.integers(min_value=0, max_value=3),
       st.integers(min_value=0, max_value=6))
def test_fibers_partition_hom(a, b):
    hom = CAT.hom(a, b)
    pieces = [fiber(DR, a, b, m) for m in functor_image(DR, a, b)]
    seen = [f for piece in pieces for f in piece]
    assert sorted(f.key() for f in seen) == sorted(f.key() for f in hom)
    assert len(seen) == len(hom)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=2),
       st.integers(min_value=0, max_value=2),
       st.integers(min_value=1, max_value=2))
def test_witnesses_are_upward_closed(a, extra, r):
    b = a + extra
    oks = [check_p_witness(DR, a, b, c, r, mode="exhaustive").ok
           for c in range(b, 6)]
    assert oks == sorted(oks), f"witness set not upward closed: {oks}"


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=3),
       st.integers(min_value=0, max_value=2),
       st.integers(min_value=1, max_value=2))
def test_degree_monotone_in_color_count(b, pool_extra, r1):
    pool = range(0, b + pool_extra + 1)
    r2 = r1 + 1
    d1 = ramsey_degree(CAT, 1, b, r1, pool, mode="exhaustive").degree
    d2 = ramsey_degree(CAT, 1, b, r2, pool, mode="exhaustive").degree
    if d1 is None:
        assert d2 is None
    elif d2 is not None:
        assert d1 <= d2


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=2),
       st.integers(min_value=0, max_value=2),
       st.integers(min_value=1, max_value=2))
def test_degree_never_exceeds_the_trivial_ceiling(a, extra, r):
    b = a + extra
    trivial = CAT.hom_size(a, b)
    deg = ramsey_degree(CAT, a, b, r, range(0, 7), mode="exhaustive")
    if deg.degree is not None:
        assert deg.degree <= max(trivial, 1)
    bound, _ = degree_upper_bound(a, b, (DR,))
    assert bound <= trivial
    if trivial:
        assert bound >= 1


@given(st.integers(min_value=0, max_value=2 ** 32),
       st.integers(min_value=0, max_value=10 ** 6),
       st.integers(min_value=0, max_value=10 ** 6),
       st.integers(min_value=1, max_value=64))
def test_prf_color_deterministic_and_in_range(seed, sample, cell, r):
    v = prf_color(seed, sample, cell, r)
    assert v == prf_color(seed, sample, cell, r)
    assert 0 <= v < r


@given(st.dictionaries(st.text(max_size=6),
                       st.one_of(st.integers(), st.text(max_size=6),
                                 st.lists(st.integers(), max_size=3)),
                       max_size=6))
def test_canonical_json_ignores_insertion_order(d):
    flipped = dict(reversed(list(d.items())))
    assert canonical_json(d) == canonical_json(flipped)
