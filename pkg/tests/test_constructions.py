"""Witness constructions: staged recursions, products, modeling transfer."""

import pytest

from ramcat import (BudgetExceeded, ConstructionError, CrossRelation, Morph,
                    FpInstance, brute_minimal_grid, brute_minimal_hj_dimension,
                    brute_minimal_single, check_cross_welldefined,
                    check_cross_zeta, check_modeling_compatibility,
                    check_p_witness, composition_witness, fouche_witness,
                    fp_to_p_construct, fp_provider, hj_modeling, hj_witness,
                    identity_modeling, p_pigeonhole_witness,
                    product_ramsey_numbers, r_fp_witness, star,
                    subset_boundary, subset_category, tree_fp_witness,
                    tree_truncation, word_boundary, word_witness)
from ramcat.categories import ProductFunctor, step_boundary
from ramcat.constructions import (CONSTRUCTED, SEARCHED, ProductCoordinate,
                                  pigeonhole_provider, product_witness,
                                  r_fp_oracle, r_modeling_transfer,
                                  rectangle_free_exists, search_provider)

DR = subset_boundary()


# ---------------------------------------------------------------------------
# pigeonhole


def test_pigeonhole_witness_values():
    assert p_pigeonhole_witness(2, 2, 2) == (4, 2)
    assert p_pigeonhole_witness(2, 3, 2) == (6, 2)
    assert p_pigeonhole_witness(3, 2, 3) == (5, 2)
    for bad in ((1, 2, 2), (2, 0, 2), (2, 2, 0)):
        with pytest.raises(ValueError):
            p_pigeonhole_witness(*bad)


def test_pigeonhole_provider_constructs_verified_witnesses():
    prov = pigeonhole_provider()
    assert prov.provenance == CONSTRUCTED
    c = prov((2, 1), (3, 2), 2)
    assert c == (6, 2)
    res = check_p_witness(step_boundary("definition"), (2, 1), (3, 2), c, 2)
    assert res.ok and res.exhaustive
    with pytest.raises(ValueError):
        prov((2, 1), (3, 1), 2)


# ---------------------------------------------------------------------------
# fiber-condition oracle and recursion over subsets


def test_fiber_oracle_frozen_values():
    inst = FpInstance(1, 2, (Morph(0, 1, ()),), 2)
    assert r_fp_witness(inst) == (6, Morph(0, 1, ()), Morph(1, 5, (1,)))
    s = (Morph(1, 2, (1,)), Morph(1, 2, (2,)))
    inst2 = FpInstance(2, 3, s, 2)
    c, f_prime, g_prime = r_fp_witness(inst2)
    assert c == 9
    assert f_prime == Morph(1, 2, (2,))  # largest payload maximum wins
    assert g_prime == Morph(2, 8, (1, 2))
    # a single-arrow hom is already monochromatic: stay at b
    triv = FpInstance(2, 2, (Morph(1, 1, (1,)),), 2)
    assert r_fp_witness(triv) == (2, Morph(1, 1, (1,)), Morph(1, 1, (1,)))
    with pytest.raises(ValueError):
        r_fp_witness(FpInstance(1, 2, (), 2))
    with pytest.raises(ValueError):
        r_fp_witness(FpInstance(1, 2, (Morph(0, 1, ()),), 0))


def test_fiber_recursion_small_pair():
    c, trace = fp_to_p_construct(DR, 1, 2, 2, r_fp_oracle())
    assert c == 6 and trace.n == 1
    st = trace.stages[0]
    assert (st.c_prev, st.c_next) == (2, 6)
    assert st.g == Morph(1, 5, (1,))
    res = check_p_witness(DR, 1, 2, 6, 2)
    assert res.ok and res.exhaustive


def test_fiber_recursion_two_stages():
    c, trace = fp_to_p_construct(DR, 2, 3, 2, r_fp_oracle())
    assert c == 27 and trace.n == 2
    assert [st.c_next for st in trace.stages] == [9, 27]
    assert trace.stages[0].picked == Morph(1, 2, (2,))
    assert trace.stages[1].g == Morph(8, 26, (1, 2, 3, 4, 5, 6, 7, 8))
    # the picks exhaust the image in distinct origins
    origins = {st.origin.encode() for st in trace.stages}
    assert len(origins) == 2


def test_fiber_recursion_empty_hom():
    c, trace = fp_to_p_construct(DR, 2, 1, 2, r_fp_oracle())
    assert c == 1 and trace.n == 0 and trace.stages == ()


def test_fiber_recursion_rejects_wayward_oracle():
    def liar(inst):
        return 6, Morph(1, inst.b - 1, (9,)), Morph(inst.b - 1, 5, (1,))

    with pytest.raises(ConstructionError, match="outside the admissible set"):
        fp_to_p_construct(DR, 1, 2, 2, liar)


def test_providers_carry_provenance():
    wit = fp_provider(DR, r_fp_oracle(), note="max-rule")
    assert wit.provenance == CONSTRUCTED and wit.note == "max-rule"
    assert wit(1, 2, 2) == 6
    sp = search_provider(DR, lambda a, b, r: range(0, 8))
    assert sp.provenance == SEARCHED
    assert sp(2, 3, 2) == 4
    empty = search_provider(DR, lambda a, b, r: range(0, 3))
    with pytest.raises(ConstructionError, match="pool exhausted"):
        empty(2, 3, 2)


# ---------------------------------------------------------------------------
# composition along functor words


def test_composition_witness_matches_word_recursion():
    wit = fp_provider(DR, r_fp_oracle())
    c, trace = composition_witness(DR, DR, 1, 2, 2, wit, wit)
    assert c == 6
    assert trace.d == 1 and trace.c_prime == 2
    assert trace.inner_provenance == CONSTRUCTED

    def provider(i, fun, a, b, r):
        return fp_to_p_construct(fun, a, b, r, r_fp_oracle())[0], {"stage": i}

    c2, wt = word_witness([DR, DR], 1, 2, 2, provider)
    assert c2 == c and wt.length == 2
    outer, inner = wt.stages
    assert outer.b == 2 and outer.witness == 6 and outer.lifted_from == 1
    assert inner.a == 0 and inner.witness == 1 and inner.lifted_from is None
    assert [st.note["stage"] for st in wt.stages] == [0, 1]
    with pytest.raises(ValueError):
        word_witness([], 1, 2, 2, provider)


# ---------------------------------------------------------------------------
# products


def test_product_single_coordinate_trivial():
    c_vals, trace = product_ramsey_numbers((2,), (2,), 2)
    assert c_vals == (2,)
    assert trace.stages[0].m_exponent == 1


def test_product_two_coordinates_frozen():
    c_vals, trace = product_ramsey_numbers((1, 1), (2, 2), 2)
    assert c_vals == (130, 6)
    first, second = trace.stages
    assert first.m_exponent == 6 and first.witness == 130
    assert second.m_exponent == 1 and second.witness == 6
    assert first.provenance == CONSTRUCTED
    assert trace.b_values == (2, 2)


def test_product_validations_and_budget():
    with pytest.raises(ValueError):
        product_ramsey_numbers((3,), (2,), 2)
    with pytest.raises(ValueError):
        product_ramsey_numbers((1, 1), (2,), 2)
    with pytest.raises(ValueError):
        product_ramsey_numbers((), (), 2)
    with pytest.raises(BudgetExceeded) as exc:
        product_ramsey_numbers((1, 1), (2, 2), 2, max_color_bits=3)
    assert "color bits" in exc.value.quantity
    with pytest.raises(ValueError):
        product_witness([], 2)
    coord = ProductCoordinate(DR, 1, 2, fp_provider(DR, r_fp_oracle()))
    with pytest.raises(ValueError):
        product_witness([coord], 0)


# ---------------------------------------------------------------------------
# brute-force minima


def test_brute_minima():
    assert brute_minimal_single(1, 2, 2) == 3
    assert brute_minimal_single(2, 3, 2) == 4
    assert brute_minimal_single(2, 3, 2, cap=3) is None
    assert rectangle_free_exists(4, 2)
    assert not rectangle_free_exists(5, 2)
    assert brute_minimal_grid(1) == 2
    assert brute_minimal_grid(2) == 5
    assert brute_minimal_hj_dimension(2, 2) == 2
    assert brute_minimal_hj_dimension(2, 1) == 1
    assert brute_minimal_hj_dimension(3, 1) == 1


# ---------------------------------------------------------------------------
# cross-category modeling


def test_identity_modeling_passes_all_checks():
    cat = subset_category()
    rel = identity_modeling(cat, 1, 2, 4)
    assert check_cross_zeta(rel).ok
    assert check_cross_welldefined(rel).ok
    assert check_modeling_compatibility(rel, DR, DR).ok


def test_zeta_requires_data():
    cat = subset_category()
    rel = identity_modeling(cat, 1, 2, 4)
    stripped = CrossRelation(rel.c1, rel.c2, rel.c3, rel.d1, rel.d2, rel.d3,
                             rel.c_cat, rel.d_cat, rel.phi, rel.psi,
                             zeta=None, phi_depends_on_g=False)
    with pytest.raises(ValueError):
        check_cross_zeta(stripped)
    assert check_cross_welldefined(stripped).ok


def test_broken_zeta_is_reported():
    cat = subset_category()
    rel = identity_modeling(cat, 1, 2, 4)
    broken = CrossRelation(rel.c1, rel.c2, rel.c3, rel.d1, rel.d2, rel.d3,
                           rel.c_cat, rel.d_cat, rel.phi, rel.psi,
                           zeta=lambda h: Morph(1, 4, (4,)),
                           phi_depends_on_g=False)
    chk = check_cross_zeta(broken)
    assert not chk.ok and "zeta identity fails" in chk.violation


def test_welldefined_catches_collapsing_phi():
    cat = subset_category()
    # phi forgets f entirely while psi keeps it alive: equal d-composites
    # now carry distinct transfers
    rel = CrossRelation(1, 2, 4, 1, 2, 4, cat, cat,
                        phi=lambda f, g: Morph(1, 2, (1,)),
                        psi=lambda g: g, zeta=None)
    chk = check_cross_welldefined(rel)
    assert not chk.ok and "well-definedness fails" in chk.violation


def test_degree_transfer_needs_zeta():
    cat = subset_category()
    provider = lambda d1, d2, r: (6, 1)
    good = lambda d3: (d3, identity_modeling(cat, 1, 2, d3))
    c3, k, chk = r_modeling_transfer(good, provider, 1, 2, 2)
    assert c3 == 6 and k == 1 and chk.ok
    bare = lambda d3: (d3, CrossRelation(1, 2, d3, 1, 2, d3, cat, cat,
                                         phi=lambda f, g: f,
                                         psi=lambda g: g, zeta=None))
    with pytest.raises(ConstructionError, match="zeta"):
        r_modeling_transfer(bare, provider, 1, 2, 2)


# ---------------------------------------------------------------------------
# word substitutions modeled by step blocks


def test_hj_modeling_frozen_shape():
    v = ("V", (1, 2))
    l_prime, rel = hj_modeling(v, 2, ((3, 2), (4, 2)))
    assert l_prime == 7
    assert rel.d3 == ((0, (3, 2)), (1, (4, 2)))
    zeta = check_cross_zeta(rel)
    assert zeta.ok and zeta.checked == 12 and not zeta.partial
    dfun = ProductFunctor((step_boundary("definition"),
                           step_boundary("definition")))
    compat = check_modeling_compatibility(rel, word_boundary(1), dfun)
    assert compat.ok and compat.checked == 3
    wd = check_cross_welldefined(rel)
    assert wd.ok and wd.checked == 12


def test_hj_modeling_zeta_concatenates_blocks():
    v = ("V", (1, 2))
    l_prime, rel = hj_modeling(v, 1, ((3, 2),))
    assert l_prime == 3
    h = Morph(rel.d3, rel.d3, ((1, 2, 2),))
    out = rel.zeta(Morph(rel.d1, rel.d3, h.data))
    assert out == Morph(v, ("L", 3), ("F", (1, 2, 2)))


def test_hj_modeling_validations():
    with pytest.raises(ValueError):
        hj_modeling(("L", 2), 2, ((3, 2), (3, 2)))
    with pytest.raises(ValueError):
        hj_modeling(("V", (1, 2)), 2, ((3, 2), (3, 2)), k0=2)
    with pytest.raises(ValueError):
        hj_modeling(("V", (1, 2)), 0, ())
    with pytest.raises(ValueError):
        hj_modeling(("V", (1, 2)), 2, ((2, 2), (3, 2)))
    with pytest.raises(ValueError):
        hj_modeling(("V", (1, 2)), 2, ((3, 2),))
    with pytest.raises(ValueError):
        hj_modeling(("V", (1, 2)), 2, ((3, 1), (3, 2)))


def test_hj_witness_small_dimension():
    m, trace = hj_witness(1, 1, 2)
    assert m == 6 and trace.length == 1
    st = trace.stages[0]
    assert st.a == ("V", (1, 2)) and st.b == ("L", 1)
    assert st.witness == ("L", 6)
    assert st.note["welldefined_via"] == "zeta-identity"
    with pytest.raises(ValueError):
        hj_witness(0, 1, 2)


# ---------------------------------------------------------------------------
# trees end to end


def test_tree_oracle_regrows_deepest_level():
    trunc = tree_truncation()

    def pr(kvec, pvec, rr):
        return product_ramsey_numbers(kvec, pvec, rr)[0]

    inst = FpInstance((1, 0), (2, 0, 0), (Morph((0,), (0,), (0,)),), 2)
    c, f_prime, g_prime = tree_fp_witness(inst, pr, trunc)
    assert c == star(6)
    assert f_prime == Morph((0,), (0,), (0,))
    assert g_prime == Morph((0,), (0,), (0,))


def test_fouche_single_stage():
    v, trace = fouche_witness((1, 0), (2, 0, 0), 2)
    assert v == star(6)
    assert trace is not None and trace.length == 1
    assert trace.stages[0].witness == star(6)
    res = check_p_witness(tree_truncation(), (1, 0), (2, 0, 0), v, 2)
    assert res.ok and res.exhaustive


def test_fouche_degenerate_inputs():
    assert fouche_witness((1, 0), (1, 1, 0), 2) == ((1, 1, 0), None)
    assert fouche_witness((0,), (3, 0, 0, 0), 2) == ((3, 0, 0, 0), None)
    with pytest.raises(ValueError):
        fouche_witness((1, 0), (2, 0, 0), 0)
