"""
多項式関数・自己同型群・P0(G), P(G) のテスト
"""
import numpy as np
import pytest

from polyaut.errors import ClosureBudgetExceeded, ConjugatesDoNotCommute, SearchBudgetExceeded
from polyaut.polynomial import (
    DEFAULT_CLOSURE_BUDGET,
    AutomorphismSet,
    GroupFunction,
    PolynomialForm,
    automorphism_group,
    commuting_conjugates,
    conjugation_function,
    direct_compose,
    eval_poly_form,
    exponent_sum,
    function_chain,
    generate_P,
    ia_automorphisms,
    inner_automorphisms,
    is_power_map,
    lemma_2_1_compose,
    poly_form_function,
    polynomial_automorphisms,
    polynomial_function_closure,
    random_poly_form,
)


class TestPolynomialForm:
    def test_eval_matches_vectorised(self, group):
        G = group("S3")
        form = PolynomialForm.of([(1, 2), (3, -1), (0, 1)])
        f = poly_form_function(G, form)
        for x in G.elements:
            assert f(x) == eval_poly_form(G, form, x)

    def test_empty_form_is_constant(self, group):
        G = group("D8")
        f = poly_form_function(G, PolynomialForm())
        assert np.all(f.image == G.id)
        assert PolynomialForm().describe() == "1"

    def test_exponent_sum(self):
        form = PolynomialForm.of([(0, 3), (1, -2), (2, 1)])
        assert form.exponent_sum == 2
        assert exponent_sum(form) == 2
        assert len(form) == 3

    def test_random_form_hits_exponent_sum(self, group):
        G = group("Q8")
        rng = np.random.default_rng(7)
        for target in (1, -1, 0):
            for _ in range(20):
                form = random_poly_form(G, rng, 3, 3, exponent_sum=target)
                assert form.exponent_sum == target
                assert 1 <= len(form) <= 3


class TestGroupFunction:
    def test_compose_convention(self, group):
        """(f∘g)(x) = f(g(x))"""
        G = group("S3")
        f = conjugation_function(G, 1)
        g = conjugation_function(G, 3)
        h = f.compose(g)
        for x in G.elements:
            assert h(x) == f(g(x))

    def test_inverse(self, group):
        G = group("S3")
        f = GroupFunction(G, G.conjugation_map(4))
        assert f.compose(f.inverse()) == GroupFunction.identity(G)
        with pytest.raises(ValueError):
            GroupFunction(G, np.zeros(6, dtype=int)).inverse()

    def test_power_maps(self, group):
        G = group("C6")
        assert is_power_map(GroupFunction(G, G.inv))
        assert GroupFunction(G, G.power_map(5)).is_automorphism
        assert not GroupFunction(G, G.power_map(2)).is_bijective


class TestAutomorphisms:
    @pytest.mark.parametrize("name, order", [
        ("C1", 1), ("C5", 4), ("C6", 2), ("C2xC2", 6), ("S3", 6), ("D8", 8), ("Q8", 24), ("A4", 24),
    ])
    def test_automorphism_group_order(self, group, name, order):
        A = automorphism_group(group(name))
        assert len(A) == order
        assert A.maps[0] == GroupFunction.identity(group(name))
        assert A.is_group

    @pytest.mark.parametrize("name, order", [("S3", 6), ("D8", 4), ("Q8", 4), ("C5", 1), ("Heis27", 9)])
    def test_inner_order(self, group, name, order):
        assert len(inner_automorphisms(group(name))) == order

    def test_search_budget(self, group):
        with pytest.raises(SearchBudgetExceeded):
            automorphism_group(group("S4"), budget=10)

    def test_sorted_and_deduplicated(self, group):
        G = group("S3")
        maps = [G.conjugation_map(v) for v in G.elements] * 2
        I = AutomorphismSet(G, maps, name="I")
        assert len(I) == 6
        images = [tuple(f.image) for f in I]
        assert images == sorted(images)

    def test_composition_group_indices(self, group):
        G = group("D8")
        A = automorphism_group(G)
        AG = A.composition_group
        for i, f in enumerate(A.maps):
            for j, g in enumerate(A.maps):
                assert A.maps[AG.mul[i, j]] == f.compose(g)

    def test_ia_automorphisms(self, group):
        G = group("D8")
        A = automorphism_group(G)
        IA = ia_automorphisms(G, A)
        assert inner_automorphisms(G).issubset(IA)
        assert IA.is_group


class TestClosure:
    @pytest.mark.parametrize("n", [1, 2, 5, 6, 12])
    def test_cyclic_closure_is_power_maps(self, group, n):
        G = group(f"C{n}")
        closure = polynomial_function_closure(G)
        assert len(closure) == n
        assert all(is_power_map(f) for f in closure)
        assert function_chain(G).size() == n

    @pytest.mark.parametrize("name", ["C2xC2", "S3", "D8", "Q8"])
    def test_chain_matches_explicit(self, group, name):
        G = group(name)
        closure = polynomial_function_closure(G)
        chain = function_chain(G)
        assert chain.size() == len(closure)
        assert all(chain.contains(f) for f in closure)
        assert chain.functions() == closure

    @pytest.mark.parametrize("name", ["S3", "D8"])
    def test_closed_under_pointwise_product(self, group, name):
        G = group(name)
        closure = polynomial_function_closure(G)
        members = set(closure)
        rng = np.random.default_rng(7)
        for i, j in rng.integers(0, len(closure), size=(100, 2)):
            product = closure[i].pointwise(closure[j])
            assert product in members
            assert product(G.id) == G.id

    def test_chain_rejects_non_members(self, group):
        G = group("S3")
        closure = set(polynomial_function_closure(G))
        chain = function_chain(G)
        rng = np.random.default_rng(3)
        for _ in range(50):
            image = rng.integers(0, G.order, size=G.order)
            image[G.id] = G.id
            f = GroupFunction(G, image)
            assert chain.contains(f) == (f in closure)

    def test_closure_budget(self, group):
        with pytest.raises(ClosureBudgetExceeded) as info:
            polynomial_function_closure(group("S3"), budget=5)
        assert info.value.partial_size > 5

    def test_chain_scales_past_budget(self, group):
        """F20 は列挙すると予算を超えるが篩の表なら扱える"""
        G = group("F20")
        chain = function_chain(G)
        assert chain.size() == 312_500
        assert chain.size() > DEFAULT_CLOSURE_BUDGET
        assert chain.entries <= (G.order - 1) ** 2

    @pytest.mark.slow
    def test_explicit_closure_over_budget(self, group):
        with pytest.raises(ClosureBudgetExceeded):
            polynomial_function_closure(group("F20"))


class TestPolynomialAutomorphisms:
    @pytest.mark.parametrize("name", ["C5", "C2xC2", "S3", "D8", "Q8"])
    def test_modes_agree(self, group, name):
        G = group(name)
        chain = polynomial_automorphisms(G, mode="chain")
        explicit = polynomial_automorphisms(G, mode="explicit")
        assert chain.same_set(explicit)

    def test_abelian_groups_only_power_maps(self, group):
        assert len(polynomial_automorphisms(group("C5"))) == 4
        assert len(polynomial_automorphisms(group("C2xC2"))) == 1

    def test_contains_inner(self, group):
        for name in ("S3", "D8", "Q8", "A4"):
            G = group(name)
            P0 = polynomial_automorphisms(G)
            assert inner_automorphisms(G).issubset(P0)
            assert all(f.fixes_identity for f in P0)

    def test_generated_equals_p0(self, group):
        for name in ("S3", "D8", "Q8", "D16"):
            G = group(name)
            P0 = polynomial_automorphisms(G)
            assert generate_P(G, P0).same_set(P0)

    def test_unknown_mode(self, group):
        with pytest.raises(ValueError):
            polynomial_automorphisms(group("C2"), mode="lazy")


class TestCompositionFormula:
    def test_formula_matches_direct(self, group):
        G = group("D8")
        rng = np.random.default_rng(11)
        eligible = [t for t in G.elements if commuting_conjugates(G, t)]
        assert eligible
        for _ in range(100):
            f = random_poly_form(G, rng, 3, 3)
            g = random_poly_form(G, rng, 3, 3)
            t = eligible[int(rng.integers(len(eligible)))]
            assert lemma_2_1_compose(G, f, g, t) == direct_compose(G, f, g, t)

    def test_requires_commuting_conjugates(self, group):
        G = group("S3")
        involution = next(x for x in G.elements if G.element_orders[x] == 2)
        assert not commuting_conjugates(G, involution)
        form = PolynomialForm.of([(0, 1)])
        with pytest.raises(ConjugatesDoNotCommute) as info:
            lemma_2_1_compose(G, form, form, involution)
        assert info.value.t == involution


# 閉包サイズの回帰値 (カタログ全体)
CLOSURE_SIZES = [
    ("C2xC2", 2), ("C2xC4", 4), ("S3", 54), ("A4", 3072), ("D8", 16), ("D10", 250),
    ("D12", 54), ("D16", 128), ("Q8", 16), ("Heis27", 27), ("F20", 312_500),
]
S4_CLOSURE_SIZE = 927_712_935_936


class TestClosureOracles:
    @pytest.mark.parametrize("name, size", CLOSURE_SIZES + [
        pytest.param("S4", S4_CLOSURE_SIZE, marks=pytest.mark.slow),
    ])
    def test_chain_size(self, group, name, size):
        assert function_chain(group(name)).size() == size

    @pytest.mark.parametrize("name, size", [(n, s) for n, s in CLOSURE_SIZES if s <= DEFAULT_CLOSURE_BUDGET])
    def test_explicit_size(self, group, name, size):
        assert len(polynomial_function_closure(group(name))) == size

    @pytest.mark.parametrize("name, aut_order, p_order", [
        ("C2xC2", 6, 1), ("S3", 6, 6), ("D8", 8, 4), ("D16", 32, 16), ("Q8", 24, 4), ("Heis27", 432, 9),
    ])
    def test_automorphism_orders(self, group, name, aut_order, p_order):
        G = group(name)
        A = automorphism_group(G)
        P0 = polynomial_automorphisms(G, A)
        assert len(A) == aut_order
        assert len(generate_P(G, P0)) == p_order
