"""
自由メタアーベル群の記号計算のテスト
"""
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyaut.errors import NotDerived, RankMismatch, UnknownClaim
from polyaut.laurent import LaurentPoly
from polyaut.metabelian import (
    FMElement,
    collection_commutator,
    commutator_generator,
    decompose_derived,
    derived_to_module,
    fm_commutator,
    fm_conjugate,
    fm_deserialize,
    fm_generators,
    fm_identity,
    fm_inv,
    fm_mul,
    fm_pow,
    fm_serialize,
    format_word,
    is_derived,
    module_to_derived,
    retract_generator,
    satisfies_membership,
    word_element,
)
from polyaut.symbolic_checks import SYMBOLIC_SUITES, resolve_suites, run_symbolic_suites


def words(rank: int, max_size: int = 6):
    letters = st.tuples(st.integers(0, rank - 1), st.sampled_from([-1, 1]))
    return st.lists(letters, max_size=max_size).map(lambda w: word_element(rank, w))


laurent2 = st.lists(
    st.tuples(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(-4, 4)),
    max_size=5,
).map(lambda terms: LaurentPoly(2, terms))


class TestGroupLaws:
    @given(words(2), words(2))
    def test_membership_rank2(self, x, y):
        for e in (x, fm_mul(x, y), fm_inv(x), fm_commutator(x, y)):
            assert satisfies_membership(e)

    @given(words(3), words(3))
    def test_membership_rank3(self, x, y):
        assert satisfies_membership(fm_mul(x, y))
        assert satisfies_membership(fm_commutator(x, y))

    def test_membership_rejects_bogus_element(self):
        zero = LaurentPoly.zero(2)
        assert not satisfies_membership(FMElement(2, (1, 0), [zero, zero]))

    @given(words(2), words(2), words(2))
    def test_associativity_and_inverse(self, x, y, z):
        assert fm_mul(fm_mul(x, y), z) == fm_mul(x, fm_mul(y, z))
        assert fm_mul(x, fm_inv(x)).is_identity
        assert (x * ~x) == fm_identity(2)

    @given(words(3, 4), words(3, 4), words(3, 4), words(3, 4))
    def test_metabelian_law(self, u, v, x, y):
        assert fm_commutator(fm_commutator(u, v), fm_commutator(x, y)).is_identity

    @given(words(2), words(2), words(2), words(2))
    def test_derived_commutators_symmetric(self, u, v, x, y):
        t = fm_commutator(u, v)
        assert fm_commutator(t, x, y) == fm_commutator(t, y, x)

    def test_powers(self):
        a, b = fm_generators(2)
        assert fm_pow(a, 3) == a * a * a
        assert fm_pow(a, -2) == ~a * ~a
        assert fm_pow(a, 0).is_identity
        c = commutator_generator()
        assert c ** 3 == c * c * c

    @pytest.mark.parametrize("k", [5, 13, -13, 64])
    def test_powers_outside_derived(self, k):
        a, b = fm_generators(2)
        g = a * b * ~a * b
        expected = fm_identity(2)
        for _ in range(abs(k)):
            expected = expected * (g if k > 0 else ~g)
        assert fm_pow(g, k) == expected

    def test_large_exponent(self):
        a, _ = fm_generators(2)
        big = fm_pow(a, 100_000)
        assert big.tvec == (100_000, 0)
        assert big == fm_pow(a, 50_000) * fm_pow(a, 50_000)
        assert (big * fm_pow(a, -100_000)).is_identity

    def test_immutable(self):
        a, _ = fm_generators(2)
        with pytest.raises(AttributeError):
            a.tvec = (0, 0)

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            fm_mul(fm_generators(2)[0], fm_generators(3)[0])


class TestDerivedModule:
    def test_commutator_generator(self):
        """[a, b] = (1, (y - 1, 1 - x))"""
        c = commutator_generator()
        x = LaurentPoly.variable(2, 0)
        y = LaurentPoly.variable(2, 1)
        assert c.tvec == (0, 0)
        assert c.fringe == (y - 1, 1 - x)
        assert derived_to_module(c) == 1
        assert is_derived(c)
        assert not is_derived(fm_generators(2)[0])

    @given(laurent2)
    def test_module_round_trip(self, p):
        assert derived_to_module(module_to_derived(p)) == p

    @given(laurent2, words(2))
    def test_conjugation_acts_by_monomial(self, p, g):
        """g^-1 c(p) g = c(p m_g)"""
        conjugated = fm_conjugate(module_to_derived(p), g)
        assert derived_to_module(conjugated) == p * g.monomial

    @given(laurent2)
    def test_decomposition_reconstructs(self, p):
        decomposition = decompose_derived(p)
        assert decomposition.reconstruct() == p
        assert decomposition.alpha == p.augmentation()

    def test_not_derived(self):
        a, _ = fm_generators(2)
        with pytest.raises(NotDerived):
            derived_to_module(a)

    @pytest.mark.parametrize("alpha", range(-3, 4))
    @pytest.mark.parametrize("beta", range(-3, 4))
    def test_collection_commutator(self, alpha, beta):
        a, b = fm_generators(2)
        assert collection_commutator(alpha, beta) == fm_commutator(fm_pow(a, alpha), fm_pow(b, beta))


class TestRetraction:
    def test_generators(self):
        a3, b3, c3 = fm_generators(3)
        a2, b2 = fm_generators(2)
        assert retract_generator(a3, 2) == a2
        assert retract_generator(b3, 2) == b2
        assert retract_generator(c3, 2).is_identity

    def test_commutator_survives(self):
        a, b, _ = fm_generators(3)
        assert retract_generator(fm_commutator(a, b), 2) == commutator_generator()

    @given(words(3), words(3))
    def test_homomorphism(self, x, y):
        assert retract_generator(fm_mul(x, y), 2) == fm_mul(retract_generator(x, 2), retract_generator(y, 2))

    def test_requires_rank3(self):
        with pytest.raises(RankMismatch):
            retract_generator(fm_generators(2)[0], 1)


class TestSerialization:
    @given(words(3))
    def test_json_round_trip(self, e):
        assert fm_deserialize(fm_serialize(e)) == e

    def test_format_word(self):
        assert format_word([(0, 1), (0, 1), (1, -1)]) == "a^2 b^-1"
        assert format_word([(0, 1), (0, -1)]) == "1"
        assert format_word([]) == "1"


class TestSymbolicSuites:
    def test_resolve(self):
        assert resolve_suites("all") == list(SYMBOLIC_SUITES)
        assert resolve_suites("fm-collection") == ["fm-collection"]
        with pytest.raises(UnknownClaim):
            resolve_suites("fm-nothing")

    def test_all_suites_pass(self, config):
        reports = run_symbolic_suites(config)
        failed = [(r.claim, r.witnesses) for r in reports if r.failed]
        assert not failed
        assert {r.claim for r in reports} == set(SYMBOLIC_SUITES)

    def test_deterministic(self, config):
        first = [r.model_dump() for r in run_symbolic_suites(config, "fm-membership,fm-prop-3.1")]
        second = [r.model_dump() for r in run_symbolic_suites(config, "fm-membership,fm-prop-3.1")]
        assert first == second
