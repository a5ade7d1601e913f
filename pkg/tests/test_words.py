"""
語の構文解析のテスト
"""
import pytest

from polyaut.errors import ParseError
from polyaut.metabelian import commutator_generator, fm_commutator, fm_generators, fm_inv, fm_pow
from polyaut.words import parse_tree, parse_word

a, b = fm_generators(2)


class TestParseWord:
    def test_large_exponent(self):
        assert parse_word("a^100000 b").tvec == (100_000, 1)

    def test_generators_and_inverses(self):
        assert parse_word("a") == a
        assert parse_word("B") == fm_inv(b)
        assert parse_word("a^-2") == fm_pow(a, -2)
        assert parse_word("a^0").is_identity

    def test_products(self):
        assert parse_word("ab") == a * b
        assert parse_word("a*b") == a * b
        assert parse_word("a b") == a * b
        assert parse_word("(ab)^2") == a * b * a * b
        assert parse_word("aA").is_identity

    def test_commutators(self):
        assert parse_word("[a,b]") == commutator_generator()
        assert parse_word("[a, b]") == fm_commutator(a, b)
        assert parse_word("[a,b,a]") == fm_commutator(a, b, a)
        assert parse_word("[[a,b],a]") == parse_word("[a,b,a]")
        assert parse_word("[a,b]^-1") == fm_inv(commutator_generator())

    def test_empty_is_identity(self):
        assert parse_tree("") is None
        assert parse_word("").is_identity
        assert parse_word("   ").is_identity

    def test_rank3(self):
        _, _, c = fm_generators(3)
        assert parse_word("c", 3) == c
        assert parse_word("C", 3) == fm_inv(c)
        assert parse_word("[a,b]", 3).rank == 3


class TestParseErrors:
    @pytest.mark.parametrize("text", ["a^", "[a]", "(a", "x", "a)", "a-1", "[a,]", "^2"])
    def test_rejects(self, text):
        with pytest.raises(ParseError) as info:
            parse_word(text)
        assert info.value.text == text

    def test_position(self):
        with pytest.raises(ParseError) as info:
            parse_word("ab x")
        assert info.value.position == 3

    def test_generator_outside_rank(self):
        with pytest.raises(ParseError) as info:
            parse_word("ac")
        assert info.value.text == "ac"
        assert "c" in str(info.value)
