"""
主張の検証のテスト
"""
import pytest

from polyaut.analysis import group_analysis
from polyaut.claims import CLAIMS, check_inclusion_chain, resolve_claims, verify_claim, verify_claims
from polyaut.errors import UnknownClaim


class TestResolveClaims:
    def test_all(self):
        assert resolve_claims("all") == list(CLAIMS)
        assert len(CLAIMS) == 12

    def test_canonical_order(self):
        assert resolve_claims("chain, thm-1.1") == ["thm-1.1", "chain"]
        assert resolve_claims(["LEM-2.2", "cor-2.1"]) == ["cor-2.1", "lem-2.2"]

    def test_unknown(self):
        with pytest.raises(UnknownClaim):
            resolve_claims("thm-9.9")
        with pytest.raises(UnknownClaim):
            verify_claim(None, "thm-9.9")


class TestNilpotentClaims:
    def test_d16_class(self, analysis):
        """冪零類 3 の群で P(G) の冪零類は 2"""
        report = verify_claim(analysis("D16"), "thm-1.1")
        assert report.status == "pass"
        assert report.passed
        assert report.computed["nilpotency_class"] == 3
        assert report.computed["p_nilpotency_class"] == 2

    @pytest.mark.parametrize("name", ["D8", "Q8", "Heis27"])
    def test_class_two(self, analysis, name):
        report = verify_claim(analysis(name), "thm-1.1")
        assert report.status == "pass"
        assert report.computed["p_nilpotency_class"] == 1

    def test_not_nilpotent_is_skipped(self, analysis):
        report = verify_claim(analysis("S3"), "thm-1.1")
        assert report.status == "skipped"
        assert not report.passed
        assert report.reason

    @pytest.mark.parametrize("name", ["C4", "D8", "Q8", "Heis27"])
    def test_cor_2_1(self, analysis, name):
        report = verify_claim(analysis(name), "cor-2.1")
        assert report.status == "pass"
        assert report.computed["p_abelian"] is True

    def test_cor_2_1_requires_class_two(self, analysis):
        assert verify_claim(analysis("D16"), "cor-2.1").status == "skipped"

    @pytest.mark.parametrize("name", ["D8", "Q8", "C6"])
    def test_en_bijectivity(self, analysis, name):
        report = verify_claim(analysis(name), "en-bijectivity")
        assert report.status == "pass"
        assert report.witnesses == []

    def test_en_bijectivity_requires_nilpotent(self, analysis):
        assert verify_claim(analysis("S3"), "en-bijectivity").status == "skipped"


class TestMetabelianClaims:
    @pytest.mark.parametrize("name", ["S3", "D8", "A4", "D10", "D12", "F20"])
    def test_thm_1_2(self, analysis, name):
        report = verify_claim(analysis(name), "thm-1.2")
        assert report.status == "pass"
        assert report.computed["p_derived_length"] <= 2

    def test_s4_is_skipped(self, analysis):
        report = verify_claim(analysis("S4"), "thm-1.2")
        assert report.status == "skipped"
        assert "導来長 3" in report.reason

    @pytest.mark.parametrize("name", ["S3", "D8", "A4", "Q8"])
    def test_lem_2_2_and_2_3(self, analysis, name):
        an = analysis(name)
        assert verify_claim(an, "lem-2.2").status == "pass"
        assert verify_claim(an, "lem-2.3").status == "pass"

    @pytest.mark.parametrize("name", ["S3", "D8", "D10"])
    def test_prop_3_1_and_cor_3_1(self, analysis, name):
        an = analysis(name)
        report = verify_claim(an, "prop-3.1")
        assert report.status == "pass"
        assert report.computed["ia_order"] <= report.computed["p0_order"]
        assert verify_claim(an, "cor-3.1").status == "pass"


class TestStructuralClaims:
    @pytest.mark.parametrize("name", ["C1", "C2xC2", "S3", "D8", "A4"])
    def test_inclusion_chain(self, analysis, name):
        passed, computed, witnesses = check_inclusion_chain(analysis(name))
        assert passed, witnesses
        assert computed["inner_order"] <= computed["p0_order"] <= computed["aut_order"]

    def test_chain_claim(self, analysis):
        report = verify_claim(analysis("D8"), "chain")
        assert report.status == "pass"
        assert report.computed["center_order"] == 2
        assert report.computed["inner_order"] == 4

    def test_lem_2_1(self, analysis):
        for name in ("S3", "D8"):
            report = verify_claim(analysis(name), "lem-2.1")
            assert report.status == "pass"
            assert report.computed["samples"] == 20

    def test_abelian_power(self, analysis):
        assert verify_claim(analysis("C2xC4"), "abelian-power").status == "pass"
        assert verify_claim(analysis("S3"), "abelian-power").status == "skipped"

    def test_converse_nilpotent(self, analysis):
        for name in ("S3", "D8", "A4"):
            assert verify_claim(analysis(name), "converse-nilpotent").status == "pass"


class TestReports:
    def test_trivial_group_all(self, analysis):
        reports = verify_claims(analysis("C1"), "all")
        assert [r.claim for r in reports] == list(CLAIMS)
        assert not any(r.failed for r in reports)

    def test_deterministic(self, analysis):
        first = [r.model_dump() for r in verify_claims(analysis("D8"), "lem-2.1,en-bijectivity")]
        second = [r.model_dump() for r in verify_claims(analysis("D8"), "lem-2.1,en-bijectivity")]
        assert first == second

    def test_timing_off_by_default(self, analysis):
        report = verify_claim(analysis("S3"), "chain")
        assert report.elapsed_ms == 0

    def test_timing_on(self, group, config):
        timed = config.model_copy(update={"record_timing": True})
        report = verify_claim(group("S3"), "chain", timed)
        assert report.elapsed_ms >= 0

    def test_pass_alias(self, analysis):
        data = verify_claim(analysis("S3"), "chain").model_dump(by_alias=True)
        assert list(data)[:4] == ["group", "claim", "pass", "status"]

    @pytest.mark.slow
    def test_whole_catalog(self, analysis):
        """カタログ全体で失敗する主張がない"""
        from polyaut.catalog import catalog_names
        for name in catalog_names():
            reports = verify_claims(analysis(name), "all")
            failed = [(r.group, r.claim, r.witnesses) for r in reports if r.failed]
            assert not failed


class TestAnalysis:
    def test_lazy_cache(self, group, config):
        an = group_analysis(group("D8"), config)
        assert "automorphisms" not in an.__dict__
        assert len(an.automorphisms) == 8
        assert an.automorphisms is an.automorphisms
        assert len(an.inner) == 4
        assert len(an.polynomial) == len(an.generated) == 4
        assert an.p_nilpotency_class == 1
        assert an.derived_length == 2
