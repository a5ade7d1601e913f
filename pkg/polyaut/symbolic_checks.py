"""
自由メタアーベル群の記号計算の性質検査

各検査は ClaimReport (group は "M2" / "M3" / "M2,M3") を返す。
"""
import logging
import zlib
from typing import Callable, Dict, List, Sequence, Union

import numpy as np

from polyaut.config import RunConfig
from polyaut.endoform import IASpec, ia_roundtrip, rank3_counterexample
from polyaut.errors import UnknownClaim
from polyaut.laurent import LaurentPoly, geometric_sum
from polyaut.metabelian import (
    collection_commutator,
    decompose_derived,
    derived_to_module,
    fm_commutator,
    fm_generators,
    fm_identity,
    fm_inv,
    fm_mul,
    fm_pow,
    membership_defect,
    module_to_derived,
    random_element,
    random_laurent,
)
from polyaut.models import ClaimReport

logger = logging.getLogger(__name__)

RANKS = (2, 3)
MODULE_ROUNDTRIP_SAMPLES = 200
COLLECTION_RANGE = range(-3, 4)


def _report(suite: str, group: str, failures: List, computed: Dict) -> ClaimReport:
    passed = not failures
    return ClaimReport(
        group=group,
        claim=suite,
        passed=passed,
        status="pass" if passed else "fail",
        computed=computed,
        witnesses=failures[:5],
    )


def _membership(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    failures = []
    for rank in RANKS:
        for _ in range(config.fm_samples):
            x = random_element(rank, rng, config.fm_word_length)
            y = random_element(rank, rng, config.fm_word_length)
            for e in (x, fm_mul(x, y), fm_inv(x), fm_commutator(x, y)):
                defect = membership_defect(e)
                if not defect.is_zero:
                    failures.append({"element": str(e), "defect": str(defect)})
    return _report("fm-membership", "M2,M3", failures, {"samples_per_rank": config.fm_samples})


def _associativity(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    failures = []
    for rank in RANKS:
        identity = fm_identity(rank)
        for _ in range(config.fm_samples):
            x, y, z = (random_element(rank, rng, config.fm_word_length) for _ in range(3))
            if fm_mul(fm_mul(x, y), z) != fm_mul(x, fm_mul(y, z)):
                failures.append({"kind": "associativity", "x": str(x), "y": str(y), "z": str(z)})
            if fm_mul(x, fm_inv(x)) != identity or fm_mul(fm_inv(x), x) != identity:
                failures.append({"kind": "inverse", "x": str(x)})
    return _report("fm-associativity", "M2,M3", failures, {"samples_per_rank": config.fm_samples})


def _metabelian_law(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    failures = []
    for rank in RANKS:
        for _ in range(config.fm_samples):
            g = [random_element(rank, rng, config.fm_word_length) for _ in range(4)]
            value = fm_commutator(fm_commutator(g[0], g[1]), fm_commutator(g[2], g[3]))
            if not value.is_identity:
                failures.append({"elements": [str(e) for e in g]})
    return _report("fm-metabelian-law", "M2,M3", failures, {"samples_per_rank": config.fm_samples})


def _lemma_2_2(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    """導来部分群の t について [t, x, y] = [t, y, x]"""
    failures = []
    for rank in RANKS:
        for _ in range(config.fm_samples):
            u, v, x, y = (random_element(rank, rng, config.fm_word_length) for _ in range(4))
            t = fm_commutator(u, v)
            if fm_commutator(t, x, y) != fm_commutator(t, y, x):
                failures.append({"t": str(t), "x": str(x), "y": str(y)})
    return _report("fm-lemma-2.2", "M2,M3", failures, {"samples_per_rank": config.fm_samples})


def _collection(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    """[a^alpha, b^beta] = c(S_x(alpha) S_y(beta))"""
    a, b = fm_generators(2)
    failures = []
    for alpha in COLLECTION_RANGE:
        for beta in COLLECTION_RANGE:
            direct = fm_commutator(fm_pow(a, alpha), fm_pow(b, beta))
            if direct != collection_commutator(alpha, beta):
                failures.append({"alpha": alpha, "beta": beta, "direct": str(direct)})
    computed = {"range": [COLLECTION_RANGE.start, COLLECTION_RANGE.stop - 1], "sign": 1}
    return _report("fm-collection", "M2", failures, computed)


def _module_roundtrip(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    failures = []
    samples = min(config.fm_samples, MODULE_ROUNDTRIP_SAMPLES)
    a, b = fm_generators(2)
    anchors = {
        "[a,b]": (fm_commutator(a, b), LaurentPoly.one(2)),
        "[a,b]^a": (fm_mul(fm_mul(fm_inv(a), fm_commutator(a, b)), a), LaurentPoly.variable(2, 0)),
    }
    for name, (element, expected) in anchors.items():
        actual = derived_to_module(element)
        if actual != expected:
            failures.append({"anchor": name, "expected": str(expected), "actual": str(actual)})
    for _ in range(samples):
        p = random_laurent(2, rng, support=6, coeff_bound=5)
        if derived_to_module(module_to_derived(p)) != p:
            failures.append({"p": str(p)})
    return _report("fm-module-roundtrip", "M2", failures, {"samples": samples})


def _decomposition(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    failures = []
    samples = min(config.fm_samples, MODULE_ROUNDTRIP_SAMPLES)
    for _ in range(samples):
        p = random_laurent(2, rng, support=6, coeff_bound=5)
        decomposition = decompose_derived(p)
        if decomposition.reconstruct() != p or decomposition.alpha != p.augmentation():
            failures.append({"p": str(p)})
    x = LaurentPoly.variable(2, 0)
    for alpha in COLLECTION_RANGE:
        if geometric_sum(0, alpha) * (x - 1) != LaurentPoly.variable(2, 0, alpha) - 1:
            failures.append({"geometric_sum": alpha})
    return _report("fm-decomposition", "M2", failures, {"samples": samples})


def _prop_3_1(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    failures = []
    for _ in range(config.prop31_samples):
        spec = IASpec(
            module_to_derived(random_laurent(2, rng, support=6, coeff_bound=5)),
            module_to_derived(random_laurent(2, rng, support=6, coeff_bound=5)),
        )
        result = ia_roundtrip(spec, rng, config.hom_pairs, config.fm_word_length)
        if not result.passed:
            failures.append({
                "v": str(spec.v),
                "w": str(spec.w),
                "phi_a": result.phi_a,
                "phi_b": result.phi_b,
                "polyform_agrees": result.polyform_agrees,
                "homomorphism_failures": result.homomorphism_failures,
            })
    computed = {"samples": config.prop31_samples, "hom_pairs": config.hom_pairs}
    return _report("fm-prop-3.1", "M2", failures, computed)


def _rank3(config: RunConfig, rng: np.random.Generator) -> ClaimReport:
    return rank3_counterexample(seed=config.seed)


SYMBOLIC_SUITES: Dict[str, Callable[[RunConfig, np.random.Generator], ClaimReport]] = {
    "fm-membership": _membership,
    "fm-associativity": _associativity,
    "fm-metabelian-law": _metabelian_law,
    "fm-lemma-2.2": _lemma_2_2,
    "fm-collection": _collection,
    "fm-module-roundtrip": _module_roundtrip,
    "fm-decomposition": _decomposition,
    "fm-prop-3.1": _prop_3_1,
    "rank3-counterexample": _rank3,
}


def resolve_suites(suites: Union[str, Sequence[str]]) -> List[str]:
    if isinstance(suites, str):
        suites = [s for s in suites.split(",") if s.strip()]
    requested = {s.strip().lower() for s in suites}
    if "all" in requested:
        return list(SYMBOLIC_SUITES)
    for suite in requested:
        if suite not in SYMBOLIC_SUITES:
            raise UnknownClaim(suite)
    return [s for s in SYMBOLIC_SUITES if s in requested]


def run_symbolic_suite(suite: str, config: RunConfig) -> ClaimReport:
    if suite not in SYMBOLIC_SUITES:
        raise UnknownClaim(suite)
    rng = np.random.default_rng([config.seed, zlib.crc32(suite.encode("utf-8"))])
    report = SYMBOLIC_SUITES[suite](config, rng)
    logger.info(f"{suite}: {report.status}")
    return report


def run_symbolic_suites(config: RunConfig, suites: Union[str, Sequence[str]] = "all") -> List[ClaimReport]:
    return [run_symbolic_suite(suite, config) for suite in resolve_suites(suites)]
