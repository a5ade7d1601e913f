"""
サブコマンドの本体

各関数は計算結果 (pydantic モデルまたはテキスト) を返し、出力と終了コードは main.py が扱う。
"""
import logging
import zlib
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from polyaut import __version__
from polyaut.analysis import GroupAnalysis, group_analysis
from polyaut.catalog import (
    CATALOG,
    canonical_name,
    catalog_group,
    catalog_names,
    dump_group,
    load_group_file,
    parse_group_text,
    resolve_group,
    save_group_file,
)
from polyaut.claims import resolve_claims, verify_claims
from polyaut.config import RunConfig
from polyaut.endoform import IASpec, ia_roundtrip, rank3_counterexample
from polyaut.errors import PolyautError, UnknownGroup
from polyaut.groups import FiniteGroup, is_normal, subgroup_closure
from polyaut.laurent import LaurentPoly
from polyaut.metabelian import DerivedDecomposition, FMElement, fm_identity, format_monomial_preimage
from polyaut.models import CatalogRow, ClaimReport, ClosureSummary, GroupSummary, VerificationReport
from polyaut.session_manager import get_session_manager, get_system_info, resolve_workers
from polyaut.symbolic_checks import run_symbolic_suites
from polyaut.words import parse_word

logger = logging.getLogger(__name__)


def emit(text: str, output: str = "") -> None:
    """出力先が指定されていればファイルへ、なければ標準出力へ書く"""
    if not text.endswith("\n"):
        text += "\n"
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"出力を書き込みました: {path}")
    else:
        print(text, end="")


def resolve_group_names(spec: str) -> List[str]:
    """"all" はカタログ全体、カンマ区切りで複数指定できる"""
    names = [s.strip() for s in spec.split(",") if s.strip()]
    if not names:
        raise UnknownGroup(spec)
    if any(n.lower() == "all" for n in names):
        return catalog_names()
    resolved = []
    for name in names:
        canonical = canonical_name(name)
        if canonical is None and not Path(name).is_file():
            raise UnknownGroup(name)
        resolved.append(canonical or name)
    return resolved


def _analysis(group: str, config: RunConfig) -> GroupAnalysis:
    return group_analysis(resolve_group(group, order_cap=config.order_cap), config)


def _build_report(results: List[ClaimReport], config: RunConfig) -> VerificationReport:
    return VerificationReport(
        tool_version=__version__,
        seed=config.seed,
        config=config.echo(),
        results=results,
        passed=not any(r.failed for r in results),
    )


# ----- verify ----- #

def cmd_verify(group: str, claims: str | Sequence[str], config: RunConfig) -> VerificationReport:
    """群 (カンマ区切り・"all" 可) について主張を検証する"""
    groups = resolve_group_names(group)
    claim_ids = resolve_claims(claims)
    workers = resolve_workers(config.workers)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(f"ホスト情報: {get_system_info()}")
    logger.info(f"検証を開始します: 群 {len(groups)} 個, 主張 {len(claim_ids)} 個, ワーカー {workers}")

    if workers > 0:
        results = get_session_manager().run_verification(groups, claim_ids, config, workers)
    else:
        results = []
        for name in groups:
            results.extend(verify_claims(_analysis(name, config), claim_ids))

    report = _build_report(results, config)
    counts = {status: sum(r.status == status for r in results) for status in ("pass", "fail", "skipped")}
    logger.info(f"検証が完了しました: {counts}")
    return report


# ----- autgroup / closure ----- #

def cmd_autgroup(group: str, config: RunConfig) -> GroupSummary:
    an = _analysis(group, config)
    G = an.group
    return GroupSummary(
        group=G.name,
        order=G.order,
        gens=[int(g) for g in G.gens],
        center_order=an.center.order,
        derived_length=an.derived_length,
        metabelian=an.is_metabelian,
        nilpotency_class=an.nilpotency_class,
        aut_order=len(an.automorphisms),
        inner_order=len(an.inner),
        p0_order=len(an.polynomial),
        p_order=len(an.generated),
        p_nilpotency_class=an.p_nilpotency_class,
        p_derived_length=an.p_derived_length,
        closure_size=an.closure_size,
    )


def cmd_closure(group: str, config: RunConfig) -> ClosureSummary:
    an = _analysis(group, config)
    mode = config.closure_mode
    return ClosureSummary(
        group=an.group.name,
        order=an.group.order,
        mode=mode,
        closure_size=an.closure_size,
        chain_entries=an.chain.entries if mode == "chain" else None,
        p0_order=len(an.polynomial),
    )


# ----- ia2poly ----- #

def _decomposition_lines(name: str, symbols: Tuple[str, str], decomposition: DerivedDecomposition) -> List[str]:
    """v = [a,b]^alpha prod [a,b,v_i]^lambda_i の係数を並べる"""
    constant, weight = symbols
    lines = [f"{name} = c({decomposition.reconstruct()})", f"  {constant} = {decomposition.alpha}"]
    for i, (exps, coeff) in enumerate(decomposition.terms, start=1):
        lines.append(
            f"  {weight}_{i} = {coeff}, {name}_{i} = {format_monomial_preimage(exps)}"
            f"  (monomial {LaurentPoly.monomial(2, exps)})"
        )
    return lines


def _status(ok: bool) -> str:
    return "ok" if ok else "FAILED"


def _flag(value: bool) -> str:
    return "true" if value else "false"


def cmd_ia2poly(v_word: str, w_word: str, config: RunConfig) -> Tuple[str, bool]:
    """f(a) = a v, f(b) = b w を x [x, u]^h の積と共役冪の積に書き直して確かめる"""
    spec = IASpec(parse_word(v_word, 2), parse_word(w_word, 2))
    rng = np.random.default_rng([config.seed, zlib.crc32(b"ia2poly")])
    result = ia_roundtrip(spec, rng, config.hom_pairs, config.fm_word_length)
    construction = result.construction

    labels: Dict[FMElement, str] = {fm_identity(2): "1"}
    for factor in construction.form:
        labels.setdefault(factor.conjugator, factor.label)

    lines = [
        f"v = {v_word or '1'}",
        f"w = {w_word or '1'}",
        "",
        *_decomposition_lines("v", ("alpha", "lambda"), construction.v_decomposition),
        *_decomposition_lines("w", ("beta", "mu"), construction.w_decomposition),
        "",
        "phi factors (conjugator, exponent):",
    ]
    if construction.form.factors:
        lines.extend(f"  ({f.label}, {f.eta})" for f in construction.form)
    else:
        lines.append("  (none)")
    lines += [
        f"phi(x) = {construction.form.describe()}",
        f"polynomial form: {result.polyform.describe(lambda v: labels.get(v, str(v)))}",
        f"exponent sum: {result.polyform.exponent_sum}",
        "",
        f"check phi(a) = a v: {_status(result.phi_a)}",
        f"check phi(b) = b w: {_status(result.phi_b)}",
        f"check polynomial form agrees on a, b: {_status(result.polyform_agrees)}",
        f"check homomorphism on {config.hom_pairs} random pairs: {_status(result.homomorphism_failures == 0)}",
    ]
    return "\n".join(lines), result.passed


# ----- demo-rank3 ----- #

def cmd_demo_rank3(config: RunConfig) -> Tuple[str, ClaimReport]:
    report = rank3_counterexample(seed=config.seed)
    c = report.computed
    lines = [
        "free metabelian group of rank 3, generators a, b, c",
        "f(a) = a, f(b) = b, f(c) = c [a,b]",
        "",
        f"ia_property={_flag(c['ia_property'])}",
        f"c^-1 f(c) = [a,b]: {_flag(c['offset_of_c_is_commutator'])}",
        f"retraction(c) = {c['retraction_of_c']}",
        f"retraction([a,b]) = {c['retraction_of_ab']}"
        + (" = 1" if c["retraction_of_ab_is_identity"] else " ≠ 1"),
        f"[a,b] in normal closure of c: {_flag(c['commutator_in_ncl_c'])}",
        "",
        f"products of conjugates of c retracting to 1: "
        f"{c['ncl_samples_retracting_to_identity']}/{c['ncl_samples']}",
        f"c^-1 F(c) retracting to 1 for sampled polynomial F: "
        f"{c['polynomial_samples_retracting_to_identity']}/{c['polynomial_samples']}",
        "",
        "for polynomial F, c^-1 F(c) lies in the normal closure of c, which the retraction kills;",
        "c^-1 f(c) = [a,b] survives the retraction, so f is not polynomial",
        f"result: {report.status}",
    ]
    return "\n".join(lines), report


# ----- catalog ----- #

def cmd_catalog_list(config: RunConfig) -> str:
    rows = []
    for name in catalog_names():
        an = GroupAnalysis(catalog_group(name, order_cap=config.order_cap), config)
        rows.append(CatalogRow(
            name=name,
            order=an.group.order,
            gens=" ".join(str(g) for g in an.group.gens),
            nilpotency_class=an.nilpotency_class,
            derived_length=an.derived_length,
            metabelian=an.is_metabelian,
            description=CATALOG[name].description,
        ).model_dump())
    df = pd.DataFrame(rows)
    # None は "-" で表示する
    df = df.astype(object).where(df.notna(), "-")
    return df.to_string(index=False)


def validate_group(G: FiniteGroup) -> List[str]:
    """群の基本的な性質と群ファイルの往復を確かめ、問題の一覧を返す"""
    problems = []
    if subgroup_closure(G, G.gens).order != G.order:
        problems.append(f"生成系 {list(G.gens)} が群全体を生成しません")
    an = GroupAnalysis(G)
    for series in (an.derived_series[0], an.lower_central_series[0]):
        for term in series.terms:
            if G.order % term.order:
                problems.append(f"{series.kind} 列の項の位数 {term.order} が {G.order} を割り切りません")
            if not is_normal(G, term)[0]:
                problems.append(f"{series.kind} 列の項が正規ではありません")
    if an.nilpotency_class is not None and an.derived_length is not None:
        if an.derived_length > an.nilpotency_class:
            problems.append("導来長が冪零類を超えます")
    text = dump_group(G)
    if dump_group(parse_group_text(text, order_cap=G.order)) != text:
        problems.append("群ファイルの往復が一致しません")
    return problems


def cmd_catalog_validate(files: Sequence[str], config: RunConfig) -> Tuple[str, bool]:
    """群ファイル (指定がなければ組み込みのカタログ全体) を検証する"""
    lines = []
    ok = True
    targets = list(files) or catalog_names()
    for target in targets:
        try:
            if files:
                G = load_group_file(target, order_cap=config.order_cap)
            else:
                G = catalog_group(target, order_cap=config.order_cap)
            problems = validate_group(G)
        except (PolyautError, OSError) as e:
            ok = False
            lines.append(f"NG {target}: {e}")
            continue
        if problems:
            ok = False
            lines.extend(f"NG {target}: {p}" for p in problems)
        else:
            lines.append(f"OK {target} (order {G.order})")
    return "\n".join(lines), ok


def cmd_catalog_export(directory: str, config: RunConfig) -> List[Path]:
    written = []
    for name in catalog_names():
        G = catalog_group(name, order_cap=config.order_cap)
        written.append(save_group_file(G, Path(directory) / f"{name}.grp"))
    logger.info(f"{len(written)} 個の群ファイルを書き出しました: {directory}")
    return written


# ----- fm-check ----- #

def cmd_fm_check(suites: str, config: RunConfig) -> VerificationReport:
    return _build_report(run_symbolic_suites(config, suites), config)
