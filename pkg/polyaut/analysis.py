"""
群ごとの計算結果のキャッシュ

A(G), I(G), P0(G), P(G) と各種の列を必要になった時点で一度だけ計算し、
複数の主張の検証で共有する。
"""
import logging
from functools import cached_property
from typing import Optional, Tuple

from polyaut.config import RunConfig
from polyaut.groups import FiniteGroup, Series, Subgroup, center, derived_series, derived_subgroup, lower_central_series
from polyaut.polynomial import (
    AutomorphismSet,
    FunctionChain,
    automorphism_group,
    function_chain,
    generate_P,
    ia_automorphisms,
    inner_automorphisms,
    polynomial_automorphisms,
    polynomial_function_closure,
)

logger = logging.getLogger(__name__)


class GroupAnalysis:
    def __init__(self, group: FiniteGroup, config: Optional[RunConfig] = None):
        self.group = group
        self.config = config or RunConfig()

    def __repr__(self) -> str:
        return f"GroupAnalysis(group={self.group.name!r})"

    # ----- 群そのもの ----- #

    @cached_property
    def center(self) -> Subgroup:
        return center(self.group)

    @cached_property
    def derived(self) -> Subgroup:
        return derived_subgroup(self.group)

    @cached_property
    def derived_series(self) -> Tuple[Series, Optional[int], bool]:
        return derived_series(self.group)

    @cached_property
    def lower_central_series(self) -> Tuple[Series, Optional[int]]:
        return lower_central_series(self.group)

    @property
    def derived_length(self) -> Optional[int]:
        return self.derived_series[1]

    @property
    def is_metabelian(self) -> bool:
        return self.derived_series[2]

    @property
    def nilpotency_class(self) -> Optional[int]:
        return self.lower_central_series[1]

    # ----- 自己同型 ----- #

    @cached_property
    def automorphisms(self) -> AutomorphismSet:
        A = automorphism_group(self.group, self.config.search_budget)
        logger.debug(f"{self.group.name}: |A(G)| = {len(A)}")
        return A

    @cached_property
    def inner(self) -> AutomorphismSet:
        return inner_automorphisms(self.group)

    @cached_property
    def ia(self) -> AutomorphismSet:
        return ia_automorphisms(self.group, self.automorphisms)

    @cached_property
    def chain(self) -> FunctionChain:
        return function_chain(self.group)

    @cached_property
    def closure_size(self) -> int:
        if self.config.closure_mode == "explicit":
            return len(polynomial_function_closure(self.group, self.config.closure_budget))
        return self.chain.size()

    @cached_property
    def polynomial(self) -> AutomorphismSet:
        mode = self.config.closure_mode
        P0 = polynomial_automorphisms(
            self.group,
            automorphisms=self.automorphisms if mode == "chain" else None,
            mode=mode,
            closure_budget=self.config.closure_budget,
            search_budget=self.config.search_budget,
            chain=self.chain if mode == "chain" else None,
        )
        logger.debug(f"{self.group.name}: |P0(G)| = {len(P0)}")
        return P0

    @cached_property
    def generated(self) -> AutomorphismSet:
        return generate_P(self.group, self.polynomial)

    # ----- P(G) の構造 ----- #

    @cached_property
    def p_group(self) -> FiniteGroup:
        return self.generated.composition_group

    @cached_property
    def p_derived_series(self) -> Tuple[Series, Optional[int], bool]:
        return derived_series(self.p_group)

    @cached_property
    def p_lower_central_series(self) -> Tuple[Series, Optional[int]]:
        return lower_central_series(self.p_group)

    @property
    def p_derived_length(self) -> Optional[int]:
        return self.p_derived_series[1]

    @property
    def p_nilpotency_class(self) -> Optional[int]:
        return self.p_lower_central_series[1]


def group_analysis(group: FiniteGroup, config: Optional[RunConfig] = None) -> GroupAnalysis:
    """群の解析を作る (各値は最初に参照されたときに計算される)"""
    an = GroupAnalysis(group, config)
    logger.debug(f"{group.name}: 解析を作成しました (位数 {group.order})")
    return an
