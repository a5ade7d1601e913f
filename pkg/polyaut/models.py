from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

# ----- 検証レポート ----- #

class ClaimReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    group: str
    claim: str
    passed: bool = Field(alias="pass")
    status: Literal["pass", "fail", "skipped"]
    reason: Optional[str] = None
    computed: Dict[str, Any] = Field(default_factory=dict)
    witnesses: List[Any] = Field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def failed(self) -> bool:
        return self.status == "fail"


class VerificationReport(BaseModel):
    tool_version: str
    seed: int
    config: Dict[str, Any]
    results: List[ClaimReport]
    passed: bool

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


# ----- 群の要約 ----- #

class GroupSummary(BaseModel):
    group: str
    order: int
    gens: List[int]
    center_order: int
    derived_length: Optional[int]
    metabelian: bool
    nilpotency_class: Optional[int]
    aut_order: int
    inner_order: int
    p0_order: int
    p_order: int
    p_nilpotency_class: Optional[int]
    p_derived_length: Optional[int]
    closure_size: int


class ClosureSummary(BaseModel):
    group: str
    order: int
    mode: Literal["chain", "explicit"]
    closure_size: int
    chain_entries: Optional[int] = None
    p0_order: int


class CatalogRow(BaseModel):
    name: str
    order: int
    gens: str
    nilpotency_class: Optional[int]
    derived_length: Optional[int]
    metabelian: bool
    description: str = ""


# ----- 自由メタアーベル群の元 ----- #

class FMElementModel(BaseModel):
    """FMElement の直列化形式 (項は指数ベクトル順)"""
    rank: Literal[2, 3]
    tvec: List[int]
    fringe: List[List[Tuple[List[int], int]]]
