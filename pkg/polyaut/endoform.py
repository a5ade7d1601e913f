"""
x -> x [x, v1]^h1 ... [x, vm]^hm 型の自己準同型

メタアーベル群ではこの写像は準同型になる。2 元生成の自由メタアーベル群の
IA 自己同型 f(a) = a v, f(b) = b w をこの形に書き直す構成もここに置く。
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import zip_longest
from typing import Any, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from polyaut.errors import NotDerived, NotMetabelian
from polyaut.groups import FiniteGroup, derived_series
from polyaut.metabelian import (
    DerivedDecomposition,
    FMElement,
    canonical_preimage,
    decompose_derived,
    derived_to_module,
    fm_commutator,
    fm_conjugate,
    fm_generators,
    fm_identity,
    fm_inv,
    fm_mul,
    fm_pow,
    format_monomial_preimage,
    is_derived,
    random_element,
    retract_generator,
)
from polyaut.models import ClaimReport
from polyaut.polynomial import Factor, GroupFunction, PolynomialForm

logger = logging.getLogger(__name__)


class EndoFactor(NamedTuple):
    conjugator: Any
    eta: int
    label: str = ""


@dataclass(frozen=True)
class EndoForm:
    factors: Tuple[EndoFactor, ...] = ()

    @classmethod
    def of(cls, pairs) -> "EndoForm":
        return cls(tuple(EndoFactor(v, int(eta)) for v, eta in pairs))

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[EndoFactor]:
        return iter(self.factors)

    def describe(self) -> str:
        parts = ["x"]
        for v, eta, label in self.factors:
            name = label or str(v)
            parts.append(f"[x, {name}]" if eta == 1 else f"[x, {name}]^{eta}")
        return " · ".join(parts)


class IASpec(NamedTuple):
    """f(a) = a v, f(b) = b w"""
    v: FMElement
    w: FMElement

    def validate(self) -> None:
        for name, e in (("v", self.v), ("w", self.w)):
            if e.rank != 2:
                raise NotDerived(f"{name} はランク 2 の元である必要があります")
            if not is_derived(e):
                raise NotDerived(f"({name}: tvec={e.tvec})")


class IAConstruction(NamedTuple):
    spec: IASpec
    v_decomposition: DerivedDecomposition
    w_decomposition: DerivedDecomposition
    form: EndoForm


# ----- 構成 ----- #

def ia_construction(spec: IASpec) -> IAConstruction:
    """v, w を c(p) の形に分解し、f を x [x, u]^h の積で書く

    v = [a,b]^alpha prod [a,b,v_i]^lambda_i, w = [a,b]^beta prod [a,b,w_i]^mu_i のとき
    (b, alpha - lambda), (a, mu - beta), 各 i について
    (v_i, -lambda_i), (b v_i, lambda_i), (w_i, mu_i), (a w_i, -mu_i) を並べる。
    """
    spec.validate()
    dv = decompose_derived(derived_to_module(spec.v))
    dw = decompose_derived(derived_to_module(spec.w))
    a, b = fm_generators(2)
    lam = dv.weight
    mu = dw.weight

    factors: List[EndoFactor] = [
        EndoFactor(b, dv.alpha - lam, "b"),
        EndoFactor(a, mu - dw.alpha, "a"),
    ]
    for v_term, w_term in zip_longest(dv.terms, dw.terms):
        if v_term is not None:
            exps, coeff = v_term
            u = canonical_preimage(exps)
            factors.append(EndoFactor(u, -coeff, format_monomial_preimage(exps)))
            factors.append(EndoFactor(fm_mul(b, u), coeff, format_monomial_preimage(exps, [(1, 1)])))
        if w_term is not None:
            exps, coeff = w_term
            u = canonical_preimage(exps)
            factors.append(EndoFactor(u, coeff, format_monomial_preimage(exps)))
            factors.append(EndoFactor(fm_mul(a, u), -coeff, format_monomial_preimage(exps, [(0, 1)])))

    form = EndoForm(tuple(f for f in factors if f.eta != 0))
    return IAConstruction(spec, dv, dw, form)


def build_ia_endoform(spec: IASpec) -> EndoForm:
    return ia_construction(spec).form


# ----- 適用 ----- #

@lru_cache(maxsize=None)
def _is_metabelian(G: FiniteGroup) -> bool:
    return derived_series(G)[2]


def endoform_apply(form: EndoForm, x: Any, group: Optional[FiniteGroup] = None) -> Any:
    """x [x, v1]^h1 ... を左から順に評価する"""
    if isinstance(x, FMElement):
        result = x
        for v, eta, _ in form.factors:
            result = fm_mul(result, fm_pow(fm_commutator(x, v), eta))
        return result

    if group is None:
        raise ValueError("有限群の元に適用するには group を指定してください")
    if not _is_metabelian(group):
        raise NotMetabelian(group.name)
    result = int(x)
    for v, eta, _ in form.factors:
        result = int(group.mul[result, group.power(int(group.comm[x, v]), eta)])
    return result


def endoform_image(form: EndoForm, G: FiniteGroup) -> GroupFunction:
    """有限群の全元での像 (メタアーベル性は確かめない)"""
    arange = np.arange(G.order)
    image = arange.copy()
    for v, eta, _ in form.factors:
        image = G.mul[image, G.power_map(eta)[G.comm[arange, v]]]
    return GroupFunction(G, image)


def endoform_to_polyform(form: EndoForm, identity: Any) -> PolynomialForm:
    """[x, v] = x^-1 (v^-1 x v), [x, v]^-1 = (v^-1 x^-1 v) x で共役冪の積に展開する"""
    expanded: List[Tuple[Any, int]] = [(identity, 1)]
    for v, eta, _ in form.factors:
        unit = [(identity, -1), (v, 1)] if eta > 0 else [(v, -1), (identity, 1)]
        expanded.extend(unit * abs(eta))

    # 隣り合う同じ共役元をまとめ、指数 0 を除く
    stack: List[List[Any]] = []
    for v, e in expanded:
        if stack and stack[-1][0] == v:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([v, e])
    return PolynomialForm(tuple(Factor(v, e) for v, e in stack))


def eval_fm_poly_form(form: PolynomialForm, x: FMElement) -> FMElement:
    result = fm_identity(x.rank)
    for v, e in form.factors:
        result = fm_mul(result, fm_conjugate(fm_pow(x, e), v))
    return result


# ----- 検証 ----- #

class IARoundtrip(NamedTuple):
    construction: IAConstruction
    polyform: PolynomialForm
    phi_a: bool
    phi_b: bool
    polyform_agrees: bool
    homomorphism_failures: int

    @property
    def passed(self) -> bool:
        return self.phi_a and self.phi_b and self.polyform_agrees and self.homomorphism_failures == 0


def ia_roundtrip(spec: IASpec, rng: np.random.Generator, pairs: int, word_length: int) -> IARoundtrip:
    """phi(a) = a v, phi(b) = b w と準同型性を厳密に確かめる"""
    construction = ia_construction(spec)
    form = construction.form
    a, b = fm_generators(2)
    identity = fm_identity(2)
    polyform = endoform_to_polyform(form, identity)

    phi_a = endoform_apply(form, a) == fm_mul(a, spec.v)
    phi_b = endoform_apply(form, b) == fm_mul(b, spec.w)
    polyform_agrees = all(eval_fm_poly_form(polyform, g) == endoform_apply(form, g) for g in (a, b))

    failures = 0
    for _ in range(pairs):
        x = random_element(2, rng, word_length)
        y = random_element(2, rng, word_length)
        if endoform_apply(form, fm_mul(x, y)) != fm_mul(endoform_apply(form, x), endoform_apply(form, y)):
            failures += 1
    return IARoundtrip(construction, polyform, phi_a, phi_b, polyform_agrees, failures)


def rank3_counterexample(seed: int = 0, samples: int = 20, word_length: int = 4) -> ClaimReport:
    """f(a) = a, f(b) = b, f(c) = c [a, b] は IA 自己同型だが多項式ではない

    c を 1 に送るレトラクションで [a, b] は消えないので [a, b] は c の正規閉包に入らない。
    一方、多項式関数 F について c^-1 F(c) は常に c の正規閉包に入る。
    """
    rng = np.random.default_rng([seed, 3])
    a, b, c = fm_generators(3)
    ab = fm_commutator(a, b)
    images = {0: a, 1: b, 2: fm_mul(c, ab)}

    ia_property = all(is_derived(fm_mul(fm_inv(g), images[i])) for i, g in enumerate((a, b, c)))
    offset = fm_mul(fm_inv(c), images[2])
    retract_ab = retract_generator(ab, 2)
    retract_c = retract_generator(c, 2)
    commutator_in_ncl_c = retract_ab.is_identity

    # c の共役の積はすべて 1 に写る
    ncl_ok = 0
    for _ in range(samples):
        parts = [
            fm_conjugate(fm_pow(c, int(rng.choice([-1, 1]))), random_element(3, rng, word_length))
            for _ in range(int(rng.integers(1, 4)))
        ]
        element = fm_identity(3)
        for part in parts:
            element = fm_mul(element, part)
        ncl_ok += retract_generator(element, 2).is_identity

    # 多項式関数 F では c^-1 F(c) のレトラクションが 1 (指数和 1 の形)
    poly_ok = 0
    for _ in range(samples):
        length = int(rng.integers(1, 4))
        exps = [int(e) for e in rng.integers(-2, 3, size=length)]
        exps[-1] = 1 - sum(exps[:-1])
        form = PolynomialForm(tuple(Factor(random_element(3, rng, word_length), e) for e in exps))
        value = fm_mul(fm_inv(c), eval_fm_poly_form(form, c))
        poly_ok += retract_generator(value, 2).is_identity

    passed = (
        ia_property
        and offset == ab
        and not commutator_in_ncl_c
        and retract_c.is_identity
        and ncl_ok == samples
        and poly_ok == samples
    )
    computed = {
        "ia_property": ia_property,
        "offset_of_c_is_commutator": offset == ab,
        "retraction_of_ab": str(retract_ab),
        "retraction_of_ab_is_identity": retract_ab.is_identity,
        "commutator_in_ncl_c": commutator_in_ncl_c,
        "retraction_of_c": "1" if retract_c.is_identity else str(retract_c),
        "ncl_samples": samples,
        "ncl_samples_retracting_to_identity": ncl_ok,
        "polynomial_samples": samples,
        "polynomial_samples_retracting_to_identity": poly_ok,
    }
    logger.debug(f"rank3 counterexample: ia={ia_property}, [a,b] in ncl(c)={commutator_in_ncl_c}")
    return ClaimReport(
        group="M3",
        claim="rank3-counterexample",
        passed=passed,
        status="pass" if passed else "fail",
        computed=computed,
    )
