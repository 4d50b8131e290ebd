"""Decision procedures for the named object properties, with witnesses.

Relative deciders quantify over realizable kernels/images instead of all
morphisms: the conditions only depend on f through Ker(f) or Im(f), and the
realizable sets are computed by invariant comparison.  Every counterexample
carries a concrete realizing morphism.  full_profile cross-validates the
implication network at runtime and raises ConsistencyError on violation,
which is always a bug signal.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import ConsistencyError
from .predicates import (
    essential_in_summand,
    is_essential,
    is_superfluous,
    lies_above_summand,
    sip_ssp_check,
)
from .verdict import PropertyVerdict, fail, hom_json, ok, subgroup_json


class PropertyId(Enum):
    CS_RICKART = "CS_RICKART"
    DUAL_CS_RICKART = "DUAL_CS_RICKART"
    STRONGLY_CS_RICKART = "STRONGLY_CS_RICKART"
    DUAL_STRONGLY_CS_RICKART = "DUAL_STRONGLY_CS_RICKART"
    RICKART = "RICKART"
    DUAL_RICKART = "DUAL_RICKART"
    STRONGLY_RICKART = "STRONGLY_RICKART"
    DUAL_STRONGLY_RICKART = "DUAL_STRONGLY_RICKART"
    EXTENDING = "EXTENDING"
    STRONGLY_EXTENDING = "STRONGLY_EXTENDING"
    LIFTING = "LIFTING"
    STRONGLY_LIFTING = "STRONGLY_LIFTING"
    WEAK_DUO = "WEAK_DUO"
    K_NONSINGULAR = "K_NONSINGULAR"
    T_NONSINGULAR = "T_NONSINGULAR"
    DIRECT_INJECTIVE = "DIRECT_INJECTIVE"
    DIRECT_PROJECTIVE = "DIRECT_PROJECTIVE"
    REGULAR = "REGULAR"
    STRONGLY_REGULAR = "STRONGLY_REGULAR"
    SIP_EXTENDING = "SIP_EXTENDING"
    STRICT_SIP_EXTENDING = "STRICT_SIP_EXTENDING"
    SSIP_EXTENDING = "SSIP_EXTENDING"
    STRICT_SSIP_EXTENDING = "STRICT_SSIP_EXTENDING"
    SSP_LIFTING = "SSP_LIFTING"
    STRICT_SSP_LIFTING = "STRICT_SSP_LIFTING"
    SSSP_LIFTING = "SSSP_LIFTING"
    STRICT_SSSP_LIFTING = "STRICT_SSSP_LIFTING"
    END_RING_ABELIAN = "END_RING_ABELIAN"


_memo: dict = {}
_memo_lock = threading.Lock()


def clear_memo() -> None:
    with _memo_lock:
        _memo.clear()


def _memoized(key, compute):
    with _memo_lock:
        if key in _memo:
            return _memo[key]
    value = compute()
    with _memo_lock:
        _memo[key] = value
    return value


def _kernel_counterexample(m_ctx, n_ctx, k_sub, inner) -> dict[str, Any]:
    return {
        "kind": "bad_kernel",
        "kernel": subgroup_json(k_sub),
        "morphism": hom_json(m_ctx.realizing_kernel_hom(k_sub, n_ctx)),
        "inner": inner,
    }


def _image_counterexample(n_ctx, m_ctx, l_sub, inner) -> dict[str, Any]:
    return {
        "kind": "bad_image",
        "image": subgroup_json(l_sub),
        "morphism": hom_json(n_ctx.realizing_image_hom(l_sub, m_ctx)),
        "inner": inner,
    }


def cs_rickart(n_ctx, m_ctx, dual: bool = False, strong: bool = False) -> PropertyVerdict:
    """N is (dual) (strongly) M-CS-Rickart.

    Kernels of f: M -> N must be essential in a (fully invariant) summand of
    M; dually, images must lie above a (fully invariant) summand of N.
    """

    def compute():
        checked = 0
        if not dual:
            for k_sub in m_ctx.realizable_kernels(n_ctx):
                checked += 1
                v = essential_in_summand(k_sub, m_ctx, strong)
                if not v:
                    return fail(
                        _kernel_counterexample(m_ctx, n_ctx, k_sub, v.counterexample)
                    )
        else:
            for l_sub in n_ctx.realizable_images(m_ctx):
                checked += 1
                v = lies_above_summand(l_sub, n_ctx, strong)
                if not v:
                    return fail(
                        _image_counterexample(n_ctx, m_ctx, l_sub, v.counterexample)
                    )
        return ok({"kind": "all_covered", "checked": checked})

    key = ("cs_rickart", n_ctx.memo_key, m_ctx.memo_key, dual, strong)
    return _memoized(key, compute)


def rickart(n_ctx, m_ctx, dual: bool = False, strong: bool = False) -> PropertyVerdict:
    """N is (dual) (strongly) M-Rickart: kernels (images) are themselves
    (fully invariant) direct summands."""

    def compute():
        checked = 0
        if not dual:
            for k_sub in m_ctx.realizable_kernels(n_ctx):
                checked += 1
                bad = None
                if not m_ctx.is_summand(k_sub):
                    bad = {"kind": "kernel_not_summand"}
                elif strong and not m_ctx.fully_invariant(k_sub):
                    bad = {"kind": "kernel_not_fully_invariant"}
                if bad:
                    return fail(_kernel_counterexample(m_ctx, n_ctx, k_sub, bad))
        else:
            for l_sub in n_ctx.realizable_images(m_ctx):
                checked += 1
                bad = None
                if not n_ctx.is_summand(l_sub):
                    bad = {"kind": "image_not_summand"}
                elif strong and not n_ctx.fully_invariant(l_sub):
                    bad = {"kind": "image_not_fully_invariant"}
                if bad:
                    return fail(_image_counterexample(n_ctx, m_ctx, l_sub, bad))
        return ok({"kind": "all_covered", "checked": checked})

    key = ("rickart", n_ctx.memo_key, m_ctx.memo_key, dual, strong)
    return _memoized(key, compute)


def extending_lifting(m_ctx, dual: bool = False, strong: bool = False) -> PropertyVerdict:
    """(Strongly) extending / lifting: quantifies over ALL subobjects."""

    def compute():
        checked = 0
        for s in m_ctx.subobjects():
            checked += 1
            v = (
                lies_above_summand(s, m_ctx, strong)
                if dual
                else essential_in_summand(s, m_ctx, strong)
            )
            if not v:
                return fail(
                    {
                        "kind": "bad_subobject",
                        "subobject": subgroup_json(s),
                        "inner": v.counterexample,
                    }
                )
        return ok({"kind": "all_covered", "checked": checked})

    key = ("extlift", m_ctx.memo_key, dual, strong)
    return _memoized(key, compute)


def weak_duo(m_ctx) -> PropertyVerdict:
    """Every direct summand is fully invariant."""

    def compute():
        checked = 0
        for s in m_ctx.iter_summands():
            checked += 1
            violation = m_ctx.fi_violation(s)
            if violation is not None:
                return fail(
                    {
                        "kind": "movable_summand",
                        "summand": subgroup_json(s),
                        "inner": violation,
                    }
                )
        return ok({"kind": "all_summands_fully_invariant", "checked": checked})

    return _memoized(("weak_duo", m_ctx.memo_key), compute)


def nonsingular(m_ctx, n_ctx, kind: str) -> PropertyVerdict:
    """K: essential kernels force f = 0; T: superfluous images force f = 0.

    Morphisms run M -> N.  K-nonsingularity scans realizable kernels above
    the socle of M; T-nonsingularity scans realizable images inside the
    radical of N.
    """

    def compute():
        if kind == "K":
            for k_sub in m_ctx.iter_subobjects_containing(m_ctx.socle()):
                if k_sub.order == m_ctx.order:
                    continue
                if m_ctx.kernel_realizable(k_sub, n_ctx):
                    return fail(
                        _kernel_counterexample(
                            m_ctx, n_ctx, k_sub, {"kind": "essential_kernel_nonzero_map"}
                        )
                    )
            return ok({"kind": "no_nonzero_map_with_essential_kernel"})
        if kind == "T":
            for l_sub in n_ctx.iter_subobjects_inside(n_ctx.radical()):
                if l_sub.order == 1:
                    continue
                if n_ctx.image_realizable(l_sub, m_ctx):
                    return fail(
                        _image_counterexample(
                            n_ctx, m_ctx, l_sub, {"kind": "superfluous_image_nonzero_map"}
                        )
                    )
            return ok({"kind": "no_nonzero_map_with_superfluous_image"})
        raise ValueError(f"unknown nonsingularity kind: {kind}")

    key = ("nonsingular", m_ctx.memo_key, n_ctx.memo_key, kind)
    return _memoized(key, compute)


def direct_inj_proj(m_ctx, n_ctx, kind: str) -> PropertyVerdict:
    """Direct injectivity/projectivity relative to a second object.

    injective: every subobject of N isomorphic to a direct summand of M is a
    direct summand of N.  projective: whenever M/K is isomorphic to a direct
    summand of N, K is a direct summand of M.
    """

    def compute():
        if kind == "injective":
            types = set(m_ctx.summand_iso_types())
            max_order = max(_type_order(t) for t in types)
            for s in n_ctx.iter_subobjects(max_order=max_order):
                if n_ctx.iso_type_of(s) in types and not n_ctx.is_summand(s):
                    return fail(
                        {
                            "kind": "summand_copy_not_summand",
                            "subobject": subgroup_json(s),
                            "iso_type": list(n_ctx.iso_type_of(s)),
                        }
                    )
            return ok({"kind": "all_summand_copies_split"})
        if kind == "projective":
            types = set(n_ctx.summand_iso_types())
            max_order = max(_type_order(t) for t in types)
            min_order = -(-m_ctx.order // max_order)
            for k_sub in m_ctx.iter_subobjects(min_order=min_order):
                if m_ctx.quotient_type_of(k_sub) in types and not m_ctx.is_summand(
                    k_sub
                ):
                    return fail(
                        {
                            "kind": "summand_quotient_kernel_not_summand",
                            "subobject": subgroup_json(k_sub),
                            "quotient_type": list(m_ctx.quotient_type_of(k_sub)),
                        }
                    )
            return ok({"kind": "all_summand_quotients_split"})
        raise ValueError(f"unknown direct kind: {kind}")

    key = ("direct", m_ctx.memo_key, n_ctx.memo_key, kind)
    return _memoized(key, compute)


def regular(n_ctx, m_ctx, strong: bool = False) -> PropertyVerdict:
    """(Strongly) M-regular: (strongly) M-Rickart and dual (strongly) M-Rickart."""
    a = rickart(n_ctx, m_ctx, dual=False, strong=strong)
    if not a:
        return a
    b = rickart(n_ctx, m_ctx, dual=True, strong=strong)
    if not b:
        return b
    return ok({"kind": "rickart_and_dual_rickart"})


def _type_order(t: tuple[int, ...]) -> int:
    out = 1
    for v in t:
        out *= v
    return out


# ---------------------------------------------------------------------------
# Self profiles with the runtime consistency net


@dataclass
class PropertyReport:
    object_spec: str
    properties: dict[str, PropertyVerdict]
    structure: dict[str, Any]
    elapsed_ms: int = 0

    def value(self, pid: PropertyId) -> bool:
        return self.properties[pid.value].value

    def to_json(self) -> dict[str, Any]:
        return {
            "object": self.object_spec,
            "structure": self.structure,
            "properties": {k: v.to_json() for k, v in self.properties.items()},
            "elapsed_ms": self.elapsed_ms,
        }


_SIP_BY_ID = {
    PropertyId.SIP_EXTENDING: "SIP-ext",
    PropertyId.STRICT_SIP_EXTENDING: "strict-SIP-ext",
    PropertyId.SSIP_EXTENDING: "SSIP-ext",
    PropertyId.STRICT_SSIP_EXTENDING: "strict-SSIP-ext",
    PropertyId.SSP_LIFTING: "SSP-lift",
    PropertyId.STRICT_SSP_LIFTING: "strict-SSP-lift",
    PropertyId.SSSP_LIFTING: "SSSP-lift",
    PropertyId.STRICT_SSSP_LIFTING: "strict-SSSP-lift",
}


def self_property(m_ctx, pid: PropertyId) -> PropertyVerdict:
    """Evaluate one self property of an object."""
    if pid is PropertyId.CS_RICKART:
        return cs_rickart(m_ctx, m_ctx)
    if pid is PropertyId.DUAL_CS_RICKART:
        return cs_rickart(m_ctx, m_ctx, dual=True)
    if pid is PropertyId.STRONGLY_CS_RICKART:
        return cs_rickart(m_ctx, m_ctx, strong=True)
    if pid is PropertyId.DUAL_STRONGLY_CS_RICKART:
        return cs_rickart(m_ctx, m_ctx, dual=True, strong=True)
    if pid is PropertyId.RICKART:
        return rickart(m_ctx, m_ctx)
    if pid is PropertyId.DUAL_RICKART:
        return rickart(m_ctx, m_ctx, dual=True)
    if pid is PropertyId.STRONGLY_RICKART:
        return rickart(m_ctx, m_ctx, strong=True)
    if pid is PropertyId.DUAL_STRONGLY_RICKART:
        return rickart(m_ctx, m_ctx, dual=True, strong=True)
    if pid is PropertyId.EXTENDING:
        return extending_lifting(m_ctx)
    if pid is PropertyId.STRONGLY_EXTENDING:
        return extending_lifting(m_ctx, strong=True)
    if pid is PropertyId.LIFTING:
        return extending_lifting(m_ctx, dual=True)
    if pid is PropertyId.STRONGLY_LIFTING:
        return extending_lifting(m_ctx, dual=True, strong=True)
    if pid is PropertyId.WEAK_DUO:
        return weak_duo(m_ctx)
    if pid is PropertyId.K_NONSINGULAR:
        return nonsingular(m_ctx, m_ctx, "K")
    if pid is PropertyId.T_NONSINGULAR:
        return nonsingular(m_ctx, m_ctx, "T")
    if pid is PropertyId.DIRECT_INJECTIVE:
        return direct_inj_proj(m_ctx, m_ctx, "injective")
    if pid is PropertyId.DIRECT_PROJECTIVE:
        return direct_inj_proj(m_ctx, m_ctx, "projective")
    if pid is PropertyId.REGULAR:
        return regular(m_ctx, m_ctx)
    if pid is PropertyId.STRONGLY_REGULAR:
        return regular(m_ctx, m_ctx, strong=True)
    if pid is PropertyId.END_RING_ABELIAN:
        return m_ctx.end_ring_abelian()
    if pid in _SIP_BY_ID:
        return sip_ssp_check(m_ctx, _SIP_BY_ID[pid])
    raise ValueError(f"not a self property: {pid}")


def _check(cond: bool, name: str, spec: str) -> None:
    if not cond:
        raise ConsistencyError(f"implication {name} violated on {spec}")


def full_profile(m_ctx) -> PropertyReport:
    """All self properties plus the runtime cross-validation network."""
    t0 = time.perf_counter()
    props: dict[str, PropertyVerdict] = {}
    for pid in PropertyId:
        props[pid.value] = self_property(m_ctx, pid)

    spec = m_ctx.describe()
    b = {pid: props[pid.value].value for pid in PropertyId}
    uniform, hollow = m_ctx.is_uniform, m_ctx.is_hollow
    indecomposable = m_ctx.is_indecomposable

    _check(
        b[PropertyId.STRONGLY_CS_RICKART]
        == (b[PropertyId.CS_RICKART] and b[PropertyId.WEAK_DUO]),
        "strongly-cs = cs & weak-duo",
        spec,
    )
    _check(
        b[PropertyId.DUAL_STRONGLY_CS_RICKART]
        == (b[PropertyId.DUAL_CS_RICKART] and b[PropertyId.WEAK_DUO]),
        "dual-strongly-cs = dual-cs & weak-duo",
        spec,
    )
    _check(
        b[PropertyId.STRONGLY_CS_RICKART]
        == (b[PropertyId.CS_RICKART] and b[PropertyId.END_RING_ABELIAN]),
        "strongly-cs = cs & abelian-end",
        spec,
    )
    _check(
        b[PropertyId.DUAL_STRONGLY_CS_RICKART]
        == (b[PropertyId.DUAL_CS_RICKART] and b[PropertyId.END_RING_ABELIAN]),
        "dual-strongly-cs = dual-cs & abelian-end",
        spec,
    )
    if indecomposable:
        _check(
            b[PropertyId.STRONGLY_CS_RICKART] == b[PropertyId.CS_RICKART],
            "indecomposable: strongly-cs = cs",
            spec,
        )
        _check(
            b[PropertyId.DUAL_STRONGLY_CS_RICKART] == b[PropertyId.DUAL_CS_RICKART],
            "indecomposable: dual-strongly-cs = dual-cs",
            spec,
        )
    _check(
        (b[PropertyId.STRONGLY_CS_RICKART] and b[PropertyId.K_NONSINGULAR])
        == b[PropertyId.STRONGLY_RICKART],
        "strongly-cs & k-nonsingular = strongly-rickart",
        spec,
    )
    _check(
        (b[PropertyId.DUAL_STRONGLY_CS_RICKART] and b[PropertyId.T_NONSINGULAR])
        == b[PropertyId.DUAL_STRONGLY_RICKART],
        "dual-strongly-cs & t-nonsingular = dual-strongly-rickart",
        spec,
    )
    if b[PropertyId.STRONGLY_CS_RICKART]:
        _check(
            b[PropertyId.STRONGLY_REGULAR]
            == (b[PropertyId.K_NONSINGULAR] and b[PropertyId.DIRECT_INJECTIVE]),
            "strongly-regular = k-nonsingular & direct-injective",
            spec,
        )
    if b[PropertyId.DUAL_STRONGLY_CS_RICKART]:
        _check(
            b[PropertyId.STRONGLY_REGULAR]
            == (b[PropertyId.T_NONSINGULAR] and b[PropertyId.DIRECT_PROJECTIVE]),
            "strongly-regular = t-nonsingular & direct-projective",
            spec,
        )
    if uniform:
        _check(b[PropertyId.STRONGLY_CS_RICKART], "uniform => strongly-cs", spec)
    if hollow:
        _check(b[PropertyId.DUAL_STRONGLY_CS_RICKART], "hollow => dual-strongly-cs", spec)
    _check(
        b[PropertyId.REGULAR] == (b[PropertyId.RICKART] and b[PropertyId.DUAL_RICKART]),
        "regular = rickart & dual-rickart",
        spec,
    )
    if b[PropertyId.EXTENDING]:
        _check(b[PropertyId.CS_RICKART], "extending => cs", spec)
    if b[PropertyId.STRONGLY_EXTENDING]:
        _check(b[PropertyId.STRONGLY_CS_RICKART], "strongly-extending => strongly-cs", spec)
    if b[PropertyId.LIFTING]:
        _check(b[PropertyId.DUAL_CS_RICKART], "lifting => dual-cs", spec)
    if b[PropertyId.STRONGLY_LIFTING]:
        _check(
            b[PropertyId.DUAL_STRONGLY_CS_RICKART],
            "strongly-lifting => dual-strongly-cs",
            spec,
        )
    if b[PropertyId.STRONGLY_CS_RICKART]:
        _check(
            b[PropertyId.STRICT_SIP_EXTENDING], "strongly-cs => strict-sip-extending", spec
        )
    if b[PropertyId.DUAL_STRONGLY_CS_RICKART]:
        _check(
            b[PropertyId.STRICT_SSP_LIFTING], "dual-strongly-cs => strict-ssp-lifting", spec
        )

    structure = {
        "order": m_ctx.order,
        "uniform": uniform,
        "hollow": hollow,
        "indecomposable": indecomposable,
        "semisimple": m_ctx.is_semisimple,
    }
    elapsed = int((time.perf_counter() - t0) * 1000)
    return PropertyReport(spec, props, structure, elapsed)
