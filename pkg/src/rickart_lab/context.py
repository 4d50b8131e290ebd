"""Concrete module context for finite abelian groups.

A context bundles one object with every capability the property deciders
need: subobject enumeration (lazy, canonical order), socle/radical, summand
and complement search, fully-invariant tests, quotients, and realizable
kernels/images relative to another context.  Contexts are cached per
canonical presentation; everything inside is immutable after construction
except memo tables guarded by a single lock (safe for concurrent readers).
"""

from __future__ import annotations

import os
import threading
from itertools import product as iproduct

from . import cache as diskcache
from . import homs, intmat
from .errors import ConsistencyError, ResourceLimitError
from .groups import (
    Element,
    FiniteAbelianGroup,
    Subgroup,
    full_subgroup,
    iter_subgroups,
    join,
    meet,
    primary_block,
    purity_violation,
    quotient_presentation,
    quotient_type,
    radical,
    socle,
    subgroup_from_rows,
    subgroup_iso_type,
    subgroup_presentation,
    zero_subgroup,
    _subgroups_with_det,
)
from .verdict import PropertyVerdict, hom_json

DEFAULT_ENUM_BOUND = 4096
_enum_bound = int(os.environ.get("RICKART_LAB_ENUM_BOUND", DEFAULT_ENUM_BOUND))
_max_subgroups = int(os.environ.get("RICKART_LAB_MAX_SUBGROUPS", 1_000_000))


def set_enumeration_bound(bound: int) -> None:
    global _enum_bound
    _enum_bound = bound


def enumeration_bound() -> int:
    return _enum_bound


class AbelianContext:
    """All capabilities of one finite abelian group, with memo tables."""

    _registry: dict[tuple[int, ...], "AbelianContext"] = {}
    _registry_lock = threading.Lock()

    @classmethod
    def get(cls, group: FiniteAbelianGroup | tuple[int, ...]) -> "AbelianContext":
        factors = group.factors if isinstance(group, FiniteAbelianGroup) else tuple(group)
        with cls._registry_lock:
            ctx = cls._registry.get(factors)
            if ctx is None:
                ctx = cls(FiniteAbelianGroup(factors))
                cls._registry[factors] = ctx
        return ctx

    def __init__(self, group: FiniteAbelianGroup):
        self.group = group
        self.zero_sub = zero_subgroup(group)
        self.full_sub = full_subgroup(group)
        self.memo_key = ("ab", group.factors)
        self._lock = threading.Lock()
        self._subobjects: list[Subgroup] | None = None
        self._summands: list[Subgroup] | None = None
        self._fi_summands: list[Subgroup] | None = None
        self._batches: dict[int, list[Subgroup]] = {}
        self._complements: dict = {}
        self._fi_cache: dict = {}
        self._iso_types: dict = {}
        self._quot_types: dict = {}
        self._quotients: dict = {}
        self._end_abelian: PropertyVerdict | None = None
        self._socle = socle(group)
        self._radical = radical(group)

    # -- basic structure ----------------------------------------------------

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def is_zero(self) -> bool:
        return self.group.is_zero

    def describe(self) -> str:
        return self.group.spec_string()

    def socle(self) -> Subgroup:
        return self._socle

    def radical(self) -> Subgroup:
        return self._radical

    @property
    def is_uniform(self) -> bool:
        # every nonzero subobject essential, i.e. the socle is simple
        return _is_prime(self._socle.order)

    @property
    def is_hollow(self) -> bool:
        # every proper subobject superfluous, i.e. M/rad(M) is simple
        return _is_prime(self.group.order // self._radical.order)

    @property
    def is_indecomposable(self) -> bool:
        # finite abelian indecomposables are exactly the cyclic p-power groups
        return len(self.group.cyclic_pieces) == 1

    @property
    def is_semisimple(self) -> bool:
        return self._radical.is_zero

    # -- subobject enumeration ----------------------------------------------

    def _order_batch(self, o: int) -> list[Subgroup]:
        with self._lock:
            if o in self._batches:
                return self._batches[o]
        batch = sorted(
            _subgroups_with_det(self.group, self.group.order // o),
            key=lambda s: s.rows,
        )
        with self._lock:
            self._batches[o] = batch
        return batch

    def iter_subobjects(self, min_order: int = 1, max_order: int | None = None):
        from .groups import divisors

        for o in divisors(self.group.order):
            if o < min_order:
                continue
            if max_order is not None and o > max_order:
                return
            yield from self._order_batch(o)

    def subobjects(self) -> list[Subgroup]:
        if self._subobjects is None:
            if self.order > _enum_bound:
                raise ResourceLimitError(
                    f"|{self.describe()}| = {self.order} exceeds the enumeration bound",
                    _enum_bound,
                )
            rows = diskcache.load_lattice(self.group.factors)
            if rows is not None:
                subs = [Subgroup(self.group, intmat.freeze(r)) for r in rows]
            else:
                subs = []
                for s in self.iter_subobjects():
                    subs.append(s)
                    if len(subs) > _max_subgroups:
                        raise ResourceLimitError(
                            f"subgroup count of {self.describe()} exceeds the guard",
                            _max_subgroups,
                        )
                diskcache.store_lattice(self.group.factors, [s.rows for s in subs])
            with self._lock:
                self._subobjects = subs
        return self._subobjects

    def meet(self, a: Subgroup, b: Subgroup) -> Subgroup:
        return meet(a, b)

    def join(self, a: Subgroup, b: Subgroup) -> Subgroup:
        return join(a, b)

    def iter_atoms(self):
        """Minimal nonzero subobjects, canonically ordered."""
        for p in self.group.primes:
            yield from sorted(
                _subgroups_with_det(self.group, self.group.order // p),
                key=lambda s: s.rows,
            )

    def iter_maximals(self):
        """Maximal proper subobjects, canonically ordered."""
        for p in self.group.primes:
            batch = sorted(
                _subgroups_with_det(self.group, p), key=lambda s: s.rows
            )
            yield from batch

    # -- summands -------------------------------------------------------------

    def is_summand(self, s: Subgroup) -> bool:
        return self.summand_violation(s) is None

    def summand_violation(self, s: Subgroup):
        return purity_violation(s)

    def complement(self, s: Subgroup) -> Subgroup | None:
        with self._lock:
            if s.rows in self._complements:
                return self._complements[s.rows]
        comp = homs.complement_of(s)
        with self._lock:
            self._complements[s.rows] = comp
        return comp

    def iter_summands(self):
        for s in self.iter_subobjects():
            if purity_violation(s) is None:
                yield s

    def summands(self) -> list[Subgroup]:
        if self._summands is None:
            res = [s for s in self.subobjects() if purity_violation(s) is None]
            with self._lock:
                self._summands = res
        return self._summands

    def summand_iso_types(self) -> list[tuple[int, ...]]:
        """Iso types of direct summands: per-prime sub-multisets of exponents."""
        from collections import Counter

        per_prime: list[list[list[int]]] = []
        for _p, powers in self.group.primary_parts.items():
            counts = Counter(powers)
            choices: list[list[int]] = [[]]
            for power, mult in sorted(counts.items()):
                choices = [c + [power] * t for c in choices for t in range(mult + 1)]
            per_prime.append(choices)
        types = set()
        for combo in iproduct(*per_prime):
            orders = [v for sel in combo for v in sel]
            types.add(FiniteAbelianGroup.from_cyclic_orders(orders).factors)
        return sorted(types)

    def fi_summands(self) -> list[Subgroup]:
        """Fully invariant direct summands: sums of whole primary components.

        In a finite abelian p-group any proper nonzero summand admits a
        nonzero endomorphism moving it into a complement, so the fully
        invariant summands are exactly the sums of primary components.  The
        formula is cross-checked against the lattice scan by the test suite.
        """
        if self._fi_summands is None:
            primes = self.group.primes
            out = set()
            for mask in range(1 << len(primes)):
                sel = [p for i, p in enumerate(primes) if mask >> i & 1]
                out.add(primary_block(self.group, sel))
            blocks = sorted(out, key=lambda s: s.sort_key())
            for b in blocks:
                if purity_violation(b) is not None or self.fi_violation(b) is not None:
                    raise ConsistencyError("primary block is not a fi summand")
            with self._lock:
                self._fi_summands = blocks
        return self._fi_summands

    def iter_subobjects_containing(self, k: Subgroup):
        """Subobjects D >= K, canonically ordered, via pullback from G/K."""
        data = self._quotient_data(k)
        pres = data["pres"]
        q = pres.quotient
        for o in _sorted_divisors(q.order):
            batch = set()
            for sq in _subgroups_with_det(q, q.order // o):
                rows = [
                    intmat.mat_mul([row], data["lift_rows"])[0] for row in sq.rows
                ]
                batch.add(subgroup_from_rows(self.group, list(rows) + list(k.rows)))
            yield from sorted(batch, key=lambda s: s.rows)

    def iter_summands_containing(self, k: Subgroup):
        for d in self.iter_subobjects_containing(k):
            if purity_violation(d) is None:
                yield d

    def iter_subobjects_inside(self, l_sub: Subgroup):
        """Subobjects D <= L, canonically ordered, via L's abstract lattice."""
        pres = subgroup_presentation(l_sub)
        a = pres.abstract
        for o in _sorted_divisors(a.order):
            batch = set()
            for sa in _subgroups_with_det(a, a.order // o):
                gens = [
                    _map_abstract_element(self.group, pres, row) for row in sa.rows
                ]
                batch.add(subgroup_from_rows(self.group, gens))
            yield from sorted(batch, key=lambda s: s.rows)

    def iter_summands_inside(self, l_sub: Subgroup):
        for d in self.iter_subobjects_inside(l_sub):
            if purity_violation(d) is None:
                yield d

    # -- fully invariant -----------------------------------------------------

    def fi_violation(self, s: Subgroup):
        with self._lock:
            if s.rows in self._fi_cache:
                return self._fi_cache[s.rows]
        out = None
        gens = s.generators()
        for h in homs.end_generators(self.group):
            for b in gens:
                img = h(b)
                if img not in s:
                    out = {
                        "kind": "moved_out",
                        "endomorphism": hom_json(h),
                        "element": list(b),
                        "image": list(img),
                    }
                    break
            if out:
                break
        with self._lock:
            self._fi_cache[s.rows] = out
        return out

    def fully_invariant(self, s: Subgroup) -> bool:
        return self.fi_violation(s) is None

    # -- essential / superfluous helpers --------------------------------------

    def essential_in(self, k: Subgroup, d: Subgroup) -> bool:
        """K essential in D: K <= D and socle(D) = D meet socle(M) <= K."""
        return d.contains_subgroup(k) and k.contains_subgroup(meet(d, self._socle))

    def _quotient_data(self, d: Subgroup):
        with self._lock:
            if d.rows in self._quotients:
                return self._quotients[d.rows]
        pres = quotient_presentation(d)
        rad_q = radical(pres.quotient)
        data = {
            "pres": pres,
            "radical": rad_q,
            "lift_rows": intmat.freeze(pres.lift_rows) if pres.lift_rows else (),
        }
        with self._lock:
            self._quotients[d.rows] = data
        return data

    def lies_above(self, l_sub: Subgroup, d: Subgroup) -> bool:
        """D <= L and L/D superfluous in M/D (i.e. inside rad(M/D))."""
        if not l_sub.contains_subgroup(d):
            return False
        data = self._quotient_data(d)
        pres, rad_q = data["pres"], data["radical"]
        return all(pres.project(g) in rad_q for g in l_sub.generators())

    def quotient_type_of(self, k: Subgroup) -> tuple[int, ...]:
        with self._lock:
            if k.rows in self._quot_types:
                return self._quot_types[k.rows]
        t = quotient_type(k)
        with self._lock:
            self._quot_types[k.rows] = t
        return t

    def iso_type_of(self, s: Subgroup) -> tuple[int, ...]:
        with self._lock:
            if s.rows in self._iso_types:
                return self._iso_types[s.rows]
        t = subgroup_iso_type(s)
        with self._lock:
            self._iso_types[s.rows] = t
        return t

    def quotient_object(self, k: Subgroup) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.quotient_type_of(k))

    def subobject_object(self, s: Subgroup) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.iso_type_of(s))

    @staticmethod
    def objects_isomorphic(a: FiniteAbelianGroup, b: FiniteAbelianGroup) -> bool:
        return a == b

    # -- relative data ---------------------------------------------------------

    def realizable_kernels(self, target: "AbelianContext"):
        """K <= M with M/K embeddable in the target; lazy and guarded."""
        if self.group.is_zero:
            yield self.zero_sub
            return
        min_order = -(-self.order // target.order)
        scanned = 0
        for k_sub in self.iter_subobjects(min_order=min_order):
            scanned += 1
            if scanned > _max_subgroups:
                raise ResourceLimitError(
                    f"kernel scan of {self.describe()} exceeds the guard",
                    _max_subgroups,
                )
            from .groups import embeds as _embeds

            if _embeds(self.quotient_type_of(k_sub), target.group.factors):
                yield k_sub

    def realizable_images(self, source: "AbelianContext"):
        """L <= N that are epimorphic images of the source; lazy and guarded."""
        from .groups import embeds as _embeds

        scanned = 0
        for l_sub in self.iter_subobjects(max_order=source.order):
            scanned += 1
            if scanned > _max_subgroups:
                raise ResourceLimitError(
                    f"image scan of {self.describe()} exceeds the guard",
                    _max_subgroups,
                )
            if _embeds(self.iso_type_of(l_sub), source.group.factors):
                yield l_sub

    def realizing_kernel_hom(self, k: Subgroup, target: "AbelianContext"):
        return homs.hom_with_kernel(self.group, target.group, k)

    def realizing_image_hom(self, l_sub: Subgroup, source: "AbelianContext"):
        return homs.hom_with_image(source.group, self.group, l_sub)

    def end_ring_abelian(self) -> PropertyVerdict:
        if self._end_abelian is None:
            v = homs.is_abelian_end_ring(self.group)
            with self._lock:
                self._end_abelian = v
        return self._end_abelian

    def hom_zero_to(self, other: "AbelianContext") -> bool:
        return homs.hom_size(self.group, other.group) == 1

    def __repr__(self):
        return f"AbelianContext({self.describe()})"


def _is_prime(n: int) -> bool:
    from .groups import factorize

    return n > 1 and factorize(n) == {n: 1}


def _sorted_divisors(n: int) -> list[int]:
    from .groups import divisors

    return divisors(n)


def _map_abstract_element(group, pres, coeff_row) -> Element:
    vec = [0] * group.rank
    for c, gen in zip(coeff_row, pres.gens_in_ambient):
        if c:
            for j in range(group.rank):
                vec[j] += c * gen[j]
    return group.reduce(vec)
