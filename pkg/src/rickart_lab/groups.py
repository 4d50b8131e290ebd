"""Finite abelian groups in canonical invariant-factor form.

A group is a divisor chain n1 | n2 | ... | nk (all >= 2, empty = zero group);
its elements are coordinate tuples with coordinate i taken mod ni.  A subgroup
is stored as the unique row-HNF basis of its preimage lattice L in Z^k, where
L always contains diag(n1..nk) * Z^k.  Two subgroups are equal iff their bases
are identical, which makes every canonical form hashable and comparable.

All arithmetic is exact (Python ints); nothing here uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct
from math import gcd, prod

from . import intmat
from .errors import (
    ContextError,
    DimensionError,
    InvalidOrderError,
    SpecError,
)

Element = tuple[int, ...]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine at desk scale."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    large = [n // d for d in reversed(small) if d * d != n]
    return small + large


def _radical(n: int) -> int:
    return prod(factorize(n))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Canonical presentation of a finite abelian group."""

    factors: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(int(n) for n in self.factors)
        object.__setattr__(self, "factors", fs)
        for n in fs:
            if n < 2:
                raise InvalidOrderError(f"invariant factor {n} < 2")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise SpecError(f"not a divisor chain: {fs}")

    @staticmethod
    def zero() -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(())

    @staticmethod
    def from_cyclic_orders(orders) -> "FiniteAbelianGroup":
        """Canonicalize an arbitrary direct sum of cyclic groups via CRT."""
        primary: dict[int, list[int]] = {}
        for n in orders:
            if n == 0:
                raise InvalidOrderError("cyclic order 0 is not finite")
            for p, e in factorize(n).items():
                primary.setdefault(p, []).append(e)
        for exps in primary.values():
            exps.sort(reverse=True)
        length = max((len(v) for v in primary.values()), default=0)
        chain = []
        for i in range(length):
            chain.append(
                prod(p ** exps[i] for p, exps in primary.items() if i < len(exps))
            )
        return FiniteAbelianGroup(tuple(reversed(chain)))

    @cached_property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_zero(self) -> bool:
        return not self.factors

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) <= 1

    @cached_property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    @cached_property
    def primary_parts(self) -> dict[int, tuple[int, ...]]:
        """prime -> descending tuple of prime-power orders of the CRT pieces."""
        parts: dict[int, list[int]] = {}
        for n in self.factors:
            for p, e in factorize(n).items():
                parts.setdefault(p, []).append(p**e)
        return {p: tuple(sorted(v, reverse=True)) for p, v in sorted(parts.items())}

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(self.primary_parts)

    @cached_property
    def cyclic_pieces(self) -> tuple[tuple[int, int, int, Element], ...]:
        """CRT pieces (p, exponent, coordinate, generator element)."""
        pieces = []
        for i, n in enumerate(self.factors):
            for p, e in sorted(factorize(n).items()):
                gen = tuple(n // p**e if j == i else 0 for j in range(self.rank))
                pieces.append((p, e, i, gen))
        return tuple(pieces)

    def crt_coefficients(self, i: int) -> dict[int, int]:
        """c_p with sum_p c_p * (n_i / p^e_p) = 1 (mod n_i)."""
        n = self.factors[i]
        out = {}
        for p, e in factorize(n).items():
            u = n // p**e
            out[p] = pow(u, -1, p**e)
        return out

    def spec_string(self) -> str:
        if not self.factors:
            return "Z1"
        return "+".join(f"Z{n}" for n in self.factors)

    def direct_sum(self, other: "FiniteAbelianGroup") -> "FiniteAbelianGroup":
        return FiniteAbelianGroup.from_cyclic_orders(self.factors + other.factors)

    def reduce(self, vec) -> Element:
        if len(vec) != self.rank:
            raise DimensionError(
                f"element of length {len(vec)} in group of rank {self.rank}"
            )
        return tuple(v % n for v, n in zip(vec, self.factors))

    @property
    def zero_element(self) -> Element:
        return (0,) * self.rank

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.factors))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % n for a, n in zip(x, self.factors))

    def scale(self, c: int, x: Element) -> Element:
        return tuple((c * a) % n for a, n in zip(x, self.factors))

    def element_order(self, x: Element) -> int:
        out = 1
        for a, n in zip(x, self.factors):
            d = n // gcd(a, n)
            out = out * d // gcd(out, d)
        return out

    def elements(self):
        return iproduct(*(range(n) for n in self.factors))

    def __str__(self):
        return self.spec_string()


def parse_group_spec(text: str) -> FiniteAbelianGroup:
    """Parse `Z<n>` / `Z<n>^<e>` terms joined by '+' into canonical form."""
    orders: list[int] = []
    pos = 0
    n_text = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n_text and text[pos].isspace():
            pos += 1

    skip_ws()
    if pos == n_text:
        raise SpecError("empty group spec")
    while True:
        skip_ws()
        if pos >= n_text or text[pos] != "Z":
            raise SpecError(f"expected 'Z' at position {pos} in {text!r}")
        pos += 1
        start = pos
        while pos < n_text and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise SpecError(f"expected digits at position {pos} in {text!r}")
        n = int(text[start:pos])
        if n == 0:
            raise InvalidOrderError(f"Z0 at position {start} in {text!r}")
        e = 1
        if pos < n_text and text[pos] == "^":
            pos += 1
            start = pos
            while pos < n_text and text[pos].isdigit():
                pos += 1
            if start == pos:
                raise SpecError(f"expected exponent digits at position {pos}")
            e = int(text[start:pos])
            if e == 0:
                raise SpecError(f"exponent 0 at position {start} in {text!r}")
        orders.extend([n] * e)
        skip_ws()
        if pos == n_text:
            break
        if text[pos] != "+":
            raise SpecError(f"expected '+' at position {pos} in {text!r}")
        pos += 1
    return FiniteAbelianGroup.from_cyclic_orders(orders)


# ---------------------------------------------------------------------------
# Subgroups


@dataclass(frozen=True)
class Subgroup:
    """Canonical HNF basis of the preimage lattice of a subgroup."""

    group: FiniteAbelianGroup
    rows: intmat.Matrix

    @cached_property
    def order(self) -> int:
        k = self.group.rank
        det = prod(self.rows[i][i] for i in range(k))
        return self.group.order // det

    @property
    def index(self) -> int:
        return self.group.order // self.order

    def contains_vector(self, vec) -> bool:
        v = list(vec)
        rows = self.rows
        for i in range(len(v)):
            q, r = divmod(v[i], rows[i][i])
            if r:
                return False
            if q:
                for j in range(i, len(v)):
                    v[j] -= q * rows[i][j]
        return True

    def __contains__(self, elem: Element) -> bool:
        return self.contains_vector(elem)

    def coefficients_of(self, vec) -> tuple[int, ...]:
        """u with u * rows = vec; vec must lie in the lattice."""
        v = list(vec)
        rows = self.rows
        out = []
        for i in range(len(v)):
            q, r = divmod(v[i], rows[i][i])
            if r:
                raise ContextError("vector not in subgroup lattice")
            out.append(q)
            if q:
                for j in range(i, len(v)):
                    v[j] -= q * rows[i][j]
        return tuple(out)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        _same_group(self, other)
        return all(self.contains_vector(row) for row in other.rows)

    def generators(self) -> tuple[Element, ...]:
        """Reduced nonzero basis rows; the serialized form of a subgroup."""
        gens = []
        for row in self.rows:
            g = self.group.reduce(row)
            if any(g):
                gens.append(g)
        return tuple(gens)

    def elements(self):
        g = self.group
        k = g.rank
        ranges = [range(g.factors[i] // self.rows[i][i]) for i in range(k)]
        for coeffs in iproduct(*ranges):
            vec = [0] * k
            for c, row in zip(coeffs, self.rows):
                if c:
                    for j in range(k):
                        vec[j] += c * row[j]
            yield g.reduce(vec)

    @property
    def is_zero(self) -> bool:
        return self.order == 1

    @property
    def is_full(self) -> bool:
        return self.order == self.group.order

    def sort_key(self):
        return (self.order, self.rows)

    def __str__(self):
        gens = self.generators()
        return "<" + ", ".join(map(str, gens)) + ">" if gens else "<0>"


def _same_group(a: Subgroup, b: Subgroup) -> None:
    if a.group != b.group:
        raise ContextError(
            f"subgroups of different ambient groups: {a.group} vs {b.group}"
        )


def _diag_rows(values) -> list[list[int]]:
    k = len(values)
    return [[values[i] if j == i else 0 for j in range(k)] for i in range(k)]


def subgroup_from_rows(g: FiniteAbelianGroup, rows) -> Subgroup:
    """Subgroup generated by integer vectors (lattice completed with diag(n))."""
    stacked = [list(r) for r in rows] + _diag_rows(g.factors)
    return Subgroup(g, intmat.hnf(stacked, g.rank))


def subgroup_from_generators(g: FiniteAbelianGroup, gens) -> Subgroup:
    for x in gens:
        if len(x) != g.rank:
            raise DimensionError(
                f"generator of length {len(x)} in group of rank {g.rank}"
            )
    return subgroup_from_rows(g, gens)


def zero_subgroup(g: FiniteAbelianGroup) -> Subgroup:
    return Subgroup(g, intmat.freeze(_diag_rows(g.factors)))


def full_subgroup(g: FiniteAbelianGroup) -> Subgroup:
    return Subgroup(g, intmat.identity(g.rank))


def meet(a: Subgroup, b: Subgroup) -> Subgroup:
    """Lattice intersection K and L (both contain diag(n)Z^k)."""
    _same_group(a, b)
    k = a.group.rank
    stacked = [list(r) for r in a.rows] + [[-v for v in r] for r in b.rows]
    ker = intmat.row_kernel(stacked, k)
    vecs = [intmat.mat_mul([row[:k]], a.rows)[0] for row in ker]
    return subgroup_from_rows(a.group, vecs)


def join(a: Subgroup, b: Subgroup) -> Subgroup:
    _same_group(a, b)
    return subgroup_from_rows(a.group, list(a.rows) + list(b.rows))


def intersect_and_sum(a: Subgroup, b: Subgroup) -> tuple[Subgroup, Subgroup]:
    return meet(a, b), join(a, b)


def scaled_subgroup(s: Subgroup, c: int) -> Subgroup:
    """Subgroup {c*x : x in S}."""
    return subgroup_from_rows(s.group, [[c * v for v in row] for row in s.rows])


def power_subgroup(g: FiniteAbelianGroup, m: int) -> Subgroup:
    """m*G; its lattice is diagonal with entries gcd(m, n_i)."""
    return Subgroup(g, intmat.freeze(_diag_rows([gcd(m, n) for n in g.factors])))


def socle(g: FiniteAbelianGroup) -> Subgroup:
    """Sum of all simple subgroups: generated by (n_i/p) e_i for p | n_i."""
    rows = []
    for i, n in enumerate(g.factors):
        for p in factorize(n):
            rows.append([n // p if j == i else 0 for j in range(g.rank)])
    return subgroup_from_rows(g, rows)


def radical(g: FiniteAbelianGroup) -> Subgroup:
    """Intersection of all maximal subgroups: generated by rad(n_i) e_i."""
    rows = [
        [_radical(n) if j == i else 0 for j in range(g.rank)]
        for i, n in enumerate(g.factors)
    ]
    return subgroup_from_rows(g, rows)


def primary_component(g: FiniteAbelianGroup, p: int) -> Subgroup:
    """The p-torsion part of G."""
    rows = []
    for i, n in enumerate(g.factors):
        e = 0
        nn = n
        while nn % p == 0:
            nn //= p
            e += 1
        if e:
            rows.append([n // p**e if j == i else 0 for j in range(g.rank)])
    return subgroup_from_rows(g, rows)


def primary_block(g: FiniteAbelianGroup, primes) -> Subgroup:
    """Direct sum of the p-primary components for p in `primes`."""
    rows: list[list[int]] = []
    for p in primes:
        rows.extend(primary_component(g, p).rows)
    return subgroup_from_rows(g, rows)


def purity_violation(s: Subgroup) -> tuple[int, int] | None:
    """A pair (p, t) with K meet p^t G != p^t K, or None when K is pure.

    For groups of bounded exponent, purity is equivalent to being a direct
    summand, which is how the summand test avoids scanning the lattice.
    """
    g = s.group
    for p, powers in g.primary_parts.items():
        emax = 0
        while p**emax < powers[0]:
            emax += 1
        for t in range(1, emax + 1):
            pt = p**t
            left = meet(s, power_subgroup(g, pt))
            right = scaled_subgroup(s, pt)
            if left.rows != right.rows:
                return (p, t)
    return None


# ---------------------------------------------------------------------------
# Presentations of quotients and subgroups


@dataclass(frozen=True)
class CokernelData:
    """Presentation of Z^k modulo a full-rank relation lattice."""

    quotient: FiniteAbelianGroup
    proj_rows: intmat.Matrix  # q x k; projection of a vector in Z^k
    lift_rows: intmat.Matrix  # q x k; integer lift of each quotient generator

    def project(self, vec) -> Element:
        q = self.quotient
        return tuple(
            sum(r * v for r, v in zip(row, vec)) % n
            for row, n in zip(self.proj_rows, q.factors)
        )


def cokernel_presentation(rel_rows: intmat.Matrix, k: int) -> CokernelData:
    """Present Z^k / rowspan(rel_rows) with explicit projection and lifts."""
    _, d, v = intmat.smith_normal_form(rel_rows)
    diag = [d[i][i] for i in range(k)]
    kept = [i for i, val in enumerate(diag) if val >= 2]
    quotient = FiniteAbelianGroup(tuple(diag[i] for i in kept))
    proj = tuple(tuple(v[i][j] for i in range(k)) for j in kept)
    w = intmat.inverse_unimodular(v)
    lifts = tuple(tuple(w[j]) for j in kept)
    return CokernelData(quotient, proj, lifts)


def quotient_presentation(s: Subgroup) -> CokernelData:
    """Presentation of G / S (elements of G project along proj_rows)."""
    return cokernel_presentation(s.rows, s.group.rank)


@dataclass(frozen=True)
class SubgroupPresentation:
    """A subgroup as an abstract group, with generators realized in G."""

    abstract: FiniteAbelianGroup
    gens_in_ambient: tuple[Element, ...]
    _coeff_data: CokernelData
    _subgroup: Subgroup

    def coordinates_of(self, elem: Element) -> Element:
        u = self._subgroup.coefficients_of(elem)
        return self._coeff_data.project(u)


def subgroup_presentation(s: Subgroup) -> SubgroupPresentation:
    g = s.group
    k = g.rank
    rel = [
        s.coefficients_of([g.factors[i] if j == i else 0 for j in range(k)])
        for i in range(k)
    ]
    data = cokernel_presentation(intmat.freeze(rel), k)
    gens = tuple(
        g.reduce(intmat.mat_mul([lift], s.rows)[0]) for lift in data.lift_rows
    )
    return SubgroupPresentation(data.quotient, gens, data, s)


def subgroup_iso_type(s: Subgroup) -> tuple[int, ...]:
    return subgroup_presentation(s).abstract.factors


def quotient_type(s: Subgroup) -> tuple[int, ...]:
    return quotient_presentation(s).quotient.factors


# ---------------------------------------------------------------------------
# Embeddability (equivalently: realizability as a quotient)


def _exponent_partition(factors: tuple[int, ...], p: int) -> list[int]:
    out = []
    for n in factors:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append(e)
    out.sort(reverse=True)
    return out


def embeds(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """Whether the group with invariant factors `a` embeds into `b`.

    Finite abelian A embeds in B iff for every prime the sorted exponent
    partitions dominate coordinatewise; for finite abelian groups the same
    criterion decides realizability as a quotient.
    """
    primes = {p for n in a for p in factorize(n)}
    for p in primes:
        pa = _exponent_partition(a, p)
        pb = _exponent_partition(b, p)
        if len(pa) > len(pb):
            return False
        if any(x > y for x, y in zip(pa, pb)):
            return False
    return True


# ---------------------------------------------------------------------------
# Subgroup enumeration (lazy, canonical order: ascending order, then basis)


def _diag_choices(factors, det_target):
    """Yield divisor tuples d with d_i | n_i and prod(d) = det_target."""

    def rec(i, remaining):
        if i == len(factors):
            if remaining == 1:
                yield ()
            return
        tail_max = prod(factors[i:])
        if remaining > tail_max:
            return
        for d in divisors(factors[i]):
            if remaining % d == 0:
                for rest in rec(i + 1, remaining // d):
                    yield (d,) + rest

    yield from rec(0, det_target)


def annihilator(s: Subgroup) -> Subgroup:
    """Dual subgroup under the pairing <x, y> = sum x_i y_i / n_i mod 1.

    Inclusion-reversing bijection with |ann(S)| = |G| / |S|; used to
    enumerate small subgroups as duals of small-index ones.
    """
    g = s.group
    if g.is_zero:
        return s
    big = g.exponent
    bt = [
        [row[i] * (big // g.factors[i]) for row in s.rows] for i in range(g.rank)
    ]
    sols = intmat.congruence_kernel(bt, [big] * g.rank)
    return subgroup_from_rows(g, sols)


def _subgroups_with_det(g: FiniteAbelianGroup, det_target: int):
    """All subgroups whose lattice has determinant det_target (unsorted).

    Small determinants enumerate directly over HNF candidates; large ones
    (small subgroups) go through the annihilator duality so the candidate
    space stays proportional to the result.
    """
    if det_target * det_target > g.order:
        for t in _subgroups_with_det_direct(g, g.order // det_target):
            yield annihilator(t)
        return
    yield from _subgroups_with_det_direct(g, det_target)


def _subgroups_with_det_direct(g: FiniteAbelianGroup, det_target: int):
    k = g.rank
    n = g.factors
    for diag in _diag_choices(n, det_target):
        free_positions = [
            (j, i) for i in range(k) if diag[i] > 1 for j in range(i)
        ]
        ranges = [range(diag[i]) for (_, i) in free_positions]
        for combo in iproduct(*ranges):
            rows = [
                [diag[i] if j == i else 0 for j in range(k)] for i in range(k)
            ]
            for (j, i), val in zip(free_positions, combo):
                rows[j][i] = val
            cand = Subgroup(g, intmat.freeze(rows))
            # keep only lattices containing diag(n) Z^k
            ok = True
            for i in range(k):
                vec = [n[i] if j == i else 0 for j in range(k)]
                if not cand.contains_vector(vec):
                    ok = False
                    break
            if ok:
                yield cand


def iter_subgroups(g: FiniteAbelianGroup, min_order: int = 1, max_order: int | None = None):
    """Yield all subgroups in canonical order (order ascending, basis lex).

    Lazy by order: callers that exit early never pay for the large orders.
    """
    total = g.order
    for o in divisors(total):
        if o < min_order:
            continue
        if max_order is not None and o > max_order:
            return
        batch = sorted(_subgroups_with_det(g, total // o), key=lambda s: s.rows)
        yield from batch


def count_subgroups_of_order(g: FiniteAbelianGroup, o: int) -> int:
    return sum(1 for _ in _subgroups_with_det(g, g.order // o)) if g.order % o == 0 else 0
