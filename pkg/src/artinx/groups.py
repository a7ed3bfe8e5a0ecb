"""Finite groups as explicit multiplication tables.

Elements of a group of order n are the integers 0..n-1 with 0 the identity.
Tables are validated eagerly at construction (identity, Latin square,
associativity), so everything downstream may assume it really has a group.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence, Union

import numpy as np

ORDER_CAP = 256


class GroupSpecError(ValueError):
    """Malformed spec text, or parameters outside the supported families."""


class OrderCapError(ValueError):
    """Construction would exceed the supported maximum group order."""


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def as_prime_power(n: int) -> Optional[tuple[int, int]]:
    """Return (p, k) with n == p**k and k >= 1, or None if n is not a prime power."""
    if n < 2:
        return None
    p = _smallest_prime_factor(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def is_prime(n: int) -> bool:
    return n >= 2 and _smallest_prime_factor(n) == n


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


# ---------------------------------------------------------------------------
# Group specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cyclic:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GroupSpecError(f"cyclic order must be >= 1, got {self.n}")


@dataclass(frozen=True)
class Dihedral:
    order: int

    def __post_init__(self) -> None:
        if self.order < 4 or self.order % 2:
            raise GroupSpecError(f"dihedral order must be even and >= 4, got {self.order}")


@dataclass(frozen=True)
class Quaternion:
    order: int

    def __post_init__(self) -> None:
        if self.order < 8 or not _is_power_of_two(self.order):
            raise GroupSpecError(f"quaternion order must be a power of two >= 8, got {self.order}")


@dataclass(frozen=True)
class Semidihedral:
    order: int

    def __post_init__(self) -> None:
        if self.order < 16 or not _is_power_of_two(self.order):
            raise GroupSpecError(f"semidihedral order must be a power of two >= 16, got {self.order}")


@dataclass(frozen=True)
class Symmetric:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GroupSpecError(f"symmetric degree must be >= 1, got {self.n}")


@dataclass(frozen=True)
class Alternating:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GroupSpecError(f"alternating degree must be >= 1, got {self.n}")


@dataclass(frozen=True)
class Heisenberg:
    """3x3 upper unitriangular matrices over the prime field F_p (order p**3)."""

    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise GroupSpecError(f"Heisenberg parameter must be prime, got {self.p}")


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple["GroupSpec", ...]

    def __post_init__(self) -> None:
        if len(self.factors) < 2:
            raise GroupSpecError("direct product needs at least two factors")


@dataclass(frozen=True)
class PermGenerators:
    """Generators given in cycle notation; each generator is a tuple of cycles,
    each cycle a tuple of 1-based points.  A generator's cycles are composed
    left to right, the rightmost cycle applied first."""

    generators: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise GroupSpecError("permutation spec needs at least one generator")


GroupSpec = Union[
    Cyclic,
    Dihedral,
    Quaternion,
    Semidihedral,
    Symmetric,
    Alternating,
    Heisenberg,
    DirectProduct,
    PermGenerators,
]

_FAMILY_RE = re.compile(r"(SD|C|D|Q|S|A|H)(\d+)\Z")
_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _parse_family_token(token: str) -> GroupSpec:
    m = _FAMILY_RE.match(token)
    if not m:
        raise GroupSpecError(f"malformed group token {token!r}")
    letter, value = m.group(1), int(m.group(2))
    if letter == "C":
        return Cyclic(value)
    if letter == "D":
        return Dihedral(value)
    if letter == "Q":
        return Quaternion(value)
    if letter == "SD":
        return Semidihedral(value)
    if letter == "S":
        return Symmetric(value)
    if letter == "A":
        return Alternating(value)
    return Heisenberg(value)


def _parse_perm_generators(body: str) -> PermGenerators:
    generators = []
    for chunk in body.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise GroupSpecError("empty permutation in generator list")
        leftover = _CYCLE_RE.sub("", chunk).strip()
        if leftover:
            raise GroupSpecError(f"unparsed text {leftover!r} in permutation {chunk!r}")
        cycles = []
        for cyc in _CYCLE_RE.finditer(chunk):
            points = cyc.group(1).split()
            try:
                values = tuple(int(p) for p in points)
            except ValueError as exc:
                raise GroupSpecError(f"non-integer point in cycle {cyc.group(0)!r}") from exc
            if any(v < 1 for v in values):
                raise GroupSpecError(f"cycle points must be >= 1 in {cyc.group(0)!r}")
            if len(set(values)) != len(values):
                raise GroupSpecError(f"repeated point in cycle {cyc.group(0)!r}")
            if len(values) >= 2:
                cycles.append(values)
        generators.append(tuple(cycles))
    return PermGenerators(tuple(generators))


def parse_group_spec(text: str) -> GroupSpec:
    """Parse a spec string such as 'C12', 'C2xC4xC8', 'Q8', 'SD16', 'S4',
    'H3', or 'perm:(1 2)(3 4),(1 2 3)'."""
    if not isinstance(text, str) or not text.strip():
        raise GroupSpecError("group spec is empty")
    body = text.strip()
    if body.startswith("perm:"):
        return _parse_perm_generators(body[len("perm:"):])
    parts = body.split("x")
    if any(not part for part in parts):
        raise GroupSpecError(f"empty factor in product spec {text!r}")
    factors = tuple(_parse_family_token(part) for part in parts)
    if len(factors) == 1:
        return factors[0]
    return DirectProduct(factors)


def spec_to_text(spec: GroupSpec) -> str:
    """Inverse of parse_group_spec, up to whitespace."""
    if isinstance(spec, Cyclic):
        return f"C{spec.n}"
    if isinstance(spec, Dihedral):
        return f"D{spec.order}"
    if isinstance(spec, Quaternion):
        return f"Q{spec.order}"
    if isinstance(spec, Semidihedral):
        return f"SD{spec.order}"
    if isinstance(spec, Symmetric):
        return f"S{spec.n}"
    if isinstance(spec, Alternating):
        return f"A{spec.n}"
    if isinstance(spec, Heisenberg):
        return f"H{spec.p}"
    if isinstance(spec, DirectProduct):
        return "x".join(spec_to_text(f) for f in spec.factors)
    parts = []
    for gen in spec.generators:
        if not gen:
            parts.append("()")
        else:
            parts.append("".join("(" + " ".join(str(p) for p in c) + ")" for c in gen))
    return "perm:" + ",".join(parts)


def spec_order(spec: GroupSpec) -> Optional[int]:
    """Group order implied by the spec, or None when only closure can tell
    (permutation generators)."""
    if isinstance(spec, Cyclic):
        return spec.n
    if isinstance(spec, (Dihedral, Quaternion, Semidihedral)):
        return spec.order
    if isinstance(spec, Symmetric):
        return math.factorial(spec.n)
    if isinstance(spec, Alternating):
        return max(1, math.factorial(spec.n) // 2)
    if isinstance(spec, Heisenberg):
        return spec.p ** 3
    if isinstance(spec, DirectProduct):
        return math.prod(spec_order(f) for f in spec.factors)
    return None


# ---------------------------------------------------------------------------
# Table validation and the GroupTable type
# ---------------------------------------------------------------------------


def _validate_table(mult: Sequence[Sequence[int]]) -> None:
    n = len(mult)
    arr = np.asarray(mult, dtype=np.int32)
    if arr.shape != (n, n):
        raise ValueError("multiplication table must be square")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ValueError("multiplication table entries out of range")
    ident = np.arange(n, dtype=np.int32)
    if not np.array_equal(arr[0], ident) or not np.array_equal(arr[:, 0], ident):
        raise ValueError("element 0 is not a two-sided identity")
    if not np.array_equal(np.sort(arr, axis=1), np.tile(ident, (n, 1))):
        raise ValueError("multiplication table is not a Latin square (rows)")
    if not np.array_equal(np.sort(arr, axis=0), np.tile(ident[:, None], (1, n))):
        raise ValueError("multiplication table is not a Latin square (columns)")
    # (a*b)*c vs a*(b*c), all triples at once
    if not np.array_equal(arr[arr, :], arr[:, arr]):
        raise ValueError("multiplication table is not associative")


class GroupTable:
    """A finite group given by its full multiplication table."""

    __slots__ = (
        "order",
        "mult",
        "inv",
        "identity",
        "element_labels",
        "_element_orders",
        "_cyclic_masks",
        "_is_abelian",
    )

    def __init__(
        self,
        mult: Sequence[Sequence[int]],
        element_labels: Optional[Sequence[str]] = None,
        validate: bool = True,
    ) -> None:
        n = len(mult)
        if n == 0:
            raise ValueError("empty multiplication table")
        if n > ORDER_CAP:
            raise OrderCapError(f"group order {n} exceeds the cap of {ORDER_CAP}")
        self.order = n
        self.mult = [list(map(int, row)) for row in mult]
        if validate:
            _validate_table(self.mult)
        self.identity = 0
        self.inv = [row.index(0) for row in self.mult]
        if element_labels is not None and len(element_labels) != n:
            raise ValueError("element_labels length must match the group order")
        self.element_labels = list(element_labels) if element_labels is not None else None
        self._element_orders: Optional[list[int]] = None
        self._cyclic_masks: Optional[list[int]] = None
        self._is_abelian: Optional[bool] = None

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"GroupTable(order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inv_of(self, a: int) -> int:
        return self.inv[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mult[self.mult[g][x]][self.inv[g]]

    def commutator(self, a: int, b: int) -> int:
        """a b a^-1 b^-1."""
        return self.mult[self.mult[a][b]][self.inv[self.mult[b][a]]]

    def power(self, g: int, k: int) -> int:
        k %= self.element_order(g)
        acc = 0
        for _ in range(k):
            acc = self.mult[acc][g]
        return acc

    @property
    def is_abelian(self) -> bool:
        if self._is_abelian is None:
            mult = self.mult
            self._is_abelian = all(
                mult[a][b] == mult[b][a]
                for a in range(self.order)
                for b in range(a + 1, self.order)
            )
        return self._is_abelian

    def _fill_cycle_data(self) -> None:
        orders = [0] * self.order
        masks = [0] * self.order
        mult = self.mult
        for g in range(self.order):
            mask = 1
            x = g
            k = 1
            while x != 0:
                mask |= 1 << x
                x = mult[x][g]
                k += 1
            orders[g] = k
            masks[g] = mask
        self._element_orders = orders
        self._cyclic_masks = masks

    def element_order(self, g: int) -> int:
        if self._element_orders is None:
            self._fill_cycle_data()
        return self._element_orders[g]

    def cyclic_mask(self, g: int) -> int:
        """Bit set of the cyclic subgroup generated by g."""
        if self._cyclic_masks is None:
            self._fill_cycle_data()
        return self._cyclic_masks[g]

    def elements(self) -> range:
        return range(self.order)


def element_order(group: GroupTable, g: int) -> int:
    """Least k >= 1 with g**k the identity."""
    if not 0 <= g < group.order:
        raise ValueError(f"element {g} out of range")
    return group.element_order(g)


def is_cyclic_group(group: GroupTable) -> bool:
    return any(group.element_order(g) == group.order for g in range(group.order))


def relabeled(group: GroupTable, perm: Sequence[int]) -> GroupTable:
    """The same group with elements renamed by perm (which must fix 0)."""
    n = group.order
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of 0..order-1")
    if perm[0] != 0:
        raise ValueError("perm must fix the identity (element 0)")
    mult = [[0] * n for _ in range(n)]
    for a in range(n):
        row = group.mult[a]
        target = mult[perm[a]]
        for b in range(n):
            target[perm[b]] = perm[row[b]]
    labels = None
    if group.element_labels is not None:
        labels = [""] * n
        for i, lab in enumerate(group.element_labels):
            labels[perm[i]] = lab
    return GroupTable(mult, element_labels=labels)


# ---------------------------------------------------------------------------
# Named family realizations
# ---------------------------------------------------------------------------


def _check_cap(order: int, what: str) -> None:
    if order > ORDER_CAP:
        raise OrderCapError(f"{what} has order {order}, exceeding the cap of {ORDER_CAP}")


def _realize_cyclic(n: int):
    elements = list(range(n))

    def mul(a, b):
        return (a + b) % n

    return elements, mul


def _realize_two_generator(m: int, twist: int, square_offset: int):
    """Groups <g, h> with g of order m, h^2 = g^square_offset and
    h g h^-1 = g^twist.  Element (i, f) stands for g^i h^f."""
    elements = [(i, f) for f in (0, 1) for i in range(m)]

    def mul(a, b):
        i, f = a
        j, g = b
        k = i + (twist * j if f else j) + (square_offset if f and g else 0)
        return (k % m, f ^ g)

    return elements, mul


def _perm_parity(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    parity = 0
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p o q)(x) = p[q[x]]: q acts first."""
    return tuple(p[q[x]] for x in range(len(p)))


def _realize_symmetric(n: int):
    _check_cap(math.factorial(n), f"S{n}")
    elements = list(itertools.permutations(range(n)))

    return elements, _compose


def _realize_alternating(n: int):
    order = max(1, math.factorial(n) // 2)
    _check_cap(order, f"A{n}")
    elements = [p for p in itertools.permutations(range(n)) if _perm_parity(p) == 0]

    return elements, _compose


def _realize_heisenberg(p: int):
    _check_cap(p ** 3, f"H{p}")
    elements = list(itertools.product(range(p), repeat=3))

    def mul(a, b):
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p, (a[2] + b[2] + a[0] * b[1]) % p)

    return elements, mul


def _cycles_to_perm(cycles: Iterable[tuple[int, ...]], degree: int) -> tuple[int, ...]:
    perms = []
    for cyc in cycles:
        p = list(range(degree))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            p[a - 1] = b - 1
        perms.append(tuple(p))
    if not perms:
        return tuple(range(degree))
    return reduce(_compose, perms)


def _realize_perm_generators(spec: PermGenerators):
    degree = 1
    for gen in spec.generators:
        for cyc in gen:
            degree = max(degree, max(cyc))
    gens = [_cycles_to_perm(gen, degree) for gen in spec.generators]
    identity = tuple(range(degree))
    elements = [identity]
    seen = {identity}
    for current in elements:
        for g in gens:
            nxt = _compose(current, g)
            if nxt not in seen:
                if len(elements) >= ORDER_CAP:
                    raise OrderCapError(
                        f"permutation closure exceeds the cap of {ORDER_CAP} elements"
                    )
                seen.add(nxt)
                elements.append(nxt)
    return elements, _compose


def _realize(spec: GroupSpec):
    if isinstance(spec, Cyclic):
        _check_cap(spec.n, spec_to_text(spec))
        return _realize_cyclic(spec.n)
    if isinstance(spec, Dihedral):
        _check_cap(spec.order, spec_to_text(spec))
        return _realize_two_generator(spec.order // 2, -1, 0)
    if isinstance(spec, Quaternion):
        _check_cap(spec.order, spec_to_text(spec))
        m = spec.order // 2
        return _realize_two_generator(m, -1, m // 2)
    if isinstance(spec, Semidihedral):
        _check_cap(spec.order, spec_to_text(spec))
        m = spec.order // 2
        return _realize_two_generator(m, m // 2 - 1, 0)
    if isinstance(spec, Symmetric):
        return _realize_symmetric(spec.n)
    if isinstance(spec, Alternating):
        return _realize_alternating(spec.n)
    if isinstance(spec, Heisenberg):
        return _realize_heisenberg(spec.p)
    if isinstance(spec, DirectProduct):
        realized = [_realize(f) for f in spec.factors]
        order = math.prod(len(r[0]) for r in realized)
        _check_cap(order, spec_to_text(spec))
        muls = tuple(r[1] for r in realized)
        elements = list(itertools.product(*(r[0] for r in realized)))

        def mul(a, b):
            return tuple(m(x, y) for m, x, y in zip(muls, a, b))

        return elements, mul
    if isinstance(spec, PermGenerators):
        return _realize_perm_generators(spec)
    raise TypeError(f"unsupported spec {spec!r}")


def build_group(spec: GroupSpec) -> GroupTable:
    """Materialize the full multiplication table for a spec."""
    elements, mul = _realize(spec)
    _check_cap(len(elements), spec_to_text(spec))
    index = {e: i for i, e in enumerate(elements)}
    mult = [[index[mul(a, b)] for b in elements] for a in elements]
    return GroupTable(mult)


def group_from_spec(spec: Union[str, GroupSpec]) -> GroupTable:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    return build_group(spec)
