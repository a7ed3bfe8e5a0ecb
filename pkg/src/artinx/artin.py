"""Artin exponents of finite groups, by two independent methods.

For a family F of subgroups (closed under conjugation, described by lattice
class indices; the default is all cyclic subgroups), let e_F be the ghost
vector that is 1 on classes in F and 0 elsewhere.  The exponent is the least
n >= 1 with n * e_F in the image of the Burnside ring.

Method 1 (congruences): for every pair U normal in V with prime-power index
(V:U) > 1, count the cosets vU of V/U whose extension <v, U> lies in F; by
a counting argument n must be divisible by (V:U) / gcd((V:U), count).  The
exponent candidate is the lcm of these forced divisors.

Method 2 (marks): scan the divisors of |G| in increasing order and return
the first n for which n * e_F solves integrally against the table of marks.

Method 1 gives divisors that are always necessary, so method 2 can never
return less; the two agreeing is a strong end-to-end check and any
disagreement is raised loudly rather than reconciled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Optional, Sequence, Union

from .burnside import MarkTable, NotIntegral, build_mark_table, solve_membership
from .groups import GroupTable, as_prime_power, divisors, is_cyclic_group
from .lattice import (
    SubgroupLattice,
    centralizer,
    closure_mask,
    cosets,
    enumerate_subgroups,
    is_normal_in,
    mask_elements,
    quotient_group,
    subgroup_from_mask,
)


class MethodDisagreement(RuntimeError):
    """The congruence and mark-table methods produced different exponents."""

    def __init__(self, spec: str, family: str, congruence: int, marks: int) -> None:
        super().__init__(
            f"methods disagree for {spec} (family {family}): "
            f"congruence={congruence} marks={marks}"
        )
        self.spec = spec
        self.family = family
        self.congruence = congruence
        self.marks = marks


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    """A conjugation-closed collection of subgroups, as lattice class
    indices; classes=None means every cyclic subgroup."""

    classes: Optional[frozenset[int]] = None


ALL_CYCLIC = Family(None)


def family_label(family: Family) -> str:
    if family.classes is None:
        return "cyclic"
    return "classes:" + ",".join(str(i) for i in sorted(family.classes))


def family_class_set(lattice: SubgroupLattice, family: Family) -> frozenset[int]:
    """The family as an explicit set of class indices of the given lattice."""
    if family.classes is None:
        return frozenset(lattice.cyclic_class_indices())
    n = len(lattice.classes)
    for i in family.classes:
        if not 0 <= i < n:
            raise ValueError(f"family class index {i} out of range 0..{n - 1}")
    return family.classes


def family_vector(lattice: SubgroupLattice, family: Family) -> tuple[int, ...]:
    """Ghost vector of the family idempotent: 1 on member classes, else 0."""
    members = family_class_set(lattice, family)
    return tuple(1 if i in members else 0 for i in range(len(lattice.classes)))


def _family_vector_from_table(table: MarkTable, family: Family) -> tuple[int, ...]:
    if family.classes is None:
        return tuple(1 if c else 0 for c in table.class_cyclic)
    for i in family.classes:
        if not 0 <= i < table.n:
            raise ValueError(f"family class index {i} out of range 0..{table.n - 1}")
    return tuple(1 if i in family.classes else 0 for i in range(table.n))


# ---------------------------------------------------------------------------
# coset counting
# ---------------------------------------------------------------------------


def _is_cyclic_mask(group: GroupTable, mask: int) -> bool:
    return any(group.cyclic_mask(x) == mask for x in mask_elements(mask))


def _extend_by_element(group: GroupTable, u_mask: int, u_elems: Sequence[int], v: int) -> int:
    """Bit set of U<v> = union of the cosets U v^k.  Requires that v
    normalize U, so that the union is the subgroup <U, v>."""
    mask = u_mask
    frontier = list(u_elems)
    mult = group.mult
    while frontier:
        new = []
        for x in frontier:
            y = mult[x][v]
            if not mask >> y & 1:
                mask |= 1 << y
                new.append(y)
        frontier = new
    return mask


def _pair_profile(
    group: GroupTable, lattice: SubgroupLattice, u_mask: int, v_mask: int
) -> dict[int, int]:
    """For U <= V, how many cosets vU of V/U generate a subgroup <v, U> in
    each lattice class.  <v, U> depends only on the coset, so this is a
    finite profile; it is cached on the lattice and shared by every family."""
    cache = lattice._cache.setdefault("pair_profiles", {})
    key = (u_mask, v_mask)
    hit = cache.get(key)
    if hit is not None:
        return hit
    normal = group.is_abelian or is_normal_in(group, u_mask, v_mask)
    u_elems = mask_elements(u_mask)
    u_gens = lattice.generators_of(u_mask)
    profile: dict[int, int] = {}
    for v in cosets(group, v_mask, u_mask):
        if normal:
            m = _extend_by_element(group, u_mask, u_elems, v)
        else:
            m = closure_mask(group, u_gens + (v,))
        cls = lattice.class_of[m]
        profile[cls] = profile.get(cls, 0) + 1
    cache[key] = profile
    return profile


def _cyclic_coset_count_p_group(group: GroupTable, u_mask: int, v_mask: int) -> int:
    """Cosets vU of V/U with <v, U> cyclic, for V a p-group and U cyclic.

    In a p-group, <v, U> is cyclic exactly when U <= <v> (the subgroups of a
    cyclic p-group are totally ordered), and then every element of the coset
    vU qualifies; so qualifying elements outside U come in blocks of |U|.
    """
    u_order = bin(u_mask).count("1")
    v_elems = mask_elements(v_mask)
    if any(group.cyclic_mask(x) == v_mask for x in v_elems):
        return len(v_elems) // u_order
    qualifying = 0
    for x in v_elems:
        if not u_mask >> x & 1 and group.cyclic_mask(x) & u_mask == u_mask:
            qualifying += 1
    if qualifying % u_order:
        raise AssertionError("qualifying elements did not fill whole cosets")
    return 1 + qualifying // u_order


def cyclic_count(
    group: GroupTable,
    u_mask: int,
    v_mask: int,
    family: Family = ALL_CYCLIC,
    lattice: Optional[SubgroupLattice] = None,
    central_reduction: bool = False,
) -> int:
    """Number of cosets vU of V/U whose extension <v, U> belongs to the family.

    Requires U normal in V (the count is only congruence-meaningful then).
    Explicit-class families need the lattice (class indices refer to it).
    With central_reduction=True the count is recomputed through the p-part
    reduction (valid when U is cyclic and central in V) and cross-checked.
    """
    if not is_normal_in(group, u_mask, v_mask):
        raise ValueError("U must be normal in V")
    direct = _coset_count(group, u_mask, v_mask, family, lattice)
    if central_reduction:
        if family.classes is not None:
            raise ValueError("central reduction applies to the cyclic family only")
        reduced = _reduced_cyclic_count(group, u_mask, v_mask)
        if reduced is not None and reduced != direct:
            raise RuntimeError(
                f"central reduction disagrees with the direct count: "
                f"{reduced} != {direct}"
            )
    return direct


def _coset_count(
    group: GroupTable,
    u_mask: int,
    v_mask: int,
    family: Family,
    lattice: Optional[SubgroupLattice],
) -> int:
    if family.classes is None:
        if not _is_cyclic_mask(group, u_mask):
            return 0  # every extension contains U, so none is cyclic
        if as_prime_power(bin(v_mask).count("1")):
            return _cyclic_coset_count_p_group(group, u_mask, v_mask)
        if lattice is None:
            u_elems = mask_elements(u_mask)
            count = 0
            for v in cosets(group, v_mask, u_mask):
                m = closure_mask(group, tuple(u_elems) + (v,))
                if _is_cyclic_mask(group, m):
                    count += 1
            return count
        members = family_class_set(lattice, family)
    else:
        if lattice is None:
            raise ValueError("explicit-class families require the subgroup lattice")
        members = family_class_set(lattice, family)
    profile = _pair_profile(group, lattice, u_mask, v_mask)
    return sum(c for cls, c in profile.items() if cls in members)


def central_reduction_pair(
    group: GroupTable, u_mask: int, v_mask: int
) -> Optional[tuple[int, int, int]]:
    """(p, U_p, V_p) for the p-part reduction c(U, V) = c(U_p, V_p), or None.

    The reduction needs U cyclic, (V:U) a power of a prime p, and U central
    in V; then V splits as V_p x U_{p'} and the p-parts are exactly the
    elements of p-power order."""
    u_elems = mask_elements(u_mask)
    v_elems = mask_elements(v_mask)
    pp = as_prime_power(len(v_elems) // len(u_elems))
    if pp is None or not _is_cyclic_mask(group, u_mask):
        return None
    mult = group.mult
    if any(mult[u][v] != mult[v][u] for u in u_elems for v in v_elems):
        return None
    p = pp[0]
    vp_mask = 0
    for x in v_elems:
        order = group.element_order(x)
        while order % p == 0:
            order //= p
        if order == 1:
            vp_mask |= 1 << x
    subgroup_from_mask(group, vp_mask, check=True)
    up_mask = vp_mask & u_mask
    if bin(vp_mask).count("1") * len(u_elems) != len(v_elems) * bin(up_mask).count("1"):
        raise AssertionError("p-part indices disagree under the central hypothesis")
    return p, up_mask, vp_mask


def _reduced_cyclic_count(group: GroupTable, u_mask: int, v_mask: int) -> Optional[int]:
    """c(U, V) via the p-part reduction followed by the quotient step that
    shrinks U_p to order p; None when the hypotheses do not hold."""
    triple = central_reduction_pair(group, u_mask, v_mask)
    if triple is None:
        return None
    p, up_mask, vp_mask = triple
    if bin(up_mask).count("1") > p:
        shrink = 0  # p-th powers of U_p: its unique subgroup of index p
        for x in mask_elements(up_mask):
            shrink |= 1 << group.power(x, p)
        qtable, reps = quotient_group(group, vp_mask, shrink)
        u_image = 0
        for i, r in enumerate(reps):
            if up_mask >> r & 1:
                u_image |= 1 << i
        return _cyclic_coset_count_p_group(qtable, u_image, (1 << qtable.order) - 1)
    return _cyclic_coset_count_p_group(group, up_mask, vp_mask)


# ---------------------------------------------------------------------------
# method 1: congruences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CongruencePair:
    """One congruence: U normal in V of prime-power index, with the family
    coset count and the divisor of the exponent it forces."""

    v_class: int
    u_class: int
    u_mask: int
    index: int
    count: int
    constraint: int


def congruence_pairs(
    group: GroupTable, lattice: SubgroupLattice, family: Family = ALL_CYCLIC
):
    """Yield every congruence pair: V over class representatives, U over all
    normal subgroups of V with (V:U) a prime power > 1."""
    abelian = group.is_abelian
    all_masks = sorted(lattice.class_of)
    for v_idx, cls in enumerate(lattice.classes):
        V = cls.representative
        vm = V.mask
        for u_mask in all_masks:
            if u_mask == vm or u_mask & vm != u_mask:
                continue
            index = V.order // bin(u_mask).count("1")
            if as_prime_power(index) is None:
                continue
            if not abelian and not is_normal_in(group, u_mask, vm):
                continue
            count = _coset_count(group, u_mask, vm, family, lattice)
            constraint = index // gcd(index, count)
            yield CongruencePair(
                v_class=v_idx,
                u_class=lattice.class_of[u_mask],
                u_mask=u_mask,
                index=index,
                count=count,
                constraint=constraint,
            )


@dataclass
class CongruenceAnalysis:
    exponent: int
    binding_pairs: tuple[CongruencePair, ...]
    pairs: Optional[tuple[CongruencePair, ...]] = None


def congruence_analysis(
    group: GroupTable,
    lattice: SubgroupLattice,
    family: Family = ALL_CYCLIC,
    keep_pairs: bool = False,
) -> CongruenceAnalysis:
    """Run method 1, tracking for each prime one pair that forces the
    highest power of that prime (a certificate for the lcm)."""
    exponent = 1
    best: dict[int, tuple[int, CongruencePair]] = {}
    kept: list[CongruencePair] = []
    for pair in congruence_pairs(group, lattice, family):
        if keep_pairs:
            kept.append(pair)
        if pair.constraint == 1:
            continue
        exponent = lcm(exponent, pair.constraint)
        p, k = as_prime_power(pair.constraint)
        if p not in best or best[p][0] < k:
            best[p] = (k, pair)
    # keep only the pairs still binding for the final lcm
    binding = tuple(
        pair
        for p, (k, pair) in sorted(best.items())
        if exponent % (p ** k) == 0 and exponent % (p ** (k + 1))
    )
    return CongruenceAnalysis(
        exponent=exponent,
        binding_pairs=binding,
        pairs=tuple(kept) if keep_pairs else None,
    )


def artin_exponent_congruence(
    group: GroupTable, lattice: SubgroupLattice, family: Family = ALL_CYCLIC
) -> int:
    return congruence_analysis(group, lattice, family).exponent


# ---------------------------------------------------------------------------
# method 2: marks
# ---------------------------------------------------------------------------


def artin_exponent_marks(
    group: GroupTable, table: MarkTable, family: Family = ALL_CYCLIC
) -> int:
    """Least divisor n of |G| with n * e_F integral in the transitive basis."""
    target = _family_vector_from_table(table, family)
    for n in divisors(group.order):
        scaled = [n * x for x in target]
        if not isinstance(solve_membership(table, scaled), NotIntegral):
            return n
    raise RuntimeError(
        "no divisor of the group order worked; the scan should always "
        "terminate because |G| times any ghost vector is integral"
    )


# ---------------------------------------------------------------------------
# closed-form predictions
# ---------------------------------------------------------------------------


def recognize_2group(group: GroupTable) -> str:
    """Classify a 2-group as dihedral / quaternion / semidihedral / other by
    searching for the defining pair of generators: g spanning a cyclic
    subgroup of index 2 and order >= 4, h outside it, with h^2 and hgh^-1 as
    each shape requires.  Cyclic 2-groups admit no such pair and fall under
    "other"."""
    order = group.order
    pp = as_prime_power(order)
    if order > 1 and (pp is None or pp[0] != 2):
        raise ValueError("recognize_2group expects a 2-group")
    half = order // 2
    if half < 4:
        return "other"
    for g in range(1, order):
        if group.element_order(g) != half:
            continue
        gm = group.cyclic_mask(g)
        g_inv = group.inv_of(g)
        q_square = group.power(g, half // 2)
        sd_twist = group.power(g, half // 2 - 1)
        for h in range(1, order):
            if gm >> h & 1:
                continue
            hh = group.mul(h, h)
            conj = group.conj(h, g)
            if hh == 0 and conj == g_inv:
                return "dihedral"
            if hh == q_square and conj == g_inv:
                return "quaternion"
            if order >= 16 and hh == 0 and conj == sd_twist:
                return "semidihedral"
    return "other"


@dataclass
class Prediction:
    """Closed-form exponent prediction; value is None outside the covered
    branches.  details carries the alternative formulas that were considered."""

    value: Optional[int]
    branch: str
    details: dict[str, int] = field(default_factory=dict)


def _order2_center_rules(group: GroupTable) -> Optional[dict[str, int]]:
    """For a 2-group with center U of order 2, the "4 if cyclic else 2" rule
    evaluated on both candidate readings of the distinguished subgroup:
    {g : [g, G] <= U} (bracket with the whole group) and {g : [g, U] <= U}
    (bracket with U only, which is all of G for central U).  Both are
    reported; neither reading is silently preferred."""
    full = (1 << group.order) - 1
    z_mask = centralizer(group, full)
    if bin(z_mask).count("1") != 2:
        return None
    whole = 0
    center_only = 0
    for g in range(group.order):
        if all(z_mask >> group.commutator(g, x) & 1 for x in range(group.order)):
            whole |= 1 << g
        if all(z_mask >> group.commutator(g, x) & 1 for x in mask_elements(z_mask)):
            center_only |= 1 << g
    rules = {}
    for label, mask in (("bracket-whole-group", whole), ("bracket-center-only", center_only)):
        sub = subgroup_from_mask(group, mask, check=True)
        rules[label] = 4 if sub.is_cyclic else 2
    return rules


def closed_form_predictor(group: GroupTable) -> Prediction:
    """Predicted exponent for the cyclic family, where a formula is known."""
    if is_cyclic_group(group):
        return Prediction(1, "cyclic")
    pp = as_prime_power(group.order)
    if pp is None:
        return Prediction(None, "not a p-group")
    p, alpha = pp
    generic = p ** (alpha - 1)
    if p != 2:
        return Prediction(generic, "odd p-group", {"generic": generic})
    details = {"generic": generic}
    rules = _order2_center_rules(group)
    if rules is not None:
        details.update(rules)
    shape = recognize_2group(group)
    if shape in ("dihedral", "quaternion"):
        return Prediction(2, "Q or D", details)
    if shape == "semidihedral":
        # the whole-group bracket rule, not the generic power, is what the
        # computed values track on this branch; all candidates are reported
        assert rules is not None  # semidihedral groups have a center of order 2
        return Prediction(rules["bracket-whole-group"], "SD", details)
    return Prediction(generic, "2-group other", details)


# ---------------------------------------------------------------------------
# cyclic-extension counting (the lemma suite's raw material)
# ---------------------------------------------------------------------------


def cyclic_extensions(group: GroupTable, h_mask: int, u_mask: int, p: int) -> frozenset[int]:
    """Masks of the cyclic subgroups V with U <= V <= H and (V:U) = p.

    Every such V is generated by a single element of order p|U|, so scanning
    element orders is exhaustive."""
    target = p * bin(u_mask).count("1")
    out = set()
    for x in mask_elements(h_mask):
        if group.element_order(x) == target:
            cm = group.cyclic_mask(x)
            if cm & u_mask == u_mask:
                out.add(cm)
    return frozenset(out)


@dataclass(frozen=True)
class CSetReport:
    """Cyclic p-extensions of U inside a p-group H: all of them (c_masks),
    the ones normal in H (c_prime_masks), and for comparison the extensions
    inside H' = {h in H : [h, H] <= U} (the two collections coincide)."""

    c_masks: frozenset[int]
    c_prime_masks: frozenset[int]
    h_prime_mask: int
    c_of_h_prime_masks: frozenset[int]

    @property
    def c_count(self) -> int:
        return len(self.c_masks)

    @property
    def c_prime_count(self) -> int:
        return len(self.c_prime_masks)


def count_C_sets(group: GroupTable, h_mask: int, u_mask: int) -> CSetReport:
    """Count cyclic index-p extensions of U in H, for H a nontrivial p-group
    and U cyclic and normal in H; H' is re-verified to be a subgroup."""
    pp = as_prime_power(bin(h_mask).count("1"))
    if pp is None:
        raise ValueError("H must be a nontrivial p-group")
    p = pp[0]
    if not _is_cyclic_mask(group, u_mask):
        raise ValueError("U must be cyclic")
    if not is_normal_in(group, u_mask, h_mask):
        raise ValueError("U must be normal in H")
    h_elems = mask_elements(h_mask)
    h_prime = 0
    for g in h_elems:
        if all(u_mask >> group.commutator(g, x) & 1 for x in h_elems):
            h_prime |= 1 << g
    subgroup_from_mask(group, h_prime, check=True)
    c_masks = cyclic_extensions(group, h_mask, u_mask, p)
    return CSetReport(
        c_masks=c_masks,
        c_prime_masks=frozenset(
            m for m in c_masks if is_normal_in(group, m, h_mask)
        ),
        h_prime_mask=h_prime,
        c_of_h_prime_masks=cyclic_extensions(group, h_prime, u_mask, p),
    )


# ---------------------------------------------------------------------------
# Sylow comparison
# ---------------------------------------------------------------------------


def subgroup_as_group(group: GroupTable, mask: int) -> tuple[GroupTable, list[int]]:
    """A subgroup as a standalone GroupTable, plus the list mapping its
    element indices back to elements of the ambient group."""
    elems = mask_elements(mask)
    index = {g: i for i, g in enumerate(elems)}
    try:
        mult = [[index[group.mul(a, b)] for b in elems] for a in elems]
    except KeyError:
        raise ValueError("mask is not closed under multiplication") from None
    return GroupTable(mult), elems


def _transfer_family(
    family: Family,
    lattice: SubgroupLattice,
    sub_lattice: SubgroupLattice,
    elems: list[int],
) -> Family:
    """Restrict a family of the ambient group to a subgroup: a class of the
    subgroup's lattice is kept when its members belong to the family in the
    ambient lattice."""
    if family.classes is None:
        return ALL_CYCLIC
    members = family.classes
    kept = []
    for i, cls in enumerate(sub_lattice.classes):
        ambient_mask = 0
        for x in mask_elements(cls.representative.mask):
            ambient_mask |= 1 << elems[x]
        if lattice.class_of[ambient_mask] in members:
            kept.append(i)
    return Family(frozenset(kept))


@dataclass(frozen=True)
class SylowComparison:
    p: int
    exponent_part: int
    sylow_order: int
    sylow_exponent: int

    @property
    def match(self) -> bool:
        return self.exponent_part == self.sylow_exponent


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def sylow_reduction_report(
    group: GroupTable,
    lattice: SubgroupLattice,
    family: Family,
    exponent: int,
) -> tuple[SylowComparison, ...]:
    """For each prime p dividing |G|, compare the p-part of the exponent with
    the exponent of a Sylow p-subgroup for the restricted family.  The two
    need not agree in general; this is reported, not asserted."""
    out = []
    for p in _prime_factors(group.order):
        sylow_order = _p_part(group.order, p)
        part = _p_part(exponent, p)
        if sylow_order == group.order:
            out.append(SylowComparison(p, part, sylow_order, exponent))
            continue
        sylow_mask = next(
            c.representative.mask
            for c in lattice.classes
            if c.representative.order == sylow_order
        )
        sub, elems = subgroup_as_group(group, sylow_mask)
        sub_lattice = enumerate_subgroups(sub)
        sub_family = _transfer_family(family, lattice, sub_lattice, elems)
        sub_exponent = artin_exponent_marks(sub, build_mark_table(sub, sub_lattice), sub_family)
        out.append(SylowComparison(p, part, sylow_order, sub_exponent))
    return tuple(out)


# ---------------------------------------------------------------------------
# the full report
# ---------------------------------------------------------------------------


@dataclass
class ExponentReport:
    group: str
    order: int
    family: str
    method: str
    exponent: int
    exponent_congruence: Optional[int]
    exponent_marks: Optional[int]
    prediction: Prediction
    prime_parts: dict[int, int]
    binding_pairs: tuple[CongruencePair, ...]
    pairs: Optional[tuple[CongruencePair, ...]] = None
    sylow: Optional[tuple[SylowComparison, ...]] = None

    @property
    def methods_agree(self) -> Optional[bool]:
        """True/False when both methods ran; None when only one did."""
        if self.exponent_congruence is None or self.exponent_marks is None:
            return None
        return self.exponent_congruence == self.exponent_marks

    @property
    def prediction_matches(self) -> Optional[bool]:
        """Whether the closed-form prediction equals the computed exponent
        (None when the predictor declined)."""
        if self.prediction.value is None:
            return None
        return self.prediction.value == self.exponent


def compute_exponent_report(
    group: GroupTable,
    spec_text: str,
    family: Family = ALL_CYCLIC,
    method: str = "both",
    lattice: Optional[SubgroupLattice] = None,
    table: Optional[MarkTable] = None,
    include_pairs: bool = False,
    include_sylow: bool = False,
) -> ExponentReport:
    """Compute the exponent by the requested method(s) and assemble the
    report.  With method='both' a mismatch raises MethodDisagreement."""
    if method not in ("both", "congruence", "marks"):
        raise ValueError(f"unknown method {method!r}")
    if lattice is None:
        lattice = enumerate_subgroups(group)

    exponent_congruence = None
    binding: tuple[CongruencePair, ...] = ()
    pairs = None
    if method in ("both", "congruence"):
        analysis = congruence_analysis(group, lattice, family, keep_pairs=include_pairs)
        exponent_congruence = analysis.exponent
        binding = analysis.binding_pairs
        pairs = analysis.pairs

    exponent_marks = None
    if method in ("both", "marks"):
        if table is None:
            table = build_mark_table(group, lattice)
        exponent_marks = artin_exponent_marks(group, table, family)

    if (
        exponent_congruence is not None
        and exponent_marks is not None
        and exponent_congruence != exponent_marks
    ):
        raise MethodDisagreement(
            spec_text, family_label(family), exponent_congruence, exponent_marks
        )
    exponent = exponent_marks if exponent_marks is not None else exponent_congruence
    assert exponent is not None

    sylow = None
    if include_sylow:
        sylow = sylow_reduction_report(group, lattice, family, exponent)

    return ExponentReport(
        group=spec_text,
        order=group.order,
        family=family_label(family),
        method=method,
        exponent=exponent,
        exponent_congruence=exponent_congruence,
        exponent_marks=exponent_marks,
        prediction=closed_form_predictor(group),
        prime_parts={p: _p_part(exponent, p) for p in _prime_factors(exponent)},
        binding_pairs=binding,
        pairs=pairs,
        sylow=sylow,
    )


def _pair_to_dict(pair: CongruencePair) -> dict:
    return {
        "v_class": pair.v_class,
        "u_class": pair.u_class,
        "u_bits_hex": format(pair.u_mask, "x"),
        "index": pair.index,
        "count": pair.count,
        "constraint": pair.constraint,
    }


def report_to_dict(report: ExponentReport) -> dict:
    """JSON-ready form of an ExponentReport."""
    out = {
        "schema": 1,
        "group": report.group,
        "order": report.order,
        "family": report.family,
        "method": report.method,
        "exponent": report.exponent,
        "exponent_congruence": report.exponent_congruence,
        "exponent_marks": report.exponent_marks,
        "methods_agree": report.methods_agree,
        "prediction_matches": report.prediction_matches,
        "prediction": {
            "value": report.prediction.value,
            "branch": report.prediction.branch,
            "details": dict(report.prediction.details),
        },
        "prime_parts": {str(p): v for p, v in sorted(report.prime_parts.items())},
        "binding_pairs": [_pair_to_dict(p) for p in report.binding_pairs],
    }
    if report.pairs is not None:
        out["pairs"] = [_pair_to_dict(p) for p in report.pairs]
    if report.sylow is not None:
        out["sylow"] = [
            {
                "p": s.p,
                "exponent_part": s.exponent_part,
                "sylow_order": s.sylow_order,
                "sylow_exponent": s.sylow_exponent,
                "match": s.match,
            }
            for s in report.sylow
        ]
    return out
