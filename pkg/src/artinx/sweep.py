"""Catalog sweeps: run the exponent computations and check suites over a
generated family of small groups.

The catalog covers every cyclic group up to the order bound, every abelian
group as an invariant-factor chain of up to three cyclic factors, the
dihedral / quaternion / semidihedral 2-power families, and a few standbys
(S3, S4, A4, H3).  Checks are named suites; crossmethod, cyclic, oddp,
conductor and lemmas fail the run on violation, while twogroup and sylow are
report-only comparisons whose mismatches become notes.
"""

from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .artin import (
    ALL_CYCLIC,
    Family,
    MethodDisagreement,
    artin_exponent_congruence,
    artin_exponent_marks,
    closed_form_predictor,
    compute_exponent_report,
    count_C_sets,
    recognize_2group,
    report_to_dict,
    subgroup_as_group,
)
from .burnside import build_mark_table, conductor
from .groups import (
    as_prime_power,
    group_from_spec,
    is_cyclic_group,
    parse_group_spec,
    spec_order,
)
from .lattice import cached_lattice, commutator_closure, is_normal_in

CHECK_NAMES = ("crossmethod", "cyclic", "oddp", "twogroup", "conductor", "lemmas", "sylow")
REPORT_ONLY = frozenset({"twogroup", "sylow"})
CONDUCTOR_ORDER_CAP = 24  # the exact-conductor suite is asserted on small groups only
RANDOM_FAMILIES = 20


@dataclass(frozen=True)
class SweepConfig:
    """What to sweep: order bound, group list, suites, worker count."""

    max_order: int = 64
    catalog: Optional[tuple[str, ...]] = None
    checks: frozenset = frozenset(CHECK_NAMES)
    jobs: int = 1
    cache_dir: Optional[str] = None

    def __post_init__(self) -> None:
        if not 1 <= self.max_order <= 256:
            raise ValueError("max_order must be between 1 and 256")
        unknown = set(self.checks) - set(CHECK_NAMES)
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    def resolved_catalog(self) -> tuple[str, ...]:
        if self.catalog is not None:
            for text in self.catalog:
                parse_group_spec(text)
            return self.catalog
        return tuple(default_catalog(self.max_order))


def default_catalog(max_order: int = 64) -> list[str]:
    """Every built-in group of order at most max_order, sorted by (order, name)."""
    specs = {f"C{n}" for n in range(1, max_order + 1)}
    for d1 in range(2, max_order + 1):
        for d2 in range(d1, max_order // d1 + 1):
            if d2 % d1:
                continue
            specs.add(f"C{d1}xC{d2}")
            for d3 in range(d2, max_order // (d1 * d2) + 1):
                if d3 % d2:
                    continue
                specs.add(f"C{d1}xC{d2}xC{d3}")
    k = 8
    while k <= max_order:
        specs.add(f"D{k}")
        specs.add(f"Q{k}")
        if k >= 16:
            specs.add(f"SD{k}")
        k *= 2
    for extra in ("S3", "S4", "A4", "H3"):
        if spec_order(parse_group_spec(extra)) <= max_order:
            specs.add(extra)
    return sorted(specs, key=lambda s: (spec_order(parse_group_spec(s)), s))


def random_families(spec_text: str, class_count: int, count: int = RANDOM_FAMILIES):
    """Deterministic pseudo-random explicit families for cross-method checks;
    the seed depends only on the group's spec text and the family index."""
    for i in range(count):
        digest = hashlib.sha256(f"artinx.sweep:{spec_text}:{i}".encode()).digest()
        rng = random.Random(int.from_bytes(digest[:8], "big"))
        size = rng.randint(0, class_count)
        yield Family(frozenset(rng.sample(range(class_count), size)))


# ---------------------------------------------------------------------------
# individual check suites (each returns a status plus failures/notes)
# ---------------------------------------------------------------------------


def _failure(spec: str, check: str, expected, got, context: str = "") -> dict:
    entry = {"group": spec, "check": check, "expected": str(expected), "got": str(got)}
    if context:
        entry["context"] = context
    return entry


def _check_crossmethod(spec, group, lattice, table, exponents) -> tuple[str, list, list]:
    failures = []
    cong, marks = exponents
    if cong != marks:
        failures.append(_failure(spec, "crossmethod", cong, marks, "family cyclic"))
    for i, fam in enumerate(random_families(spec, len(lattice.classes))):
        c = artin_exponent_congruence(group, lattice, fam)
        m = artin_exponent_marks(group, table, fam)
        if c != m:
            label = f"random family {i}"
            failures.append(_failure(spec, "crossmethod", c, m, label))
    return ("fail" if failures else "ok"), failures, []


def _check_cyclic(spec, group, exponent) -> tuple[str, list, list]:
    if is_cyclic_group(group):
        if exponent != 1:
            return "fail", [_failure(spec, "cyclic", 1, exponent, "cyclic group")], []
    elif exponent == 1:
        return "fail", [_failure(spec, "cyclic", "> 1", 1, "noncyclic group")], []
    return "ok", [], []


def _check_oddp(spec, group, exponent) -> tuple[str, list, list]:
    pp = as_prime_power(group.order)
    if pp is None or pp[0] == 2 or is_cyclic_group(group):
        return "skip", [], []
    p, alpha = pp
    expected = p ** (alpha - 1)
    if exponent != expected:
        return "fail", [_failure(spec, "oddp", expected, exponent)], []
    return "ok", [], []


def _check_twogroup(spec, group, exponent) -> tuple[str, list, list]:
    pp = as_prime_power(group.order)
    if pp is None or pp[0] != 2 or is_cyclic_group(group):
        return "skip", [], []
    notes = []
    prediction = closed_form_predictor(group)
    shape = recognize_2group(group)
    generic = 2 ** (pp[1] - 1)
    thm_value = 2 if shape in ("quaternion", "dihedral") else generic
    cor_value = prediction.details.get("bracket-whole-group")
    if exponent != thm_value:
        notes.append({
            "group": spec, "check": "twogroup",
            "message": f"computed {exponent} vs power-formula value {thm_value} "
                       f"(shape {shape}) -- mismatch (report-only)",
        })
    if cor_value is not None and shape in ("quaternion", "dihedral", "semidihedral") \
            and exponent != cor_value:
        notes.append({
            "group": spec, "check": "twogroup",
            "message": f"computed {exponent} vs cyclic-commutator-rule value {cor_value} "
                       f"(shape {shape}) -- mismatch (report-only)",
        })
    return "report", [], notes


def _check_conductor(spec, group, table) -> tuple[str, list, list]:
    if group.order > CONDUCTOR_ORDER_CAP:
        return "skip", [], []
    got = conductor(table)
    if got != group.order:
        return "fail", [_failure(spec, "conductor", group.order, got)], []
    return "ok", [], []


def _check_sylow(spec, report) -> tuple[str, list, list]:
    notes = []
    for comparison in report.sylow or ():
        if not comparison.match:
            notes.append({
                "group": spec, "check": "sylow",
                "message": f"p={comparison.p}: exponent part {comparison.exponent_part} "
                           f"vs Sylow-subgroup exponent {comparison.sylow_exponent} "
                           f"-- mismatch (report-only)",
            })
    return "report", [], notes


def _check_lemmas(spec, group, lattice) -> tuple[str, list, list]:
    """Counting-set checks over every (H, U) with H a p-subgroup (one per
    conjugacy class) and U a cyclic subgroup normal in H:

    - the full and normal-members extension counts agree mod p;
    - the normal members are exactly the extensions inside H';
    - for abelian H and nontrivial proper U, the count is prime to p
      exactly when H is cyclic;
    - for 2-groups with |U| = 2 and [H,H] <= U, an odd count forces H
      cyclic or nonabelian of order 8.
    """
    failures = []
    for cls in lattice.classes:
        pp = as_prime_power(cls.representative.order)
        if pp is None:
            continue
        p = pp[0]
        sub, _ = subgroup_as_group(group, cls.representative.mask)
        full = (1 << sub.order) - 1
        abelian = sub.is_abelian
        cyclic_h = is_cyclic_group(sub)
        derived = commutator_closure(sub, full)
        for u_mask in sorted({sub.cyclic_mask(x) for x in range(sub.order)}):
            if not (abelian or is_normal_in(sub, u_mask, full)):
                continue
            r = count_C_sets(sub, full, u_mask)
            where = f"H order {sub.order} in {spec}, U order {bin(u_mask).count('1')}"
            if (r.c_count - r.c_prime_count) % p:
                failures.append(_failure(
                    spec, "lemmas", "counts congruent mod p",
                    f"{r.c_count} vs {r.c_prime_count}", where))
            if r.c_prime_masks != r.c_of_h_prime_masks:
                failures.append(_failure(
                    spec, "lemmas", "normal members = extensions in H'",
                    "set mismatch", where))
            u_order = bin(u_mask).count("1")
            if abelian and 1 < u_order < sub.order:
                if (r.c_count % p != 0) != cyclic_h:
                    failures.append(_failure(
                        spec, "lemmas", "count prime to p iff H cyclic",
                        f"count {r.c_count}, cyclic {cyclic_h}", where))
            if p == 2 and u_order == 2 and derived & u_mask == derived:
                if r.c_count % 2 and not (cyclic_h or (not abelian and sub.order == 8)):
                    failures.append(_failure(
                        spec, "lemmas", "odd count forces cyclic or nonabelian order 8",
                        f"count {r.c_count}", where))
    return ("fail" if failures else "ok"), failures, []


# ---------------------------------------------------------------------------
# per-group evaluation and the sweep driver
# ---------------------------------------------------------------------------


def evaluate_group(task: tuple[str, tuple[str, ...], Optional[str]]) -> dict:
    """Run the requested checks for one group; the unit of parallel work."""
    spec_text, checks, cache_dir = task
    started = time.perf_counter()
    group = group_from_spec(spec_text)
    lattice = cached_lattice(group, spec_text, cache_dir)
    table = build_mark_table(group, lattice)

    failures: list[dict] = []
    notes: list[dict] = []
    statuses: dict[str, str] = {}

    try:
        report = compute_exponent_report(
            group, spec_text, lattice=lattice, table=table,
            include_sylow="sylow" in checks,
        )
        cong = marks = report.exponent
    except MethodDisagreement as err:
        # keep going on the marks value so the rest of the row is informative
        cong, marks = err.congruence, err.marks
        report = compute_exponent_report(
            group, spec_text, method="marks", lattice=lattice, table=table,
            include_sylow="sylow" in checks,
        )
    exponent = report.exponent

    if "crossmethod" in checks:
        statuses["crossmethod"], f, n = _check_crossmethod(
            spec_text, group, lattice, table, (cong, marks))
        failures += f
        notes += n
    if "cyclic" in checks:
        statuses["cyclic"], f, n = _check_cyclic(spec_text, group, exponent)
        failures += f
        notes += n
    if "oddp" in checks:
        statuses["oddp"], f, n = _check_oddp(spec_text, group, exponent)
        failures += f
        notes += n
    if "twogroup" in checks:
        statuses["twogroup"], f, n = _check_twogroup(spec_text, group, exponent)
        failures += f
        notes += n
    if "conductor" in checks:
        statuses["conductor"], f, n = _check_conductor(spec_text, group, table)
        failures += f
        notes += n
    if "lemmas" in checks:
        statuses["lemmas"], f, n = _check_lemmas(spec_text, group, lattice)
        failures += f
        notes += n
    if "sylow" in checks:
        statuses["sylow"], f, n = _check_sylow(spec_text, report)
        failures += f
        notes += n

    return {
        "spec": spec_text,
        "report": report_to_dict(report),
        "statuses": statuses,
        "failures": failures,
        "notes": notes,
        "seconds": time.perf_counter() - started,
    }


@dataclass
class RunResult:
    """Everything a sweep produced, in catalog order."""

    config: SweepConfig
    catalog: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)

    @property
    def failures(self) -> list[dict]:
        return [f for row in self.rows for f in row["failures"]]

    @property
    def notes(self) -> list[dict]:
        return [n for row in self.rows for n in row["notes"]]

    @property
    def ok(self) -> bool:
        return not self.failures


def run_sweep(config: SweepConfig) -> RunResult:
    """Evaluate every catalog group, in order, optionally across workers."""
    catalog = config.resolved_catalog()
    checks = tuple(c for c in CHECK_NAMES if c in config.checks)
    tasks = [(spec, checks, config.cache_dir) for spec in catalog]
    if config.jobs > 1 and len(tasks) > 1:
        import multiprocessing

        with multiprocessing.Pool(config.jobs) as pool:
            rows = pool.map(evaluate_group, tasks)
    else:
        rows = [evaluate_group(task) for task in tasks]
    return RunResult(config=config, catalog=catalog, rows=rows)


def summary_to_dict(result: RunResult, include_timings: bool = False) -> dict:
    """JSON-ready sweep summary; timings are opt-in so that identical runs
    stay byte-identical."""
    out = {
        "schema": 1,
        "max_order": result.config.max_order,
        "checks": [c for c in CHECK_NAMES if c in result.config.checks],
        "group_count": len(result.catalog),
        "ok": result.ok,
        "failures": result.failures,
        "notes": result.notes,
        "groups": [
            {
                "group": row["spec"],
                "exponent": row["report"]["exponent"],
                "statuses": row["statuses"],
            }
            for row in result.rows
        ],
        "reports": [row["report"] for row in result.rows],
    }
    if include_timings:
        out["timings"] = {row["spec"]: round(row["seconds"], 6) for row in result.rows}
    return out
