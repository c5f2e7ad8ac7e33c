"""One-call certification of a chain and of the configuration it rests on."""
from __future__ import annotations

from .chain import Chain, ChainParams, build_chain, check_pairwise_disjoint, kbound_satisfied, verify_chain
from .fourway import build_fourway, max_thickness, verify_fourway
from .geometry import SQRT2, GeometryError, core_loops
from .linking import canonical_filling_disk, disk_piercings, gauss_linking_number
from .report import VerificationReport
from .sequence import DEFAULT_BUDGET, BudgetExceededError, expand_level, level1_symmetry_defect, nesting_failures

SKIP_KEYS = ("containment", "disjoint", "linking", "symmetry", "disks")
BRUTE_FORCE_COMPONENTS = 5000


def _nesting(report: VerificationReport, chain: Chain, depth: int, budget: int) -> None:
    # deepest level whose children fit in the budget
    levels = 0
    while levels < depth and sum(chain.m ** n for n in range(1, levels + 2)) <= budget:
        levels += 1
    if levels == 0:
        report.skip("sequence.nesting", f"{chain.m} children exceed budget {budget}")
        return
    bad, checked = nesting_failures(chain, levels, budget)
    report.add("sequence.nesting", not bad, None, [list(a) for a in bad],
               detail={"levels_checked": levels, "children_checked": checked, "failures": len(bad)})
    if levels < depth:
        report.skip(f"sequence.nesting.level{levels + 1}+", f"over budget {budget}; covered by the derived result")


def _disks(report: VerificationReport, chain: Chain) -> None:
    """Each consecutive pair: the flat disk of one copy's lobe-2 core is pierced once by
    the next copy's lobe-1 core, with signed count equal to the linking number."""
    m = chain.m
    loops = [core_loops(c) for c in chain.components]
    bad = []
    for j in range(m):
        a, b = loops[j][1], loops[(j + 1) % m][0]
        try:
            hits = disk_piercings(canonical_filling_disk(a), b)
            ok = len(hits) == 1 and hits[0].sign == gauss_linking_number(a, b).lk
        except GeometryError:
            ok = False
        if not ok:
            bad.append((j + 1, (j + 1) % m + 1))
    report.add("disks.consecutive_piercings", not bad, None, bad, detail={"pairs": m})


def _derived(report: VerificationReport, depth: int) -> None:
    needed = ("chain.disjoint", "chain.containment")
    if not all(n in report for n in needed):
        report.skip("derived.hierarchical_disjointness", "needs level-1 disjointness and containment")
        return
    ok = all(report[n].passed for n in needed)
    report.add("derived.hierarchical_disjointness", ok, None, [], detail={
        "kind": "derived",
        "premises": list(needed),
        "conclusion": f"components of every level up to {depth} (indeed all levels) are pairwise disjoint",
        "argument": "similar copies of a disjoint, properly nested family stay disjoint",
    })


def _brute_force_disjoint(report: VerificationReport, chain: Chain, workers: int) -> None:
    name = "sequence.disjoint_level2"
    if chain.m ** 2 > BRUTE_FORCE_COMPONENTS:
        report.skip(name, f"{chain.m ** 2} components exceed brute-force limit {BRUTE_FORCE_COMPONENTS}")
        return
    comps = [c.solid for c in expand_level(chain, 2)]
    check_pairwise_disjoint(report, name, comps, workers)


def run_full_verification(
    params: ChainParams,
    depth: int,
    skip=(),
    workers: int = 1,
    chain: Chain | None = None,
    budget: int = DEFAULT_BUDGET,
) -> VerificationReport:
    """Every check in a fixed order; failures are recorded, never raised.

    The result is independent of ``workers``.
    """
    skip = tuple(skip)
    unknown = set(skip) - set(SKIP_KEYS)
    if unknown:
        raise ValueError(f"unknown skip keys {sorted(unknown)}; choose from {SKIP_KEYS}")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if chain is None:
        chain = build_chain(params)
    R, r, k = params.R, params.r, params.k

    report = VerificationReport()
    bound = max_thickness(R)
    report.add("fourway.thickness_bound", r < bound, bound - r, detail={"max_thickness": bound})
    report.extend(verify_fourway(build_fourway(R, r)))
    slack = r - 2.0 * SQRT2 * k * (2.0 * R + r)
    report.add("params.kbound", kbound_satisfied(R, r, k), slack, detail={"k": k})

    report.extend(verify_chain(chain, skip=skip, workers=workers))
    for key in ("disjoint", "containment", "linking"):
        if key in skip:
            report.skip(f"chain.{key}", "requested")

    if "containment" in skip:
        report.skip("sequence.nesting", "requested")
    elif depth >= 1:
        try:
            _nesting(report, chain, depth, budget)
        except BudgetExceededError as exc:
            report.skip("sequence.nesting", str(exc))

    if "disks" in skip:
        report.skip("disks.consecutive_piercings", "requested")
    else:
        _disks(report, chain)

    if "symmetry" in skip:
        report.skip("symmetry.iota1", "requested")
    else:
        worst, bad = level1_symmetry_defect(chain)
        report.add("symmetry.iota1", not bad, worst, bad, detail={"pairing": "j <-> m-j+1"})

    _derived(report, depth)
    if depth >= 2 and "disjoint" not in skip:
        _brute_force_disjoint(report, chain, workers)
    return report
