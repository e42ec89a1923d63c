"""The verify-paper regression harness.

Each published theorem-level claim in scope maps to one runnable check that
returns a Verdict; a failing verdict carries a minimal counterexample.  Two
claims are reproduced up to pinned errata (see ERRATA below): the verbatim
dimension formula for the cotangent family, and two stable-range boundaries
plus one row transposition in the reference strongness tables.  Those are
reported inside the verdict details and do not count as failures as long as
the computed values sit exactly on the pinned values.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import product

from . import cohomology as coh
from . import mutations, rouquier, toric_mes, x2
from .chow import chow_ring, divide_total_chern, tangent_chern, verify_banana_ses
from .posets import (
    associated_poset,
    exceptional_permutations_bruteforce,
    is_effective_set,
    is_strongly_exceptional,
    linear_extensions,
)
from .varieties import (
    canonical_bundle,
    cotangent,
    sigma,
    sub,
    tangent_dual,
    toric,
)


@dataclass
class Verdict:
    claim: str
    status: str              # pass | fail | skipped
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_json(self):
        return {
            "claim": self.claim,
            "status": self.status,
            "details": self.details,
            "seconds": round(self.seconds, 3),
        }


def _verdict(claim, ok, details=None, t0=None):
    return Verdict(
        claim,
        "pass" if ok else "fail",
        details or {},
        time.time() - t0 if t0 else 0.0,
    )


COHOMOLOGY_SPECS = [
    toric(1, 1, (0, -2)),
    toric(4, 3, (0, -1, -1)),
    toric(4, 3, (0, 0, 0)),
    cotangent(2),
    cotangent(3),
]


def check_serre_and_regions(window: int = 12) -> Verdict:
    """Serre duality on the window for every reference spec, plus exact
    agreement of the four toric cones with the computed dimensions."""
    t0 = time.time()
    for spec in COHOMOLOGY_SPECS:
        k = canonical_bundle(spec)
        for i in range(-window, window + 1):
            for j in range(-window, window + 1):
                dims = coh.h_dims(spec, (i, j))
                dual = coh.h_dims(spec, sub(k, (i, j)))
                if dims != tuple(reversed(dual)):
                    return _verdict(
                        "serre-duality", False,
                        {"spec": spec.to_json(), "point": [i, j]}, t0,
                    )
                if spec.kind == "toric":
                    pos = {d for d, x in enumerate(dims) if x}
                    reg = coh.region_degrees(spec, (i, j))
                    if pos != reg:
                        return _verdict(
                            "eq-4.3", False,
                            {"spec": spec.to_json(), "point": [i, j],
                             "dims": sorted(pos), "regions": sorted(reg)}, t0,
                        )
                    chi = sum((-1) ** d * x for d, x in enumerate(dims))
                    if chi != coh.euler_char_toric(spec, (i, j)):
                        return _verdict(
                            "eq-4.2", False,
                            {"spec": spec.to_json(), "point": [i, j]}, t0,
                        )
    return _verdict("eq-4.2/4.3+serre", True, {"window": window}, t0)


def check_x2_strips(window: int = 12, oracle_window: int = 8) -> Verdict:
    """Three-strip immaculate description against the region logic, the
    oracle against the closed form, and the discrepancy report for the
    verbatim dimension formula."""
    t0 = time.time()
    spec = cotangent(2)
    for i in range(-window, window + 1):
        for j in range(-window, window + 1):
            strips = (
                i == -1 or j == -1 or i + j == -2
            )
            if strips != (coh.cotangent_degree(2, (i, j)) is None):
                return _verdict("thm-6.1-strips", False, {"point": [i, j]}, t0)
    for i in range(-oracle_window, oracle_window + 1):
        for j in range(-oracle_window, oracle_window + 1):
            if coh.h_dims_cotangent(spec, (i, j)) != coh.oracle_cotangent(spec, (i, j)):
                return _verdict("thm-6.1-oracle", False, {"point": [i, j]}, t0)
    report = coh.magnitude_discrepancies(2, oracle_window)
    corrected_clean = all(d["corrected"] == d["oracle"] for d in report)
    return _verdict(
        "thm-6.1", corrected_clean,
        {
            "window": window,
            "printed_formula_mismatches": len(report),
            "finding": coh.FORMULA_FINDING,
        },
        t0,
    )


def write_discrepancy_report(path, ell: int = 2, window: int = 8):
    report = {
        "ell": ell,
        "window": window,
        "finding": coh.FORMULA_FINDING,
        "mismatches": coh.magnitude_discrepancies(ell, window),
    }
    with open(path, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return report


def check_poset_extensions(window: int = 8) -> Verdict:
    """On every enumerated X2 MES: exceptional permutations coincide with
    the linear extensions of the forced-pair hull (720 checks per set)."""
    t0 = time.time()
    spec = cotangent(2)
    for es in x2.enumerate_mes_x2(window):
        poset = associated_poset(spec, es.bundles)
        orders, truncated = linear_extensions(poset)
        assert not truncated
        ext = {tuple(es.bundles[k] for k in o) for o in orders}
        brute = set(exceptional_permutations_bruteforce(spec, es.bundles))
        if ext != brute:
            return _verdict(
                "prop-3.2", False,
                {"set": sorted(es.bundles), "extensions": len(ext),
                 "exceptional_permutations": len(brute)}, t0,
            )
    return _verdict("prop-3.2", True, {"window": window}, t0)


def toric_grid(max_ell: int = 3, max_v: int = 3, max_alpha: int = 2):
    """All toric specs with ell, V bounded and twists down to -max_alpha."""
    specs = []
    for ell in range(1, max_ell + 1):
        for v in range(1, max_v + 1):
            for c in product(range(-max_alpha, 1), repeat=v):
                if any(c[k] < c[k + 1] for k in range(v - 1)):
                    continue
                specs.append(toric(ell, v, c))
    return specs


def check_layer_criteria(offset_window: int = 3, grid=None) -> Verdict:
    """Layer-combinatorial strongness/effectivity against the cohomological
    definitions on every enumerated MES of the grid."""
    t0 = time.time()
    specs = grid if grid is not None else toric_grid()
    checked = 0
    for spec in specs:
        for mes in toric_mes.enumerate_mes(spec, offset_window):
            dec = toric_mes.decompose_layers(spec, mes)
            pairs = [
                (toric_mes.strongness_by_layers(spec, dec),
                 is_strongly_exceptional(spec, mes), "thm-5.2"),
                (toric_mes.effectiveness_by_layers(spec, dec),
                 is_effective_set(spec, mes), "prop-5.4"),
            ]
            for via_layers, via_cohomology, claim in pairs:
                if via_layers != via_cohomology:
                    return _verdict(
                        claim, False,
                        {"spec": spec.to_json(), "set": sorted(mes.bundles),
                         "layers": via_layers, "cohomology": via_cohomology}, t0,
                    )
            checked += 1
    return _verdict(
        "thm-5.2/prop-5.4", True,
        {"specs": len(specs), "mes_checked": checked, "offsets": offset_window}, t0,
    )


def check_acyclicity_threshold() -> Verdict:
    t0 = time.time()
    for spec in toric_grid() + [toric(2, 2, (0, -2)), toric(4, 3, (0, -1, -1))]:
        try:
            got = toric_mes.acyclicity_threshold(spec)
        except AssertionError:
            return _verdict("prop-5.3", False, {"spec": spec.to_json()}, t0)
        if got != (spec.ell >= spec.alpha * spec.v):
            return _verdict("prop-5.3", False, {"spec": spec.to_json()}, t0)
    fig_pair = [(toric(2, 2, (0, -2)), False), (toric(4, 3, (0, -1, -1)), True)]
    for spec, expect in fig_pair:
        if toric_mes.acyclicity_threshold(spec) != expect:
            return _verdict("prop-5.3", False, {"spec": spec.to_json()}, t0)
    return _verdict("prop-5.3", True, {}, t0)


def expected_x2_census(window: int):
    """Every classified set that fits the window, as canonical sets."""
    def fits(pts):
        return all(-window <= i <= window and -window <= j <= window for i, j in pts)

    expected = {}

    def register(name, pts):
        norm, _ = x2.normalize_set(pts)
        if fits(norm):
            expected.setdefault(norm, []).append(name)

    for cls, seqs in x2.FIXED_TEMPLATES.items():
        for idx, s in enumerate(seqs):
            register(f"{cls}.{idx}", s)
            register(f"{cls}'.{idx}", [sigma(p) for p in s])
    for fam in range(3):
        for a in range(-2 * window, 2 * window + 1):
            register(f"i.{fam}[a={a}]", x2.class_i_sequence(fam, a))
            register(
                f"i'.{fam}[a={a}]",
                [sigma(p) for p in x2.class_i_sequence(fam, a)],
            )
    return expected


def check_classification(window: int = 8) -> Verdict:
    """Exact reproduction of the classification at the given window: the
    enumeration equals the expected census, every set classifies, and the
    class-i parameter ranges fill the window."""
    t0 = time.time()
    found = x2.enumerate_mes_x2(window)
    found_sets = {x2.normalize_set(es.bundles)[0] for es in found}
    expected = expected_x2_census(window)
    missing = set(expected) - found_sets
    extra = found_sets - set(expected)
    if missing or extra:
        return _verdict(
            "cor-6.6", False,
            {"missing": [sorted(m) for m in list(missing)[:3]],
             "extra": [sorted(e) for e in list(extra)[:3]]}, t0,
        )
    labels = [x2.classify(es) for es in found]
    bad = [es.bundles for es, lab in zip(found, labels) if lab.cls == "unclassified"]
    if bad:
        return _verdict("cor-6.6", False, {"unclassified": sorted(bad[0])}, t0)
    primed_trivial = [
        lab for lab in labels if lab.cls in ("ii'", "iv'", "v'")
    ]
    if primed_trivial:
        return _verdict("cor-6.6", False, {"spurious_primed": str(primed_trivial[0])}, t0)
    # class-i windows per family: exactly the parameters whose set fits
    for fam, (lo, hi) in enumerate([(-window, window - 2),
                                     (-window + 1, window - 1),
                                     (-window + 2, window)]):
        for a in range(lo, hi + 1):
            norm, _ = x2.normalize_set(x2.class_i_sequence(fam, a))
            if norm not in found_sets:
                return _verdict(
                    "cor-6.6", False, {"family": fam, "missing_parameter": a}, t0
                )
    return _verdict(
        "cor-6.6", True,
        {"window": window, "sets": len(found), "classes":
         sorted({lab.cls for lab in labels})}, t0,
    )


# ---------------------------------------------------------------------------
# the published strongness tables, verbatim (1-based index pairs)

PRINTED_PF0_FIXED = {
    # printed order for class iii is the display order rotated by three
    # (the two rows of diagrams were transposed in print)
    "iii": [
        {(2, 3), (4, 5)}, {(1, 2), (3, 4)}, {(2, 3)},
        {(1, 2), (5, 6)}, {(4, 5)}, {(3, 4), (5, 6)},
    ],
    "iv": [
        {(3, 4)}, {(2, 3), (5, 6)}, {(1, 2), (4, 5)},
        {(3, 4)}, {(2, 3), (5, 6)}, {(1, 2), (4, 5)},
    ],
    "v": [
        {(3, 4)}, {(2, 3), (5, 6)}, {(1, 2), (4, 5)},
        {(3, 4)}, {(2, 3), (5, 6)}, {(1, 2), (4, 5)},
    ],
    "ii": [set()] * 6,
}

# printed position -> display index of the sequence it belongs to
PRINTED_ROW_MAP = {
    "iii": (3, 4, 5, 0, 1, 2),
    "ii": (0, 1, 2, 3, 4, 5),
    "iv": (0, 1, 2, 3, 4, 5),
    "v": (0, 1, 2, 3, 4, 5),
}

# class-i stable ranges as printed: family -> list of (test, pairs)
PRINTED_PF0_CLASS_I = {
    0: [
        (lambda a: a >= 1, set()),
        (lambda a: a <= -6, {(i, j) for i in (1, 2, 3) for j in (4, 5, 6)}),
    ],
    1: [
        (lambda a: a >= 5, {(3, 6), (4, 6), (5, 6)}),
        (lambda a: a == 1, set()),
        (lambda a: a <= -4, {(i, j) for i in (1, 2) for j in (3, 4, 5)}),
    ],
    2: [
        (lambda a: a >= 7, {(i, j) for i in (2, 3, 4) for j in (5, 6)}),
        (lambda a: a == 1, set()),
        (lambda a: a <= -4, {(1, 2), (1, 3), (1, 4)}),
    ],
}

# Pinned deviations of the published table from the computed truth: at the
# two boundary parameters of family 1 one difference lies on the immaculate
# anti-diagonal, so the corresponding pair is mutually orthogonal and drops
# out of the forced relation.  The published stable bounds start one step
# too early; the exact bounds are a >= 6 and a <= -5.
ERRATA_PF0_CLASS_I = {
    (1, 5): {(4, 6), (5, 6)},
    (1, -4): {(1, 3), (1, 4), (2, 3), (2, 4), (2, 5)},
}


def _pf0_one_based(spec, seq):
    return {(a + 1, b + 1) for a, b in x2.pf0_pairs(spec, seq)}


def check_strongness_tables(sample_hi=range(5, 9), sample_lo=range(-4, -9, -1)) -> Verdict:
    """Replay the printed strongness tables entry by entry.

    Passes iff every entry matches the computed relation except exactly at
    the pinned errata, where the computed value must equal the pinned one.
    """
    t0 = time.time()
    spec = cotangent(2)
    errata_seen = []
    for cls, printed_rows in PRINTED_PF0_FIXED.items():
        for pos, printed in enumerate(printed_rows):
            seq = x2.FIXED_TEMPLATES[cls][PRINTED_ROW_MAP[cls][pos]]
            got = _pf0_one_based(spec, seq)
            if got != printed:
                return _verdict(
                    "cor-6.7", False,
                    {"class": cls, "printed_row": pos + 1,
                     "printed": sorted(printed), "computed": sorted(got)}, t0,
                )
    samples = [1] + list(sample_hi) + list(sample_lo) + [-6, 7, -7]
    for fam, ranges in PRINTED_PF0_CLASS_I.items():
        for a in samples:
            for applies, printed in ranges:
                if not applies(a):
                    continue
                got = _pf0_one_based(spec, x2.class_i_sequence(fam, a))
                pinned = ERRATA_PF0_CLASS_I.get((fam, a))
                if pinned is not None:
                    if got != pinned:
                        return _verdict(
                            "cor-6.7", False,
                            {"family": fam, "a": a, "computed": sorted(got),
                             "pinned_erratum": sorted(pinned)}, t0,
                        )
                    errata_seen.append({"family": fam, "a": a,
                                        "printed": sorted(printed),
                                        "computed": sorted(got)})
                elif got != printed:
                    return _verdict(
                        "cor-6.7", False,
                        {"family": fam, "a": a, "printed": sorted(printed),
                         "computed": sorted(got)}, t0,
                    )
    # strongness and cyclicity claims
    for a in range(1, 9):
        if not is_strongly_exceptional(spec, x2.class_i_sequence(0, a)):
            return _verdict("cor-6.7", False, {"family": 0, "a": a}, t0)
    for fam in (0, 1, 2):
        for a in range(-8, 9):
            strong = is_strongly_exceptional(spec, x2.class_i_sequence(fam, a))
            expect = a >= 1 if fam == 0 else a == 1
            if strong != expect:
                return _verdict(
                    "cor-6.7", False,
                    {"family": fam, "a": a, "strong": strong}, t0,
                )
        if not x2.strongly_cyclic(spec, x2.class_i_sequence(fam, 1)):
            return _verdict("cor-6.7", False, {"family": fam, "cyclic_at": 1}, t0)
    for seq in x2.FIXED_TEMPLATES["ii"]:
        if not (is_strongly_exceptional(spec, seq) and x2.strongly_cyclic(spec, seq)):
            return _verdict("cor-6.7", False, {"class": "ii", "seq": seq}, t0)
    return _verdict("cor-6.7", True, {"errata": errata_seen}, t0)


def check_orlov_reduction(window: int = 8) -> Verdict:
    t0 = time.time()
    spec = cotangent(2)
    sets = x2.enumerate_mes_x2(window)
    for es in sets:
        trace = mutations.reduce_to_orlov(spec, es.certificate)
        if not mutations.is_orlov_type(spec, trace.final):
            return _verdict("thm-6.8", False, {"set": sorted(es.bundles)}, t0)
        trace.replay()
    return _verdict("thm-6.8", True, {"window": window, "reduced": len(sets)}, t0)


def check_chow() -> Verdict:
    t0 = time.time()
    if not verify_banana_ses(2):
        return _verdict("lem-6.9", False, {}, t0)
    ring = chow_ring(2, tangent_chern(2))
    num = ring.element({(0, 0): 1, (1, 0): -3, (2, 0): 3})
    quotient = divide_total_chern(num, ring.line_class(0, 1))
    ok = quotient == ring.line_class(-3, -1) and quotient * ring.line_class(0, 1) == num
    return _verdict("lem-6.9", ok, {}, t0)


def check_rouquier() -> Verdict:
    t0 = time.time()
    for ell in (2, 3, 4):
        res = rouquier.rouquier_dimension(cotangent(ell))
        if not (res.exact and res.dim == 2 * ell - 1 and res.i0 == 0):
            return _verdict("prop-7.3", False, {"ell": ell}, t0)
    for spec in toric_grid():
        if spec.beta <= spec.ell + 1:
            t = rouquier.orlov_tilting(spec)
            if rouquier.compute_i0(t) != 0:
                return _verdict("prop-7.3", False, {"spec": spec.to_json()}, t0)
    xd = tangent_dual(3)
    for starts, expect in [((0, 2, 4), True), ((0, 1, 2), False), ((0, 2, 3), False),
                           ((0, 3, 6), True)]:
        gaps = tuple(b - a for a, b in zip(starts, starts[1:]))
        try:
            rouquier.orlov_tilting(xd, gaps)
            strong = True
        except ValueError:
            strong = False
        if strong != expect or rouquier.dual_strongness_criterion(xd, starts) != expect:
            return _verdict("prop-7.3", False, {"starts": starts}, t0)
    res = rouquier.rouquier_dimension(xd)
    if res.exact or res.interval != (5, 8):
        return _verdict("prop-7.3", False, {"interval": res.interval}, t0)
    return _verdict("prop-7.3", True, {}, t0)


def check_gap_points(window: int = 8) -> Verdict:
    t0 = time.time()
    spec = cotangent(2)
    for es in x2.enumerate_mes_x2(window):
        try:
            gaps = x2.gap_points(spec, es)
        except ValueError as exc:
            return _verdict("gap-points", False,
                            {"set": sorted(es.bundles), "error": str(exc)}, t0)
        if len(gaps) != 3 or any(not isinstance(g, tuple) for g in gaps.values()):
            return _verdict("gap-points", False, {"set": sorted(es.bundles)}, t0)
    return _verdict("gap-points", True, {"window": window}, t0)


SECTIONS = {
    "3": [check_poset_extensions],
    "4": [check_serre_and_regions],
    "5": [check_layer_criteria, check_acyclicity_threshold],
    "6.1": [check_x2_strips],
    "6.2": [check_gap_points],
    "6.3": [check_classification, check_strongness_tables],
    "6.4": [check_orlov_reduction, check_chow],
    "7": [check_rouquier],
}


def run_sections(sections=None, threads: int = 0) -> list[Verdict]:
    keys = sections or list(SECTIONS)
    checks = []
    for key in keys:
        if key not in SECTIONS:
            raise KeyError(f"unknown section {key}; choose from {sorted(SECTIONS)}")
        checks.extend(SECTIONS[key])
    if threads and threads != 1 and len(checks) > 1:
        from concurrent.futures import ThreadPoolExecutor

        workers = threads if threads > 0 else None
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: c(), checks))
    return [check() for check in checks]
