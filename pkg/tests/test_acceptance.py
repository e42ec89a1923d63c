"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  All tolerances are exact (integer equality); the time
bounds are asserted.
"""

import json
import os
import time
from itertools import product

import pytest

from exseq import cohomology as coh
from exseq import mutations, rouquier, toric_mes, verify, x2
from exseq.chow import chow_ring, divide_total_chern, tangent_chern, verify_banana_ses
from exseq.posets import (
    associated_poset,
    exceptional_permutations_bruteforce,
    is_effective_set,
    is_strongly_exceptional,
    linear_extensions,
)
from exseq.varieties import canonical_bundle, cotangent, sub, tangent_dual, toric

REPORT_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "reports")


def _done(number, label, t0, bound):
    elapsed = time.time() - t0
    print(f"ACCEPTANCE {number:2d} [{label}]: PASS ({elapsed:.1f}s, bound {bound}s)")
    assert elapsed < bound, f"criterion {number} exceeded its time bound"


def test_criterion_01_cohomology_sanity():
    t0 = time.time()
    specs = [
        toric(1, 1, (0, -2)),
        toric(4, 3, (0, -1, -1)),
        toric(4, 3, (0, 0, 0)),
        cotangent(2),
        cotangent(3),
    ]
    for spec in specs:
        k = canonical_bundle(spec)
        for i in range(-12, 13):
            for j in range(-12, 13):
                dims = coh.h_dims(spec, (i, j))
                dual = coh.h_dims(spec, sub(k, (i, j)))
                assert dims == tuple(reversed(dual))
                if spec.kind == "toric":
                    pos = {d for d, v in enumerate(dims) if v}
                    assert pos == coh.region_degrees(spec, (i, j))
                    chi = sum((-1) ** d * v for d, v in enumerate(dims))
                    assert chi == coh.euler_char_toric(spec, (i, j))
    _done(1, "cohomology sanity", t0, 10)


def test_criterion_02_x2_strips_and_report():
    t0 = time.time()
    for i in range(-12, 13):
        for j in range(-12, 13):
            strips = i == -1 or j == -1 or i + j == -2
            assert strips == (coh.cotangent_degree(2, (i, j)) is None)
    os.makedirs(REPORT_DIR, exist_ok=True)
    path = os.path.join(REPORT_DIR, "thm-6-1-dimension-formula.json")
    report = verify.write_discrepancy_report(path, ell=2, window=8)
    assert report["mismatches"], "the verbatim formula does disagree somewhere"
    assert any(d["point"] == [1, 1] for d in report["mismatches"])
    assert all(d["corrected"] == d["oracle"] for d in report["mismatches"])
    with open(path) as fh:
        assert json.load(fh)["finding"]
    _done(2, "immaculate strips + formula report", t0, 5)


def test_criterion_03_poset_theory():
    t0 = time.time()
    spec = cotangent(2)
    sets = x2.enumerate_mes_x2(8)
    assert sets
    for es in sets:
        poset = associated_poset(spec, es.bundles)
        orders, truncated = linear_extensions(poset)
        assert not truncated
        ext = {tuple(es.bundles[k] for k in o) for o in orders}
        assert ext == set(exceptional_permutations_bruteforce(spec, es.bundles))
    _done(3, f"poset theory on {len(sets)} sets x 720 permutations", t0, 60)


def test_criterion_04_layer_criteria_dual_path():
    t0 = time.time()
    checked = 0
    for spec in verify.toric_grid(3, 3, 2):
        for mes in toric_mes.enumerate_mes(spec, 3):
            dec = toric_mes.decompose_layers(spec, mes)
            assert toric_mes.strongness_by_layers(spec, dec) == \
                is_strongly_exceptional(spec, mes)
            assert toric_mes.effectiveness_by_layers(spec, dec) == \
                is_effective_set(spec, mes)
            checked += 1
    assert checked > 100000
    _done(4, f"layer criteria on {checked} MES", t0, 300)


def test_criterion_05_acyclicity_threshold():
    t0 = time.time()
    grid = verify.toric_grid(3, 3, 2) + [toric(2, 2, (0, -2)), toric(4, 3, (0, -1, -1))]
    for spec in grid:
        assert toric_mes.acyclicity_threshold(spec) == (
            spec.ell >= spec.alpha * spec.v
        )
    assert toric_mes.acyclicity_threshold(toric(2, 2, (0, -2))) is False
    assert toric_mes.acyclicity_threshold(toric(4, 3, (0, -1, -1))) is True
    _done(5, "acyclicity threshold", t0, 60)


def test_criterion_06_classification():
    t0 = time.time()
    verdict = verify.check_classification(8)
    assert verdict.status == "pass", verdict.details
    _done(6, "classification census at window 8", t0, 300)


def test_criterion_07_strongness_tables():
    t0 = time.time()
    verdict = verify.check_strongness_tables()
    assert verdict.status == "pass", verdict.details
    # exactly the two pinned table errata, nothing else
    seen = {(e["family"], e["a"]) for e in verdict.details["errata"]}
    assert seen == {(1, 5), (1, -4)}
    _done(7, "strongness tables (2 pinned errata)", t0, 60)


def test_criterion_08_orlov_reduction():
    t0 = time.time()
    spec = cotangent(2)
    sets = x2.enumerate_mes_x2(8)
    for es in sets:
        trace = mutations.reduce_to_orlov(spec, es.certificate)
        assert mutations.is_orlov_type(spec, trace.final)
        assert trace.replay() == trace.final
        for step in trace.steps:
            assert step.op in {
                "sigma", "twist", "swap", "lex", "helix_right", "helix_left",
                "banana_left", "banana_right",
            }
    _done(8, f"Orlov reduction on 100% of {len(sets)} sets", t0, 120)


def test_criterion_09_chow_support():
    t0 = time.time()
    assert verify_banana_ses(2)
    ring = chow_ring(2, tangent_chern(2))
    numerator = ring.element({(0, 0): 1, (1, 0): -3, (2, 0): 3})
    quotient = divide_total_chern(numerator, ring.line_class(0, 1))
    assert quotient == ring.line_class(-3, -1)
    assert quotient * ring.line_class(0, 1) == numerator
    _done(9, "intersection-theory certificate", t0, 5)


def test_criterion_10_generation_time():
    t0 = time.time()
    for ell, expected_dim in ((2, 3), (3, 5), (4, 7)):
        tilting = rouquier.orlov_tilting(cotangent(ell))
        assert rouquier.compute_i0(tilting) == 0
        res = rouquier.rouquier_dimension(cotangent(ell))
        assert res.exact and res.dim == expected_dim
    for spec in verify.toric_grid(3, 3, 3):
        if spec.beta <= spec.ell + 1:
            assert rouquier.compute_i0(rouquier.orlov_tilting(spec)) == 0
    xd = tangent_dual(3)
    for gaps in product(range(0, 5), repeat=2):
        starts = (0, gaps[0], gaps[0] + gaps[1])
        crit = rouquier.dual_strongness_criterion(xd, starts)
        try:
            rouquier.orlov_tilting(xd, gaps)
            strong = True
        except ValueError:
            strong = False
        assert crit == strong == (min(gaps) >= 2)
    res = rouquier.rouquier_dimension(xd)
    assert not res.exact and res.interval == (5, 8)
    _done(10, "generation times and Rouquier dimensions", t0, 30)


def test_criterion_11_gap_points():
    t0 = time.time()
    spec = cotangent(2)
    for es in x2.enumerate_mes_x2(8):
        residues = [(p[0] % 3, p[1] % 3) for p in es.bundles]
        assert len(set(residues)) == 6
        gaps = x2.gap_points(spec, es)
        assert len(gaps) == 3
        for d in range(3):
            on_diag = [r for r in residues if (r[1] - r[0]) % 3 == d]
            assert len(on_diag) == 2        # never more than ell = 2
            missing = {(a, (a + d) % 3) for a in range(3)} - set(on_diag)
            assert missing == {gaps[d]}
    _done(11, "gap points", t0, 60)
