"""Acceptance criteria, each checked exactly and reported on one line.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""
import itertools
import json
import sys
import time
from pathlib import Path

import pytest
from click.testing import CliRunner

sys.path.insert(0, str(Path(__file__).parent))

from matroid_guts import (  # noqa: E402
    ExtensionRequest,
    SubmodularityFailure,
    TreeExtensionPlan,
    are_independent_clones,
    build_matroid,
    bunches,
    catalog,
    check_guts_extendability,
    enumerate_exact_3_separations,
    enumerate_guts_extensions_oracle,
    free_guts_extension,
    graphic_matroid,
    guts_point_extension,
    is_exact_3_separation,
    local_conn,
    matroids_equal,
    special_strands,
    strand_graph,
    tree_multi_extension,
)
from matroid_guts.cli import main  # noqa: E402
from matroid_guts.matroid import find_axiom_violation  # noqa: E402

import lemmas  # noqa: E402
from conftest import (  # noqa: E402
    ACCEPTANCE_LINES,
    PAIRS,
    SMALL_CATALOG,
    all_vamos_like,
    catalog_matroid,
    two_clone_extensions,
)

pytestmark = pytest.mark.acceptance

A = ["a1", "a1p", "a2", "a2p"]
B = ["b1", "b1p", "b2", "b2p"]
A0 = ["a1", "a1p"]
B0 = ["b1", "b1p"]


def criterion(number, title, budget):
    """Run the decorated check, time it, and record one PASS/FAIL line."""
    def wrap(check):
        def test():
            start = time.perf_counter()
            failures = []
            try:
                check(failures)
            except Exception as exc:  # report, then fail below
                failures.append(f"{type(exc).__name__}: {exc}")
            elapsed = time.perf_counter() - start
            if elapsed > budget:
                failures.append(f"took {elapsed:.1f}s, budget {budget}s")
            status = "PASS" if not failures else "FAIL"
            line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s)"
            if failures:
                line += " -- " + "; ".join(failures)
            ACCEPTANCE_LINES.append(line)
            print(line)
            assert not failures, line
        test.__name__ = check.__name__
        return test
    return wrap


def expect(failures, ok, message):
    if not ok:
        failures.append(message)


@criterion(1, "Vamos matroid is blocked at the guts", budget=5)
def test_vamos_blocked(failures):
    m = build_matroid(catalog.vamos())
    expect(failures, is_exact_3_separation(m, A, B), "(A, B) is not an exact 3-separation")
    for pair in (["a1", "a1p"], ["a2", "a2p"]):
        expect(failures, local_conn(m, pair, B) == 1, f"conn({pair}, B) != 1")
    for pair in (["b1", "b1p"], ["b2", "b2p"]):
        expect(failures, local_conn(m, pair, A) == 1, f"conn({pair}, A) != 1")
    expect(failures, local_conn(m, A0, B0) == 1, "conn(A0, B0) != 1")
    v = check_guts_extendability(m, A, B, A0, B0)
    expect(failures, v.blocked, "verdict is not blocked")
    expect(failures, v.values is not None and list(v.values).count(1) == 2,
           f"witness values {v.values} do not hold exactly two ones")
    expect(failures, enumerate_guts_extensions_oracle(m, A, B, A0, B0) == [],
           "oracle found an extension")
    try:
        guts_point_extension(m, A, B, A0, B0, force=True)
        failures.append("forced construction passed the rank axioms")
    except SubmodularityFailure as exc:
        x, y = exc.witness
        r = exc.ranks
        expect(failures, r["X"] + r["Y"] < r["union"] + r["intersection"],
               "witness pair does not violate submodularity")
        expect(failures, x and y, "empty witness")
    result = CliRunner().invoke(main, ["extend", "catalog:vamos", "--A", ",".join(A),
                                       "--A0", ",".join(A0), "--B0", ",".join(B0),
                                       "--force-build", "--format", "machine"])
    report = json.loads(result.stdout)
    expect(failures, result.exit_code == 1, f"CLI exit code {result.exit_code}")
    expect(failures, "submodularity_violation" in report["result"], "CLI shows no violation")


def check_positive(failures, m, a, a0, b0, name):
    v = check_guts_extendability(m, a, None, a0, b0)
    expect(failures, v.extendable, f"{name}: verdict {v}")
    res = guts_point_extension(m, a, None, a0, b0)
    mp = res.mp
    expect(failures, find_axiom_violation(mp.table, mp.n) is None, f"{name}: axioms fail")
    pbit = 1 << m.n
    for pinned in (m.mask(a0), m.mask(b0)):
        expect(failures, mp.is_circuit(pinned | pbit), f"{name}: {m.labels_of(pinned)}+p")
    expect(failures, matroids_equal(mp.delete([res.p]), m), f"{name}: restriction differs")
    found = enumerate_guts_extensions_oracle(m, a, None, a0, b0)
    expect(failures, len(found) == 1, f"{name}: oracle found {len(found)} extensions")
    expect(failures, all(matroids_equal(e, mp) for e in found), f"{name}: oracle disagrees")
    return mp


@criterion(2, "K4 and Vamos-plus extend uniquely", budget=10)
def test_positive_cases(failures):
    k4 = build_matroid(catalog.k4())
    mp = check_positive(failures, k4, ["12", "13", "23"], ["12"], ["14", "24"], "k4")
    parallel = graphic_matroid(list(catalog.K4_EDGES) + [(1, 2)], labels=list(k4.labels) + ["p"])
    expect(failures, matroids_equal(mp, parallel), "k4: not the parallel-edge graphic matroid")
    vp = build_matroid(catalog.vamos_plus())
    check_positive(failures, vp, A, A0, B0, "vamos-plus")


@criterion(3, "connectivity and strand identities hold exactly", budget=60)
def test_lemma_suite(failures):
    for name in SMALL_CATALOG:
        m = catalog_matroid(name)
        exhaustive = m.n <= 8
        cases, bad = lemmas.modular_meet_closure(m)
        expect(failures, bad == 0 and cases > 0, f"{name}: modular meet closure ({bad})")
        cases, bad = lemmas.conn_identity(m)
        expect(failures, bad == 0, f"{name}: connectivity identity ({bad})")
        expect(failures, cases >= (1 << 3 * m.n if exhaustive else 100_000),
               f"{name}: identity checked on {cases} triples")
        cases, bad = lemmas.strand_pair_circuits(m)
        expect(failures, bad == 0, f"{name}: strand pair circuits ({bad})")
        cases, bad = lemmas.circuit_halves_are_strands(m)
        expect(failures, bad == 0, f"{name}: circuit halves ({bad})")
        (cases, bad), (hyp, bad2) = lemmas.modular_pair_inequality(m)
        expect(failures, bad == 0, f"{name}: modular pair inequality ({bad})")
        expect(failures, bad2 == 0, f"{name}: modular pair equality case ({bad2})")


@criterion(4, "guts-line clones exist and are unique", budget=60)
def test_guts_line_clones(failures):
    for name, side in (("k4", ["12", "13", "23"]), ("vamos", A)):
        m = catalog_matroid(name)
        a = m.mask(side)
        b = m.ground & ~a
        frame = free_guts_extension(m, a, b)
        m2 = frame.m2
        xy = m2.mask([frame.x, frame.y])
        expect(failures, are_independent_clones(m2, frame.x, frame.y), f"{name}: not clones")
        expect(failures, m2.closure(a) & m2.closure(b) & xy == xy, f"{name}: clones off guts")
        found = two_clone_extensions(m, a, b)
        expect(failures, len(found) >= 1, f"{name}: search found nothing")
        expect(failures, all(matroids_equal(e, m2) for e in found),
               f"{name}: a two-clone extension differs from the frame")


def prism_requests(prism):
    return [
        ExtensionRequest(("X", "Y"), prism.mask(["12"]), prism.mask(["14", "45", "25"]), "p"),
        ExtensionRequest(("Y", "Z"), prism.mask(["14", "12", "25"]), prism.mask(["45"]), "q"),
    ]


@criterion(5, "prism tree plan extends consistently", budget=30)
def test_prism_plan(failures):
    prism = build_matroid(catalog.prism())
    parts = {"X": prism.mask(["12", "13", "23"]), "Y": prism.mask(["14", "25", "36"]),
             "Z": prism.mask(["45", "46", "56"])}
    edges = [("X", "Y"), ("Y", "Z")]
    results = []
    for order in itertools.permutations(prism_requests(prism)):
        final = tree_multi_extension(prism, TreeExtensionPlan(parts, edges, list(order)))
        results.append(final)
        for req in order:
            pbit = 1 << final.index(req.label)
            for strand in (req.y_strand, req.z_strand):
                expect(failures, final.is_circuit(strand | pbit),
                       f"{prism.labels_of(strand)} + {req.label} is not a circuit")
    expect(failures, all(matroids_equal(r, results[0]) for r in results),
           "plan orders disagree")
    expected = graphic_matroid(list(catalog.PRISM_EDGES) + [(1, 2), (4, 5)],
                               labels=list(prism.labels) + ["p", "q"])
    expect(failures, matroids_equal(results[0], expected), "not the doubled-edge prism")


@criterion(6, "strand graph structure", budget=30)
def test_strand_graphs(failures):
    v = build_matroid(catalog.vamos())
    g = strand_graph(v, A)
    pair_masks = {v.mask(p) for p in PAIRS}
    paired = [(i, j) for i, j in g.edges
              if g.a_strands[i].members in pair_masks and g.b_strands[j].members in pair_masks]
    expect(failures, len(g.edges) == 3 and len(paired) == 3, f"vamos edges {g.edges}")
    found = bunches(g)
    expect(failures, len(found) == 1 and not found[0].complete, "vamos bunch")

    vp = build_matroid(catalog.vamos_plus())
    found = bunches(strand_graph(vp, A))
    expect(failures, len(found) == 1 and found[0].complete
           and len(found[0].a_indices) + len(found[0].b_indices) == 4, "vamos-plus bunch")

    k4 = build_matroid(catalog.k4())
    g = strand_graph(k4, ["12", "13", "23"])
    found = bunches(g)
    matching = (len(g.edges) == 3 and len({i for i, _ in g.edges}) == 3
                and len({j for _, j in g.edges}) == 3)
    expect(failures, matching, f"k4 edges {g.edges}")
    expect(failures, len(found) == 3 and all(b.complete for b in found), "k4 bunches")

    checked = 0
    instances = [catalog_matroid(n) for n in SMALL_CATALOG] + [m for _, m in all_vamos_like()]
    for m in instances:
        for sep in enumerate_exact_3_separations(m):
            g = strand_graph(m, sep.A, sep.B)
            for i, j in g.edges:
                a0, b0 = g.a_strands[i].members, g.b_strands[j].members
                if check_guts_extendability(m, sep.A, sep.B, a0, b0).extendable:
                    checked += 1
                    expect(failures, special_strands(g, a0, b0).complete,
                           f"extendable with incomplete special bunch in {m}")
    expect(failures, checked > 0, "no extendable instance checked")


if __name__ == "__main__":
    tests = [test_vamos_blocked, test_positive_cases, test_lemma_suite,
             test_guts_line_clones, test_prism_plan, test_strand_graphs]
    ok = True
    for t in tests:
        try:
            t()
        except AssertionError:
            ok = False
    sys.exit(0 if ok else 1)
