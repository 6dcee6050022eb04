"""Acceptance gate: the eight checks this artifact must pass.

One test per criterion, each ending in a single printed PASS line with its
measured runtime, so `pytest -v -s tests/test_acceptance.py` reads as a
checklist.  Budgets are asserted, not aspirational.
"""

import json
import os
import subprocess
import sys
import time

import pytest

from koszulkit.bar_homology import (
    bar_slice,
    betti_table,
    compose_is_zero,
    is_koszul_window,
    is_large_window,
    is_one_linear_window,
)
from koszulkit.errors import NonAcyclicModel
from koszulkit.exact_linalg import FieldSpec, kernel_basis, rank
from koszulkit.graded_algebra import (
    Presentation,
    augmentation_map,
    from_presentation,
    quotient_by_degree_one,
)
from koszulkit.grassmann import pluecker_pairs, pluecker_ring, schubert_map
from koszulkit.homotopy import build_homotopy, in_sigma_domain, lemma41_check, sigma, verify_homotopy
from koszulkit.model_complex import build_model, middle_homology, model_window_check
from koszulkit.toric import coordinate_ring, lattice_polytope

from oracles import hypersurface_tor_degrees, naive_rank, poincare_from_hilbert

GF101 = FieldSpec.gf(101)

X3_PRES = Presentation(gens=("x",), relations=(((1, (3,)),),))
XY_PRES = Presentation(gens=("x", "y"))
MONOMIAL_PRES = Presentation(gens=("x", "y"), relations=(((1, (1, 1)),),))
SEGRE_PRES = Presentation(
    gens=("x00", "x01", "x10", "x11"),
    relations=(((1, (1, 0, 0, 1)), (-1, (0, 1, 1, 0))),),
)


def _stopwatch():
    t0 = time.monotonic()
    return lambda: time.monotonic() - t0


def test_criterion_1_grassmannian_koszul_window():
    took = _stopwatch()
    r, _ = pluecker_ring(4, GF101, j_max=5)
    _, aug = augmentation_map(r)
    table = betti_table(r, aug, 4, 5)
    ok, witness = table.is_diagonal()
    assert ok, f"off-diagonal Tor at {witness}"
    assert [table.entry(i, i) for i in range(4)] == [1, 6, 16, 26]

    # oracle A: Poincare-Hilbert inversion 1/H(-t) = (1+t)^6/(1-t^2)
    assert poincare_from_hilbert(r.piece_dims, 4) == [1, 6, 16, 26, 31]
    assert [table.entry(i, i) for i in range(5)] == [1, 6, 16, 26, 31]

    # oracle B: independent dense row reduction of sample slice matrices
    for key in ((1, 2), (2, 2), (2, 3), (3, 3)):
        sl = bar_slice(r, aug, *key)
        assert naive_rank(sl.d_out.to_dense(), 101) == rank(sl.d_out)

    elapsed = took()
    assert elapsed <= 60.0, f"budget exceeded: {elapsed:.1f}s"
    print(f"\nACCEPTANCE 1: PASS - Gr(2,4) window (4,5) diagonal 1,6,16,26 "
          f"[{elapsed:.1f}s]")


def test_criterion_2_non_koszul_detection():
    took = _stopwatch()
    r = from_presentation(X3_PRES, GF101, j_max=3)
    _, aug = augmentation_map(r)

    v = is_koszul_window(r, 2, 3)
    assert not v.passed and v.witness == (2, 3)
    table = betti_table(r, aug, 2, 3)
    assert table.entry(2, 3) == 1

    # oracle: the periodic minimal resolution over k[x]/(x^3)
    degs = hypersurface_tor_degrees(3, 2)
    assert degs == {0: 0, 1: 1, 2: 3}
    assert dict(table.entries) == {(i, j): 1 for i, j in degs.items()}

    mv = model_window_check(r, aug, 2, 3)
    assert not mv.passed and mv.witness == (0, 1, 1, 1)
    assert middle_homology(build_model(r, aug, (0, 1, 1, 1))) == 1

    with pytest.raises(NonAcyclicModel) as exc:
        build_homotopy(r, aug, 2, 3)
    assert exc.value.alpha == (0, 1, 1, 1)

    elapsed = took()
    assert elapsed <= 1.0, f"budget exceeded: {elapsed:.2f}s"
    print(f"\nACCEPTANCE 2: PASS - k[x]/(x^3) witnesses (2,3) and alpha "
          f"(0,1,1,1) [{elapsed:.2f}s]")


def test_criterion_3_cross_backend_equivalence():
    took = _stopwatch()
    square = lattice_polytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    semi = coordinate_ring(square, GF101, j_max=4)
    pres = from_presentation(SEGRE_PRES, GF101, j_max=4)

    assert semi.hilbert_function() == pres.hilbert_function() == [1, 4, 9, 16, 25]

    _, aug_s = augmentation_map(semi)
    _, aug_p = augmentation_map(pres)
    ts = betti_table(semi, aug_s, 4, 4)
    tp = betti_table(pres, aug_p, 4, 4)
    assert ts.entries == tp.entries

    elapsed = took()
    assert elapsed <= 30.0, f"budget exceeded: {elapsed:.1f}s"
    print(f"\nACCEPTANCE 3: PASS - unit-square lattice ring == quadric "
          f"presentation on (4,4) [{elapsed:.1f}s]")


def test_criterion_4_schubert_sweep():
    took = _stopwatch()
    r, _ = pluecker_ring(4, GF101, j_max=4)
    r_koszul = is_koszul_window(r, 3, 4)
    assert r_koszul.passed

    for w in pluecker_pairs(4):
        s, phi = schubert_map(r, w)
        lin = is_one_linear_window(phi, 3, 4)
        large = is_large_window(phi, 3, 4)
        assert lin.passed, (w, lin.witness)
        assert large.passed, (w, large.witness)
        # Lemma 2.3 b): 1-linear implies large
        if lin.passed:
            assert large.passed, w
        # Lemma 2.3 c): R Koszul + large implies S Koszul and map 1-linear
        if r_koszul.passed and large.passed:
            assert is_koszul_window(s, 3, 4).passed, w
            assert lin.passed, w

    elapsed = took()
    assert elapsed <= 120.0, f"budget exceeded: {elapsed:.1f}s"
    print(f"\nACCEPTANCE 4: PASS - all 6 Schubert quotients of Gr(2,4) "
          f"1-linear and large on (3,4) [{elapsed:.1f}s]")


def _corpus():
    """Named (ring, map) pairs, all truncated at j_max = 4."""
    out = []
    for label, pres in (
        ("k[x]", Presentation(gens=("x",))),
        ("k[x,y]", XY_PRES),
        ("k[x,y]/(xy)", MONOMIAL_PRES),
        ("k[x]/(x^3)", X3_PRES),
        ("unit-square", SEGRE_PRES),
    ):
        r = from_presentation(pres, GF101, j_max=4)
        out.append((label, r, augmentation_map(r)[1]))

    xy = from_presentation(XY_PRES, GF101, j_max=4)
    out.append(("k[x,y]->k[x]", xy, quotient_by_degree_one(xy, [[0, 1]])[1]))

    simplex = lattice_polytope([(0, 0), (1, 0), (0, 1)])
    segment = lattice_polytope([(0,), (2,)])
    for label, p in (("2-simplex", simplex), ("segment-[0,2]", segment)):
        r = coordinate_ring(p, GF101, j_max=4)
        out.append((label, r, augmentation_map(r)[1]))

    gr, _ = pluecker_ring(4, GF101, j_max=4)
    out.append(("Gr(2,4)", gr, augmentation_map(gr)[1]))
    for w in ((1, 2), (1, 3)):
        out.append((f"Gr(2,4)/w={w}", gr, schubert_map(gr, w)[1]))
    return out


def test_criterion_5_model_betti_homotopy_consistency():
    took = _stopwatch()
    failures_seen = 0
    for label, r, phi in _corpus():
        mv = model_window_check(r, phi, 3, 4)
        diagonal, _ = betti_table(r, phi, 3, 4).is_diagonal()
        assert mv.passed == diagonal, label
        if not mv.passed:
            failures_seen += 1
            continue
        h = build_homotopy(r, phi, 3, 4)
        res = verify_homotopy(h, r, phi)
        assert res.ok, (label, res.witness)
    assert failures_seen == 1  # exactly k[x]/(x^3)

    elapsed = took()
    assert elapsed <= 300.0, f"budget exceeded: {elapsed:.1f}s"
    print(f"\nACCEPTANCE 5: PASS - model acyclicity == diagonal Betti and "
          f"homotopies verify across the corpus [{elapsed:.1f}s]")


def test_criterion_6_lemma41_exhaustive():
    took = _stopwatch()
    seqs = []

    def grow(prefix, length):
        if len(prefix) >= 2 and in_sigma_domain(prefix):
            seqs.append(prefix)
        if len(prefix) < length:
            for e in range(1, 5):
                grow(prefix + (e,), length)

    for a0 in range(5):
        grow((a0,), 5)

    assert len(seqs) > 1500
    for alpha in seqs:
        assert lemma41_check(alpha), alpha
        sa = sigma(alpha)
        assert sum(sa) == sum(alpha) and len(sa) == len(alpha) + 1
        assert sa[0] == 0

    elapsed = took()
    assert elapsed <= 1.0, f"budget exceeded: {elapsed:.2f}s"
    print(f"\nACCEPTANCE 6: PASS - Lemma 4.1 on {len(seqs)} sigma-domain "
          f"sequences [{elapsed:.2f}s]")


def test_criterion_7_structural_invariants():
    took = _stopwatch()
    xy = from_presentation(XY_PRES, GF101, j_max=4)
    x3 = from_presentation(X3_PRES, GF101, j_max=4)
    gr, _ = pluecker_ring(4, GF101, j_max=4)

    # Tor_{ij} = 0 for j < i: sub-diagonal slices are empty, tables agree
    _, aug = augmentation_map(xy)
    assert bar_slice(xy, aug, 3, 2).dim == 0
    for (i, j) in betti_table(xy, aug, 4, 3).entries:
        assert j >= i

    for r in (xy, x3, gr):
        _, aug = augmentation_map(r)
        # d o d = 0, asserted directly on adjacent slices
        for i, j in ((2, 3), (3, 3), (2, 4)):
            a, b = bar_slice(r, aug, i, j), bar_slice(r, aug, i + 1, j)
            assert compose_is_zero(a.d_out, b.d_out)
        table = betti_table(r, aug, 3, 4)
        for i in range(1, 4):
            sl = bar_slice(r, aug, i, i)
            # rank-nullity on the slice
            assert rank(sl.d_out) + len(kernel_basis(sl.d_out)) == sl.dim
            # diagonal injection: diagonal cycles are exactly the Tor entry
            assert len(kernel_basis(sl.d_out)) == table.entry(i, i)

    # model complexes: d_n o d_{n+1} = 0 with a nonzero bottom term
    xq = quotient_by_degree_one(xy, [[0, 1]])[1]
    kc = build_model(xy, xq, (1, 1, 1, 1))
    assert kc.bottom_dim > 0 and compose_is_zero(kc.d_middle, kc.d_top)

    elapsed = took()
    print(f"\nACCEPTANCE 7: PASS - vanishing below diagonal, d o d = 0, "
          f"diagonal injection, rank-nullity [{elapsed:.1f}s]")


def test_criterion_8_determinism(tmp_path):
    took = _stopwatch()
    x3 = tmp_path / "x3.json"
    x3.write_text(json.dumps({
        "generators": [{"name": "x", "degree": 1}],
        "relations": [{"terms": [{"exponents": [3], "coeff": "1"}]}],
    }))
    jobs = [
        ["betti", "--grassmann", "4", "--imax", "3", "--jmax", "4"],
        ["koszul-check", "--input", str(x3), "--imax", "2", "--jmax", "3"],
        ["model-check", "--input", str(x3), "--imax", "2", "--jmax", "3"],
    ]
    cpus = str(max(os.cpu_count() or 1, 8))
    for job in jobs:
        argv = [sys.executable, "-m", "koszulkit.cli", *job]
        results = []
        for threads in ("1", cpus):
            env = dict(os.environ, KOSZULKIT_THREADS=threads)
            res = subprocess.run(argv, capture_output=True, env=env)
            results.append(res)
        assert results[0].stdout == results[1].stdout, job
        assert results[0].returncode == results[1].returncode, job

    elapsed = took()
    print(f"\nACCEPTANCE 8: PASS - byte-identical reports with "
          f"KOSZULKIT_THREADS=1 vs {cpus} [{elapsed:.1f}s]")
