"""Acceptance criteria, one test per criterion, each printing a PASS line."""

import itertools
import json
import random
import time
from fractions import Fraction

import numpy as np
import sympy
from click.testing import CliRunner

from conftest import blowup_model
from relgt.classes import HypersurfaceModel, ManifoldModel, d_of, l_of
from relgt.cli import main as cli_main
from relgt.decomp import (
    DecompositionError,
    InvariantTable,
    conv_inequality_check,
    gt_from_ru,
    qu_partitions,
)
from relgt.initialdata import DataClass, InitialData, is_proper, partition_sign
from relgt.k3 import build_k3_lattice, picard_signature_check
from relgt.knownvalues import apply_rules
from relgt.lattice import (
    E8_GRAM,
    IntegralLattice,
    LatticeClass,
    e8_lattice,
    enumerate_square_classes,
    pairing,
    signature,
)
from relgt.rimtori import RimPresentation, enumerate_lifts, refined_sum_check, rim_rank


def _report(number, name, started):
    elapsed = time.perf_counter() - started
    print(f"[ACCEPTANCE {number}] {name}: PASS ({elapsed:.2f}s)", flush=True)
    return elapsed


def canonical(n):
    return DataClass(0, 0, (), (), (1,) * n)


def test_acceptance_1_genus0_theorem_reproduction():
    started = time.perf_counter()
    for m in range(1, 6):
        M = blowup_model(m)
        L = M.lattice
        v = L.class_from_labels({"h": 3, **{f"E{i}": -1 for i in range(1, m + 1)}})
        V = HypersurfaceModel.create(M, v, genus=1)
        Es = [L.basis_class(f"E{i}") for i in range(1, m + 1)]
        table = InvariantTable()
        apply_rules(table, M, V, [(E, canonical(1)) for E in Es])
        A = LatticeClass([0] + [1] * m)
        value = gt_from_ru(M, V, A, canonical(m), table, mode="direct")
        assert value == 1, f"m={m}: GT direct = {value}"
    elapsed = _report(1, "genus-0 theorem reproduction", started)
    assert elapsed < 1.0


def _dzero_models():
    M1 = blowup_model(1)
    v1 = M1.lattice.class_from_labels({"h": 2, "E1": -1})
    V1 = HypersurfaceModel.create(M1, v1, genus=0)
    A1 = M1.lattice.basis_class("E1")  # d = 0, l = 1

    M2 = blowup_model(2)
    v2 = M2.lattice.class_from_labels({"h": 2, "E1": -1, "E2": -1})
    V2 = HypersurfaceModel.create(M2, v2, genus=0)
    A2 = LatticeClass([0, 1, 1])  # d = 0, l = 2

    L3 = IntegralLattice([[0, 1], [1, 0]], ["u", "v"])
    M3 = ManifoldModel(lattice=L3, K=LatticeClass([0, 0]))
    V3 = HypersurfaceModel.create(M3, L3.basis_class("v"), genus=1)
    A3 = L3.basis_class("u")  # d = 0, l = 1
    return [(M1, V1, A1), (M2, V2, A2), (M3, V3, A3)]


def test_acceptance_2_dzero_characterization_equivalence():
    started = time.perf_counter()
    multisets = [
        tuple(ms)
        for size in range(5)
        for ms in itertools.combinations_with_replacement((1, 2, 3), size)
    ]
    models = _dzero_models()
    checked = 0
    for M, V, A in models:
        assert d_of(M, A) == 0
        l_A = l_of(M, V, A)
        for d1 in range(5):
            for d2 in range(5):
                for l1 in multisets:
                    for l2 in multisets:
                        for l3 in multisets:
                            dc = DataClass(d1, d2, l1, l2, l3)
                            proper = bool(is_proper(M, V, A, dc))
                            closed = (
                                d1 == 0
                                and d2 == 0
                                and not l1
                                and not l2
                                and len(l3) == l_A
                                and all(s == 1 for s in l3)
                            )
                            assert proper == closed, (M.name, dc)
                            checked += 1
    assert checked == 3 * 25 * len(multisets) ** 3
    elapsed = _report(2, "d_A = 0 properness characterization", started)
    assert elapsed < 10.0


def test_acceptance_3_compactness_inequality_randomized():
    started = time.perf_counter()
    rng = random.Random(2024)
    valid = 0
    equalities = 0
    while valid < 500:
        k = rng.randint(1, 5)
        M = blowup_model(k)
        L = M.lattice
        h = L.basis_class("h")
        d = rng.randint(2, 3)
        a = [rng.randint(0, 1) for _ in range(k)]
        combo = {"h": d, **{f"E{i+1}": -a[i] for i in range(k)}}
        v = L.class_from_labels(combo)
        g = 1 + (d * d - 3 * d) // 2
        if g < 0:
            continue
        try:
            V = HypersurfaceModel.create(M, v, genus=g)
        except ValueError:
            continue
        m = rng.randint(0, 2)
        A_list = [
            (rng.randint(1, 2) * h, rng.randint(1, 3))
            for _ in range(rng.randint(0, 2))
        ]
        B_list = []
        if m > 0:
            for i in range(k):
                cap = m * a[i]
                if cap > 0 and rng.random() < 0.5:
                    B_list.append((L.basis_class(f"E{i+1}"), rng.randint(1, cap)))
        if m == 0 and not A_list:
            continue
        try:
            report = conv_inequality_check(M, V, m, B_list, A_list)
        except DecompositionError:
            continue
        valid += 1
        assert report.holds, (k, d, a, m, A_list, B_list)
        if report.equality:
            equalities += 1
            assert any(report.bullets.values())
    # seeded equality instances: m = 0 single-component decompositions
    for k in range(1, 6):
        M = blowup_model(k)
        h = M.lattice.basis_class("h")
        v = M.lattice.class_from_labels({"h": 2})
        V = HypersurfaceModel.create(M, v, genus=0)
        report = conv_inequality_check(M, V, 0, [], [(h, 1)])
        assert report.holds and report.equality
        assert report.bullets["no_negative_components"]
        equalities += 1
    assert equalities >= 5
    elapsed = _report(3, "compactness inequality (500 randomized)", started)
    assert elapsed < 30.0


def test_acceptance_4_k3_lattice_and_e8_roots():
    started = time.perf_counter()
    L = build_k3_lattice()
    assert L.rank == 22
    assert signature(L) == (3, 19)
    assert all(L.gram[i][i] % 2 == 0 for i in range(22))
    assert abs(L.det()) == 1

    roots = enumerate_square_classes(e8_lattice(negated=True), -2)
    assert len(roots) == 240
    # the box |c| <= 6 covers every root (highest-root coefficients)
    assert max(abs(x) for r in roots for x in r.coords) <= 6

    # independent naive box search over the full coefficient box, split
    # into two half-coordinate grids
    G = np.array(E8_GRAM, dtype=np.int64)
    half = np.array(
        list(itertools.product(range(-6, 7), repeat=4)), dtype=np.int64
    )
    G11, G12, G22 = G[:4, :4], G[:4, 4:], G[4:, 4:]
    qa = np.einsum("ij,jk,ik->i", half, G11, half)
    qb = np.einsum("ij,jk,ik->i", half, G22, half)
    P = half @ G12  # (N, 4)
    count = 0
    step = 1024
    for s in range(0, len(half), step):
        cross = 2 * P[s : s + step] @ half.T
        totals = qa[s : s + step, None] + cross + qb[None, :]
        count += int(np.count_nonzero(totals == 2))
    assert count == 240
    elapsed = _report(4, "K3 lattice shape and E8 root count", started)
    assert elapsed < 30.0


def _charpoly_signature(gram):
    M = sympy.Matrix(gram)
    coeffs = M.charpoly().all_coeffs()
    zeros = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    changes = sum(1 for x, y in zip(signs, signs[1:]) if x != y)
    return changes, M.shape[0] - zeros - changes, zeros


def test_acceptance_5_picard_signature_oracle():
    started = time.perf_counter()
    L = build_k3_lattice()
    rng = random.Random(5)
    done = 0
    while done < 50:
        r = rng.randint(1, 5)
        basis = [
            LatticeClass([rng.randint(-2, 2) for _ in range(22)]) for _ in range(r)
        ]
        try:
            ok, rr, dim = picard_signature_check(L, basis)
        except Exception:
            continue
        done += 1
        assert rr + dim == 20
        gram = [[pairing(L, x, y) for y in basis] for x in basis]
        pos, neg, zero = _charpoly_signature(gram)
        assert ok == (pos == 1 and neg == rr - 1 and zero == 0 and rr <= 20)
    elapsed = _report(5, "Picard signature vs charpoly oracle (50)", started)
    assert elapsed < 10.0


def test_acceptance_6_multiple_cover_dimension_monotonicity():
    started = time.perf_counter()
    rng = random.Random(6)
    M = blowup_model(3)
    done = 0
    while done < 1000:
        A = LatticeClass([rng.randint(-5, 5) for _ in range(4)])
        if d_of(M, A) < 0 or pairing(M.lattice, A, A) < 0:
            continue
        r = rng.randint(1, 10)
        assert d_of(M, r * A) >= 0, (A, r)
        done += 1
    elapsed = _report(6, "multiple-cover dimension monotonicity (1000)", started)
    assert elapsed < 5.0


def test_acceptance_7_qu_partition_indexing():
    started = time.perf_counter()

    def brute(n):
        pairs = [(q, m) for q in range(1, n + 1) for m in range(1, n + 1)]
        out = set()

        def rec(start, rem, acc):
            if rem == 0:
                out.add(tuple(sorted(acc)))
                return
            for i in range(start, len(pairs)):
                q, m = pairs[i]
                if q * m <= rem:
                    rec(i, rem - q * m, acc + [(q, m)])

        rec(0, n, [])
        return out

    for n in range(1, 9):
        assert set(qu_partitions(n)) == brute(n), n
    elapsed = _report(7, "Qu partition indexing (n <= 8)", started)
    assert elapsed < 5.0


def test_acceptance_8_partition_sign_well_defined():
    started = time.perf_counter()
    layouts = [
        (("g1", "g2", "g3"), ("m1", "m2", "m3")),
        (("g1", "g2", "g3", "g4", "g5", "g6"), ()),
        (("g1", "g2"), ("m1", "m2", "m3", "m4")),
    ]
    for d2_ids, l2_ids in layouts:
        I = InitialData(
            d2_curves=d2_ids, l2_pairs=tuple((x, 1) for x in l2_ids)
        )
        ids = list(d2_ids) + list(l2_ids)
        for k in range(1, 4):
            order = list(range(k))
            for assign_tuple in itertools.product(range(k), repeat=len(ids)):
                assignment = dict(zip(ids, assign_tuple))
                # parity condition: every block has an even number of
                # curve elements in total
                sizes = [
                    sum(1 for x in ids if assignment[x] == c) for c in range(k)
                ]
                if any(s % 2 for s in sizes):
                    continue
                base = partition_sign(I, assignment, order)
                for perm in itertools.permutations(range(k)):
                    relabeled = {x: perm[assignment[x]] for x in ids}
                    assert partition_sign(I, relabeled, order) == base, (
                        assignment,
                        perm,
                    )
    elapsed = _report(8, "partition sign independent of block labels", started)
    assert elapsed < 5.0


def test_acceptance_9_rim_refined_consistency():
    started = time.perf_counter()
    rng = random.Random(9)
    A = LatticeClass([1, 0])
    lifts = enumerate_lifts(A, [], 1, 2)
    for _ in range(100):
        table = {k: rng.randint(-5, 5) for k in lifts}
        base = sum(table.values())
        assert refined_sum_check(table, base, A)
        perturbed = dict(table)
        key = rng.choice(lifts)
        perturbed[key] += rng.choice([-2, -1, 1, 2])
        assert not refined_sum_check(perturbed, base, A)
    for _ in range(100):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        mat = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        assert rim_rank(RimPresentation(cols, mat)) == sympy.Matrix(mat).rank()
    elapsed = _report(9, "rim/refined consistency", started)
    assert elapsed < 5.0


def test_acceptance_10_per_mode_discrepancy_flagged(tmp_path):
    started = time.perf_counter()
    M = blowup_model(2)
    v = M.lattice.class_from_labels({"h": 2, "E1": -1, "E2": -1})
    V = HypersurfaceModel.create(M, v, genus=0)
    A = LatticeClass([0, 1, 1])
    assert l_of(M, V, A) == 2  # l_A = E1·V + E2·V > 1
    table = InvariantTable()
    E1, E2 = M.lattice.basis_class("E1"), M.lattice.basis_class("E2")
    apply_rules(table, M, V, [(E1, canonical(1)), (E2, canonical(1))])
    literal = gt_from_ru(M, V, A, canonical(2), table, mode="literal")
    unit = gt_from_ru(M, V, A, canonical(2), table, mode="unit")
    assert literal != unit

    doc = {
        "name": "blowup-2",
        "gram": [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
        "labels": ["h", "E1", "E2"],
        "K": "-3h+E1+E2",
        "hypersurface": {"class": "2h-E1-E2", "genus": 0},
        "ru_table": [
            {"class": "E1", "l3": [1], "value": 1},
            {"class": "E2", "l3": [1], "value": 1},
        ],
    }
    mpath = tmp_path / "m.json"
    mpath.write_text(json.dumps(doc))
    dpath = tmp_path / "d.json"
    dpath.write_text(json.dumps({"l3": [1, 1]}))
    result = CliRunner().invoke(
        cli_main,
        ["invariant", "--manifold", str(mpath), "--class", "E1+E2", "--data", str(dpath)],
    )
    assert result.exit_code == 0, result.output
    assert "per_mode_discrepancy: yes" in result.output
    elapsed = _report(10, "Per-mode discrepancy documented", started)
    assert elapsed < 1.0
