import random
from fractions import Fraction
from math import gcd

import pytest

from curveatlas.curves import CurveId, paper_points, rational_paper_points
from curveatlas.kernel import rational_sqrt
from curveatlas.search import (
    ReconcileReport, SearchMode, SearchSpec, reconcile, search_integral,
    search_ks,
)


F = Fraction

KS_POINTS = {
    (F(0), F(0)),
    (F(1), F(4)), (F(1), F(-4)),
    (F(-1), F(4)), (F(-1), F(-4)),
    (F(1, 2), F(7, 4)), (F(1, 2), F(-7, 4)),
    (F(2), F(14)), (F(2), F(-14)),
}

K1_INTEGRAL = {
    (F(0), F(0)), (F(1), F(2)), (F(-1), F(0)), (F(0), F(2)),
    (F(-1), F(2)), (F(2), F(6)),
}

K3_INTEGRAL = {
    (F(3), F(6)), (F(-1), F(2)), (F(1), F(6)), (F(3), F(14)),
    (F(7), F(26)), (F(-17), F(150)), (F(-1), F(-2)), (F(-3), F(6)),
    (F(1), F(2)),
}


class TestSpecValidation:
    def test_bound_positive(self):
        with pytest.raises(ValueError):
            SearchSpec(CurveId.KS, SearchMode.RATIONAL_HEIGHT, 0)

    def test_partitions_positive(self):
        with pytest.raises(ValueError):
            SearchSpec(CurveId.KS, SearchMode.RATIONAL_HEIGHT, 5, 0)

    def test_mode_curve_pairing(self):
        with pytest.raises(ValueError):
            SearchSpec(CurveId.K3, SearchMode.RATIONAL_HEIGHT, 5)
        with pytest.raises(ValueError):
            SearchSpec(CurveId.KS, SearchMode.INTEGRAL_BOX, 5)


class TestKsSearch:
    def test_height_one(self):
        pts = set(search_ks(1).points())
        assert pts == {p for p in KS_POINTS if abs(p[0]) <= 1 and p[0].denominator == 1}
        assert len(pts) == 5

    def test_height_two_finds_all_nine(self):
        assert set(search_ks(2).points()) == KS_POINTS

    def test_height_fifty_finds_nothing_new(self):
        res = search_ks(50)
        assert set(res.points()) == KS_POINTS
        assert res.scanned > 3000

    def test_partition_independence(self):
        base = set(search_ks(30).points())
        for parts in (4, 16):
            assert set(search_ks(30, partitions=parts).points()) == base

    def test_parallel_jobs_same_answer(self):
        assert set(search_ks(40, partitions=4, jobs=4).points()) == KS_POINTS

    def test_scanned_counts_reduced_fractions_once(self):
        res = search_ks(2)
        # reduced p/q with |p| <= 2, 1 <= q <= 2: p/1 for 5 values of p,
        # p/2 for p odd in {-1, 1} -> 5 + 2... plus -2/1, 2/1 etc.
        count = sum(
            1 for p in range(-2, 3) for q in (1, 2) if gcd(abs(p), q) == 1
        )
        assert res.scanned == count

    def test_randomized_completeness_audit(self):
        # independent membership test for 1000 random (p, q) against the
        # emitted set at H = 30
        H = 30
        emitted = set(search_ks(H).points())
        rng = random.Random(4242)
        for _ in range(1000):
            p = rng.randint(-H, H)
            q = rng.randint(1, H)
            if gcd(abs(p), q) != 1:
                continue
            z = F(p, q)
            fz = 2 * z * (z**4 + 4 * z**3 - 2 * z * z + 4 * z + 1)
            r = rational_sqrt(fz) if fz >= 0 else None
            if r is not None:
                assert (z, r) in emitted and (z, -r) in emitted
            else:
                assert all(pt[0] != z for pt in emitted)


class TestIntegralSearch:
    def test_k1_box_two(self):
        assert set(search_integral(CurveId.K1, 2).points()) == K1_INTEGRAL

    def test_k1_box_fifty_finds_nothing_new(self):
        assert set(search_integral(CurveId.K1, 50).points()) == K1_INTEGRAL

    def test_k3_box_seventeen(self):
        assert set(search_integral(CurveId.K3, 17).points()) == K3_INTEGRAL

    def test_k3_box_one(self):
        pts = set(search_integral(CurveId.K3, 1).points())
        assert pts == {(F(-1), F(2)), (F(-1), F(-2)), (F(1), F(2)), (F(1), F(6))}

    def test_partition_independence(self):
        base = set(search_integral(CurveId.K3, 20).points())
        for parts in (4, 16):
            got = set(search_integral(CurveId.K3, 20, partitions=parts).points())
            assert got == base

    def test_scanned_count(self):
        assert search_integral(CurveId.K1, 10).scanned == 21


class TestReconcile:
    def test_ks_table_clean(self):
        rep = reconcile(search_ks(200, partitions=4, jobs=2),
                        list(paper_points(CurveId.KS)))
        assert rep.clean()
        assert len(rep.both) == 9

    def test_k1_table_clean(self):
        rep = reconcile(search_integral(CurveId.K1, 25),
                        list(paper_points(CurveId.K1)))
        assert rep.clean()
        assert len(rep.both) == 6

    def test_k3_integral_subset(self):
        table = [
            r for r in rational_paper_points(CurveId.K3)
            if r.pt[0].denominator == 1 and r.pt[1].denominator == 1
        ]
        rep = reconcile(search_integral(CurveId.K3, 25), table)
        assert rep.clean()
        assert len(rep.both) == 9

    def test_buckets(self):
        res = search_ks(1)
        rep = reconcile(res, list(paper_points(CurveId.KS)))
        assert set(rep.paper_only) == {
            (F(1, 2), F(7, 4)), (F(1, 2), F(-7, 4)),
            (F(2), F(14)), (F(2), F(-14)),
        }
        assert rep.search_only == []
        assert not rep.clean()

    def test_curve_mismatch_rejected(self):
        with pytest.raises(ValueError):
            reconcile(search_ks(1), list(paper_points(CurveId.K1)))


def test_search_images_match_birational_partner_tables():
    # the 9 KS points map exactly onto the 9 non-exceptional rational K3
    # points under the birational map
    from curveatlas.maps import ks_to_k3
    imgs = {ks_to_k3(pt) for pt in search_ks(2).points()}
    k3 = {r.pt for r in rational_paper_points(CurveId.K3)}
    assert imgs == k3 - {(F(1), F(2)), (F(-1), F(-2))}
