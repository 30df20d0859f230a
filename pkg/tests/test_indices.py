import dataclasses
import math
from collections import Counter

import numpy as np
import pytest

from planar_inv.curve import find_crossings, in_open_interval
from planar_inv.exceptions import EpsilonTooLarge, NonOddBottomIndex
from planar_inv.generators import figure_eight, with_curl
from planar_inv.indices import (
    ArcAngles,
    DoubleIndex,
    arc_angles,
    arc_double_index,
    bottom_index,
    crosscheck_lemma_omega,
    default_epsilon,
    double_index,
    exterior_arcs,
    lemma_omega_value,
    top_index,
)
from planar_inv.invariant import base_curve

TWO_PI = 2 * math.pi


def _arcs(pc):
    cr = find_crossings(pc)
    for c in cr:
        for arc in exterior_arcs(pc, c):
            yield c, arc, cr


def _origin_crossing(pc):
    return min(find_crossings(pc), key=lambda c: math.hypot(*c.location))


def test_double_index_rejects_even_bottom():
    with pytest.raises(NonOddBottomIndex):
        DoubleIndex(0, 2)


def test_figure_eight_lobes():
    pc = figure_eight().sample()
    (c,) = find_crossings(pc)
    a, b = exterior_arcs(pc, c)
    n = len(pc)
    # each lobe is one half of the parameter circle minus the excised strands
    for arc in (a, b):
        assert arc.end - arc.start == pytest.approx(n / 2, abs=n * 0.05)
        assert top_index(arc, [c], n) == 0
    assert double_index(pc, c) in {
        (DoubleIndex(0, 1), DoubleIndex(0, -1)),
        (DoubleIndex(0, -1), DoubleIndex(0, 1)),
    }


def test_figure_eight_theta_matches_tangent_oracle():
    # (sin 2t, sin t) leaves the origin along (2, 1) at t=0 and (2, -1) at t=pi;
    # the lobe from t=0 returns along -(2, -1), so it sweeps pi - 2 atan(1/2)
    pc = figure_eight().sample()
    (c,) = find_crossings(pc)
    thetas = sorted(arc_angles(pc, arc).theta for arc in exterior_arcs(pc, c))
    small = math.pi - 2 * math.atan(0.5)
    assert thetas[0] == pytest.approx(small, abs=0.02)
    assert thetas[1] == pytest.approx(TWO_PI - small, abs=0.02)


def test_thetas_complementary(corpus):
    for pc in corpus:
        for c in find_crossings(pc):
            t1, t2 = (arc_angles(pc, a).theta for a in exterior_arcs(pc, c))
            assert t1 + t2 == pytest.approx(TWO_PI, abs=1e-6)


def test_gamma3_arcs_partition_the_parameter_circle():
    pc = base_curve(3)
    n = len(pc)
    for c in find_crossings(pc):
        a, b = exterior_arcs(pc, c)
        excised = n - (a.end - a.start) - (b.end - b.start)
        # four pieces of length about eps each, two strands through the disc
        assert 0 < excised < 0.1 * n


def test_five_crossing_incidences_partition(corpus):
    curves = [pc for pc in corpus if len(find_crossings(pc)) >= 5]
    assert curves
    for pc in curves:
        n = len(pc)
        cr = find_crossings(pc)
        classes = {c: [] for c in cr}
        for c in cr:
            a, b = exterior_arcs(pc, c)
            for d in cr:
                if d is c:
                    continue
                where = []
                for p in (d.s, d.t):
                    in_a = in_open_interval(p, a.start, a.end, n)
                    in_b = in_open_interval(p, b.start, b.end, n)
                    assert in_a != in_b
                    where.append("a" if in_a else "b")
                classes[c].append("".join(sorted(where)))
        for c, kinds in classes.items():
            # own crossings of arc a, of arc b, and mixed ones cover everything else once
            assert len(kinds) == len(cr) - 1
            assert set(kinds) <= {"aa", "ab", "bb"}


def _sign_oracle(pc, arc, cr):
    """Signs of crossings inside ``arc``, recomputed from the raw tangents."""
    n = len(pc)
    total = 0
    for d in cr:
        if in_open_interval(d.s, arc.start, arc.end, n) and in_open_interval(d.t, arc.start, arc.end, n):
            first, second = sorted((d.s, d.t), key=lambda p: (p - arc.start) % n)
            u, w = pc.tangent(first), pc.tangent(second)
            total += 1 if u[0] * w[1] - u[1] * w[0] > 0 else -1
    return total


@pytest.mark.parametrize("m, expected", [(3, -1), (-3, 1)])
def test_top_index_of_arc_with_one_curl(m, expected):
    pc = base_curve(m)
    cr = find_crossings(pc)
    for c in cr:
        tops = sorted(top_index(arc, cr, len(pc)) for arc in exterior_arcs(pc, c))
        # one arc is the curl's own lobe, the other carries the other curl
        assert tops == sorted([0, expected])
        for arc in exterior_arcs(pc, c):
            assert top_index(arc, cr, len(pc)) == _sign_oracle(pc, arc, cr)


def test_top_index_matches_sign_oracle_on_corpus(corpus):
    for pc in corpus:
        for c, arc, cr in _arcs(pc):
            assert top_index(arc, cr, len(pc)) == _sign_oracle(pc, arc, cr)


@pytest.mark.parametrize("side, shift", [(1, (-1, -2)), (-1, (1, 2))])
def test_curl_on_a_lobe_shifts_its_index(side, shift):
    base = figure_eight()
    pc = base.sample()
    before = double_index(pc, _origin_crossing(pc))
    curled = with_curl(base, math.pi / 2, side=side).sample()
    after = double_index(curled, _origin_crossing(curled))
    moved = [(y.i1 - x.i1, y.i2 - x.i2) for x, y in zip(before, after) if x != y]
    assert moved == [shift]


def test_circle_with_curl_phi_minus_omega_is_odd_multiple():
    pc = base_curve(2)
    for c, arc, cr in _arcs(pc):
        ang = arc_angles(pc, arc)
        raw = (ang.phi - ang.omega) / math.pi
        assert abs(raw - round(raw)) < 1e-6 and round(raw) % 2 == 1


def test_round_tour_and_curl_on_angles():
    ang = ArcAngles(theta=1.0, phi=0.4, omega=0.4 - math.pi)
    i2 = bottom_index(ang)
    i1 = lemma_omega_value(ang)
    # going once more around the disc adds a full turn to both rotations
    tour = ArcAngles(ang.theta, ang.phi + TWO_PI, ang.omega + TWO_PI)
    assert bottom_index(tour) == i2
    assert lemma_omega_value(tour) == pytest.approx(i1 + 1)
    # a counterclockwise curl adds a full turn to the tangent only
    curl = ArcAngles(ang.theta, ang.phi, ang.omega + TWO_PI)
    assert bottom_index(curl) == i2 - 2
    assert lemma_omega_value(curl) == pytest.approx(i1 - 1)


def test_bottom_index_rejects_half_residual():
    with pytest.raises(NonOddBottomIndex):
        bottom_index(ArcAngles(1.0, 0.0, -1.5 * math.pi))
    with pytest.raises(NonOddBottomIndex):
        bottom_index(ArcAngles(1.0, 0.0, -2 * math.pi))


def test_mirror_negates_indices(smooth_corpus):
    for sc in smooth_corpus[:20]:
        pc, mc = sc.sample(), sc.mirrored().sample()
        got = Counter()
        want = Counter()
        for c in find_crossings(pc):
            want.update((-d.i1, -d.i2) for d in double_index(pc, c))
        for c in find_crossings(mc):
            got.update(tuple(d) for d in double_index(mc, c))
        assert got == want


def test_gamma2_grading():
    pc = base_curve(2)
    (c,) = find_crossings(pc)
    a, b = double_index(pc, c)
    assert a.i1 + b.i1 - a.i2 - b.i2 == 2


def test_parity_and_inversion_formulas(corpus):
    for pc in corpus:
        for c, arc, cr in _arcs(pc):
            ang = arc_angles(pc, arc)
            d = arc_double_index(pc, arc, cr)
            assert d.i2 % 2 == 1
            assert ang.phi == pytest.approx(TWO_PI * d.i1 - math.pi * d.i2 + ang.theta - math.pi, abs=1e-6)
            assert ang.omega == pytest.approx(
                TWO_PI * d.i1 - TWO_PI * d.i2 + ang.theta - math.pi, abs=1e-6
            )


def test_crosscheck_figure_eight_and_corpus(corpus):
    for pc in [figure_eight().sample()] + corpus[:29]:
        for c, arc, cr in _arcs(pc):
            ok, diag = crosscheck_lemma_omega(arc, arc_angles(pc, arc), cr, len(pc))
            assert ok, diag


def test_crosscheck_detects_corrupted_signs():
    pc = base_curve(3)
    cr = find_crossings(pc)
    flipped = [dataclasses.replace(c, sign=-c.sign) for c in cr]
    caught = 0
    for c in cr:
        for arc in exterior_arcs(pc, c):
            ang = arc_angles(pc, arc)
            assert crosscheck_lemma_omega(arc, ang, cr, len(pc))[0]
            if top_index(arc, cr, len(pc)) != 0:
                ok, diag = crosscheck_lemma_omega(arc, ang, flipped, len(pc))
                assert not ok and diag["combinatorial"] != diag["rounded"]
                caught += 1
    assert caught == 2


def test_indices_stable_under_eps_and_resampling(smooth_corpus):
    for sc in smooth_corpus:
        pc = sc.sample()
        fine = sc.sample(2 * sc.default_n)
        cr, cr_fine = find_crossings(pc), find_crossings(fine)
        assert len(cr) == len(cr_fine)
        for c in cr:
            # crossing lists of the two samplings need not share an index order
            cf = min(cr_fine, key=lambda d: math.dist(d.location, c.location))
            ref = double_index(pc, c)
            assert double_index(pc, c, default_epsilon(pc, c, cr) / 2) == ref
            assert double_index(fine, cf) == ref


def test_epsilon_too_large():
    pc = base_curve(3)
    c = find_crossings(pc)[0]
    with pytest.raises(EpsilonTooLarge):
        exterior_arcs(pc, c, eps=1.0)


def test_default_epsilon_below_crossing_gap():
    pc = base_curve(4)
    cr = find_crossings(pc)
    for c in cr:
        gap = min(math.dist(c.location, d.location) for d in cr if d is not c)
        assert 0 < default_epsilon(pc, c, cr) <= gap / 4 + 1e-12
        assert np.isfinite(default_epsilon(pc, c, cr))
