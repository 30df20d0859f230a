import math

import numpy as np
import pytest

import planar_inv.invariant as inv
from planar_inv.curve import PlanarCurve, find_crossings
from planar_inv.exceptions import GradingViolation, NotStable
from planar_inv.generators import circle, figure_eight
from planar_inv.invariant import F, F_hat, G, K, base_curve, evaluate
from planar_inv.symbols import XVector, YVector, g_m, parse, psi, serialize, x_term, y_term


def test_circle_and_reversed_circle_separated():
    pc = circle().sample()
    rev = pc.reversed()
    assert F(pc) == XVector() and F(rev) == XVector()
    assert serialize(F_hat(pc)) == "X[1,0;1,-1]"
    assert serialize(F_hat(rev)) == "X[-1,0;1,-1]"
    assert F_hat(pc) != F_hat(rev)
    assert K(pc) == YVector()


def test_g_examples():
    assert G(circle().sample()) == x_term(1, 0, 1, -1)
    assert G(figure_eight().sample()) == x_term(0, 0, 1, -1)
    assert G(circle().sample().reversed()) == x_term(-1, 0, 1, -1)


def test_figure_eight():
    res = evaluate(figure_eight().sample())
    ((sym, coef),) = res.f.items()
    assert coef == 1 and (sym.a, sym.b) == (0, 0) and {sym.k, sym.l} == {1, -1}
    assert res.f == x_term(0, 0, 1, -1)
    assert res.f_hat == res.f + x_term(0, 0, 1, -1)
    assert res.k in (y_term(0, -1, 1), y_term(0, -1, 1, -1))


def test_gamma3_two_terms_of_grade_three():
    pc = base_curve(3)
    res = evaluate(pc)
    assert res.whitney == 3 and len(res.per_crossing) == 2
    for c, (a, b) in res.per_crossing:
        # one arc is the curl's own lobe (top 0), the other passes the second
        # counterclockwise curl, whose crossing has sign -1
        assert sorted([a.i1, b.i1]) == [-1, 0]
        assert a.i1 + b.i1 - a.i2 - b.i2 == 3
    assert all(s.grade == 3 for s in res.f)
    assert res.f == x_term(-1, 0, -3, -1, 2)


@pytest.mark.parametrize("m", range(-4, 5))
def test_base_curve_functionals(m):
    fh = F_hat(base_curve(m))
    k = K(base_curve(m))
    for mm in range(-4, 5):
        delta = 1 if mm == m else 0
        assert g_m(psi(fh), mm) == 2 * (1 + (m == 0)) * delta
        assert g_m(k, mm) == 2 * delta * (m == 0)


def test_x_w_and_result_identities(corpus):
    for pc in corpus:
        res = evaluate(pc)
        assert all(s.grade == res.whitney for s in res.f)
        assert res.f_hat == res.f + res.g
        assert res.g == x_term(res.whitney, 0, 1, -1)
        assert res.k == psi(res.f)
        assert psi(res.f_hat) == res.k + y_term(res.whitney, 1, -1)
        assert sum(res.f[s] for s in res.f) == len(find_crossings(pc))


def test_grading_violation_is_fatal(monkeypatch):
    pc = base_curve(2)
    monkeypatch.setattr(inv, "whitney_number", lambda curve, cfg=None: 5)
    with pytest.raises(GradingViolation):
        evaluate(pc)


def test_non_generic_curve_rejected():
    t = 2 * math.pi * (np.arange(256) + 0.5) / 256
    pc = PlanarCurve.from_array(np.column_stack([np.sin(2 * t), 0.05 * np.sin(t)]))
    with pytest.raises(NotStable) as err:
        evaluate(pc)
    assert err.value.report.violations


def test_json_round_trip(corpus):
    for pc in corpus[:12]:
        res = evaluate(pc)
        js = res.to_json()
        assert parse(js["F_hat"]) == res.f_hat
        assert parse(js["K"], zero="Y") == res.k
        assert len(js["crossings"]) == len(res.per_crossing)


def test_similarity_and_base_point_invariance(corpus):
    for pc in corpus[:15]:
        ref = serialize(F_hat(pc))
        moved = pc.transformed(np.array([[0.0, -2.5], [2.5, 0.0]]), (3.0, -1.0))
        assert serialize(F_hat(moved)) == ref
        rolled = PlanarCurve(list(pc.exact[17:]) + list(pc.exact[:17]))
        assert serialize(F_hat(rolled)) == ref
