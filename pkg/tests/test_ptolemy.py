import numpy as np
import pytest
from hypothesis import given, settings, strategies as st_

from superlambda.grassmann import GrassmannNumber, gmul, gsqrt, relative_deviation
from superlambda.triangulation import (
    build_triangulation, fan_triangulation, random_triangulation, SpinStructure, TriangulationError,
)
from superlambda.ptolemy import (
    make_state, flip, flip_with_record, random_state, verify_sigma_theta, verify_double_flip,
    rewritten_relation_deviation, verify_pentagon, random_pentagon_values, flip_sequence_lambda,
    sigma_theta_deviation,
)


def quad(vals, orient=(1, 3), k=2):
    """Quadrilateral 1..4 with diagonal (1,3); vals = a..e and the two mus."""
    t = build_triangulation(4, [(1, 3)])
    lam = {(1, 2): vals[0], (2, 3): vals[1], (3, 4): vals[2], (1, 4): vals[3], (1, 3): vals[4]}
    th = GrassmannNumber.generator(k, 1)
    sg = GrassmannNumber.generator(k, 2)
    return make_state(t, SpinStructure.from_pairs([orient]), lam,
                      {(1, 2, 3): th * vals[5], (1, 3, 4): sg * vals[6]})


def test_classical_flip():
    st = quad([1, 1, 1, 1, 1, 0, 0])
    new, rec = flip_with_record(st, (1, 3))
    assert new.lam_of(2, 4).body == pytest.approx(2.0)
    assert new.lam_of(2, 4).soul().max_abs() == 0.0
    assert rec.f == (2, 4)


def test_flip_labels():
    # 1 -> 3: vertex 2 is on the right, 4 on the left
    st = quad([1, 1, 1, 1, 1, 1, 1])
    new, rec = flip_with_record(st, (1, 3))
    assert (rec.tail, rec.head, rec.left, rec.right) == (1, 3, 4, 2)
    assert rec.sigma_tri == (1, 2, 3) and rec.theta_tri == (1, 3, 4)
    assert rec.sides == {"a": (1, 4), "b": (3, 4), "c": (2, 3), "d": (1, 2)}
    assert new.orient[(2, 4)] == (2, 4)
    assert new.orient[(3, 4)] == (4, 3)
    assert rec.theta_new_tri == (1, 2, 4) and rec.sigma_new_tri == (2, 3, 4)


def test_soul_of_product():
    rng = np.random.default_rng(0)
    vals = list(rng.uniform(0.5, 2, 5)) + [1.3, -0.7]
    st = quad(vals)
    _, rec = flip_with_record(st, (1, 3))
    v = rec.values
    diff = gmul(v["e"], v["f"]) - (gmul(v["a"], v["c"]) + gmul(v["b"], v["d"]))
    assert abs(diff.body) < 1e-12
    want = gmul(gsqrt(gmul(gmul(v["a"], v["b"]), gmul(v["c"], v["d"]))), gmul(rec.sigma, rec.theta))
    assert relative_deviation(diff, want) < 1e-12


def test_flip_errors():
    st = quad([1, 1, 1, 1, 1, 1, 1])
    with pytest.raises(TriangulationError):
        flip(st, (1, 2))
    with pytest.raises(ValueError):
        quad([1, 1, 1, 1, -1, 1, 1])


def test_state_validation():
    t = build_triangulation(4, [(1, 3)])
    with pytest.raises(ValueError):
        make_state(t, SpinStructure.from_pairs([(1, 3)]), {(1, 2): 1.0}, {})


@settings(max_examples=60, deadline=None)
@given(st_.lists(st_.floats(0.5, 2.0), min_size=5, max_size=5),
       st_.floats(-2, 2), st_.floats(-2, 2), st_.booleans())
def test_quadrilateral_identities(lams, s1, s2, rev):
    st = quad(lams + [s1, s2], orient=(3, 1) if rev else (1, 3))
    lam_dev, mu_dev = verify_double_flip(st, (1, 3))
    assert lam_dev < 1e-10 and mu_dev < 1e-10
    assert verify_sigma_theta(st, (1, 3))
    _, rec = flip_with_record(st, (1, 3))
    assert rewritten_relation_deviation(rec) < 1e-10


def test_sigma_zero_and_corruption():
    st = quad([1.2, 0.8, 1.5, 0.9, 1.1, 0.0, 1.0])
    _, rec = flip_with_record(st, (1, 3))
    assert gmul(rec.sigma, rec.theta).max_abs() == 0.0
    assert gmul(rec.sigma_new, rec.theta_new).max_abs() < 1e-15
    assert sigma_theta_deviation(rec) == 0.0
    st = quad([1.2, 0.8, 1.5, 0.9, 1.1, 0.6, 1.0])
    assert verify_sigma_theta(st, (1, 3))
    assert not verify_sigma_theta(st, (1, 3), corrupt=True)


def test_double_flip_on_larger_polygons():
    rng = np.random.default_rng(2)
    for _ in range(30):
        t = random_triangulation(int(rng.integers(5, 10)), rng)
        st = random_state(t, rng, mix=True, even_souls=True)
        for d in sorted(t.diagonals):
            lam_dev, mu_dev = verify_double_flip(st, d)
            assert lam_dev < 1e-10 and mu_dev < 1e-10
            assert verify_sigma_theta(st, d)


def test_pentagon():
    rng = np.random.default_rng(9)
    for _ in range(50):
        rep = verify_pentagon(random_pentagon_values(rng))
        assert max(rep.values()) < 1e-9, rep


def test_pentagon_classical():
    rng = np.random.default_rng(10)
    vals = random_pentagon_values(rng)
    for s in ("theta1", "theta2", "theta3"):
        vals[s] = GrassmannNumber.zero(3)
    rep = verify_pentagon(vals)
    assert max(rep.values()) < 1e-12


def test_flip_sequence_independence():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(5, 11))
        t = random_triangulation(n, rng)
        st = random_state(t, rng, mix=True)
        a, b = (int(v) for v in rng.choice(np.arange(1, n + 1), 2, replace=False))
        vals = [flip_sequence_lambda(t, None, a, b, st, strategy=s, rng=rng)
                for s in ("first", "last", "random", "random")]
        for v in vals[1:]:
            assert relative_deviation(v, vals[0]) < 1e-9


def test_flip_sequence_arc_and_quadrilateral():
    st = quad([1.2, 0.8, 1.5, 0.9, 1.1, 0.6, 1.0])
    assert flip_sequence_lambda(st.t, None, 1, 2, st) == st.lam_of(1, 2)
    new = flip(st, (1, 3))
    assert relative_deviation(flip_sequence_lambda(st.t, None, 2, 4, st), new.lam_of(2, 4)) == 0.0


def test_spin_override():
    t = fan_triangulation(6)
    rng = np.random.default_rng(3)
    st = random_state(t, rng)
    s = SpinStructure.from_pairs([(3, 1), (1, 4), (5, 1)])
    v1 = flip_sequence_lambda(t, s, 2, 6, st)
    st2 = make_state(t, s, st.lam, st.mu)
    assert relative_deviation(v1, flip_sequence_lambda(t, None, 2, 6, st2)) == 0.0


def test_pentagon_corrupt_orientation_fails():
    rng = np.random.default_rng(12)
    rep = verify_pentagon(random_pentagon_values(rng), corrupt=True)
    assert rep["orientation"] > 0.5 and rep["theta12=-theta2"] > 1e-3


def test_double_flip_corrupt_arrow_fails():
    st = quad([1.2, 0.8, 1.5, 0.9, 1.1, 0.6, 1.0])
    lam_dev, mu_dev = verify_double_flip(st, (1, 3), corrupt=True)
    # the wrong arrow flips the sign of the soul term in lambda and of the mus
    assert lam_dev > 0.1 and mu_dev > 0.5
