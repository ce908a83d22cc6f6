import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jamsched.errors import DeploymentError, ParameterError
from jamsched.geometry import Point, Rect, discretize_boundary, distance, distance_to_storage
from jamsched.world import (
    deploy_jammers,
    desk_world,
    make_world,
    large_world,
    placement_ok,
    sample_positions,
)


def walk_count(rect: Rect, step: float) -> int:
    # independent count: ceil(len/step) points per edge, corners shared
    return sum(math.ceil(e / step - 1e-12) for e in (rect.width, rect.height) * 2)


@pytest.mark.parametrize(
    "rect, step, expected",
    [
        (Rect(0, 0, 100, 100), 2, 200),
        (Rect(37.5, 37.5, 62.5, 62.5), 2, 52),
        (Rect(0, 0, 10, 10), 10, 4),
        (Rect(0, 0, 40, 40), 2, 80),
        (Rect(15, 15, 25, 25), 2, 20),
    ],
)
def test_boundary_counts(rect, step, expected):
    b = discretize_boundary(rect, step)
    assert len(b) == expected == walk_count(rect, step)
    assert len(set(b.points)) == len(b)
    for corner in rect.corners():
        assert corner in b.points


def on_boundary(rect, p, tol=1e-9):
    on_x = abs(p.x - rect.min_x) < tol or abs(p.x - rect.max_x) < tol
    on_y = abs(p.y - rect.min_y) < tol or abs(p.y - rect.max_y) < tol
    inside = rect.min_x - tol <= p.x <= rect.max_x + tol and rect.min_y - tol <= p.y <= rect.max_y + tol
    return inside and (on_x or on_y)


def test_storage_points_lie_on_boundary_and_cover_it():
    rect = Rect(37.5, 37.5, 62.5, 62.5)
    pts = discretize_boundary(rect, 2).as_array()
    assert all(on_boundary(rect, Point(*p)) for p in pts)
    # a fine independent walk: every boundary point is near an emitted one
    fine = discretize_boundary(rect, 0.5).as_array()
    gaps = np.min(np.linalg.norm(fine[:, None] - pts[None], axis=2), axis=1)
    assert gaps.max() <= 1.0 + 1e-9


@given(
    w=st.floats(0.5, 60), h=st.floats(0.5, 60), step=st.floats(0.3, 7),
)
@settings(max_examples=60, deadline=None)
def test_discretization_density(w, h, step):
    rect = Rect(1.0, 2.0, 1.0 + w, 2.0 + h)
    b = discretize_boundary(rect, step)
    assert len(b) == walk_count(rect, step)
    pts = b.as_array()
    # consecutive points (cyclically) are at most one step apart
    nxt = np.roll(pts, -1, axis=0)
    assert np.all(np.linalg.norm(nxt - pts, axis=1) <= step + 1e-9)


def test_bad_step():
    with pytest.raises(ParameterError):
        discretize_boundary(Rect(0, 0, 1, 1), 0)
    with pytest.raises(ParameterError):
        discretize_boundary(Rect(0, 0, 1, 1), -2)


def test_degenerate_rect():
    with pytest.raises(ParameterError):
        Rect(0, 0, 0, 1)


def test_distance_examples():
    assert distance(Point(0, 0), Point(3, 4)) == 5
    assert distance(Point(1, 1), Point(1, 1)) == 0
    assert distance(Point(0, 0), Point(1, 1)) == pytest.approx(math.sqrt(2))


def test_distance_to_storage_examples():
    s = Rect(37.5, 37.5, 62.5, 62.5)
    assert distance_to_storage(Point(0, 0), s) == pytest.approx(37.5 * math.sqrt(2))
    assert distance_to_storage(Point(50, 0), s) == pytest.approx(37.5)
    assert distance_to_storage(Point(37.5, 50), s) == 0


@given(x=st.floats(0, 100), y=st.floats(0, 100))
@settings(max_examples=80, deadline=None)
def test_analytic_distance_bounds_discrete(x, y):
    s = Rect(37.5, 37.5, 62.5, 62.5)
    p = Point(x, y)
    if s.contains(p) and not on_boundary(s, p):
        return
    d = distance_to_storage(p, s)
    pts = discretize_boundary(s, 2).as_array()
    assert d <= np.min(np.hypot(pts[:, 0] - x, pts[:, 1] - y)) + 1e-9


def test_deploy_is_deterministic():
    a = deploy_jammers(large_world(), 30, 42)
    b = deploy_jammers(large_world(), 30, 42)
    assert [j.position for j in a.jammers] == [j.position for j in b.jammers]
    c = deploy_jammers(large_world(), 30, 43)
    assert [j.position for j in a.jammers] != [j.position for j in c.jammers]


@pytest.mark.parametrize("seed", range(100))
def test_deploy_respects_world_invariants(seed):
    w = deploy_jammers(desk_world(), 10, seed)
    for j in w.jammers:
        assert placement_ok(j.position, w.storage, w.fence, w.epsilon)
        assert not w.storage.contains(j.position)
        assert w.fence.distance_to_boundary(j.position) >= w.epsilon


def test_fill_ratio():
    # accepted fraction of uniform fence samples should match the usable area share
    world = large_world()
    rng = np.random.default_rng(0)
    xy = rng.uniform(0, 100, size=(1_000_000, 2))
    eps = world.epsilon
    s = world.storage
    in_fence = np.all((xy >= eps) & (xy <= 100 - eps), axis=1)
    dx = np.maximum.reduce([s.min_x - xy[:, 0], np.zeros(len(xy)), xy[:, 0] - s.max_x])
    dy = np.maximum.reduce([s.min_y - xy[:, 1], np.zeros(len(xy)), xy[:, 1] - s.max_y])
    clear = np.hypot(dx, dy) >= eps
    monte_carlo = np.mean(in_fence & clear)
    assert monte_carlo == pytest.approx((100 * 100 - 25 * 25) / (100 * 100), rel=0.05)
    # the sampler's accepted-vs-attempted ratio agrees
    pts, attempts = sample_positions(world, 1000, np.random.default_rng(5))
    assert len(pts) == 1000
    assert len(pts) / attempts == pytest.approx(monte_carlo, rel=0.05)


def test_degenerate_geometry_fails_to_deploy():
    # fence ring narrower than twice the clearance: nothing can be placed
    world = make_world(Rect(0, 0, 10, 10), Rect(0.5, 0.5, 9.5, 9.5), 1.0, epsilon=0.5)
    with pytest.raises(DeploymentError):
        deploy_jammers(world, 1, 0)


def test_storage_must_be_inside():
    with pytest.raises(ParameterError):
        make_world(Rect(0, 0, 10, 10), Rect(5, 5, 12, 8), 1.0)
