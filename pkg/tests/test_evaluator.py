import random

import pytest

from cart_router.cost_policies import CostPolicy, PhysicalParams, VehicleState, work_cost
from cart_router.evaluator import empirical_cdf, evaluate_route, instantaneous_power
from cart_router.geo_graph import GeoEdge, Surface
from cart_router.routing import PathResult, Tour, nearest_neighbor_route

from conftest import make_graph
from oracles import power_ref

from test_routing import line_graph


def edge(length=100.0, grade=0.0, surface=Surface.UNKNOWN):
    return GeoEdge(src="u", dst="v", length=length, grade=grade,
                   surface=surface, maxspeed=30.0)


class TestInstantaneousPower:
    def test_flat_worked_example(self, uniform_params):
        p = instantaneous_power(edge(), uniform_params, VehicleState(110.0))
        assert p == pytest.approx(11.387, abs=0.001)
        assert p == pytest.approx(power_ref(110, 9.80665, 0.01, 0.0, 1.2, 1, 1, 1),
                                  rel=1e-12)

    def test_stationary_is_zero(self, uniform_params):
        still = PhysicalParams(walk_speed=0.0,
                               rolling_resistance={s: 0.01 for s in Surface})
        assert instantaneous_power(edge(), still, VehicleState(110.0)) == 0.0

    def test_downhill_worked_example(self, uniform_params):
        p = instantaneous_power(edge(grade=-0.05), uniform_params, VehicleState(110.0))
        assert p == pytest.approx(power_ref(110, 9.80665, 0.01, -0.05, 1.2, 1, 1, 1),
                                  rel=1e-12)
        assert p == pytest.approx(-42.54, abs=0.01)

    def test_random_tuples_match_reference(self):
        rng = random.Random(55)
        for _ in range(500):
            m = rng.uniform(50, 400)
            theta = rng.uniform(-0.3, 0.3)
            f_r = rng.uniform(0.004, 0.05)
            v = rng.uniform(0.3, 2.0)
            p = PhysicalParams(walk_speed=v,
                               rolling_resistance={s: f_r for s in Surface})
            got = instantaneous_power(edge(grade=theta), p, VehicleState(m))
            want = power_ref(m, 9.80665, f_r, theta, 1.2, 1.0, 1.0, v)
            assert got == pytest.approx(want, rel=1e-9)

    def test_work_power_consistency(self, params):
        # P * (d / v) == W: same bracket in both formulas
        rng = random.Random(56)
        for _ in range(300):
            e = edge(length=rng.uniform(1, 500), grade=rng.uniform(-0.3, 0.3),
                     surface=rng.choice(list(Surface)))
            st = VehicleState(rng.uniform(60, 400))
            w = work_cost(e, params, st)
            p = instantaneous_power(e, params, st)
            assert p * (e.length / params.walk_speed) == pytest.approx(w, rel=1e-9)


class TestEmpiricalCdf:
    def test_single_sample(self):
        assert empirical_cdf([10.0], [3.0]) == [(10.0, 1.0)]

    def test_two_point_uniform(self):
        cdf = empirical_cdf([10.0, 20.0], [1.0, 1.0])
        assert cdf == [(10.0, 0.5), (20.0, 1.0)]

    def test_weighted_counts(self):
        cdf = empirical_cdf([10.0, 20.0, 30.0], [1.0, 1.0, 2.0])
        assert cdf == [(10.0, 0.25), (20.0, 0.5), (30.0, 1.0)]

    def test_empty(self):
        assert empirical_cdf([], []) == []

    def test_unsorted_input_and_duplicates(self):
        cdf = empirical_cdf([30.0, 10.0, 10.0], [1.0, 1.0, 2.0])
        assert cdf == [(10.0, 0.75), (30.0, 1.0)]

    def test_nondecreasing_reaching_one(self):
        rng = random.Random(77)
        samples = [rng.uniform(-50, 300) for _ in range(200)]
        weights = [rng.uniform(0.1, 30) for _ in range(200)]
        cdf = empirical_cdf(samples, weights)
        assert cdf[-1][1] == 1.0
        assert all(y2 >= y1 for (_, y1), (_, y2) in zip(cdf, cdf[1:]))
        assert all(x2 > x1 for (x1, _), (x2, _) in zip(cdf, cdf[1:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            empirical_cdf([1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            empirical_cdf([1.0], [0.0])


class TestEvaluateRoute:
    def test_empty_route_all_zero(self, params):
        g = line_graph()
        tour = Tour(start="0", visit_order=[], depot="0",
                    legs=[PathResult(nodes=["0"], total_cost=0.0)],
                    mass_after_each_stop=[])
        m = evaluate_route(g, tour, params, 110.0)
        assert m.total_distance_m == 0.0
        assert m.total_time_s == 0.0
        assert m.mean_power_w == 0.0
        assert m.cdf == []

    def test_single_flat_edge(self, uniform_params):
        g = make_graph({"a": (0, 0), "b": (0, 0.0009)}, [("a", "b", 100.0)],
                       elevations={"a": 0.0, "b": 0.0})
        tour = Tour(start="a", visit_order=[], depot="b",
                    legs=[PathResult(nodes=["a", "b"], total_cost=100.0)],
                    mass_after_each_stop=[])
        m = evaluate_route(g, tour, uniform_params, 110.0)
        assert m.total_distance_m == 100.0
        assert m.total_time_s == 100.0
        assert m.mean_power_w == pytest.approx(11.387, abs=0.001)
        assert m.cdf == [(m.power_series[0][1], 1.0)]

    def test_mass_rises_at_stop(self, uniform_params):
        # two legs a->b (stop, +50 kg) then b->c: second edge runs at 160 kg
        g = make_graph({"a": (0, 0), "b": (0, 0.0009), "c": (0, 0.0018)},
                       [("a", "b", 100.0), ("b", "c", 100.0)],
                       elevations={"a": 0.0, "b": 0.0, "c": 0.0})
        tour = Tour(start="a", visit_order=["b"], depot="c",
                    legs=[PathResult(nodes=["a", "b"], total_cost=0.0),
                          PathResult(nodes=["b", "c"], total_cost=0.0)],
                    mass_after_each_stop=[160.0])
        m = evaluate_route(g, tour, uniform_params, 110.0)
        p1 = power_ref(110, 9.80665, 0.01, 0.0, 1.2, 1, 1, 1)
        p2 = power_ref(160, 9.80665, 0.01, 0.0, 1.2, 1, 1, 1)
        assert m.power_series[0][1] == pytest.approx(p1, rel=1e-12)
        assert m.power_series[1][1] == pytest.approx(p2, rel=1e-12)
        assert m.mean_power_w == pytest.approx((p1 + p2) / 2, rel=1e-12)
        assert m.mass_after_each_stop == [160.0]

    def test_time_identity(self, params):
        g = line_graph()
        tour = nearest_neighbor_route(g, "0", "4", [("2", 30.0)],
                                      CostPolicy.DISTANCE, params, 110.0)
        m = evaluate_route(g, tour, params, 110.0)
        assert m.total_time_s * params.walk_speed == pytest.approx(
            m.total_distance_m, rel=1e-12)

    def test_clamp_negative_power(self, uniform_params):
        g = make_graph({"a": (0, 0), "b": (0, 0.0009)}, [("a", "b", 100.0)],
                       elevations={"a": 10.0, "b": 0.0})  # downhill
        tour = Tour(start="a", visit_order=[], depot="b",
                    legs=[PathResult(nodes=["a", "b"], total_cost=0.0)],
                    mass_after_each_stop=[])
        unclamped = evaluate_route(g, tour, uniform_params, 110.0)
        clamped = evaluate_route(g, tour, uniform_params, 110.0,
                                 clamp_negative_power=True)
        assert unclamped.mean_power_w < 0
        assert clamped.mean_power_w == 0.0

    def test_discontinuity_errors(self, params):
        g = line_graph()
        tour = Tour(start="0", visit_order=["2"], depot="4",
                    legs=[PathResult(nodes=["0", "1"], total_cost=0.0),
                          PathResult(nodes=["2", "3", "4"], total_cost=0.0)],
                    mass_after_each_stop=[120.0])
        with pytest.raises(ValueError, match="discontinuity"):
            evaluate_route(g, tour, params, 110.0)

    def test_zero_walk_speed_rejected(self, params):
        g = line_graph()
        still = PhysicalParams(walk_speed=0.0)
        tour = Tour(start="0", visit_order=[], depot="0",
                    legs=[PathResult(nodes=["0"], total_cost=0.0)],
                    mass_after_each_stop=[])
        with pytest.raises(ValueError):
            evaluate_route(g, tour, still, 110.0)
