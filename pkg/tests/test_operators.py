import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import FUZZ
from oracles import relay_loop, uniform_remnant
from preisach_remnant import (
    DiscretePreisach,
    ExactPreisach,
    GridWeight,
    InputRangeError,
    InterfaceLine,
    RepresentabilityError,
    UniformWeight,
    interface_from_states,
    output_from_interface,
    time_transform,
    wipe_update,
)
from strategies import BOUNDS, histories


def grid_weight(seed, cells):
    rng = np.random.default_rng(seed)
    return GridWeight(BOUNDS, rng.uniform(0.0, 1.0, (cells, cells)) * 1e-5, BOUNDS.width / cells)


class TestReferenceGrid:
    def test_relay_count(self, grid1000):
        assert grid1000.relay_count == 500500
        assert grid1000.spacing == pytest.approx(0.8)
        assert grid1000.total_mass == pytest.approx(1.0, rel=1e-12)

    def test_saturation(self, grid1000):
        assert grid1000.output() == pytest.approx(-1.0)
        assert grid1000.apply_input([400.0])[-1] == pytest.approx(1.0)

    def test_input_at_lower_edge_changes_nothing(self, grid1000):
        assert grid1000.apply_input([-400.0])[-1] == pytest.approx(-1.0)

    def test_input_zero_from_negative_saturation(self, grid1000):
        # u = 0 exceeds alpha for the 500 * 501 / 2 relays with alpha < 0
        assert grid1000.apply_input([0.0])[-1] == pytest.approx(-1.0 + 2 * 125250 / 500500, rel=1e-12)

    def test_pulse_240_after_reset(self, grid1000):
        out = grid1000.apply_input([0.0, -400.0, 0.0, 240.0, 0.0])
        assert out[2] == pytest.approx(-0.5, abs=0.005)
        assert out[-1] == pytest.approx(0.10, abs=0.005)

    def test_extracted_interface_after_240_pulse(self, grid1000, post_reset):
        grid1000.apply_input([-400.0, 240.0, 0.0])
        got = np.array(grid1000.memory().vertices)
        want = np.array(wipe_update(post_reset, 240.0).vertices)
        assert got.shape == want.shape
        assert np.max(np.abs(got - want)) <= grid1000.spacing

    def test_range_error_reports_index(self, grid1000):
        before = grid1000.snapshot()
        with pytest.raises(InputRangeError) as exc:
            grid1000.apply_input([0.0, 100.0, 400.5, 0.0])
        assert exc.value.index == 2
        assert grid1000.matches(before)  # rejected before any relay moved

    def test_empty_input(self, grid1000):
        with pytest.raises(ValueError):
            grid1000.apply_input([])


class TestOutputFromInterface:
    def test_named_states(self, bounds, uniform, post_reset):
        assert output_from_interface(InterfaceLine.negative_saturation(bounds), uniform) == pytest.approx(-1.0)
        assert output_from_interface(InterfaceLine.positive_saturation(bounds), uniform) == pytest.approx(1.0)
        assert output_from_interface(post_reset, uniform) == pytest.approx(-0.5)

    def test_post_reset_matches_grid(self, grid1000, post_reset, uniform):
        grid1000.set_interface(post_reset)
        assert abs(grid1000.output() - output_from_interface(post_reset, uniform)) <= 0.005

    def test_plane_mismatch(self, post_reset):
        from preisach_remnant import PlaneBounds

        with pytest.raises(ValueError):
            output_from_interface(post_reset, UniformWeight(PlaneBounds(-1, 1), 1.0))


class TestInterfaceExtraction:
    def test_all_negative(self):
        op = DiscretePreisach.uniform(10, BOUNDS)
        line = interface_from_states(op)
        assert line == InterfaceLine.negative_saturation(BOUNDS)

    def test_all_positive(self):
        op = DiscretePreisach.uniform(10, BOUNDS)
        op.fill(1)
        assert interface_from_states(op) == InterfaceLine.positive_saturation(BOUNDS)

    @pytest.mark.parametrize("cell", [(5, 0), (9, 4), (3, 1)])
    def test_corrupted_state(self, cell):
        op = DiscretePreisach.uniform(10, BOUNDS)
        op.apply_input([-400.0, 100.0, -100.0, 0.0])
        op.states[cell] *= -1
        with pytest.raises(RepresentabilityError):
            interface_from_states(op)

    @FUZZ
    @given(histories(max_size=12))
    def test_staircase_closure(self, hist):
        op = DiscretePreisach.uniform(40, BOUNDS)
        op.apply_input(hist)
        line = interface_from_states(op)
        # the extracted staircase reproduces every relay state exactly
        a, b = np.meshgrid(op.centers, op.centers, indexing="ij")
        lower = np.tril(np.ones_like(a, dtype=bool))
        assert np.array_equal(line.relay_states(a, b)[lower], op.states[lower])


class TestOracles:
    @pytest.mark.parametrize("seed", range(6))
    def test_relay_loop_oracle(self, seed):
        """Vectorised column/row updates agree with relay-by-relay switching."""
        rng = np.random.default_rng(seed)
        n = 9
        weights = np.tril(rng.uniform(0, 1, (n, n)))
        op = DiscretePreisach(n, BOUNDS, weights)
        samples = rng.uniform(-400, 400, 12).tolist() + [op.centers[3], op.centers[6]]
        got = op.apply_input(samples)
        states, want = relay_loop(n, BOUNDS, weights, -np.ones((n, n)), samples)
        lower = np.tril(np.ones((n, n), dtype=bool))
        assert np.array_equal(op.states[lower], states[lower])
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)

    @FUZZ
    @given(st.integers(0, 2**32 - 1), histories(max_size=10), st.integers(4, 30))
    def test_oracle_equivalence(self, seed, hist, cells):
        """Exact output of the extracted interface vs the grid's own output."""
        w = grid_weight(seed, cells)
        op = DiscretePreisach.from_weight(w, 60)
        op.apply_input(hist)
        exact = output_from_interface(interface_from_states(op), w)
        assert abs(exact - op.output()) <= 2 * op.max_column_mass

    @FUZZ
    @given(histories(max_size=10))
    def test_exact_operator_matches_fine_grid(self, hist):
        """Continuum operator and a grid on the same random input, compared on edge-aligned inputs."""
        lattice = np.round(np.asarray(hist) / 8.0) * 8.0  # multiples of the cell width
        w = UniformWeight.with_mass(BOUNDS)
        exact = ExactPreisach(w).apply_input(lattice)
        op = DiscretePreisach.from_weight(w, 100)
        grid = op.apply_input(lattice)
        assert np.max(np.abs(exact - grid)) <= 2 * op.max_column_mass


class TestInvariants:
    @FUZZ
    @given(histories(max_size=12), st.integers(0, 2**32 - 1))
    def test_output_bounds(self, hist, seed):
        op = DiscretePreisach.from_weight(grid_weight(seed, 5), 30)
        out = op.apply_input(hist)
        assert np.all(np.abs(out) <= op.total_mass * (1 + 1e-12))

    @FUZZ
    @given(histories(min_size=2, max_size=10), st.lists(st.floats(0.05, 5.0), min_size=3, max_size=6),
           st.integers(0, 50))
    def test_rate_independence(self, hist, slopes, points):
        """Warping time with a random increasing piecewise-linear map leaves the output bit-identical."""
        samples = [(float(k), v) for k, v in enumerate(hist)]
        t_end = float(len(hist) - 1)
        knots_t = np.linspace(0.0, t_end, len(slopes) + 1)
        knots_f = np.concatenate([[0.0], np.cumsum(slopes)])
        knots_f *= t_end / knots_f[-1]

        def f(t):
            return float(np.interp(t, knots_t, knots_f))

        warped = time_transform(samples, f, points=points)
        assume(all(b[0] >= a[0] for a, b in zip(warped, warped[1:])))
        a = DiscretePreisach.uniform(50, BOUNDS)
        b = a.copy()
        out_a = a.apply_input([v for _, v in samples])
        out_b = b.apply_input([v for _, v in warped])
        assert out_a[-1] == out_b[-1]
        assert a.matches(b.snapshot())

    def test_copy_is_independent(self, grid1000):
        twin = grid1000.copy()
        twin.apply_input([300.0])
        assert grid1000.output() == pytest.approx(-1.0)
        assert twin.weights is grid1000.weights

    def test_uniform_remnant_from_grid(self, grid1000):
        grid1000.apply_input([-400.0, 0.0])
        reference = grid1000.snapshot()
        for amp in (0.0, 100.0, 333.3):
            grid1000.states[:] = reference
            y = grid1000.apply_input([amp, 0.0])[-1]
            assert abs(y - uniform_remnant(amp)) <= 0.005
