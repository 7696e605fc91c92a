import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FUZZ
from preisach_remnant import (
    DiscretePreisach,
    IterativeInputSchedule,
    PulseSignal,
    compose_schedule,
    make_asymmetric_pulse,
    make_half_sine_pulse,
    make_triangle_pulse,
    read_samples_csv,
    time_transform,
    validate_r1_r4,
    write_samples_csv,
)
from strategies import BOUNDS, resting_interfaces


class TestPulses:
    def test_zero_amplitude(self):
        p = make_triangle_pulse(0.0, 2.0)
        assert np.all(p(np.linspace(-1, 3, 41)) == 0.0)

    def test_triangle_values(self):
        p = make_triangle_pulse(240.0, 2.0)
        assert p(1.0) == 240.0
        assert p(0.5) == pytest.approx(120.0)
        assert p(2.0) == 0.0 and p(0.0) == 0.0 and p(5.0) == 0.0

    def test_negative_triangle_slope(self):
        p = make_triangle_pulse(-400.0, 2.0)
        assert p(1.0) == -400.0
        assert p(0.25) > p(0.5)
        assert validate_r1_r4(p).passed

    def test_period_must_be_positive(self):
        for make in (make_triangle_pulse, make_half_sine_pulse):
            with pytest.raises(ValueError):
                make(1.0, 0.0)
        with pytest.raises(ValueError):
            make_asymmetric_pulse(1.0, 0.0, 1.0)

    @pytest.mark.parametrize("pulse", [make_triangle_pulse(240.0, 2.0), make_half_sine_pulse(-120.0, 3.0),
                                       make_asymmetric_pulse(75.0, 0.3, 4.0)])
    def test_valid_shapes(self, pulse):
        report = validate_r1_r4(pulse)
        assert report.passed, report.notes
        assert pulse(pulse.rise_end) == pulse.amplitude
        t = np.array([s[0] for s in pulse.samples(11)])
        assert np.all(np.diff(t) > 0) and pulse.rise_end in t

    def test_constant_pulse_fails_r1(self):
        p = PulseSignal(5.0, 1.0, 2.0, lambda t: np.full(np.shape(t), 5.0))
        report = validate_r1_r4(p)
        assert not report.r1 and not report.passed
        assert any(n.startswith("R1") for n in report.notes)

    def test_wrong_direction_fails_r4(self):
        p = PulseSignal(5.0, 1.0, 2.0, lambda t: -5.0 * (1 - np.abs(t - 1.0)))
        report = validate_r1_r4(p)
        assert report.r1 and report.r2 and report.r3 and not report.r4

    def test_plateau_fails_r3(self):
        p = PulseSignal(1.0, 1.0, 3.0, lambda t: np.clip(np.minimum(t, 3.0 - t), 0, 1.0))
        report = validate_r1_r4(p)
        assert report.r2 and not report.r3

    def test_non_monotone_fails_r2(self):
        p = PulseSignal(1.0, 1.0, 2.0, lambda t: np.sin(3 * np.pi * t / 2.0) * (t <= 1.0) + (2.0 - t) * (t > 1.0))
        assert not validate_r1_r4(p).r2

    def test_validate_needs_samples(self):
        with pytest.raises(ValueError):
            validate_r1_r4(make_triangle_pulse(1.0, 1.0), samples=2)


class TestSchedule:
    def test_reset_only(self):
        values = [v for _, v in compose_schedule([], 400.0, 2.0)]
        assert values == [0.0, -400.0, 0.0]

    def test_one_amplitude(self):
        s = compose_schedule([240.0], 400.0, 2.0)
        assert [v for _, v in s] == [0.0, -400.0, 0.0, 240.0, 0.0, -400.0, 0.0]
        assert [t for t, _ in s] == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]

    def test_two_amplitudes(self):
        values = [v for _, v in compose_schedule([100.0, 240.0], 400.0, 2.0)]
        assert values == [0, -400, 0, 100, 0, -400, 0, 240, 0, -400, 0]

    def test_negative_polarity(self):
        values = [v for _, v in IterativeInputSchedule(300.0, 1.0, [-50.0], polarity=-1).samples()]
        assert values == [0.0, 300.0, 0.0, -50.0, 0.0, 300.0, 0.0]

    def test_amplitude_limit(self):
        with pytest.raises(ValueError, match="exceeds"):
            compose_schedule([100.0, 401.0], 400.0, 2.0)

    def test_reset_restores_interface(self, reference_grid):
        op = reference_grid.copy()
        schedule = compose_schedule([240.0, 37.5, 399.0, 3.1], 400.0, 2.0)
        values = [v for _, v in schedule]
        resets = [i for i, v in enumerate(values) if v == -400.0]
        memories = []
        pos = 0
        for r in resets:
            op.apply_input(values[pos:r + 2])  # through the reset and back to zero
            pos = r + 2
            memories.append(op.memory())
        assert all(m == memories[0] for m in memories)

    def test_csv_round_trip(self, tmp_path):
        s = compose_schedule([123.25], 400.0, 2.0)
        write_samples_csv(s, tmp_path / "u.csv")
        assert (tmp_path / "u.csv").read_text().splitlines()[0] == "time,value"
        assert read_samples_csv(tmp_path / "u.csv") == s

    def test_csv_single_column(self, tmp_path):
        (tmp_path / "v.csv").write_text("value\n0\n-400\n0\n")
        assert read_samples_csv(tmp_path / "v.csv") == [(0.0, 0.0), (1.0, -400.0), (2.0, 0.0)]
        (tmp_path / "e.csv").write_text("")
        with pytest.raises(ValueError):
            read_samples_csv(tmp_path / "e.csv")


class TestTimeTransform:
    samples = compose_schedule([240.0, 100.0], 400.0, 2.0)

    def test_identity(self):
        assert time_transform(self.samples, lambda t: t) == self.samples

    def test_square_warp(self):
        t_end = self.samples[-1][0]
        warped = time_transform(self.samples, lambda t: t * t / t_end)
        assert [v for _, v in warped] == [v for _, v in self.samples]
        for (t_new, _), (t_old, _) in zip(warped, self.samples):
            assert t_new * t_new / t_end == pytest.approx(t_old, abs=1e-9)

    def test_piecewise_doubling(self, reference_grid):
        t_end = self.samples[-1][0]

        def f(t):
            return 2 * t if t < t_end / 3 else t_end / 3 * 2 + (t - t_end / 3) * 0.5

        warped = time_transform(self.samples, f, points=57)
        a, b = reference_grid.copy(), reference_grid.copy()
        ya = a.apply_input([v for _, v in self.samples])[-1]
        yb = b.apply_input([v for _, v in warped])[-1]
        assert ya == yb

    def test_rejects_non_monotone(self):
        with pytest.raises(ValueError, match="monotone"):
            time_transform(self.samples, lambda t: 10.0 - t if t > 5 else t)

    def test_rejects_range_change(self):
        with pytest.raises(ValueError):
            time_transform(self.samples, lambda t: 0.5 * t)


@FUZZ
@given(resting_interfaces(lattice=8.0), st.floats(-400.0, 400.0), st.floats(0.1, 10.0), st.floats(0.1, 10.0),
       st.integers(3, 40))
def test_shape_invariance(line, amplitude, rise, fall, points):
    """Triangle, half-sine and asymmetric pulses of one amplitude leave identical relay states."""
    base = DiscretePreisach.uniform(50, BOUNDS)
    base.set_interface(line)
    finals = []
    for pulse in (make_triangle_pulse(amplitude, 2.0), make_half_sine_pulse(amplitude, rise + fall),
                  make_asymmetric_pulse(amplitude, rise, fall)):
        op = base.copy()
        out = op.apply_input([v for _, v in pulse.samples(points)])
        finals.append((out[-1], op.snapshot()))
    for y, states in finals[1:]:
        assert y == finals[0][0]
        assert np.array_equal(states, finals[0][1])
