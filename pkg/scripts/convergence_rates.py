"""Newton, secant and proportional iterates on a Gaussian weight against a bisection root.

Prints |E_k| = |A_k - A_d| per iteration and the ratios |E_k+1| / |E_k|^q
for q = 2 (Newton), q = 1 (proportional) and the golden ratio (secant).
"""
import numpy as np
from scipy.optimize import brentq

from preisach_remnant import (
    ControllerConfig,
    ExactPreisach,
    GaussianWeight,
    InterfaceLine,
    Newton,
    PlaneBounds,
    Proportional,
    RemnantCurve,
    Secant,
    remnant_derivative,
    remnant_value,
    run_controller,
)


def main():
    bounds = PlaneBounds(-400.0, 400.0)
    w = GaussianWeight(bounds, (150.0, -150.0), 80.0, 1.0)
    curve = RemnantCurve(InterfaceLine.post_reset(bounds, 400.0), w)
    y_d = remnant_value(curve, 200.0)
    a_d = brentq(lambda a: remnant_value(curve, a) - y_d, 0.0, 400.0, xtol=1e-12)
    gain = 1.0 / remnant_derivative(curve, a_d) / 2
    runs = {
        "newton": (Newton(100.0), 2.0),
        "secant": (Secant(50.0, 100.0), (1 + 5**0.5) / 2),
        f"proportional(lambda={gain:.0f})": (Proportional(gain, 100.0), 1.0),
    }
    for name, (method, q) in runs.items():
        trace = run_controller(ExactPreisach(w), ControllerConfig(method, y_d, tolerance=1e-12, max_iterations=40))
        E = np.abs([r.amplitude - a_d for r in trace.rows])
        print(f"{name}: {trace.iterations} iterations, status {trace.status}")
        for k in range(len(E)):
            ratio = E[k] / E[k - 1] ** q if k and E[k - 1] > 0 else float("nan")
            print(f"  k={trace.rows[k].k:>2}  |E|={E[k]:.3e}  ratio(q={q:.3g})={ratio:.3e}")


if __name__ == "__main__":
    main()
