"""Hypothesis strategies shared across the property suites."""
from hypothesis import strategies as st

from preisach_remnant import InterfaceLine, PlaneBounds

BOUNDS = PlaneBounds(-400.0, 400.0)


def histories(lattice: float | None = None, min_size=1, max_size=8):
    """Input histories inside BOUNDS; with ``lattice`` every value is a multiple of it."""
    if lattice is None:
        value = st.floats(BOUNDS.u_min, BOUNDS.u_max, allow_nan=False)
    else:
        k = int(BOUNDS.u_max / lattice)
        value = st.integers(-k, k).map(lambda i: i * lattice)
    return st.lists(value, min_size=min_size, max_size=max_size)


@st.composite
def resting_interfaces(draw, lattice: float | None = None, max_size=8):
    """Memory left by a random history that returns to 0, starting from negative saturation."""
    hist = draw(histories(lattice, max_size=max_size))
    return InterfaceLine.negative_saturation(BOUNDS).apply_input(hist + [0.0])


amplitudes = st.floats(BOUNDS.u_min, BOUNDS.u_max, allow_nan=False)
