import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from batcoupler import bench
from batcoupler.errors import InvalidInputError

vectors = st.lists(st.floats(-10, 10), min_size=2, max_size=6).map(np.array)


@pytest.mark.parametrize(
    "func, x, expected",
    [
        (bench.sphere, [0.0, 0.0, 0.0], 0.0),
        (bench.sphere, [1.0, 1.0, 1.0], 3.0),
        (bench.sphere, [-2.0], 4.0),
        (bench.rosenbrock, [1.0, 1.0, 1.0], 0.0),
        (bench.rosenbrock, [0.0, 0.0], 1.0),
        (bench.rosenbrock, [1.0, 2.0], 100.0),
        (bench.rastrigin, [0.0, 0.0], 0.0),
        (bench.rastrigin, [1.0], 1.0),
        (bench.rastrigin, [0.5], 20.25),
    ],
)
def test_values(func, x, expected):
    assert func(np.array(x)) == pytest.approx(expected, abs=1e-12)


def test_rosenbrock_needs_two_dims():
    with pytest.raises(InvalidInputError):
        bench.rosenbrock(np.array([1.0]))


@pytest.mark.parametrize("name", bench.NAMES)
@pytest.mark.parametrize("dims", [2, 5])
def test_known_minimum(name, dims):
    f = bench.get(name, dims)
    assert abs(f.evaluate(f.known_argmin) - f.known_minimum) <= 1e-12
    assert f.default_bounds.contains(f.known_argmin)


@pytest.mark.parametrize("name", bench.NAMES)
@given(x=vectors)
def test_non_negative(name, x):
    f = bench.get(name, x.size)
    value = f.evaluate(x)
    assert value >= -1e-12
    if not np.allclose(x, f.known_argmin):
        assert value > 0


def test_unknown_name_lists_choices():
    with pytest.raises(InvalidInputError, match="sphere, rosenbrock, rastrigin"):
        bench.get("nosuch", 2)


def test_dims_check():
    with pytest.raises(InvalidInputError):
        bench.get("rosenbrock", 1)
