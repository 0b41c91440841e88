import importlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscillorm import _pykernels, kernels
from oscillorm.kernels import KINDS, kernel_code

compiled = pytest.importorskip("oscillorm._ckernels")


def _data(seed, n):
    r = np.random.default_rng(seed)
    x = np.sort(r.random(n)) + 1e-3
    c = r.standard_normal(n) + 1j * r.standard_normal(n)
    return x, c


@given(st.integers(0, 10_000), st.integers(1, 60), st.floats(0.0, 500.0))
def test_nudft_backends_agree(seed, n, scale):
    x, c = _data(seed, n)
    y, _ = _data(seed + 1, n + 3)
    ref = _pykernels.nudft(x, y, scale, c)
    assert np.allclose(compiled.nudft(x, y, scale, c), ref, rtol=0, atol=1e-11 * max(1, np.abs(c).sum()))


def test_nudft_columns_match_single_calls():
    x, c = _data(3, 40)
    y, _ = _data(4, 25)
    C = np.column_stack([c, 2j * c, c.conj()])
    for mod in (_pykernels, compiled):
        out = mod.nudft(x, y, 80.0, C)
        assert out.shape == (25, 3)
        for k in range(3):
            assert np.allclose(out[:, k], mod.nudft(x, y, 80.0, C[:, k]), atol=1e-12)


def test_nudft_direct_definition():
    x, c = _data(5, 7)
    y, _ = _data(6, 5)
    dense = np.exp(1j * 30.0 * np.outer(y, x)) @ c
    assert np.allclose(kernels.nudft(x, y, 30.0, c), dense, atol=1e-13)


@pytest.mark.parametrize("kind", sorted(KINDS))
@given(seed=st.integers(0, 10_000), param=st.floats(0.5, 300.0))
def test_bilinear_backends_agree(kind, seed, param):
    x, a = _data(seed, 30)
    y, b = _data(seed + 7, 41)
    code = KINDS[kind]
    ref = _pykernels.bilinear_sum(a, x, b, y, code, param)
    got = compiled.bilinear_sum(a, x, b, y, code, param)
    assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


def test_bilinear_direct_definition():
    x, a = _data(1, 6)
    y, b = _data(2, 4)
    K = 1 / (1 + 9.0 * (x[:, None] - y[None, :]) ** 2)
    assert kernels.bilinear_sum(a, x, b, y, "lorentz", 3.0) == pytest.approx(a @ K @ b, abs=1e-13)


def test_v_kernel_zero_on_diagonal():
    x = np.array([0.5])
    assert kernels.bilinear_sum(np.ones(1), x, np.ones(1), x, "v") == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_duhamel_backends_agree(n):
    s = np.linspace(0, 1, 301)
    ws = np.full(s.size, 1 / 300)
    rho = np.linspace(0, 1e-3, 6)
    wrho = np.full(6, 1e-4)
    ref = _pykernels.duhamel_sum(s, ws, 2.5, 300.0, 64.0, n, rho, wrho, 0.3)
    got = compiled.duhamel_sum(s, ws, 2.5, 300.0, 64.0, n, rho, wrho, 0.3)
    assert abs(got - ref) <= 1e-12 * abs(ref)


def test_unknown_kernel_and_dimension():
    with pytest.raises(ValueError):
        kernel_code("gauss")
    with pytest.raises(ValueError):
        kernels.duhamel_sum(np.zeros(1), np.ones(1), 2.5, 1.0, 64.0, 4, np.zeros(1), np.ones(1))


def test_pure_python_switch(monkeypatch):
    monkeypatch.setenv("OSCILLORM_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("OSCILLORM_PURE_PYTHON")
        importlib.reload(kernels)
    assert kernels.BACKEND == "cython"
