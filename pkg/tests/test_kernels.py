"""The compiled and pure-Python product kernels must agree bit for bit."""

import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import series
from vatwist import kernels
from vatwist import _kernels_py
from vatwist.series import _series_mul

try:
    from vatwist import _kernels as compiled
except ImportError:  # no compiler at install time
    compiled = None


needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernel not built")


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    if compiled is not None and not os.environ.get("VATWIST_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"


def test_env_forces_python():
    code = "import vatwist; print(vatwist.BACKEND)"
    env = dict(os.environ, VATWIST_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def _with_kernel(fn, a, b):
    saved = kernels.graded_convolve
    kernels.graded_convolve = fn
    try:
        return _series_mul(a, b)
    finally:
        kernels.graded_convolve = saved


@needs_compiled
@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(series(order=n), series(order=n))))
def test_backends_agree(t):
    a, b = t
    assert _with_kernel(compiled.graded_convolve, a, b) == _with_kernel(_kernels_py.graded_convolve, a, b)


@needs_compiled
def test_backends_agree_cyclotomic():
    from vatwist import NilScalar, PuiseuxSeries, zeta

    a = PuiseuxSeries({0: NilScalar(2, [zeta(5), 1]), 3: NilScalar(2, [2, zeta(5, 3)])}, order=2, ramification=3, trunc=9)
    b = PuiseuxSeries({-1: NilScalar(2, [1, zeta(3)]), 1: NilScalar(2, [zeta(15, 4), 0])}, order=2, ramification=3, trunc=8)
    assert _with_kernel(compiled.graded_convolve, a, b) == _with_kernel(_kernels_py.graded_convolve, a, b)


def test_kernel_edge_caps():
    assert _kernels_py.graded_convolve([], 0, [], 0, 1, 1, (), [0]) == []
    if compiled is not None:
        assert list(compiled.graded_convolve([], 0, [], 0, 1, 1, (), [0])) == []
