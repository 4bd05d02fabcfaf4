import math

import numpy as np
import pytest

from bcontinuum import _kernels as K
from bcontinuum import parse
from bcontinuum.expr import to_source
from bcontinuum.analysis.sumthm import sum_theorem_diagonal, tail_sum

needs_numba = pytest.mark.skipif(K.numba is None, reason="numba not installed")

TERMS = ["sin(k*x)/k", "x^k*(1-x)", "1/k - 1/(k+1)", "cos(k*x)/k^2", "exp(-k*x)"]


@pytest.mark.parametrize("text", TERMS)
def test_numpy_matches_python_loop(text):
    kern = K.TermKernel(parse(text, variables={"k", "x"}), use_numba=False)
    x = 0.3
    s, _ = kern.advance(x, 0.0, 1, 500)
    ref = math.fsum(float(eval(to_source(parse(text, variables={"k", "x"}), "math"),
                               {"math": math, "k": float(k), "x": x})) for k in range(1, 501))
    assert s == pytest.approx(ref, rel=1e-12, abs=1e-14)


@needs_numba
@pytest.mark.parametrize("text", TERMS)
def test_backends_agree(text):
    term = parse(text, variables={"k", "x"})
    a = K.TermKernel(term, use_numba=True)
    b = K.TermKernel(term, use_numba=False)
    for x in (0.01, 0.5, 0.9):
        sa, ma = a.advance(x, 0.0, 1, 40_000, weighted=True)
        sb, mb = b.advance(x, 0.0, 1, 40_000, weighted=True)
        assert sa == pytest.approx(sb, rel=1e-11, abs=1e-12)
        assert ma == pytest.approx(mb, rel=1e-11, abs=1e-12)
        ta, tb = tail_sum(a, x, 64), tail_sum(b, x, 64)
        assert ta.value == pytest.approx(tb.value, abs=1e-11)


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv(K.ENV_FLAG, "0")
    assert not K.numba_enabled()
    assert K.backend_name() == "numpy"
    assert K.TermKernel(parse("x/k", variables={"k", "x"})).backend == "numpy"
    r = sum_theorem_diagonal("1/k - 1/(k+1)", "1/n")
    assert r.backend == "numpy" and r.null is True


@needs_numba
def test_env_flag_default_uses_numba(monkeypatch):
    monkeypatch.delenv(K.ENV_FLAG, raising=False)
    assert K.backend_name() == "numba"


def test_partial_sums_shape():
    kern = K.TermKernel(parse("1/k^2", variables={"k", "x"}), use_numba=False)
    sums = kern.partial_sums(0.0, 1, 100)
    assert sums.shape == (100,)
    assert sums[-1] == pytest.approx(sum(1 / k**2 for k in range(1, 101)))
    assert np.all(np.diff(sums) > 0)


def test_weighted_mean_damps_oscillation():
    kern = K.TermKernel(parse("(-1)^k/k", variables={"k", "x"}), use_numba=False)
    t = tail_sum(kern, 0.0, 100)
    exact = -math.log(2) - sum((-1) ** k / k for k in range(1, 101))
    assert t.converged and t.value == pytest.approx(exact, abs=1e-9)


def test_rejects_foreign_variables():
    with pytest.raises(ValueError):
        K.TermKernel(parse("y*k", variables={"k", "y"}))
