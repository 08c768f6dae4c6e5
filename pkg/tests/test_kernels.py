import json
import os
import subprocess
import sys

import numpy as np
import pytest

from lightlike import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")


def test_monomial_table_order():
    assert _kernels.MONOMIALS == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
                                  (3, 0), (2, 1), (1, 2), (0, 3)]


def test_product_table_matches_polynomial_multiplication():
    rng = np.random.default_rng(5)
    a, b = rng.standard_normal((1, 10)), rng.standard_normal((1, 10))
    # dense 4x4 coefficient grids, multiplied by 2-D convolution
    A, B = np.zeros((4, 4)), np.zeros((4, 4))
    for k, (i, j) in enumerate(_kernels.MONOMIALS):
        A[i, j], B[i, j] = a[0, k], b[0, k]
    full = np.zeros((7, 7))
    for i in range(4):
        for j in range(4):
            full[i:i + 4, j:j + 4] += A[i, j] * B
    expected = [full[i, j] for i, j in _kernels.MONOMIALS]
    np.testing.assert_allclose(_kernels.mul_numpy(a, b, 3)[0], expected, rtol=0, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("order", [0, 1, 2, 3])
def test_backends_agree_on_mul(order):
    rng = np.random.default_rng(order)
    a, b = rng.standard_normal((257, 10)), rng.standard_normal((257, 10))
    np.testing.assert_allclose(_kernels.mul_numba(a, b, order), _kernels.mul_numpy(a, b, order),
                               rtol=1e-14, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("order", [1, 2, 3])
def test_backends_agree_on_horner(order):
    rng = np.random.default_rng(10 + order)
    h = rng.standard_normal((64, 10))
    h[:, 0] = 0.0
    fk = rng.standard_normal((64, 4))
    np.testing.assert_allclose(_kernels.horner_numba(h, fk, order), _kernels.horner_numpy(h, fk, order),
                               rtol=1e-13, atol=1e-13)


def test_truncation_zeroes_high_degrees():
    a = np.ones((1, 10))
    out = _kernels.mul_numpy(a, a, 1)
    assert np.all(out[0, 3:] == 0.0)


_PROBE = """
import json
from lightlike import _kernels
from lightlike.catalog import random_null_ruled
from lightlike.classify import classify_surface
c = classify_surface(random_null_ruled(3), (4, 4))
print(json.dumps({"backend": _kernels.BACKEND,
                  "vals": [c.max_B, c.max_C_xi, c.max_planarity_nondegenerate, c.max_umbilical_residual]}))
"""


def _probe(flag):
    env = dict(os.environ, LIGHTLIKE_NO_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", _PROBE], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


@needs_numba
def test_environment_flag_selects_backend_and_results_match():
    fast, slow = _probe("0"), _probe("1")
    assert fast["backend"] == "numba"
    assert slow["backend"] == "numpy"
    np.testing.assert_allclose(fast["vals"], slow["vals"], rtol=1e-10, atol=1e-14)
