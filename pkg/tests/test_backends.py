import os
import subprocess
import sys

import numpy as np
import pytest

from casimir_lab import _kernels, lifshitz
from casimir_lab.errors import ConfigurationError
from casimir_lab.quantities import ALUMINIUM, Dielectric, EvaluationPoint

needs_numba = pytest.mark.skipif("numba" not in _kernels.available_backends(), reason="numba not installed")


@pytest.fixture
def restore_backend():
    before = _kernels.backend()
    yield
    _kernels.use_backend(before)


@needs_numba
@pytest.mark.parametrize("kind,param", [(_kernels.KIND_IDEAL, 0.0), (_kernels.KIND_PLASMA, 126.7),
                                        (_kernels.KIND_DIELECTRIC, 3.0)])
@pytest.mark.parametrize("kernel", [_kernels.KERNEL_PLATE, _kernels.KERNEL_LOG])
def test_kernels_agree(restore_backend, kind, param, kernel):
    x = np.linspace(0.0, 30.0, 301)
    s = np.linspace(0.01, 40.0, 257)
    w = np.full_like(s, s[1])
    out = {}
    for name in ("numpy", "numba"):
        _kernels.use_backend(name)
        out[name] = [_kernels.inner_integrals(x, s, w, kind, param, mode, kernel) for mode in (0, 1)]
        out[name].append(_kernels.cosine_moments(x, np.exp(-x), 0.7, 40))
    for a, b in zip(out["numpy"], out["numba"]):
        # entries that vanish analytically carry rounding noise of the array's scale
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15 * np.max(np.abs(a)))


@needs_numba
def test_forces_agree_between_backends(restore_backend):
    p = EvaluationPoint(0.8e-6)
    vals = []
    for name in ("numpy", "numba"):
        _kernels.use_backend(name)
        lifshitz._poisson_harmonics.cache_clear()
        vals.append(lifshitz.force_plates_poisson(p, Dielectric(3.0)).total)
    lifshitz._poisson_harmonics.cache_clear()
    assert vals[0] == pytest.approx(vals[1], rel=1e-12)


def test_unknown_backend(restore_backend):
    with pytest.raises(ConfigurationError):
        _kernels.use_backend("cuda")
    assert _kernels.use_backend("numpy") == "numpy"


def test_environment_variable_selects_backend():
    env = dict(os.environ, CASIMIR_LAB_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", "from casimir_lab import _kernels; print(_kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
