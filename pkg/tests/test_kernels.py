import os
import subprocess
import sys

import numpy as np
import pytest

from trapped_nlcs import _kernels
from trapped_nlcs.lindblad import DriveParams, VibronicGenerator

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("m, x", [(0, 0.01), (2, 0.25), (5, 3.0)])
def test_laguerre_flavours_agree(m, x):
    np.testing.assert_array_equal(_kernels.laguerre_table_numba(40, float(m), x),
                                  _kernels.laguerre_table_numpy(40, float(m), x))


def test_f_hat_flavours_agree():
    for args in [(4, 0.1, 0.01), (32, 0.3, 0.2)]:
        for a, b in zip(_kernels.f_hat_bands_numba(*args), _kernels.f_hat_bands_numpy(*args)):
            np.testing.assert_allclose(a, b, rtol=1e-15, atol=1e-18)


@pytest.mark.parametrize("recoil", ["none", "dipole"])
def test_rhs_flavours_agree(recoil):
    gen = VibronicGenerator(DriveParams(eta=0.2, omega0=0.05, gamma=0.3, recoil=recoil, dim=12))
    rng = np.random.default_rng(11)
    rho = rng.normal(size=(2, 2, 12, 12)) + 1j * rng.normal(size=(2, 2, 12, 12))
    args = (gen.fmat, gen.coupling, gen.gamma, gen.unitaries, gen.weights)
    a = _kernels.vibronic_rhs_numba(rho, *args, np.empty_like(rho))
    b = _kernels.vibronic_rhs_numpy(rho, *args, np.empty_like(rho))
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("flag, expected", [("0", "numpy"), ("off", "numpy"), ("1", "numba")])
def test_environment_flag_selects_backend(flag, expected):
    env = dict(os.environ, TRAPPED_NLCS_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "import trapped_nlcs; print(trapped_nlcs.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
