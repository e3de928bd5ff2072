import numpy as np
import pytest

from rotcool import PulseParams, SystemSpec, build_basis, make_schedule, mixed_lambda_state


@pytest.fixture(scope="session")
def toy():
    """Small, fast CARP transfer problem (completes in about a second).

    Landau-Zener exponent ~4; at delta_p = 10 nu the drive is strong enough
    that the resolved-sideband condition is only loosely met, so the transfer
    tops out near 80% rather than the far-detuned >98%.  Good enough (and
    cheap enough) to exercise the machinery.
    """
    spec = SystemSpec(j_max=1, n_max=3)
    sched = make_schedule("carp", spec,
                          PulseParams(omega0_p=2.0, width=160.0, tau=0.0,
                                      delta_p=10.0, alpha=2e-4))
    basis = build_basis(spec)
    rho0 = mixed_lambda_state(basis, 0.3, 0.7)
    return spec, basis, sched, rho0


TOY_CONFIG = """\
[system]
j_max = 1
n_max = 3
eta = 0.1
gamma_j = 0.01
gamma_u = 0.01
beta_b = 0.15

[pulses]
scheme = carp
omega0_p = 2.0
T = 160.0
tau = 0.0
delta_p = 10.0
alpha = 2e-4

[initial]
kind = lambda_mixture
p_ground = 0.3
p_excited = 0.7

[integrator]
rel_tol = 1e-6
abs_tol = 1e-9

[run]
cycles = 1
"""


@pytest.fixture()
def toy_config_text():
    return TOY_CONFIG
