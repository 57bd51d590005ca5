"""Shared fixtures: the expensive pipeline runs are computed once per session."""

from pathlib import Path

import pytest

from bolab import HarmonicCoupling, ModelSpec, SeparableHarmonic, SoftCoulomb, build_grid
from bolab.diagnostics import kappa_scaling_study, run_pipeline

REPO = Path(__file__).resolve().parent.parent
CONFIG_DIR = REPO / "configs"


@pytest.fixture(scope="session")
def harmonic2000_setup():
    spec = ModelSpec(M=2000.0, m=1.0, potential=HarmonicCoupling(1.0, 1.0))
    g1 = build_grid(-0.65, 0.65, 128)
    g2 = build_grid(-5.5, 5.5, 128)
    return spec, g1, g2


@pytest.fixture(scope="session")
def harmonic2000(harmonic2000_setup):
    spec, g1, g2 = harmonic2000_setup
    return run_pipeline(spec, g1, g2, A=3, nuclear_levels=3, exact_k=3)


@pytest.fixture(scope="session")
def separable_setup():
    spec = ModelSpec(M=10.0, m=1.0, potential=SeparableHarmonic(1.0, 1.0))
    g1 = build_grid(-3.5, 3.5, 96)
    g2 = build_grid(-4.5, 4.5, 96)
    return spec, g1, g2


@pytest.fixture(scope="session")
def separable_run(separable_setup):
    spec, g1, g2 = separable_setup
    return run_pipeline(spec, g1, g2, A=2, nuclear_levels=2, exact_k=2)


@pytest.fixture(scope="session")
def sweep_report():
    spec = ModelSpec(M=10.0, m=1.0, potential=HarmonicCoupling(1.0, 1.0))
    g1 = build_grid(-2.4, 2.4, 192)
    g2 = build_grid(-8.5, 8.5, 96)
    return kappa_scaling_study(spec, [10.0, 100.0, 1000.0, 2000.0], g1, g2,
                               A=2, nuclear_levels=2)


@pytest.fixture(scope="session")
def soft_coulomb_setup():
    spec = ModelSpec(M=100.0, m=1.0, potential=SoftCoulomb(z=1.0, s=1.0, k1=1.0))
    return spec
