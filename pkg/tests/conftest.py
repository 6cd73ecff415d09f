import math

import numpy as np
import pytest

from kaonbell import MesonParameters, PureTwoKaonState, preset


@pytest.fixture(scope="session")
def kaon():
    return preset("kaon-paper")


@pytest.fixture(scope="session")
def b_meson():
    return preset("b-meson")


def random_pure_state(rng: np.random.Generator) -> PureTwoKaonState:
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    phi = rng.uniform(-math.pi, math.pi, size=4)
    return PureTwoKaonState(tuple(v), tuple(phi))


def random_params(rng: np.random.Generator) -> MesonParameters:
    gs = rng.uniform(0.5, 2.0)
    gl = rng.uniform(0.001, 1.0) * gs
    dm = rng.uniform(0.0, 2.0)
    return MesonParameters(gamma_s=gs, gamma_l=gl, delta_m=dm)
