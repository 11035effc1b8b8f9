import pathlib

import numpy as np
import pytest

from varextropy import make_sample

DATA = pathlib.Path(__file__).parent / "data"


def load(name):
    return np.loadtxt(DATA / name)


@pytest.fixture(scope="session")
def lizard_raw():
    return load("lizard_total_length.txt")


@pytest.fixture(scope="session")
def lizard_transformed():
    return make_sample(load("lizard_transformed.txt"))


@pytest.fixture(scope="session")
def glass_fibers():
    return load("glass_fibers.txt")


@pytest.fixture(scope="session")
def aircraft_window():
    return load("aircraft_window.txt")


@pytest.fixture(scope="session")
def data_dir():
    return DATA
