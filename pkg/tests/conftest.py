import numpy as np
import pytest

from enviroclass.dataset import attach_labels, impute_missing, join_by_state
from enviroclass.indices import compute_aqi, compute_wqi
from enviroclass.ingest import average_water_by_state
from enviroclass.synth import generate


def labeled_synthetic(n_rows, seed=42):
    air, water = generate(n_rows, seed)
    aggregates = average_water_by_state(water)
    join = join_by_state(air, aggregates)
    wqi = {k: compute_wqi(v) for k, v in aggregates.items()}
    return attach_labels(join.matrix, [compute_aqi(r) for r in join.air], wqi)


@pytest.fixture(scope="session")
def synthetic_600():
    return impute_missing(labeled_synthetic(600))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
