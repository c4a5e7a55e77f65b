import numpy as np
import pytest

from compactkit.certificate import add_listener

import helpers

add_listener(helpers.record)


def pytest_collection_modifyitems(session, config, items):
    # acceptance last, so criterion 2 sees every certificate emitted by the suite
    items.sort(key=lambda item: "test_acceptance" in item.nodeid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
