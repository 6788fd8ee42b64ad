import random

import pytest

from sugra47.scalars import Field


@pytest.fixture
def float_field():
    return Field.floating(1e-9)


@pytest.fixture
def rng():
    return random.Random(47)
