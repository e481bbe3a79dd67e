from fractions import Fraction

import pytest
from hypothesis import settings

from ringkit.chainring import GeneratingFamily
from ringkit.tnring import build_family

settings.register_profile("ringkit", max_examples=60, deadline=None)
settings.load_profile("ringkit")


def F(x):
    return Fraction(x)


@pytest.fixture(scope="session")
def t3():
    return build_family(3)


@pytest.fixture(scope="session")
def t3_chain(t3):
    return GeneratingFamily(t3.generators[:3])
