from fractions import Fraction

import pytest

from cnlattice.instances import constant_kernel
from cnlattice.kernel import StepKernel


@pytest.fixture
def sym1():
    return constant_kernel([Fraction(1, 2), Fraction(1, 2)])


@pytest.fixture
def biased1():
    return constant_kernel([Fraction(2, 3), Fraction(1, 3)])


@pytest.fixture
def uniform2():
    return StepKernel.uniform(2)
