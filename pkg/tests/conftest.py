import pytest

from irratlab.primes import PrimeTable


@pytest.fixture(scope="session")
def prime_table():
    # large enough for p_n with n up to 2*10**5 and twin counting to 2*10**6+2
    return PrimeTable.build(3_300_000)


@pytest.fixture(scope="session")
def small_table():
    return PrimeTable.build(10_000)
