import pytest

from mlcheck.constructions import BUILTINS, builtin, divisor_lattice
from mlcheck.enumeration import iter_multiplicative_lattices


@pytest.fixture(scope="session")
def enumerated5():
    return list(iter_multiplicative_lattices(5))


@pytest.fixture(scope="session")
def small_corpus(enumerated5):
    """Built-ins, divisor lattices up to 60 and everything of order <= 5."""
    out = [(f"builtin:{n}", builtin(n)) for n in BUILTINS]
    out += [(f"divisors:{n}", divisor_lattice(n)) for n in range(2, 61)]
    out += [(f"enumerated:{i}", L) for i, L in enumerate(enumerated5)]
    return out
