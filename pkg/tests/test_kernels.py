import random

import pytest

from dagwitt import kernels
from dagwitt.mpoly import MPoly


def rand_terms(rng, n, nvars, deg):
    return {tuple(rng.randint(0, deg) for _ in range(nvars)): rng.randint(1, 100) for _ in range(n)}


@pytest.fixture
def restore_backend():
    saved = kernels.BACKEND
    yield
    kernels.set_backend(saved)


@pytest.mark.parametrize("modulus", [None, 27, 3**10])
def test_backends_agree(restore_backend, modulus):
    rng = random.Random(7)
    a, b = rand_terms(rng, 40, 2, 9), rand_terms(rng, 30, 2, 9)
    ref = kernels.mul_terms_python(a, b, modulus)
    for name in kernels.available_backends():
        kernels.set_backend(name)
        assert kernels.mul_terms(a, b, modulus) == ref


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_mpoly_product_uses_kernel(restore_backend):
    f = MPoly({(i, 9 - i): i + 1 for i in range(10)}, 2, 3, 4)
    outs = []
    for name in kernels.available_backends():
        kernels.set_backend(name)
        outs.append((f * f * f).terms)
    assert all(o == outs[0] for o in outs)
