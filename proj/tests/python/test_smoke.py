import math

import pytest

import sudler


def test_golden_product():
    assert abs(sudler.product(1, 1).value - 1.86406484762645524) < 1e-14


def test_rational_product():
    assert abs(sudler.product_rational(1, 7, 6).value - 7.0) < 1e-10


def test_oracle_product():
    assert abs(sudler.product(6, 1677).value - 0.74132174355917096285) < 1e-12


def test_convergents_and_digits():
    assert sudler.convergents(6, 4) == [1, 6, 37, 228, 1405]
    assert sudler.ostrowski(272, 6) == [1, 1, 1, 1]
    assert sudler.zeckendorff(100) == [4, 6, 11]
    big = sudler.convergents(2, 80)[-1]
    assert big > 2**64


def test_limit_function():
    eps = -(1 + math.sqrt(5)) / 2 / math.sqrt(5)
    assert abs(sudler.G(1, eps).value - 1.0) < 1e-7
    lo, hi = sudler.roots_near_zero(6)
    assert abs(lo + 1 / math.sqrt(40)) < 1e-14
    assert sudler.C(7).value < 1 < sudler.C(6).value


def test_decompose():
    prod, blocks = sudler.decompose(83, 5)
    assert len(blocks) == 4
    assert abs(blocks[3]["eps"] + 0.10713739122828609389) < 1e-12
    assert abs(float(prod) - 4.0744134986063259601) < 1e-10


def test_verdict_and_certificate():
    assert sudler.growth_verdict(5)["liminf_positive"]
    assert not sudler.growth_verdict(6)["liminf_positive"]
    ok, bound = sudler.certify_above(1, -0.26, 0.58, 1.01)
    assert ok and bound > 1.01


def test_errors():
    with pytest.raises(ValueError):
        sudler.beta(0)
