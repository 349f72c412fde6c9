import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.errors import DomainError
from src.params.admissibility import (
    admissibility_report,
    find_delta_star,
    k_of_delta,
    p_range,
    p_star,
    quadratic_residual,
    wz_comparison,
)
from src.params.physical import PhysParams


pytestmark = pytest.mark.unit


def test_k_and_exponents_at_reference_delta():
    assert k_of_delta(0.8) == pytest.approx(24.0)
    assert p_star(0.8) == pytest.approx(12.0)
    low, high = p_range(0.8)
    assert low < 2.0 < high
    assert quadratic_residual(low, 24.0) == pytest.approx(0.0, abs=1e-9)
    assert quadratic_residual(high, 24.0) == pytest.approx(0.0, abs=1e-9)


def test_threshold_neighbourhood_values():
    assert p_star(0.7427) == pytest.approx(9.7730, abs=1e-3)
    assert p_range(0.7427)[1] == pytest.approx(9.7770, abs=1e-3)
    assert admissibility_report(0.7427).admissible


def test_double_root_at_two_thirds():
    low, high = p_range(2.0 / 3.0)
    assert low == pytest.approx(2.0, abs=1e-4)
    assert high == pytest.approx(2.0, abs=1e-4)


def test_k_below_four_has_no_range():
    with pytest.raises(DomainError):
        p_range(0.6)


def test_report_distinguishes_failure_reasons():
    below_threshold = admissibility_report(0.70)
    assert below_threshold.viscosity_law_valid
    assert not below_threshold.condition_holds
    assert not below_threshold.admissible
    assert "threshold" in below_threshold.reason

    outside_law = admissibility_report(0.5)
    assert not outside_law.viscosity_law_valid
    assert not outside_law.admissible
    assert math.isnan(outside_law.p_max)


def test_report_never_raises_at_delta_one():
    report = admissibility_report(1.0)
    assert not report.admissible
    assert math.isnan(report.K)
    assert math.isnan(report.p_star)


def test_report_rows_are_ordered():
    keys = [key for key, _ in admissibility_report(0.8).as_rows()]
    assert keys[0] == "delta"
    assert keys[-2:] == ["admissible", "reason"]


def test_find_delta_star_brackets_the_flip():
    delta_star = find_delta_star(1e-10)
    assert 0.7417 < delta_star < 0.7437
    assert delta_star == pytest.approx(0.7427, abs=1e-3)
    assert admissibility_report(delta_star + 1e-6).admissible
    assert not admissibility_report(delta_star - 1e-6).admissible


def test_find_delta_star_rejects_bad_tolerance():
    with pytest.raises(DomainError):
        find_delta_star(0.0)


def test_find_delta_star_needs_a_sign_change():
    with pytest.raises(DomainError):
        find_delta_star(1e-6, bracket=(0.8, 0.9))


def test_wz_comparison():
    assert wz_comparison(2.0, 0.8, 12.0)
    assert not wz_comparison(1.0, 0.8, 12.0)
    with pytest.raises(DomainError):
        wz_comparison(1.2, 0.8, 0.0)


@given(st.floats(min_value=0.745, max_value=0.99))
def test_admissible_above_threshold(delta):
    report = admissibility_report(delta)
    assert report.admissible
    assert report.p_min <= report.p_max
    assert report.p_star <= report.p_max


@given(st.floats(min_value=0.667, max_value=0.742))
def test_not_admissible_below_threshold(delta):
    assert not admissibility_report(delta).admissible


@pytest.mark.parametrize(
    "kwargs",
    [
        {"gamma": 0.9, "delta": 0.8, "a": 1.0},
        {"gamma": 1.2, "delta": 0.5, "a": 1.0},
        {"gamma": 1.2, "delta": 1.0, "a": 1.0},
        {"gamma": 1.2, "delta": 0.8, "a": 0.0},
        {"gamma": 1.2, "delta": 0.8, "a": 1.0, "eta": -0.1},
        {"gamma": 1.0, "delta": 0.8, "a": 1.0},
        {"gamma": 1.0, "delta": 0.8, "a": 1.0, "alpha": 2.0},
        {"gamma": 1.2, "delta": 0.8, "a": 1.0, "alpha": 1.5},
        {"gamma": 1.2, "delta": 0.8, "a": 1.0, "pressure_coeff": 2.0},
    ],
)
def test_phys_params_rejects_invalid(kwargs):
    with pytest.raises(DomainError):
        PhysParams(**kwargs)


def test_phys_params_derived_quantities():
    params = PhysParams(gamma=1.2, delta=0.8, a=1.0)
    assert params.damping_coeff == pytest.approx(0.75)
    assert params.bulk_viscosity_ratio == pytest.approx(0.8)
    assert not params.isothermal
    assert params.moment_exponent == 0.0

    isothermal = PhysParams.from_mapping({"gamma": "1", "delta": "0.8", "a": "1", "alpha": "1.5"})
    assert isothermal.isothermal
    assert isothermal.moment_exponent == 1.5


def test_two_thirds_is_accepted():
    PhysParams(gamma=1.2, delta=2.0 / 3.0, a=1.0)
