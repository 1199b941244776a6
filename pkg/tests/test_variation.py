import math

import numpy as np
import pytest

from discpack import (
    Label,
    LabelFamily,
    angle_sum,
    angle_sum_derivative,
    angle_sum_derivative_coefficients,
    angle_sum_derivative_fd,
    flow_field_residual,
    hex_ball,
    label_conductances,
    perturbation_family,
    star,
)
from discpack.errors import HypothesisNotMet, NotAStar, StepTooLarge


def linear_family(complex, radii, direction):
    radii = np.asarray(radii, dtype=float)
    direction = np.asarray(direction, dtype=float)
    return LabelFamily.from_function(
        complex, lambda t: radii + t * direction,
        t_grid=np.linspace(0.0, 1e-4, 3))


# -- closed-form hub derivative -----------------------------------------------

def test_zero_velocity_gives_zero():
    S = star(6)
    assert angle_sum_derivative(S, Label.constant(S), np.zeros(7)) == 0.0


def test_uniform_scaling_direction_gives_zero():
    S = star(8)
    rng = np.random.default_rng(41)
    radii = np.exp(rng.uniform(-1, 1, 9))
    assert abs(angle_sum_derivative(S, radii, radii)) <= 1e-15


def test_symmetric_flower_value():
    S = star(6)
    vel = np.array([0.0, 1, 1, 1, 1, 1, 1])
    value = angle_sum_derivative(S, Label.constant(S), vel)
    assert abs(value - 2 * math.sqrt(3)) <= 1e-12


def test_derivative_matches_finite_difference():
    rng = np.random.default_rng(42)
    h = 1e-5
    for _ in range(20):
        m = int(rng.integers(3, 11))
        S = star(m)
        radii = np.exp(rng.uniform(math.log(0.1), math.log(10), m + 1))
        direction = rng.uniform(-1, 1, m + 1)
        family = LabelFamily.from_function(
            S, lambda t: radii + t * direction,
            t_grid=np.linspace(-2 * h, 2 * h, 5))
        fd = angle_sum_derivative_fd(family, 0.0, h)
        closed = angle_sum_derivative(S, radii, direction)
        assert abs(fd - closed) <= 1e-6


def test_finite_difference_error_scales_quadratically():
    S = star(6)
    rng = np.random.default_rng(43)
    radii = np.exp(rng.uniform(-1, 1, 7))
    direction = rng.uniform(-1, 1, 7)
    family = LabelFamily.from_function(S, lambda t: radii + t * direction)
    closed = angle_sum_derivative(S, radii, direction)
    errs = [abs(angle_sum_derivative_fd(family, 0.0, h) - closed)
            for h in (1e-2, 1e-3)]
    # second-order scheme: shrinking h by 10 cuts the error by ~100
    assert errs[1] <= errs[0] / 50


def test_coefficients_equal_label_conductances():
    rng = np.random.default_rng(44)
    for m in (3, 5, 9):
        S = star(m)
        radii = np.exp(rng.uniform(math.log(0.1), math.log(10), m + 1))
        coeffs = angle_sum_derivative_coefficients(S, radii)
        net = label_conductances(S, Label(radii))
        from discpack import neighbors_cyclic
        petals = neighbors_cyclic(S, 0)
        for c, p in zip(coeffs, petals):
            assert abs(c - net.conductance(0, p)) <= 1e-12
            assert c <= 1.0 + 1e-15


def test_not_a_star():
    with pytest.raises(NotAStar):
        angle_sum_derivative(hex_ball(2), Label.constant(hex_ball(2)),
                             np.zeros(19))


def test_step_too_large():
    S = star(4)
    family = LabelFamily.from_function(
        S, lambda t: np.full(5, 1.0) - t * np.full(5, 2.0))
    with pytest.raises(StepTooLarge):
        angle_sum_derivative_fd(family, 0.5, 0.2)


def test_fd_requires_grid_or_path():
    S = star(4)
    fam = LabelFamily(complex=S, t_grid=np.linspace(0, 1, 5),
                      radii=np.ones((5, 5)), kind="explicit")
    with pytest.raises(ValueError):
        angle_sum_derivative_fd(fam, 0.5, 1e-3)


# -- perturbation families ----------------------------------------------------

def test_constant_family_from_equal_labels():
    K = hex_ball(2)
    rho = Label.constant(K)
    fam = perturbation_family(K, rho, rho, 0, t_grid=np.linspace(0, 1, 5))
    assert np.abs(fam.radii - 1.0).max() <= 1e-12


def test_family_endpoints_and_monotonicity():
    K = hex_ball(2)
    rho = Label.constant(K)
    fam = perturbation_family(K, rho, rho.scaled(2.0), 0,
                              t_grid=np.linspace(0, 1, 9))
    assert np.abs(fam.radii[0] - rho.radii).max() <= 1e-10
    # boundary at t=1 is exactly 2, the pinned hub stays at 1
    assert fam.radii[-1][0] == pytest.approx(1.0)
    bidx = list(K.boundary_vertices)
    assert np.abs(fam.radii[-1][bidx] - 2.0).max() <= 1e-12
    assert np.all(np.diff(fam.radii, axis=0) >= -1e-12)


def test_family_preserves_angle_sums_off_pin():
    K = hex_ball(2)
    rho = Label.constant(K)
    fam = perturbation_family(K, rho, rho.scaled(2.0), 0,
                              t_grid=np.linspace(0, 1, 5))
    for i in range(5):
        for v in K.interior_vertices:
            if v == 0:
                continue
            assert abs(angle_sum(K, fam.label_at(i), v)
                       - 2 * math.pi) <= 1e-9


def test_family_requires_domination():
    K = hex_ball(2)
    rho = Label.constant(K)
    with pytest.raises(HypothesisNotMet):
        perturbation_family(K, rho, rho.scaled(0.5), 0)


def test_family_pin_must_be_interior():
    K = hex_ball(2)
    rho = Label.constant(K)
    with pytest.raises(HypothesisNotMet):
        perturbation_family(K, rho, rho.scaled(2.0), K.boundary_vertices[0])


# -- flow field ----------------------------------------------------------------

def test_constant_family_flow_field_vanishes():
    K = hex_ball(2)
    fam = LabelFamily.from_function(K, lambda t: np.ones(K.vertex_count),
                                    t_grid=np.linspace(0, 1, 5))
    field, residuals = flow_field_residual(fam, 2)
    assert np.abs(field.values).max() == 0.0
    assert max(abs(r) for r in residuals.values()) == 0.0


def test_flow_field_is_conductance_harmonic_off_pin():
    K = hex_ball(2)
    rho = Label.constant(K)
    fam = perturbation_family(K, rho, rho.scaled(2.0), 0,
                              t_grid=np.linspace(0, 1, 65))
    field, residuals = flow_field_residual(fam, 32)
    off = max(abs(r) for v, r in residuals.items() if v != 0)
    assert off <= 1e-5
    assert residuals[0] >= -1e-5


def test_flow_field_bounds():
    K = hex_ball(2)
    rho = Label.constant(K)
    fam = perturbation_family(K, rho, rho.scaled(2.0), 0,
                              t_grid=np.linspace(0, 1, 17))
    field, _ = flow_field_residual(fam, 8)
    f = field.values
    assert f.min() >= -1e-9
    assert f.max() <= f[list(K.boundary_vertices)].max() + 1e-9


# -- CSV dumps -----------------------------------------------------------------

def test_family_csv(tmp_path):
    from discpack import write_family_csv
    K = star(4)
    fam = LabelFamily.from_function(K, lambda t: np.full(5, 1.0 + t),
                                    t_grid=np.linspace(0, 1, 3))
    path = tmp_path / "family.csv"
    write_family_csv(fam, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,vertex,radius"
    assert len(lines) == 1 + 3 * 5
    t, v, r = lines[1].split(",")
    assert (float(t), int(v), float(r)) == (0.0, 0, 1.0)


def test_residual_csv(tmp_path):
    from discpack import write_residual_csv
    path = tmp_path / "residuals.csv"
    write_residual_csv({3: 0.5, 1: -0.25}, path)
    assert path.read_text().splitlines() == [
        "vertex,residual", "1,-0.25", "3,0.5"]
