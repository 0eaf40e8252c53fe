import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from wgcurv.core import (
    BoundaryPolicy,
    DimensionError,
    LutConfigError,
    NeighborDiffs,
    SchemeConfig,
    StencilMode,
    corner_angle,
    gaussian_curvature_classical,
    gradient_x,
    gradient_y,
    neighbor_diffs,
    second_xx,
    second_xy,
    second_yy,
    weighted_curvature_classical,
    weighted_curvature_discrete,
)

import reference

STD = SchemeConfig()
LIT = SchemeConfig(stencil=StencilMode.PAPER_LITERAL)
INTERIOR = SchemeConfig(boundary=BoundaryPolicy.INTERIOR_ONLY)


def grid(w, h):
    y, x = np.mgrid[0:h, 0:w].astype(np.float64)
    return x, y


def inner(a):
    return a[1:-1, 1:-1]


images_8x8 = arrays(np.uint8, (8, 8))


# -- config ------------------------------------------------------------------


@pytest.mark.parametrize("h", [0.0, -1.0, math.inf, math.nan])
def test_config_rejects_bad_pixel_size(h):
    with pytest.raises(ValueError):
        SchemeConfig(h=h)


def test_config_accepts_string_enums():
    cfg = SchemeConfig(2.0, "interior", "paper-literal")
    assert cfg.boundary is BoundaryPolicy.INTERIOR_ONLY
    assert cfg.stencil is StencilMode.PAPER_LITERAL


def test_rejects_out_of_range_and_nonfinite():
    with pytest.raises(ValueError):
        weighted_curvature_discrete(np.full((4, 4), 256.0))
    with pytest.raises(ValueError):
        weighted_curvature_discrete(np.full((4, 4), np.nan))
    with pytest.raises(ValueError):
        weighted_curvature_discrete(np.zeros((4, 4, 3)))


# -- first differences ---------------------------------------------------------


def test_gradients_constant_image():
    img = np.full((5, 6), 77, np.uint8)
    assert not gradient_x(img).any()
    assert not gradient_y(img).any()


def test_gradient_x_ramp():
    x, _ = grid(7, 5)
    gx = gradient_x(x)
    assert np.all(gx[:, :-1] == 1.0)
    # replicated right edge
    assert np.all(gx[:, -1] == 0.0)


def test_gradient_x_checkerboard():
    img = np.array([[0, 255, 0], [255, 0, 255]], np.uint8)
    gx = gradient_x(img)
    np.testing.assert_array_equal(gx[:, :2], [[255, -255], [-255, 255]])


def test_gradient_y_ramps():
    x, y = grid(5, 7)
    assert np.all(gradient_y(y)[:-1] == 1.0)
    assert not gradient_y(x).any()


def test_gradient_scales_with_pixel_size():
    x, _ = grid(6, 4)
    gx = gradient_x(3 * x, SchemeConfig(h=0.5))
    assert np.all(gx[:, :-1] == 6.0)


def test_gradient_dimension_errors():
    with pytest.raises(DimensionError):
        gradient_x(np.zeros((4, 1)))
    with pytest.raises(DimensionError):
        gradient_y(np.zeros((1, 4)))


def test_interior_only_zeroes_out_of_reach_pixels():
    x, y = grid(6, 6)
    gx = gradient_x(x, INTERIOR)
    assert np.all(gx[:, :-1] == 1.0) and not gx[:, -1].any()
    gy = gradient_y(y, INTERIOR)
    assert np.all(gy[:-1] == 1.0) and not gy[-1].any()
    sxx = second_xx(x * x, INTERIOR)
    assert np.all(sxx[:, 1:-1] == 2.0) and not sxx[:, [0, -1]].any()


# -- second differences -----------------------------------------------------


def test_second_xx():
    x, _ = grid(8, 5)
    assert not second_xx(np.full((4, 4), 9, np.uint8)).any()
    assert np.all(second_xx(x * x)[:, 1:-1] == 2.0)
    assert not second_xx(x)[:, 1:-1].any()


def test_second_xx_paper_literal_keeps_constant():
    c = 40.0
    for h in (1.0, 2.0):
        out = second_xx(np.full((4, 5), c), SchemeConfig(h=h, stencil="paper-literal"))
        np.testing.assert_array_equal(out, c / h**2)


def test_second_yy():
    x, y = grid(5, 8)
    assert not second_yy(np.full((4, 4), 9, np.uint8)).any()
    assert np.all(second_yy(y * y)[1:-1] == 2.0)
    assert not second_yy(y)[1:-1].any()
    assert not second_yy(x * x).any()


def test_second_xy():
    x, y = grid(8, 8)
    assert not second_xy(np.full((4, 4), 3, np.uint8)).any()
    assert np.all(inner(second_xy(x * y)) == 1.0)
    assert np.all(inner(second_xy(x * y, LIT)) == 4.0)
    assert not inner(second_xy(3 * x + 2 * y)).any()
    assert not inner(second_xy(x * x)).any()


def test_second_dimension_errors():
    with pytest.raises(DimensionError):
        second_xx(np.zeros((5, 2)))
    with pytest.raises(DimensionError):
        second_yy(np.zeros((2, 5)))
    with pytest.raises(DimensionError):
        second_xy(np.zeros((2, 5)))
    with pytest.raises(DimensionError):
        weighted_curvature_discrete(np.zeros((3, 2)))


@given(
    a=st.integers(-5, 5),
    b=st.integers(-5, 5),
    c=st.integers(-3, 3),
)
def test_stencils_exact_on_quadratics(a, b, c):
    # a x^2 + b y^2 + c x y + 100, kept within [0, 255] on a 6x6 grid
    x, y = grid(6, 6)
    x, y = x - 2.5, y - 2.5
    img = 0.25 * (a * x * x + b * y * y + c * x * y) + 100
    assert np.all(inner(second_xx(img)) == 0.5 * a)
    assert np.all(inner(second_yy(img)) == 0.5 * b)
    np.testing.assert_allclose(inner(second_xy(img)), 0.25 * c, rtol=0, atol=1e-12)


# -- classical schemes ------------------------------------------------------


def test_classical_zero_on_constant_and_planar():
    const = np.full((6, 6), 200, np.uint8)
    assert not gaussian_curvature_classical(const).any()
    assert not weighted_curvature_classical(const).any()
    x, _ = grid(6, 6)
    assert not inner(gaussian_curvature_classical(x)).any()
    assert not inner(weighted_curvature_classical(x)).any()


def test_classical_bowl_pixel():
    # I = (x^2 + y^2)/2 at (x, y) = (3, 4): Ix = 3.5, Iy = 4.5, Ixx = Iyy = 1, Ixy = 0
    x, y = grid(10, 10)
    img = (x * x + y * y) / 2
    g = 1 + 3.5**2 + 4.5**2
    assert gaussian_curvature_classical(img)[4, 3] == pytest.approx(1 / g**2, rel=1e-15)
    assert weighted_curvature_classical(img)[4, 3] == pytest.approx(1 / g, rel=1e-15)
    ix, iy, ixx, iyy, ixy = reference.stencils(img.tolist(), 3, 4)
    assert (ix, iy, ixx, iyy, ixy) == (3.5, 4.5, 1.0, 1.0, 0.0)


def test_classical_saddle_pixel():
    # I = x y at (x, y) = (3, 2): Ix = y = 2, Iy = x = 3, Ixy = 1
    x, y = grid(8, 8)
    img = x * y
    assert weighted_curvature_classical(img)[2, 3] == pytest.approx(-1 / 14, rel=1e-15)
    # printed stencils: Ixx = Iyy = x y = 6, Ixy = 4
    assert weighted_curvature_classical(img, LIT)[2, 3] == pytest.approx(20 / 14, rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(img=images_8x8, literal=st.booleans(), h=st.sampled_from([1.0, 0.5, 3.0]))
def test_classical_matches_naive_loops(img, literal, h):
    cfg = SchemeConfig(h=h, stencil="paper-literal" if literal else "standard")
    rows = img.tolist()
    np.testing.assert_array_equal(
        weighted_curvature_classical(img, cfg), reference.classical(rows, True, h, literal)
    )
    np.testing.assert_array_equal(
        gaussian_curvature_classical(img, cfg), reference.classical(rows, False, h, literal)
    )


@settings(max_examples=30, deadline=None)
@given(img=arrays(np.uint8, (9, 7)), threads=st.integers(2, 6))
def test_thread_count_does_not_change_output(img, threads):
    for fn in (weighted_curvature_classical, gaussian_curvature_classical, weighted_curvature_discrete):
        np.testing.assert_array_equal(fn(img, threads=threads), fn(img))


def test_classical_interior_only_border():
    img = np.random.default_rng(3).integers(0, 256, (6, 7), dtype=np.uint8)
    out = weighted_curvature_classical(img, INTERIOR)
    ref = weighted_curvature_classical(img)
    np.testing.assert_array_equal(inner(out), inner(ref))
    assert not out[[0, -1], :].any() and not out[:, [0, -1]].any()


@settings(max_examples=50, deadline=None)
@given(img=arrays(np.uint8, (8, 8), elements=st.integers(0, 85)), s=st.sampled_from([2, 3]))
def test_contrast_scaling_identity(img, s):
    # Kw(s I) = s^2 N / (1 + s^2 G), N and G from the unscaled image
    base = img.astype(np.float64)
    ixx, iyy, ixy = second_xx(base), second_yy(base), second_xy(base)
    ix, iy = gradient_x(base), gradient_y(base)
    expected = s * s * (ixx * iyy - ixy * ixy) / (1 + s * s * (ix * ix + iy * iy))
    got = weighted_curvature_classical(img * s)
    np.testing.assert_allclose(got, expected, rtol=1e-9, atol=0)


# -- neighbour differences and corner angles ---------------------------------


def test_neighbor_diffs():
    assert neighbor_diffs(np.full((3, 3), 5, np.uint8), 1, 1) == (0, 0, 0, 0)
    spike = np.zeros((3, 3), np.uint8)
    spike[1, 1] = 9
    assert neighbor_diffs(spike, 1, 1) == NeighborDiffs(-9, -9, -9, -9)
    x, _ = grid(4, 4)
    d = neighbor_diffs(x, 0, 0)
    assert d.d4 == 0 and d.d2 == 1 and d.d1 == 0 and d.d3 == 0


def test_neighbor_diffs_order():
    img = np.arange(25, dtype=np.uint8).reshape(5, 5)  # I = 5 y + x
    assert neighbor_diffs(img, 2, 2) == (5, 1, -5, -1)


def test_neighbor_diffs_bounds():
    img = np.zeros((4, 4), np.uint8)
    with pytest.raises(IndexError):
        neighbor_diffs(img, 4, 0)
    with pytest.raises(IndexError):
        neighbor_diffs(img, 0, -1)
    with pytest.raises(IndexError):
        neighbor_diffs(img, 0, 2, BoundaryPolicy.INTERIOR_ONLY)
    assert neighbor_diffs(img, 1, 2, BoundaryPolicy.INTERIOR_ONLY) == (0, 0, 0, 0)


def test_corner_angle_values():
    assert corner_angle(0, 17) == math.pi / 2
    assert corner_angle(-3.5, 0, 2.0) == math.pi / 2
    assert corner_angle(1, 1) == pytest.approx(math.pi / 3, abs=1e-15)
    # acos(-65025/65026)
    assert corner_angle(255, -255) == pytest.approx(3.1360467535879235, abs=1e-15)
    assert corner_angle(255, -255) == reference.angle(255.0, -255.0)


def test_corner_angle_broadcasts():
    out = corner_angle(np.array([0.0, 1.0]), np.array([[1.0], [2.0]]))
    assert out.shape == (2, 2)


finite_d = st.floats(-1e4, 1e4, allow_nan=False)
positive_h = st.floats(1e-3, 1e3)


@given(a=finite_d, b=finite_d, h=positive_h)
def test_corner_angle_range_and_symmetry(a, b, h):
    t = corner_angle(a, b, h)
    assert 0.0 <= t <= math.pi
    assert t == corner_angle(b, a, h)


@given(
    a=st.floats(-255, 255),
    b=st.floats(-255, 255),
    h=st.floats(0.05, 10),
    lam=st.floats(1e-3, 1e3),
)
def test_corner_angle_resolution_invariance(a, b, h, lam):
    assert corner_angle(lam * a, lam * b, lam * h) == pytest.approx(corner_angle(a, b, h), abs=1e-12)


# -- discrete scheme ---------------------------------------------------------


def test_discrete_constant_and_ramp(full_lut):
    const = np.full((5, 5), 13, np.uint8)
    assert not weighted_curvature_discrete(const).any()
    assert not weighted_curvature_discrete(const, lut=full_lut).any()
    x, _ = grid(6, 6)
    assert not inner(weighted_curvature_discrete(x)).any()


def test_discrete_spike():
    img = np.zeros((5, 5), np.uint8)
    img[2, 2] = 1
    out = weighted_curvature_discrete(img)
    assert out[2, 2] == pytest.approx(2 * math.pi / 3, abs=1e-12)
    # every other pixel has at most one nonzero difference, so all its angles are pi/2
    rest = out.copy()
    rest[2, 2] = 0.0
    assert not rest.any()
    np.testing.assert_allclose(out, reference.deficit(img.tolist()), rtol=0, atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(
    a=st.integers(-20, 20),
    b=st.integers(-20, 20),
    c=st.integers(0, 255),
    h=st.sampled_from([1.0, 0.25, 4.0]),
)
def test_discrete_planar_is_flat(a, b, c, h):
    x, y = grid(7, 6)
    img = a * x + b * y + c
    if img.min() < 0 or img.max() > 255:
        img = img - img.min()
        if img.max() > 255:
            return
    out = weighted_curvature_discrete(img, SchemeConfig(h=h))
    assert np.abs(inner(out)).max() < 1e-12


@settings(max_examples=40, deadline=None)
@given(img=images_8x8)
def test_discrete_matches_naive_loops_and_bounds(img):
    out = weighted_curvature_discrete(img)
    np.testing.assert_allclose(out, reference.deficit(img.tolist()), rtol=0, atol=1e-13)
    assert np.all(out > -2 * math.pi) and np.all(out <= 2 * math.pi)


def test_discrete_real_valued_input():
    x, y = grid(9, 9)
    img = 0.5 * x + 0.25 * y + 10.3
    assert np.abs(inner(weighted_curvature_discrete(img))).max() < 1e-12


def test_discrete_lut_preconditions(full_lut):
    img = np.zeros((4, 4), np.uint8)
    with pytest.raises(LutConfigError):
        weighted_curvature_discrete(img, SchemeConfig(h=2.0), full_lut)
    with pytest.raises(LutConfigError):
        weighted_curvature_discrete(np.full((4, 4), 0.5), lut=full_lut)
    # integral floats are fine
    assert not weighted_curvature_discrete(np.full((4, 4), 7.0), lut=full_lut).any()


def test_inputs_not_mutated(full_lut):
    img = np.random.default_rng(0).integers(0, 256, (10, 10), dtype=np.uint8)
    copy = img.copy()
    weighted_curvature_discrete(img, lut=full_lut, threads=3)
    weighted_curvature_classical(img, threads=3)
    np.testing.assert_array_equal(img, copy)
