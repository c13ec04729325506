import numpy as np
import pytest
from fractions import Fraction

from extrapkit.errors import DomainError, GridMismatch, TruncationInvalid, UnknownSpec
from extrapkit.exponents import INF, Exponent
from extrapkit.grid import Grid
from extrapkit.gridfn import (
    FamilySpec,
    GridFunction,
    bht,
    hilbert,
    make_family,
    maximal,
    measure_norm,
    truncate,
    weighted_norm,
)
from extrapkit.weights import GridWeight, PowerWeight

G = Grid(8.0, 2**12)
X = G.x()


def bump(x, c=0.0, wd=1.0):
    u = (x - c) / wd
    out = np.zeros_like(x)
    m = np.abs(u) < 1
    out[m] = np.exp(1 - 1 / (1 - u[m] ** 2))
    return out


# -- norms ----------------------------------------------------------------------


def test_weighted_norm_indicator_unit_weight():
    f = GridFunction.indicator(-1.0, 1.0, G)
    val = weighted_norm(f, GridWeight.unit(G), 2)
    assert val == pytest.approx(np.sqrt(2.0), rel=2e-3)


def test_weighted_norm_power_weight_closed_form():
    # f = X_[0,1], w = |x|^{1/2}, p = 2: (int_0^1 x dx)^(1/2) = 1/sqrt(2)
    f = GridFunction.indicator(0.0, 1.0, G)
    w = PowerWeight(Fraction(1, 2)).on_grid(G)
    val = weighted_norm(f, w, 2)
    assert val == pytest.approx(1 / np.sqrt(2.0), rel=0.01)


def test_weighted_norm_homogeneous():
    f = GridFunction(bump(X), G)
    w = PowerWeight(Fraction(1, 4)).on_grid(G)
    for c in (3.0, -2.5, 0.125):
        lhs = weighted_norm(f * c, w, Fraction(3, 2))
        rhs = abs(c) * weighted_norm(f, w, Fraction(3, 2))
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_weighted_norm_triangle_inequality():
    rng = np.random.default_rng(11)
    w = GridWeight(np.exp(rng.standard_normal(G.N) * 0.2), G)
    for p in (1, Fraction(3, 2), 2, 7):
        f = GridFunction(rng.standard_normal(G.N), G)
        g = GridFunction(rng.standard_normal(G.N), G)
        lhs = weighted_norm(f + g, w, p)
        rhs = weighted_norm(f, w, p) + weighted_norm(g, w, p)
        assert lhs <= rhs * (1 + 1e-12)


def test_weighted_norm_sup_mode():
    f = GridFunction(bump(X) * 3.0, G)
    assert weighted_norm(f, GridWeight.unit(G), INF) == np.max(np.abs(f.samples))


def test_norm_grid_mismatch():
    f = GridFunction(bump(X), G)
    w = GridWeight.unit(Grid(8.0, 2**10))
    with pytest.raises(GridMismatch):
        weighted_norm(f, w, 2)


# -- maximal ---------------------------------------------------------------------


def test_maximal_constant_fixed():
    c = GridFunction(np.full(G.N, 2.5), G)
    out = maximal(c)
    assert np.allclose(out.samples, 2.5, rtol=1e-10)


def test_maximal_indicator_closed_form():
    g = Grid(8.0, 2**14)
    f = GridFunction.indicator(0.0, 1.0, g)
    x = g.x()
    truth = np.where((x >= 0) & (x <= 1), 1.0, np.where(x > 1, 1.0 / x, 1.0 / (1.0 - x)))
    err = np.max(np.abs(maximal(f).samples - truth))
    assert err <= 0.02


def test_maximal_dominates_input():
    rng = np.random.default_rng(3)
    f = GridFunction(rng.standard_normal(G.N), G)
    out = maximal(f)
    assert np.all(out.samples >= np.abs(f.samples) - 1e-15)


def test_maximal_sublinear():
    rng = np.random.default_rng(5)
    f = GridFunction(rng.standard_normal(512), Grid(4.0, 512))
    g = GridFunction(rng.standard_normal(512), Grid(4.0, 512))
    lhs = maximal(f + g).samples
    rhs = maximal(f).samples + maximal(g).samples
    assert np.all(lhs <= rhs + 1e-12)


def test_maximal_positive_homogeneous():
    rng = np.random.default_rng(8)
    f = GridFunction(rng.random(512), Grid(4.0, 512))
    assert np.allclose(maximal(f * 4.0).samples, 4.0 * maximal(f).samples, rtol=1e-13)


def test_maximal_sliding_brackets_exact():
    rng = np.random.default_rng(17)
    for _ in range(5):
        f = GridFunction(rng.random(256), Grid(2.0, 256))
        exact = maximal(f, "exact").samples
        slide = maximal(f, "sliding").samples
        assert np.all(slide <= exact + 1e-12)
        assert np.all(exact <= 2 * slide + 1e-12)


def test_maximal_unknown_mode():
    with pytest.raises(UnknownSpec):
        maximal(GridFunction(np.ones(256), Grid(2.0, 256)), "bogus")


# -- hilbert ---------------------------------------------------------------------


def test_hilbert_indicator_closed_form():
    g = Grid(8.0, 2**14)
    x = g.x()
    a, b = -1.0, 1.0
    f = GridFunction.indicator(a, b, g)
    truth = (1 / np.pi) * np.log(np.abs((x - a) / (x - b)))
    mid = (x >= a + (b - a) / 4) & (x <= b - (b - a) / 4)
    got = hilbert(f).samples
    rel = np.linalg.norm(got[mid] - truth[mid]) / np.linalg.norm(truth[mid])
    assert rel <= 0.01


def test_hilbert_even_to_odd():
    f = GridFunction(np.exp(-X**2), G)
    Hf = hilbert(f).samples
    assert np.max(np.abs(Hf + Hf[::-1])) < 1e-12


def test_hilbert_involution_minus_identity():
    g = Grid(8.0, 2**14)
    x = g.x()
    f = GridFunction(bump(x, 0.0, 0.5), g)
    HHf = hilbert(hilbert(f)).samples
    mid = np.abs(x) <= 0.25
    rel = np.linalg.norm(HHf[mid] + f.samples[mid]) / np.linalg.norm(f.samples[mid])
    assert rel <= 0.02


def test_hilbert_translation_equivariance():
    # shifting by whole cells commutes with the convolution (supports kept
    # well inside the window)
    f = GridFunction(bump(X, -1.0, 0.5), G)
    shift = 64
    shifted = GridFunction(np.roll(f.samples, shift), G)
    lhs = hilbert(shifted).samples
    rhs = np.roll(hilbert(f).samples, shift)
    interior = slice(2 * shift, G.N - 2 * shift)
    assert np.allclose(lhs[interior], rhs[interior], atol=1e-10)


def test_hilbert_anti_self_adjoint():
    rng = np.random.default_rng(23)
    f = GridFunction(bump(X, -0.5, 0.7) * rng.random(G.N), G)
    g = GridFunction(bump(X, 0.5, 0.7), G)
    h = G.h
    lhs = np.sum(hilbert(f).samples * g.samples) * h
    rhs = -np.sum(f.samples * hilbert(g).samples) * h
    assert lhs == pytest.approx(rhs, rel=1e-10)


# -- bilinear hilbert -------------------------------------------------------------


def test_bht_constants_cancel_exactly():
    c = GridFunction(np.full(G.N, 1.7), G)
    d = GridFunction(np.full(G.N, -2.2), G)
    assert np.all(bht(c, d).samples == 0.0)


def test_bht_window_reduction_to_hilbert():
    g = Grid(8.0, 2**13)
    x = g.x()
    f = GridFunction(bump(x, 0.0, 1.0), g)
    window = GridFunction(((x >= -5.5) & (x <= 5.5)).astype(float), g)
    B = bht(f, window).samples
    piH = np.pi * hilbert(f).samples
    mid = np.abs(x) <= 0.5
    rel = np.linalg.norm(B[mid] - piH[mid]) / np.linalg.norm(piH[mid])
    assert rel <= 0.02


def test_bht_modulation_identity():
    g = Grid(8.0, 2**14)
    x = g.x()
    wv = bump(x, 0.0, 1.0)
    a, b = -20.0, 20.0
    f = GridFunction(wv * np.exp(1j * a * x), g)
    h = GridFunction(wv * np.exp(1j * b * x), g)
    B = bht(f, h).samples
    pred = 1j * np.pi * np.sign(b - a) * np.exp(1j * (a + b) * x) * wv**2
    mid = np.abs(x) <= 0.5
    rel = np.linalg.norm(B[mid] - pred[mid]) / np.linalg.norm(pred[mid])
    assert rel <= 0.05


def test_bht_swap_antisymmetry():
    # t -> -t in the kernel integral flips the sign under argument swap; the
    # paired-cell quadrature realizes BH(g, f) = -BH(f, g) exactly
    f = GridFunction(bump(X, -0.3, 0.8), G)
    g = GridFunction(bump(X, 0.4, 0.6), G)
    lhs = bht(g, f).samples
    rhs = -bht(f, g).samples
    scale = np.max(np.abs(rhs))
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale


def test_bht_bilinear():
    f1 = GridFunction(bump(X, -0.5, 0.5), G)
    f2 = GridFunction(bump(X, 0.5, 0.5), G)
    g = GridFunction(bump(X, 0.0, 1.5), G)
    lhs = bht(f1 + f2, g).samples
    rhs = bht(f1, g).samples + bht(f2, g).samples
    assert np.allclose(lhs, rhs, atol=1e-12 * np.max(np.abs(lhs)))


def test_bht_truncation_validation():
    f = GridFunction(bump(X), G)
    with pytest.raises(TruncationInvalid):
        bht(f, f, t_min=0.0)
    with pytest.raises(TruncationInvalid):
        bht(f, f, t_max=100.0)
    with pytest.raises(TruncationInvalid):
        bht(f, f, t_min=1.0, t_max=0.5)


# -- truncation --------------------------------------------------------------------


def test_truncate_identity_when_large():
    f = GridFunction(bump(X) * 3, G)
    out = truncate(f, 100.0)
    assert np.array_equal(out.samples, f.samples)


def test_truncate_caps_and_restricts():
    f = GridFunction(np.abs(X), G)
    out = truncate(f, 2.0)
    assert np.max(out.samples) <= 2.0
    assert np.all(out.samples[np.abs(X) > 2.0] == 0.0)
    assert np.all(out.samples <= f.samples)


def test_truncate_monotone():
    f = GridFunction(np.abs(X) ** 1.5, G)
    a = truncate(f, 1.0).samples
    b = truncate(f, 3.0).samples
    assert np.all(a <= b)


# -- families ----------------------------------------------------------------------


def test_family_deterministic():
    spec = FamilySpec("smooth-bumps", count=4, arity=2)
    f1 = make_family(spec, 99, G)
    f2 = make_family(spec, 99, G)
    for a, b in zip(f1.members, f2.members):
        for fa, fb in zip(a, b):
            assert np.array_equal(fa.samples, fb.samples)


def test_family_unit_l2_norm():
    fam = make_family(FamilySpec("smooth-bumps", count=8, arity=2), 1, G)
    u = GridWeight.unit(G)
    for fn in fam.functions():
        assert measure_norm(fn, u, 2) == pytest.approx(1.0, rel=0.005)


def test_family_supports_inside_half_window():
    for kind in ("smooth-bumps", "modulated", "dyadic-concentration"):
        fam = make_family(FamilySpec(kind, count=6, arity=2), 5, G)
        for fn in fam.functions():
            outside = np.abs(X) > G.L / 2
            assert np.all(fn.samples[outside] == 0)


def test_dyadic_family_unit_lp_norm():
    p = Fraction(2)
    fam = make_family(FamilySpec("dyadic-concentration", count=5, arity=2, p=p), 2, G)
    u = GridWeight.unit(G)
    for fn in fam.functions():
        assert measure_norm(fn, u, p) == pytest.approx(1.0, rel=0.02)


def test_family_unknown_kind():
    with pytest.raises(UnknownSpec):
        FamilySpec("sawtooth", count=2)


def test_modulated_family_complex():
    fam = make_family(FamilySpec("modulated", count=2, arity=2), 3, G)
    assert np.iscomplexobj(fam.members[0][0].samples)
