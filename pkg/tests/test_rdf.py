import numpy as np
import pytest
from fractions import Fraction

from corpus import case1_scenarios
from extrapkit.errors import CertificationFailed, DomainError, NormBoundTooSmall
from extrapkit.exponents import Exponent
from extrapkit.extrapolation import ExtrapolationRange, proof_exponents
from extrapkit.grid import Grid
from extrapkit.gridfn import FamilySpec, GridFunction, make_family, maximal, measure_norm
from extrapkit.rdf import (
    IterationConfig,
    build_proof_objects,
    estimate_maximal_norm,
    rdf_iterate,
    verify_case1_weight,
)
from extrapkit.weights import GridWeight, PowerWeight

GRID = Grid(4.0, 2**10)


def _pair(seed=42, grid=GRID):
    fam = make_family(FamilySpec("smooth-bumps", count=1, arity=2), seed, grid)
    return fam.members[0][0].abs(), fam.members[0][1].abs()


# -- iteration ---------------------------------------------------------------


def test_iterate_constant_closed_form():
    c = GridFunction(np.full(GRID.N, 2.5), GRID)
    nb = 2.0
    res = rdf_iterate(c, IterationConfig(nb, GridWeight.unit(GRID), 2, terms=24))
    expected = 2.5 * sum((2 * nb) ** -k for k in range(24))
    assert np.allclose(res.function.samples, expected, rtol=1e-12)
    assert res.a1_ratio == pytest.approx(1.0, abs=1e-9)


def test_iterate_majorizes_input_exactly():
    f, _ = _pair()
    res = rdf_iterate(f, IterationConfig(4.0, GridWeight.unit(GRID), 2))
    assert np.all(res.function.samples >= f.samples)


def test_iterate_norm_doubling_bound():
    f, _ = _pair(7)
    w = PowerWeight(Fraction(1, 8)).on_grid(GRID)
    nb = estimate_maximal_norm(2, w, [f])
    res = rdf_iterate(f, IterationConfig(nb, w, 2))
    assert res.output_norm <= 2.0 * res.input_norm * 1.01


def test_iterate_truncation_control():
    # || R_K G - R_{K+1} G || is the K-th term, bounded by 2^-K ||G||
    f, _ = _pair(9)
    w = GridWeight.unit(GRID)
    nb = estimate_maximal_norm(2, w, [f])
    for K in (8, 12):
        a = rdf_iterate(f, IterationConfig(nb, w, 2, terms=K))
        b = rdf_iterate(f, IterationConfig(nb, w, 2, terms=K + 1))
        diff = GridFunction(b.function.samples - a.function.samples, GRID)
        assert measure_norm(diff, w, 2) <= 2.0**-K * a.input_norm * 1.01


def test_iterate_a1_ratio_bound():
    f, _ = _pair(13)
    w = GridWeight.unit(GRID)
    nb = estimate_maximal_norm(2, w, [f])
    res = rdf_iterate(f, IterationConfig(nb, w, 2))
    assert res.a1_ratio <= 2.0 * nb * 1.05


def test_iterate_rejects_small_norm_bound():
    f, _ = _pair(21)
    with pytest.raises(NormBoundTooSmall):
        rdf_iterate(f, IterationConfig(1.0, GridWeight.unit(GRID), 2, terms=16))


def test_iterate_rejects_negative_input():
    f = GridFunction(-np.ones(GRID.N), GRID)
    with pytest.raises(DomainError):
        rdf_iterate(f, IterationConfig(2.0, GridWeight.unit(GRID), 2))


# -- norm estimation -----------------------------------------------------------


def test_estimate_constant_probe_ratio_one():
    w = GridWeight.unit(GRID)
    assert estimate_maximal_norm(2, w, []) == pytest.approx(2.0, rel=1e-9)


def test_estimate_monotone_in_probes():
    w = PowerWeight(Fraction(1, 4)).on_grid(GRID)
    f, g = _pair(3)
    a = estimate_maximal_norm(2, w, [f])
    b = estimate_maximal_norm(2, w, [f, g])
    assert b >= a


def test_estimate_stable_under_refinement():
    vals = []
    for n in (2**10, 2**11):
        grid = Grid(4.0, n)
        w = PowerWeight(Fraction(1, 4)).on_grid(grid)
        f, g = _pair(3, grid)
        vals.append(estimate_maximal_norm(2, w, [f, g]))
    assert abs(vals[1] / vals[0] - 1) < 0.10


# -- proof objects ---------------------------------------------------------------


def test_proof_objects_unit_weight_diagonal():
    rng = ExtrapolationRange(1, "inf", 2, 2)
    pe = proof_exponents(rng, 3)
    f, g = _pair(42)
    po = build_proof_objects(f, g, GridWeight.unit(GRID), pe, rng, 3)
    assert all(v["ok"] for v in po.certificates.values())
    assert po.C1 == 2.0 ** float(1 + 1 / pe.delta)
    assert po.C2 == 2.0 ** float(1 / pe.beta.frac)
    # h1 norm display: <= 2
    assert po.certificates["h1-norm"]["value"] <= 2.0 * 1.01
    # mu definitions: mu1 = R1(h1^delta w^eps) etc., replayed majorants
    assert np.all(po.h1.samples <= po.H1.samples * (1 + 1e-9))
    assert np.all(po.h2.samples <= po.H2.samples * (1 + 1e-9))


def test_proof_objects_scale_invariance_in_f():
    rng = ExtrapolationRange(1, "inf", 2, 2)
    pe = proof_exponents(rng, 3)
    f, g = _pair(17)
    w = GridWeight.unit(GRID)
    po1 = build_proof_objects(f, g, w, pe, rng, 3)
    po2 = build_proof_objects(f * 10.0, g, w, pe, rng, 3)
    # h1 is normalized, so H1 is scale-invariant up to roundoff
    assert np.allclose(po1.H1.samples, po2.H1.samples, rtol=1e-9)


def test_proof_objects_power_weight_certificates():
    rng = ExtrapolationRange(1, "inf", 2, 2)
    pe = proof_exponents(rng, 3)
    f, g = _pair(42)
    w = PowerWeight(Fraction(1, 8)).on_grid(GRID)
    po = build_proof_objects(f, g, w, pe, rng, 3)
    assert all(v["ok"] for v in po.certificates.values())
    rep = verify_case1_weight(po, pe, rng, 3, w)
    assert rep["W_q0_bitwise"]
    assert np.isfinite(rep["W_p0_ap_const"]) and np.isfinite(rep["W_p0_rh_const"])


def test_verify_unit_weight_constants_near_one():
    # with w = 1 and f = g the construction is nearly flat, so the W^{p0}
    # class constants stay close to 1
    rng = ExtrapolationRange(1, "inf", 2, 2)
    pe = proof_exponents(rng, 2)  # diagonal: q = p = 2
    f, _ = _pair(4)
    po = build_proof_objects(f, f, GridWeight.unit(GRID), pe, rng, 2)
    rep = verify_case1_weight(po, pe, rng, 2, GridWeight.unit(GRID), depth=4)
    assert rep["W_p0_ap_const"] < 50
    assert rep["W_p0_rh_const"] < 10


def test_proof_objects_case_guard():
    rng = ExtrapolationRange(1, 8, 1, Fraction(9, 8))  # Case II
    pe = proof_exponents(rng, 2)
    f, g = _pair(1)
    with pytest.raises(DomainError):
        build_proof_objects(f, g, GridWeight.unit(GRID), pe, rng, 2)


def test_seeded_scenarios_certify():
    # a slice of the acceptance corpus, kept small here
    for i, (rng, p, pe) in enumerate(case1_scenarios(1000, 5)):
        grid = Grid(4.0, 2**9)
        fam = make_family(FamilySpec("smooth-bumps", count=1, arity=2), 100 + i, grid)
        f, g = fam.members[0][0].abs(), fam.members[0][1].abs()
        w = PowerWeight(Fraction(1, 8)).on_grid(grid) if i % 2 else GridWeight.unit(grid)
        po = build_proof_objects(f, g, w, pe, rng, p)
        assert all(v["ok"] for v in po.certificates.values())
