import numpy as np
import pytest

from qspectra.cohomology import (ToleranceConfig, classify_complex_family, classify_point,
                                 cohomology_dims, left_spectrum_bound_check)
from qspectra.errors import BadParameter, Inconclusive
from qspectra.koszul import KoszulComplex, build_K, build_R
from qspectra.operators import Truncation

from conftest import X, Y, nilpotent_pair

CHEAP = ToleranceConfig.with_sizes([60, 120])


def test_zero_complex_on_c1(zero_pair):
    r = cohomology_dims(build_K(zero_pair, X(0.0)))
    assert r.dims == (1, 2, 1) and r.rank_d0 == 0 and r.rank_d1 == 0


def test_full_rank_scalar_blocks(zero_pair):
    r = cohomology_dims(build_K(zero_pair, X(1.0)))
    assert r.dims == (0, 0, 0)
    assert r.closed_range_d0 and r.closed_range_d1


def test_nilpotent_R_complex_mu_one():
    r = cohomology_dims(build_R(nilpotent_pair(exact=False), 1.0))
    # im(1 - S) + im(T) = span{e1}: h2 = 1, and the Euler characteristic forces h1 = 1
    assert r.h2 == 1 and r.h0 == 0 and r.h1 == 1


@pytest.mark.parametrize("gamma", [X(0.0), X(1.5), X(0.4j), Y(1.0), Y(0.3)])
def test_rank_nullity_and_euler(model, gamma):
    cx = build_K(model, gamma, Truncation.square(40))
    r = cohomology_dims(cx)
    n = 40
    assert r.h0 == n - r.rank_d0 and r.h2 == n - r.rank_d1
    assert r.h1 == 2 * n - r.rank_d0 - r.rank_d1
    assert r.euler == 0


def test_tall_truncation_euler(model):
    r = cohomology_dims(build_K(model, X(1.5), Truncation.tall(40)))
    assert r.euler == 40 - 41 and r.interior == (0, 1, 0)


def test_boundary_flag_on_near_threshold_singular_value():
    cfg = ToleranceConfig()
    # threshold is 1e-9 * 1 * 4; 2e-8 sits inside the tenfold boundary band
    d1 = np.zeros((2, 4))
    d1[0, 0], d1[1, 1] = 1.0, 2e-8
    cx = KoszulComplex(np.zeros((4, 2)), d1, "K", X(0), Truncation.square(2), False, False)
    r = cohomology_dims(cx, cfg)
    assert r.boundary and r.rank_d1 == 1 and r.h2 == 1


def test_model_origin_resolvent(model):
    c = classify_point(model, X(0.0), CHEAP)
    assert not c.in_sigma and all(h == (0, 0, 0) for h in c.history)


def test_model_annulus_h1(model):
    c = classify_point(model, X(1.5), CHEAP)
    assert c.in_sigma and c.dims == (0, 1, 0) and not c.in_sigma_e
    assert c.in_sigma_l_or_r


def test_model_mu_one_fredholm(model):
    c = classify_point(model, Y(1.0), CHEAP)
    assert c.in_sigma and c.dims == (0, 1, 1) and c.fredholm and not c.in_sigma_e


def test_model_essential_circles(model):
    for lam in (1.0, 2.0, -1j, 2j):
        c = classify_point(model, X(lam), CHEAP)
        assert c.in_sigma_e and c.in_sigma and "essential-rule" in c.flags


@pytest.mark.parametrize("gamma", [X(0.0), X(1.5), X(2.0), X(1.0), X(2.5), Y(1.0), Y(0.5), Y(0.0)])
def test_slodkowski_chains(model, gamma):
    c = classify_point(model, gamma, CHEAP)
    pi, de = c.in_sigma_pi, c.in_sigma_delta
    assert pi[0] <= pi[1] <= pi[2] == c.in_sigma
    assert c.in_sigma == de[0] and de[0] >= de[1] >= de[2]
    assert c.in_sigma == any(c.sigma_sets)


def test_model_axis_y_slodkowski(model):
    c = classify_point(model, Y(1.0), CHEAP)
    assert c.in_sigma_pi == (False, True, True)
    assert c.in_sigma_delta == (True, True, True)


def test_finite_pair_classification():
    pair = nilpotent_pair(exact=False)
    assert classify_point(pair, Y(1.0)).in_sigma
    assert not classify_point(pair, Y(3.0)).in_sigma
    assert not classify_point(pair, X(0.0)).in_sigma


def _fake(dims_by_size):
    def build(t):
        h = dims_by_size[t.cols]
        # h1 = h0 + h2 here, so only h0 and h2 need to be placed
        n0, n1, n2 = 5, 10, 5
        d0 = np.zeros((n1, n0))
        d1 = np.zeros((n2, n1))
        r0 = n0 - h[0]
        r1 = n2 - h[2]
        d0[:r0, :r0] = np.eye(r0)
        d1[:r1, r0:r0 + r1] = np.eye(r1)
        return KoszulComplex(d0, d1, "K", X(0.0), Truncation.square(5), False, False)
    return build


def test_oscillating_defect_is_inconclusive(model):
    cfg = ToleranceConfig.with_sizes([10, 20, 30])
    build = _fake({10: (0, 0, 0), 20: (1, 1, 0), 30: (0, 0, 0)})
    with pytest.raises(Inconclusive) as info:
        classify_complex_family(model, X(0.0), build, cfg)
    c = info.value.classification
    assert "inconclusive" in c.flags and c.in_sigma and c.dims[0] == 1


def test_config_validation_and_json():
    with pytest.raises(BadParameter):
        ToleranceConfig(rank_rel_tol=0)
    with pytest.raises(BadParameter):
        ToleranceConfig.with_sizes([200, 100])
    cfg = ToleranceConfig.with_sizes([30, 60], fredholm_dim_cap=2)
    assert ToleranceConfig.from_json(cfg.to_json()) == cfg


def test_left_spectrum_bound(model, zero_pair):
    rep = left_spectrum_bound_check(model, [3.0, 2.6j, 1.5, 0.0], CHEAP)
    assert rep.ok and 3.0 in rep.checked and 1.5 in rep.skipped
    nil = nilpotent_pair(exact=False)
    rep = left_spectrum_bound_check(nil, [0.5, 1 + 1j, -2, 3j, 0.7])
    assert rep.ok and len(rep.checked) == 5
    rep = left_spectrum_bound_check(zero_pair, [1.0])
    assert rep.ok and rep.checked == (1.0,)
