import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize

from spectral_mu import closed_form as cf
from spectral_mu.eigen import lambda_dirichlet, lambda_dirichlet_dense
from spectral_mu.grid import (DomainMask, GridFunction, make_disk, make_L_shape, make_rectangle,
                              make_two_disks, quotient_Q, signed_square_integral)
from spectral_mu.variational import (BALANCE_TOL, LINEAR, TWISTED, InfeasibleError, balance,
                                     characterize, lambda_twisted, mu_characterization,
                                     mu_direct, nodal_diagnostics, radial_spread)


def slsqp_twisted(mask, starts=12, seed=0):
    """Independent oracle: SLSQP on the sphere with the C^1 constraint sum |v| v = 0."""
    K = mask.stiffness.toarray()
    rng = np.random.default_rng(seed)
    best = np.inf
    cons = [dict(type="eq", fun=lambda v: v @ v - 1, jac=lambda v: 2 * v),
            dict(type="eq", fun=lambda v: np.abs(v) @ v, jac=lambda v: 2 * np.abs(v))]
    for _ in range(starts):
        v0 = rng.standard_normal(mask.n_active)
        r = minimize(lambda v: v @ K @ v, v0 / np.linalg.norm(v0), jac=lambda v: 2 * K @ v,
                     method="SLSQP", constraints=cons, options=dict(ftol=1e-14, maxiter=2000))
        if r.success:
            best = min(best, r.fun)
    return best


TINY = [make_rectangle(1, 1, 1 / 7), make_L_shape(1, 1 / 8), make_disk(1, 1 / 4),
        make_rectangle(2, 1, 1 / 5)]


@pytest.mark.parametrize("mask", TINY, ids=lambda m: f"{m.id}{m.n_active}")
def test_twisted_against_slsqp(mask):
    assert lambda_twisted(mask).value == pytest.approx(slsqp_twisted(mask), rel=1e-6)


def test_twisted_disconnected_mean_formula():
    h = 1 / 16
    m = make_two_disks(1.0, 0.7, h)
    lam1 = lambda_dirichlet_dense(make_disk(1.0, h)).value
    lam2 = lambda_dirichlet_dense(make_disk(0.7, h)).value
    assert lambda_twisted(m).value == pytest.approx(0.5 * (lam1 + lam2), rel=1e-7)


def test_twisted_equal_disks_is_dirichlet():
    m = make_two_disks(1.0, 1.0, 1 / 16)
    assert lambda_twisted(m).value == pytest.approx(lambda_dirichlet(m).value, rel=1e-8)


def test_twisted_connected_is_second_eigenvalue():
    # on the square the antisymmetric second mode is balanced
    m = make_rectangle(1, 1, 1 / 17)
    w = np.linalg.eigvalsh(m.stiffness.toarray())
    r = lambda_twisted(m)
    assert r.value == pytest.approx(w[1], rel=1e-8)
    assert r.balance_residual <= BALANCE_TOL


def test_twisted_result_fields():
    r = lambda_twisted(make_L_shape(1, 1 / 12), restarts=3, seed=5)
    assert r.restarts_used >= 3
    assert len(r.start_values) == r.restarts_used
    assert r.value == min(v for _, v, ok in r.start_values if ok)


def test_twisted_infeasible():
    with pytest.raises(InfeasibleError):
        lambda_twisted(DomainMask(np.array([[True]]), 0.5))
    with pytest.raises(ValueError):
        lambda_twisted(make_disk(1, 1 / 4), restarts=0)


def test_balance_exact():
    v = np.random.default_rng(0).standard_normal(50)
    b = balance(v)
    assert abs(np.abs(b) @ b) < 1e-14
    assert balance(np.abs(v)) is None


def test_twisted_seed_determinism():
    m = make_L_shape(1, 1 / 12)
    assert lambda_twisted(m, seed=3).value == lambda_twisted(m, seed=3).value


@pytest.mark.parametrize("mask", [make_rectangle(1, 1, 1 / 13), make_disk(1, 1 / 8),
                                  make_L_shape(1, 1 / 12), make_two_disks(1, 0.7, 1 / 8)],
                         ids=lambda m: m.id)
def test_direct_matches_characterization(mask):
    prof = characterize(mask)
    for k in (0, 0.5, 1, 2, 5, 20, 100):
        a = k * prof.gap
        c = prof.mu(a).value
        d = mu_direct(mask, a, ground=prof.dirichlet).value
        assert abs(c - d) <= max(1e-6, 1e-3 * c)


def test_alpha_zero_and_negative():
    m = make_disk(1, 1 / 10)
    lam = lambda_dirichlet(m).value
    r = mu_characterization(m, 0.0)
    assert r.value == pytest.approx(lam) and r.branch == LINEAR
    assert mu_characterization(m, -lam).value == pytest.approx(0.0, abs=1e-8 * lam)
    assert mu_direct(m, 0.0).value == pytest.approx(lam, rel=1e-9)
    with pytest.raises(ValueError):
        mu_direct(m, -1.0)


def test_equal_disks_flat():
    m = make_two_disks(1, 1, 1 / 10)
    prof = characterize(m)
    lam = prof.dirichlet.value
    for a in (0.0, 5.0, 50.0):
        assert prof.mu(a).value == pytest.approx(lam, rel=1e-8)
    d = mu_direct(m, 5.0, ground=prof.dirichlet)
    assert d.value == pytest.approx(lam, rel=1e-6)


PROFILE_MASKS = [make_rectangle(1, 1, 1 / 16), make_disk(1, 1 / 10), make_L_shape(1, 1 / 14),
                 make_two_disks(1, 0.6, 1 / 8), make_two_disks(1, 1, 1 / 8)]


@pytest.fixture(scope="module", params=PROFILE_MASKS, ids=lambda m: f"{m.id}{m.n_active}")
def profile(request):
    return characterize(request.param)


def test_twisted_above_dirichlet(profile):
    assert profile.twisted.value >= profile.dirichlet.value * (1 - 1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 500), st.floats(1e-4, 30))
def test_monotone_lipschitz(profile, a, eps):
    tol = 1e-8 * profile.twisted.value
    d = profile.mu(a + eps).value - profile.mu(a).value
    assert -2 * tol <= d <= eps + 2 * tol


def test_sandwich_on_direct(profile):
    lamD, lamT = profile.dirichlet.value, profile.twisted.value
    tol = 1e-6 * lamT
    for k in (0.3, 1.0, 4.0):
        a = k * max(profile.gap, 1.0)
        v = mu_direct(profile.mask, a, ground=profile.dirichlet).value
        assert lamD - tol <= v <= min(lamT, lamD + a) + tol


def test_limit_large_alpha(profile):
    lamT = profile.twisted.value
    assert profile.mu(10 * lamT).value == pytest.approx(lamT, rel=1e-2)


def test_branches_and_minimizers(profile):
    gap = profile.gap
    lin = profile.mu(0.5 * gap) if gap > 1e-8 else profile.mu(0.0)
    assert lin.branch == LINEAR
    assert signed_square_integral(lin.minimizer) > 0
    tw = profile.mu(2 * gap + 1.0)
    if gap > 1e-6 * profile.dirichlet.value:
        assert tw.branch == TWISTED
        assert tw.balance_residual <= 1e-8
    assert quotient_Q(tw.minimizer, tw.alpha) == pytest.approx(tw.value, rel=1e-7)


def test_switch_point(profile):
    gap = profile.gap
    if gap < 1e-6:
        return
    alphas = np.linspace(0, 2.05 * gap, 41)  # keep the tie point off the grid
    step = alphas[1] - alphas[0]
    first = next(a for a in alphas if profile.mu(a).branch == TWISTED)
    assert abs(first - gap) <= step


def test_scaling_law_exact_discrete():
    # the same occupancy at spacing t h represents t Omega
    m = make_L_shape(1, 1 / 12)
    t = 2.0
    big = DomainMask(m.active, t * m.h)
    pa, pb = characterize(m), characterize(big)
    for a in (0.0, 3.0, 50.0, 400.0):
        lhs = pb.mu(a).value
        rhs = cf.scaling_transport(pa.mu(cf.alpha_transport(a, t)).value, t)
        assert lhs == pytest.approx(rhs, rel=1e-7)


def test_scaling_law_refined():
    h = 1 / 32
    small = make_disk(0.5, h)
    big = make_disk(1.0, h)  # t = 2, resolved on twice as many cells per radius
    ps, pb = characterize(small), characterize(big)
    for a in (0.0, 2.0, 10.0, 40.0):
        lhs = pb.mu(a).value
        rhs = cf.scaling_transport(ps.mu(cf.alpha_transport(a, 2.0)).value, 2.0)
        assert lhs == pytest.approx(rhs, rel=0.04)


def test_nodal_diagnostics_equal_disks():
    m = make_two_disks(1, 1, 1 / 12)
    prof = characterize(m)
    rep = nodal_diagnostics(prof.twisted, m, prof.dirichlet.value)
    assert rep.mass_residual <= 1e-3
    assert rep.mean_residual <= 2e-2
    assert rep.alpha_reconstructed == pytest.approx(0.0, abs=1e-6 * prof.twisted.value)


def test_nodal_diagnostics_linear_branch():
    m = make_L_shape(1, 1 / 16)
    prof = characterize(m)
    r = prof.mu(0.25 * prof.gap)
    rep = nodal_diagnostics(r, m, prof.dirichlet.value)
    assert rep.minus_empty
    assert rep.mean_residual is None and rep.notes
    assert rep.equality_residual <= 2e-2


def test_radial_spread_on_disk():
    g = lambda_dirichlet(make_disk(1, 1 / 24)).eigenfunction
    assert radial_spread(g) < 0.2
