import numpy as np
import pytest

from lambda_soliton import (
    SolitonKind,
    SolitonSpec,
    delta_lag,
    locate_imprints,
    predict_location,
    pulse_area,
    total_area,
)
from lambda_soliton.errors import (
    DegenerateSpectralParamsError,
    GridTooNarrowError,
    NoImprintFoundError,
    OverlappingImprintsError,
    UnsupportedSequenceError,
)
from lambda_soliton.observables import areas_by_slice

TWO_PI = 2 * np.pi


def t1(tau=1.0, eta12=0.0, eta13=0.0):
    return SolitonSpec.from_etas(SolitonKind.TYPE1, tau, eta12=eta12, eta13=eta13)


def t2(tau, eta23=0.0):
    return SolitonSpec.from_etas(SolitonKind.TYPE2, tau, eta23=eta23)


def t3(tau, eta13=0.0):
    return SolitonSpec.from_etas(SolitonKind.TYPE3, tau, eta13=eta13)


# ---------------------------------------------------------------------------
# areas
# ---------------------------------------------------------------------------

def test_pulse_area_sech_is_two_pi():
    t = np.linspace(-40.0, 40.0, 8001)
    omega = 2.0 / np.cosh(t) * np.exp(0.7j)   # constant phase must not matter
    assert pulse_area(omega, t) == pytest.approx(TWO_PI, abs=1e-6)


def test_pulse_area_zero_and_linearity():
    t = np.linspace(-40.0, 40.0, 8001)
    assert pulse_area(np.zeros_like(t, dtype=complex), t) == 0.0
    assert pulse_area(1.0 / np.cosh(t), t) == pytest.approx(np.pi, abs=1e-6)


def test_pulse_area_rejects_clipped_pulse():
    t = np.linspace(-3.0, 3.0, 301)
    with pytest.raises(GridTooNarrowError):
        pulse_area(2.0 / np.cosh(t), t)


def test_total_area_cases():
    assert total_area(TWO_PI, 0.0) == pytest.approx(TWO_PI)
    assert total_area(0.0, TWO_PI) == pytest.approx(TWO_PI)
    assert total_area(1.2, 3.4) == total_area(3.4, 1.2)


def test_areas_by_slice_records():
    t = np.linspace(-40.0, 40.0, 4001)
    z = np.array([0.0, 1.0])
    om13 = np.vstack([2 / np.cosh(t), 1 / np.cosh(t)]).astype(complex)
    om23 = np.zeros_like(om13)
    recs = areas_by_slice(om13, om23, t, z)
    assert recs[0].theta_tot == pytest.approx(TWO_PI, abs=1e-6)
    assert recs[1].theta_tot == pytest.approx(np.pi, abs=1e-6)
    for r in recs:
        assert r.theta_tot == pytest.approx(np.hypot(r.theta13, r.theta23))


# ---------------------------------------------------------------------------
# phase lag
# ---------------------------------------------------------------------------

def test_delta_lag_values():
    assert delta_lag(1.0, 3.0) == pytest.approx(np.log(2.0), abs=1e-12)
    assert delta_lag(1.0, np.tanh(2.5)) == pytest.approx(5.0, abs=1e-12)
    assert delta_lag(0.5, 0.5 * np.tanh(1.0)) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(DegenerateSpectralParamsError):
        delta_lag(1.0, 1.0)


# ---------------------------------------------------------------------------
# imprint detection on synthetic profiles
# ---------------------------------------------------------------------------

def synthetic_imprint(z, kappa, center_kx, phase=1.0, sign=1):
    arg = center_kx - kappa * z
    rho22 = 1.0 / np.cosh(arg) ** 2
    rho12 = sign * phase * np.tanh(arg) / np.cosh(arg)
    return rho22, rho12


def test_locate_single_imprint():
    z = np.linspace(-8.0, 8.0, 1601)
    rho22, rho12 = synthetic_imprint(z, 1.0, 1.25)
    (rep,) = locate_imprints(z, rho22, rho12, kappas=[1.0])
    assert rep.location_measured == pytest.approx(1.25, abs=1e-4)
    assert rep.rho22_peak == pytest.approx(1.0, abs=1e-6)
    assert rep.phase_sign == 1
    # FWHM of sech^2 in kappa x units: 2 * arccosh(sqrt(2))
    assert rep.width_kappa == pytest.approx(2 * np.arccosh(np.sqrt(2.0)), abs=1e-3)


def test_locate_flipped_phase():
    z = np.linspace(-8.0, 8.0, 1601)
    phase = np.exp(0.4j)
    rho22, rho12 = synthetic_imprint(z, 1.0, -0.5, phase=phase, sign=-1)
    (rep,) = locate_imprints(z, rho22, rho12, kappas=[1.0], coherence_phases=[phase])
    assert rep.phase_sign == -1


def test_locate_two_imprints_with_predictions():
    z = np.linspace(-10.0, 10.0, 2001)
    r22a, r12a = synthetic_imprint(z, 1.0, 3.0)
    r22b, r12b = synthetic_imprint(z, 0.5, -2.0, sign=-1)
    reps = locate_imprints(
        z, r22a + r22b, r12a + r12b,
        kappas=[1.0, 0.5], predictions=[3.0, -2.0],
    )
    assert len(reps) == 2
    by_soliton = {r.which_soliton: r for r in reps}
    assert by_soliton[0].location_measured == pytest.approx(3.0, abs=5e-3)
    assert by_soliton[1].location_measured == pytest.approx(-2.0, abs=5e-3)
    assert by_soliton[0].phase_sign == 1
    assert by_soliton[1].phase_sign == -1


def test_locate_rejects_flat_profile():
    z = np.linspace(-5.0, 5.0, 301)
    with pytest.raises(NoImprintFoundError):
        locate_imprints(z, np.zeros_like(z), np.zeros_like(z, dtype=complex), kappas=[1.0])


def test_locate_rejects_overlapping():
    # two local maxima two cells apart are below the resolvability floor
    z = np.linspace(-5.0, 5.0, 101)
    rho22 = np.zeros_like(z)
    rho22[48:53] = [0.7, 0.9, 0.8, 0.85, 0.6]
    with pytest.raises(OverlappingImprintsError):
        locate_imprints(z, rho22, np.zeros_like(z, dtype=complex), kappas=[1.0, 1.0])


# ---------------------------------------------------------------------------
# closed-form predictions
# ---------------------------------------------------------------------------

def test_predict_single_imprint_alone():
    p = predict_location([t1(eta12=1.7, eta13=5.0)], 0)
    assert p.location == pytest.approx(1.7)
    assert p.phase_sign == 1


def test_predict_three_step_relay():
    seq = [t1(eta12=0.0, eta13=15.0),
           t3(np.tanh(2.5), eta13=-30.0),
           t2(np.tanh(5.0), eta23=-100.0)]
    p = predict_location(seq, 0)
    assert p.location == pytest.approx(5.0, abs=1e-9)   # 0 - 5 + 10
    assert p.phase_sign == 1                            # two flips: both shorter


def test_predict_manipulator_phase_rule():
    # one shorter manipulator flips; one longer does not
    assert predict_location([t1(), t3(0.8, eta13=-5.0)], 0).phase_sign == -1
    assert predict_location([t1(), t3(1.25, eta13=-5.0)], 0).phase_sign == 1
    assert predict_location([t1(), t2(0.8), t2(0.9)], 0).phase_sign == 1
    assert predict_location([t1(), t2(0.8), t2(1.1)], 0).phase_sign == -1


def test_predict_two_imprints():
    sa = t1(tau=1.0, eta12=2.0, eta13=12.0)
    sb = SolitonSpec.from_etas(SolitonKind.TYPE1, 0.7, eta12=-3.0, eta13=-12.0)
    d = delta_lag(1.0, 0.7)
    pa = predict_location([sa, sb], 0)
    pb = predict_location([sa, sb], 1)
    assert pa.location == pytest.approx(2.0 + d)
    assert pb.location == pytest.approx(-3.0 - d)
    assert pa.phase_sign == -1   # tau_b < tau_a flips the first imprint
    assert pb.phase_sign == 1


def test_predict_two_imprints_with_control():
    sa = t1(tau=1.0, eta12=2.0, eta13=12.0)
    sb = SolitonSpec.from_etas(SolitonKind.TYPE1, 0.7, eta12=-3.0, eta13=-12.0)
    sc = t2(0.8, eta23=-55.0)
    d_ab, d_ac, d_bc = delta_lag(1, 0.7), delta_lag(1, 0.8), delta_lag(0.7, 0.8)
    pa = predict_location([sa, sb, sc], 0)
    pb = predict_location([sa, sb, sc], 1)
    assert pa.location == pytest.approx(2.0 + d_ab + d_ac)
    assert pb.location == pytest.approx(-3.0 - d_ab + d_bc)
    # control shorter than a flips a again; longer than b leaves b alone
    assert pa.phase_sign == 1
    assert pb.phase_sign == 1


def test_predict_unsupported_sequences():
    with pytest.raises(UnsupportedSequenceError):
        predict_location([t2(0.8), t3(0.9)], 0)          # nothing imprints
    with pytest.raises(UnsupportedSequenceError):
        predict_location([t1(), t3(0.8, eta13=-5.0)], 1)  # target is a manipulator
    with pytest.raises(UnsupportedSequenceError):
        # eta ordering and spatial ordering disagree (kappa_b much smaller)
        sa = t1(tau=1.0, eta12=1.0)
        sb = SolitonSpec.from_etas(SolitonKind.TYPE1, 0.2, eta12=0.9, eta13=-10.0)
        predict_location([sa, sb], 0)
    with pytest.raises(UnsupportedSequenceError):
        # near-equal-duration signal pulse drags the first imprint across the second
        sa = t1(tau=1.0, eta12=0.5, eta13=10.0)
        sb = SolitonSpec.from_etas(SolitonKind.TYPE1, 0.5, eta12=-0.25, eta13=-10.0)
        sc = t3(0.999, eta13=-30.0)
        predict_location([sa, sb, sc], 0)
    with pytest.raises(UnsupportedSequenceError):
        # two imprints support at most one manipulator
        sa = t1(tau=1.0, eta12=2.0, eta13=10.0)
        sb = SolitonSpec.from_etas(SolitonKind.TYPE1, 0.7, eta12=-3.0, eta13=-10.0)
        predict_location([sa, sb, t2(0.8), t3(0.9, eta13=-30.0)], 0)
