import numpy as np
import pytest

from lambda_soliton import (
    OrderedSolution,
    SolitonKind,
    SolitonSpec,
    delta_lag,
    state_second,
    superpose_involutions,
    superpose_third,
)
from lambda_soliton.algebra import (
    hermiticity_defect,
    involution_defect,
    projector_from_vector,
    purity_defect,
    trace_defect,
)
from lambda_soliton.darboux import involution_first, phi_vector
from lambda_soliton.errors import DegenerateSpectralParamsError
from lambda_soliton.observables import total_area

LOOSE = 1e-10
TWO_PI = 2 * np.pi


def t1(tau=1.0, eta12=0.0, eta13=0.0):
    return SolitonSpec.from_etas(SolitonKind.TYPE1, tau, eta12=eta12, eta13=eta13)


def t2(tau, eta23=0.0):
    return SolitonSpec.from_etas(SolitonKind.TYPE2, tau, eta23=eta23)


def t3(tau, eta13=0.0):
    return SolitonSpec.from_etas(SolitonKind.TYPE3, tau, eta13=eta13)


def random_spec(rng) -> SolitonSpec:
    kind = rng.choice(list(SolitonKind))
    tau = float(rng.uniform(0.3, 1.8))
    etas = rng.uniform(-2.5, 2.5, size=3)
    phases = tuple(np.exp(1j * rng.uniform(0, TWO_PI, size=3)))
    if kind is SolitonKind.TYPE1:
        return SolitonSpec.from_etas(kind, tau, eta12=etas[0], eta13=etas[1], phases=phases)
    if kind is SolitonKind.TYPE2:
        return SolitonSpec.from_etas(kind, tau, eta23=etas[2], phases=phases)
    return SolitonSpec.from_etas(kind, tau, eta13=etas[1], phases=phases)


def sample_grid(n=20):
    t = np.linspace(-25.0, 25.0, n)[None, :]
    z = np.linspace(-8.0, 12.0, n)[:, None]
    return t, z


# ---------------------------------------------------------------------------
# the superposition rule itself
# ---------------------------------------------------------------------------

def test_identical_involutions_collapse(sys_params):
    spec = t1(eta13=1.0)
    t, z = sample_grid(8)
    m = involution_first(spec, sys_params, t, z)
    out = superpose_involutions(1j / 1.0, m, 1j / 0.5, m)
    assert np.abs(out - m).max() < 1e-12


def test_superposed_is_hermitian_involution(sys_params, rng):
    t, z = sample_grid(12)
    for _ in range(8):
        sa, sb = random_spec(rng), random_spec(rng)
        if abs(sa.tau - sb.tau) < 1e-3:
            continue
        m_a = involution_first(sa, sys_params, t, z)
        m_b = involution_first(sb, sys_params, t, z)
        m_ab = superpose_involutions(sa.lam, m_a, sb.lam, m_b)
        assert involution_defect(m_ab) < LOOSE
        assert hermiticity_defect(m_ab) < LOOSE


def test_composition_identity_and_path_exchange(sys_params, rng):
    """Swapping the path gives M^ba = M^ab M^a M^b, so the cumulative
    transforms agree; the step involutions themselves differ by O(1)."""
    t, z = sample_grid(14)
    sa, sb = t1(eta13=0.6), t3(0.62, eta13=-0.4)
    m_a = involution_first(sa, sys_params, t, z)
    m_b = involution_first(sb, sys_params, t, z)
    m_ab = superpose_involutions(sa.lam, m_a, sb.lam, m_b)
    m_ba = superpose_involutions(sb.lam, m_b, sa.lam, m_a)
    assert np.abs(m_ba - m_ab @ m_a @ m_b).max() < 1e-12
    assert np.abs(m_ab @ m_a - m_ba @ m_b).max() < 1e-12
    assert np.abs(m_ab - m_ba).max() > 0.1  # genuinely path-dependent objects


def test_superposed_matches_dressed_eigenfunction(sys_params, rng):
    """Independent route: the second-step projector is built from the first
    Darboux matrix applied to the partner eigenfunction at its own spectral
    point, (lambda_a M^a - lambda_b) |phi_b>."""
    t, z = sample_grid(10)
    for _ in range(4):
        sa, sb = random_spec(rng), random_spec(rng)
        if abs(sa.tau - sb.tau) < 1e-3:
            continue
        m_a = involution_first(sa, sys_params, t, z)
        m_b = involution_first(sb, sys_params, t, z)
        m_ab = superpose_involutions(sa.lam, m_a, sb.lam, m_b)
        psi = (sa.lam * m_a - sb.lam * np.eye(3)) @ phi_vector(
            sb, sys_params, t, z
        )[..., :, None]
        m_eig = 2 * projector_from_vector(psi[..., 0]) - np.eye(3)
        assert np.abs(m_ab - m_eig).max() < 1e-10


def test_degenerate_durations_rejected(sys_params):
    t, z = sample_grid(6)
    m = involution_first(t1(), sys_params, t, z)
    with pytest.raises(DegenerateSpectralParamsError):
        superpose_involutions(1j, m, 1j * (1 + 1e-12), m)
    with pytest.raises(DegenerateSpectralParamsError):
        OrderedSolution((t1(), t3(1.0 + 1e-12)))
    with pytest.raises(DegenerateSpectralParamsError):
        delta_lag(1.0, 1.0)


def test_third_order_rule_is_involution(sys_params, rng):
    t, z = sample_grid(10)
    sa, sb, sc = t1(eta13=1.0), t3(0.8, eta13=-1.0), t2(0.55, eta23=-2.0)
    m_a = involution_first(sa, sys_params, t, z)
    m_b = involution_first(sb, sys_params, t, z)
    m_c = involution_first(sc, sys_params, t, z)
    m_ab = superpose_involutions(sa.lam, m_a, sb.lam, m_b)
    m_ac = superpose_involutions(sa.lam, m_a, sc.lam, m_c)
    m_abc = superpose_third(sb.lam, m_ab, sc.lam, m_ac)
    assert involution_defect(m_abc) < LOOSE
    assert hermiticity_defect(m_abc) < LOOSE
    # collapse when the two second-order inputs coincide
    assert np.abs(superpose_third(sb.lam, m_ab, sc.lam, m_ab) - m_ab).max() < 1e-12


# ---------------------------------------------------------------------------
# dressed states
# ---------------------------------------------------------------------------

def test_state_invariants_all_orders(sys_params):
    t, z = sample_grid(16)
    trains = [
        (t1(eta13=2.0),),
        (t1(eta13=2.0), t3(0.9, eta13=-2.0)),
        (t1(eta13=2.0), t3(0.9, eta13=-2.0), t2(0.7, eta23=-6.0)),
    ]
    for specs in trains:
        st = OrderedSolution(specs, sys_params).state(t, z)
        assert hermiticity_defect(st.rho) < LOOSE
        assert trace_defect(st.rho) < LOOSE
        assert purity_defect(st.rho) < LOOSE
        assert hermiticity_defect(st.h) < LOOSE
        for idx in ((0, 0), (1, 1), (2, 2), (0, 1)):
            assert np.abs(st.h[(...,) + idx]).max() < LOOSE


def test_state_permutability_second_order(sys_params):
    t, z = sample_grid(18)
    sa, sb = t1(eta12=0.5, eta13=1.5), t3(0.75, eta13=-1.5)
    fwd = state_second(sa, sb, sys_params, t, z)
    rev = state_second(sb, sa, sys_params, t, z)
    assert np.abs(fwd.rho - rev.rho).max() < LOOSE
    assert np.abs(fwd.h - rev.h).max() < LOOSE


def test_state_permutability_third_order(sys_params):
    t, z = sample_grid(12)
    sa, sb, sc = t1(eta13=1.0), t3(0.8, eta13=-1.0), t2(0.55, eta23=-3.0)
    orderings = [(sa, sb, sc), (sb, sa, sc), (sc, sb, sa)]
    states = [OrderedSolution(o, sys_params).state(t, z) for o in orderings]
    for other in states[1:]:
        assert np.abs(states[0].rho - other.rho).max() < LOOSE
        assert np.abs(states[0].h - other.h).max() < LOOSE


def test_backward_transfer_imprint(sys_params):
    """A signal-only pulse drags a stored imprint backward by delta and flips
    the coherence phase iff it is shorter than the imprinting pulse."""
    z = np.linspace(-9.0, 6.0, 1501)
    t_late = 90.0
    for tau_b in (np.tanh(1.25), 1.0 / np.tanh(1.25)):
        sa = t1(eta12=0.0, eta13=10.0)
        sb = t3(tau_b, eta13=-10.0)
        d = delta_lag(sa.tau, tau_b)
        st = state_second(sa, sb, sys_params, np.full(z.shape, t_late), z)
        arg = -sys_params.kappa(sa.tau) * z + sa.eta12 - d
        flip = np.sign(sa.tau - tau_b)
        assert np.abs(st.rho[..., 0, 0].real - np.tanh(arg) ** 2).max() < 1e-8
        assert np.abs(st.rho[..., 1, 1].real - np.cosh(arg) ** -2).max() < 1e-8
        expected_12 = -flip * np.tanh(arg) / np.cosh(arg)
        assert np.abs(st.rho[..., 0, 1] - expected_12).max() < 1e-8


def test_two_imprint_late_time_pattern(sys_params):
    """Both stored imprints repel by sigma*delta in their own kappa units."""
    sa = t1(eta12=2.0, eta13=12.0)
    sb = SolitonSpec.from_etas(SolitonKind.TYPE1, 0.7, eta12=-3.0, eta13=-12.0)
    d = delta_lag(1.0, 0.7)
    z = np.linspace(-10.0, 15.0, 3001)
    st = state_second(sa, sb, sys_params, np.full(z.shape, 70.0), z)
    rho22 = st.rho[..., 1, 1].real
    za = (sa.eta12 + d) / sa.kappa(sys_params)
    zb = (sb.eta12 - d) / sb.kappa(sys_params)
    for z0, kap in ((za, sa.kappa(sys_params)), (zb, sb.kappa(sys_params))):
        i = np.argmin(np.abs(z - z0))
        window = rho22[max(i - 40, 0): i + 40]
        assert window.max() > 0.99
        zpk = z[max(i - 40, 0) + np.argmax(window)]
        assert abs(zpk - z0) * kap < 2e-2


def test_asymptotic_decoupling(sys_params):
    """Excited state empty before and after all pulses have passed."""
    specs = (t1(eta13=8.0), t3(0.8, eta13=-8.0))
    z = np.linspace(-10.0, 15.0, 301)
    for t_probe in (-60.0, 90.0):
        st = OrderedSolution(specs, sys_params).state(np.full(z.shape, t_probe), z)
        assert np.abs(st.rho[..., 2, 2]).max() < 1e-12


def test_windowed_total_area_per_soliton(sys_params):
    """Away from collisions, each pulse carries theta_tot = 2*pi within its
    own time window (windows need ~20 tau of clearance for the tail gate)."""
    sa, sb = t1(eta12=0.0, eta13=25.0), t3(np.tanh(0.75), eta13=-25.0)
    sol = OrderedSolution((sa, sb), sys_params)
    d = delta_lag(sa.tau, sb.tau)
    ka, kb = sa.kappa(sys_params), sb.kappa(sys_params)
    for z0 in (-6.0, 6.0):   # collision happens near z ~ 0
        c_signal = sa.tau * (ka * z0 - sa.eta13) - d * sa.tau
        c_control = -sa.tau * sa.eta23 + d * sa.tau
        c_b = sb.tau * (kb * z0 - sb.eta13) + d * sb.tau

        # plain quadrature: the relative tail gate of pulse_area would trip
        # on the exponentially weak (but legitimate) control component
        t_a = np.linspace(min(c_signal, c_control) - 20.0,
                          max(c_signal, c_control) + 20.0, 12001)
        om13, om23 = sol.fields(t_a, z0)
        tot_a = total_area(np.trapezoid(np.abs(om13), t_a),
                           np.trapezoid(np.abs(om23), t_a))
        assert abs(tot_a - TWO_PI) < 1e-6

        t_b = np.linspace(c_b - 20.0 * sb.tau, c_b + 20.0 * sb.tau, 12001)
        om13, om23 = sol.fields(t_b, z0)
        tot_b = total_area(np.trapezoid(np.abs(om13), t_b),
                           np.trapezoid(np.abs(om23), t_b))
        assert abs(tot_b - TWO_PI) < 1e-6


def test_h_form_variants_disagree_and_only_chain_solves(sys_params):
    """The quadratic-prefactor Hamiltonian differs by O(1) and violates the
    field equation; the compositional chain satisfies it."""
    sa, sb = t1(eta13=1.0), t3(0.62, eta13=-0.5)
    chain = OrderedSolution((sa, sb), sys_params, h_form="chain")
    quad = OrderedSolution((sa, sb), sys_params, h_form="lambda-squared")
    t0, z0, h = 0.7, -0.3, 1e-5
    disc = np.abs(
        chain.state(t0, z0).h - quad.state(t0, z0).h
    ).max()
    assert disc > 1e-2

    w = np.diag([0, 0, 1j])
    for sol, should_solve in ((chain, True), (quad, False)):
        hp = sol.state(t0, z0 + h).h
        hm = sol.state(t0, z0 - h).h
        rho = sol.state(t0, z0).rho
        resid = np.abs((hp - hm) / (2 * h) + sys_params.mu / 2 * (w @ rho - rho @ w)).max()
        assert (resid < 1e-6) == should_solve
