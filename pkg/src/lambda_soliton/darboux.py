"""First-order soliton solutions of the three-level Maxwell-Bloch system.

A single dressing step applied to the quiescent medium (all population in
ground state |1>, no fields) is generated by the eigenfunction

    |phi> = (a1 exp(-mu tau Z / 2),  a2,  a3 exp(-T / tau))

of the associated linear problem at spectral parameter lambda = i/tau, where
T = t - x/c and Z = x are traveling-wave coordinates.  The hermitian unitary
involution M = 2P - I built from the projector P onto |phi> updates the seed:

    rho = M rho0 M,        H = H0 - i hbar lambda [M, W],

with W = i|3><3|.  Rabi frequencies follow the convention H_31 = -(hbar/2)
Omega_13, i.e. Omega_13 = -2 H_31 / hbar and likewise for the 2-3 transition.

The integration constants classify three soliton types:

* type 1 (all a_k nonzero): matched signal + control pair that deposits a
  stationary imprint in the ground-state elements rho_11, rho_22, rho_12;
* type 2 (a1 = 0): control-only 2*pi pulse fully decoupled from the medium;
* type 3 (a2 = 0): signal-only self-induced-transparency sech pulse.

Zero common detuning is assumed throughout the analytic layer.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    HBAR,
    RHO_SEED,
    TOL,
    ArrayC,
    SystemParams,
    W_MATRIX,
    commutator,
    involution_from_projector,
    projector_from_vector,
)
from .errors import RegimeMismatchError


class SolitonKind(enum.Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"
    TYPE3 = "type3"


class Regime(enum.Enum):
    """Validity regime of the closed-form involution elements."""

    EARLY_TIME = "early"   # T/tau << -1 (general soliton only)
    LATE_TIME = "late"     # T/tau >> +1 (general soliton only)
    ALL_TIMES = "all"      # degenerate types 2 and 3: exact everywhere


@dataclass(frozen=True)
class SolitonSpec:
    """One dressing step: soliton type, duration tau, integration constants.

    Amplitudes are rescaled so max|a_k| = 1 on construction (the projector is
    scale invariant).  Components the declared kind requires to vanish are
    snapped to exactly zero when below the classification floor and rejected
    when above it; the others may be arbitrarily small but not zero.
    """

    kind: SolitonKind
    tau: float
    a1: complex
    a2: complex
    a3: complex

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"duration tau must be positive, got {self.tau}")
        amps = np.array([self.a1, self.a2, self.a3], dtype=complex)
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("integration constants must be finite")
        peak = np.abs(amps).max()
        if peak == 0:
            raise ValueError("all integration constants are zero")
        amps = amps / peak
        # The declared kind decides which components must vanish.  Those are
        # snapped to exactly zero below the floor (eta_jk diverges as an
        # amplitude vanishes, so near-zeros there are classification noise);
        # components the kind requires to be nonzero are kept at any positive
        # magnitude, since arrival-time offsets of order 100 legitimately
        # produce ratios like exp(-100).
        must_vanish = {
            SolitonKind.TYPE1: (False, False, False),
            SolitonKind.TYPE2: (True, False, False),
            SolitonKind.TYPE3: (False, True, False),
        }[self.kind]
        for k, vanish in enumerate(must_vanish):
            mag = abs(amps[k])
            if vanish:
                if mag >= TOL.zero_amplitude:
                    raise ValueError(
                        f"a{k + 1} = {amps[k]:.3e} must be zero for {self.kind.value}"
                    )
                amps[k] = 0.0
            elif mag == 0:
                raise ValueError(f"a{k + 1} must be nonzero for {self.kind.value}")
        object.__setattr__(self, "a1", complex(amps[0]))
        object.__setattr__(self, "a2", complex(amps[1]))
        object.__setattr__(self, "a3", complex(amps[2]))

    @classmethod
    def from_etas(
        cls,
        kind: SolitonKind,
        tau: float,
        *,
        eta12: float = 0.0,
        eta13: float = 0.0,
        eta23: float = 0.0,
        phases: tuple[complex, complex, complex] = (1.0, 1.0, 1.0),
    ) -> "SolitonSpec":
        """Build a spec from location parameters eta_jk = ln|a_j/a_k|.

        type 1 uses (eta12, eta13); type 2 uses eta23; type 3 uses eta13.
        ``phases`` are unit factors multiplying each amplitude.
        """
        p = [z / abs(z) for z in phases]
        if kind is SolitonKind.TYPE1:
            a = (p[0], p[1] * math.exp(-eta12), p[2] * math.exp(-eta13))
        elif kind is SolitonKind.TYPE2:
            a = (0.0, p[1], p[2] * math.exp(-eta23))
        else:
            a = (p[0], 0.0, p[2] * math.exp(-eta13))
        return cls(kind, tau, *a)

    # -- derived spectral/location parameters ------------------------------

    @property
    def amplitudes(self) -> ArrayC:
        return np.array([self.a1, self.a2, self.a3], dtype=complex)

    @property
    def lam(self) -> complex:
        """Spectral parameter, purely imaginary: i/tau."""
        return 1j / self.tau

    def kappa(self, sys: SystemParams) -> float:
        """Absorption coefficient mu*tau/2 of this soliton."""
        return sys.kappa(self.tau)

    def eta(self, j: int, k: int) -> float:
        """Location parameter ln|a_j / a_k| (1-based indices)."""
        aj, ak = self.amplitudes[j - 1], self.amplitudes[k - 1]
        if aj == 0 or ak == 0:
            raise ValueError(f"eta_{j}{k} undefined: a_{j} or a_{k} is zero")
        return math.log(abs(aj) / abs(ak))

    def phase(self, j: int, k: int) -> complex:
        """Unit phase factor a_j a_k* / |a_j a_k| (1-based indices)."""
        aj, ak = self.amplitudes[j - 1], self.amplitudes[k - 1]
        if aj == 0 or ak == 0:
            raise ValueError(f"phase_{j}{k} undefined: a_{j} or a_{k} is zero")
        return aj * np.conj(ak) / abs(aj * ak)

    @property
    def eta12(self) -> float:
        return self.eta(1, 2)

    @property
    def eta13(self) -> float:
        return self.eta(1, 3)

    @property
    def eta23(self) -> float:
        return self.eta(2, 3)


@dataclass
class SolutionState:
    """Density matrix, Hamiltonian and the Rabi fields they imply.

    Arrays broadcast over the evaluation grid: rho and h are (..., 3, 3),
    omega13/omega23 are (...,).
    """

    rho: ArrayC
    h: ArrayC
    omega13: ArrayC
    omega23: ArrayC


def phi_vector(spec: SolitonSpec, sys: SystemParams, T, Z) -> ArrayC:
    """Eigenfunction of the seed linear problem, (..., 3) over broadcast T, Z.

    Computed in log space and normalized by the largest-magnitude component,
    so exponents of hundreds neither overflow nor lose the direction.
    """
    T, Z = np.broadcast_arrays(np.asarray(T, dtype=float), np.asarray(Z, dtype=float))
    amps = spec.amplitudes
    mag = np.abs(amps)
    with np.errstate(divide="ignore"):
        log_a = np.log(mag)  # -inf for zero components
    unit = np.where(mag > 0, amps / np.where(mag > 0, mag, 1.0), 0.0)

    s = np.empty(T.shape + (3,), dtype=float)
    s[..., 0] = -sys.kappa(spec.tau) * Z
    s[..., 1] = 0.0
    s[..., 2] = -T / spec.tau
    s += log_a
    s -= s.max(axis=-1, keepdims=True)
    return unit * np.exp(s)


def involution_first(spec: SolitonSpec, sys: SystemParams, T, Z) -> ArrayC:
    """First-order involution M = 2P - I at the given grid points."""
    return involution_from_projector(projector_from_vector(phi_vector(spec, sys, T, Z)))


def hamiltonian_step(tau: float, m: ArrayC) -> ArrayC:
    """Hamiltonian increment -i hbar lambda [M, W] of one step, lambda = i/tau."""
    return (HBAR / tau) * commutator(m, W_MATRIX)


def rabi_from_hamiltonian(h: ArrayC) -> tuple[ArrayC, ArrayC]:
    """(Omega13, Omega23) under the convention H_31 = -(hbar/2) Omega13."""
    return -2.0 * h[..., 2, 0] / HBAR, -2.0 * h[..., 2, 1] / HBAR


def state_first(spec: SolitonSpec, sys: SystemParams, T, Z) -> SolutionState:
    """Full first-order solution dressed from the quiescent seed."""
    m = involution_first(spec, sys, T, Z)
    h = hamiltonian_step(spec.tau, m)
    om13, om23 = rabi_from_hamiltonian(h)
    rho = m @ RHO_SEED @ m
    return SolutionState(rho=rho, h=h, omega13=om13, omega23=om23)


def fields_first(spec: SolitonSpec, sys: SystemParams, T, Z) -> tuple[ArrayC, ArrayC]:
    """Rabi fields only; cheaper than state_first for large field maps."""
    m = involution_first(spec, sys, T, Z)
    pref = 2j / spec.tau
    return pref * m[..., 2, 0], pref * m[..., 2, 1]


def asymptotic_involution(
    spec: SolitonSpec, regime: Regime, sys: SystemParams, T, Z
) -> ArrayC:
    """Closed-form involution elements in the stated regime.

    For the general (type 1) soliton only the early- and late-time limits
    have simple closed forms; for types 2 and 3 the closed form is exact at
    all times and must match ``involution_first`` to machine precision.
    """
    if spec.kind is SolitonKind.TYPE1 and regime is Regime.ALL_TIMES:
        raise RegimeMismatchError("type 1 has closed forms only for early/late times")
    if spec.kind is not SolitonKind.TYPE1 and regime is not Regime.ALL_TIMES:
        raise RegimeMismatchError(f"{spec.kind.value} closed form is all-times only")

    T, Z = np.broadcast_arrays(np.asarray(T, dtype=float), np.asarray(Z, dtype=float))
    m = np.zeros(T.shape + (3, 3), dtype=complex)
    kz = spec.kappa(sys) * Z

    if spec.kind is SolitonKind.TYPE2:
        u = T / spec.tau + spec.eta23
        a23 = spec.phase(2, 3)
        m[..., 0, 0] = -1.0
        m[..., 1, 1] = np.tanh(u)
        m[..., 2, 2] = -np.tanh(u)
        m[..., 1, 2] = a23 / np.cosh(u)
        m[..., 2, 1] = np.conj(a23) / np.cosh(u)
        return m

    if spec.kind is SolitonKind.TYPE3 or regime is Regime.EARLY_TIME:
        u = T / spec.tau - kz + spec.eta13
        a13 = spec.phase(1, 3)
        m[..., 0, 0] = np.tanh(u)
        m[..., 1, 1] = -1.0
        m[..., 2, 2] = -np.tanh(u)
        m[..., 0, 2] = a13 / np.cosh(u)
        m[..., 2, 0] = np.conj(a13) / np.cosh(u)
        return m

    # type 1, late times: the imprint profile plus the outgoing control pulse
    v = -kz + spec.eta12
    w = T / spec.tau + spec.eta23
    a12 = spec.phase(1, 2)
    a23 = spec.phase(2, 3)
    m[..., 0, 0] = np.tanh(v)
    m[..., 1, 1] = -np.tanh(v)
    m[..., 2, 2] = -1.0
    m[..., 0, 1] = a12 / np.cosh(v)
    m[..., 1, 0] = np.conj(a12) / np.cosh(v)
    m[..., 1, 2] = a23 / np.cosh(w)
    m[..., 2, 1] = np.conj(a23) / np.cosh(w)
    return m
