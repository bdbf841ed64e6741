"""Nonlinear superposition: second- and third-order solutions algebraically.

Given two dressing steps with involutions M^a, M^b and spectral parameters
lambda_a, lambda_b, commutativity of the composition diagram fixes the
second-step involution applied on top of the a-solution:

    M^ab = (lambda_a M^a - lambda_b M^b)(lambda_a M^a M^b - lambda_b I)^-1

and the same rule applied to two second-order involutions sharing their first
step yields the third order.  No differential equations are solved past first
order.

Path exchange does NOT equate the step involutions themselves; they obey the
composition identity M^ba = M^ab M^a M^b, so the cumulative transform

    G = M^ab M^a = M^ba M^b

and therefore the physical solution (rho = G rho0 G^dag and H) are exactly
path independent.  Tests check the identity and the state-level equality; a
direct elementwise comparison of M^ab with M^ba would fail by O(1).

The Hamiltonian is accumulated compositionally, iterating the first-order
update once per step:

    H^ab = H^a - i hbar lambda_b [M^ab, W],
    H^abc = H^ab - i hbar lambda_c [M^abc, W].

An algebraically equivalent closed form is
H^ab = H^0 - i hbar (lambda_a^2 - lambda_b^2) [M^b (lambda_a M^a M^b -
lambda_b I)^-1, W].  A variant sometimes quoted for this superposition rule
omits the inverse factor, leaving a bare (lambda_a^2 - lambda_b^2) prefactor
on [lambda_a M^a - lambda_b M^b, W]; it is dimensionally inconsistent with
the first-order update and fails the Maxwell-Bloch residual check by O(1).
It stays available behind ``h_form="lambda-squared"`` so the verify report
can quantify the discrepancy rather than silently discarding it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    HBAR,
    RHO_SEED,
    TOL,
    ArrayC,
    SystemParams,
    W_MATRIX,
    commutator,
    dagger,
    inverse3,
    involution_from_projector,
    projector_from_vector,
)
from .darboux import (
    SolitonSpec,
    SolutionState,
    hamiltonian_step,
    involution_first,
    phi_vector,
    rabi_from_hamiltonian,
)
from .errors import DegenerateSpectralParamsError, ZeroVectorError

H_FORMS = ("chain", "lambda-squared")


def _require_distinct(lam_a: complex, lam_b: complex) -> None:
    gap = abs(lam_a - lam_b)
    if gap <= TOL.degenerate_tau_rel * max(abs(lam_a), abs(lam_b)):
        raise DegenerateSpectralParamsError(
            f"spectral parameters {lam_a} and {lam_b} are (nearly) equal; "
            "superposition requires distinct durations"
        )


def superpose_involutions(
    lam_a: complex, m_a: ArrayC, lam_b: complex, m_b: ArrayC
) -> ArrayC:
    """Second-order involution from two first-order ones (batched).

    Inputs must be hermitian involutions sharing the seed solution; the
    output is again a hermitian involution.
    """
    _require_distinct(lam_a, lam_b)
    rhs = inverse3(lam_a * (m_a @ m_b) - lam_b * np.eye(3, dtype=complex))
    return (lam_a * m_a - lam_b * m_b) @ rhs


def superpose_third(
    lam_b: complex, m_ab: ArrayC, lam_c: complex, m_ac: ArrayC
) -> ArrayC:
    """Third-order involution from two second-order ones sharing step a.

    Same algebraic rule as ``superpose_involutions``, applied one level up:
    M^abc = (lambda_b M^ab - lambda_c M^ac)(lambda_b M^ab M^ac - lambda_c)^-1.
    """
    return superpose_involutions(lam_b, m_ab, lam_c, m_ac)


@dataclass(frozen=True)
class OrderedSolution:
    """An ordered train of one to three dressing steps over the quiescent seed.

    The evaluation methods broadcast over (T, Z) like the first-order layer.
    ``h_form`` selects the Hamiltonian accumulation rule; only "chain"
    satisfies the field equations (see module docstring).
    """

    specs: tuple[SolitonSpec, ...]
    sys: SystemParams = field(default_factory=SystemParams)
    h_form: str = "chain"

    def __post_init__(self):
        specs = tuple(self.specs)
        object.__setattr__(self, "specs", specs)
        if not 1 <= len(specs) <= 3:
            raise ValueError("between one and three dressing steps are supported")
        for i in range(len(specs)):
            for j in range(i + 1, len(specs)):
                ta, tb = specs[i].tau, specs[j].tau
                if abs(ta - tb) <= TOL.degenerate_tau_rel * max(ta, tb):
                    raise DegenerateSpectralParamsError(
                        f"solitons {i} and {j} have (nearly) equal duration "
                        f"{ta} ~ {tb}"
                    )
        if self.h_form not in H_FORMS:
            raise ValueError(f"h_form must be one of {H_FORMS}")

    @property
    def order(self) -> int:
        return len(self.specs)

    def involution_chain(self, T, Z) -> list[ArrayC]:
        """Per-step involutions [M^a, M^ab, M^abc][:order] at the grid points.

        Built from iteratively dressed eigenfunctions: step k's vector is the
        seed eigenfunction of spec k passed through every earlier dressing
        matrix at its own spectral point, psi_k = prod_j (lambda_j M^(j) -
        lambda_k) phi_k, and M^(k) = 2 P[psi_k] - I.  This is algebraically
        identical to the closed superposition rule (the tests check both
        routes against each other) but keeps every step an exact projector
        involution even when two spectral parameters are close, where the
        matrix formula's linear system has condition ~1/|lambda gap|.
        """
        chain: list[ArrayC] = []
        for k, spec in enumerate(self.specs):
            psi = phi_vector(spec, self.sys, T, Z)
            for j in range(k):
                psi = ((self.specs[j].lam * chain[j]
                        - spec.lam * np.eye(3, dtype=complex)) @ psi[..., :, None])[..., 0]
                peak = np.abs(psi).max(axis=-1, keepdims=True)
                if not np.all(peak > 0):
                    raise ZeroVectorError(
                        f"dressed eigenfunction of step {k} vanished; "
                        "superposition is degenerate at some grid point"
                    )
                psi = psi / peak
            chain.append(involution_from_projector(projector_from_vector(psi)))
        return chain

    def cumulative_transform(self, T, Z) -> ArrayC:
        """G = M^(n) ... M^ab M^a; rho = G rho0 G^dag.  Path independent."""
        chain = self.involution_chain(T, Z)
        g = chain[0]
        for m in chain[1:]:
            g = m @ g
        return g

    def state(self, T, Z) -> SolutionState:
        chain = self.involution_chain(T, Z)
        g = chain[0]
        for m in chain[1:]:
            g = m @ g
        rho = g @ RHO_SEED @ dagger(g)
        if self.h_form == "chain":
            h = hamiltonian_step(self.specs[0].tau, chain[0])
            for spec, m in zip(self.specs[1:], chain[1:]):
                h = h + hamiltonian_step(spec.tau, m)
        else:
            h = self._hamiltonian_lambda_squared(T, Z)
        om13, om23 = rabi_from_hamiltonian(h)
        return SolutionState(rho=rho, h=h, omega13=om13, omega23=om23)

    def fields(self, T, Z) -> tuple[ArrayC, ArrayC]:
        """(Omega13, Omega23) without assembling rho; for large field maps."""
        chain = self.involution_chain(T, Z)
        om13 = 0.0
        om23 = 0.0
        for spec, m in zip(self.specs, chain):
            pref = 2j / spec.tau
            om13 = om13 + pref * m[..., 2, 0]
            om23 = om23 + pref * m[..., 2, 1]
        return om13, om23

    def _hamiltonian_lambda_squared(self, T, Z) -> ArrayC:
        """Quadratic-prefactor H variant (fails the residual check; kept for
        the adjudication report)."""
        sa = self.specs[0]
        m_a = involution_first(sa, self.sys, T, Z)
        if self.order == 1:
            return hamiltonian_step(sa.tau, m_a)
        sb = self.specs[1]
        m_b = involution_first(sb, self.sys, T, Z)
        la, lb = sa.lam, sb.lam
        h = -1j * HBAR * (la**2 - lb**2) * commutator(
            la * m_a - lb * m_b, W_MATRIX
        )
        if self.order == 2:
            return h
        sc = self.specs[2]
        m_c = involution_first(sc, self.sys, T, Z)
        lc = sc.lam
        m_ab = superpose_involutions(la, m_a, lb, m_b)
        m_ac = superpose_involutions(la, m_a, lc, m_c)
        h_a = hamiltonian_step(sa.tau, m_a)
        return h_a - 1j * HBAR * (lb**2 - lc**2) * commutator(
            lb * m_ab - lc * m_ac, W_MATRIX
        )


def state_second(
    spec_a: SolitonSpec, spec_b: SolitonSpec, sys: SystemParams, T, Z
) -> SolutionState:
    """Second-order solution from two first-order steps."""
    return OrderedSolution((spec_a, spec_b), sys).state(T, Z)


def state_third(
    spec_a: SolitonSpec,
    spec_b: SolitonSpec,
    spec_c: SolitonSpec,
    sys: SystemParams,
    T,
    Z,
) -> SolutionState:
    """Third-order solution from three first-order steps."""
    return OrderedSolution((spec_a, spec_b, spec_c), sys).state(T, Z)


# ---------------------------------------------------------------------------
# Chunked grid evaluation: keeps (rows, nt, 3, 3) intermediates small
# ---------------------------------------------------------------------------

def grid_fields(
    solution: OrderedSolution, t: np.ndarray, z: np.ndarray, chunk_rows: int = 48
) -> tuple[ArrayC, ArrayC]:
    """Evaluate fields over a full (z, t) grid in z-chunks; returns (nz, nt)."""
    nt, nz = t.size, z.size
    om13 = np.empty((nz, nt), dtype=complex)
    om23 = np.empty((nz, nt), dtype=complex)
    for i0 in range(0, nz, chunk_rows):
        i1 = min(i0 + chunk_rows, nz)
        f13, f23 = solution.fields(t[None, :], z[i0:i1, None])
        om13[i0:i1] = f13
        om23[i0:i1] = f23
    return om13, om23


def grid_state(
    solution: OrderedSolution, t: np.ndarray, z: np.ndarray, chunk_rows: int = 48
) -> SolutionState:
    """Evaluate the full state over a (z, t) grid in z-chunks."""
    nt, nz = t.size, z.size
    rho = np.empty((nz, nt, 3, 3), dtype=complex)
    h = np.empty((nz, nt, 3, 3), dtype=complex)
    om13 = np.empty((nz, nt), dtype=complex)
    om23 = np.empty((nz, nt), dtype=complex)
    for i0 in range(0, nz, chunk_rows):
        i1 = min(i0 + chunk_rows, nz)
        st = solution.state(t[None, :], z[i0:i1, None])
        rho[i0:i1] = st.rho
        h[i0:i1] = st.h
        om13[i0:i1] = st.omega13
        om23[i0:i1] = st.omega23
    return SolutionState(rho=rho, h=h, omega13=om13, omega23=om23)
