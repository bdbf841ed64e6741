"""Physical diagnostics: pulse areas, imprint detection, closed-form predictions.

An imprint is the stationary pattern a stored signal pulse leaves in the
ground-state elements: rho_22 = sech^2(eta_12 - kappa x) peaking at the
storage site, rho_11 dipping there, and the coherence rho_12 following a
sech*tanh profile whose sign through the peak carries the phase bit.  Each
manipulation pulse displaces an imprint by the phase-lag parameter

    delta = ln |(tau_imprint + tau_pulse) / (tau_imprint - tau_pulse)|

(right for control-only pulses, left for signal-only ones) and flips the
coherence phase exactly when the manipulating pulse is shorter than the pulse
that wrote the imprint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import TOL, ArrayC, SystemParams
from .darboux import SolitonKind, SolitonSpec
from .errors import (
    DegenerateSpectralParamsError,
    GridTooNarrowError,
    NoImprintFoundError,
    OverlappingImprintsError,
    UnsupportedSequenceError,
)

EDGE_TAIL_RATIO = 1e-8   # pulse magnitude allowed at grid edges, relative to peak
PEAK_THRESHOLD = 0.5     # rho_22 level that counts as an imprint


@dataclass(frozen=True)
class PulseAreaRecord:
    """Per-slice pulse areas; theta_tot = sqrt(theta13^2 + theta23^2)."""

    z: float
    theta13: float
    theta23: float
    theta_tot: float


@dataclass(frozen=True)
class ImprintReport:
    """One detected ground-state imprint, in the owning soliton's kappa*x units."""

    which_soliton: int
    location_measured: float
    location_predicted: float   # nan when no prediction was supplied
    rho22_peak: float
    phase_sign: int
    width_kappa: float          # FWHM of rho_22; nan if clipped by the grid


class PredictedImprint(NamedTuple):
    location: float     # kappa_j * x of soliton j's imprint
    phase_sign: int     # +1 unflipped, -1 pi-flipped relative to encoding


def pulse_area(omega: ArrayC, t: np.ndarray) -> float:
    """Area of a pulse profile: integral of |Omega(T)| dT on a uniform grid.

    The magnitude convention makes a single 2*pi sech pulse report 2*pi for
    any constant phase.  Raises GridTooNarrowError when the profile has not
    decayed at either end of the grid.
    """
    omega = np.asarray(omega)
    t = np.asarray(t, dtype=float)
    if omega.shape != t.shape or t.ndim != 1 or t.size < 2:
        raise ValueError("omega and t must be matching 1-D arrays")
    dt = np.diff(t)
    if dt.min() <= 0 or dt.max() - dt.min() > 1e-9 * dt.max():
        raise ValueError("t must be uniformly increasing")
    mag = np.abs(omega)
    peak = mag.max()
    if peak == 0:
        return 0.0
    if mag[0] > EDGE_TAIL_RATIO * peak or mag[-1] > EDGE_TAIL_RATIO * peak:
        raise GridTooNarrowError(
            f"pulse tails at grid edges ({mag[0]:.2e}, {mag[-1]:.2e}) exceed "
            f"{EDGE_TAIL_RATIO:.0e} of the peak {peak:.2e}"
        )
    return float(np.trapezoid(mag, t))


def total_area(theta13: float, theta23: float) -> float:
    """Combined two-field pulse area sqrt(|theta13|^2 + |theta23|^2)."""
    return math.hypot(theta13, theta23)


def delta_lag(tau_a: float, tau_b: float) -> float:
    """Phase-lag parameter ln|(tau_a + tau_b) / (tau_a - tau_b)|."""
    if tau_a <= 0 or tau_b <= 0:
        raise ValueError("durations must be positive")
    if abs(tau_a - tau_b) <= TOL.degenerate_tau_rel * max(tau_a, tau_b):
        raise DegenerateSpectralParamsError(
            f"phase lag diverges for equal durations {tau_a} ~ {tau_b}"
        )
    return math.log(abs((tau_a + tau_b) / (tau_a - tau_b)))


def areas_by_slice(om13: ArrayC, om23: ArrayC, t: np.ndarray, z: np.ndarray) -> list[PulseAreaRecord]:
    """Pulse areas per z row of (nz, nt) field maps."""
    records = []
    for iz in range(z.size):
        th13 = pulse_area(om13[iz], t)
        th23 = pulse_area(om23[iz], t)
        records.append(
            PulseAreaRecord(
                z=float(z[iz]), theta13=th13, theta23=th23,
                theta_tot=total_area(th13, th23),
            )
        )
    return records


# ---------------------------------------------------------------------------
# Imprint detection
# ---------------------------------------------------------------------------

def _quadratic_peak(z: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float]:
    """Sub-grid peak via a parabola through (i-1, i, i+1)."""
    if i == 0 or i == y.size - 1:
        return float(z[i]), float(y[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return float(z[i]), float(y[i])
    s = 0.5 * (y0 - y2) / denom
    dz = z[1] - z[0]
    return float(z[i] + s * dz), float(y1 - 0.25 * (y0 - y2) * s)


def _half_max_width(z: np.ndarray, y: np.ndarray, i: int, half: float) -> float:
    """FWHM around peak index i by linear interpolation; nan if clipped."""
    il = i
    while il > 0 and y[il] > half:
        il -= 1
    ir = i
    while ir < y.size - 1 and y[ir] > half:
        ir += 1
    if y[il] > half or y[ir] > half:
        return float("nan")
    zl = z[il] + (z[il + 1] - z[il]) * (half - y[il]) / (y[il + 1] - y[il])
    zr = z[ir - 1] + (z[ir] - z[ir - 1]) * (half - y[ir - 1]) / (y[ir] - y[ir - 1])
    return float(zr - zl)


def locate_imprints(
    z: np.ndarray,
    rho22: np.ndarray,
    rho12: ArrayC,
    *,
    kappas: Sequence[float],
    coherence_phases: Sequence[complex] | None = None,
    predictions: Sequence[float] | None = None,
    threshold: float = PEAK_THRESHOLD,
    min_separation_cells: int = 3,
) -> list[ImprintReport]:
    """Find ground-state imprints in a late-time rho_22(Z) profile.

    Parameters
    ----------
    z, rho22, rho12:
        Uniform position grid and the density-matrix profiles sampled on it
        after every pulse has exited.
    kappas:
        Absorption coefficient of each candidate imprinting soliton; measured
        locations are reported as kappa_j * x in the owner's units.
    coherence_phases:
        Encoding phase factor (a1 a2*/|a1 a2|) per candidate; the detected
        rho_12 profile is rotated by its conjugate before reading the sign.
    predictions:
        Predicted kappa_j * x per candidate.  When given, each peak is
        assigned to the nearest predicted position; otherwise peaks map onto
        candidates in spatial order.

    Returns one report per detected peak, in increasing-Z order.
    """
    z = np.asarray(z, dtype=float)
    rho22 = np.asarray(rho22, dtype=float)
    rho12 = np.asarray(rho12, dtype=complex)
    if coherence_phases is None:
        coherence_phases = [1.0] * len(kappas)

    peaks = [
        i for i in range(1, z.size - 1)
        if rho22[i] > threshold
        and rho22[i] >= rho22[i - 1]
        and rho22[i] > rho22[i + 1]
    ]
    # collapse plateau runs to a single index
    merged: list[int] = []
    for i in peaks:
        if merged and i - merged[-1] < min_separation_cells:
            if rho22[i] > rho22[merged[-1]]:
                merged[-1] = i
            else:
                raise OverlappingImprintsError(
                    f"peaks at z={z[merged[-1]]:.4f} and z={z[i]:.4f} closer "
                    f"than {min_separation_cells} cells"
                )
        else:
            merged.append(i)
    if not merged:
        raise NoImprintFoundError(
            f"no rho_22 maximum above {threshold} in the scanned profile"
        )

    if predictions is not None and len(predictions) != len(kappas):
        raise ValueError("predictions must match kappas in length")

    reports = []
    taken: set[int] = set()
    for order, i in enumerate(merged):
        z_peak, val = _quadratic_peak(z, rho22, i)
        if predictions is not None:
            cand = min(
                (j for j in range(len(kappas)) if j not in taken),
                key=lambda j: abs(z_peak - predictions[j] / kappas[j]),
            )
        else:
            cand = min(order, len(kappas) - 1)
        taken.add(cand)
        kap = kappas[cand]

        width_z = _half_max_width(z, rho22, i, 0.5 * val)
        off = max(2, int(round(0.9 / (kap * (z[1] - z[0])))))
        il, ir = max(i - off, 0), min(i + off, z.size - 1)
        w = (rho12 * np.conj(coherence_phases[cand])).real
        sign = 1 if w[il] - w[ir] >= 0 else -1

        reports.append(
            ImprintReport(
                which_soliton=cand,
                location_measured=kap * z_peak,
                location_predicted=(
                    float(predictions[cand]) if predictions is not None else float("nan")
                ),
                rho22_peak=min(val, 1.0),
                phase_sign=sign,
                width_kappa=kap * width_z,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# Closed-form predictions
# ---------------------------------------------------------------------------

def predict_location(
    sequence: Sequence[SolitonSpec], target: int, sys: SystemParams | None = None
) -> PredictedImprint:
    """Predicted imprint location and phase for a covered pulse sequence.

    Covered shapes: a single imprinting (type 1) soliton plus any mix of
    control/signal manipulators, or two imprinting solitons optionally
    followed by one manipulator.  The temporal order of the pulses does not
    enter; only durations and the location parameters do.  Sequences that
    would invert the spatial order of two imprints are rejected: no closed
    form covers them.
    """
    sys = sys or SystemParams()
    specs = list(sequence)
    if not 0 <= target < len(specs):
        raise ValueError(f"target index {target} outside sequence of {len(specs)}")
    imprinters = [i for i, s in enumerate(specs) if s.kind is SolitonKind.TYPE1]
    manips = [i for i, s in enumerate(specs) if s.kind is not SolitonKind.TYPE1]

    if not imprinters:
        raise UnsupportedSequenceError("no imprinting (type 1) soliton in sequence")
    if len(imprinters) > 2:
        raise UnsupportedSequenceError("more than two imprints have no closed form")
    if specs[target].kind is not SolitonKind.TYPE1:
        raise UnsupportedSequenceError(
            f"target {target} is a {specs[target].kind.value} pulse; only "
            "imprinting solitons leave an imprint"
        )

    def manip_shift(imp: SolitonSpec) -> tuple[float, int]:
        loc, sign = 0.0, 1
        for i in manips:
            m = specs[i]
            d = delta_lag(imp.tau, m.tau)
            loc += d if m.kind is SolitonKind.TYPE2 else -d
            if m.tau < imp.tau:
                sign = -sign
        return loc, sign

    if len(imprinters) == 1:
        imp = specs[imprinters[0]]
        shift, sign = manip_shift(imp)
        return PredictedImprint(imp.eta12 + shift, sign)

    if len(manips) > 1:
        raise UnsupportedSequenceError(
            "two imprints support at most one manipulating pulse"
        )
    ia, ib = imprinters
    sa, sb = specs[ia], specs[ib]
    sigma = 1.0 if sa.eta12 > sb.eta12 else -1.0
    za = sa.eta12 / sa.kappa(sys)
    zb = sb.eta12 / sb.kappa(sys)
    if sigma != (1.0 if za > zb else -1.0):
        raise UnsupportedSequenceError(
            "eta_12 ordering and spatial ordering disagree; interaction shift "
            "direction is ambiguous"
        )
    d = delta_lag(sa.tau, sb.tau)
    loc = {ia: sa.eta12 + sigma * d, ib: sb.eta12 - sigma * d}
    sign = {
        ia: -1 if sb.tau < sa.tau else 1,
        ib: -1 if sa.tau < sb.tau else 1,
    }
    if manips:
        for j, s in ((ia, sa), (ib, sb)):
            shift, flip = manip_shift(s)
            loc[j] += shift
            sign[j] *= flip
        za_f = loc[ia] / sa.kappa(sys)
        zb_f = loc[ib] / sb.kappa(sys)
        if (za_f > zb_f) != (za > zb):
            raise UnsupportedSequenceError(
                "displacement would invert the imprint order; outside the "
                "closed-form prediction's validity"
            )
    return PredictedImprint(loc[target], sign[target])
