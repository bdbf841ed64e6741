"""Backward transfer: a later signal pulse drags a stored imprint upstream.

Superposing a storage soliton (duration tau_a) with a signal-only pulse
(duration tau_b) gives the second-order solution in closed form.  Long after
both pulses have left, the imprint sits displaced by the phase-lag parameter

    delta = ln |(tau_a + tau_b) / (tau_a - tau_b)|

to the LEFT (against the propagation direction: the long sech tails sense
the imprint early, retrieve the stored pulse and re-encode it upstream).
The coherence rho_12 also flips sign exactly when tau_b < tau_a.

Run:  python demos/02_backward_transfer.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lambda_soliton import (
    OrderedSolution,
    SolitonKind,
    SolitonSpec,
    SystemParams,
    delta_lag,
    locate_imprints,
)

OUT = pathlib.Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

sys_p = SystemParams(mu=2.0)
z = np.linspace(-10.0, 8.0, 2000)
t_late = 80.0

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4), constrained_layout=True)

print(f"{'tau_b':>8} {'delta':>8} {'measured shift':>15} {'phase flip':>11}")
for tau_b in (np.tanh(0.5), np.tanh(1.0), np.tanh(1.5), 1 / np.tanh(1.0)):
    imprinting = SolitonSpec.from_etas(SolitonKind.TYPE1, 1.0, eta12=0.0, eta13=12.0)
    pusher = SolitonSpec.from_etas(SolitonKind.TYPE3, tau_b, eta13=-12.0)
    d = delta_lag(imprinting.tau, tau_b)

    st = OrderedSolution((imprinting, pusher), sys_p).state(np.full(z.shape, t_late), z)
    rho22 = st.rho[:, 1, 1].real
    (rep,) = locate_imprints(z, rho22, st.rho[:, 0, 1],
                             kappas=[imprinting.kappa(sys_p)], predictions=[-d])
    print(f"{tau_b:8.4f} {d:8.4f} {rep.location_measured:15.6f} "
          f"{'yes' if rep.phase_sign < 0 else 'no':>11}")

    ax1.plot(z, rho22, label=rf"$\tau_b$ = {tau_b:.3f}")
    ax2.plot(z, st.rho[:, 0, 1].real, label=rf"$\tau_b$ = {tau_b:.3f}")

ax1.set_xlabel(r"$\kappa_a x$")
ax1.set_ylabel(r"$\rho_{22}$")
ax1.set_title("imprint after the collision (encoded at 0)")
ax1.legend()
ax2.set_xlabel(r"$\kappa_a x$")
ax2.set_ylabel(r"$\mathrm{Re}\,\rho_{12}$")
ax2.set_title(r"coherence: sign flips when $\tau_b < \tau_a$")
ax2.legend()
fig.savefig(OUT / "02_backward_transfer.png", dpi=130)

print("\nshorter pushers (tau_b < tau_a) displace farther the closer the")
print("durations get, and always flip the coherence; a longer pusher")
print("(last row) moves the imprint without the pi flip")
