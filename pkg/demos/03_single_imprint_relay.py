"""Three-step relay of one imprint: encode at 0, push to -5, push to +5.

The third-order solution composes one soliton of each type.  The durations
are chosen by inverting the lag formula, tau = tanh(delta/2), so the two
manipulation steps displace the imprint by exactly 5 and 10 dimensionless
units: a signal-only pulse pushes it backward, a control-only pulse pushes
it forward.  Each push by a shorter pulse also flips the coherence phase, so
after two pushes the phase is back.

This is the `pulse1`/`den1` preset of the command-line front end:

    lambda-soliton figure den1 --out data/

Run:  python demos/03_single_imprint_relay.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lambda_soliton import OrderedSolution
from lambda_soliton.cli import measure_imprints
from lambda_soliton.scenarios import preset

OUT = pathlib.Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

cfg, notes = preset("den1")
print("preset:", cfg.name)
print("durations:", [round(s.tau, 6) for s in cfg.solitons])
print("phase lags:", notes["phase_lags"])

fig, axes = plt.subplots(2, 1, figsize=(10, 7), constrained_layout=True,
                         height_ratios=[1.3, 1])

# pulse choreography: |Omega_13| + |Omega_23| over the full window
sol = OrderedSolution(cfg.solitons, cfg.system)
t = np.linspace(cfg.grid.t_min, cfg.grid.t_max, 900)
z = np.linspace(cfg.grid.z_min, cfg.grid.z_max, 400)
om13, om23 = sol.fields(t[None, :], z[:, None])
axes[0].pcolormesh(t, z, np.abs(om13) + np.abs(om23), shading="auto", rasterized=True)
axes[0].set_xlabel(r"$t/\tau_a$")
axes[0].set_ylabel(r"$\kappa_a x$")
axes[0].set_title("pulse trajectories (signal encodes, signal pushes back, control pushes forward)")

styles = ["-", "--", "-."]
for ts, stage, style in zip(cfg.snapshot_times, cfg.snapshot_stages, styles):
    (m,) = measure_imprints(cfg, ts, stage)
    st = OrderedSolution(cfg.solitons[:stage], cfg.system).state(
        np.full(z.shape, ts), z)
    axes[1].plot(z, st.rho[:, 1, 1].real, style,
                 label=f"t = {ts:.0f}: at {m['location_measured']:+.3f} "
                       f"(predicted {m['location_predicted']:+.0f}, "
                       f"phase {m['phase_sign_measured']:+d})")
    axes[0].axvline(ts, color="w", lw=0.6, ls=":")
    print(f"t = {ts:5.0f}: measured {m['location_measured']:+.5f}  "
          f"predicted {m['location_predicted']:+.1f}  "
          f"coherence sign {m['phase_sign_measured']:+d}")
axes[1].set_xlabel(r"$\kappa_a x$")
axes[1].set_ylabel(r"$\rho_{22}$")
axes[1].set_title("the stored imprint at the three snapshots")
axes[1].legend()
fig.savefig(OUT / "03_single_imprint_relay.png", dpi=130)
print("\nthe imprint visits 0 -> -5 -> +5; the first push flips the phase,")
print("the second flips it back (both pushing pulses are shorter than tau_a)")
