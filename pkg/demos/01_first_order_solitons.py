"""The three first-order solitons: a storage pair, a free control pulse, and
a plain self-induced-transparency pulse.

Dressing the quiescent medium once gives three solution families depending
on which integration constants vanish:

* general (type 1): a signal pulse converts into a control pulse while
  writing its information into the ground states at kappa*x = eta_12;
* control-only (type 2): a 2*pi pulse on the 2-3 transition that never
  touches the medium (it rides at the vacuum speed of light);
* signal-only (type 3): the classic 2*pi sech pulse at reduced group
  velocity.

Run:  python demos/01_first_order_solitons.py
Writes PNGs into demos/output/.
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
    pulse_area,
    total_area,
)

OUT = pathlib.Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

sys_p = SystemParams(mu=2.0)   # kappa = tau in these units

# -- a storage soliton: signal in, control out, imprint at kappa*x = 0 -------
storage = SolitonSpec.from_etas(SolitonKind.TYPE1, 1.0, eta12=0.0, eta13=10.0)
sol = OrderedSolution((storage,), sys_p)

t = np.linspace(-60.0, 60.0, 1200)
z = np.linspace(-8.0, 10.0, 500)
om13, om23 = sol.fields(t[None, :], z[:, None])

fig, axes = plt.subplots(1, 3, figsize=(14, 4), constrained_layout=True)
for ax, field, label in ((axes[0], om13, r"$|\Omega_{13}|$ signal"),
                         (axes[1], om23, r"$|\Omega_{23}|$ control")):
    im = ax.pcolormesh(t, z, np.abs(field), shading="auto", rasterized=True)
    ax.set_xlabel(r"$t/\tau$")
    ax.set_ylabel(r"$\kappa x$")
    ax.set_title(label)
    fig.colorbar(im, ax=ax)

# the stored pattern, long after the pulses are gone
st = sol.state(np.full(z.shape, 50.0), z)
axes[2].plot(z, st.rho[:, 0, 0].real, label=r"$\rho_{11}$")
axes[2].plot(z, st.rho[:, 1, 1].real, label=r"$\rho_{22}$")
axes[2].plot(z, st.rho[:, 0, 1].real, label=r"$\mathrm{Re}\,\rho_{12}$")
axes[2].set_xlabel(r"$\kappa x$")
axes[2].set_title("stored imprint at t = 50")
axes[2].legend()
fig.savefig(OUT / "01_storage_soliton.png", dpi=130)
print("storage soliton: imprint written at kappa*x =", storage.eta12)

# -- the pulse-area ledger: individual areas trade off, the total is fixed ---
t_area = np.linspace(-60.0, 60.0, 8000)
print(f"{'kappa x':>8} {'theta13':>10} {'theta23':>10} {'theta_tot':>10}")
for z0 in (-6.0, -2.0, 0.0, 2.0, 6.0):
    o13, o23 = sol.fields(t_area, z0)
    th13 = pulse_area(o13, t_area)
    th23 = pulse_area(o23, t_area)
    print(f"{z0:8.1f} {th13:10.6f} {th23:10.6f} {total_area(th13, th23):10.6f}")
print(f"(2*pi = {2 * np.pi:.6f}; the total is conserved while the signal dies)\n")

# -- the two degenerate types ------------------------------------------------
control = SolitonSpec.from_etas(SolitonKind.TYPE2, 0.8, eta23=0.0)
sit = SolitonSpec.from_etas(SolitonKind.TYPE3, 1.0, eta13=0.0)
for spec, name in ((control, "control-only"), (sit, "signal-only SIT")):
    s = OrderedSolution((spec,), sys_p)
    o13, o23 = s.fields(t_area, 3.0)
    st = s.state(np.array(0.0), 3.0)
    print(f"{name}: areas ({pulse_area(o13, t_area):.6f}, {pulse_area(o23, t_area):.6f}),"
          f" ground-state population rho11 = {st.rho[0, 0].real:.12f}")
print("the control-only pulse leaves the medium exactly in |1>;")
print("the SIT pulse cycles population 1 -> 3 -> 1 and keeps its sech shape")
