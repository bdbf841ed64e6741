"""Cross-checking the algebra against a finite-difference integrator.

The dressing construction and the marching integrator know nothing about
each other beyond the shared matrix kernel.  Injecting the analytic field
profiles at the left edge and marching the coupled Maxwell-Bloch system
across the medium must reproduce the analytic fields everywhere -- and the
error must fall like the fourth power of the step. Collisions amplify the
marching error (the displacement mechanism is stimulated amplification of
pulse tails), which is visible in the second-order scenario's larger
constant.

Run:  python demos/05_crosscheck_integrator.py      (about a minute)
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lambda_soliton import (
    BoundaryData,
    Grid,
    OrderedSolution,
    SolitonKind,
    SolitonSpec,
    SystemParams,
    integrate,
    residual_norms,
)
from lambda_soliton.superposition import grid_fields, grid_state

OUT = pathlib.Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

sys_p = SystemParams(mu=2.0)
sit = OrderedSolution(
    (SolitonSpec.from_etas(SolitonKind.TYPE3, 1.0),), sys_p)
transfer = OrderedSolution(
    (SolitonSpec.from_etas(SolitonKind.TYPE1, 1.0, eta12=0.0, eta13=8.0),
     SolitonSpec.from_etas(SolitonKind.TYPE3, np.tanh(0.75), eta13=-8.0)), sys_p)

print("marching the integrator over analytic boundary data:")
print(f"{'scenario':>10} {'grid':>12} {'rel Linf error':>15}")
err_map = None
for name, sol in (("SIT", sit), ("transfer", transfer)):
    for g in (Grid(-40.0, 100.0, 1025, -6.0, 9.0, 129),
              Grid(-40.0, 100.0, 2049, -6.0, 9.0, 257),
              Grid(-40.0, 100.0, 4097, -6.0, 9.0, 513)):
        ref13, ref23 = grid_fields(sol, g.t, g.z)
        res = integrate(BoundaryData(ref13[0].copy(), ref23[0].copy()), g, sys_p)
        scale = max(np.abs(ref13).max(), np.abs(ref23).max())
        err = max(np.abs(res.omega13 - ref13).max(),
                  np.abs(res.omega23 - ref23).max()) / scale
        print(f"{name:>10} {g.nt:>6}x{g.nz:<5} {err:15.3e}")
        if name == "transfer" and g.nz == 257:
            err_map = np.abs(res.omega13 - ref13) / scale
            gm = g
    d = res.diagnostics
    print(f"{'':>10} conservation: trace {d.max_trace_drift:.1e}, "
          f"purity {d.max_purity_defect:.1e}")

fig, ax = plt.subplots(figsize=(9, 4), constrained_layout=True)
im = ax.pcolormesh(gm.t, gm.z, np.log10(err_map + 1e-16), shading="auto",
                   rasterized=True, vmin=-12, vmax=-3)
ax.set_xlabel(r"$t/\tau$")
ax.set_ylabel(r"$\kappa x$")
ax.set_title("log10 field error of the march (transfer scenario, 2049x257)")
fig.colorbar(im, ax=ax, label="log10 rel error")
fig.savefig(OUT / "05_crosscheck_error.png", dpi=130)

# the same analytic states also satisfy the equations pointwise
print("\ncentral-difference residuals of the analytic second-order state:")
g0 = Grid(-40.0, 100.0, 513, -6.0, 9.0, 129)
for g in (g0, g0.refined(2)):
    n = residual_norms(lambda t, z: grid_state(transfer, t, z), g, sys_p)
    print(f"  {g.nt:>5}x{g.nz:<4} von-Neumann {n['von_neumann_rms']:.2e}  "
          f"field-eq {n['maxwell_rms']:.2e}  zero-curvature {n['zero_curvature_rms']:.2e}")
print("each halving cuts the residuals fourfold: the closed forms solve the system")
