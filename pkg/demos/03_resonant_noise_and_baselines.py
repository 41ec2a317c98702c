"""Resonant phase noise: robust smoothing against the coherent-beam limits.

A piezo-style resonant process with an uncertain resonance frequency is a
much harsher setting than the mean-reverting one: mistuning the resonance
moves real noise power, so the robust design pays off by whole dB. The two
coherent-beam baselines bracket the story: the coherent state limit (matched
smoother, no squeezing) and the standard quantum limit (heterodyne filter).
"""

import numpy as np

import rpsmooth as rp

model = rp.resonant_process(kappa=9e4, zeta=0.1, omega_r=6.283e3)
alpha_sq = 25e4
squeezing = rp.SqueezingConfig.from_effective(alpha_sq, 0.48, 1.11)
mu = 0.8
unc = rp.uncertainty_for(model, mu)

print("resonance detuning sweep at mu = 0.8 (errors in rad^2):\n")
print(" delta   optimal     robust      CSL         SQL")
for delta in np.linspace(-1.0, 1.0, 9):
    opt = rp.evaluate_error(model, unc, squeezing, "optimal", delta).sigma_sq
    rob = rp.evaluate_error(model, unc, squeezing, "robust", delta).sigma_sq
    csl = rp.compute_csl(model, unc, alpha_sq, delta)
    sql = rp.compute_sql(model, unc, alpha_sq, delta)
    print(f" {delta:+5.2f}  {opt:.6f}   {rob:.6f}   {csl:.6f}   {sql:.6f}")

opt_w, d_opt = rp.worst_case_error(model, unc, squeezing, "optimal")
rob_w, d_rob = rp.worst_case_error(model, unc, squeezing, "robust")
print(f"\nworst cases sit at delta = {d_opt:+.0f}: "
      f"optimal {opt_w:.6f}, robust {rob_w:.6f} "
      f"({10 * np.log10(opt_w / rob_w):.2f} dB apart)")

# the squeezing level itself is a design knob; the study's effective pair
# (0.48, 1.11) is what a 33%-lossy beam gives at its optimal pump
r_star = rp.optimize_squeezing("nominal-error", model, unc, alpha_sq, l_sq=0.33)
r_m, r_p = rp.effective_squeezing(r_star, 0.33)
print(f"\nre-derived optimal lossy squeezing: r_m = {r_m:.3f}, r_p = {r_p:.3f} "
      f"({rp.squeezing_db(r_m):.1f} dB measured)")
