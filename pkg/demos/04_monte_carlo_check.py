"""Stochastic cross-check of the analytic error pipeline.

Integrates the tracking loop (plant, scaled measurement, forward filter
online, backward filter over the reversed record) with Euler-Maruyama steps
and compares the empirical second moments to the Lyapunov predictions.
Everything is seeded; rerunning reproduces the numbers bit for bit.
"""

import rpsmooth as rp

model = rp.ou_process(5.9e4, 1.9e4)
squeezing = rp.SqueezingConfig.from_effective(1e6, 0.36, 0.59)

for kind, mu, delta in (("optimal", 0.0, 0.0), ("robust", 0.8, 1.0)):
    unc = rp.uncertainty_for(model, mu)
    analytic = rp.evaluate_error(model, unc, squeezing, kind, delta)
    cfg = rp.SimConfig(dt=2e-8, T=0.2, seed=424242, delta=delta, mu=mu, kind=kind)
    sim = rp.simulate_tracking(model, unc, squeezing, cfg)
    print(f"{kind} estimator at mu={mu}, delta={delta} "
          f"(dt={cfg.dt:g} s, T={cfg.T:g} s, seed={cfg.seed}):")
    rows = (
        ("forward filter ", sim.emp_sigma_f_sq, sim.stderr_f, analytic.sigma_f_sq),
        ("backward filter", sim.emp_sigma_b_sq, sim.stderr_b, analytic.sigma_b_sq),
        ("cross moment   ", sim.emp_sigma_fb_sq, sim.stderr_fb, analytic.sigma_fb_sq),
        ("smoother       ", sim.emp_sigma_sq, sim.stderr_s, analytic.sigma_sq),
    )
    for name, emp, stderr, ana in rows:
        z = (emp - ana) / stderr
        print(f"  {name} empirical {emp:+.6f} +/- {stderr:.6f}   analytic {ana:+.6f}   z={z:+.2f}")
    print()
