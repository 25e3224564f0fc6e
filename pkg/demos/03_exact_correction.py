"""Bias correction: exact convergence with fewer communication rounds.

The inexact family stalls at a step-size-dependent error floor.  The
exact family removes that floor with a correction term, and its
multi-update variant keeps the exactness while communicating less.  This
script compares the three behaviors, shows what happens when the
correction is dropped, and evaluates the sufficient stability condition
that flags update counts pushed too far.
"""

import numpy as np

from musicopt import (
    AlgorithmConfig,
    QuadraticProblem,
    StepSchedule,
    compare,
    erdos_renyi,
    estimate_bounds,
    fit_linear_rate,
    half_identity,
    metropolis_weights,
    plateau_error,
    stability_check,
    synth_uniform,
)

problem = synth_uniform(p=8, m=8, n_agents=40, seed=3, mu=1e-5)
graph = erdos_renyi(40, 4.0, seed=3)
x_star = problem.optimum()
sched = StepSchedule.constant(0.002)

configs = {
    "inexact E=3": AlgorithmConfig(kind="inexact_music", schedule=sched, E=3),
    "diffusion": AlgorithmConfig(kind="exact_diffusion", schedule=sched),
    "exact E=3": AlgorithmConfig(kind="exact_music", schedule=sched, E=3, beta=1.0),
    "no-corr E=3": AlgorithmConfig(kind="easgd_like", schedule=sched, E=3, beta=1.0),
}

result = compare(problem, graph, configs, T=12_000, x_star=x_star,
                 target_error=1e-6)

print(f"{'config':>12} {'rounds to 1e-6':>15} {'error floor':>12} {'rate/round':>11}")
for label, trace in result.traces.items():
    est = fit_linear_rate(trace)
    print(f"{label:>12} {result.rounds_to_target[label]!s:>15} "
          f"{plateau_error(trace):>12.3e} {est.rho:>11.4f}")

# Only the corrected exact runs drive the error toward machine precision;
# the uncorrected variant inherits the inexact floor even though it uses
# the same anchor-free communication pattern.

# The sufficient condition below is conservative but cheap: it certifies
# a linear per-round rate for the corrected scheme from the convexity
# bounds and the spectral numbers of the combination operator.  It only
# has teeth when the bounds are sharp, so evaluate it on a perfectly
# conditioned design: identity data, where mu_est = L_est.
design = QuadraticProblem(
    np.broadcast_to(np.eye(8), (40, 8, 8)).copy(), np.zeros((40, 8)), mu=0.005)
bounds = estimate_bounds(design)
wbar = half_identity(metropolis_weights(graph))
eigs = np.linalg.eigvalsh(wbar.w)
z = float(np.max(np.abs(eigs)))
zmi = float(np.max(np.abs(eigs - 1.0)))

# Each extra local update strengthens the round contraction nu**E until
# it absorbs the coupling the correction term introduces, so the
# certificate switches on above a threshold E.
print("\nsufficient stability condition at alpha=0.4, beta=0.25:")
for E in (1, 2, 3, 4, 5, 6):
    ok = stability_check(bounds, alpha=0.4, E=E, beta=0.25,
                         z_norm=z, zmi_norm=zmi)
    print(f"  E={E}: {'satisfied' if ok else 'not certified'}")
