"""A worked 2x2 instance where the answer is sqrt(2).

Minimize trace(Ahat X^H A X) over all X with Bhat X^H B X = I, for

    A = diag(1, 2),  B = Bhat = diag(1, -1),  Ahat = Q^T diag(1, 1/4) Q,

with a rotation Q tuned so the answer comes out in closed form.  The key
point: the value is built from the eigenvalues of the PAIR (Ahat, Bhat) --
not of Ahat alone -- paired by type with the eigenvalues of (A, B).
"""

import numpy as np

import pencil_tracemin as pt

sigma = np.sqrt(18.0 - 6.0 * np.sqrt(2.0)) / 6.0
c = np.sqrt(1.0 - sigma**2)
Q = np.array([[c, -sigma], [sigma, c]])
Ahat = Q.T @ np.diag([1.0, 0.25]) @ Q

problem = pt.problem_from_arrays(
    np.diag([1.0, 2.0]), np.diag([1.0, -1.0]), Ahat, np.diag([1.0, -1.0])
)

print("== typed spectra ==")
spec = pt.typed_spectrum(problem.pair)
spec_hat = pt.typed_spectrum(problem.hat_pair)
print(f"(A, B):       positive type {spec.pos_values}, negative type {spec.neg_values}")
print(f"(Ahat, Bhat): positive type {spec_hat.pos_values}, negative type {spec_hat.neg_values}")
print(f"expected hat values: +{np.sqrt(2)/2:.12f}, {-np.sqrt(2)/4:.12f}")

print("\n== admissible shifts ==")
rep = pt.definiteness_interval(problem.pair)
print(f"(A, B) psd shift interval: {rep.psd_interval}")

print("\n== infimum ==")
res = pt.infimum(problem)
print(f"verdict: {res.verdict}, value = {res.value!r}  (sqrt(2) = {np.sqrt(2)!r})")
for t in res.terms:
    print(f"  {t.eig_type:>8}: {t.lam_hat:+.6f} * {t.lam:+.6f} = {t.product:+.6f}")

print("\n== minimizer ==")
X, achieved = pt.minimizer(problem)
print(f"achieved = {achieved!r}")
print(f"feasibility residual = {pt.feasibility_residual(problem, X):.3e}")
print("X_opt =")
print(np.round(X, 6))

print("\n== Monte-Carlo sanity: feasible samples never beat the value ==")
sampler = pt.FeasibleSampler(problem)
traces = []
for k in range(2000):
    Xs = sampler.sample(2.0, np.random.default_rng([0, k]))
    traces.append(
        np.real(np.trace(Ahat @ Xs.conj().T @ problem.pair.A.entries @ Xs))
    )
print(f"min over 2000 samples: {min(traces):.9f} >= {res.value:.9f}")
