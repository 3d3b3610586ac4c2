"""The classical orthonormal-frame trace minimum as a special case.

With B = I, Ahat = Bhat = I_k the constraint becomes X^H X = I_k and the
minimum of trace(X^H A X) is the sum of the k smallest eigenvalues of A,
attained on the matching invariant subspace.
"""

import numpy as np

import pencil_tracemin as pt

rng = np.random.default_rng(1)
n, k = 9, 3
G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
A = (G + G.conj().T) / 2

problem = pt.problem_from_arrays(A, np.eye(n), np.eye(k), np.eye(k))
res = pt.infimum(problem)
vals, vecs = np.linalg.eigh(A)

print(f"infimum value        : {res.value!r}")
print(f"sum of {k} smallest   : {float(np.sum(vals[:k]))!r}")

X, achieved = pt.minimizer(problem)
P_opt = X @ np.linalg.pinv(X)
P_true = vecs[:, :k] @ vecs[:, :k].conj().T
print(f"achieved             : {achieved!r}")
print(f"orthonormality       : {np.linalg.norm(X.conj().T @ X - np.eye(k)):.2e}")
print(f"invariant subspace   : projector gap {np.linalg.norm(P_opt - P_true, 2):.2e}")

# A small twist: Ahat = diag(1, -1) weights one direction negatively, so the
# optimum pairs the -1 weight with the LARGEST eigenvalue.
problem2 = pt.problem_from_arrays(A, np.eye(n), np.diag([1.0, -1.0]), np.eye(2))
res2 = pt.infimum(problem2)
print(f"\nweights (1, -1)      : value {res2.value!r}")
print(f"lambda_min - lambda_max = {vals[0] - vals[-1]!r}")
