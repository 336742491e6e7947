# The twisted eigenvalue and mu(Omega, alpha) = min(lambda_D + alpha, lambda_T),
# computed two ways: from the formula and by minimizing the quotient directly.
from spectral_mu import (characterize, make_L_shape, make_two_disks, mu_direct,
                         nodal_diagnostics)

mask = make_L_shape(1.0, 1 / 24)
prof = characterize(mask, restarts=4, seed=0)
print(f"lambda_D={prof.dirichlet.value:.6f}  lambda_T={prof.twisted.value:.6f}  gap={prof.gap:.6f}")
print("restart values:", [(name, round(float(v), 6)) for name, v, _ in prof.twisted.start_values])

# %% both paths across the kink
for k in (0, 0.5, 1, 2, 10):
    a = k * prof.gap
    c, d = prof.mu(a), mu_direct(mask, a, ground=prof.dirichlet)
    print(f"alpha={a:8.3f}  formula={c.value:.8f} ({c.branch})  direct={d.value:.8f} ({d.branch})")

# %% on the twisted branch the minimizer has equally heavy nodal parts
rep = nodal_diagnostics(prof.twisted, mask, prof.dirichlet.value)
print(f"lambda(O+)={rep.lambda_plus:.4f}  lambda(O-)={rep.lambda_minus:.4f}  "
      f"mass residual={rep.mass_residual:.1e}  alpha from parts={rep.alpha_reconstructed:.4f}")

# %% two equal disks: lambda_T = lambda_D, mu flat, one disk per sign
pair = make_two_disks(1.0, 1.0, 1 / 32)
pp = characterize(pair)
rep = nodal_diagnostics(pp.twisted, pair, pp.dirichlet.value)
print(pp.dirichlet.value, pp.twisted.value, rep.mean_residual)
