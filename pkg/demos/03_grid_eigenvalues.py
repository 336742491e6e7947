# Dirichlet eigenvalues on grid masks. The unit square is exact against the
# discrete sine formula; the disk converges to j^2 at first order in h.
import math

from spectral_mu import (closed_form as cf, lambda_dirichlet, lambda_dirichlet_dense,
                         make_disk, make_rectangle, make_two_disks, shape_with_measure)

# %% square with m interior points per side
for m in (15, 31, 63):
    h = 1 / (m + 1)
    r = lambda_dirichlet(make_rectangle(1, 1, h))
    exact = 8 / h ** 2 * math.sin(math.pi * h / 2) ** 2
    print(f"m={m:3d}  grid={r.value:.12f}  formula={exact:.12f}  iters={r.iterations}")

# %% unit disk under refinement
j2 = cf.lambda_ball(2, 1.0)
for h in (1 / 16, 1 / 32, 1 / 64, 1 / 128):
    v = lambda_dirichlet(make_disk(1.0, h)).value
    print(f"h=1/{round(1 / h):3d}  {v:.6f}  rel err {(v - j2) / j2:+.3%}")

# %% iterative against the dense oracle on a small mask
m = make_disk(1.0, 1 / 20)
print(m.n_active, lambda_dirichlet(m).value - lambda_dirichlet_dense(m).value)

# %% disjoint union: the larger disk carries the ground state
h = 1 / 48
print(lambda_dirichlet(make_two_disks(1, 0.6, h)).value, lambda_dirichlet(make_disk(1, h)).value)

# %% Faber-Krahn on the shape zoo at measure 1
for kind in ("disk", "square", "rectangle", "annulus", "L_shape"):
    print(f"{kind:10s} {lambda_dirichlet(shape_with_measure(kind, 1.0, 1 / 64)).value:9.4f}"
          f"  >= {cf.faber_krahn_value(2, 1.0):.4f}")
