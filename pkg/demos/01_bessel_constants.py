# Bessel zeros and ball volumes, the constants behind every ball formula.
import math

from spectral_mu import bessel_j, dimension_constants, first_bessel_zero, unit_ball_volume

# %% first zeros j_{n/2-1,1}
for n in range(2, 7):
    c = dimension_constants(n)
    print(f"n={n}  order={n / 2 - 1:3.1f}  j={c.j_first:.15f}  omega={c.omega_n:.12f}")

# %% J_{1/2}(x) = sqrt(2/(pi x)) sin x, so its first zero is pi
print(first_bessel_zero(0.5) - math.pi)

# %% residual at the root, and the series at a few points
z = first_bessel_zero(0)
print(bessel_j(0, z), [round(bessel_j(0, x), 6) for x in (0.0, 1.0, 5.0, 25.0)])

# %% omega_n peaks near n = 5
print([round(unit_ball_volume(n), 4) for n in range(1, 11)])
