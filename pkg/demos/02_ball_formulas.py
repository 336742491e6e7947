# Closed forms on balls: Faber-Krahn value, the two-ball value and the
# threshold where the optimal shape switches from one ball to two.
from spectral_mu import closed_form as cf

n, measure = 2, 1.0
fk = cf.faber_krahn_value(n, measure)      # one ball, pi j^2 at measure 1
two = cf.two_equal_balls_value(n, measure)  # two half-balls, 2 pi j^2
ac = cf.alpha_critical(n)
print(f"one ball {fk:.10f}  two balls {two:.10f}  alpha_c {ac:.10f}")

# %% the lower bound is continuous at alpha_c: fk + alpha_c == two
print(fk + ac - two)

# %% sweep alpha across the threshold
for a in (-fk, -5.0, 0.0, 9.0, ac, 25.0, 100.0):
    e = cf.theorem_envelope(n, measure, a)
    print(f"alpha={a:9.4f}  bound={e.value:9.4f}  {e.branch}")

# %% equal balls have a flat curve; lambda_T of a union of equal balls is lambda_D
pair = cf.BallUnionSpec.equal_pair(n, measure)
print([round(cf.mu_two_balls(pair, a), 6) for a in (0, 1, 10, 1e6)])

# %% higher dimensions: the threshold in units of alpha |Omega|^{2/n}
for n in (3, 4, 5):
    print(n, round(cf.alpha_critical(n), 6), round(cf.faber_krahn_value(n, 1.0), 6))
