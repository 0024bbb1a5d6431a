import numpy as np

from divisible import bounds, cf_core, idtest, refdist

# The first positive root of sin z - z cos z bounds the cosine radius.
root = bounds.root_z0()
print("z0 = {:.12f} after {} iterations".format(root.value, root.iterations))

# The uniform law on [-1, 1] sits between its cosine bounds
uniform = refdist.get_dist("uniform")
lower = bounds.th1_lower(uniform.sigma, uniform.support_radius)
upper = bounds.th21_upper(uniform.abs_moment(0.5), 2.0,
                          uniform.support_radius)
t = np.linspace(0, 1.5, 7)
for point, low, value, high in zip(t, lower.evaluate(t), uniform.cf(t),
                                   upper.evaluate(t)):
    print("t = {:.2f}: {:.4f} <= {:.4f} <= {:.4f}".format(
        point, low, value, high))

# ... but falls below the Gaussian bound of an ID law with its variance
gaussian_bound = bounds.th3_lower(uniform.sigma2)
print("Gaussian bound deficit at pi: {:.4f}".format(
    float(gaussian_bound.deficit(uniform.cf(np.pi), np.pi))))

# Repeated halving drives an ID CF to the Gaussian with the same variance
sympoisson = refdist.get_dist("sympoisson")
for k in (0, 4, 8, 12):
    print("k = {}: {:.6f}".format(k, bounds.iterate_th4(sympoisson.cf, 1.0,
                                                        k)))
print("limit: {:.6f}".format(np.exp(-sympoisson.sigma2 / 2)))

# Fractional moments from the CF alone
laplace = refdist.get_dist("laplace")
for r in (0.5, 1.0, 1.5):
    recovered = bounds.fractional_moment_via_cf(laplace.cf, r, 1000.0)
    print("E|X|^{} = {:.5f} (exact {:.5f}, Gaussian bound {:.5f})".format(
        r, recovered.value, laplace.abs_moment(r),
        bounds.gaussian_abs_moment(laplace.sigma, r)))

# Empirical CF of the symmetrized sample
sample = refdist.sample(uniform, 2000, seed=7)
grid = cf_core.dyadic_grid(8 / np.sqrt(2 * sample.variance), 256)
estimate = cf_core.ecf(sample, grid)
print("ECF at t = {:.3f}: {:.4f} +/- {:.4f}".format(
    grid.points[64], estimate.sym_values[64],
    np.sqrt(estimate.sym_variance[64])))

# Bootstrap test
config = idtest.TestConfig(statistics="t3,t4,tmom", bootstrap_B=199, seed=7)
report = idtest.run_test(sample, config)
print(report.decision)
for name, result in report.statistics.items():
    print("{}: value {:.4f}, p {:.3f}, adjusted p {:.3f}".format(
        name, result.value, result.p_value, result.adjusted_p_value))

# A small power study
table = idtest.power_study("uniform", [100, 400], config.replace(seed=1),
                           reps=20)
print(table.to_string(index=False))
