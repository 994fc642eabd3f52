"""Catalog of conductivity profiles and their travel-time maps.

The travel time tau(x) = int_0^x dxi/sigma(xi) is the natural length scale
of the problem: for constant sigma the characteristic function is exactly
sin(k tau(1)), and every spectral quantity below depends on x only through
tau and the log-derivative mu = sigma'/sigma.
"""

import numpy as np

from varheat import build_travel_time, log_derivative, make_conductivity
from varheat.svg import LineSeries, write_line_plot

profiles = {
    "constant (c=1)": make_conductivity("constant", c=1.0),
    "parabolic24": make_conductivity("parabolic24"),
    "rational9000": make_conductivity("rational9000"),
}

xs = np.linspace(0.0, 1.0, 401)
series_sigma = []
series_tau = []

print(f"{'profile':<16} {'sigma_min':>10} {'sigma_max':>10} {'tau(1)':>10} {'int|mu|':>9}")
for name, c in profiles.items():
    tt = build_travel_time(c)
    s = c.sigma(xs)
    mu = np.abs(log_derivative(c, xs))
    int_mu = np.trapezoid(mu, xs)
    print(f"{name:<16} {s.min():>10.5f} {s.max():>10.5f} {tt.total:>10.5f} {int_mu:>9.4f}")
    series_sigma.append(LineSeries(xs, s, name))
    series_tau.append(LineSeries(xs, tt.tau(xs), name))

write_line_plot("demo01_sigma.svg", series_sigma, title="conductivity profiles",
                xlabel="x", ylabel="sigma(x)")
write_line_plot("demo01_tau.svg", series_tau, title="travel-time maps",
                xlabel="x", ylabel="tau(x)")
print("wrote demo01_sigma.svg, demo01_tau.svg")

# the parabolic benchmark has a closed-form total travel time
import math

closed = 2.0 * math.sqrt(6.0) * math.asin(1.0 / math.sqrt(3.0))
tt = build_travel_time(profiles["parabolic24"])
print(f"\nparabolic24 tau(1) = {tt.total:.12f}  (closed form {closed:.12f})")
