"""The characteristic function and its spectrum.

Delta_N(k) is an odd entire function whose positive real zeros kappa_m give
the eigenvalues lambda_m = -kappa_m^2 of (sigma^2 y')' = lambda y with
Dirichlet ends.  Truncating the underlying series at N = 0 already places
the zeros well; N = 2 matches the published four-mode table to ~5e-5.
"""

import numpy as np

from varheat import SeriesSpec, build_travel_time, make_conductivity
from varheat.oracles import fd_eigenvalues
from varheat.spectrum import find_eigenvalues
from varheat.svg import LineSeries, write_line_plot
from varheat.transform import delta_values

c = make_conductivity("parabolic24")
tt = build_travel_time(c)

ks = np.linspace(0.0, 5.0, 600)
series = []
for N in (0, 1, 2):
    vals = delta_values(c, tt, ks, SeriesSpec(truncation_N=N))
    series.append(LineSeries(ks, vals, f"N={N}"))
write_line_plot("demo02_delta.svg", series, title="characteristic function",
                xlabel="k", ylabel="Delta_N(k)")
print("wrote demo02_delta.svg")

refs = fd_eigenvalues(c, 4, 512)
print("\nfirst four eigenvalues (parabolic24):")
print(f"{'mode':>4} {'N=0':>11} {'N=1':>11} {'N=2':>11} {'grid ref':>11}")
rows = {}
for N in (0, 1, 2):
    pairs = find_eigenvalues(c, tt, SeriesSpec(truncation_N=N), 4)
    rows[N] = [p.lam for p in pairs]
for m in range(4):
    print(f"{m + 1:>4} {rows[0][m]:>11.4f} {rows[1][m]:>11.4f} "
          f"{rows[2][m]:>11.4f} {refs[m]:>11.4f}")
