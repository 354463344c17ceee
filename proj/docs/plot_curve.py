"""Plot error_curve.csv written by `ridgeapprox curve`.

usage: python3 plot_curve.py OUT_DIR/error_curve.csv
"""
import sys

import matplotlib.pyplot as plt
import pandas as pd

df = pd.read_csv(sys.argv[1], comment="#")
bounds = df.drop_duplicates("r")
plt.semilogy(bounds.r, bounds.bound_opt, "r-", label="bound, optimal projector")
plt.semilogy(bounds.r, bounds.bound_kl, "k-.", label="bound, K-L projector")
for m, g in df.groupby("M"):
    plt.semilogy(g.r, g.error, "o", ms=3, label=f"error, M={m}")
plt.xlabel("rank r")
plt.ylabel("error")
plt.legend()
plt.savefig(sys.argv[1].replace(".csv", ".png"), dpi=150)
