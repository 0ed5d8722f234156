"""Turning a Lotka-Volterra trajectory into BBO migration rates.

Run: python demos/02_migration_schedule.py [out_dir]
"""
import os
import sys

import numpy as np

from bandclust import LVParams, build_schedule, integrate_lv
from bandclust.io import save_trajectory

out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out_dir, exist_ok=True)

params = LVParams()  # x' = a x - b x y, y' = g y - d x y
traj = integrate_lv(params)
print(f"{len(traj)} samples, t in [0, {traj.t[-1]:g}], truncated={traj.truncated}")
save_trajectory(traj, os.path.join(out_dir, "lv_default.csv"))

schedule = build_schedule(traj, pop_size=10)
print("rank  immigration  emigration   (rank 0 = worst habitat)")
for rank, (lam, mu) in enumerate(zip(schedule.immigration, schedule.emigration)):
    print(f"{rank:4d}  {lam:11.3f}  {mu:10.3f}")

# the rates keep the curve's nonlinear spacing but are always monotone in rank
for label, p in [("oscillating (conventional sign)", LVParams(conventional=True, x0=2.0, y0=0.5)),
                 ("diverging, truncated", LVParams(alpha=3.0, beta=0.0, gamma=3.0, delta=0.0))]:
    t = integrate_lv(p)
    s = build_schedule(t, 10)
    print(f"\n{label}: {len(t)} samples")
    print("immigration", np.round(s.immigration, 3))
    print("emigration ", np.round(s.emigration, 3))
