"""Finer friction pyramids: larger regions, slower iterations."""
from balance_region import sweep_linearization
from balance_region import fixtures as fx

res = sweep_linearization(fx.multi_contact(), fx.robot(), fx.multi_contact_accel(), iterations=50)
print("n_sides  volume(50 it)  ms/iteration")
for r in res:
    print(f"{r.n_sides:7d}  {r.final_volume:13.4f}  {r.time_per_iteration * 1e3:12.2f}")
