"""The full pipeline from a config file: one analysis, a sweep, a verification run.

The same steps are available from the shell as ``filastab analyze``,
``filastab sweep`` and ``filastab verify``.
"""

from pathlib import Path

from filastab import load_config, run_analysis, run_sweep, run_verification

configs = Path(__file__).resolve().parents[1] / "configs"

cfg = load_config(configs / "solar_loop.yaml")
report = run_analysis(cfg)
print("L =", report.geometry["L"], " planar:", report.geometry["planar"])
print("stability:", report.stability)
print("selected branch:", report.modes["selected"])

sweep = run_sweep(load_config(configs / "stability_sweep.yaml"))
print("\n" + "  ".join(sweep.header))
for row in sweep.rows():
    print("  ".join(f"{v:.4g}" if isinstance(v, float) else str(v) for v in row))

v = run_verification(cfg)
print("\nwhere the alternative readings disagree:")
for name, entry in v["discrepancies"].items():
    print(f"  {name}: {entry['label']}")
d = v["discrepancies"]
print("  B0 forms max |diff|:", d["b0_forms"]["max_abs_difference"])
print("  growth formula sign:", d["continuity_sign"]["root_satisfying_growth_formula"],
      " sign zeroing the squared relation:", d["continuity_sign"]["root_zeroing_squared_relation"])
print("  current residual:", d["equilibrium_current_residual"]["magnitude"])
print("\nscan vs closed form:", v["verification"]["growth_scan"]["agrees"])
