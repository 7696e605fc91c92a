"""Reference Monte Carlo comparison: 100 random targets, secant vs proportional gains.

    python scripts/run_monte_carlo.py --out out/montecarlo [--config configs/reference_montecarlo.json]
"""
import argparse
import time

from preisach_remnant import ExperimentConfig, emit_outputs, run_monte_carlo
from preisach_remnant.experiment import summarize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config")
    ap.add_argument("--out", default="out/montecarlo")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    cfg = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    t0 = time.perf_counter()
    result = run_monte_carlo(cfg, threads=args.threads)
    emit_outputs(result, args.out, cfg)
    summary = summarize(result)

    print(f"{summary['samples']} samples in {time.perf_counter() - t0:.1f} s, outputs in {args.out}")
    print(f"{'method':<28}{'mean':>7}{'median':>8}{'max':>5}{'conv':>7}")
    for name, s in summary["methods"].items():
        print(f"{name:<28}{s['mean_iterations']:>7.2f}{s['median_iterations']:>8g}{s['max_iterations']:>5}"
              f"{s['convergence_rate']:>7.0%}")
    secant = result.iterations("secant") if "secant" in result.method_names else None
    if secant:
        for name in result.method_names:
            if name != "secant":
                worse = sum(s > p for s, p in zip(secant, result.iterations(name)))
                print(f"secant slower than {name} on {worse} samples")
    print("histogram (iterations: count)")
    for name, counts in result.histogram.items():
        print(f"  {name}: " + ", ".join(f"{k}: {counts[k]}" for k in sorted(counts)))


if __name__ == "__main__":
    main()
