"""Rand index of the ensemble pipeline vs plain k-means on noisy Gaussian blobs.

    python scripts/run_synthetic_sweep.py --seeds 10 --noise-scale 3.0
"""
import argparse
import statistics

from hkens import Dataset, PipelineConfig, run_baseline, run_pipeline
from hkens.synth import gaussian_blobs


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--centers", type=int, default=4)
    ap.add_argument("--informative", type=int, default=5)
    ap.add_argument("--noise", type=int, default=10)
    ap.add_argument("--noise-scale", type=float, default=3.0)
    ap.add_argument("--threshold", type=int, default=40)
    ap.add_argument("--ensemble-size", type=int, default=5)
    args = ap.parse_args()

    ours, base = [], []
    print("seed  k  rand(pipeline)  rand(kmeans)")
    for seed in range(args.seeds):
        X, y = gaussian_blobs(args.n, args.centers, args.informative, args.noise,
                              noise_scale=args.noise_scale, seed=seed)
        data = Dataset(X, y, name=f"blobs-{seed}")
        cfg = PipelineConfig(k=args.centers, d=args.informative, threshold=args.threshold,
                             ensemble_size=args.ensemble_size, seed=seed)
        res = run_pipeline(data, cfg)
        _, brep = run_baseline(data, cfg)
        ours.append(float(res.report.get("final.rand_index")))
        base.append(float(brep.get("final.rand_index")))
        print(f"{seed:4d} {res.final.k:2d}  {ours[-1]:14.4f}  {base[-1]:12.4f}")
    print(f"median {statistics.median(ours):.4f} vs {statistics.median(base):.4f}")


if __name__ == "__main__":
    main()
