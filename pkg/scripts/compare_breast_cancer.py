"""Pipeline vs plain k-means on the Wisconsin breast-cancer table, over several seeds."""
import argparse
from pathlib import Path

from hkens import PipelineConfig, load_dataset, run_baseline, run_pipeline

DATA = Path(__file__).resolve().parents[1] / "data" / "breast_cancer_wisconsin.csv"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--standardize", action="store_true")
    args = ap.parse_args()

    data = load_dataset(DATA, "class", standardize=args.standardize)
    print("seed  k  purity  rand   | kmeans purity  rand")
    for seed in range(args.seeds):
        cfg = PipelineConfig(k=args.k, seed=seed, standardize=args.standardize)
        res = run_pipeline(data, cfg)
        _, b = run_baseline(data, cfg)
        r = res.report
        print(f"{seed:4d} {res.final.k:2d}  {float(r.get('final.purity')):.4f}  {float(r.get('final.rand_index')):.4f} |"
              f"        {float(b.get('final.purity')):.4f}  {float(b.get('final.rand_index')):.4f}")


if __name__ == "__main__":
    main()
