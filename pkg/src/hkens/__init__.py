"""H-K ensemble clustering for high-dimensional data.

Stages: impute missing values, projected clustering (ORCLUS), divisive
hierarchical K-means ensemble, threshold split, MSE-checked merge, and
consensus over the ensemble.
"""
from .core import Cluster, Dataset, Partition, centroid, cluster_sse, euclidean_distance, mse, partition_objective
from .evaluate import purity, rand_index
from .ingest import PipelineConfig, impute_missing, load_config, load_csv, load_dataset
from .kmeans import kmeans, seed_random
from .orclus import orclus
from .pipeline import run_baseline, run_pipeline

__all__ = [
    "Cluster", "Dataset", "Partition", "PipelineConfig", "centroid", "cluster_sse", "euclidean_distance",
    "impute_missing", "kmeans", "load_config", "load_csv", "load_dataset", "mse", "orclus",
    "partition_objective", "purity", "rand_index", "run_baseline", "run_pipeline", "seed_random",
]
