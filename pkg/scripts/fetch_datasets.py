#!/usr/bin/env python3
"""Fetch the five benchmark datasets into data/.

Four ARFF files come verbatim from public GitHub mirrors of the UCI
machine-learning repository; the WDBC breast-cancer table is exported
from scikit-learn's bundled copy (identical to the UCI distribution).

Set UNSELECT_FETCH_BASE to rewrite the https://github.com prefix when the
canonical host has to be reached through a mirror or proxy.

Usage:  python scripts/fetch_datasets.py [target_dir]
"""

import csv
import os
import sys
import urllib.request

SOURCES = {
    "diabetes.arff":
        "https://github.com/renatopp/arff-datasets/raw/master/classification/diabetes.arff",
    "ecoli.arff":
        "https://github.com/renatopp/arff-datasets/raw/master/classification/ecoli.arff",
    "heart-statlog.arff":
        "https://github.com/renatopp/arff-datasets/raw/master/classification/heart.statlog.arff",
    # complete-data variant: the five originally missing cells arrive
    # already imputed upstream
    "lung-cancer.arff":
        "https://github.com/lpfgarcia/ucipp/raw/master/uci/lung-cancer.arff",
}

REGISTRY = """\
# Benchmark dataset registry: name, path, label column
# Paths are relative to this file. The label column is a 1-based index,
# a column name, or "auto" (ARFF files use their nominal class attribute).
lung, lung-cancer.arff, auto
breast, wdbc.csv, diagnosis
diabetes, diabetes.arff, auto
heart, heart-statlog.arff, auto
ecoli, ecoli.arff, auto
"""


def fetch(url, dest):
    base = os.environ.get("UNSELECT_FETCH_BASE")
    if base:
        url = url.replace("https://github.com", base.rstrip("/"))
    print(f"fetching {url}")
    with urllib.request.urlopen(url) as response:
        payload = response.read()
    with open(dest, "wb") as fh:
        fh.write(payload)
    print(f"  wrote {dest} ({len(payload)} bytes)")


def export_wdbc(dest):
    try:
        from sklearn.datasets import load_breast_cancer
    except ImportError:
        sys.exit("scikit-learn is required to export the WDBC table")
    bundle = load_breast_cancer()
    names = [n.replace(" ", "_") for n in bundle.feature_names]
    label = {0: "malignant", 1: "benign"}
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names + ["diagnosis"])
        for row, target in zip(bundle.data, bundle.target):
            writer.writerow([repr(float(v)) for v in row] + [label[int(target)]])
    print(f"  wrote {dest} (569 rows x 30 attributes)")


def main():
    target = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data"
    )
    os.makedirs(target, exist_ok=True)
    for filename, url in SOURCES.items():
        fetch(url, os.path.join(target, filename))
    export_wdbc(os.path.join(target, "wdbc.csv"))
    with open(os.path.join(target, "registry.txt"), "w") as fh:
        fh.write(REGISTRY)
    print(f"registry written to {os.path.join(target, 'registry.txt')}")


if __name__ == "__main__":
    main()
