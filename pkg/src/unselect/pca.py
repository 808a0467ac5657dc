"""Principal component analysis with SVD and covariance-eigen backends.

Fits a PCModel over mean-centered data, decides how many components to
keep under several retention policies, projects tables onto the kept
components, and scores the original attributes from the loadings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataset import DataTable

__all__ = ["PCModel", "fit_pca", "retain_count", "transform", "loading_scores"]


@dataclass(frozen=True)
class PCModel:
    """Mean vector, orthonormal loadings, singular values and variance ratios.

    Loadings columns are the principal directions; singular values are
    non-increasing.  ``n_samples`` is kept so eigenvalues (s^2 / (n-1))
    can be recovered for the kaiser retention rule.
    """

    mean: np.ndarray
    loadings: np.ndarray
    singular_values: np.ndarray
    explained_ratio: np.ndarray
    n_samples: int

    @property
    def n_components(self) -> int:
        return self.loadings.shape[1]

    def eigenvalues(self) -> np.ndarray:
        return self.singular_values**2 / (self.n_samples - 1)

    def to_json(self) -> str:
        return json.dumps(
            {
                "mean": self.mean.tolist(),
                "loadings_row_major": self.loadings.tolist(),
                "singular_values": self.singular_values.tolist(),
                "explained_ratio": self.explained_ratio.tolist(),
                "n_samples": self.n_samples,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "PCModel":
        d = json.loads(text)
        return cls(
            mean=np.asarray(d["mean"], dtype=float),
            loadings=np.asarray(d["loadings_row_major"], dtype=float),
            singular_values=np.asarray(d["singular_values"], dtype=float),
            explained_ratio=np.asarray(d["explained_ratio"], dtype=float),
            n_samples=int(d["n_samples"]),
        )


def _canonicalize_signs(loadings: np.ndarray) -> np.ndarray:
    """Flip columns so each column's largest-magnitude entry is non-negative.

    SVD is only defined up to per-column sign; pinning it makes outputs
    deterministic and golden-testable.
    """
    out = loadings.copy()
    for c in range(out.shape[1]):
        pivot = int(np.argmax(np.abs(out[:, c])))
        if out[pivot, c] < 0:
            out[:, c] = -out[:, c]
    return out


def fit_pca(table: DataTable, method: str = "svd") -> PCModel:
    """Fit principal components of the mean-centered data matrix.

    ``svd`` factorizes the centered matrix directly; ``covariance-eigen``
    eigendecomposes the (n-1)-normalized covariance.  Both agree on
    singular values and on loadings up to column sign.
    """
    n, d = table.values.shape
    if n < 2:
        raise ValueError("PCA needs at least 2 objects")
    mean = table.values.mean(axis=0)
    centered = table.values - mean
    m = min(n, d)

    if method == "svd":
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        loadings = vt.T[:, :m]
        singular = s[:m]
    elif method == "covariance-eigen":
        cov = centered.T @ centered / (n - 1)
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1][:m]
        eigvals = np.clip(eigvals[order], 0.0, None)
        loadings = eigvecs[:, order]
        singular = np.sqrt(eigvals * (n - 1))
    else:
        raise ValueError(f"unknown PCA method {method!r}")

    eig = singular**2 / (n - 1)
    total = eig.sum()
    ratio = eig / total if total > 0 else np.zeros_like(eig)
    return PCModel(
        mean=mean,
        loadings=_canonicalize_signs(loadings),
        singular_values=singular,
        explained_ratio=ratio,
        n_samples=n,
    )


def retain_count(model: PCModel, policy) -> int:
    """Number of components to keep under a retention policy.

    Policies are ``("var", f)`` for the smallest k whose cumulative
    explained ratio reaches f, ``("kaiser", None)`` for eigenvalues above
    the mean eigenvalue, and ``("fixed", k)`` clamped to the model size.
    Always at least 1.
    """
    kind, arg = policy
    if kind == "var":
        f = float(arg)
        if not 0.0 < f <= 1.0:
            raise ValueError(f"variance fraction must be in (0, 1], got {f}")
        cum = np.cumsum(model.explained_ratio)
        k = int(np.searchsorted(cum, f - 1e-12)) + 1
        return min(max(k, 1), model.n_components)
    if kind == "kaiser":
        eig = model.eigenvalues()
        k = int(np.count_nonzero(eig > eig.mean()))
        return max(k, 1)
    if kind == "fixed":
        k = int(arg)
        if k < 1:
            raise ValueError(f"fixed retention count must be positive, got {k}")
        return min(k, model.n_components)
    raise ValueError(f"unknown retention policy {kind!r}")


def transform(model: PCModel, table: DataTable, k: int) -> DataTable:
    """Project a table onto the first k principal directions (scores)."""
    if not 1 <= k <= model.n_components:
        raise ValueError(f"k={k} out of range for {model.n_components} components")
    if table.n_attrs != model.loadings.shape[0]:
        raise ValueError(
            f"table has {table.n_attrs} attributes, model expects "
            f"{model.loadings.shape[0]}"
        )
    scores = (table.values - model.mean) @ model.loadings[:, :k]
    return DataTable(
        values=scores,
        attr_names=tuple(f"PC{i + 1}" for i in range(k)),
        labels=table.labels,
        name=table.name,
    )


def loading_scores(model: PCModel, k: int) -> list[tuple[int, float]]:
    """Rank original attributes by variance explained within the kept subspace.

    score(j) = sum over components c <= k of eigenvalue_c * loading[j, c]^2,
    i.e. the share of attribute j's variance the retained components carry
    (its communality).  Ranked descending, ties broken by lower attribute
    index.
    """
    if not 1 <= k <= model.n_components:
        raise ValueError(f"k={k} out of range for {model.n_components} components")
    eig = model.eigenvalues()[:k]
    scores = (model.loadings[:, :k] ** 2 * eig).sum(axis=1)
    order = sorted(range(len(scores)), key=lambda j: (-scores[j], j))
    return [(j, float(scores[j])) for j in order]
