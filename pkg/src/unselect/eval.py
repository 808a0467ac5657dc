"""Built-in classifiers, stratified k-fold cross-validation and the
benchmark runner that assembles dataset x method x classifier accuracy
tables.

The three classifiers (Gaussian naive Bayes, k-NN, a discrete decision
table) stand in for the Weka lineup; all fold-level preprocessing (z-score
scaling, discretization cut points) is fit on training folds only unless
the leaky global-prep variant is requested explicitly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .dataset import (
    DataTable,
    DatasetError,
    DiscreteTable,
    FeatureSubset,
    Registry,
    apply_cut_points,
    fit_cut_points,
    project,
)
from .selectors import METHOD_IDS, SelectorConfig, select

__all__ = [
    "FoldPlan",
    "make_fold_plan",
    "gaussian_nb_fit",
    "gaussian_nb_predict",
    "knn_predict",
    "decision_table_fit",
    "decision_table_predict",
    "cross_validate",
    "CvResult",
    "EvalReport",
    "run_benchmark",
    "render_text_tables",
    "render_csv_tables",
    "CLASSIFIER_IDS",
    "EDR_K",
    "PCA_K",
]

CLASSIFIER_IDS = ("nb", "knn", "dtable")
CLASSIFIER_NAMES = {"nb": "Naive Bayes", "knn": "k-NN", "dtable": "Decision Table"}

# Feature counts pinned per benchmark dataset for the ranking selectors
# (the greedy methods decide their own size).
EDR_K = {"lung": 6, "breast": 5, "diabetes": 4, "heart": 4, "ecoli": 4}
PCA_K = {"lung": 17, "breast": 6, "diabetes": 3, "heart": 5, "ecoli": 3}

VARIANCE_FLOOR = 1e-9


@dataclass(frozen=True)
class FoldPlan:
    """Deterministic stratified fold assignment for one dataset."""

    seed: int
    k: int
    assignments: tuple[int, ...]

    def fold_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.assignments) == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.assignments) != fold)


def make_fold_plan(labels, k: int, seed: int) -> FoldPlan:
    """Assign objects to k folds, stratified by class.

    Within each class the shuffled members are dealt round-robin; the
    dealing position carries over between classes so overall fold sizes
    also differ by at most one.  Fully determined by (seed, k, labels).
    """
    labels = [str(y) for y in labels]
    n = len(labels)
    if not 2 <= k <= n:
        raise ValueError(f"fold count must be in [2, {n}], got {k}")
    rng = np.random.default_rng(seed)
    label_arr = np.asarray(labels, dtype=object)
    assignments = np.empty(n, dtype=int)
    position = 0
    for cls in sorted(set(labels)):
        members = np.flatnonzero(label_arr == cls)
        members = members[rng.permutation(len(members))]
        for i, obj in enumerate(members):
            assignments[obj] = (position + i) % k
        position = (position + len(members)) % k
    return FoldPlan(seed=seed, k=k, assignments=tuple(int(a) for a in assignments))


# ---------------------------------------------------------------------------
# Gaussian naive Bayes

@dataclass(frozen=True)
class NbModel:
    classes: tuple[str, ...]
    log_priors: np.ndarray
    means: np.ndarray       # class x attr
    variances: np.ndarray   # class x attr, floored


def gaussian_nb_fit(train: DataTable) -> NbModel:
    """Class priors plus per-class, per-attribute normal densities."""
    if train.labels is None:
        raise ValueError("gaussian naive Bayes needs labeled training data")
    classes = train.class_values()
    y = np.asarray(train.labels, dtype=object)
    n = train.n_objects
    log_priors, means, variances = [], [], []
    for cls in classes:
        rows = train.values[y == cls]
        log_priors.append(np.log(len(rows) / n))
        means.append(rows.mean(axis=0))
        variances.append(np.maximum(rows.var(axis=0), VARIANCE_FLOOR))
    return NbModel(
        classes=classes,
        log_priors=np.asarray(log_priors),
        means=np.asarray(means),
        variances=np.asarray(variances),
    )


def gaussian_nb_predict(model: NbModel, row: np.ndarray) -> str:
    """argmax of log prior + summed log normal densities; ties resolve to
    the lexicographically first class (classes are stored sorted)."""
    row = np.asarray(row, dtype=float)
    ll = model.log_priors - 0.5 * np.sum(
        np.log(2.0 * np.pi * model.variances)
        + (row - model.means) ** 2 / model.variances,
        axis=1,
    )
    return model.classes[int(np.argmax(ll))]


# ---------------------------------------------------------------------------
# k-nearest neighbours

def _zscore_params(values: np.ndarray):
    mean = values.mean(axis=0)
    std = values.std(axis=0, ddof=1) if len(values) > 1 else np.ones(values.shape[1])
    std = np.where(std == 0, 1.0, std)
    return mean, std


def _knn_vote(train_scaled, train_labels, row_scaled, k):
    dist = np.sqrt(((train_scaled - row_scaled) ** 2).sum(axis=1))
    order = np.argsort(dist, kind="stable")[:k]   # distance ties: lower index
    votes: dict[str, int] = {}
    for idx in order:
        votes[train_labels[idx]] = votes.get(train_labels[idx], 0) + 1
    top = max(votes.values())
    tied = {c for c, v in votes.items() if v == top}
    if len(tied) == 1:
        return next(iter(tied))
    for idx in order:                              # vote tie: nearest wins
        if train_labels[idx] in tied:
            return train_labels[idx]
    raise AssertionError("unreachable")


def knn_predict(train: DataTable, row: np.ndarray, k: int = 3) -> str:
    """Majority vote among the k nearest training rows (z-scored space)."""
    if train.labels is None:
        raise ValueError("k-NN needs labeled training data")
    if not 1 <= k <= train.n_objects:
        raise ValueError(f"k={k} out of range for {train.n_objects} training rows")
    mean, std = _zscore_params(train.values)
    scaled = (train.values - mean) / std
    return _knn_vote(scaled, train.labels, (np.asarray(row, float) - mean) / std, k)


# ---------------------------------------------------------------------------
# Discrete decision table

@dataclass(frozen=True)
class DecisionTableModel:
    lookup: dict
    fallback: str


def _majority(labels) -> str:
    counts: dict[str, int] = {}
    for y in labels:
        counts[y] = counts.get(y, 0) + 1
    top = max(counts.values())
    return min(c for c, v in counts.items() if v == top)


def decision_table_fit(train) -> DecisionTableModel:
    """Exact-match lookup from coded feature tuple to its majority class."""
    if train.labels is None:
        raise ValueError("decision table needs labeled training data")
    buckets: dict[tuple, list[str]] = {}
    for i in range(train.n_objects):
        buckets.setdefault(tuple(int(c) for c in train.codes[i]), []).append(
            train.labels[i]
        )
    return DecisionTableModel(
        lookup={key: _majority(ys) for key, ys in buckets.items()},
        fallback=_majority(train.labels),
    )


def decision_table_predict(model: DecisionTableModel, coded_row) -> str:
    """Seen tuple -> its majority class; unseen -> global majority."""
    return model.lookup.get(tuple(int(c) for c in coded_row), model.fallback)


# ---------------------------------------------------------------------------
# Cross-validation

@dataclass(frozen=True)
class CvResult:
    accuracy: float                      # percent over all test predictions
    fold_accuracies: tuple[float, ...]   # percent per fold
    fold_sizes: tuple[int, ...]


def _fit_predict_fold(train_values, train_labels, test_values, classifier,
                      strategy, bins, knn_k, prep_values):
    """One fold: fit on the training rows, predict the test rows.

    prep_values supplies the rows used to fit scalers / cut points; it
    equals train_values except under the leaky global-prep variant.
    """
    train = DataTable(values=train_values, attr_names=_names(train_values),
                      labels=train_labels)
    if classifier == "nb":
        model = gaussian_nb_fit(train)
        return [gaussian_nb_predict(model, row) for row in test_values]
    if classifier == "knn":
        mean, std = _zscore_params(prep_values)
        scaled = (train_values - mean) / std
        return [
            _knn_vote(scaled, train.labels, (row - mean) / std, knn_k)
            for row in test_values
        ]
    if classifier == "dtable":
        cuts = fit_cut_points(prep_values, strategy, bins)
        codes = apply_cut_points(train_values, cuts)
        coded = DiscreteTable(
            codes=codes,
            bins_per_attr=tuple(max(1, bins) if len(c) else 1 for c in cuts),
            attr_names=train.attr_names,
            labels=train_labels,
        )
        model = decision_table_fit(coded)
        test_codes = apply_cut_points(test_values, cuts)
        return [decision_table_predict(model, row) for row in test_codes]
    raise ValueError(
        f"unknown classifier {classifier!r}; valid: {', '.join(CLASSIFIER_IDS)}"
    )


def _names(values):
    return tuple(f"a{j + 1}" for j in range(values.shape[1]))


def cross_validate(table: DataTable, subset: FeatureSubset, classifier: str,
                   plan: FoldPlan, *, strategy: str = "eqfreq", bins: int = 3,
                   knn_k: int = 3, global_prep: bool = False,
                   _replace_test_rows=None) -> CvResult:
    """Stratified k-fold accuracy of one classifier on a feature subset.

    Preprocessing is fit on the training folds only; ``global_prep=True``
    reproduces the leaky fit-on-everything variant for comparison.
    ``_replace_test_rows`` is a test seam: (fold, rows) substitutes the
    prediction inputs of one fold without touching any training data.
    """
    if table.labels is None:
        raise ValueError("cross-validation needs labeled data")
    projected = project(table, subset)
    values = projected.values
    labels = np.asarray(projected.labels)
    correct_total = 0
    fold_accs, fold_sizes = [], []
    for fold in range(plan.k):
        train_idx = plan.train_indices(fold)
        test_idx = plan.fold_indices(fold)
        if len(train_idx) == 0:
            raise ValueError(f"fold {fold} leaves no training rows")
        if len(test_idx) == 0:
            fold_accs.append(0.0)
            fold_sizes.append(0)
            continue
        test_values = values[test_idx]
        if _replace_test_rows is not None and _replace_test_rows[0] == fold:
            test_values = np.asarray(_replace_test_rows[1], dtype=float)
        prep = values if global_prep else values[train_idx]
        predictions = _fit_predict_fold(
            values[train_idx], tuple(labels[train_idx]), test_values,
            classifier, strategy, bins, knn_k, prep,
        )
        correct = sum(p == t for p, t in zip(predictions, labels[test_idx]))
        correct_total += correct
        fold_accs.append(100.0 * correct / len(test_idx))
        fold_sizes.append(len(test_idx))
    return CvResult(
        accuracy=100.0 * correct_total / table.n_objects,
        fold_accuracies=tuple(fold_accs),
        fold_sizes=tuple(fold_sizes),
    )


# ---------------------------------------------------------------------------
# Benchmark runner

@dataclass
class EvalReport:
    """All accuracy rows of one benchmark run plus any per-dataset errors."""

    rows: list[dict] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {"config": self.config, "errors": self.errors, "rows": self.rows}
        return json.dumps(payload, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        d = json.loads(text)
        return cls(rows=d["rows"], errors=d["errors"], config=d["config"])

    def datasets(self):
        return sorted({r["dataset"] for r in self.rows})


def config_fingerprint(resolved: dict) -> str:
    """Stable short hash of every resolved parameter, for traceability."""
    blob = json.dumps(resolved, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _pinned_k(method: str, dataset_name: str, d: int, cfg: SelectorConfig):
    if method == "edr":
        if cfg.edr_k is not None:
            return min(cfg.edr_k, d)
        return min(EDR_K.get(dataset_name, 4), d)
    if method == "pca":
        return min(PCA_K.get(dataset_name, 4), d)
    return None


def run_benchmark(registry: Registry, datasets=None, methods=METHOD_IDS,
                  classifiers=CLASSIFIER_IDS, seed: int = 1, folds: int = 10,
                  cfg: SelectorConfig = SelectorConfig(), missing: str = "reject",
                  global_prep: bool = False, knn_k: int = 3) -> EvalReport:
    """Evaluate the full dataset x method x classifier cross product.

    Subsets are selected once per dataset on the full unlabeled data (the
    selectors never see labels), then scored with one shared fold plan.
    Failures are recorded per dataset and the rest of the run continues.
    """
    names = list(datasets) if datasets is not None else registry.names()
    base_config = {
        "seed": seed,
        "folds": folds,
        "strategy": cfg.strategy,
        "bins": cfg.bins,
        "pc_policy": list(cfg.pc_policy),
        "knn_k": knn_k,
        "global_prep": global_prep,
        "missing": missing,
    }
    report = EvalReport(config=dict(base_config, datasets=sorted(names),
                                    methods=sorted(methods),
                                    classifiers=sorted(classifiers)))
    for dataset_name in names:
        try:
            table = registry.load(dataset_name, missing=missing)
            if table.labels is None:
                raise DatasetError(f"dataset {dataset_name!r} has no labels")
            plan = make_fold_plan(table.labels, folds, seed)
            for method in methods:
                k = _pinned_k(method, dataset_name, table.n_attrs, cfg)
                subset = select(table, method, cfg, k)
                for classifier in classifiers:
                    result = cross_validate(
                        table, subset, classifier, plan,
                        strategy=cfg.strategy, bins=cfg.bins, knn_k=knn_k,
                        global_prep=global_prep,
                    )
                    resolved = dict(base_config, dataset=dataset_name,
                                    method=method, classifier=classifier,
                                    subset=subset.to_one_based())
                    report.rows.append({
                        "dataset": dataset_name,
                        "method": method,
                        "classifier": classifier,
                        "accuracy": result.accuracy,
                        "fold_accuracies": list(result.fold_accuracies),
                        "subset": subset.to_one_based(),
                        "fingerprint": config_fingerprint(resolved),
                        "seed": seed,
                    })
        except Exception as exc:   # noqa: BLE001 - failures become report rows
            report.errors.append({"dataset": dataset_name, "error": str(exc)})
    report.rows.sort(key=lambda r: (r["dataset"], r["method"], r["classifier"]))
    report.errors.sort(key=lambda r: r["dataset"])
    return report


def _table_cells(report: EvalReport, dataset: str, methods, classifiers):
    cells = {}
    for row in report.rows:
        if row["dataset"] == dataset:
            cells[(row["classifier"], row["method"])] = row["accuracy"]
    lines = []
    for classifier in classifiers:
        entries = []
        for method in methods:
            acc = cells.get((classifier, method))
            entries.append("" if acc is None else f"{acc:.4f}")
        lines.append((CLASSIFIER_NAMES.get(classifier, classifier), entries))
    return lines


def render_text_tables(report: EvalReport, methods=METHOD_IDS,
                       classifiers=CLASSIFIER_IDS) -> str:
    """One aligned accuracy table per dataset, classifiers x methods."""
    out = []
    for dataset in report.datasets():
        out.append(f"Classification accuracy for {dataset}")
        header = ["Classifier"] + [m.upper() for m in methods]
        body = _table_cells(report, dataset, methods, classifiers)
        widths = [
            max(len(header[0]), *(len(name) for name, _ in body)),
            *(
                max(len(header[j + 1]), *(len(row[j]) for _, row in body))
                for j in range(len(methods))
            ),
        ]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        out.append(fmt.format(*header))
        for name, row in body:
            out.append(fmt.format(name, *row))
        out.append("")
    for err in report.errors:
        out.append(f"ERROR {err['dataset']}: {err['error']}")
    return "\n".join(out).rstrip() + "\n"


def render_csv_tables(report: EvalReport, methods=METHOD_IDS,
                      classifiers=CLASSIFIER_IDS) -> str:
    """Chart-ready CSV: dataset,classifier,<method columns>."""
    lines = ["dataset,classifier," + ",".join(methods)]
    for dataset in report.datasets():
        for name, row in _table_cells(report, dataset, methods, classifiers):
            lines.append(f"{dataset},{name}," + ",".join(row))
    return "\n".join(lines) + "\n"
