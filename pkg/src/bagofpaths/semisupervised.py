"""Semi-supervised node classification on top of the distance kernels.

Protocol: the labeled pool is split into ``n_outer`` stratified folds. In
outer round ``r`` a block of consecutive folds starting at ``r`` (as many as
the labeling rate asks for, at least one, at most ``n_outer - 1``) keeps its
labels and the remaining pool nodes are the test set. At a 10% labeling rate
with 10 folds every fold is the labeled set exactly once. Hyperparameters
(theta, regularization) are picked by an inner stratified CV over the
labeled block only; the classifier is a one-vs-rest linear SVM on the top
kernel eigenvectors, which are computed transductively from the whole graph.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.model_selection import StratifiedKFold
from sklearn.svm import LinearSVC

from .distance import potential_distance, surprisal_distance
from .engine import build_model
from .errors import DegenerateTraining, InsufficientClassSize, ParseError, ValidationError
from .kernel import distance_to_kernel, top_eigenvectors

DEFAULT_THETAS = (0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
DEFAULT_C = (0.001, 0.01, 0.1, 1, 10, 100, 1000)
DEFAULT_REGS = tuple(1.0 / c for c in DEFAULT_C)


@dataclass(frozen=True, eq=False)
class LabeledGraphDataset:
    graph: object
    labels: np.ndarray  # -1 marks an unlabeled node
    classes: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        if labels.shape != (self.graph.n,):
            raise ValidationError(f"expected {self.graph.n} labels, got shape {labels.shape}")
        bad = np.flatnonzero((labels < -1) | (labels >= self.classes))
        if len(bad):
            raise ValidationError(f"node {bad[0]} has label {labels[bad[0]]} outside [0, {self.classes})")
        for c in range(self.classes):
            if not np.any(labels == c):
                raise InsufficientClassSize(c, 0, 1)
        object.__setattr__(self, "labels", labels)

    @property
    def labeled_nodes(self):
        return np.flatnonzero(self.labels >= 0)

    def label_of(self, nodes):
        return self.labels[np.asarray(nodes, dtype=int)]


def load_labels(stream, graph, classes=None):
    """Read ``node_id class_id`` lines (``#`` comments) into a dataset."""
    labels = np.full(graph.n, -1, dtype=int)
    for line_no, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(line_no, raw, "expected 'node_id class_id'")
        try:
            node, cls = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError(line_no, raw, "non-integer field") from None
        if not 0 <= node < graph.n:
            raise ParseError(line_no, raw, f"node {node} not in graph of {graph.n} nodes")
        if cls < 0:
            raise ParseError(line_no, raw, "class ids must be >= 0")
        if labels[node] >= 0:
            raise ParseError(line_no, raw, f"node {node} labeled twice")
        labels[node] = cls
    if classes is None:
        classes = int(labels.max()) + 1
    return LabeledGraphDataset(graph, labels, classes)


def stratified_folds(ds, n_folds, seed, nodes=None):
    """Split labeled nodes (all of them, or ``nodes``) into stratified folds.

    Returns a list of ``(train, test)`` node-index arrays; the test parts
    partition the nodes.
    """
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    nodes = ds.labeled_nodes if nodes is None else np.sort(np.asarray(nodes, dtype=int))
    y = ds.label_of(nodes)
    if np.any(y < 0):
        raise ValidationError(f"node {nodes[np.argmax(y < 0)]} is unlabeled")
    counts = np.bincount(y, minlength=ds.classes)
    for c, count in enumerate(counts):
        if count < n_folds:
            raise InsufficientClassSize(c, int(count), n_folds)
    skf = StratifiedKFold(n_splits=n_folds, shuffle=True, random_state=seed)
    return [(nodes[tr], nodes[te]) for tr, te in skf.split(np.zeros(len(nodes)), y)]


@dataclass(frozen=True, eq=False)
class LinearClassifier:
    """One linear score function per class; prediction is the argmax."""

    coef: np.ndarray  # (classes, features)
    intercept: np.ndarray  # (classes,)

    def scores(self, x):
        return np.asarray(x) @ self.coef.T + self.intercept

    def predict(self, x):
        # argmax returns the first maximum: ties go to the lowest class id
        return np.argmax(self.scores(x), axis=1)


def train_linear_classifier(x, y, reg_strength, classes=None):
    """Fit a one-vs-rest L2-regularized linear SVM (``C = 1 / reg_strength``)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    if classes is None:
        classes = int(y.max()) + 1
    counts = np.bincount(y, minlength=classes)
    missing = np.flatnonzero(counts == 0)
    if len(missing):
        raise DegenerateTraining(f"class {missing[0]} has no training examples")
    if classes < 2:
        raise DegenerateTraining("need at least two classes to train")
    n_feat = x.shape[1]
    if np.all(np.ptp(x, axis=0) <= 1e-12):
        # identical inputs carry no signal: predict the majority class
        intercept = np.zeros(classes)
        intercept[np.argmax(counts)] = 1.0
        return LinearClassifier(np.zeros((classes, n_feat)), intercept)
    coef = np.empty((classes, n_feat))
    intercept = np.empty(classes)
    for c in range(classes):
        svm = LinearSVC(C=1.0 / reg_strength, max_iter=20_000, random_state=0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            svm.fit(x, (y == c).astype(int))
        coef[c] = svm.coef_[0]
        intercept[c] = svm.intercept_[0]
    return LinearClassifier(coef, intercept)


@dataclass
class EvalReport:
    mean_accuracy: float
    std_accuracy: float
    fold_accuracies: list
    chosen_hyperparams: list = field(default_factory=list)  # (theta, reg) per fold

    def write(self, record_fh, folds_fh=None):
        record_fh.write("# mean_accuracy\tstd_accuracy\tn_folds\n")
        record_fh.write(f"{self.mean_accuracy:.17g}\t{self.std_accuracy:.17g}\t{len(self.fold_accuracies)}\n")
        if folds_fh is not None:
            folds_fh.write("# fold\taccuracy\ttheta\treg_strength\n")
            for f, (acc, (theta, reg)) in enumerate(zip(self.fold_accuracies, self.chosen_hyperparams)):
                folds_fh.write(f"{f}\t{acc:.17g}\t{theta:.17g}\t{reg:.17g}\n")


def embed(graph, theta, measure, dims):
    """Top-``dims`` eigenvectors of the centered kernel of one distance."""
    m = build_model(graph, theta)
    d = potential_distance(m) if measure == "potential" else surprisal_distance(m)
    return top_eigenvectors(distance_to_kernel(d), dims).vectors


def _accuracy(clf, x, y):
    return float(np.mean(clf.predict(x) == y))


def _tune(ds, features, train_nodes, theta_grid, reg_grid, n_inner, seed):
    """Pick (theta, reg) maximizing pooled inner-CV accuracy on ``train_nodes``.

    Ties go to the smallest theta, then the smallest regularization.
    """
    folds = stratified_folds(ds, n_inner, seed, nodes=train_nodes)
    best, best_correct = None, -1
    for theta in sorted(theta_grid):
        x = features(theta)
        for reg in sorted(reg_grid):
            correct = 0
            for tr, te in folds:
                clf = train_linear_classifier(x[tr], ds.label_of(tr), reg, ds.classes)
                correct += int(np.sum(clf.predict(x[te]) == ds.label_of(te)))
            if correct > best_correct:
                best, best_correct = (theta, reg), correct
    return best


def evaluate(
    ds,
    measure="potential",
    labeling_rate=0.1,
    theta_grid=DEFAULT_THETAS,
    reg_grid=DEFAULT_REGS,
    dims=5,
    seed=0,
    n_outer=10,
    n_inner=5,
):
    """Outer/inner cross-validated accuracy of the kernel-embedding classifier."""
    if not 0 < labeling_rate < 1:
        raise ValidationError(f"labeling_rate must be in (0, 1), got {labeling_rate}")
    if not theta_grid or not reg_grid:
        raise ValidationError("hyperparameter grids must be non-empty")
    if measure not in ("potential", "surprisal"):
        raise ValidationError(f"unknown measure {measure!r}")

    cache = {}

    def features(theta):
        if theta not in cache:
            cache[theta] = embed(ds.graph, theta, measure, dims)
        return cache[theta]

    pool = ds.labeled_nodes
    outer = [te for _, te in stratified_folds(ds, n_outer, seed)]
    block = int(np.clip(round(labeling_rate * n_outer), 1, n_outer - 1))
    accuracies, chosen = [], []
    for r in range(n_outer):
        labeled = np.sort(np.concatenate([outer[(r + b) % n_outer] for b in range(block)]))
        test = np.setdiff1d(pool, labeled)
        theta, reg = _tune(ds, features, labeled, theta_grid, reg_grid, n_inner, seed + 1 + r)
        x = features(theta)
        clf = train_linear_classifier(x[labeled], ds.label_of(labeled), reg, ds.classes)
        accuracies.append(_accuracy(clf, x[test], ds.label_of(test)))
        chosen.append((float(theta), float(reg)))
    return EvalReport(float(np.mean(accuracies)), float(np.std(accuracies)), accuracies, chosen)
