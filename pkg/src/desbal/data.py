"""Dataset model, Keel/CSV ingestion, encoding, scaling and 5x2 splitting."""

import logging
from dataclasses import dataclass, field, replace

import numpy as np

logger = logging.getLogger(__name__)


class DataFormatError(ValueError):
    """Raised when an input file violates the expected format."""


@dataclass(frozen=True)
class AttributeSpec:
    """Per-column descriptor: numeric, or nominal with its category list."""

    kind: str  # "numeric" | "nominal"
    categories: tuple = ()

    def __post_init__(self):
        if self.kind not in ("numeric", "nominal"):
            raise ValueError(f"unknown attribute kind {self.kind!r}")


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix plus integer class labels.

    `labels` are class ids in [0, n_classes); `class_names` fixes the id
    order. `attribute_specs` describes each feature column; after one-hot
    encoding all columns are numeric.
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    class_names: tuple
    attribute_specs: tuple = field(default=())

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        labs = np.asarray(self.labels, dtype=int)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)
        if feats.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if feats.shape[0] != labs.shape[0]:
            raise ValueError("features row count must equal labels length")
        if len(self.class_names) < 2:
            raise DataFormatError("fewer than 2 classes")
        if labs.size and (labs.min() < 0 or labs.max() >= self.n_classes):
            raise ValueError("labels contain invalid class ids")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def validate(self) -> "Dataset":
        """Enforce the full ingestion invariants (every class id present)."""
        counts = self.class_counts()
        if (counts == 0).any():
            missing = [self.class_names[i] for i in np.flatnonzero(counts == 0)]
            raise DataFormatError(f"classes with no samples: {missing}")
        return self

    def subset(self, indices) -> "Dataset":
        """Row subset sharing the class id space (classes may go missing)."""
        idx = np.asarray(indices, dtype=int)
        return replace(self, features=self.features[idx], labels=self.labels[idx])

    def with_rows(self, features, labels, name=None) -> "Dataset":
        """New dataset with the same schema but different rows."""
        return replace(
            self,
            name=self.name if name is None else name,
            features=np.asarray(features, dtype=float),
            labels=np.asarray(labels, dtype=int),
        )


@dataclass(frozen=True)
class ImbalanceProfile:
    """Class counts, majority class and imbalance ratio of a dataset."""

    class_counts: tuple
    majority_class: int
    imbalance_ratio: float

    @classmethod
    def from_counts(cls, counts) -> "ImbalanceProfile":
        counts = np.asarray(counts, dtype=int)
        if counts.min() <= 0:
            raise ValueError("imbalance profile needs positive class counts")
        return cls(
            class_counts=tuple(int(c) for c in counts),
            majority_class=int(np.argmax(counts)),  # ties break to lowest id
            imbalance_ratio=float(counts.max() / counts.min()),
        )

    @classmethod
    def from_dataset(cls, dataset: Dataset) -> "ImbalanceProfile":
        return cls.from_counts(dataset.class_counts())


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

MISSING_MARKER = "?"


def _parse_keel_attribute(line: str):
    parts = line.split(None, 1)
    if len(parts) < 2 or not parts[1].strip():
        raise DataFormatError(f"malformed @attribute line: {line!r}")
    body = parts[1].strip()
    brace = body.find("{")
    if brace >= 0:  # nominal: name then {cat, cat, ...}, possibly glued
        name = body[:brace].strip()
        close = body.rfind("}")
        if not name or close < brace:
            raise DataFormatError(f"malformed @attribute line: {line!r}")
        categories = tuple(c.strip() for c in body[brace + 1 : close].split(","))
        return name, AttributeSpec("nominal", categories)
    return body.split()[0], AttributeSpec("numeric")


def parse_keel(text: str, name: str = "dataset") -> Dataset:
    """Parse a Keel `.dat` file into a Dataset.

    The class column is the declared `@outputs` attribute (last column when
    absent). Nominal feature columns keep their declared category order for
    later one-hot encoding; the class attribute's declaration order fixes the
    class ids. Rows containing the `?` missing marker are dropped with a
    logged count.
    """
    attr_names, attr_specs = [], []
    relation = name
    output_name = None
    data_lines = []
    in_data = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if in_data:
            data_lines.append(line)
            continue
        lower = line.lower()
        if lower.startswith("@relation"):
            parts = line.split(None, 1)
            if len(parts) == 2:
                relation = parts[1].strip()
        elif lower.startswith("@attribute"):
            aname, spec = _parse_keel_attribute(line)
            attr_names.append(aname)
            attr_specs.append(spec)
        elif lower.startswith("@outputs") or lower.startswith("@output"):
            names = line.split(None, 1)[1] if len(line.split(None, 1)) == 2 else ""
            outputs = [n.strip() for n in names.split(",") if n.strip()]
            if len(outputs) != 1:
                raise DataFormatError("exactly one @outputs attribute is required")
            output_name = outputs[0]
        elif lower.startswith("@inputs") or lower.startswith("@input"):
            pass  # informational; column order already fixed by @attribute
        elif lower.startswith("@data"):
            in_data = True
    if not in_data:
        raise DataFormatError("missing @data section")
    if not attr_names:
        raise DataFormatError("no @attribute declarations")
    if output_name is None:
        label_idx = len(attr_names) - 1
    else:
        matches = [i for i, n in enumerate(attr_names) if n.lower() == output_name.lower()]
        if not matches:
            raise DataFormatError(f"@outputs names unknown attribute {output_name!r}")
        label_idx = matches[0]
    rows = [[cell.strip() for cell in line.split(",")] for line in data_lines]
    return _assemble(relation, rows, attr_specs, label_idx, attr_names[label_idx])


def parse_csv(text: str, label_column: int = -1, name: str = "dataset") -> Dataset:
    """Parse a rectangular CSV table; `label_column` selects the class column.

    Column types are inferred: numeric when every value parses as a float,
    nominal otherwise (categories in first-appearance order). A first row
    whose cells fail that inference while the rest of the column is numeric
    is treated as a header and skipped.
    """
    rows = [
        [cell.strip() for cell in line.split(",")]
        for line in text.splitlines()
        if line.strip()
    ]
    if not rows:
        raise DataFormatError("empty data section")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataFormatError(f"ragged row {i}: expected {width} cells, got {len(row)}")
    if len(rows) > 1 and _looks_like_header(rows):
        rows = rows[1:]
    label_idx = label_column if label_column >= 0 else width + label_column
    if not 0 <= label_idx < width:
        raise DataFormatError(f"label column {label_column} out of range for width {width}")
    specs = []
    for j in range(width):
        column = [row[j] for row in rows if row[j] != MISSING_MARKER]
        if column and all(_is_float(v) for v in column):
            specs.append(AttributeSpec("numeric"))
        else:
            seen = dict.fromkeys(column)  # first-appearance order
            specs.append(AttributeSpec("nominal", tuple(seen)))
    return _assemble(name, rows, specs, label_idx, f"col{label_idx}")


def _looks_like_header(rows) -> bool:
    for j in range(len(rows[0])):
        rest_numeric = all(
            _is_float(row[j]) for row in rows[1:] if row[j] != MISSING_MARKER
        )
        if rest_numeric and not _is_float(rows[0][j]):
            return True
    return False


def _is_float(value: str) -> bool:
    try:
        float(value)
        return True
    except ValueError:
        return False


def _assemble(name, rows, specs, label_idx, label_name) -> Dataset:
    """Shared tail of both parsers: drop missing, encode cells, build Dataset."""
    width = len(specs)
    kept, dropped = [], 0
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataFormatError(f"row {i} has {len(row)} cells, expected {width}")
        if MISSING_MARKER in row:
            dropped += 1
        else:
            kept.append(row)
    if dropped:
        logger.info("%s: dropped %d rows with missing values", name, dropped)
    if not kept:
        raise DataFormatError("empty data section")

    label_spec = specs[label_idx]
    if label_spec.kind == "nominal":
        class_names = label_spec.categories
        class_id = {c: i for i, c in enumerate(class_names)}
    else:
        values = sorted({row[label_idx] for row in kept}, key=float)
        class_names = tuple(values)
        class_id = {c: i for i, c in enumerate(class_names)}
    if len(class_names) < 2:
        raise DataFormatError("fewer than 2 classes")

    feature_specs = tuple(s for j, s in enumerate(specs) if j != label_idx)
    n, d = len(kept), width - 1
    features = np.empty((n, d), dtype=float)
    labels = np.empty(n, dtype=int)
    for i, row in enumerate(kept):
        cell = row[label_idx]
        if cell not in class_id:
            raise DataFormatError(f"unknown class value {cell!r} in column {label_name}")
        labels[i] = class_id[cell]
        k = 0
        for j, spec in enumerate(specs):
            if j == label_idx:
                continue
            if spec.kind == "numeric":
                try:
                    features[i, k] = float(row[j])
                except ValueError:
                    raise DataFormatError(
                        f"non-numeric cell {row[j]!r} in numeric column {j}"
                    ) from None
            else:
                if row[j] not in spec.categories:
                    raise DataFormatError(
                        f"unknown nominal category {row[j]!r} in column {j}"
                    )
                features[i, k] = spec.categories.index(row[j])
            k += 1
    ds = Dataset(
        name=name,
        features=features,
        labels=labels,
        class_names=class_names,
        attribute_specs=feature_specs,
    )
    return ds.validate()


# ---------------------------------------------------------------------------
# Encoding and scaling
# ---------------------------------------------------------------------------


def encode_nominals(dataset: Dataset) -> Dataset:
    """Replace each nominal column by one indicator column per category."""
    if all(s.kind == "numeric" for s in dataset.attribute_specs):
        return dataset
    blocks, new_specs = [], []
    for j, spec in enumerate(dataset.attribute_specs):
        col = dataset.features[:, j]
        if spec.kind == "numeric":
            blocks.append(col[:, None])
            new_specs.append(spec)
        else:
            c = len(spec.categories)
            onehot = np.zeros((dataset.n_samples, c))
            onehot[np.arange(dataset.n_samples), col.astype(int)] = 1.0
            blocks.append(onehot)
            new_specs.extend(AttributeSpec("numeric") for _ in range(c))
    return replace(
        dataset,
        features=np.hstack(blocks),
        attribute_specs=tuple(new_specs),
    )


@dataclass(frozen=True)
class ScalingParams:
    """Per-feature affine map fitted on a training set."""

    mean: np.ndarray
    std: np.ndarray  # zero-variance features carry std 0 and map to 0

    def transform(self, features: np.ndarray) -> np.ndarray:
        safe = np.where(self.std > 0, self.std, 1.0)
        return (np.asarray(features, dtype=float) - self.mean) / safe

    def to_text(self) -> str:
        fmt = lambda v: ",".join(repr(float(x)) for x in v)
        return f"mean={fmt(self.mean)}\nstd={fmt(self.std)}\n"

    @classmethod
    def from_text(cls, text: str) -> "ScalingParams":
        values = {}
        for line in text.splitlines():
            if "=" in line:
                key, _, rest = line.partition("=")
                values[key.strip()] = np.array(
                    [float(x) for x in rest.split(",") if x.strip()]
                )
        return cls(mean=values["mean"], std=values["std"])


def standardize(train: Dataset, others=()):
    """Fit z-scoring on `train`, apply the same map to `others`.

    Returns (scaled train, list of scaled others, ScalingParams). Features
    that are constant on the training set map to 0 everywhere.
    """
    if train.n_samples == 0:
        raise ValueError("cannot standardize an empty training set")
    mean = train.features.mean(axis=0)
    std = train.features.std(axis=0)
    params = ScalingParams(mean=mean, std=std)
    scaled_train = replace(train, features=params.transform(train.features))
    scaled_others = [replace(d, features=params.transform(d.features)) for d in others]
    return scaled_train, scaled_others, params


# ---------------------------------------------------------------------------
# 5x2 stratified cross-validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitPlan:
    """Five stratified shuffles, each split into two disjoint covering folds."""

    replications: tuple  # of (foldA indices, foldB indices)
    seed: int
    singleton_classes: tuple = ()

    def folds(self):
        """Yield (replication, test_fold_name, train_idx, test_idx) 10 times."""
        for r, (fold_a, fold_b) in enumerate(self.replications):
            yield r, "B", fold_a, fold_b  # trained on A, tested on B
            yield r, "A", fold_b, fold_a


def stratified_5x2(dataset: Dataset, seed: int) -> SplitPlan:
    """Five independent stratified two-fold shuffles of the dataset.

    Every class is split as evenly as possible between the folds; for odd
    class counts the extra sample goes to fold A on even replications and to
    fold B on odd ones. Classes with a single sample always land in fold A
    and are reported in `singleton_classes`.
    """
    from .rng import make_rng

    counts = dataset.class_counts()
    singletons = tuple(int(c) for c in np.flatnonzero(counts == 1))
    if singletons:
        logger.warning(
            "%s: classes %s have a single sample; assigned wholly to fold A",
            dataset.name,
            singletons,
        )
    replications = []
    for r in range(5):
        rng = make_rng(seed, "5x2", r)
        fold_a, fold_b = [], []
        for c in range(dataset.n_classes):
            idx = np.flatnonzero(dataset.labels == c)
            if idx.size == 0:
                continue
            if idx.size == 1:
                fold_a.append(idx)
                continue
            perm = rng.permutation(idx)
            half, odd = divmod(idx.size, 2)
            cut = half + (odd if r % 2 == 0 else 0)
            fold_a.append(perm[:cut])
            fold_b.append(perm[cut:])
        a = np.sort(np.concatenate(fold_a))
        b = np.sort(np.concatenate(fold_b)) if fold_b else np.array([], dtype=int)
        replications.append((a, b))
    return SplitPlan(
        replications=tuple(replications), seed=seed, singleton_classes=singletons
    )
