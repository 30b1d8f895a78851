"""Flow-feature datasets: CSV ingestion, pooling statistics, feature ranking,
and deterministic synthetic traffic generation."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .errors import RowError, SchemaError, UsageError

NORMAL = "Normal"
INTRUSION = "Intrusion"

#: Retained flow features, in declaration order (used for tie-breaking).
FEATURES = ("pkt_size", "pkt_rate", "byte_rate", "pkt_avg_size")


@dataclass(frozen=True)
class FlowRecord:
    """One flow observation.

    pkt_size is the total packet size in bytes, pkt_rate the packet rate
    in packets/s, byte_rate the byte rate in bytes/s and pkt_avg_size the
    average packet size in bytes. ``source_row`` is the 1-based data-row
    ordinal at the record's origin (CSV data row or generation order).
    """

    pkt_size: float
    pkt_rate: float
    byte_rate: float
    pkt_avg_size: float
    label: Optional[str] = None
    source_row: int = 0

    def __post_init__(self):
        for name in FEATURES:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise UsageError(f"{name} must be finite and >= 0, got {value!r}")
        if self.label is not None and self.label not in (NORMAL, INTRUSION):
            raise UsageError(f"label must be {NORMAL!r} or {INTRUSION!r}, got {self.label!r}")

    def features(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in FEATURES}


@dataclass(frozen=True)
class LabeledDataset:
    """Ordered flow records, either all labeled or all unlabeled."""

    records: tuple[FlowRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        labeled = [r.label is not None for r in self.records]
        if any(labeled) and not all(labeled):
            raise UsageError("dataset mixes labeled and unlabeled records")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def is_labeled(self) -> bool:
        return bool(self.records) and self.records[0].label is not None

    def labels(self) -> tuple[Optional[str], ...]:
        return tuple(r.label for r in self.records)

    def feature_matrix(self) -> np.ndarray:
        """(n, 4) array with columns in FEATURES order."""
        return np.array(
            [[r.pkt_size, r.pkt_rate, r.byte_rate, r.pkt_avg_size] for r in self.records],
            dtype=float,
        ).reshape(len(self.records), 4)


@dataclass(frozen=True)
class CsvSchema:
    """Column mapping for flow CSV files.

    ``label`` may be None for unlabeled files. ``normal_value`` and
    ``intrusion_value`` designate which raw label strings mean which class;
    any other value in the label column is a row error.
    """

    pkt_size: str = "pkt_size"
    pkt_rate: str = "pkt_rate"
    byte_rate: str = "byte_rate"
    pkt_avg_size: str = "pkt_avg_size"
    label: Optional[str] = "label"
    normal_value: str = NORMAL
    intrusion_value: str = INTRUSION

    def feature_columns(self) -> dict[str, str]:
        return {name: getattr(self, name) for name in FEATURES}


def parse_csv(source, schema: CsvSchema = CsvSchema(), *, lenient: bool = False) -> LabeledDataset:
    """Read flow records from an RFC-4180 CSV file with a header row.

    ``source`` is a path or an open text stream. A row whose mapped cells
    do not parse raises RowError naming the data row, unless ``lenient``
    is set, in which case the offending row is skipped.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", newline="", encoding="utf-8") as stream:
            return _parse_stream(stream, schema, lenient)
    return _parse_stream(source, schema, lenient)


def _parse_stream(stream, schema: CsvSchema, lenient: bool) -> LabeledDataset:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise UsageError("empty CSV: no header row")
    columns = dict(schema.feature_columns())
    if schema.label is not None:
        columns["label"] = schema.label
    index: dict[str, int] = {}
    for field_name, column in columns.items():
        if column not in header:
            raise SchemaError(f"column {column!r} not found in header {header}")
        index[field_name] = header.index(column)

    records = []
    for row_num, row in enumerate(reader, start=1):
        if not row:
            continue
        try:
            records.append(_parse_row(row, row_num, index, schema))
        except RowError:
            if not lenient:
                raise
    if not records:
        raise UsageError("CSV contains no data rows")
    return LabeledDataset(tuple(records))


def _parse_row(row, row_num: int, index: Mapping[str, int], schema: CsvSchema) -> FlowRecord:
    values = {}
    for feature in FEATURES:
        column = getattr(schema, feature)
        try:
            cell = row[index[feature]]
        except IndexError:
            raise RowError(row_num, f"missing cell for column {column!r}") from None
        try:
            values[feature] = float(cell)
        except ValueError:
            raise RowError(row_num, f"cannot parse {column}={cell!r} as a number") from None
    label = None
    if schema.label is not None:
        try:
            raw = row[index["label"]]
        except IndexError:
            raise RowError(row_num, f"missing cell for column {schema.label!r}") from None
        if raw == schema.normal_value:
            label = NORMAL
        elif raw == schema.intrusion_value:
            label = INTRUSION
        else:
            raise RowError(row_num, f"unrecognized label value {raw!r}")
    try:
        return FlowRecord(**values, label=label, source_row=row_num)
    except UsageError as exc:
        raise RowError(row_num, str(exc)) from None


def write_csv(ds: LabeledDataset, dest) -> None:
    """Write records in the canonical column layout, full float precision."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="", encoding="utf-8") as stream:
            _write_stream(ds, stream)
    else:
        _write_stream(ds, dest)


def _write_stream(ds: LabeledDataset, stream) -> None:
    writer = csv.writer(stream)
    header = list(FEATURES) + (["label"] if ds.is_labeled else [])
    writer.writerow(header)
    for r in ds:
        row = [repr(r.pkt_size), repr(r.pkt_rate), repr(r.byte_rate), repr(r.pkt_avg_size)]
        if ds.is_labeled:
            row.append(r.label)
        writer.writerow(row)


def subsample(ds: LabeledDataset, fraction: float, seed: int) -> LabeledDataset:
    """Deterministic stratified subsample, preserving record order.

    Each class keeps round(fraction * class size) records; a class that
    would round to zero is a usage error.
    """
    if not 0.0 < fraction <= 1.0:
        raise UsageError(f"fraction must lie in (0, 1], got {fraction}")
    if not ds.records:
        raise UsageError("cannot subsample an empty dataset")
    groups: dict[Optional[str], list[int]] = {}
    for i, r in enumerate(ds.records):
        groups.setdefault(r.label, []).append(i)
    rng = np.random.default_rng(seed)
    keep: list[int] = []
    for label in sorted(groups, key=str):
        members = groups[label]
        count = int(math.floor(fraction * len(members) + 0.5))
        if count == 0:
            raise UsageError(
                f"fraction {fraction} keeps no records of class {label!r} "
                f"({len(members)} present)"
            )
        chosen = rng.choice(len(members), size=count, replace=False)
        keep.extend(members[j] for j in chosen)
    keep.sort()
    return LabeledDataset(tuple(ds.records[i] for i in keep))


@dataclass(frozen=True)
class FeatureStats:
    """Range anchors of one feature.

    The lower half holds values <= mean and the upper half values > mean,
    so minimum <= lower_mean <= mean <= upper_mean <= maximum always
    holds; for a constant feature all five coincide.
    """

    minimum: float
    lower_mean: float
    mean: float
    upper_mean: float
    maximum: float

    def as_dict(self) -> dict[str, float]:
        return {
            "minimum": self.minimum,
            "lower_mean": self.lower_mean,
            "mean": self.mean,
            "upper_mean": self.upper_mean,
            "maximum": self.maximum,
        }


def feature_stats(values) -> FeatureStats:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise UsageError("cannot compute statistics of an empty value list")
    mean = float(arr.mean())
    upper = arr[arr > mean]
    return FeatureStats(
        minimum=float(arr.min()),
        lower_mean=float(arr[arr <= mean].mean()),
        mean=mean,
        upper_mean=float(upper.mean()) if upper.size else mean,
        maximum=float(arr.max()),
    )


def dataset_stats(ds: LabeledDataset) -> dict[str, FeatureStats]:
    """Per-feature range statistics over the whole dataset."""
    if not ds.records:
        raise UsageError("cannot compute statistics of an empty dataset")
    matrix = ds.feature_matrix()
    return {name: feature_stats(matrix[:, i]) for i, name in enumerate(FEATURES)}


@dataclass(frozen=True)
class Pools:
    """Class-partitioned training data plus per-pool and combined statistics."""

    normal: LabeledDataset
    intrusion: LabeledDataset
    normal_stats: Mapping[str, FeatureStats]
    intrusion_stats: Mapping[str, FeatureStats]
    combined_stats: Mapping[str, FeatureStats]


def sort_and_extract(ds: LabeledDataset) -> Pools:
    """Partition labeled records into normal/intrusion pools with range stats.

    Statistics are computed per pool and over the union; both classes
    must be present.
    """
    if not ds.records:
        raise UsageError("cannot pool an empty dataset")
    if not ds.is_labeled:
        raise UsageError("pooling requires a labeled dataset")
    normal = tuple(r for r in ds if r.label == NORMAL)
    intrusion = tuple(r for r in ds if r.label == INTRUSION)
    if not normal or not intrusion:
        missing = NORMAL if not normal else INTRUSION
        raise UsageError(f"class {missing!r} has no records")
    normal_ds = LabeledDataset(normal)
    intrusion_ds = LabeledDataset(intrusion)
    return Pools(
        normal=normal_ds,
        intrusion=intrusion_ds,
        normal_stats=dataset_stats(normal_ds),
        intrusion_stats=dataset_stats(intrusion_ds),
        combined_stats=dataset_stats(ds),
    )


def _entropy_bits(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def info_gain_rank(ds: LabeledDataset, bins: int = 10) -> tuple[tuple[str, float], ...]:
    """Rank features by information gain about the label, in bits.

    Each feature is discretized into ``bins`` equal-width intervals over
    its observed range; a constant feature carries no information and
    scores 0. Ties keep the FEATURES declaration order.
    """
    if bins < 2:
        raise UsageError(f"bins must be >= 2, got {bins}")
    if not ds.records or not ds.is_labeled:
        raise UsageError("information gain needs a non-empty labeled dataset")
    y = np.array([1 if r.label == INTRUSION else 0 for r in ds.records])
    base = _entropy_bits(np.bincount(y, minlength=2))
    matrix = ds.feature_matrix()
    gains = []
    for i, name in enumerate(FEATURES):
        x = matrix[:, i]
        lo, hi = float(x.min()), float(x.max())
        if lo == hi:
            gains.append((name, 0.0))
            continue
        width = (hi - lo) / bins
        assignment = np.minimum(((x - lo) / width).astype(int), bins - 1)
        conditional = 0.0
        for b in np.unique(assignment):
            selected = y[assignment == b]
            conditional += (selected.size / y.size) * _entropy_bits(
                np.bincount(selected, minlength=2)
            )
        gain = base - conditional
        if gain < 0.0:  # float jitter on uninformative splits
            gain = 0.0
        gains.append((name, float(gain)))
    order = sorted(range(len(FEATURES)), key=lambda i: -gains[i][1])
    return tuple(gains[i] for i in order)


@dataclass(frozen=True)
class ClassProfile:
    """Per-feature (mean, spread) of one traffic class."""

    pkt_size: tuple[float, float]
    pkt_rate: tuple[float, float]
    byte_rate: tuple[float, float]
    pkt_avg_size: tuple[float, float]

    def __post_init__(self):
        for name in FEATURES:
            mean, spread = getattr(self, name)
            if spread < 0:
                raise UsageError(f"{name}: spread must be >= 0, got {spread}")
            if mean < 0:
                raise UsageError(f"{name}: mean must be >= 0, got {mean}")
            object.__setattr__(self, name, (float(mean), float(spread)))


@dataclass(frozen=True)
class SynthProfile:
    """Generation parameters for the two traffic classes."""

    normal: ClassProfile
    intrusion: ClassProfile


#: Well-separated default profile: low-rate small-packet normal traffic
#: versus high-rate large-packet flood traffic (>= 10 spreads apart per
#: feature).
DEFAULT_PROFILE = SynthProfile(
    normal=ClassProfile(
        pkt_size=(400.0, 60.0),
        pkt_rate=(50.0, 10.0),
        byte_rate=(20_000.0, 3_000.0),
        pkt_avg_size=(300.0, 40.0),
    ),
    intrusion=ClassProfile(
        pkt_size=(1200.0, 60.0),
        pkt_rate=(600.0, 40.0),
        byte_rate=(500_000.0, 50_000.0),
        pkt_avg_size=(900.0, 40.0),
    ),
)


def synth_generate(
    profile: SynthProfile, counts: tuple[int, int], seed: int
) -> LabeledDataset:
    """Deterministic synthetic traffic: ``counts`` = (normal, intrusion).

    Each feature is drawn from a Gaussian around its class mean and
    truncated at zero, so records always satisfy the non-negativity
    invariant. Identical arguments reproduce the dataset exactly.
    """
    n_normal, n_intrusion = counts
    if n_normal < 1 or n_intrusion < 1:
        raise UsageError(f"both class counts must be >= 1, got {counts}")
    rng = np.random.default_rng(seed)
    records = []
    row = 1
    for label, cls, n in (
        (NORMAL, profile.normal, n_normal),
        (INTRUSION, profile.intrusion, n_intrusion),
    ):
        columns = {}
        for name in FEATURES:
            mean, spread = getattr(cls, name)
            columns[name] = np.maximum(rng.normal(mean, spread, size=n), 0.0)
        for i in range(n):
            records.append(
                FlowRecord(
                    pkt_size=float(columns["pkt_size"][i]),
                    pkt_rate=float(columns["pkt_rate"][i]),
                    byte_rate=float(columns["byte_rate"][i]),
                    pkt_avg_size=float(columns["pkt_avg_size"][i]),
                    label=label,
                    source_row=row,
                )
            )
            row += 1
    return LabeledDataset(tuple(records))
