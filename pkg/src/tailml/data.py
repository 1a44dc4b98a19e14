"""CSV ingestion and emission.

All files are comma-separated with a header row, ``.`` decimal point, UTF-8
encoding and LF line endings. Floats are written with ``repr`` so re-reading
reproduces them exactly and equal inputs yield byte-identical outputs.
"""

import csv
import os
from dataclasses import dataclass

import numpy as np

__all__ = ["Dataset", "ingest_csv", "write_csv", "write_dataset_csv"]


@dataclass
class Dataset:
    """Numeric observation matrix plus optional target / label columns."""

    X: np.ndarray
    columns: list
    y: np.ndarray = None
    target_column: str = None
    labels: np.ndarray = None
    label_column: str = None

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]


def ingest_csv(path, target=None, label=None):
    """Read a CSV file into a :class:`Dataset`.

    ``target`` / ``label`` name columns (case-sensitive) to split off as the
    real-valued target and the +/-1 label respectively. Structural problems
    raise ``ValueError`` naming the offending row or column.
    """
    if not os.path.exists(path):
        raise ValueError(f"input file not found: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty file: missing header row") from None
        header = [h.strip() for h in header]
        n_fields = len(header)
        rows = []
        for i, rec in enumerate(reader, start=1):
            if len(rec) != n_fields:
                raise ValueError(f"row {i}: expected {n_fields} fields, got {len(rec)}")
            parsed = []
            for name, tok in zip(header, rec):
                try:
                    parsed.append(float(tok))
                except ValueError:
                    raise ValueError(
                        f"row {i}, column '{name}': non-numeric value {tok.strip()!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise ValueError("no data rows")
    data = np.asarray(rows, dtype=float)

    y = labels = None
    drop = []
    if target is not None:
        if target not in header:
            raise ValueError(f"missing declared column '{target}'")
        j = header.index(target)
        y = data[:, j]
        drop.append(j)
    if label is not None:
        if label not in header:
            raise ValueError(f"missing declared column '{label}'")
        j = header.index(label)
        raw = data[:, j]
        if not np.all(np.isin(raw, (-1.0, 1.0))):
            raise ValueError(f"column '{label}': labels must be -1 or +1")
        labels = raw.astype(int)
        drop.append(j)
    keep = [j for j in range(n_fields) if j not in drop]
    if not keep:
        raise ValueError("no feature columns remain after removing target/label")
    return Dataset(
        X=data[:, keep],
        columns=[header[j] for j in keep],
        y=y,
        target_column=target,
        labels=labels,
        label_column=label,
    )


def _format_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows):
    """Write rows with a header; floats via repr, LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(v) for v in row) + "\n")


def write_dataset_csv(path, X, y=None, y_name="y"):
    """Write a feature matrix (columns x1..xd) with an optional final column."""
    X = np.asarray(X, dtype=float)
    header = [f"x{j + 1}" for j in range(X.shape[1])]
    if y is not None:
        header.append(y_name)
        rows = [list(X[i]) + [y[i]] for i in range(X.shape[0])]
    else:
        rows = X.tolist()
    write_csv(path, header, rows)
