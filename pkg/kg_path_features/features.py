"""
Final feature set, domain filtering and the binary seed x feature matrix.
"""

import os
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix

from kg_path_features.exceptions import InputIOError, InvalidInputError, InvariantViolation
from kg_path_features.pathfeat import render
from kg_path_features.utils import Blacklist, ensure_dir, throw

NEIGHBOR = "neighbor"

FEATURES_FILE = "features.tsv"
ROWS_FILE = "rows.tsv"
MATRIX_FILE = "matrix.coo"


@dataclass(frozen=True)
class FeatureColumn:
    kind: str  # neighbor | path | pattern
    key: object  # canonical vertex for neighbors, atom tuple otherwise
    rendered: str
    support: object


@dataclass
class FeatureMatrix:
    rows: list  # canonical seeds
    row_labels: list
    columns: list = field(default_factory=list)

    @classmethod
    def build(cls, graph, nres, path_result, tables):
        """Neighbors ordered by label, then path features by (length, rendered form)."""
        rows = list(nres.seeds)
        matrix = cls(rows=rows, row_labels=[graph.canonical_label(s) for s in rows])
        for v in sorted(nres.interesting_neighbors, key=graph.table.resolve):
            matrix.columns.append(FeatureColumn(NEIGHBOR, v, graph.table.resolve(v), nres.support[v]))
        paths = [
            FeatureColumn(f.kind, f.atoms, render(f, tables), f.support)
            for f in path_result.path_features()
        ]
        paths.sort(key=lambda c: (len(c.key), c.rendered))
        matrix.columns.extend(paths)
        return matrix

    @property
    def shape(self):
        return len(self.rows), len(self.columns)

    def cells(self):
        for j, column in enumerate(self.columns):
            for i in column.support.ordinals():
                yield i, j

    def to_coo(self):
        cells = sorted(self.cells())
        rows = np.array([i for i, _ in cells], dtype=np.int64)
        cols = np.array([j for _, j in cells], dtype=np.int64)
        return coo_matrix((np.ones(len(cells), dtype=bool), (rows, cols)), shape=self.shape)

    def check(self, l_min, l_max):
        for column in self.columns:
            if not l_min <= len(column.support) <= l_max:
                raise InvariantViolation(
                    f"column {column.rendered} has support {len(column.support)} outside [{l_min}, {l_max}]",
                    stage="emit",
                )

    def counts(self):
        out = {NEIGHBOR: 0, "path": 0, "pattern": 0}
        for column in self.columns:
            out[column.kind] += 1
        return out


class DomainFilter:
    """Disjunction of named groups of class URIs or prefixes; no group selected keeps everything."""

    def __init__(self, groups=None, selected=()):
        groups = groups or {}
        for name in selected:
            if name not in groups:
                throw(f"unknown filter group {name!r}")
        self.selected = list(selected)
        entries = [e for name in self.selected for e in groups[name]]
        self.matcher = Blacklist.from_entries(entries)

    @classmethod
    def from_settings(cls, settings):
        return cls(settings.filter_groups, settings.filter)

    def __bool__(self):
        return bool(self.selected)

    def vertex_matches(self, v, ontology):
        return any(self.matcher.matches(ontology.uri(c)) for c in ontology.ancestors(v))

    def keeps(self, column, ontology):
        if column.kind == NEIGHBOR:
            return self.vertex_matches(column.key, ontology)
        for atom in column.key:
            if atom.is_class:
                if self.matcher.matches(ontology.uri(atom.element)):
                    return True
            elif self.vertex_matches(atom.element, ontology):
                return True
        return False


def apply_filter(matrix, domain_filter, ontology):
    if not domain_filter:
        return matrix
    matrix.columns = [c for c in matrix.columns if domain_filter.keeps(c, ontology)]
    return matrix


def emit_matrix(matrix, out_dir):
    """Write features.tsv, rows.tsv and matrix.coo; returns their paths."""
    out_dir = ensure_dir(out_dir)
    paths = [out_dir / FEATURES_FILE, out_dir / ROWS_FILE, out_dir / MATRIX_FILE]
    coo = matrix.to_coo()
    try:
        with open(paths[0], "w", encoding="utf-8", newline="\n") as f:
            for j, column in enumerate(matrix.columns):
                f.write(f"{j}\t{column.kind}\t{column.rendered}\t{len(column.support)}\n")
        with open(paths[1], "w", encoding="utf-8", newline="\n") as f:
            for i, label in enumerate(matrix.row_labels):
                f.write(f"{i}\t{label}\n")
        with open(paths[2], "w", encoding="utf-8", newline="\n") as f:
            for i, j in zip(coo.row.tolist(), coo.col.tolist()):
                f.write(f"{i}\t{j}\n")
    except OSError as e:
        raise InputIOError(f"cannot write matrix to {out_dir}: {e}", stage="emit")
    return paths


def _read_rows(path, width):
    try:
        with open(path, encoding="utf-8") as f:
            lines = [line.rstrip("\n") for line in f if line.strip()]
    except OSError as e:
        raise InputIOError(f"cannot read {path}: {e}")
    rows = []
    for n, line in enumerate(lines, start=1):
        parts = line.split("\t")
        if len(parts) != width:
            raise InvalidInputError(f"{os.path.basename(path)} line {n}: expected {width} columns")
        rows.append(parts)
    return rows


def read_matrix(out_dir):
    """(row labels, [(kind, rendered, support count)], coo_matrix) from emitted files."""
    out_dir = os.fspath(out_dir)
    rows = [label for _, label in _read_rows(os.path.join(out_dir, ROWS_FILE), 2)]
    columns = [(kind, rendered, int(n)) for _, kind, rendered, n in _read_rows(os.path.join(out_dir, FEATURES_FILE), 4)]
    cells = np.array(_read_rows(os.path.join(out_dir, MATRIX_FILE), 2), dtype=np.int64).reshape(-1, 2)
    coo = coo_matrix(
        (np.ones(len(cells), dtype=bool), (cells[:, 0], cells[:, 1])), shape=(len(rows), len(columns))
    )
    return rows, columns, coo
