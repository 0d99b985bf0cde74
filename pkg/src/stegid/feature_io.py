"""Feature-file ingestion and report serialization.

Feature files are UTF-8 CSV with the mandatory header
``actor_id,image_id,f_0,...,f_{H-1}``; one row per image.  Actor and image
ids are opaque strings mapped to dense indices in first-appearance order, and
every actor must contribute the same number of rows.

Reports are emitted as JSON with a fixed key order (and a flat CSV for the
experiment curves), so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .corpus import Corpus, corpus_from_rows


def read_features(path) -> tuple[Corpus, list[str]]:
    """Load a feature CSV into a corpus plus the actor-id list.

    The returned list maps dense actor index to the original actor_id string.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        _check_header(path, header)
        n_features = len(header) - 2

        rows = []
        labels = []
        seen_pairs = set()
        for line_no, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != n_features + 2:
                raise ValueError(
                    f"{path}: line {line_no} has {len(record)} fields, "
                    f"expected {n_features + 2}"
                )
            actor_id, image_id = record[0], record[1]
            pair = (actor_id, image_id)
            if pair in seen_pairs:
                raise ValueError(
                    f"{path}: duplicate (actor_id, image_id) pair "
                    f"({actor_id!r}, {image_id!r}) at line {line_no}"
                )
            seen_pairs.add(pair)
            values = np.empty(n_features)
            for col, cell in enumerate(record[2:]):
                try:
                    values[col] = float(cell)
                except ValueError:
                    raise ValueError(
                        f"{path}: non-numeric value {cell!r} at line {line_no}, "
                        f"column f_{col}"
                    ) from None
            if not np.all(np.isfinite(values)):
                col = int(np.argwhere(~np.isfinite(values))[0][0])
                raise ValueError(
                    f"{path}: non-finite value at line {line_no}, column f_{col}"
                )
            rows.append(values)
            labels.append(actor_id)

    if not rows:
        raise ValueError(f"{path}: no data rows")
    corpus, actor_ids = corpus_from_rows(np.stack(rows), labels)
    return corpus, [str(a) for a in actor_ids]


def _check_header(path: Path, header: list[str]) -> None:
    if len(header) < 3 or header[0] != "actor_id" or header[1] != "image_id":
        raise ValueError(
            f"{path}: header must be actor_id,image_id,f_0,... "
            f"(got {','.join(header[:3])}...)"
        )
    for i, name in enumerate(header[2:]):
        if name != f"f_{i}":
            raise ValueError(
                f"{path}: feature column {i} must be named f_{i}, got {name!r}"
            )


def load_features(path) -> Corpus:
    """Load a feature CSV, discarding the actor-id strings."""
    return read_features(path)[0]


def write_features(path, corpus: Corpus, actor_ids=None, image_ids=None) -> None:
    """Write a corpus as a feature CSV (full float round-trip precision).

    Actor and image ids default to ``actor_<i>`` / ``img_<j>``.
    """
    if actor_ids is None:
        actor_ids = [f"actor_{i}" for i in range(corpus.n)]
    if len(actor_ids) != corpus.n:
        raise ValueError(f"expected {corpus.n} actor ids, got {len(actor_ids)}")
    if image_ids is None:
        image_ids = [f"img_{j}" for j in range(corpus.m)]
    if len(image_ids) != corpus.m:
        raise ValueError(f"expected {corpus.m} image ids, got {len(image_ids)}")

    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["actor_id", "image_id"] + [f"f_{h}" for h in range(corpus.H)])
        for i in range(corpus.n):
            for j in range(corpus.m):
                row = [str(actor_ids[i]), str(image_ids[j])]
                row.extend(repr(float(v)) for v in corpus.features[i, j])
                writer.writerow(row)


def _score_value(score) -> float:
    if isinstance(score, Fraction):
        return float(score)
    return float(score)


def ranking_to_json(ranking, actor_ids=None) -> list[dict]:
    """Serializable view of an actor ranking, most suspicious first."""
    out = []
    for actor, score in ranking.entries:
        label = actor_ids[actor] if actor_ids is not None else actor
        out.append({"actor": label, "score": _score_value(score)})
    return out


def bagged_to_json(bagged, actor_ids=None) -> dict:
    """Serializable view of a bagged ranking including per-submodel detail."""
    return {
        "ranking": ranking_to_json(bagged.final, actor_ids),
        "submodels": [
            {
                "index": spec.index,
                "d": spec.d,
                "seed": spec.seed,
                "components": list(spec.components),
                "ranking": ranking_to_json(ranking, actor_ids),
            }
            for spec, ranking in zip(bagged.specs, bagged.submodels)
        ],
    }


def dump_json(obj) -> str:
    """Render a report dict with stable key order and a trailing newline."""
    return json.dumps(obj, indent=2) + "\n"


def curves_csv_text(summary_rows: list[dict]) -> str:
    """Flat CSV of per-(delta, method) averages for plotting rank curves."""
    lines = ["delta,method,average_rank,stderr"]
    for row in summary_rows:
        lines.append(
            f"{row['delta']!r},{row['method']},"
            f"{row['average_rank']!r},{row['stderr']!r}"
        )
    return "\n".join(lines) + "\n"
