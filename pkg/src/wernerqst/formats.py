"""Counts CSV and estimated-state JSON file formats.

Counts file::

    alpha,i,j,count
    0,1,1,62.5
    ...                 (16 rows, alpha = 4(i-1) + (j-1))
    # mean_pairs=1000
    # seed=42
    # eta=0.5           (optional)
"""
import csv
import io
import json

import numpy as np

from .errors import ParseError
from .povm import alpha_pair
from .simulate import CountVector

COUNTS_HEADER = ["alpha", "i", "j", "count"]


def fmt_float(x):
    """Shortest round-trip text for a float."""
    return repr(float(x))


def counts_to_text(cv):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COUNTS_HEADER)
    for alpha, value in enumerate(cv.counts):
        i, j = alpha_pair(alpha)
        writer.writerow([alpha, i, j, fmt_float(value)])
    buf.write(f"# mean_pairs={fmt_float(cv.mean_pairs)}\n")
    if cv.seed is not None:
        buf.write(f"# seed={int(cv.seed)}\n")
    if cv.eta is not None:
        buf.write(f"# eta={fmt_float(cv.eta)}\n")
    return buf.getvalue()


def write_counts(cv, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(counts_to_text(cv))


def _parse_number(text, kind, lineno, what):
    try:
        return kind(text)
    except ValueError:
        raise ParseError(f"cannot parse {what} {text!r}", lineno) from None


def parse_counts(text):
    lines = text.splitlines()
    if not lines or lines[0].strip().replace(" ", "") != ",".join(COUNTS_HEADER):
        raise ParseError(f"expected header {','.join(COUNTS_HEADER)!r}", 1)

    counts = {}
    meta = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" not in body:
                raise ParseError(f"metadata comment must be key=value, got {body!r}", lineno)
            key, value = (s.strip() for s in body.split("=", 1))
            meta[key] = (value, lineno)
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", lineno)
        alpha = _parse_number(fields[0], int, lineno, "alpha")
        i = _parse_number(fields[1], int, lineno, "i")
        j = _parse_number(fields[2], int, lineno, "j")
        value = _parse_number(fields[3], float, lineno, "count")
        if not 0 <= alpha < 16:
            raise ParseError(f"alpha {alpha} out of range 0..15", lineno)
        if alpha_pair(alpha) != (i, j):
            raise ParseError(f"alpha {alpha} does not match pair ({i}, {j})", lineno)
        if alpha in counts:
            raise ParseError(f"duplicate row for alpha {alpha}", lineno)
        if not np.isfinite(value) or value < 0:
            raise ParseError(f"count must be finite and non-negative, got {value}", lineno)
        counts[alpha] = value

    if len(counts) != 16:
        raise ParseError(f"expected 16 data rows, got {len(counts)}")
    if "mean_pairs" not in meta:
        raise ParseError("missing metadata field 'mean_pairs'")
    text_n, lineno = meta["mean_pairs"]
    mean_pairs = _parse_number(text_n, float, lineno, "mean_pairs")
    if not mean_pairs > 0:
        raise ParseError(f"mean_pairs must be positive, got {mean_pairs}", lineno)
    seed = eta = None
    if "seed" in meta:
        seed = _parse_number(meta["seed"][0], int, meta["seed"][1], "seed")
    if "eta" in meta:
        eta = _parse_number(meta["eta"][0], float, meta["eta"][1], "eta")
    return CountVector([counts[a] for a in range(16)], mean_pairs, seed=seed, eta=eta)


def read_counts(path):
    with open(path, encoding="utf-8") as fh:
        return parse_counts(fh.read())


def matrix_to_json(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(rows):
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def state_document(result, metrics=None):
    doc = {
        "matrix": matrix_to_json(result.sigma),
        "chi2": float(result.chi2),
        "evaluations": int(result.evaluations),
        "converged": bool(result.converged),
        "restarts_used": int(result.restarts_used),
        "params": [float(x) for x in result.params],
    }
    if metrics is not None:
        doc["metrics"] = metrics
    return doc


def write_json(doc, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
