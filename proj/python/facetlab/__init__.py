"""Python access to the facetlab core: counters, the lower-bound
construction, pivoting-rule experiments and the verification checks."""

import csv
import io
import json
from fractions import Fraction

from . import _facetlab

__all__ = [
    "f_exact",
    "f_recurrence",
    "f_asymptote",
    "rand_count",
    "rand_count_1p",
    "construction",
    "construction_index",
    "run",
    "run_graph",
    "estimate_canonical",
    "check_ids",
    "verify",
]


def _fraction(pair):
    num, den = pair
    return Fraction(int(num), int(den))


def f_exact(n):
    return _fraction(_facetlab.f_exact(n))


def f_recurrence(n):
    return _fraction(_facetlab.f_recurrence(n))


f_asymptote = _facetlab.f_asymptote
rand_count = _facetlab.rand_count
rand_count_1p = _facetlab.rand_count_1p
estimate_canonical = _facetlab.estimate_canonical


def check_ids():
    return list(_facetlab.check_ids())


def construction(n, r, s, t):
    """Graph document of G_{n,r,s,t} in the JSON graph format."""
    return json.loads(_facetlab.construction_json(n, r, s, t))


def construction_index(n, r, s, t):
    return json.loads(_facetlab.index_json(n, r, s, t))


def _rows(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    for row in rows:
        for key in ("trial", "seed", "pivots", "wall_ns"):
            row[key] = int(row[key])
    return rows


def run(rule, n, r, s, t, trials=1, seed=1, threads=1):
    """Per-trial records of `rule` on G_{n,r,s,t} from its initial tree."""
    return _rows(_facetlab.run_construction(rule, n, r, s, t, trials, seed, threads))


def run_graph(rule, path, trials=1, seed=1, threads=1):
    return _rows(_facetlab.run_graph_file(rule, path, trials, seed, threads))


def verify(check, params=None, seed=1, threads=1):
    return json.loads(_facetlab.verify_json(check, json.dumps(params or {}), seed, threads))
