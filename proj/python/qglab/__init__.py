"""Lattice and quantum-graph approximations of Schroedinger operators."""

import json

from ._qglab import (
    InvalidParameter,
    IoError,
    Lattice,
    ParseError,
    Potential,
    QglabError,
    __version__,
    continuum_eigenvalues,
    fit_loglog,
    h2_triplets,
    hausdorff_distance,
    inverse_shift_spectra_compare,
    resolvent_difference,
    secular_eigenvalues,
)
from . import _qglab

__all__ = [
    "InvalidParameter",
    "IoError",
    "Lattice",
    "ParseError",
    "Potential",
    "QglabError",
    "__version__",
    "continuum_eigenvalues",
    "default_config",
    "fit_loglog",
    "h2_matrix",
    "h2_triplets",
    "hausdorff_distance",
    "inverse_shift_spectra_compare",
    "report",
    "resolvent_difference",
    "run",
    "secular_eigenvalues",
]


def default_config():
    """The built-in experiment configuration as a dict."""
    return json.loads(_qglab.default_config())


def run(command, config=None, **overrides):
    """Run lemma-check, resolvent-compare or spectrum-converge.

    `config` is a dict in the config-file layout; keyword overrides are
    merged on top. Returns (report, passed).
    """
    cfg = dict(config or {})
    cfg.update(overrides)
    text, passed = _qglab.run_command(command, json.dumps(cfg))
    return json.loads(text), passed


def report(out_dir, paths):
    """Merge report files into out_dir; returns (merged, passed)."""
    text, passed = _qglab.run_report(str(out_dir), [str(p) for p in paths])
    return json.loads(text), passed


def h2_matrix(lattice, potential):
    """H2 as a scipy.sparse CSR matrix."""
    from scipy.sparse import coo_matrix

    rows, cols, vals, shape = h2_triplets(lattice, potential)
    return coo_matrix((vals, (rows, cols)), shape=shape).tocsr()
