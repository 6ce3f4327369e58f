"""Problem manifests, matrix file IO, and deterministic report rendering.

Manifests are strict JSON objects: a ``problem`` tag, matrix file paths
keyed by role, and optional ``p``, ``tolerances``, ``seed``.  Unknown
fields are rejected rather than ignored; silent typos in numeric
experiments are costly.  Matrix files use the Matrix Market exchange
format (dense array or sparse coordinate, real or complex); vectors are
n-by-1 matrices.

Reports serialize with sorted keys and every float printed with 17
significant digits, so identical inputs produce byte-identical output and
all values round-trip exactly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.io
import scipy.sparse

from .errors import DimensionError, ParseError
from .linalg import Tolerances

ROLES = ("A", "W", "T", "V", "B0", "x", "f0", "W11", "W12", "W22", "S")

PROBLEMS = (
    "wls",
    "w-inverse",
    "owls",
    "spline",
    "op-spline",
    "smoothing",
    "op-smoothing",
    "opt-inverse",
    "shorted",
    "compat",
    "report",
)

# roles each problem must provide; "report" is resolved from what is present
REQUIRED_ROLES = {
    "wls": ("A", "W", "x"),
    "w-inverse": ("A", "W"),
    "owls": ("A", "W"),
    "spline": ("T", "V", "f0"),
    "op-spline": ("T", "V", "B0"),
    "smoothing": ("T", "V", "f0"),
    "op-smoothing": ("T", "V", "B0"),
    "opt-inverse": ("A", "W11", "W12", "W22"),
    "shorted": ("W", "S"),
    "compat": ("W", "S"),
}

NEEDS_P = {"owls", "op-spline"}

REPORT_ROLE_SETS = (
    ("A", "W"),
    ("T", "V"),
    ("A", "W11", "W12", "W22"),
)

MANIFEST_KEYS = set(ROLES) | {"problem", "p", "tolerances", "seed"}

# witnesses larger than this are written to sibling .mtx files
MAX_INLINE_DIM = 100


@dataclass(frozen=True)
class ProblemManifest:
    problem: str
    matrices: dict
    p: float | None
    tolerances: Tolerances
    seed: int
    source: str = "<memory>"


@dataclass(frozen=True, eq=False)
class ResultReport:
    """Machine-readable outcome of one manifest execution."""

    problem: str
    exists: bool
    min_value: float | None = None
    witness: np.ndarray | None = None
    residuals: dict = field(default_factory=dict)
    conditions: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)


def read_matrix(path: str) -> np.ndarray:
    """Read a Matrix Market file as a dense complex matrix."""
    try:
        m = scipy.io.mmread(path)
    except (OSError, ValueError) as exc:
        raise ParseError(f"cannot read matrix file {path!r}: {exc}") from exc
    if scipy.sparse.issparse(m):
        m = m.toarray()
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ParseError(f"matrix file {path!r} is not two-dimensional")
    if m.size and not np.all(np.isfinite(m)):
        raise ParseError(f"matrix file {path!r} contains non-finite entries")
    return m


def write_matrix(path: str, m: np.ndarray) -> None:
    """Write a dense matrix in Matrix Market array format, exactly round-trippable."""
    scipy.io.mmwrite(path, np.asarray(m), precision=17)


def _parse_tolerances(raw) -> Tolerances:
    if not isinstance(raw, dict):
        raise ParseError("tolerances must be an object")
    unknown = set(raw) - {"rank_rtol", "residual_rtol"}
    if unknown:
        raise ParseError(f"unknown tolerance fields: {sorted(unknown)}")
    kwargs = {}
    for key, value in raw.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"tolerance {key} must be a number")
        kwargs[key] = float(value)
    try:
        return Tolerances(**kwargs)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_manifest(path: str) -> ProblemManifest:
    """Load and validate a manifest, including all referenced matrices.

    Malformed structure is a ParseError (exit 64); missing roles or
    inconsistent shapes are a DimensionError (exit 65).
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read manifest {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"manifest {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("manifest must be a JSON object")

    unknown = set(raw) - MANIFEST_KEYS
    if unknown:
        raise ParseError(f"unknown manifest fields: {sorted(unknown)}")

    problem = raw.get("problem")
    if problem not in PROBLEMS:
        raise ParseError(f"problem must be one of {PROBLEMS}, got {problem!r}")

    p = raw.get("p")
    if p is not None:
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise ParseError("p must be a number")
        p = float(p)
        if not np.isfinite(p) or p < 1.0:
            raise ParseError(f"p must be a finite real >= 1, got {p}")

    tol = _parse_tolerances(raw.get("tolerances", {}))

    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ParseError("seed must be an integer")

    base = os.path.dirname(os.path.abspath(path))
    matrices = {}
    for role in ROLES:
        if role not in raw:
            continue
        ref = raw[role]
        if not isinstance(ref, str):
            raise ParseError(f"role {role} must be a file path string")
        matrices[role] = read_matrix(os.path.join(base, ref))

    manifest = ProblemManifest(
        problem=problem, matrices=matrices, p=p, tolerances=tol, seed=seed, source=path
    )
    check_roles(manifest)
    return manifest


def check_roles(manifest: ProblemManifest) -> None:
    """Verify the role set matches the problem; shapes are checked at dispatch."""
    problem = manifest.problem
    present = set(manifest.matrices)
    if problem == "report":
        matches = [rs for rs in REPORT_ROLE_SETS if present == set(rs)]
        if not matches:
            raise DimensionError(
                f"report requires exactly one of the role sets {REPORT_ROLE_SETS}, got {sorted(present)}"
            )
        return
    required = set(REQUIRED_ROLES[problem])
    if present != required:
        missing = sorted(required - present)
        extra = sorted(present - required)
        raise DimensionError(
            f"problem {problem!r} needs roles {sorted(required)}; missing {missing}, unexpected {extra}"
        )
    if problem in NEEDS_P and manifest.p is None:
        raise DimensionError(f"problem {problem!r} requires p")


def _format_float(value: float) -> str:
    if value != value:  # NaN cannot appear in a valid report
        raise ValueError("reports cannot contain NaN")
    text = format(float(value), ".17g")
    # ".17g" may produce bare integers; keep them valid JSON numbers as-is
    return text


def _render(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _render(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _render(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    out: list = []
    _render(obj, out)
    out.append("\n")
    return "".join(out)


def matrix_to_json(m: np.ndarray):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "data": [[[float(v.real), float(v.imag)] for v in row] for row in m],
    }


def matrix_from_json(obj) -> np.ndarray:
    data = obj["data"]
    m = np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex)
    return m.reshape(obj["rows"], obj["cols"])


def render_report(report: ResultReport, sidecar_base: str | None = None) -> str:
    """Serialize a report; oversized witnesses go to a sibling .mtx file."""
    witness = None
    if report.witness is not None:
        w = np.atleast_2d(np.asarray(report.witness, dtype=complex))
        if max(w.shape) > MAX_INLINE_DIM and sidecar_base:
            sidecar = sidecar_base + ".witness.mtx"
            write_matrix(sidecar, w)
            witness = {"path": os.path.basename(sidecar)}
        else:
            witness = matrix_to_json(w)
    payload = {
        "problem": report.problem,
        "exists": report.exists,
        "min_value": report.min_value,
        "witness": witness,
        "residuals": report.residuals,
        "conditions": report.conditions,
        "diagnostics": report.diagnostics,
    }
    return canonical_json(payload)
