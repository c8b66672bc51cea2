"""JSON problem files and report encoding.

Complex numbers are ``[re, im]`` pairs. Floats are written with Python's
shortest round-trip ``repr`` so parsing an emitted file gives bit-identical
data. Infinite values are written as the string ``"inf"``.

Problem file layout::

    {
      "nodes":  [[1, 0], [-1, 0]],
      "values": [[1, 0], [-1, 0]],
      "gammas": [1, 0],
      "mu": [0, 1],                       # optional
      "parameters": [                     # optional
        {"kind": "constant", "value": [-1, 0]},
        {"kind": "rational", "numerator": [[2, 0], [0, 2]],
                             "denominator": [[-1, -3], [1, -1]]},
        {"kind": "builtin", "name": "example3"}
      ],
      "candidate": {"numerator": [...], "denominator": [...]}   # optional
    }

Polynomial coefficients are listed in ascending degree.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import DataInvalid
from .pick import InterpolationData
from .rational import Polynomial, RationalFunction

__all__ = [
    "ProblemFile",
    "parse_problem",
    "load_problem",
    "problem_to_dict",
    "dump_problem",
    "parse_complex",
    "encode_complex",
    "parameter_from_descriptor",
    "rational_from_descriptor",
    "to_jsonable",
    "dumps",
]


def parse_complex(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        z = complex(x)
    elif isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        z = complex(float(x[0]), float(x[1]))
    else:
        raise DataInvalid(f"expected a complex number as [re, im], got {x!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DataInvalid(f"non-finite complex entry {x!r}")
    return z


def encode_complex(z) -> list:
    z = complex(z)
    return [_encode_float(z.real), _encode_float(z.imag)]


def _encode_float(x: float):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x + 0.0  # normalizes -0.0


def _complex_list(xs, what: str) -> list[complex]:
    if not isinstance(xs, list):
        raise DataInvalid(f"{what} must be a list")
    return [parse_complex(x) for x in xs]


def rational_from_descriptor(d: dict) -> RationalFunction:
    try:
        num = _complex_list(d["numerator"], "numerator")
        den = _complex_list(d.get("denominator", [[1.0, 0.0]]), "denominator")
    except KeyError as exc:
        raise DataInvalid(f"rational descriptor lacks {exc}") from exc
    if not num or not den:
        raise DataInvalid("empty coefficient list")
    try:
        return RationalFunction(Polynomial(num), Polynomial(den))
    except Exception as exc:  # zero denominator and the like
        raise DataInvalid(str(exc)) from exc


def parameter_from_descriptor(d: dict):
    """Build a ``SchurParameter`` from a constant/rational/builtin descriptor."""
    from .errors import NotSchur
    from .fixtures import BUILTIN_PARAMETERS
    from .params import SchurParameter

    if not isinstance(d, dict) or "kind" not in d:
        raise DataInvalid(f"parameter descriptor must be an object with 'kind': {d!r}")
    kind = d["kind"]
    try:
        if kind == "constant":
            return SchurParameter.constant(parse_complex(d["value"]), name=d.get("name"))
        if kind == "rational":
            return SchurParameter.rational(rational_from_descriptor(d), name=d.get("name"))
        if kind == "builtin":
            name = d.get("name")
            if name not in BUILTIN_PARAMETERS:
                raise DataInvalid(
                    f"unknown builtin parameter {name!r}; known: {sorted(BUILTIN_PARAMETERS)}"
                )
            return BUILTIN_PARAMETERS[name]()
    except KeyError as exc:
        raise DataInvalid(f"parameter descriptor lacks {exc}") from exc
    except NotSchur as exc:
        raise DataInvalid(f"parameter is not a Schur function: {exc}") from exc
    raise DataInvalid(f"unknown parameter kind {kind!r}")


@dataclass
class ProblemFile:
    data: InterpolationData
    mu: complex | None = None
    parameters: list = field(default_factory=list)  # raw descriptors
    candidate: dict | None = None

    def parameter(self, k: int):
        return parameter_from_descriptor(self.parameters[k])


def parse_problem(obj: dict) -> ProblemFile:
    if not isinstance(obj, dict):
        raise DataInvalid("problem file must hold a JSON object")
    try:
        nodes = _complex_list(obj["nodes"], "nodes")
        values = _complex_list(obj["values"], "values")
        gammas = obj["gammas"]
    except KeyError as exc:
        raise DataInvalid(f"problem file lacks {exc}") from exc
    if not isinstance(gammas, list) or not all(
        isinstance(g, (int, float)) and not isinstance(g, bool) for g in gammas
    ):
        raise DataInvalid("gammas must be a list of real numbers")
    if not all(math.isfinite(g) for g in gammas):
        raise DataInvalid("gammas must be finite")
    data = InterpolationData(nodes, values, [float(g) for g in gammas])
    mu = parse_complex(obj["mu"]) if obj.get("mu") is not None else None
    params = obj.get("parameters", [])
    if not isinstance(params, list):
        raise DataInvalid("parameters must be a list")
    candidate = obj.get("candidate")
    return ProblemFile(data, mu, list(params), candidate)


def load_problem(path: str | Path) -> ProblemFile:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataInvalid(f"malformed JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise DataInvalid(f"cannot read {path}: {exc}") from exc
    return parse_problem(obj)


def problem_to_dict(pf: ProblemFile) -> dict:
    out = {
        "nodes": [encode_complex(t) for t in pf.data.t],
        "values": [encode_complex(w) for w in pf.data.w],
        "gammas": [_encode_float(g) for g in pf.data.gamma],
    }
    if pf.mu is not None:
        out["mu"] = encode_complex(pf.mu)
    if pf.parameters:
        out["parameters"] = pf.parameters
    if pf.candidate is not None:
        out["candidate"] = pf.candidate
    return out


def dump_problem(pf: ProblemFile) -> str:
    return json.dumps(problem_to_dict(pf), indent=2)


def to_jsonable(x: Any):
    """Recursively convert report values into JSON-compatible objects."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return _encode_float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return encode_complex(x)
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, enum.Enum):
        return to_jsonable(x.value)
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(to_jsonable(report), indent=2, sort_keys=False)
