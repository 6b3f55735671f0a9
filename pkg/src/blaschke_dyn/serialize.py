"""JSON encoding shared by the CLI and the test fixtures.

Every document carries ``"schema": "blaschke-dyn/1"``.  Floating-point
products use ``{"re", "im"}`` pairs; exact maps use ``"a/b+c/d*i"`` strings.
"""

import dataclasses
import json
import math
import re
from pathlib import Path

import numpy as np

from .blaschke import DiskAutomorphism, FiniteBlaschkeProduct
from .dynamics import ExactBlaschke, ExactComposite, exact_map_from_dict, exact_power
from .errors import DomainError
from .gaussian import GaussianRational
from .permutations import BlockSystem, Permutation

SCHEMA = "blaschke-dyn/1"


def envelope(kind, **payload):
    doc = {"schema": SCHEMA, "kind": kind}
    doc.update(payload)
    return doc


def encode_complex(z):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return "inf"
    return {"re": z.real, "im": z.imag}


def decode_complex(obj):
    if isinstance(obj, str):
        if obj.strip().lower() in ("inf", "infinity"):
            return complex(math.inf, 0.0)
        return complex(obj.replace("i", "j"))
    if isinstance(obj, dict):
        return complex(float(obj["re"]), float(obj["im"]))
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    return complex(obj)


def to_jsonable(obj):
    """Recursively convert library objects into JSON-ready structures."""
    if isinstance(obj, FiniteBlaschkeProduct):
        return obj.to_dict()
    if isinstance(obj, (ExactBlaschke, ExactComposite)):
        return obj.to_dict()
    if isinstance(obj, GaussianRational):
        return str(obj)
    if isinstance(obj, Permutation):
        return str(obj)
    if isinstance(obj, BlockSystem):
        return obj.as_lists()
    if isinstance(obj, DiskAutomorphism):
        return {"rotation": encode_complex(obj.rotation), "center": encode_complex(obj.center)}
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if f.repr}
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(doc):
    return json.dumps(to_jsonable(doc), indent=2, allow_nan=False)


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _unwrap(doc):
    if isinstance(doc, dict) and "schema" in doc:
        if doc["schema"] != SCHEMA:
            raise DomainError(f"unsupported schema {doc['schema']!r}")
        for key in ("product", "map", "fbp"):
            if key in doc:
                return doc[key]
    return doc


def fbp_from_json(doc):
    doc = _unwrap(doc)
    if not isinstance(doc, dict) or "rho" not in doc or "zeros" not in doc:
        raise DomainError("expected an object with 'rho' and 'zeros'")
    return FiniteBlaschkeProduct.from_dict(doc)


def load_fbp(path):
    return fbp_from_json(read_json(path))


_POWER = re.compile(r"^\s*z\s*\^\s*(\d+)\s*$")


def load_exact_map(spec):
    """An exact map from a JSON file, or the shorthand ``z^n``."""
    m = _POWER.match(str(spec))
    if m:
        return exact_power(int(m.group(1)))
    if str(spec).strip() == "z":
        return exact_power(1)
    path = Path(spec)
    if not path.exists():
        raise DomainError(f"map {spec!r} is neither a file nor of the form z^n")
    return exact_map_from_dict(_unwrap(read_json(path)))
