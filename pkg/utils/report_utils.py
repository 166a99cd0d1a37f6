"""
Report documents: JSON rendering with exact rationals, CSV tables and
SHA-256 digests for stored results.
"""
import dataclasses
import hashlib
import json
from datetime import datetime
from fractions import Fraction

import numpy as np
import pandas as pd

SYSTEM_VERSION = "1.0"


def to_jsonable(value):
    """
    Convert reports, witnesses and rows to plain JSON types.

    Fractions become {"num": .., "den": ..}; tuples become lists; dict keys
    become strings; big integers stay exact.
    """
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if hasattr(value, "to_dict") and not isinstance(value, (pd.DataFrame, type)):
        return to_jsonable(value.to_dict())
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    return value


def render_json(value):
    """Stable JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(value), sort_keys=True, indent=2) + "\n"


def render_csv(frame):
    """Comma separated, '.' decimal point, \\n line endings, no index."""
    return frame.to_csv(index=False, lineterminator="\n")


def report_digest(document):
    """SHA-256 of the canonical JSON form of a document."""
    canonical = json.dumps(to_jsonable(document), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def create_stored_document(kind, payload, argv=None):
    """Wrap a result with its metadata and digest for the database."""
    body = to_jsonable(payload)
    return {
        "kind": kind,
        "payload": body,
        "digest": report_digest(body),
        "metadata": {
            "generated_at": datetime.now().isoformat(),
            "system_version": SYSTEM_VERSION,
            "argv": list(argv) if argv else [],
        },
    }


def verify_document(document):
    """True iff the stored digest matches the payload."""
    return report_digest(document["payload"]) == document["digest"]


def fraction_text(value):
    """'num/den' for Fractions, plain str for everything else."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict) and set(value) == {"num", "den"}:
        return f"{value['num']}/{value['den']}"
    return str(value)
