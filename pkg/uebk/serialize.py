"""
Deterministic JSON documents for families, verification reports and states.

Complex numbers are written as [re, im] pairs of JSON floats. Python writes
floats in their shortest round-trip form, so load(save(x)) is bit-exact.
Keys are sorted and the indent is fixed, so identical inputs give identical
bytes.
"""
import json
from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np

from uebk.config import SCHEMA_VERSION, UebkError, get_logger
from uebk.constructions import FamilyParams, UebkFamily
from uebk.mixed_state import StateReport
from uebk.tensor import BipartiteVector
from uebk.verification import VerificationReport

LOG = get_logger()

PathLike = Union[str, Path]


class FamilyFileError(UebkError, ValueError):
    """Raised for a malformed document; `field` names the offending entry."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class SchemaVersionError(FamilyFileError):
    """Raised when a document declares a schema version we cannot read."""


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write(doc: dict, path: PathLike) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    path.write_text(dumps(doc))
    return path


def amps_to_pairs(amps: np.ndarray) -> List[List[float]]:
    return [[float(a.real), float(a.imag)] for a in amps]


def pairs_to_amps(pairs: Any, where: str) -> np.ndarray:
    try:
        values = np.asarray(pairs, dtype=np.float64)
    except (TypeError, ValueError):
        raise FamilyFileError(f"{where} is not a list of [re, im] pairs", field=where)
    if values.ndim != 2 or values.shape[1] != 2:
        raise FamilyFileError(f"{where} is not a list of [re, im] pairs", field=where)
    if not np.all(np.isfinite(values)):
        raise FamilyFileError(f"{where} holds a non-finite amplitude", field=where)
    return values[:, 0] + 1j * values[:, 1]


def family_to_dict(family: UebkFamily) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "params": family.params.as_dict(),
        "expected_count": family.expected_count,
        "vectors": [
            {"label": list(label), "amps": amps_to_pairs(v.amps)}
            for label, v in zip(family.labels, family.vectors)
        ],
    }


def _require(doc: dict, key: str, where: str = "") -> Any:
    if not isinstance(doc, dict) or key not in doc:
        name = f"{where}.{key}" if where else key
        raise FamilyFileError(f"Missing field '{name}'", field=name)
    return doc[key]


def _check_schema(doc: Any) -> None:
    if not isinstance(doc, dict):
        raise FamilyFileError("Top level of the document must be an object")
    version = _require(doc, "schema_version")
    if str(version) != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"Unsupported schema_version {version!r}; this reader understands {SCHEMA_VERSION!r}",
            field="schema_version",
        )


def params_from_dict(raw: Any) -> FamilyParams:
    """Rebuild FamilyParams; constraint violations propagate as ParameterConstraintError."""
    for key in ("family", "d", "dprime", "k"):
        _require(raw, key, "params")
    try:
        return FamilyParams(
            family=raw["family"],
            d=raw["d"],
            dprime=raw["dprime"],
            k=raw["k"],
            q=raw.get("q"),
            m_offset=raw.get("m_offset"),
            convention=raw.get("convention", "repaired"),
            umeb=bool(raw.get("umeb", False)),
        )
    except ValueError as err:
        if isinstance(err, UebkError):
            raise
        raise FamilyFileError(f"Bad value in params: {err}", field="params")


def family_from_dict(doc: Any) -> UebkFamily:
    _check_schema(doc)
    params = params_from_dict(_require(doc, "params"))
    entries = _require(doc, "vectors")
    if not isinstance(entries, list):
        raise FamilyFileError("'vectors' must be a list", field="vectors")
    if not entries:
        raise FamilyFileError("'vectors' is empty", field="vectors")
    labels, vectors = [], []
    for index, entry in enumerate(entries):
        where = f"vectors[{index}]"
        label = _require(entry, "label", where)
        if not isinstance(label, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in label
        ):
            raise FamilyFileError(
                f"{where}.label must be a list of integers", field=f"{where}.label"
            )
        amps = pairs_to_amps(_require(entry, "amps", where), f"{where}.amps")
        if amps.size != params.ambient_dim:
            raise FamilyFileError(
                f"{where}.amps holds {amps.size} amplitudes, expected {params.ambient_dim}",
                field=f"{where}.amps",
            )
        labels.append(tuple(label))
        vectors.append(BipartiteVector(params.d, params.dprime, amps))
    return UebkFamily(params, tuple(vectors), tuple(labels))


def save_family(family: UebkFamily, path: PathLike) -> Path:
    path = _write(family_to_dict(family), path)
    LOG.info("Wrote %s members of %s to %s", len(family), family.params.label, path)
    return path


def load_family(path: PathLike) -> UebkFamily:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise FamilyFileError(f"{path} is not valid JSON: {err}")
    return family_from_dict(doc)


def report_to_dict(report: VerificationReport) -> dict:
    return {"schema_version": SCHEMA_VERSION, "report": report.as_dict()}


def save_report(report: VerificationReport, path: PathLike) -> Path:
    return _write(report_to_dict(report), path)


def state_to_dict(state: StateReport, entries: Optional[np.ndarray] = None) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "state": state.as_dict()}
    if entries is not None:
        doc["entries"] = [amps_to_pairs(row) for row in entries]
    return doc


def save_state(state: StateReport, path: PathLike, entries: Optional[np.ndarray] = None) -> Path:
    return _write(state_to_dict(state, entries), path)
