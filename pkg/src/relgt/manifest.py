"""Manifold file parsing: one self-describing JSON document per manifold.

Top-level keys: "name", "gram", "labels", "K", "b1", "flags",
"hypersurface" {"class", "genus"}, "ru_table", "qu_table", "rim",
"omega".  Rationals are serialized as "p/q" strings so no float ever
enters; integers are plain JSON numbers.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .classes import HypersurfaceModel, ManifoldModel
from .decomp import InvariantTable
from .initialdata import DataClass
from .lattice import IntegralLattice, LatticeClass
from .rimtori import RimPresentation


class ManifestError(ValueError):
    """Malformed manifold or data file."""


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ManifestError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ManifestError(f"bad rational {value!r}: {exc}") from exc
    raise ManifestError(f"expected an integer or 'p/q' string, got {value!r}")


_VECTOR_RE = re.compile(r"^[\s\d,+-]+$")
_TERM_RE = re.compile(r"^([+-]?\d*)\s*([A-Za-z_][A-Za-z_0-9]*)$")


def parse_class_spec(L: IntegralLattice, spec: Any) -> LatticeClass:
    """A class given as an integer vector or a combination of basis labels.

    Accepted forms: [1, 0, 2]; "1,0,2"; "E1+E2"; "2E1-3E2"; "h".
    """
    if isinstance(spec, (list, tuple)):
        coords = [int(x) for x in spec]
        if len(coords) != L.rank:
            raise ManifestError(
                f"class vector has length {len(coords)}, lattice rank is {L.rank}"
            )
        return LatticeClass(coords)
    if not isinstance(spec, str) or not spec.strip():
        raise ManifestError(f"bad class spec {spec!r}")
    text = spec.strip()
    if "," in text or _VECTOR_RE.match(text) and not re.search(r"[A-Za-z_]", text):
        try:
            coords = [int(x) for x in text.split(",")]
        except ValueError as exc:
            raise ManifestError(f"bad class vector {spec!r}: {exc}") from exc
        if len(coords) != L.rank:
            raise ManifestError(
                f"class vector has length {len(coords)}, lattice rank is {L.rank}"
            )
        return LatticeClass(coords)
    combo: dict[str, int] = {}
    terms = re.findall(r"[+-]?[^+-]+", text.replace(" ", ""))
    for term in terms:
        m = _TERM_RE.match(term)
        if not m:
            raise ManifestError(f"bad term {term!r} in class spec {spec!r}")
        coeff_text, label = m.groups()
        if coeff_text in ("", "+"):
            coeff = 1
        elif coeff_text == "-":
            coeff = -1
        else:
            coeff = int(coeff_text)
        combo[label] = combo.get(label, 0) + coeff
    try:
        return L.class_from_labels(combo)
    except ValueError as exc:
        raise ManifestError(str(exc)) from exc


def parse_data_class(obj: Any) -> DataClass:
    """Counts-level initial data: d1, d2 integers; l1, l2, l3 order lists."""
    if not isinstance(obj, dict):
        raise ManifestError("initial data must be a JSON object")
    unknown = set(obj) - {"d1", "d2", "l1", "l2", "l3"}
    if unknown:
        raise ManifestError(f"unknown initial data keys: {sorted(unknown)}")

    def ints(key):
        val = obj.get(key, [])
        if not isinstance(val, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in val
        ):
            raise ManifestError(f"{key} must be a list of integers")
        return tuple(val)

    for key in ("d1", "d2"):
        if not isinstance(obj.get(key, 0), int) or isinstance(obj.get(key, 0), bool):
            raise ManifestError(f"{key} must be an integer")
    try:
        return DataClass(
            d1=obj.get("d1", 0),
            d2=obj.get("d2", 0),
            l1=ints("l1"),
            l2=ints("l2"),
            l3=ints("l3"),
        )
    except ValueError as exc:
        raise ManifestError(f"bad initial data: {exc}") from exc


@dataclass
class ManifoldDocument:
    manifold: ManifoldModel
    hypersurface: HypersurfaceModel | None = None
    table: InvariantTable = field(default_factory=InvariantTable)
    rim: RimPresentation | None = None
    omega: tuple[Fraction, ...] | None = None


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def load_data_file(path: str) -> DataClass:
    return parse_data_class(_load_json(path))


def load_manifold(path: str) -> ManifoldDocument:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: top level must be a JSON object")
    try:
        return parse_manifold(doc)
    except ManifestError as exc:
        raise ManifestError(f"{path}: {exc}") from exc


def parse_manifold(doc: dict) -> ManifoldDocument:
    if "gram" not in doc:
        raise ManifestError("missing required key 'gram'")
    gram = doc["gram"]
    labels = doc.get("labels")
    try:
        lattice = IntegralLattice(gram, labels)
    except ValueError as exc:
        raise ManifestError(f"bad lattice: {exc}") from exc
    if "K" not in doc:
        raise ManifestError("missing required key 'K'")
    K = parse_class_spec(lattice, doc["K"])
    flags = doc.get("flags", [])
    if not isinstance(flags, list) or not all(isinstance(f, str) for f in flags):
        raise ManifestError("'flags' must be a list of strings")
    try:
        M = ManifoldModel(
            lattice=lattice,
            K=K,
            b1=doc.get("b1", 0),
            name=str(doc.get("name", "")),
            flags=frozenset(flags),
        )
    except ValueError as exc:
        raise ManifestError(f"bad manifold: {exc}") from exc

    V = None
    if "hypersurface" in doc:
        h = doc["hypersurface"]
        if not isinstance(h, dict) or "class" not in h or "genus" not in h:
            raise ManifestError("'hypersurface' needs 'class' and 'genus'")
        V = HypersurfaceModel.create(
            M, parse_class_spec(lattice, h["class"]), int(h["genus"])
        )

    table = InvariantTable()
    for entry in doc.get("ru_table", []):
        if not isinstance(entry, dict) or "class" not in entry or "value" not in entry:
            raise ManifestError("ru_table entries need 'class' and 'value'")
        c = parse_class_spec(lattice, entry["class"])
        dc = parse_data_class(
            {k: v for k, v in entry.items() if k in ("d1", "d2", "l1", "l2", "l3")}
        )
        # table keys are order-insensitive in the curve data: sorted on load
        dc = DataClass(dc.d1, dc.d2, dc.l1, tuple(sorted(dc.l2)), dc.l3)
        table.ru_entries[(c, dc)] = int(entry["value"])
    for entry in doc.get("qu_table", []):
        if not isinstance(entry, dict) or not {"class", "n", "value"} <= set(entry):
            raise ManifestError("qu_table entries need 'class', 'n' and 'value'")
        c = parse_class_spec(lattice, entry["class"])
        table.qu_entries[(c, int(entry["n"]))] = int(entry["value"])

    rim = None
    if "rim" in doc:
        r = doc["rim"]
        if not isinstance(r, dict) or "h1v_rank" not in r:
            raise ManifestError("'rim' needs 'h1v_rank' and 'matrix'")
        try:
            rim = RimPresentation(int(r["h1v_rank"]), r.get("matrix", []))
        except ValueError as exc:
            raise ManifestError(f"bad rim presentation: {exc}") from exc

    omega = None
    if "omega" in doc:
        vec = doc["omega"]
        if not isinstance(vec, list) or len(vec) != lattice.rank:
            raise ManifestError("'omega' must be a vector of length equal to the rank")
        omega = tuple(parse_rational(x) for x in vec)

    return ManifoldDocument(M, V, table, rim, omega)


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
