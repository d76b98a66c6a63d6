"""JSON documents describing an algebra by generators."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from lienil.algebra import MatrixAlgebra, close_generators
from lienil.fields import FieldError, FieldSpec
from lienil.linalg import Matrix


class DocumentError(ValueError):
    """Invalid algebra document; the message names the offending location."""


@dataclass
class AlgebraDocument:
    field: FieldSpec
    n: int
    generators: list
    label: str | None = None
    unital: bool = True

    @classmethod
    def from_obj(cls, obj: Any) -> AlgebraDocument:
        if not isinstance(obj, dict):
            raise DocumentError("$: top level must be a JSON object")
        for key in ("field", "n", "generators"):
            if key not in obj:
                raise DocumentError(f"$: missing key {key!r}")
        try:
            field = FieldSpec.from_json(obj["field"])
        except (FieldError, TypeError, ValueError, KeyError) as exc:
            raise DocumentError(f"$.field: {exc}") from None
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise DocumentError(f"$.n: expected a positive integer, got {n!r}")
        gens_obj = obj["generators"]
        if not isinstance(gens_obj, list):
            raise DocumentError("$.generators: expected a list of matrices")
        gens = []
        for g, mat in enumerate(gens_obj):
            where = f"$.generators[{g}]"
            if not isinstance(mat, list) or len(mat) != n:
                raise DocumentError(f"{where}: expected {n} rows")
            rows = []
            for i, row in enumerate(mat):
                if not isinstance(row, list) or len(row) != n:
                    raise DocumentError(f"{where}[{i}]: expected {n} entries")
                vals = []
                for j, text in enumerate(row):
                    try:
                        vals.append(field.parse_raw(text))
                    except (FieldError, ValueError) as exc:
                        raise DocumentError(f"{where}[{i}][{j}]: {exc}") from None
                rows.append(vals)
            gens.append(Matrix(field, rows))
        label = obj.get("label")
        if label is not None and not isinstance(label, str):
            raise DocumentError("$.label: expected a string")
        unital = obj.get("unital", True)
        if not isinstance(unital, bool):
            raise DocumentError("$.unital: expected true or false")
        return cls(field, n, gens, label, unital)

    @classmethod
    def loads(cls, text: str) -> AlgebraDocument:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_obj(obj)

    @classmethod
    def load(cls, path) -> AlgebraDocument:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
        return cls.loads(text)

    def to_obj(self) -> dict:
        out: dict[str, Any] = {
            "field": self.field.to_json(),
            "n": self.n,
            "generators": [m.to_text() for m in self.generators],
        }
        if self.label is not None:
            out["label"] = self.label
        if not self.unital:
            out["unital"] = False
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_obj(), indent=1)

    def dump(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    def to_algebra(self) -> MatrixAlgebra:
        return close_generators(self.field, self.n, self.generators, unital=self.unital)

    @classmethod
    def from_algebra(cls, r: MatrixAlgebra, label: str | None = None) -> AlgebraDocument:
        return cls(r.field, r.n, r.basis(), label, r.unital)
