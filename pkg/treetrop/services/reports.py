from __future__ import annotations

import json
from typing import Any, Iterable, Optional, Union

from pydantic import BaseModel

from ..arith.rational import format_rational
from ..errors import InputError
from ..settings import settings
from .metrics import DissimilarityMatrix, MVector

Payload = Union[BaseModel, dict, list]


def subset_key(subset: Iterable[int]) -> str:
    return "{" + ",".join(str(index) for index in sorted(subset)) + "}"


def parse_subset_key(text: str) -> tuple[int, ...]:
    cleaned = text.strip()
    if not (cleaned.startswith("{") and cleaned.endswith("}")):
        raise InputError(f"subset {text!r} must look like {{1,2,3}}")
    try:
        return tuple(sorted(int(part) for part in cleaned[1:-1].split(",") if part.strip()))
    except ValueError:
        raise InputError(f"subset {text!r} holds a non-integer index") from None


def mvector_payload(vector: MVector) -> dict[str, Any]:
    return {
        "n": vector.n,
        "m": vector.m,
        "values": {subset_key(subset): format_rational(value) for subset, value in vector.items()},
    }


def matrix_payload(matrix: DissimilarityMatrix) -> dict[str, Any]:
    return {"n": matrix.n, "rows": [[format_rational(value) for value in row] for row in matrix.rows()]}


def to_payload(data: Payload) -> Any:
    if isinstance(data, BaseModel):
        return data.model_dump(mode="json", by_alias=True)
    if isinstance(data, list):
        return [to_payload(item) for item in data]
    return data


def render_json(data: Payload, indent: Optional[int] = None) -> str:
    indent = settings.json_indent if indent is None else indent
    return json.dumps(to_payload(data), indent=indent or None, ensure_ascii=False) + "\n"


def matrix_csv(matrix: DissimilarityMatrix, header: bool = True) -> str:
    lines = [",".join(str(label) for label in range(1, matrix.n + 1))] if header else []
    lines.extend(",".join(format_rational(value) for value in row) for row in matrix.rows())
    return "\n".join(lines) + "\n"
