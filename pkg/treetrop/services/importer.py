from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

import networkx as nx

from ..arith.rational import as_rational, parse_rational
from ..errors import InputError, ParseError
from ..trees.newick import format_newick, parse_newick
from ..trees.weighted import EquidistantTree, WeightedTree
from .metrics import DissimilarityMatrix, MVector
from .reports import matrix_csv, matrix_payload, mvector_payload, parse_subset_key, render_json

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write(path: PathLike, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info("wrote %s", target)


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno, source=source) from exc


def _rational(value: Any, what: str):
    if isinstance(value, float):
        raise InputError(f"{what} must be an exact rational string, not the float {value!r}")
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"{what} is not an exact rational: {value!r}") from None


# -- trees --------------------------------------------------------------------------


def tree_from_dict(payload: dict[str, Any]) -> WeightedTree:
    """Inverse of ``WeightedTree.to_dict``; a ``heights`` entry gives back an equidistant tree."""
    try:
        edges = payload["edges"]
        root = payload.get("root")
    except (KeyError, TypeError, AttributeError):
        raise InputError("tree JSON needs an 'edges' list") from None
    graph = nx.Graph()
    for index, edge in enumerate(edges, start=1):
        try:
            u, v, length = str(edge["u"]), str(edge["v"]), edge["length"]
        except (KeyError, TypeError):
            raise InputError(f"edge {index} needs 'u', 'v' and 'length'") from None
        graph.add_edge(u, v, length=_rational(length, f"length of edge {index}"))
    if graph.number_of_nodes() == 0:
        graph.add_node("1")
    if root is not None:
        ordered = nx.Graph()
        ordered.add_node(root)
        for parent, child in nx.dfs_edges(graph, root):
            ordered.add_edge(parent, child, length=graph.edges[parent, child]["length"])
        graph = ordered
    if "heights" in payload:
        heights = {node: _rational(value, f"height of {node}") for node, value in payload["heights"].items()}
        return EquidistantTree(graph, root, heights)
    return WeightedTree(graph, root)


def read_tree(path: PathLike) -> WeightedTree:
    text = _read(path)
    if Path(path).suffix.lower() == ".json":
        return tree_from_dict(_load_json(text, str(path)))
    return parse_newick(text, source=str(path))


def write_tree(tree: WeightedTree, path: PathLike) -> None:
    if Path(path).suffix.lower() == ".json":
        _write(path, render_json(tree.to_dict()))
    else:
        _write(path, format_newick(tree) + "\n")


# -- matrices -----------------------------------------------------------------------


def parse_matrix_csv(text: str, source: Optional[str] = None) -> DissimilarityMatrix:
    """Rows of exact rationals under an optional header line.

    The header is either a non-numeric first line or the leaf labels ``1..n`` above an
    ``n``-row matrix.
    """
    rows: list[list] = []
    reader = csv.reader(io.StringIO(text))
    for line_number, raw in enumerate(reader, start=1):
        cells = [cell.strip() for cell in raw]
        if not any(cells):
            continue
        parsed = []
        for column, cell in enumerate(cells, start=1):
            try:
                parsed.append(parse_rational(cell))
            except (ValueError, ZeroDivisionError):
                if not rows and line_number == 1:
                    parsed = None
                    break
                raise ParseError(f"invalid rational {cell!r}", line=line_number, column=column, source=source) from None
        if parsed is not None:
            rows.append(parsed)
    if rows and len(rows) == len(rows[0]) + 1 and rows[0] == list(range(1, len(rows[0]) + 1)):
        rows = rows[1:]
    if not rows:
        raise ParseError("no matrix rows", line=1, column=1, source=source)
    return DissimilarityMatrix(rows)


def matrix_from_json(payload: Any) -> DissimilarityMatrix:
    rows = payload.get("rows") if isinstance(payload, dict) else payload
    if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
        raise InputError("matrix JSON needs a list of rows")
    return DissimilarityMatrix(
        [[_rational(value, f"entry ({i},{j})") for j, value in enumerate(row, start=1)] for i, row in enumerate(rows, start=1)]
    )


def read_matrix(path: PathLike) -> DissimilarityMatrix:
    text = _read(path)
    if Path(path).suffix.lower() == ".json":
        return matrix_from_json(_load_json(text, str(path)))
    return parse_matrix_csv(text, source=str(path))


def write_matrix(matrix: DissimilarityMatrix, path: PathLike) -> None:
    if Path(path).suffix.lower() == ".json":
        _write(path, render_json(matrix_payload(matrix)))
    else:
        _write(path, matrix_csv(matrix))


# -- m-dissimilarity vectors --------------------------------------------------------


def mvector_from_json(payload: Any) -> MVector:
    """``values`` maps ``"{1,2,3}"`` keys to rationals; a list of ``{subset, value}`` records also reads."""
    try:
        n, m, records = payload["n"], payload["m"], payload["values"]
        if isinstance(records, dict):
            records = [{"subset": key, "value": value} for key, value in records.items()]
        values = {parse_subset_key(record["subset"]): _rational(record["value"], record["subset"]) for record in records}
    except (KeyError, TypeError):
        raise InputError("vector JSON needs 'n', 'm' and 'values' keyed by subsets like \"{1,2,3}\"") from None
    return MVector(int(n), int(m), values)


def read_mvector(path: PathLike) -> MVector:
    return mvector_from_json(_load_json(_read(path), str(path)))


def write_mvector(vector: MVector, path: PathLike) -> None:
    _write(path, render_json(mvector_payload(vector)))
