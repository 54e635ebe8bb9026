"""Newick text with exact rational branch lengths.

Leaves are named by their integer labels, internal nodes may carry names and every branch
length is written as ``p`` or ``p/q``. A leading ``[&R]`` marks the top node as the root;
``[&U]`` (or no marker) reads an unrooted tree. Example: ``[&R] ((1:4,2:4)w:3,3:7)v;``
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Iterator, Optional

import networkx as nx

from ..arith.rational import format_rational, parse_rational
from ..errors import InputError, ParseError
from .weighted import EquidistantTree, WeightedTree, is_equidistant

ROOTED_MARKER = "[&R]"
UNROOTED_MARKER = "[&U]"

_TOKENIZER = re.compile(r"\[[^\]]*\]|[(),:;]|[^\s(),:;\[\]]+|\s+")


@dataclass
class _Token:
    text: str
    line: int
    column: int


@dataclass
class _Node:
    name: Optional[str]
    length: Optional[Fraction]
    children: list["_Node"]
    token: _Token


def _tokenize(text: str, source: Optional[str]) -> list[_Token]:
    tokens = []
    line, column, position = 1, 1, 0
    while position < len(text):
        match = _TOKENIZER.match(text, position)
        if match is None:
            raise ParseError(f"unexpected character {text[position]!r}", line=line, column=column, source=source)
        piece = match.group(0)
        if not piece.isspace():
            tokens.append(_Token(piece, line, column))
        for char in piece:
            if char == "\n":
                line, column = line + 1, 1
            else:
                column += 1
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], source: Optional[str]) -> None:
        self.tokens = tokens
        self.position = 0
        self.source = source

    def error(self, message: str, token: Optional[_Token] = None) -> ParseError:
        token = token or (self.tokens[self.position] if self.position < len(self.tokens) else None)
        if token is None:
            last = self.tokens[-1] if self.tokens else _Token("", 1, 1)
            return ParseError(message, line=last.line, column=last.column + len(last.text), source=self.source)
        return ParseError(message, line=token.line, column=token.column, source=self.source)

    def peek(self) -> Optional[str]:
        return self.tokens[self.position].text if self.position < len(self.tokens) else None

    def take(self) -> _Token:
        if self.position >= len(self.tokens):
            raise self.error("unexpected end of input")
        token = self.tokens[self.position]
        self.position += 1
        return token

    def node(self) -> _Node:
        start = self.tokens[self.position] if self.position < len(self.tokens) else None
        if start is None:
            raise self.error("unexpected end of input")
        children: list[_Node] = []
        if self.peek() == "(":
            self.take()
            children.append(self.node())
            while self.peek() == ",":
                self.take()
                children.append(self.node())
            closing = self.take()
            if closing.text != ")":
                raise self.error("expected ')'", closing)
        name = None
        if self.peek() not in (None, "(", ")", ",", ":", ";") and not self.peek().startswith("["):
            name = self.take().text
        length = None
        if self.peek() == ":":
            self.take()
            token = self.take()
            try:
                length = parse_rational(token.text)
            except (ValueError, ZeroDivisionError):
                raise self.error(f"invalid branch length {token.text!r}", token) from None
        if not children and name is None:
            raise self.error("leaf without a label", start)
        return _Node(name, length, children, start)


def parse_newick(text: str, source: Optional[str] = None) -> WeightedTree:
    """Parse a tree; rooted trees whose leaves are equidistant come back as :class:`EquidistantTree`."""
    tokens = _tokenize(text, source)
    rooted = False
    if tokens and tokens[0].text.startswith("["):
        marker = tokens.pop(0)
        if marker.text.upper() == ROOTED_MARKER:
            rooted = True
        elif marker.text.upper() != UNROOTED_MARKER:
            raise ParseError(f"unknown marker {marker.text!r}", line=marker.line, column=marker.column, source=source)
    parser = _Parser(tokens, source)
    top = parser.node()
    end = parser.take() if parser.peek() is not None else None
    if end is None or end.text != ";":
        raise parser.error("missing terminating ';'", end)
    if parser.peek() is not None:
        raise parser.error("trailing text after ';'")
    if top.length is not None and top.length != 0:
        raise parser.error("the top node cannot have a branch length", top.token)

    graph = nx.Graph()
    taken = _collect_names(top)
    fresh = (name for name in (f"n{index}" for index in count(1)) if name not in taken)
    used: set[str] = set()

    def claim(node: _Node) -> str:
        if node.name is None:
            name = next(fresh)
        elif node.name in used:
            raise parser.error(f"duplicate node name {node.name!r}", node.token)
        else:
            name = node.name
        used.add(name)
        return name

    def build(node: _Node) -> str:
        if not node.children and not node.name.isdigit():
            raise parser.error(f"leaf label {node.name!r} is not a positive integer", node.token)
        node_id = claim(node)
        graph.add_node(node_id)
        for child in node.children:
            if child.length is None:
                raise parser.error("every branch needs a length", child.token)
            child_id = build(child)
            graph.add_edge(node_id, child_id, length=child.length)
        return node_id

    root = build(top)
    try:
        tree = WeightedTree(_preorder_graph(graph, root), root if rooted else None)
    except InputError as exc:
        raise ParseError(str(exc), line=top.token.line, column=top.token.column, source=source) from exc
    if rooted and is_equidistant(tree):
        return EquidistantTree.from_rooted(tree)
    return tree


def _collect_names(node: _Node) -> set[str]:
    names = {node.name} if node.name is not None else set()
    for child in node.children:
        names |= _collect_names(child)
    return names


def _preorder_graph(graph: nx.Graph, top: str) -> nx.Graph:
    ordered = nx.Graph()
    ordered.add_node(top)
    for parent, child in nx.dfs_edges(graph, top):
        ordered.add_edge(parent, child, length=graph.edges[parent, child]["length"])
    return ordered


def _write(tree: WeightedTree, node: str, parent: Optional[str]) -> Iterator[str]:
    children = [other for other in tree.graph.adj[node] if other != parent]
    if children:
        yield "("
        for index, child in enumerate(children):
            if index:
                yield ","
            yield from _write(tree, child, node)
        yield ")"
    yield node
    if parent is not None:
        yield ":" + format_rational(tree.length(parent, node))


def format_newick(tree: WeightedTree) -> str:
    top = tree.root if tree.root is not None else tree._start_node()
    marker = ROOTED_MARKER if tree.is_rooted else UNROOTED_MARKER
    return marker + " " + "".join(_write(tree, top, None)) + ";"


def tree_digest(tree: WeightedTree) -> str:
    return hashlib.sha256(format_newick(tree).encode("utf-8")).hexdigest()[:16]
