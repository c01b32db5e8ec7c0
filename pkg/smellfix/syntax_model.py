# Copyright 2024 The smellfix Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import ast
import textwrap
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

from smellfix.errors import ParseError

FUNCTION = 'function'
LAMBDA = 'lambda'
CLASS = 'class'
ATTRIBUTE_CHAIN = 'attribute-chain-expression'
TERNARY = 'ternary-expression'
COMPREHENSION = 'comprehension'
CONTAINER = 'container-literal'

ENTITY_KINDS = (FUNCTION, LAMBDA, CLASS, ATTRIBUTE_CHAIN, TERNARY, COMPREHENSION, CONTAINER)

FUNCTION_NODES = (ast.FunctionDef, ast.AsyncFunctionDef)
COMPREHENSION_NODES = (ast.ListComp, ast.SetComp, ast.DictComp, ast.GeneratorExp)
CONTAINER_NODES = (ast.List, ast.Set, ast.Tuple, ast.Dict)
CHAIN_NODES = (ast.Attribute, ast.Call, ast.Subscript)

Span = Tuple[int, int, int, int]


@dataclass(eq=False)
class SourceUnit:
    """One parsed source file.

    line_offsets holds the UTF-8 byte offset at which every physical line
    starts; a trailing newline does not open a new line.
    """
    path: str
    text: str
    tree: ast.Module
    line_offsets: List[int]
    lines: List[str] = field(default_factory=list, repr=False)

    @property
    def n_lines(self):
        return len(self.line_offsets)

    def char_col(self, lineno, byte_col):
        if not 1 <= lineno <= len(self.lines):
            return byte_col
        encoded = self.lines[lineno - 1].encode('utf-8')
        return len(encoded[:byte_col].decode('utf-8', errors='replace'))

    def segment(self, node):
        return ast.get_source_segment(self.text, node)

    @cached_property
    def parents(self):
        """Maps every node of the tree to its parent node."""
        return {child: node for node in ast.walk(self.tree) for child in ast.iter_child_nodes(node)}


@dataclass(eq=False)
class CodeEntity:
    kind: str
    span: Span
    name: Optional[str] = None
    nesting_parent: Optional['CodeEntity'] = field(default=None, repr=False)
    node: Optional[ast.AST] = field(default=None, repr=False)
    # set on top-level functions of a fragment lifted out of a class body
    class_body: bool = False

    @property
    def start_line(self):
        return self.span[0]

    @property
    def end_line(self):
        return self.span[2]

    def ancestors(self):
        parent = self.nesting_parent
        while parent is not None:
            yield parent
            parent = parent.nesting_parent

    def contains(self, other):
        return self.span[:2] <= other.span[:2] and other.span[2:] <= self.span[2:]

    @property
    def is_method(self):
        if self.kind != FUNCTION:
            return False
        if self.nesting_parent is None:
            return self.class_body
        return self.nesting_parent.kind == CLASS

    def outermost_scope(self):
        """The outermost function or lambda around this entity, itself included."""
        outermost = self
        for ancestor in self.ancestors():
            if ancestor.kind in (FUNCTION, LAMBDA):
                outermost = ancestor
        return outermost


def compute_line_offsets(text):
    data = text.encode('utf-8')
    offsets = [0]
    start = data.find(b'\n')
    while start != -1:
        if start + 1 < len(data):
            offsets.append(start + 1)
        start = data.find(b'\n', start + 1)
    return offsets


def parse_source(path, text):
    try:
        tree = ast.parse(text, filename=str(path))
    except SyntaxError as e:
        raise ParseError(e.lineno or 1, (e.offset or 1) - 1, e.msg, path=str(path)) from e
    except ValueError as e:
        # null bytes are reported as ValueError by older interpreters
        raise ParseError(1, 0, str(e), path=str(path)) from e

    return SourceUnit(path=str(path),
                      text=text,
                      tree=tree,
                      line_offsets=compute_line_offsets(text),
                      lines=text.splitlines(keepends=True))


def read_source(path):
    try:
        with open(path, encoding='utf-8-sig') as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise ParseError(1, 0, 'not valid UTF-8: {}'.format(e.reason), path=str(path)) from e
    return parse_source(path, text)


def dedent_fragment(text):
    """Strips the first non-blank line's indent from every line that carries it.

    Lines indented less, such as the body of a triple-quoted string, are kept
    as they are.
    """
    lines = text.splitlines(keepends=True)
    first = next((line for line in lines if line.strip()), '')
    indent = first[:len(first) - len(first.lstrip(' \t'))]
    if not indent:
        return text
    return ''.join(line[len(indent):] if line.startswith(indent) else line for line in lines)


def parse_fragment(text, path='<fragment>'):
    """Parses a code fragment lifted out of a larger file.

    The fragment is dedented by its first line; a trailing block header gets a
    ``pass`` body.
    """
    candidates = []
    for dedented in (dedent_fragment(text), textwrap.dedent(text)):
        candidates.append(dedented)
        stripped = dedented.rstrip()
        if stripped.endswith(':'):
            candidates.append(stripped + '\n    pass\n')
    candidates = list(dict.fromkeys(candidates))

    error = None
    for candidate in candidates:
        try:
            return parse_source(path, candidate)
        except ParseError as e:
            error = error or e
    raise error


def _entity_span(unit, node):
    start_line, start_col = node.lineno, node.col_offset
    decorators = getattr(node, 'decorator_list', None)
    if decorators:
        start_line = min(start_line, min(d.lineno for d in decorators))
    return (start_line,
            unit.char_col(node.lineno, start_col),
            node.end_lineno,
            unit.char_col(node.end_lineno, node.end_col_offset))


def chain_spine(node):
    """Nodes along a dotted chain, outermost first: trailers are calls,
    subscripts and attribute accesses."""
    spine = []
    while isinstance(node, CHAIN_NODES):
        spine.append(node)
        if isinstance(node, ast.Call):
            node = node.func
        else:
            node = node.value
    return spine


def chain_length(node):
    return sum(1 for n in chain_spine(node) if isinstance(n, ast.Attribute))


class _EntityCollector(ast.NodeVisitor):

    def __init__(self, unit, class_body=False):
        self.unit = unit
        self.class_body = class_body
        self.entities = []
        self._stack = []
        self._inner_chain_nodes = set()

    def _kind_of(self, node):
        if isinstance(node, FUNCTION_NODES):
            return FUNCTION, node.name
        if isinstance(node, ast.Lambda):
            return LAMBDA, None
        if isinstance(node, ast.ClassDef):
            return CLASS, node.name
        if isinstance(node, ast.IfExp):
            return TERNARY, None
        if isinstance(node, COMPREHENSION_NODES):
            return COMPREHENSION, None
        if isinstance(node, CONTAINER_NODES):
            if isinstance(getattr(node, 'ctx', ast.Load()), (ast.Store, ast.Del)):
                return None, None
            return CONTAINER, None
        if isinstance(node, CHAIN_NODES) and id(node) not in self._inner_chain_nodes:
            spine = chain_spine(node)
            self._inner_chain_nodes.update(id(n) for n in spine[1:])
            if chain_length(node) >= 1:
                return ATTRIBUTE_CHAIN, _dotted_name(spine)
        return None, None

    def generic_visit(self, node):
        kind, name = self._kind_of(node)
        if kind is None:
            super().generic_visit(node)
            return

        span = _entity_span(self.unit, node)
        parent = next((e for e in reversed(self._stack) if e.span != span), None)
        entity = CodeEntity(kind=kind, span=span, name=name, nesting_parent=parent, node=node,
                            class_body=self.class_body and parent is None)
        self.entities.append(entity)

        self._stack.append(entity)
        super().generic_visit(node)
        self._stack.pop()


def _dotted_name(spine):
    root = spine[-1].func if isinstance(spine[-1], ast.Call) else spine[-1].value
    parts = [root.id if isinstance(root, ast.Name) else '<expr>']
    for node in reversed(spine):
        if isinstance(node, ast.Attribute):
            parts.append(node.attr)
        elif isinstance(node, ast.Call):
            parts[-1] += '()'
        else:
            parts[-1] += '[]'
    return '.'.join(parts)


_KIND_ORDER = {kind: i for i, kind in enumerate(ENTITY_KINDS)}


def _sort_key(entity):
    start_line, start_col, end_line, end_col = entity.span
    return start_line, start_col, -end_line, -end_col, _KIND_ORDER[entity.kind]


def enumerate_entities(unit, class_body=False):
    """Entities of a unit in source order.

    class_body marks the unit as the inside of a class, so its top-level
    functions are methods.
    """
    collector = _EntityCollector(unit, class_body=class_body)
    collector.visit(unit.tree)
    return sorted(collector.entities, key=_sort_key)
