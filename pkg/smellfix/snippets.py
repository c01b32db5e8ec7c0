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
import math
from dataclasses import dataclass
from typing import List, Tuple

from loguru import logger
from monty.collections import AttrDict
from monty.json import MontyDecoder, MSONable

from smellfix import syntax_model as sm
from smellfix.errors import ParseError, SpanOutOfFile
from smellfix.general_utils import read_jsonl, write_jsonl

DEFAULT_TOKEN_LIMIT = 4096
CHARS_PER_TOKEN = 4


def estimate_tokens(text):
    return math.ceil(len(text) / CHARS_PER_TOKEN)


def snippet_id_for(file, line_range):
    return '{}#L{}-L{}'.format(file, line_range[0], line_range[1])


@dataclass
class SmellSnippet(MSONable):
    snippet_id: str
    file: str
    line_range: Tuple[int, int]
    text: str
    instances: list
    est_tokens: int

    def __post_init__(self):
        self.line_range = tuple(self.line_range)
        decoder = MontyDecoder()
        self.instances = [decoder.process_decoded(i) if isinstance(i, dict) else i
                          for i in self.instances]
        assert self.instances, 'a snippet references at least one smell instance'

    @property
    def smell_types(self):
        seen = []
        for instance in self.instances:
            if instance.smell_type not in seen:
                seen.append(instance.smell_type)
        return seen


@dataclass
class DroppedSnippet(MSONable):
    snippet: SmellSnippet
    reason: str


def _find_entity(entities, instance):
    for entity in entities:
        if entity.span == tuple(instance.span) and entity.kind == instance.entity_kind:
            return entity
    return None


def statement_lines(stmt):
    decorators = getattr(stmt, 'decorator_list', None) or []
    return min([stmt.lineno] + [d.lineno for d in decorators]), stmt.end_lineno


def _parses(unit, first, last):
    try:
        sm.parse_fragment(''.join(unit.lines[first - 1:last]))
    except ParseError:
        return False
    return True


def statement_region(unit, node):
    """Lines of the innermost statement around node that parses on its own.

    An expression in a block header takes the whole compound statement; one on
    an elif, except or decorator line climbs until the region stands alone.
    """
    current = node
    while current is not None:
        if isinstance(current, ast.stmt):
            first, last = statement_lines(current)
            if _parses(unit, first, last):
                return first, last
        current = unit.parents.get(current)
    return None


def snippet_lines(instance, unit, entities=None):
    """Whole-line region covering a smell instance."""
    first, last = instance.span[0], instance.span[2]
    if first < 1 or last > unit.n_lines or first > last:
        raise SpanOutOfFile('Span {} of {} exceeds {} lines of {}.'.format(
            tuple(instance.span), instance.smell_type, unit.n_lines, unit.path))

    entities = entities if entities is not None else sm.enumerate_entities(unit)
    entity = _find_entity(entities, instance)
    if entity is None:
        return first, last

    if instance.smell_type == 'LSC':
        # keep the whole closure nest so the chain survives on its own
        entity = entity.outermost_scope()
    if entity.kind in (sm.FUNCTION, sm.CLASS):
        return min(first, entity.start_line), max(last, entity.end_line)

    region = statement_region(unit, entity.node)
    if region is not None:
        return min(first, region[0]), max(last, region[1])
    return first, last


def build_snippet(instance, unit, entities=None):
    first, last = snippet_lines(instance, unit, entities=entities)
    text = ''.join(unit.lines[first - 1:last])
    if not text.endswith('\n'):
        text += '\n'
    return SmellSnippet(snippet_id=snippet_id_for(unit.path, (first, last)),
                        file=unit.path,
                        line_range=(first, last),
                        text=text,
                        instances=[instance],
                        est_tokens=estimate_tokens(text))


def consolidate(snippets):
    merged = {}
    for snippet in snippets:
        key = (snippet.file, snippet.line_range)
        if key not in merged:
            merged[key] = SmellSnippet(snippet_id=snippet.snippet_id,
                                       file=snippet.file,
                                       line_range=snippet.line_range,
                                       text=snippet.text,
                                       instances=list(snippet.instances),
                                       est_tokens=snippet.est_tokens)
            continue
        target = merged[key]
        known = {i.key for i in target.instances}
        target.instances.extend(i for i in snippet.instances if i.key not in known)
    return [merged[key] for key in sorted(merged)]


def filter_token_limit(snippets, limit=DEFAULT_TOKEN_LIMIT):
    if limit is None:
        limit = math.inf
    kept, dropped = [], []
    for snippet in snippets:
        if snippet.est_tokens > limit:
            reason = 'est_tokens {} > limit {}'.format(snippet.est_tokens, limit)
            logger.info('Dropping {}: {}', snippet.snippet_id, reason)
            dropped.append(DroppedSnippet(snippet=snippet, reason=reason))
        else:
            kept.append(snippet)
    return kept, dropped


def target_smells(snippet):
    """One fix target per distinct smell type carried by the snippet."""
    targets = {}
    for instance in snippet.instances:
        targets.setdefault(instance.smell_type, instance)
    return list(targets.values())


def summarize(instances, snippets, kept):
    return AttrDict(instances=len(instances),
                    snippets=len(snippets),
                    targets=sum(len(target_smells(s)) for s in snippets),
                    kept_snippets=len(kept),
                    kept_targets=sum(len(target_smells(s)) for s in kept))


def build_snippets(report, token_limit=DEFAULT_TOKEN_LIMIT):
    """Snippet stage over a CorpusReport: build, consolidate, filter."""
    built = []
    for path in sorted(report.files):
        instances = report.files[path]
        if not instances:
            continue
        try:
            unit = sm.read_source(path)
        except ParseError as e:
            logger.warning('Cannot rebuild snippets for {}: {}', path, e)
            continue
        entities = sm.enumerate_entities(unit)
        built.extend(build_snippet(instance, unit, entities=entities) for instance in instances)

    snippets = consolidate(built)
    kept, dropped = filter_token_limit(snippets, token_limit)
    summary = summarize(report.instances, snippets, kept)
    logger.info('{instances} instances -> {targets} targets in {snippets} snippets -> '
                '{kept_targets} targets in {kept_snippets} snippets', **summary)
    return AttrDict(snippets=snippets, kept=kept, dropped=dropped, summary=summary)


def write_manifest(path, kept, dropped=()):
    records = [dict(status='kept', smell_types=s.smell_types, snippet=s) for s in kept]
    records += [dict(status='dropped', smell_types=d.snippet.smell_types, reason=d.reason,
                     snippet=d.snippet) for d in dropped]
    write_jsonl(path, records)


def read_manifest(path):
    records = read_jsonl(path, decoder=MontyDecoder)
    kept = [r['snippet'] for r in records if r['status'] == 'kept']
    dropped = [DroppedSnippet(snippet=r['snippet'], reason=r.get('reason', ''))
               for r in records if r['status'] == 'dropped']
    return kept, dropped
