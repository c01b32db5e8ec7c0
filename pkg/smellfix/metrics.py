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
import io
import tokenize
from dataclasses import dataclass

from smellfix import syntax_model as sm
from smellfix.errors import WrongEntityKind
from smellfix.smells import smells_for_kind

RECEIVER_NAMES = ('self', 'cls')
LENGTH_UNITS = ('chars', 'tokens')

_LAYOUT_TOKENS = (tokenize.NL, tokenize.NEWLINE, tokenize.INDENT, tokenize.DEDENT,
                  tokenize.ENDMARKER, tokenize.COMMENT)


@dataclass(eq=False)
class MetricVector:
    entity: sm.CodeEntity
    metric_id: str
    value: int


def _expect(entity, *kinds):
    if entity.kind not in kinds:
        raise WrongEntityKind('/'.join(kinds), entity.kind)


def metric_par(entity, count_receiver=False):
    _expect(entity, sm.FUNCTION)
    args = entity.node.args
    positional = list(args.posonlyargs) + list(args.args)
    n = len(positional) + len(args.kwonlyargs)
    n += int(args.vararg is not None) + int(args.kwarg is not None)

    if (not count_receiver
            and entity.is_method
            and positional
            and positional[0].arg in RECEIVER_NAMES):
        n -= 1
    return n


def metric_mloc(entity):
    _expect(entity, sm.FUNCTION)
    return entity.end_line - entity.start_line + 1


def metric_cloc(entity):
    _expect(entity, sm.CLASS)
    return entity.end_line - entity.start_line + 1


def metric_scope_chain(entity, lambdas_in_scope_chain=True):
    scope_kinds = (sm.FUNCTION, sm.LAMBDA) if lambdas_in_scope_chain else (sm.FUNCTION,)
    _expect(entity, *scope_kinds)
    return 1 + sum(1 for a in entity.ancestors() if a.kind in scope_kinds)


def metric_chain(entity):
    _expect(entity, sm.ATTRIBUTE_CHAIN)
    return sm.chain_length(entity.node)


def metric_nbc(entity):
    _expect(entity, sm.CLASS)
    return len(entity.node.bases)


def expression_length(unit, node, length_unit='chars'):
    segment = unit.segment(node) or ''
    if length_unit == 'tokens':
        readline = io.StringIO('(' + segment + ')').readline
        tokens = [t for t in tokenize.generate_tokens(readline) if t.type not in _LAYOUT_TOKENS]
        return len(tokens) - 2
    return len(segment) - segment.count('\n') - segment.count('\r')


def metric_llf(entity, unit, length_unit='chars'):
    _expect(entity, sm.LAMBDA)
    return expression_length(unit, entity.node, length_unit)


def metric_ltce(entity, unit, length_unit='chars'):
    _expect(entity, sm.TERNARY)
    return expression_length(unit, entity.node, length_unit)


def metric_cnc(entity):
    _expect(entity, sm.COMPREHENSION)
    return sum(1 + len(gen.ifs) for gen in entity.node.generators)


def container_depth(node):
    level = 1 if isinstance(node, sm.CONTAINER_NODES + sm.COMPREHENSION_NODES) else 0
    return level + max((container_depth(child) for child in ast.iter_child_nodes(node)), default=0)


def metric_doc(entity):
    _expect(entity, sm.CONTAINER)
    return container_depth(entity.node)


def measure(entity, unit, metric_id, count_receiver=False, lambdas_in_scope_chain=True,
            length_unit='chars'):
    if metric_id == 'PAR':
        return metric_par(entity, count_receiver=count_receiver)
    if metric_id == 'MLOC':
        return metric_mloc(entity)
    if metric_id == 'DOC_CHAIN':
        return metric_scope_chain(entity, lambdas_in_scope_chain=lambdas_in_scope_chain)
    if metric_id == 'CLOC':
        return metric_cloc(entity)
    if metric_id == 'LMC_LEN':
        return metric_chain(entity)
    if metric_id == 'NBC':
        return metric_nbc(entity)
    if metric_id == 'LLF_LEN':
        return metric_llf(entity, unit, length_unit=length_unit)
    if metric_id == 'LTCE_LEN':
        return metric_ltce(entity, unit, length_unit=length_unit)
    if metric_id == 'CNC':
        return metric_cnc(entity)
    if metric_id == 'DOC':
        return metric_doc(entity)
    raise ValueError('Invalid metric id: "{}".'.format(metric_id))


def metric_vectors(entity, unit, count_receiver=False, lambdas_in_scope_chain=True,
                   length_unit='chars'):
    """Every metric defined over the entity's kind, one vector per smell row."""
    vectors = []
    for smell in smells_for_kind(entity.kind):
        if smell.abbrev == 'LSC' and entity.kind == sm.LAMBDA and not lambdas_in_scope_chain:
            continue
        value = measure(entity, unit, smell.metric_id,
                        count_receiver=count_receiver,
                        lambdas_in_scope_chain=lambdas_in_scope_chain,
                        length_unit=length_unit)
        vectors.append(MetricVector(entity=entity, metric_id=smell.metric_id, value=value))
    return vectors
