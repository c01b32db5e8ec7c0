from collections import namedtuple

from smellfix import syntax_model as sm

SmellType = namedtuple('SmellType', ['abbrev', 'name', 'metric_id', 'entity_kinds', 'level'])

# level: 'entity' smells are measured over a def/class region,
# 'expression' smells over an expression extent
SMELL_TYPES = (
    SmellType('LPL', 'Long Parameter List', 'PAR', (sm.FUNCTION,), 'entity'),
    SmellType('LM', 'Long Method', 'MLOC', (sm.FUNCTION,), 'entity'),
    SmellType('LSC', 'Long Scope Chaining', 'DOC_CHAIN', (sm.FUNCTION, sm.LAMBDA), 'entity'),
    SmellType('LC', 'Large Class', 'CLOC', (sm.CLASS,), 'entity'),
    SmellType('LMC', 'Long Message Chain', 'LMC_LEN', (sm.ATTRIBUTE_CHAIN,), 'expression'),
    SmellType('LBCL', 'Long Base Class List', 'NBC', (sm.CLASS,), 'entity'),
    SmellType('LLF', 'Long Lambda Function', 'LLF_LEN', (sm.LAMBDA,), 'expression'),
    SmellType('LTCE', 'Long Ternary Conditional Expression', 'LTCE_LEN', (sm.TERNARY,), 'expression'),
    SmellType('CCC', 'Complex Container Comprehension', 'CNC', (sm.COMPREHENSION,), 'expression'),
    SmellType('MNC', 'Multiply-Nested Container', 'DOC', (sm.CONTAINER,), 'expression'),
)

SMELLS = {s.abbrev: s for s in SMELL_TYPES}
SMELL_ABBREVS = tuple(s.abbrev for s in SMELL_TYPES)
METRIC_TO_SMELL = {s.metric_id: s.abbrev for s in SMELL_TYPES}
METRIC_IDS = tuple(s.metric_id for s in SMELL_TYPES)

# column heads used by the published fixing-rate table
ALIASES = {'CC': 'CCC', 'CMC': 'LMC'}


def canonical(abbrev):
    abbrev = abbrev.strip().upper()
    abbrev = ALIASES.get(abbrev, abbrev)
    if abbrev not in SMELLS:
        raise KeyError('Unknown smell type: "{}".'.format(abbrev))
    return abbrev


def full_name(abbrev):
    return SMELLS[canonical(abbrev)].name


def smells_for_kind(kind):
    return [s for s in SMELL_TYPES if kind in s.entity_kinds]


def canonical_order(abbrevs):
    return sorted(set(abbrevs), key=SMELL_ABBREVS.index)
