"""Published fixing-rate counts replayed through the scripted mock backend.

Each smell type gets one single-smell snippet per target; the scenario marks
the first n requests of every (type, tier) cell as fixed and echoes the rest.
"""
from smellfix import syntax_model as sm
from smellfix.detector import detect
from smellfix.profiles import TUNING_MACHINE, load_profile
from smellfix.snippets import SmellSnippet, estimate_tokens, snippet_id_for

TARGET_TOTALS = dict(MNC=36, LPL=22, LM=12, LLF=10, LTCE=5, CCC=4, LMC=2, LC=2)

FIXED_COUNTS = dict(
    general=dict(MNC=7, LPL=0, LM=6, LLF=10, LTCE=4, CCC=2, LMC=1, LC=2),
    code_smell=dict(MNC=21, LPL=5, LM=11, LLF=10, LTCE=5, CCC=4, LMC=2, LC=2),
    specific=dict(MNC=25, LPL=21, LM=12, LLF=10, LTCE=5, CCC=4, LMC=2, LC=2),
)

# code that keeps its smell under the tuning-machine profile when echoed back
SMELLY_CODE = dict(
    MNC='matrix = [[[0, 1], [2, 3]], [[4, 5], [6, 7]]]\n',
    LPL='def configure(host, port, user, password, timeout):\n'
        '    return host, port, user, password, timeout\n',
    LM='def accumulate(values):\n'
       '    total = 0\n'
       + ''.join('    total += values[{}]\n'.format(i) for i in range(37))
       + '    return total\n',
    LLF='scale = lambda value, factor, offset: value * factor + offset * factor - value / factor\n',
    LTCE="label = 'positive number' if measurement_value > threshold_value else 'non-positive number'\n",
    CCC='evens = [n for n in numbers if n > 0 if n % 2 == 0 if n < 100]\n',
    LMC='result = client.session.pool.connection.cursor.execute(query)\n',
    LC='class Registry:\n' + ''.join('    slot_{0} = {0}\n'.format(i) for i in range(29)),
)

def fixed_counts():
    """(smell_type, tier) -> fixed attempts."""
    return {(smell_type, tier): n
            for tier, row in FIXED_COUNTS.items()
            for smell_type, n in row.items()}


def published_snippets(profile=None):
    """TARGET_TOTALS single-smell snippets whose instances come from detecting SMELLY_CODE."""
    profile = profile or load_profile(TUNING_MACHINE)
    snippets = []
    for smell_type, total in TARGET_TOTALS.items():
        text = SMELLY_CODE[smell_type]
        n_lines = text.count('\n')
        for k in range(total):
            file = 'published/{}_{:02d}.py'.format(smell_type, k + 1)
            found = [i for i in detect(sm.parse_source(file, text), profile) if i.smell_type == smell_type]
            if not found:
                raise ValueError('{} shows no {} under profile "{}".'.format(file, smell_type, profile.name))
            snippets.append(SmellSnippet(snippet_id=snippet_id_for(file, (1, n_lines)),
                                         file=file,
                                         line_range=(1, n_lines),
                                         text=text,
                                         instances=found[:1],
                                         est_tokens=estimate_tokens(text)))
    return snippets
