from collections import namedtuple

from smellfix.errors import MissingSmellName
from smellfix.smells import full_name

PromptTier = namedtuple('PromptTier', ['tier', 'template', 'title'])

GENERAL = 'general'
CODE_SMELL = 'code_smell'
SPECIFIC = 'specific'

PROMPT_TIERS = (
    PromptTier(GENERAL, 'Fix the problem in the selected code', 'General Fix Prompt'),
    PromptTier(CODE_SMELL, 'Fix the code smell in the selected code', 'Code Smell Fix Prompt'),
    PromptTier(SPECIFIC, 'Fix the {smell_name} code smell in the selected code',
               'Specific Code Smell Fix Prompt'),
)

TIERS = {t.tier: t for t in PROMPT_TIERS}
TIER_NAMES = tuple(t.tier for t in PROMPT_TIERS)


def parse_tiers(spec):
    """Parses a comma separated tier list; 'all' selects every tier."""
    if spec is None or spec == 'all':
        return TIER_NAMES
    names = [s.strip().replace('-', '_') for s in spec.split(',') if s.strip()]
    invalid = [n for n in names if n not in TIERS]
    if invalid:
        raise ValueError('Invalid prompt tier(s): {}. Choose from {}.'.format(invalid, TIER_NAMES))
    return tuple(n for n in TIER_NAMES if n in names)


def render_prompt(tier, smell_type=None):
    if tier not in TIERS:
        raise ValueError('Invalid prompt tier: "{}".'.format(tier))
    template = TIERS[tier].template
    if tier != SPECIFIC:
        return template
    if not smell_type:
        raise MissingSmellName('The specific prompt needs a smell type.')
    return template.format(smell_name=full_name(smell_type))


def chat_message(prompt_text, snippet_text):
    """Single user message: prompt, blank line, fenced snippet."""
    if not snippet_text.endswith('\n'):
        snippet_text += '\n'
    return '{}\n\n```python\n{}```'.format(prompt_text, snippet_text)
