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

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from loguru import logger
from monty.json import MontyDecoder, MSONable

from smellfix import syntax_model as sm
from smellfix.detector import detect
from smellfix.errors import ParseError
from smellfix.fix_loop import FixAttempt
from smellfix.general_utils import percent, read_jsonl
from smellfix.prompts import TIER_NAMES
from smellfix.smells import SMELL_ABBREVS, canonical, canonical_order

FIXED = 'fixed'
UNFIXED = 'unfixed'

SMELL_ABSENT = 'smell_absent'
SMELL_PERSISTS = 'smell_persists'
UNPARSEABLE_OUTPUT = 'unparseable_output'
NO_CODE_EXTRACTED = 'no_code_extracted'


@dataclass
class FixVerdict(MSONable):
    attempt: FixAttempt
    verdict: str
    reason: str
    residual_metric: Optional[int] = None
    new_smells: List[str] = field(default_factory=list)

    def __post_init__(self):
        if isinstance(self.attempt, dict):
            self.attempt = MontyDecoder().process_decoded(self.attempt)
        assert (self.verdict == FIXED) == (self.reason == SMELL_ABSENT), \
            'inconsistent verdict {}/{}'.format(self.verdict, self.reason)

    @property
    def fixed(self):
        return self.verdict == FIXED

    @property
    def smell_type(self):
        return self.attempt.smell_type

    @property
    def tier(self):
        return self.attempt.tier


def redetect(code, profile, class_body=False):
    """Instances found in a refactored fragment under the given profile.

    With class_body the fragment's top-level functions are read as methods.
    """
    unit = sm.parse_fragment(code)
    return detect(unit, profile, class_body=class_body)


def verdict(attempt, profile):
    if attempt.extracted_code is None or not attempt.extracted_code.strip():
        return FixVerdict(attempt=attempt, verdict=UNFIXED, reason=NO_CODE_EXTRACTED)
    try:
        instances = redetect(attempt.extracted_code, profile,
                             class_body=attempt.target_smell.class_body)
    except ParseError as e:
        logger.debug('Unparseable output for {} [{}]: {}', attempt.snippet_id, attempt.tier, e)
        return FixVerdict(attempt=attempt, verdict=UNFIXED, reason=UNPARSEABLE_OUTPUT)

    target = attempt.smell_type
    persisting = [i for i in instances if i.smell_type == target]
    new_smells = canonical_order(i.smell_type for i in instances if i.smell_type != target)
    if persisting:
        return FixVerdict(attempt=attempt,
                          verdict=UNFIXED,
                          reason=SMELL_PERSISTS,
                          residual_metric=max(i.metric_value for i in persisting),
                          new_smells=new_smells)
    return FixVerdict(attempt=attempt, verdict=FIXED, reason=SMELL_ABSENT, new_smells=new_smells)


def verdicts_for(attempts, profile):
    return [verdict(a, profile) for a in sorted(attempts, key=lambda a: a.sequence)]


def read_verdicts(path):
    return [FixVerdict.from_dict(r) for r in read_jsonl(path)]


class FixingRateTable:
    """Fixed and total counts per (smell type, tier) cell.

    Types are ordered by descending total, ties in catalogue order; tiers follow
    the prompt order general, code_smell, specific.
    """

    def __init__(self, smell_types, tiers, fixed, total):
        self.smell_types = tuple(smell_types)
        self.tiers = tuple(tiers)
        self.fixed = np.asarray(fixed, dtype=np.int64).reshape(len(self.smell_types), len(self.tiers))
        self.total = np.asarray(total, dtype=np.int64).reshape(len(self.smell_types), len(self.tiers))
        assert (self.fixed >= 0).all() and (self.fixed <= self.total).all()

    @classmethod
    def from_counts(cls, fixed, total):
        """fixed and total map (smell_type, tier) to counts."""
        keys = set(fixed) | set(total)
        type_totals = {}
        for (smell_type, _), n in total.items():
            smell_type = canonical(smell_type)
            type_totals[smell_type] = type_totals.get(smell_type, 0) + n
        types = sorted({canonical(t) for t, _ in keys},
                       key=lambda t: (-type_totals.get(t, 0), SMELL_ABBREVS.index(t)))
        tiers = [t for t in TIER_NAMES if any(k[1] == t for k in keys)]
        fixed_m = np.zeros((len(types), len(tiers)), dtype=np.int64)
        total_m = np.zeros((len(types), len(tiers)), dtype=np.int64)
        for (smell_type, tier), n in total.items():
            total_m[types.index(canonical(smell_type)), tiers.index(tier)] += n
        for (smell_type, tier), n in fixed.items():
            fixed_m[types.index(canonical(smell_type)), tiers.index(tier)] += n
        return cls(types, tiers, fixed_m, total_m)

    @classmethod
    def from_verdicts(cls, verdicts):
        fixed, total = {}, {}
        for v in verdicts:
            key = (v.smell_type, v.tier)
            total[key] = total.get(key, 0) + 1
            fixed[key] = fixed.get(key, 0) + int(v.fixed)
        return cls.from_counts(fixed, total)

    @property
    def empty(self):
        return not self.smell_types

    def cell(self, smell_type, tier):
        i, j = self.smell_types.index(canonical(smell_type)), self.tiers.index(tier)
        fixed, total = int(self.fixed[i, j]), int(self.total[i, j])
        return fixed, total, percent(fixed, total)

    @property
    def cells(self):
        return {(t, tier): self.cell(t, tier) for t in self.smell_types for tier in self.tiers}

    @property
    def tier_averages(self):
        fixed, total = self.fixed.sum(axis=0), self.total.sum(axis=0)
        return {tier: percent(int(fixed[j]), int(total[j])) for j, tier in enumerate(self.tiers)}

    @property
    def type_averages(self):
        fixed, total = self.fixed.sum(axis=1), self.total.sum(axis=1)
        return {t: percent(int(fixed[i]), int(total[i])) for i, t in enumerate(self.smell_types)}

    @property
    def overall(self):
        return percent(int(self.fixed.sum()), int(self.total.sum()))

    def best_tier(self, smell_type):
        i = self.smell_types.index(canonical(smell_type))
        rates = [self.fixed[i, j] / self.total[i, j] if self.total[i, j] else -1.0
                 for j in range(len(self.tiers))]
        # ties go to the more specific prompt
        return self.tiers[max(range(len(self.tiers)), key=lambda j: (rates[j], j))]

    def tier_ranking(self):
        fixed, total = self.fixed.sum(axis=0), self.total.sum(axis=0)
        rates = np.divide(fixed, total, out=np.zeros(len(self.tiers)), where=total > 0)
        return [self.tiers[j] for j in sorted(range(len(self.tiers)), key=lambda j: (-rates[j], j))]

    def conserved(self, verdicts):
        return int(self.total.sum()) == len(verdicts) and int(self.fixed.sum()) == sum(v.fixed for v in verdicts)


def fixing_rates(verdicts):
    return FixingRateTable.from_verdicts(verdicts)
