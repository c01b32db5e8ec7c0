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

import pathlib
from dataclasses import dataclass
from typing import Dict

from monty.json import MSONable
from monty.serialization import loadfn

from smellfix.errors import ConfigError
from smellfix.general_utils import stable_digest
from smellfix.metrics import LENGTH_UNITS
from smellfix.smells import METRIC_IDS, METRIC_TO_SMELL

TUNING_MACHINE = 'tuning-machine'
EXPERIENCE_BASED = 'experience-based'
STATISTICS_BASED = 'statistics-based'
PROFILE_SLOTS = (TUNING_MACHINE, EXPERIENCE_BASED, STATISTICS_BASED)

DATA_DIR = pathlib.Path(__file__).parent / 'data'


@dataclass
class ThresholdProfile(MSONable):
    """Named thresholds, one per metric.

    An entity is smelly when its metric strictly exceeds the threshold
    (``inclusive=True`` switches to >=).
    """
    name: str
    thresholds: Dict[str, int]
    provenance: str = ''
    inclusive: bool = False
    count_receiver: bool = False
    lambdas_in_scope_chain: bool = True
    length_unit: str = 'chars'

    def __post_init__(self):
        self.thresholds = {str(k).upper(): int(v) for k, v in self.thresholds.items()}
        missing = [m for m in METRIC_IDS if m not in self.thresholds]
        if missing:
            raise ConfigError('Profile "{}" is missing thresholds for {}.'.format(self.name, missing))
        unknown = sorted(set(self.thresholds) - set(METRIC_IDS))
        if unknown:
            raise ConfigError('Profile "{}" has unknown metrics {}.'.format(self.name, unknown))
        low = [m for m, v in self.thresholds.items() if v < 1]
        if low:
            raise ConfigError('Profile "{}": thresholds must be >= 1, got {}.'.format(self.name, low))
        if self.length_unit not in LENGTH_UNITS:
            raise ConfigError('Invalid length_unit: "{}".'.format(self.length_unit))
        self.thresholds = {m: self.thresholds[m] for m in METRIC_IDS}

    def as_dict(self):
        d = super().as_dict()
        d['thresholds'] = dict(self.thresholds)
        return d

    @classmethod
    def from_dict(cls, d):
        d = {k: v for k, v in d.items() if not k.startswith('@')}
        return cls(**d)

    @property
    def metric_options(self):
        return dict(count_receiver=self.count_receiver,
                    lambdas_in_scope_chain=self.lambdas_in_scope_chain,
                    length_unit=self.length_unit)

    def threshold_for(self, smell_type):
        metric_id = next(m for m, s in METRIC_TO_SMELL.items() if s == smell_type)
        return self.thresholds[metric_id]

    def exceeds(self, value, threshold):
        return value >= threshold if self.inclusive else value > threshold

    def with_thresholds(self, **overrides):
        thresholds = dict(self.thresholds)
        thresholds.update({k.upper(): v for k, v in overrides.items()})
        d = self.as_dict()
        d['thresholds'] = thresholds
        return ThresholdProfile.from_dict(d)

    @property
    def digest(self):
        return profile_hash(self)


def profile_hash(profile):
    d = profile.as_dict()
    d.pop('@version', None)
    return stable_digest(d)


def profile_from_mapping(mapping, name=None, provenance=None):
    mapping = dict(mapping)
    thresholds = mapping.pop('thresholds', None)
    if thresholds is None:
        thresholds = {k: mapping.pop(k) for k in list(mapping) if k.upper() in METRIC_IDS}
    mapping = {k: v for k, v in mapping.items() if not k.startswith('@')}
    mapping.setdefault('name', name or 'custom')
    if provenance is not None:
        mapping['provenance'] = provenance
    try:
        return ThresholdProfile(thresholds=thresholds, **mapping)
    except TypeError as e:
        raise ConfigError('Invalid profile document: {}'.format(e)) from e


def load_profile(name_or_path):
    """Loads a profile by slot name or from a JSON/YAML document."""
    if isinstance(name_or_path, ThresholdProfile):
        return name_or_path

    path = pathlib.Path(str(name_or_path))
    if str(name_or_path) in PROFILE_SLOTS:
        path = DATA_DIR / '{}.yaml'.format(name_or_path)
        if not path.exists():
            raise ConfigError('Profile slot "{}" ships no values; supply a profile file.'.format(name_or_path))
    if not path.exists():
        raise ConfigError('Profile file not found: "{}".'.format(name_or_path))

    try:
        document = loadfn(str(path))
    except Exception as e:
        raise ConfigError('Cannot read profile "{}": {}'.format(path, e)) from e
    if isinstance(document, ThresholdProfile):
        return document
    if not isinstance(document, dict):
        raise ConfigError('Profile "{}" is not a key-value document.'.format(path))
    return profile_from_mapping(document, name=path.stem)
