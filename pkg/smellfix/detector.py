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
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from loguru import logger
from monty.json import MontyDecoder, MSONable

from smellfix import syntax_model as sm
from smellfix.errors import ParseError
from smellfix.general_utils import iter_python_files, percent
from smellfix.metrics import metric_vectors
from smellfix.profiles import profile_hash
from smellfix.smells import METRIC_TO_SMELL, SMELL_ABBREVS


@dataclass
class SmellInstance(MSONable):
    smell_type: str
    file: str
    start_line: int
    span: Tuple[int, int, int, int]
    metric_value: int
    threshold: int
    entity_kind: str
    entity_name: Optional[str] = None
    # the snippet region around this instance is a method lifted out of its class
    class_body: bool = False

    def __post_init__(self):
        self.span = tuple(self.span)

    @property
    def end_line(self):
        return self.span[2]

    @property
    def key(self):
        return self.file, self.smell_type, self.span

    def sort_key(self):
        return self.start_line, self.smell_type, self.span


def _region_owner(entity, metric_id):
    if metric_id == 'DOC_CHAIN':
        return entity.outermost_scope()
    return entity


def detect_entities(unit, entities, profile):
    instances = []
    for entity in entities:
        for vector in metric_vectors(entity, unit, **profile.metric_options):
            threshold = profile.thresholds[vector.metric_id]
            if not profile.exceeds(vector.value, threshold):
                continue
            instances.append(SmellInstance(smell_type=METRIC_TO_SMELL[vector.metric_id],
                                           file=unit.path,
                                           start_line=entity.start_line,
                                           span=entity.span,
                                           metric_value=vector.value,
                                           threshold=threshold,
                                           entity_kind=entity.kind,
                                           entity_name=entity.name,
                                           class_body=_region_owner(entity, vector.metric_id).is_method))
    return sorted(instances, key=SmellInstance.sort_key)


def detect(unit, profile, class_body=False):
    return detect_entities(unit, sm.enumerate_entities(unit, class_body=class_body), profile)


@dataclass
class CorpusReport(MSONable):
    """Detection results over a set of files plus the aggregates of the
    smell-distribution table."""
    profile_name: str
    profile_hash: str
    files_scanned: int
    files_smelly: int
    type_counts: Dict[str, int]
    files: Dict[str, List[SmellInstance]] = field(default_factory=dict)
    parse_failures: Dict[str, dict] = field(default_factory=dict)
    origin_counts: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def __post_init__(self):
        decoder = MontyDecoder()
        self.files = {path: [decoder.process_decoded(i) if isinstance(i, dict) else i for i in insts]
                      for path, insts in sorted(self.files.items())}
        self.type_counts = {t: int(self.type_counts[t]) for t in SMELL_ABBREVS if self.type_counts.get(t)}

    @classmethod
    def from_counts(cls, type_counts, files_scanned, files_smelly, profile_name='published',
                    profile_hash=''):
        return cls(profile_name=profile_name,
                   profile_hash=profile_hash,
                   files_scanned=files_scanned,
                   files_smelly=files_smelly,
                   type_counts=dict(type_counts))

    @property
    def total_instances(self):
        return sum(self.type_counts.values())

    @property
    def instances(self):
        return [i for path in sorted(self.files) for i in self.files[path]]

    def ordered_types(self):
        """Types by descending count, ties in catalogue order."""
        return sorted(self.type_counts, key=lambda t: (-self.type_counts[t], SMELL_ABBREVS.index(t)))

    def type_percentages(self):
        total = self.total_instances
        return {t: percent(self.type_counts[t], total) for t in self.ordered_types()}

    def smelly_ratio(self):
        return percent(self.files_smelly, self.files_scanned)


def _detect_file(path, profile):
    try:
        unit = sm.read_source(path)
    except ParseError as e:
        return path, None, e
    except OSError as e:
        return path, None, ParseError(0, 0, str(e), path=path)
    return path, detect(unit, profile), None


def detect_corpus(paths, profile, max_workers=1, origins=None):
    paths = iter_python_files(paths)
    origins = {str(pathlib.Path(p).resolve()): o for p, o in (origins or {}).items()}
    logger.info('Scanning {} files with profile "{}"', len(paths), profile.name)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            results = list(executor.map(lambda p: _detect_file(p, profile), paths))
    else:
        results = [_detect_file(p, profile) for p in paths]

    files = {}
    failures = {}
    type_counts = Counter()
    origin_counts = {}
    for path, instances, error in results:
        if error is not None:
            logger.warning('Skipping {}: {}', path, error)
            failures[path] = error.as_dict()
            continue
        files[path] = instances
        type_counts.update(i.smell_type for i in instances)
        origin = origins.get(str(pathlib.Path(path).resolve()))
        if origin is not None:
            per_origin = origin_counts.setdefault(origin, {})
            for instance in instances:
                per_origin[instance.smell_type] = per_origin.get(instance.smell_type, 0) + 1

    report = CorpusReport(profile_name=profile.name,
                          profile_hash=profile_hash(profile),
                          files_scanned=len(files),
                          files_smelly=sum(1 for insts in files.values() if insts),
                          type_counts=dict(type_counts),
                          files=files,
                          parse_failures=failures,
                          origin_counts=origin_counts)
    logger.info('{} instances in {} of {} files', report.total_instances,
                report.files_smelly, report.files_scanned)
    return report
