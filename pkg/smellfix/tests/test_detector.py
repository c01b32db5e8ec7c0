import unittest
from collections import Counter
from decimal import Decimal

from hypothesis import given, settings
from hypothesis import strategies as st

from smellfix import syntax_model as sm
from smellfix.detector import CorpusReport, SmellInstance, detect, detect_corpus
from smellfix.errors import ConfigError
from smellfix.general_utils import format_percent
from smellfix.profiles import (STATISTICS_BASED, TUNING_MACHINE, ThresholdProfile, load_profile,
                               profile_from_mapping, profile_hash)
from smellfix.smells import METRIC_IDS, SMELL_ABBREVS
from .sample_profiles import BROKEN, CORPUS, expected_counts, fixture_profile, fixture_thresholds
from .token_oracle import oracle_instances

published_counts = dict(MNC=41, LPL=22, LM=14, LLF=12, LTCE=5, CCC=4, LMC=2, LC=2)


def detect_file(name, profile=None):
    unit = sm.read_source(str(CORPUS / name))
    return detect(unit, profile or fixture_profile())


class DetectTestCase(unittest.TestCase):
    def test_seeded_files_hold_one_smell_each(self):
        seeded = sorted(p for p in CORPUS.glob('*_01.py') if not p.name.startswith('clean'))
        self.assertEqual(len(seeded), 10)
        found = []
        for path in seeded:
            instances = detect_file(path.name)
            self.assertEqual(len(instances), 1, path.name)
            found.append(instances[0].smell_type)
        self.assertEqual(sorted(found), sorted(SMELL_ABBREVS))

    def test_counts_per_fixture_file(self):
        for name, counts in expected_counts.items():
            found = Counter(i.smell_type for i in detect_file(name))
            self.assertEqual(dict(found), counts, name)

    def test_every_type_appears_in_three_files(self):
        files_per_type = Counter(t for counts in expected_counts.values() for t in counts)
        self.assertEqual(set(files_per_type), set(SMELL_ABBREVS))
        self.assertTrue(all(n >= 3 for n in files_per_type.values()))

    def test_agrees_with_token_oracle(self):
        for path in sorted(CORPUS.glob('*.py')):
            text = path.read_text(encoding='utf-8')
            found = Counter((i.smell_type, i.start_line, i.metric_value) for i in detect_file(path.name))
            self.assertEqual(found, oracle_instances(text, fixture_thresholds), path.name)

    def test_instance_fields(self):
        instance, = detect_file('lpl_01.py')
        self.assertEqual(instance.smell_type, 'LPL')
        self.assertEqual(instance.start_line, 1)
        self.assertEqual(instance.metric_value, 5)
        self.assertEqual(instance.threshold, 4)
        self.assertEqual(instance.entity_kind, sm.FUNCTION)
        self.assertEqual(instance.entity_name, 'connect')
        self.assertEqual(SmellInstance.from_dict(instance.as_dict()), instance)

    def test_regions_inside_methods_are_flagged(self):
        flags = {(i.smell_type, i.start_line): i.class_body for i in detect_file('lsc_02.py')}
        self.assertEqual(flags, {('LSC', 3): False, ('LSC', 13): True})
        self.assertFalse(detect_file('lpl_01.py')[0].class_body)

    def test_inclusive_comparison(self):
        strict = fixture_profile().with_thresholds(PAR=5)
        self.assertEqual(detect_file('lpl_01.py', strict), [])
        inclusive = fixture_profile(inclusive=True).with_thresholds(PAR=5)
        self.assertEqual(len(detect_file('lpl_01.py', inclusive)), 1)

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(sorted(CORPUS.glob('*.py'))), st.sampled_from(METRIC_IDS), st.integers(1, 12))
    def test_raising_a_threshold_never_adds_instances(self, path, metric_id, threshold):
        lower = fixture_profile().with_thresholds(**{metric_id: threshold})
        higher = fixture_profile().with_thresholds(**{metric_id: threshold + 1})
        found = {i.key for i in detect_file(path.name, higher)}
        self.assertTrue(found <= {i.key for i in detect_file(path.name, lower)})

    def test_receiver_option(self):
        counted = fixture_profile(count_receiver=True)
        found = Counter(i.smell_type for i in detect_file('clean_02.py', counted))
        self.assertEqual(found, Counter())
        found = Counter(i.metric_value for i in detect_file('lpl_02.py', counted))
        self.assertEqual(found, Counter({6: 2}))


class CorpusTestCase(unittest.TestCase):
    def test_detect_corpus(self):
        report = detect_corpus([CORPUS], fixture_profile())
        totals = Counter()
        for counts in expected_counts.values():
            totals.update(counts)
        self.assertEqual(report.files_scanned, len(expected_counts))
        self.assertEqual(report.files_smelly, sum(1 for c in expected_counts.values() if c))
        self.assertEqual(report.type_counts, dict(totals))
        self.assertEqual(report.total_instances, sum(totals.values()))
        self.assertEqual(report.profile_hash, profile_hash(fixture_profile()))

    def test_workers_do_not_change_results(self):
        serial = detect_corpus([CORPUS], fixture_profile())
        parallel = detect_corpus([CORPUS], fixture_profile(), max_workers=4)
        self.assertEqual(serial.as_dict(), parallel.as_dict())

    def test_unparseable_files_are_skipped(self):
        paths = [str(CORPUS / 'lpl_01.py'), str(BROKEN / 'bad_syntax.py')]
        report = detect_corpus(paths, fixture_profile())
        self.assertEqual(report.files_scanned, 1)
        self.assertEqual(list(report.parse_failures), [str(BROKEN / 'bad_syntax.py')])
        self.assertEqual(report.parse_failures[str(BROKEN / 'bad_syntax.py')]['line'], 1)

    def test_origin_counts(self):
        paths = [str(CORPUS / 'lpl_02.py'), str(CORPUS / 'mnc_01.py')]
        origins = {paths[0]: 'code', paths[1]: 'repository'}
        report = detect_corpus(paths, fixture_profile(), origins=origins)
        self.assertEqual(report.origin_counts, dict(code=dict(LPL=2), repository=dict(MNC=1)))

    def test_report_survives_serialization(self):
        report = detect_corpus([CORPUS / 'lmc_03.py'], fixture_profile())
        restored = CorpusReport.from_dict(report.as_dict())
        self.assertEqual(restored.instances, report.instances)
        self.assertEqual(restored.type_counts, dict(LMC=3))


class DistributionTestCase(unittest.TestCase):
    def test_published_percentages(self):
        report = CorpusReport.from_counts(published_counts, files_scanned=311, files_smelly=46)
        self.assertEqual(report.total_instances, 102)
        self.assertEqual(report.ordered_types(), ['MNC', 'LPL', 'LM', 'LLF', 'LTCE', 'CCC', 'LC', 'LMC'])
        rendered = [format_percent(p) for p in report.type_percentages().values()]
        self.assertEqual(rendered, ['40.2%', '21.6%', '13.7%', '11.8%', '4.9%', '3.9%', '2.0%', '2.0%'])
        self.assertEqual(report.smelly_ratio(), Decimal('14.8'))

    def test_empty_corpus(self):
        report = CorpusReport.from_counts({}, files_scanned=0, files_smelly=0)
        self.assertEqual(report.type_percentages(), {})
        self.assertIsNone(report.smelly_ratio())
        self.assertEqual(format_percent(report.smelly_ratio()), 'n/a')


class ProfileTestCase(unittest.TestCase):
    def test_shipped_profile(self):
        profile = load_profile(TUNING_MACHINE)
        self.assertEqual(profile.name, TUNING_MACHINE)
        self.assertEqual(len(profile.thresholds), 10)

    def test_empty_slot_is_a_config_error(self):
        with self.assertRaises(ConfigError):
            load_profile(STATISTICS_BASED)

    def test_missing_threshold_is_rejected(self):
        thresholds = dict(fixture_thresholds)
        del thresholds['CNC']
        with self.assertRaises(ConfigError):
            ThresholdProfile(name='partial', thresholds=thresholds)

    def test_hash_tracks_values(self):
        self.assertEqual(profile_hash(fixture_profile()), profile_hash(fixture_profile()))
        self.assertNotEqual(profile_hash(fixture_profile()),
                            profile_hash(fixture_profile().with_thresholds(CNC=3)))

    def test_flat_mapping(self):
        profile = profile_from_mapping(dict(fixture_thresholds, inclusive=True), name='flat')
        self.assertTrue(profile.inclusive)
        self.assertEqual(profile.thresholds, fixture_profile().thresholds)


if __name__ == '__main__':
    unittest.main()
