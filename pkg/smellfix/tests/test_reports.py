import json
import unittest

from smellfix.detector import CorpusReport
from smellfix.evaluator import FixingRateTable
from smellfix.prompts import TIER_NAMES
from smellfix.reports import emit_report, emit_rows
from smellfix_experiments.copilot_chat import fixing_rate_scenario
from .sample_profiles import GOLDEN

published_counts = dict(MNC=41, LPL=22, LM=14, LLF=12, LTCE=5, CCC=4, LMC=2, LC=2)


def golden(name):
    return (GOLDEN / name).read_text(encoding='utf-8')


def published_distribution():
    return CorpusReport.from_counts(published_counts, files_scanned=311, files_smelly=46)


def published_rates():
    total = {(t, tier): n for t, n in fixing_rate_scenario.TARGET_TOTALS.items() for tier in TIER_NAMES}
    return FixingRateTable.from_counts(fixing_rate_scenario.fixed_counts(), total)


class DistributionReportTestCase(unittest.TestCase):
    def test_csv(self):
        self.assertEqual(emit_report(published_distribution(), 'csv'), golden('published_distribution.csv'))

    def test_text(self):
        text = emit_report(published_distribution(), 'text', manifest_id='abc123')
        lines = text.splitlines()
        self.assertEqual(lines[0].split(), ['Type', 'Name', 'Count', 'Percent'])
        self.assertTrue(set(lines[1]) <= {'-', ' '})
        self.assertEqual(lines[2].split(), ['MNC', 'Multiply-Nested', 'Container', '41', '40.2%'])
        self.assertEqual(lines[-2], 'Smelly files: 46/311 (14.8%)')
        self.assertEqual(lines[-1], 'Run manifest: abc123')

    def test_json(self):
        document = json.loads(emit_report(published_distribution(), 'json', manifest_id='abc123'))
        self.assertEqual(document['kind'], 'smell-distribution')
        self.assertEqual(document['run_manifest'], 'abc123')
        self.assertEqual(document['smelly_ratio'], '14.8')
        self.assertEqual(document['rows'][1], dict(smell_type='LPL', name='Long Parameter List',
                                                   count=22, percent='21.6'))

    def test_empty_corpus(self):
        report = CorpusReport.from_counts({}, files_scanned=0, files_smelly=0)
        self.assertEqual(emit_report(report, 'csv'), 'Type,Name,Count,Percent\nTotal,,0,n/a\n')
        self.assertIn('Smelly files: 0/0 (n/a)', emit_report(report, 'text'))


class FixingRateReportTestCase(unittest.TestCase):
    def test_csv(self):
        self.assertEqual(emit_report(published_rates(), 'csv'), golden('published_fixing_rates.csv'))

    def test_json(self):
        document = json.loads(emit_report(published_rates(), 'json'))
        self.assertEqual(document['kind'], 'fixing-rates')
        self.assertEqual(document['tier_averages'], dict(general='34.4', code_smell='64.5', specific='87.1'))
        self.assertEqual(document['overall'], '62.0')
        self.assertEqual(document['tier_ranking'], ['specific', 'code_smell', 'general'])
        self.assertEqual(len(document['cells']), 8 * 3)
        self.assertEqual(document['cells'][0], dict(smell_type='MNC', tier='general', fixed=7, total=36,
                                                    rate='19.4'))

    def test_text_has_a_row_per_tier(self):
        lines = emit_report(published_rates(), 'text').splitlines()
        self.assertEqual(len(lines), 2 + 3 + 1)
        self.assertTrue(lines[2].startswith('General Fix Prompt'))
        self.assertTrue(lines[2].endswith('34.4%'))

    def test_invalid_format(self):
        with self.assertRaises(ValueError):
            emit_report(published_rates(), 'xml')
        with self.assertRaises(TypeError):
            emit_report(dict(), 'csv')


class EmitRowsTestCase(unittest.TestCase):
    def test_rows(self):
        rows = [('#', 'Term'), ('ST1', 'x')]
        self.assertEqual(emit_rows(rows, 'csv'), '#,Term\nST1,x\n')
        self.assertEqual(emit_rows(rows, 'text'), '#    Term\n---  ----\nST1     x\n')
        with self.assertRaises(ValueError):
            emit_rows(rows, 'json')


if __name__ == '__main__':
    unittest.main()
