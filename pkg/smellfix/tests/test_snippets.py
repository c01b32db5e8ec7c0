import pathlib
import tempfile
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from smellfix import syntax_model as sm
from smellfix.detector import detect, detect_corpus
from smellfix.errors import SpanOutOfFile
from smellfix.snippets import (build_snippet, build_snippets, consolidate, filter_token_limit,
                               read_manifest, snippet_lines, statement_region, summarize, target_smells,
                               write_manifest)
from .sample_profiles import CORPUS, REGIONS, expected_regions, fixture_profile
from .sample_snippets import make_instance, make_snippet


def published_chain():
    """102 instances: 88 alone, 6 same-type pairs and one two-type pair."""
    instances, snippets = [], []
    for i in range(88):
        inst = make_instance('single_{:02d}.py'.format(i))
        text = 'x' * 5000 + '\n' if i < 3 else 'x = [[[1]]]\n'
        instances.append(inst)
        snippets.append(make_snippet(inst, text=text))
    for i in range(6):
        file = 'pair_{}.py'.format(i)
        for col in (0, 20):
            inst = make_instance(file, col=col)
            instances.append(inst)
            snippets.append(make_snippet(inst, line_range=(1, 1)))
    for smell_type in ('LPL', 'LM'):
        inst = make_instance('mixed.py', smell_type=smell_type, end_line=12, kind=sm.FUNCTION)
        instances.append(inst)
        snippets.append(make_snippet(inst, text='def f():\n    pass\n', line_range=(1, 12)))
    return instances, snippets


class ConsolidateTestCase(unittest.TestCase):
    def test_shared_regions_collapse(self):
        snippets = [make_snippet(make_instance('s{}.py'.format(i))) for i in range(90)]
        for i in range(6):
            snippets += [make_snippet(make_instance('p{}.py'.format(i), col=col), line_range=(1, 1))
                         for col in (0, 20)]
        self.assertEqual(len(snippets), 102)
        self.assertEqual(len(consolidate(snippets)), 96)

    def test_published_chain(self):
        instances, snippets = published_chain()
        merged = consolidate(snippets)
        kept, dropped = filter_token_limit(merged, 1000)
        summary = summarize(instances, merged, kept)
        self.assertEqual((summary.instances, summary.snippets, summary.targets), (102, 95, 96))
        self.assertEqual((summary.kept_snippets, summary.kept_targets), (92, 93))
        self.assertEqual(len(dropped), 3)
        self.assertTrue(all('limit 1000' in d.reason for d in dropped))

    def test_two_types_give_two_targets(self):
        _, snippets = published_chain()
        mixed, = [s for s in consolidate(snippets) if s.file == 'mixed.py']
        self.assertEqual(mixed.smell_types, ['LPL', 'LM'])
        self.assertEqual([t.smell_type for t in target_smells(mixed)], ['LPL', 'LM'])

    def test_duplicates_are_merged_once(self):
        inst = make_instance('dup.py')
        merged = consolidate([make_snippet(inst), make_snippet(inst)])
        self.assertEqual(len(merged), 1)
        self.assertEqual(len(merged[0].instances), 1)

    @settings(max_examples=30, deadline=None)
    @given(st.data())
    def test_consolidation_is_idempotent(self, data):
        _, snippets = published_chain()
        drawn = data.draw(st.lists(st.sampled_from(snippets), max_size=30))
        once = consolidate(drawn)
        twice = consolidate(once)
        self.assertEqual([(s.snippet_id, s.instances) for s in twice], [(s.snippet_id, s.instances) for s in once])
        self.assertEqual({i.key for s in once for i in s.instances}, {i.key for s in drawn for i in s.instances})

    def test_limit_is_inclusive(self):
        text = 'x' * 100
        snippet = make_snippet(make_instance('edge.py'), text=text)
        self.assertEqual(snippet.est_tokens, 25)
        kept, dropped = filter_token_limit([snippet], 25)
        self.assertEqual((len(kept), len(dropped)), (1, 0))
        kept, dropped = filter_token_limit([snippet], None)
        self.assertEqual(len(kept), 1)


class SnippetRegionTestCase(unittest.TestCase):
    def regions(self, name):
        unit = sm.read_source(str(CORPUS / name))
        return {(i.smell_type, snippet_lines(i, unit)) for i in detect(unit, fixture_profile())}

    def test_expression_smells_widen_to_the_statement(self):
        self.assertEqual(self.regions('llf_02.py'), {('LLF', (2, 2)), ('LLF', (7, 10))})
        self.assertEqual(self.regions('mnc_02.py'), {('MNC', (1, 6)), ('MNC', (10, 10))})

    def test_scope_chains_keep_the_whole_nest(self):
        self.assertEqual(self.regions('lsc_03.py'), {('LSC', (1, 8))})
        self.assertEqual(self.regions('lsc_02.py'), {('LSC', (1, 7)), ('LSC', (11, 16))})

    def test_definitions_keep_their_decorators(self):
        self.assertEqual(self.regions('lc_02.py'), {('LC', (1, 16)), ('LC', (23, 38))})

    def test_headers_widen_until_the_region_parses(self):
        for name, (smell_type, lines) in expected_regions.items():
            unit = sm.read_source(str(REGIONS / name))
            instance, = detect(unit, fixture_profile())
            self.assertEqual((instance.smell_type, snippet_lines(instance, unit)), (smell_type, lines), name)
            text = build_snippet(instance, unit).text
            found = detect(sm.parse_fragment(text), fixture_profile(), class_body=instance.class_body)
            self.assertEqual([i.smell_type for i in found], [smell_type], name)

    def test_statement_region_of_an_elif(self):
        unit = sm.read_source(str(REGIONS / 'elif_chain.py'))
        chain = next(e for e in sm.enumerate_entities(unit) if e.kind == sm.ATTRIBUTE_CHAIN and e.start_line == 4)
        self.assertEqual(statement_region(unit, chain.node), (2, 5))

    def test_span_outside_the_file(self):
        unit = sm.read_source(str(CORPUS / 'lpl_01.py'))
        with self.assertRaises(SpanOutOfFile):
            snippet_lines(make_instance(unit.path, line=3), unit)

    def test_snippet_text_and_id(self):
        unit = sm.read_source(str(CORPUS / 'lmc_01.py'))
        instance, = detect(unit, fixture_profile())
        snippet = build_snippet(instance, unit)
        self.assertEqual(snippet.snippet_id, '{}#L5-L5'.format(unit.path))
        self.assertEqual(snippet.text, "    return os.path.join(app.settings.paths.root.name, 'config.ini')\n")


class BuildSnippetsTestCase(unittest.TestCase):
    def test_corpus_stage(self):
        report = detect_corpus([CORPUS], fixture_profile())
        stage = build_snippets(report)
        self.assertEqual(stage.summary.instances, report.total_instances)
        self.assertEqual(stage.summary.kept_snippets, len(stage.snippets))
        self.assertEqual(stage.dropped, [])
        # two MNC literals in one assignment and two scope chains in one nest share a snippet
        self.assertEqual(stage.summary.snippets, report.total_instances - 2)
        for snippet in stage.kept:
            sm.parse_fragment(snippet.text)

    def test_manifest_round_trip(self):
        report = detect_corpus([CORPUS / 'mnc_02.py', CORPUS / 'ltce_02.py'], fixture_profile())
        stage = build_snippets(report, token_limit=20)
        with tempfile.TemporaryDirectory() as tmp:
            path = pathlib.Path(tmp) / 'snippets.jsonl'
            write_manifest(path, stage.kept, stage.dropped)
            kept, dropped = read_manifest(path)
        self.assertEqual([s.snippet_id for s in kept], [s.snippet_id for s in stage.kept])
        self.assertEqual([d.snippet.snippet_id for d in dropped], [d.snippet.snippet_id for d in stage.dropped])
        self.assertEqual(kept[0].instances, stage.kept[0].instances)


if __name__ == '__main__':
    unittest.main()
