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
import sys
from argparse import ArgumentParser

from loguru import logger
from monty.json import MontyDecoder
from monty.serialization import loadfn

from smellfix import factory, __version__
from smellfix.backends import make_backend, write_transcript
from smellfix.detector import CorpusReport, detect_corpus
from smellfix.errors import ConfigError, SmellFixError
from smellfix.evaluator import fixing_rates, verdicts_for
from smellfix.fix_loop import read_attempts, run_fix
from smellfix.general_utils import read_jsonl, sha256_file, to_json, write_jsonl
from smellfix.log_utils import configure_logging
from smellfix.manifest import read_run_manifest, start_run, write_run_manifest
from smellfix.miner import (dedup, export_labelling_session, import_labels, materialize, search,
                            search_summary)
from smellfix.profiles import profile_hash
from smellfix.prompts import parse_tiers
from smellfix.reports import REPORT_FORMATS, emit_report, emit_rows
from smellfix.snippets import build_snippets, filter_token_limit, read_manifest, write_manifest

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2

REPORT_SUFFIXES = dict(json='.json', csv='.csv', text='.txt')


def _write(path, text):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')
    return path


def _write_reports(table, out_dir, stem, formats, manifest_id=None):
    for fmt in formats:
        path = _write(pathlib.Path(out_dir) / (stem + REPORT_SUFFIXES[fmt]),
                      emit_report(table, fmt, manifest_id=manifest_id))
        logger.info('Wrote {}', path)


def _read_corpus_report(path):
    document = loadfn(str(path))
    if isinstance(document, dict):
        document = CorpusReport.from_dict(document)
    return document


def build_config(args):
    overrides = dict(profile=args.profile)
    if args.config:
        config = factory.load_config(args.config, **overrides)
    else:
        config = factory.make_config(**{k: v for k, v in overrides.items() if v is not None})
    if args.cache_dir:
        config['miner']['cache_dir'] = args.cache_dir
    return config


def cmd_mine(args, config):
    client = factory.make_search_client(config)
    out_dir = pathlib.Path(args.out)
    if args.labels:
        candidates_path = args.candidates or out_dir / 'candidates.jsonl'
        known = read_jsonl(candidates_path, decoder=MontyDecoder)
        candidates = import_labels(args.labels, candidates=known)
        origins = materialize(candidates, out_dir / 'corpus', client)
        write_jsonl(out_dir / 'origins.jsonl', [dict(path=p, origin=o) for p, o in sorted(origins.items())])
        return EXIT_OK

    terms = factory.make_terms(config)
    candidates = search(terms, client)
    _write(out_dir / 'search_summary.csv', emit_rows(search_summary(candidates, terms), 'csv'))
    unique = dedup(candidates)
    write_jsonl(out_dir / 'candidates.jsonl', unique)
    export_labelling_session(unique, out_dir / 'labelling.tsv')
    logger.info('{} hits, {} after deduplication', len(candidates), len(unique))
    return EXIT_OK


def detection_id(path):
    """Names a detection report by its content."""
    return 'detection-' + sha256_file(path)[:16]


def _read_origins(path):
    if path is None:
        return None
    if not pathlib.Path(path).exists():
        raise ConfigError('Origins file {} does not exist.'.format(path))
    return {r['path']: r['origin'] for r in read_jsonl(path)}


def cmd_detect(args, config):
    profile = factory.make_profile(config)
    report = detect_corpus(args.paths, profile, max_workers=args.workers, origins=_read_origins(args.origins))
    _write(args.out, to_json(report, indent=2) + '\n')
    logger.info('Wrote {}', args.out)
    return EXIT_PARTIAL if report.parse_failures else EXIT_OK


def cmd_snippets(args, config):
    report = _read_corpus_report(args.report)
    token_limit = args.token_limit if args.token_limit is not None else config['snippets']['token_limit']
    stage = build_snippets(report, token_limit=token_limit)
    write_manifest(args.out, stage.kept, stage.dropped)
    return EXIT_OK


def _load_snippets(path, token_limit, out_dir):
    if str(path).endswith('.json'):
        stage = build_snippets(_read_corpus_report(path), token_limit=token_limit)
        manifest_path = pathlib.Path(out_dir) / 'snippets.jsonl'
        write_manifest(manifest_path, stage.kept, stage.dropped)
        return stage.kept, manifest_path
    kept, _ = read_manifest(path)
    kept, _ = filter_token_limit(kept, token_limit)
    return kept, pathlib.Path(path)


def cmd_fix(args, config):
    if args.backend:
        config['backend']['spec'] = args.backend
    if args.tiers:
        try:
            config['fix']['tiers'] = parse_tiers(args.tiers)
        except ValueError as e:
            raise ConfigError(str(e)) from e
    if args.max_in_flight:
        config['fix']['max_in_flight'] = args.max_in_flight
    if args.token_limit is not None:
        config['snippets']['token_limit'] = config['fix']['token_limit'] = args.token_limit

    pipeline = factory.make_pipeline(config)
    out_dir = pathlib.Path(args.out)
    snippets, manifest_path = _load_snippets(args.manifest, pipeline.token_limit, out_dir)
    backend = make_backend(pipeline.backend_descriptor)

    attempts_path = out_dir / 'attempts.jsonl'
    run = start_run(profile_hash(pipeline.profile), manifest_path, pipeline.backend_descriptor,
                    pipeline.tiers, config_hash=pipeline.config_hash, attempts_store=attempts_path)
    attempts = run_fix(snippets, backend, tiers=pipeline.tiers, store_path=attempts_path,
                       max_in_flight=pipeline.max_in_flight)
    write_run_manifest(run.finish(), out_dir / 'run_manifest.json')
    if args.record_transcript:
        write_transcript(args.record_transcript, attempts)

    failed = sum(1 for a in attempts if a.failed)
    logger.info('{} attempts, {} failed; run {}', len(attempts), failed, run.run_id)
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_report(args, config):
    formats = args.formats.split(',') if args.formats else config['report']['formats']
    invalid = [f for f in formats if f not in REPORT_FORMATS]
    if invalid:
        raise ConfigError('Invalid report format(s): {}.'.format(invalid))
    out_dir = pathlib.Path(args.out)

    if str(args.input).endswith('.json'):
        report = _read_corpus_report(args.input)
        if args.run_manifest:
            manifest_id = read_run_manifest(args.run_manifest).run_id
        else:
            manifest_id = detection_id(args.input)
        _write_reports(report, out_dir, 'distribution', formats, manifest_id=manifest_id)
        return EXIT_OK

    manifest_path = pathlib.Path(args.run_manifest or pathlib.Path(args.input).parent / 'run_manifest.json')
    manifest_id = None
    profile = factory.make_profile(config)
    if manifest_path.exists():
        run = read_run_manifest(manifest_path)
        manifest_id = run.run_id
        if run.profile_hash != profile_hash(profile):
            logger.warning('Run {} was detected with profile {}; verdicts use {}',
                           run.run_id, run.profile_hash, profile_hash(profile))

    attempts = read_attempts(args.input)
    verdicts = verdicts_for(attempts, profile)
    write_jsonl(out_dir / 'verdicts.jsonl', verdicts)
    _write_reports(fixing_rates(verdicts), out_dir, 'fixing_rates', formats, manifest_id=manifest_id)
    return EXIT_PARTIAL if any(a.failed for a in attempts) else EXIT_OK


def make_parser():
    parser = ArgumentParser(prog='smellfix',
                            description='Detect Python code smells and measure LLM fixing rates.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('--profile', type=str, default=None,
                        help='threshold profile slot or file (default: tuning-machine)')
    parser.add_argument('--config', type=str, default=None)
    parser.add_argument('--cache-dir', type=str, default=None)
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('--log-file', type=str, default=None)
    subparsers = parser.add_subparsers(dest='command', required=True)

    mine = subparsers.add_parser('mine', help='search the code host for candidate files')
    mine.add_argument('--out', type=str, required=True)
    mine.add_argument('--labels', type=str, default=None,
                      help='labelled session to materialize instead of searching')
    mine.add_argument('--candidates', type=str, default=None,
                      help='candidate list the session was exported from')
    mine.set_defaults(handler=cmd_mine)

    detect = subparsers.add_parser('detect', help='detect smells in files or directories')
    detect.add_argument('paths', nargs='+')
    detect.add_argument('--out', type=str, required=True)
    detect.add_argument('--workers', type=int, default=1)
    detect.add_argument('--origins', type=str, default=None,
                        help='origins.jsonl written by mine --labels')
    detect.set_defaults(handler=cmd_detect)

    snippets = subparsers.add_parser('snippets', help='build the snippet manifest of a detection report')
    snippets.add_argument('report')
    snippets.add_argument('--out', type=str, required=True)
    snippets.add_argument('--token-limit', type=int, default=None)
    snippets.set_defaults(handler=cmd_snippets)

    fix = subparsers.add_parser('fix', help='ask a backend to fix every snippet under every prompt tier')
    fix.add_argument('manifest', help='snippet manifest (.jsonl) or detection report (.json)')
    fix.add_argument('--out', type=str, required=True)
    fix.add_argument('--backend', type=str, default=None,
                     help='scripted-mock[:action|scenario], replay:transcript.jsonl or http-chat[:endpoint]')
    fix.add_argument('--tiers', type=str, default=None)
    fix.add_argument('--max-in-flight', type=int, default=None)
    fix.add_argument('--token-limit', type=int, default=None)
    fix.add_argument('--record-transcript', type=str, default=None)
    fix.set_defaults(handler=cmd_fix)

    report = subparsers.add_parser('report', help='render fixing rates or the smell distribution')
    report.add_argument('input', help='attempts store (.jsonl) or detection report (.json)')
    report.add_argument('--out', type=str, required=True)
    report.add_argument('--run-manifest', type=str, default=None)
    report.add_argument('--formats', type=str, default=None)
    report.set_defaults(handler=cmd_report)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.log_file)
    try:
        config = build_config(args)
        return args.handler(args, config)
    except ConfigError as e:
        logger.error('Configuration error: {}', e)
        return EXIT_CONFIG
    except (SmellFixError, OSError) as e:
        logger.error('{}: {}', type(e).__name__, e)
        return EXIT_PARTIAL


if __name__ == '__main__':
    sys.exit(main())
