import pathlib
import sys
from argparse import ArgumentParser

from loguru import logger
from monty.collections import AttrDict

from smellfix import backends
from smellfix.detector import CorpusReport, detect_corpus
from smellfix.evaluator import fixing_rates, verdicts_for
from smellfix.factory import make_config, make_pipeline
from smellfix.fix_loop import attempt_requests, run_fix
from smellfix.log_utils import configure_logging
from smellfix.reports import emit_report
from smellfix.snippets import build_snippets
from smellfix_experiments.copilot_chat import fixing_rate_scenario


def reproduce_published(run_params, distribution, out_dir=None):
    """Renders the published distribution and replays the fixing-rate counts."""
    config = make_config(**run_params)
    pipeline = make_pipeline(config)

    report = CorpusReport.from_counts(**distribution)

    snippets = fixing_rate_scenario.published_snippets(pipeline.profile)
    requests_ = attempt_requests(snippets, pipeline.tiers)
    scenario = backends.scenario_from_counts(requests_, fixing_rate_scenario.fixed_counts())
    descriptor = backends.BackendDescriptor(backend_id='published-scenario',
                                            kind=backends.SCRIPTED_MOCK,
                                            config=dict(scenario=scenario))
    store_path = pathlib.Path(out_dir) / 'attempts.jsonl' if out_dir else None
    attempts = run_fix(snippets, backends.make_backend(descriptor), tiers=pipeline.tiers,
                       store_path=store_path)
    table = fixing_rates(verdicts_for(attempts, pipeline.profile))
    return AttrDict(distribution=report, fixing_rates=table, attempts=attempts)


def run_corpus(run_params, paths, out_dir=None):
    """Full pipeline over a local corpus with the configured backend."""
    config = make_config(**run_params)
    pipeline = make_pipeline(config)
    report = detect_corpus(paths, pipeline.profile)
    stage = build_snippets(report, token_limit=pipeline.token_limit)
    store_path = pathlib.Path(out_dir) / 'attempts.jsonl' if out_dir else None
    attempts = run_fix(stage.kept, backends.make_backend(pipeline.backend_descriptor),
                       tiers=pipeline.tiers, store_path=store_path,
                       max_in_flight=pipeline.max_in_flight)
    table = fixing_rates(verdicts_for(attempts, pipeline.profile))
    return AttrDict(distribution=report, snippets=stage, fixing_rates=table, attempts=attempts)


def parse_args(argv=None):
    argv = argv or []

    parser = ArgumentParser()
    parser.add_argument('paths', nargs='*', help='corpus files or directories; none replays the published counts')
    parser.add_argument('--out_dir', type=str, default=None)
    parser.add_argument('--format', type=str, default='text')
    parser.add_argument('--backend', type=str, default=None)
    parser.add_argument('-v', '--verbose', action='count', default=0)

    args = parser.parse_args(argv)

    return args


def main(run_params, distribution, argv=None):
    args = parse_args(argv)
    configure_logging(args.verbose)
    if args.backend:
        run_params = dict(run_params, backend_params=dict(run_params['backend_params'], spec=args.backend))

    if args.paths:
        result = run_corpus(run_params, args.paths, out_dir=args.out_dir)
    else:
        result = reproduce_published(run_params, distribution, out_dir=args.out_dir)

    for table in (result.distribution, result.fixing_rates):
        sys.stdout.write(emit_report(table, args.format))
        sys.stdout.write('\n')
    logger.info('{} attempts', len(result.attempts))
    return result


if __name__ == '__main__':
    from smellfix_experiments.copilot_chat.hparams import published_distribution, run_params

    main(run_params, published_distribution, sys.argv[1:])
