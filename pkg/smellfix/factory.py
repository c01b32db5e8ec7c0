from monty.collections import AttrDict
from monty.serialization import loadfn

from smellfix import backends
from smellfix.errors import ConfigError
from smellfix.general_utils import stable_digest
from smellfix.miner import DEFAULT_TERMS, GITHUB_API, GitHubSearchClient, parse_terms
from smellfix.profiles import TUNING_MACHINE, load_profile
from smellfix.prompts import TIER_NAMES, parse_tiers
from smellfix.snippets import DEFAULT_TOKEN_LIMIT

CONFIG_SECTIONS = ('profile_params', 'snippet_params', 'fix_params', 'backend_params',
                   'miner_params', 'report_params')


def make_config(
        profile=TUNING_MACHINE,
        profile_params=None,
        snippet_params=None,
        fix_params=None,
        backend_params=None,
        miner_params=None,
        report_params=None,
):
    profile_params = profile_params or dict()
    snippet_params = snippet_params or dict()
    fix_params = fix_params or dict()
    backend_params = backend_params or dict()
    miner_params = miner_params or dict()
    report_params = report_params or dict()

    assert 'name_or_path' not in profile_params
    profile_config = dict(
        name_or_path=profile,
        thresholds=dict(),
        inclusive=None,
        count_receiver=None,
        lambdas_in_scope_chain=None,
        length_unit=None,
    )
    profile_config.update(profile_params)

    snippets = dict(
        token_limit=DEFAULT_TOKEN_LIMIT,
    )
    snippets.update(snippet_params)

    assert 'token_limit' not in fix_params
    fix = dict(
        tiers=TIER_NAMES,
        max_in_flight=1,
        token_limit=snippets['token_limit'],
    )
    fix.update(fix_params)
    if isinstance(fix['tiers'], str):
        fix['tiers'] = parse_tiers(fix['tiers'])
    fix['tiers'] = tuple(fix['tiers'])
    assert fix['max_in_flight'] >= 1

    assert 'tiers' not in backend_params
    backend = dict(
        spec=backends.SCRIPTED_MOCK,
        backend_id=None,
        max_retries=3,
        backoff=1.0,
        requests_per_second=None,
        endpoint=None,
        model='gpt-4o-mini',
        api_key_env='OPENAI_API_KEY',
        timeout=60,
    )
    backend.update(backend_params)

    miner = dict(
        terms=[t.phrase for t in DEFAULT_TERMS],
        api_url=GITHUB_API,
        token_env='GITHUB_TOKEN',
        per_page=100,
        max_pages=10,
        max_retries=3,
        backoff=1.0,
        fetch_content=False,
        cache_dir=None,
    )
    miner.update(miner_params)

    report = dict(
        formats=('json', 'csv', 'text'),
    )
    report.update(report_params)

    config = dict(
        profile=profile_config,
        snippets=snippets,
        fix=fix,
        backend=backend,
        miner=miner,
        report=report,
    )
    return config


def load_config(path, **overrides):
    """Reads a JSON/YAML config document whose keys are make_config's arguments."""
    try:
        document = loadfn(str(path))
    except (OSError, ValueError) as e:
        raise ConfigError('Cannot read config "{}": {}'.format(path, e)) from e
    if not isinstance(document, dict):
        raise ConfigError('Config "{}" is not a key-value document.'.format(path))
    unknown = sorted(set(document) - set(CONFIG_SECTIONS) - {'profile'})
    if unknown:
        raise ConfigError('Unknown config sections in "{}": {}'.format(path, unknown))
    document.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return make_config(**document)
    except (AssertionError, ValueError) as e:
        raise ConfigError('Invalid config "{}": {}'.format(path, e)) from e


def config_hash(config):
    return stable_digest(config)


def make_profile(config):
    profile_config = config['profile']
    profile = load_profile(profile_config['name_or_path'])
    if profile_config['thresholds']:
        profile = profile.with_thresholds(**profile_config['thresholds'])
    options = {k: profile_config[k] for k in ('inclusive', 'count_receiver',
                                              'lambdas_in_scope_chain', 'length_unit')
               if profile_config.get(k) is not None}
    if options:
        d = profile.as_dict()
        d.update(options)
        profile = profile.from_dict(d)
    return profile


def make_backend_descriptor(config):
    backend_config = {k: v for k, v in config['backend'].items() if v is not None and k != 'spec'}
    return backends.parse_backend_spec(config['backend']['spec'], backend_config)


def make_backend(config, session=None):
    return backends.make_backend(make_backend_descriptor(config), session=session)


def make_search_client(config, session=None):
    miner = config['miner']
    return GitHubSearchClient(api_url=miner['api_url'],
                              token_env=miner['token_env'],
                              session=session,
                              cache_dir=miner['cache_dir'],
                              per_page=miner['per_page'],
                              max_pages=miner['max_pages'],
                              max_retries=miner['max_retries'],
                              backoff=miner['backoff'],
                              fetch_content=miner['fetch_content'])


def make_terms(config):
    return parse_terms(config['miner']['terms'])


def make_pipeline(config):
    """Everything a run needs, resolved from one config."""
    return AttrDict(profile=make_profile(config),
                    backend_descriptor=make_backend_descriptor(config),
                    tiers=config['fix']['tiers'],
                    token_limit=config['snippets']['token_limit'],
                    max_in_flight=config['fix']['max_in_flight'],
                    config_hash=config_hash(config))
