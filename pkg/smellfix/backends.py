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

import os
import threading
import time
from dataclasses import dataclass, field
from typing import Dict

import requests
from loguru import logger
from monty.json import MSONable
from monty.serialization import loadfn

from smellfix.errors import (AuthError, BackendUnavailable, ConfigError, RateLimited,
                             ReplayMiss, TransportError)
from smellfix.general_utils import read_jsonl, retry_after_seconds, stable_digest, write_jsonl
from smellfix.prompts import chat_message

HTTP_CHAT = 'http-chat'
REPLAY = 'replay'
SCRIPTED_MOCK = 'scripted-mock'
BACKEND_KINDS = (HTTP_CHAT, REPLAY, SCRIPTED_MOCK)

MOCK_ACTIONS = ('echo', 'fix', 'prose', 'broken')

FIXED_CODE = '''def refactored():
    return None
'''


@dataclass
class BackendDescriptor(MSONable):
    backend_id: str
    kind: str
    config: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in BACKEND_KINDS:
            raise ConfigError('Invalid backend kind: "{}". Choose from {}.'.format(self.kind, BACKEND_KINDS))

    @property
    def deterministic(self):
        return self.kind in (REPLAY, SCRIPTED_MOCK)

    @property
    def config_hash(self):
        return stable_digest(dict(kind=self.kind, config=self.config))


class TokenBucket:
    """Blocking token bucket shared by every thread using one backend."""

    def __init__(self, rate, capacity=None, clock=time.monotonic, sleep=time.sleep):
        assert rate > 0, 'rate must be positive'
        self.rate = float(rate)
        self.capacity = float(capacity or max(1.0, rate))
        self._tokens = self.capacity
        self._clock = clock
        self._sleep = sleep
        self._updated = clock()
        self._lock = threading.Lock()

    def _refill(self):
        now = self._clock()
        self._tokens = min(self.capacity, self._tokens + (now - self._updated) * self.rate)
        self._updated = now

    def acquire(self):
        with self._lock:
            self._refill()
            while self._tokens < 1:
                self._sleep((1 - self._tokens) / self.rate)
                self._refill()
            self._tokens -= 1


class Backend:
    def __init__(self, descriptor):
        self.descriptor = descriptor
        rate = descriptor.config.get('requests_per_second')
        self.bucket = TokenBucket(rate, descriptor.config.get('burst')) if rate else None

    @property
    def backend_id(self):
        return self.descriptor.backend_id

    def complete(self, request, prompt_text):
        """Returns the raw response for one attempt request."""
        raise NotImplementedError

    def __call__(self, request, prompt_text):
        if self.bucket is not None:
            self.bucket.acquire()
        return self.complete(request, prompt_text)


def fenced(code, prose='Here is the refactored code:'):
    if not code.endswith('\n'):
        code += '\n'
    return '{}\n\n```python\n{}```\n'.format(prose, code)


class ScriptedMockBackend(Backend):
    """Deterministic stand-in driven by a scenario.

    The scenario maps (snippet_id, tier, smell_type) to an action:
    echo returns the snippet unchanged, fix returns smell-free code, prose
    returns no code at all and broken returns code that does not parse.
    """

    def __init__(self, descriptor):
        super().__init__(descriptor)
        config = descriptor.config
        scenario = config.get('scenario')
        if scenario is None and config.get('scenario_path'):
            scenario = loadfn(str(config['scenario_path']))
        scenario = scenario or {}
        self.default_action = scenario.get('default', config.get('default_action', 'echo'))
        self.actions = {}
        for entry in scenario.get('actions', []):
            key = (entry['snippet_id'], entry['tier'], entry.get('smell_type'))
            self.actions[key] = entry['action']
        for action in [self.default_action, *self.actions.values()]:
            if action not in MOCK_ACTIONS:
                raise ConfigError('Invalid mock action: "{}".'.format(action))

    def action_for(self, request):
        snippet_id = request.snippet.snippet_id
        for key in ((snippet_id, request.tier, request.target_smell.smell_type),
                    (snippet_id, request.tier, None)):
            if key in self.actions:
                return self.actions[key]
        return self.default_action

    def complete(self, request, prompt_text):
        action = self.action_for(request)
        if action == 'echo':
            return fenced(request.snippet.text)
        if action == 'fix':
            return fenced(FIXED_CODE, prose='The smell is resolved by extracting a helper:')
        if action == 'prose':
            return 'The selected code already looks fine to me.'
        return fenced('def refactored(:\n    return\n')


def scenario_from_counts(requests_, counts, default='echo'):
    """Scenario fixing, per (smell_type, tier), the first n requests in order.

    counts maps (smell_type, tier) -> number of fixed attempts.
    """
    remaining = dict(counts)
    actions = []
    for request in requests_:
        key = (request.target_smell.smell_type, request.tier)
        if remaining.get(key, 0) > 0:
            remaining[key] -= 1
            actions.append(dict(snippet_id=request.snippet.snippet_id,
                                tier=request.tier,
                                smell_type=request.target_smell.smell_type,
                                action='fix'))
    short = {k: v for k, v in remaining.items() if v > 0}
    assert not short, 'scenario asks for more fixes than requests: {}'.format(short)
    return dict(default=default, actions=actions)


class ReplayBackend(Backend):
    """Serves recorded responses keyed by (snippet_id, tier[, smell_type])."""

    def __init__(self, descriptor, records=None):
        super().__init__(descriptor)
        if records is None:
            path = descriptor.config.get('transcript')
            if not path:
                raise ConfigError('Replay backend needs a "transcript" path.')
            records = read_jsonl(path)
        self.responses = {}
        for record in records:
            key = (record['snippet_id'], record['tier'], record.get('smell_type'))
            self.responses[key] = record['response']

    def complete(self, request, prompt_text):
        snippet_id = request.snippet.snippet_id
        for key in ((snippet_id, request.tier, request.target_smell.smell_type),
                    (snippet_id, request.tier, None)):
            if key in self.responses:
                return self.responses[key]
        raise ReplayMiss('No recorded response for ({}, {}).'.format(snippet_id, request.tier))


def write_transcript(path, attempts):
    records = [dict(snippet_id=a.snippet_id,
                    tier=a.tier,
                    smell_type=a.target_smell.smell_type,
                    response=a.raw_response)
               for a in attempts if a.error is None]
    write_jsonl(path, records)


class HttpChatBackend(Backend):
    """Chat-completion endpoint speaking the OpenAI wire format."""

    def __init__(self, descriptor, session=None):
        super().__init__(descriptor)
        config = descriptor.config
        self.endpoint = config.get('endpoint')
        if not self.endpoint:
            raise ConfigError('http-chat backend needs an "endpoint".')
        self.model = config.get('model', 'gpt-4o-mini')
        self.api_key_env = config.get('api_key_env', 'OPENAI_API_KEY')
        self.timeout = float(config.get('timeout', 60))
        self.temperature = config.get('temperature', 0)
        self.session = session or requests.Session()

    def headers(self):
        headers = {'Content-Type': 'application/json'}
        token = os.environ.get(self.api_key_env, '').strip()
        if token:
            headers['Authorization'] = 'Bearer {}'.format(token)
        return headers

    def complete(self, request, prompt_text):
        payload = dict(model=self.model,
                       temperature=self.temperature,
                       messages=[dict(role='user',
                                      content=chat_message(prompt_text, request.snippet.text))])
        try:
            response = self.session.post(self.endpoint, json=payload, headers=self.headers(),
                                         timeout=self.timeout)
        except (requests.ConnectionError, requests.Timeout) as e:
            raise TransportError('{}: {}'.format(self.endpoint, e)) from e
        except requests.RequestException as e:
            raise BackendUnavailable('{}: {}'.format(self.endpoint, e)) from e

        if response.status_code in (401, 403):
            raise AuthError('{} rejected the credentials in ${}.'.format(self.endpoint, self.api_key_env))
        if response.status_code == 429:
            raise RateLimited('{} is rate limiting'.format(self.endpoint),
                              retry_after=retry_after_seconds(response.headers.get('Retry-After')))
        if response.status_code >= 500:
            raise TransportError('{} answered {}'.format(self.endpoint, response.status_code))
        if response.status_code >= 400:
            raise BackendUnavailable('{} answered {}: {}'.format(
                self.endpoint, response.status_code, response.text[:200]))

        try:
            return response.json()['choices'][0]['message']['content'] or ''
        except (ValueError, KeyError, IndexError) as e:
            raise BackendUnavailable('Malformed chat response from {}: {}'.format(self.endpoint, e)) from e


def parse_backend_spec(spec, backend_config=None):
    """Builds a descriptor from a CLI shorthand.

    Accepted forms: ``scripted-mock[:scenario.yaml]``, ``replay:transcript.jsonl``,
    ``http-chat[:endpoint]``; extra keys come from backend_config.
    """
    config = dict(backend_config or {})
    kind, _, argument = spec.partition(':')
    if kind == SCRIPTED_MOCK and argument:
        if argument in MOCK_ACTIONS:
            config['default_action'] = argument
        else:
            config['scenario_path'] = argument
    elif kind == REPLAY and argument:
        config['transcript'] = argument
    elif kind == HTTP_CHAT and argument:
        config['endpoint'] = argument
    backend_id = config.pop('backend_id', None) or '{}-{}'.format(kind, stable_digest(config, 8))
    return BackendDescriptor(backend_id=backend_id, kind=kind, config=config)


def make_backend(descriptor, session=None):
    if descriptor.kind == SCRIPTED_MOCK:
        backend = ScriptedMockBackend(descriptor)
    elif descriptor.kind == REPLAY:
        backend = ReplayBackend(descriptor)
    else:
        backend = HttpChatBackend(descriptor, session=session)
    logger.debug('Backend {} ({})', descriptor.backend_id, descriptor.kind)
    return backend
