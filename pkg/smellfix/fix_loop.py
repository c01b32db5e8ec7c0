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
import threading
import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Optional

from loguru import logger
from monty.json import MontyDecoder, MSONable
from tenacity import (RetryError, Retrying, retry_if_exception_type, stop_after_attempt,
                      wait_exponential)

from smellfix.detector import SmellInstance
from smellfix.errors import BackendUnavailable, RateLimited, SmellFixError, TransportError
from smellfix.extraction import extract_code
from smellfix.general_utils import read_jsonl, to_json, utc_timestamp
from smellfix.prompts import TIER_NAMES, render_prompt
from smellfix.snippets import target_smells

AttemptRequest = namedtuple('AttemptRequest', ['snippet', 'tier', 'target_smell'])

DEFAULT_MAX_RETRIES = 3
DEFAULT_BACKOFF = 1.0
MAX_BACKOFF = 60.0


@dataclass
class FixAttempt(MSONable):
    snippet_id: str
    target_smell: SmellInstance
    tier: str
    prompt_text: str
    raw_response: str
    extracted_code: Optional[str]
    backend_id: str
    timestamp: str
    error: Optional[str] = None
    sequence: int = 0

    def __post_init__(self):
        if isinstance(self.target_smell, dict):
            self.target_smell = MontyDecoder().process_decoded(self.target_smell)

    @property
    def smell_type(self):
        return self.target_smell.smell_type

    @property
    def failed(self):
        return self.error is not None


def attempt_requests(snippets, tiers=TIER_NAMES):
    """Snippet-major order: every target smell of a snippet, each under every tier."""
    return [AttemptRequest(snippet=snippet, tier=tier, target_smell=target)
            for snippet in snippets
            for target in target_smells(snippet)
            for tier in tiers]


class _wait_for_backend:
    """Exponential back-off that honors a server supplied retry-after."""

    def __init__(self, backoff):
        self.exponential = wait_exponential(multiplier=backoff, max=MAX_BACKOFF)

    def __call__(self, retry_state):
        error = retry_state.outcome.exception()
        if isinstance(error, RateLimited) and error.retry_after is not None:
            return min(error.retry_after, MAX_BACKOFF)
        return self.exponential(retry_state)


def submit(request, backend, max_retries=None, backoff=None, sleep=time.sleep):
    config = backend.descriptor.config
    max_retries = config.get('max_retries', DEFAULT_MAX_RETRIES) if max_retries is None else max_retries
    backoff = config.get('backoff', DEFAULT_BACKOFF) if backoff is None else backoff
    prompt_text = render_prompt(request.tier, request.target_smell.smell_type)

    retrying = Retrying(stop=stop_after_attempt(max_retries + 1),
                        wait=_wait_for_backend(backoff),
                        retry=retry_if_exception_type((TransportError, RateLimited)),
                        before_sleep=lambda state: logger.info(
                            'Retrying {} [{}] after {}', request.snippet.snippet_id, request.tier,
                            state.outcome.exception()),
                        sleep=sleep,
                        reraise=True)
    try:
        raw_response = retrying(backend, request, prompt_text)
    except TransportError as e:
        raise BackendUnavailable('{} gave up after {} retries: {}'.format(
            backend.backend_id, max_retries, e)) from e
    except RetryError as e:
        raise BackendUnavailable(str(e)) from e

    return FixAttempt(snippet_id=request.snippet.snippet_id,
                      target_smell=request.target_smell,
                      tier=request.tier,
                      prompt_text=prompt_text,
                      raw_response=raw_response,
                      extracted_code=extract_code(raw_response),
                      backend_id=backend.backend_id,
                      timestamp=utc_timestamp())


def failed_attempt(request, backend, error):
    return FixAttempt(snippet_id=request.snippet.snippet_id,
                      target_smell=request.target_smell,
                      tier=request.tier,
                      prompt_text=render_prompt(request.tier, request.target_smell.smell_type),
                      raw_response='',
                      extracted_code=None,
                      backend_id=backend.backend_id,
                      timestamp=utc_timestamp(),
                      error='{}: {}'.format(type(error).__name__, error))


class AttemptStore:
    """Append-only line-delimited store; records land in completion order."""

    def __init__(self, path=None):
        self.path = pathlib.Path(path) if path else None
        self.attempts = []
        self._lock = threading.Lock()
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text('', encoding='utf-8')

    def append(self, attempt):
        with self._lock:
            attempt.sequence = len(self.attempts)
            self.attempts.append(attempt)
            if self.path is not None:
                with open(self.path, 'a', encoding='utf-8', newline='\n') as f:
                    f.write(to_json(attempt) + '\n')
        return attempt


def read_attempts(path):
    return [FixAttempt.from_dict(r) for r in read_jsonl(path)]


def run_fix(snippets, backend, tiers=TIER_NAMES, store_path=None, max_in_flight=1):
    """Submits every (target smell, tier) pair; failures become error-state attempts."""
    requests_ = attempt_requests(snippets, tiers)
    store = AttemptStore(store_path)
    logger.info('{} attempts ({} snippets, tiers {}) on {}', len(requests_), len(snippets),
                ','.join(tiers), backend.backend_id)

    def _run(request):
        try:
            return submit(request, backend)
        except SmellFixError as e:
            logger.warning('Attempt {} [{}] failed: {}', request.snippet.snippet_id, request.tier, e)
            return failed_attempt(request, backend, e)

    if max_in_flight and max_in_flight > 1:
        with ThreadPoolExecutor(max_workers=max_in_flight) as executor:
            futures = [executor.submit(_run, r) for r in requests_]
            for future in as_completed(futures):
                store.append(future.result())
    else:
        for request in requests_:
            store.append(_run(request))

    assert len(store.attempts) == len(requests_)
    return store.attempts
