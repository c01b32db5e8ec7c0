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

import base64
import csv
import json
import os
import pathlib
import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional
from urllib.parse import urlencode

import requests
from loguru import logger
from monty.json import MSONable
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from smellfix.errors import AuthError, HostUnreachable, LabelImportError, RateLimited, TransportError
from smellfix.general_utils import retry_after_seconds, sha256_text

SearchTerm = namedtuple('SearchTerm', ['id', 'phrase'])

DEFAULT_TERMS = (
    SearchTerm('ST1', 'by GitHub Copilot'),
    SearchTerm('ST2', 'use GitHub Copilot'),
    SearchTerm('ST3', 'with GitHub Copilot'),
)

REPOSITORY = 'repository'
CODE_FILE = 'code-file'
SCOPES = (REPOSITORY, CODE_FILE)

UNLABELLED = 'unlabelled'
INCLUDED = 'included'
EXCLUDED = 'excluded'
LABELS = (UNLABELLED, INCLUDED, EXCLUDED)

# origin labels of materialized files
ORIGIN_REPOSITORY = 'repository'
ORIGIN_CODE = 'code'

SESSION_COLUMNS = ('kind', 'locator', 'content_hash', 'label', 'evidence', 'matched_terms')

GITHUB_API = 'https://api.github.com'
MAX_WAIT = 120.0


@dataclass
class Candidate(MSONable):
    kind: str
    locator: str
    content_hash: str
    label: str = UNLABELLED
    evidence: str = ''
    matched_terms: List[str] = field(default_factory=list)
    source_url: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SCOPES:
            raise ValueError('Invalid candidate kind: "{}".'.format(self.kind))
        if self.label not in LABELS:
            raise ValueError('Invalid label: "{}".'.format(self.label))
        self.matched_terms = sorted(set(self.matched_terms))

    @property
    def dedup_key(self):
        return (self.kind, self.content_hash if self.kind == CODE_FILE else self.locator)


def parse_terms(phrases):
    return [SearchTerm('ST{}'.format(i), phrase) for i, phrase in enumerate(phrases, 1)]


class _wait_for_host:
    def __init__(self, backoff):
        self.exponential = wait_exponential(multiplier=backoff, max=MAX_WAIT)

    def __call__(self, retry_state):
        error = retry_state.outcome.exception()
        if isinstance(error, RateLimited) and error.retry_after is not None:
            return min(max(error.retry_after, 0.0), MAX_WAIT)
        return self.exponential(retry_state)


class GitHubSearchClient:
    """Paginated code and repository search with an on-disk page cache."""

    def __init__(self, api_url=GITHUB_API, token_env='GITHUB_TOKEN', session=None, cache_dir=None,
                 per_page=100, max_pages=10, max_retries=3, backoff=1.0, fetch_content=False,
                 max_workers=4, sleep=time.sleep):
        self.api_url = api_url.rstrip('/')
        self.token = os.environ.get(token_env, '').strip()
        self.session = session or requests.Session()
        self.cache_dir = pathlib.Path(cache_dir) if cache_dir else None
        self.per_page = per_page
        self.max_pages = max_pages
        self.max_retries = max_retries
        self.backoff = backoff
        self.fetch_content = fetch_content
        self.max_workers = max_workers
        self.sleep = sleep

    def headers(self):
        headers = {'Accept': 'application/vnd.github+json',
                   'X-GitHub-Api-Version': '2022-11-28',
                   'User-Agent': 'smellfix-miner'}
        if self.token:
            headers['Authorization'] = 'Bearer {}'.format(self.token)
        return headers

    def _cache_path(self, url):
        return self.cache_dir / '{}.json'.format(sha256_text(url)) if self.cache_dir else None

    def _fetch(self, url):
        try:
            response = self.session.get(url, headers=self.headers(), timeout=30)
        except (requests.ConnectionError, requests.Timeout) as e:
            raise TransportError('{}: {}'.format(url, e)) from e
        except requests.RequestException as e:
            raise HostUnreachable('{}: {}'.format(url, e)) from e

        if response.status_code == 401:
            raise AuthError('{} rejected the token.'.format(self.api_url))
        if response.status_code in (403, 429):
            wait = retry_after_seconds(response.headers.get('Retry-After'))
            reset = response.headers.get('X-RateLimit-Reset')
            if wait is None and reset and reset.isdigit():
                wait = float(reset) - time.time()
            raise RateLimited('{} is rate limiting'.format(self.api_url), retry_after=wait)
        if response.status_code >= 500:
            raise TransportError('{} answered {}'.format(url, response.status_code))
        if response.status_code >= 400:
            raise HostUnreachable('{} answered {}'.format(url, response.status_code))
        try:
            return response.json()
        except ValueError as e:
            raise HostUnreachable('Malformed response from {}: {}'.format(url, e)) from e

    def get_json(self, url):
        cache_path = self._cache_path(url)
        if cache_path is not None and cache_path.exists():
            logger.debug('Cache hit {}', url)
            return json.loads(cache_path.read_text(encoding='utf-8'))

        retrying = Retrying(stop=stop_after_attempt(self.max_retries + 1),
                            wait=_wait_for_host(self.backoff),
                            retry=retry_if_exception_type((RateLimited, TransportError)),
                            before_sleep=lambda state: logger.info('Waiting on {}: {}', url,
                                                                   state.outcome.exception()),
                            sleep=self.sleep,
                            reraise=True)
        try:
            data = retrying(self._fetch, url)
        except TransportError as e:
            raise HostUnreachable('{} gave up after {} retries: {}'.format(url, self.max_retries, e)) from e
        if cache_path is not None:
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            cache_path.write_text(json.dumps(data, sort_keys=True), encoding='utf-8')
        return data

    def search_url(self, scope, term, page):
        query = '"{}"'.format(term.phrase)
        if scope == CODE_FILE:
            query += ' language:Python'
        endpoint = 'code' if scope == CODE_FILE else 'repositories'
        return '{}/search/{}?{}'.format(self.api_url, endpoint,
                                        urlencode(dict(q=query, per_page=self.per_page, page=page)))

    def search_scope(self, scope, term):
        items = []
        for page in range(1, self.max_pages + 1):
            data = self.get_json(self.search_url(scope, term, page))
            page_items = data.get('items', [])
            items.extend(page_items)
            if len(page_items) < self.per_page or len(items) >= data.get('total_count', 0):
                break
        logger.info('{} {} hits for "{}"', len(items), scope, term.phrase)
        return items

    def tree_url(self, full_name, ref='HEAD'):
        return '{}/repos/{}/git/trees/{}?recursive=1'.format(self.api_url, full_name, ref)

    def python_blobs(self, full_name):
        """Tree entries of every .py file in a repository's default branch."""
        data = self.get_json(self.tree_url(full_name))
        if data.get('truncated'):
            logger.warning('Tree of {} is truncated; some files are missing', full_name)
        return [item for item in data.get('tree', [])
                if item.get('type') == 'blob' and item.get('path', '').endswith('.py')]

    def file_text(self, url):
        data = self.get_json(url)
        if data.get('encoding') == 'base64':
            return base64.b64decode(data.get('content', '')).decode('utf-8', errors='replace')
        return data.get('content', '')


def _candidate(scope, item, term):
    if scope == REPOSITORY:
        locator = 'github.com/{}'.format(item['full_name'])
        return Candidate(kind=REPOSITORY,
                         locator=locator,
                         content_hash='',
                         evidence=item.get('description') or '',
                         matched_terms=[term.id],
                         source_url=item.get('html_url'))
    repo = item['repository']['full_name']
    return Candidate(kind=CODE_FILE,
                     locator='github.com/{}/{}@{}'.format(repo, item['path'], item['sha']),
                     content_hash='git-blob:{}'.format(item['sha']),
                     matched_terms=[term.id],
                     source_url=item.get('url'))


def search(terms, client):
    candidates = []
    for term in terms:
        for scope in SCOPES:
            candidates.extend(_candidate(scope, item, term) for item in client.search_scope(scope, term))

    if client.fetch_content:
        code_files = [c for c in candidates if c.kind == CODE_FILE and c.source_url]

        def _hash(candidate):
            candidate.content_hash = sha256_text(client.file_text(candidate.source_url))

        with ThreadPoolExecutor(max_workers=client.max_workers) as executor:
            list(executor.map(_hash, code_files))
    return candidates


def dedup(candidates):
    """Collapses code files by content hash and repositories by locator."""
    survivors = {}
    for candidate in sorted(candidates, key=lambda c: c.locator):
        key = candidate.dedup_key
        if key not in survivors:
            survivors[key] = Candidate.from_dict(candidate.as_dict())
        else:
            kept = survivors[key]
            kept.matched_terms = sorted(set(kept.matched_terms) | set(candidate.matched_terms))
    return sorted(survivors.values(), key=lambda c: (c.locator, c.kind))


def search_summary(candidates, terms=DEFAULT_TERMS):
    """Hits per term and scope in the layout of the search-term table."""
    rows = [('#', 'Search Term', '# Repositories', '# Code')]
    totals = [0, 0]
    for term in terms:
        repos = sum(1 for c in candidates if c.kind == REPOSITORY and term.id in c.matched_terms)
        code = sum(1 for c in candidates if c.kind == CODE_FILE and term.id in c.matched_terms)
        totals[0] += repos
        totals[1] += code
        rows.append((term.id, '"{}"'.format(term.phrase), repos, code))
    rows.append(('Total', '', totals[0], totals[1]))
    return rows


def export_labelling_session(candidates, path):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, delimiter='\t', lineterminator='\n')
        writer.writerow(SESSION_COLUMNS)
        for c in candidates:
            writer.writerow((c.kind, c.locator, c.content_hash, c.label, c.evidence,
                             ','.join(c.matched_terms)))
    return path


def import_labels(path, candidates=None):
    """Reads a labelling session; rejects unknown labels and drifted hashes."""
    known = {c.locator: c for c in candidates} if candidates is not None else None
    labelled = []
    with open(path, encoding='utf-8', newline='') as f:
        reader = csv.reader(f, delimiter='\t')
        header = next(reader, None)
        if tuple(header or ()) != SESSION_COLUMNS:
            raise LabelImportError(1, 'expected header {}'.format('\t'.join(SESSION_COLUMNS)))
        for row_number, row in enumerate(reader, 2):
            if len(row) != len(SESSION_COLUMNS):
                raise LabelImportError(row_number, 'expected {} columns, got {}'.format(
                    len(SESSION_COLUMNS), len(row)))
            kind, locator, content_hash, label, evidence, matched = row
            if label not in LABELS:
                raise LabelImportError(row_number, 'unknown label "{}"'.format(label))
            if kind not in SCOPES:
                raise LabelImportError(row_number, 'unknown kind "{}"'.format(kind))
            source_url = None
            if known is not None:
                original = known.get(locator)
                if original is None:
                    raise LabelImportError(row_number, 'unknown locator "{}"'.format(locator))
                if original.content_hash != content_hash:
                    raise LabelImportError(row_number, 'content hash of {} changed since export'.format(locator))
                source_url = original.source_url
            labelled.append(Candidate(kind=kind,
                                      locator=locator,
                                      content_hash=content_hash,
                                      label=label,
                                      evidence=evidence,
                                      matched_terms=[t for t in matched.split(',') if t],
                                      source_url=source_url))
    return labelled


def corpus_file_name(locator):
    name = locator.split('@')[0].replace('/', '__')
    return name if name.endswith('.py') else name + '.py'


def _write_corpus_file(out_dir, locator, text, origin, origins):
    path = str(out_dir / corpus_file_name(locator))
    if path in origins:
        logger.info('{} already materialized from {}', locator, origins[path])
        return
    pathlib.Path(path).write_text(text, encoding='utf-8')
    origins[path] = origin


def materialize(candidates, out_dir, client):
    """Writes the Python files of included candidates under out_dir; returns path -> origin.

    Code files keep origin 'code'; every .py file of an included repository gets
    origin 'repository'.
    """
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    origins = {}
    for candidate in candidates:
        if candidate.label != INCLUDED:
            continue
        if candidate.kind == REPOSITORY:
            full_name = candidate.locator.split('github.com/', 1)[-1]
            for blob in client.python_blobs(full_name):
                _write_corpus_file(out_dir, '{}/{}'.format(candidate.locator, blob['path']),
                                   client.file_text(blob['url']), ORIGIN_REPOSITORY, origins)
            continue
        if not candidate.source_url:
            logger.info('Not materializing {}: no source url', candidate.locator)
            continue
        text = client.file_text(candidate.source_url)
        if not candidate.content_hash.startswith('git-blob:') and sha256_text(text) != candidate.content_hash:
            logger.warning('Content of {} drifted since labelling; skipped', candidate.locator)
            continue
        _write_corpus_file(out_dir, candidate.locator, text, ORIGIN_CODE, origins)
    logger.info('Materialized {} files into {}', len(origins), out_dir)
    return origins
