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


class SmellFixError(Exception):
    """Base class of every error raised by smellfix."""


class ConfigError(SmellFixError, ValueError):
    pass


class ParseError(SmellFixError, ValueError):
    def __init__(self, line, col, message, path=None):
        self.line = line
        self.col = col
        self.message = message
        self.path = path
        where = '{}:'.format(path) if path else ''
        super().__init__('{}{}:{}: {}'.format(where, line, col, message))

    def as_dict(self):
        return dict(line=self.line, col=self.col, message=self.message)


class WrongEntityKind(SmellFixError, TypeError):
    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__('Expected entity of kind {}, got "{}".'.format(expected, actual))


class SpanOutOfFile(SmellFixError, ValueError):
    pass


class MissingSmellName(SmellFixError, ValueError):
    pass


class BackendUnavailable(SmellFixError, ConnectionError):
    pass


class ReplayMiss(BackendUnavailable):
    pass


class RateLimited(SmellFixError, ConnectionError):
    def __init__(self, message, retry_after=None):
        self.retry_after = retry_after
        super().__init__(message)


class TransportError(SmellFixError, ConnectionError):
    """Transient failure talking to a remote host; retried by callers."""


class AuthError(SmellFixError, PermissionError):
    pass


class HostUnreachable(SmellFixError, ConnectionError):
    pass


class LabelImportError(SmellFixError, ValueError):
    def __init__(self, row, message):
        self.row = row
        super().__init__('row {}: {}'.format(row, message))
