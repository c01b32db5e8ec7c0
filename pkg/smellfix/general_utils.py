import datetime
import email.utils
import hashlib
import json
import math
import os
import pathlib
from decimal import ROUND_HALF_UP, Decimal

from monty.json import MontyEncoder

ONE_DECIMAL = Decimal('0.1')


def percent(numerator, denominator):
    """Exact percentage rounded half-up to one decimal; None when undefined."""
    if not denominator:
        return None
    value = Decimal(numerator) * 100 / Decimal(denominator)
    return value.quantize(ONE_DECIMAL, rounding=ROUND_HALF_UP)


def format_percent(value):
    if value is None:
        return 'n/a'
    return '{}%'.format(value)


def sha256_text(text):
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def sha256_file(path):
    return hashlib.sha256(pathlib.Path(path).read_bytes()).hexdigest()


def to_json(obj, indent=None):
    return json.dumps(obj, sort_keys=True, cls=MontyEncoder, indent=indent, ensure_ascii=False)


def stable_digest(obj, length=16):
    return sha256_text(to_json(obj))[:length]


def utc_timestamp():
    """ISO-8601 UTC time, pinned by SOURCE_DATE_EPOCH when set."""
    epoch = os.environ.get('SOURCE_DATE_EPOCH')
    if epoch is not None:
        moment = datetime.datetime.fromtimestamp(int(epoch), tz=datetime.timezone.utc)
    else:
        moment = datetime.datetime.now(tz=datetime.timezone.utc).replace(microsecond=0)
    return moment.isoformat().replace('+00:00', 'Z')


def iter_python_files(paths):
    """Expands directories to their *.py files; path-sorted and de-duplicated."""
    found = set()
    for path in paths:
        path = pathlib.Path(path)
        if path.is_dir():
            found.update(str(fp) for fp in path.rglob('*.py') if fp.is_file())
        else:
            found.add(str(path))
    return sorted(found)


def write_jsonl(path, records):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for record in records:
            f.write(to_json(record) + '\n')


def read_jsonl(path, decoder=None):
    records = []
    with open(path, encoding='utf-8') as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(json.loads(line, cls=decoder) if decoder else json.loads(line))
    return records


def retry_after_seconds(value, now=None):
    """Seconds to wait for a Retry-After value, either delta-seconds or an HTTP-date.

    Returns None when the value is missing or unreadable; past dates give 0.
    """
    if not value:
        return None
    try:
        seconds = float(value)
    except ValueError:
        pass
    else:
        return max(seconds, 0.0) if math.isfinite(seconds) else None
    try:
        moment = email.utils.parsedate_to_datetime(value)
    except (TypeError, ValueError):
        return None
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=datetime.timezone.utc)
    now = now or datetime.datetime.now(tz=datetime.timezone.utc)
    return max((moment - now).total_seconds(), 0.0)
