import csv
import io

from smellfix.detector import CorpusReport
from smellfix.evaluator import FixingRateTable
from smellfix.general_utils import format_percent, percent, to_json
from smellfix.prompts import TIERS
from smellfix.smells import full_name

REPORT_FORMATS = ('json', 'csv', 'text')


def _rate(value):
    return None if value is None else str(value)


def distribution_rows(report):
    percentages = report.type_percentages()
    return [(t, full_name(t), report.type_counts[t], percentages[t]) for t in report.ordered_types()]


def distribution_document(report, manifest_id=None):
    return dict(kind='smell-distribution',
                run_manifest=manifest_id,
                profile=report.profile_name,
                profile_hash=report.profile_hash,
                files_scanned=report.files_scanned,
                files_smelly=report.files_smelly,
                smelly_ratio=_rate(report.smelly_ratio()),
                total_instances=report.total_instances,
                parse_failures=len(report.parse_failures),
                rows=[dict(smell_type=t, name=name, count=n, percent=_rate(p))
                      for t, name, n, p in distribution_rows(report)],
                origin_counts=report.origin_counts)


def fixing_rate_document(table, manifest_id=None):
    return dict(kind='fixing-rates',
                run_manifest=manifest_id,
                smell_types=list(table.smell_types),
                tiers=list(table.tiers),
                cells=[dict(smell_type=t, tier=tier, fixed=f, total=n, rate=_rate(r))
                       for (t, tier), (f, n, r) in table.cells.items()],
                tier_averages={tier: _rate(r) for tier, r in table.tier_averages.items()},
                type_averages={t: _rate(r) for t, r in table.type_averages.items()},
                overall=_rate(table.overall),
                tier_ranking=table.tier_ranking())


def _csv(rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerows(rows)
    return buffer.getvalue()


def _grid(rows):
    widths = [max(len(str(row[i])) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for k, row in enumerate(rows):
        cells = [str(c).ljust(w) if i == 0 else str(c).rjust(w) for i, (c, w) in enumerate(zip(row, widths))]
        lines.append('  '.join(cells).rstrip())
        if k == 0:
            lines.append('  '.join('-' * w for w in widths))
    return '\n'.join(lines) + '\n'


def distribution_table(report):
    rows = [('Type', 'Name', 'Count', 'Percent')]
    rows += [(t, name, n, format_percent(p)) for t, name, n, p in distribution_rows(report)]
    total = report.total_instances
    rows.append(('Total', '', total, format_percent(percent(total, total))))
    return rows


def fixing_rate_table(table):
    rows = [('Prompt', *table.smell_types, 'Avg')]
    averages = table.tier_averages
    for tier in table.tiers:
        rates = [format_percent(table.cell(t, tier)[2]) for t in table.smell_types]
        rows.append((TIERS[tier].title, *rates, format_percent(averages[tier])))
    type_averages = table.type_averages
    rows.append(('Avg', *[format_percent(type_averages[t]) for t in table.smell_types], ''))
    return rows


def emit_report(table, fmt='json', manifest_id=None):
    """Renders a CorpusReport or FixingRateTable as json, csv or a text grid."""
    if fmt not in REPORT_FORMATS:
        raise ValueError('Invalid report format: "{}".'.format(fmt))

    if isinstance(table, CorpusReport):
        if fmt == 'json':
            return to_json(distribution_document(table, manifest_id), indent=2) + '\n'
        rows = distribution_table(table)
        footer = 'Smelly files: {}/{} ({})'.format(table.files_smelly, table.files_scanned,
                                                  format_percent(table.smelly_ratio()))
    elif isinstance(table, FixingRateTable):
        if fmt == 'json':
            return to_json(fixing_rate_document(table, manifest_id), indent=2) + '\n'
        rows = fixing_rate_table(table)
        footer = None
    else:
        raise TypeError('Cannot render {}.'.format(type(table).__name__))

    if fmt == 'csv':
        return _csv(rows)
    text = _grid(rows)
    if footer:
        text += footer + '\n'
    if manifest_id:
        text += 'Run manifest: {}\n'.format(manifest_id)
    return text


def emit_rows(rows, fmt='csv'):
    """Renders a header-first list of row tuples."""
    if fmt == 'csv':
        return _csv(rows)
    if fmt == 'text':
        return _grid(rows)
    raise ValueError('Invalid table format: "{}".'.format(fmt))
