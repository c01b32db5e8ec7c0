"""Report helpers."""


class Exporter:
    def export(self, rows, path, delimiter, quote, header):
        return rows, path, delimiter, quote, header

    def preview(self, rows, limit):
        return rows[:limit]


def render(title, body, footer, *args, width=80, **kwargs):
    return title, body, footer, args, width, kwargs
