import sys


class Exporter:
    def export(self, rows, path, delimiter, quote):
        return rows, path, delimiter, quote

    if sys.version_info < (3, 8):
        def legacy_export(self, rows, path, delimiter, quote):
            return rows, path, delimiter, quote
