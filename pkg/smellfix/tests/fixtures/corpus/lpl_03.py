import functools


@functools.lru_cache(maxsize=None)
def score(a, b, /, c, d, *, e):
    return a + b + c + d + e


def keep(self, a, b, c, d):
    return a
