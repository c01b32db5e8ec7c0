"""Small utilities that stay under every threshold."""
import os.path


def join_parts(base, name, suffix, sep):
    return sep.join([base, name, suffix])


def depth_two():
    return [[1, 2], [3, 4]]


def chain_three(obj):
    return obj.a.b.c
