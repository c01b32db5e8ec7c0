import abc
import collections


class Registry(abc.ABC, collections.abc.Mapping, object, metaclass=abc.ABCMeta):
    pass


class Small(object, metaclass=abc.ABCMeta):
    pass


class Node(Serializable, Comparable, Hashable, Printable):
    pass
