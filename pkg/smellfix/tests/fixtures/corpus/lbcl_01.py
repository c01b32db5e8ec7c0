class Base:
    pass


class Mixin:
    pass


class Extra:
    pass


class Widget(Base, Mixin, Extra):
    pass
