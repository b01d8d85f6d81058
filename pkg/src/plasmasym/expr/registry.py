from __future__ import annotations

REAL = "real"
COMPLEX = "complex"


class Registry:
    """Known variable names and whether each is real or complex.

    An open registry accepts any identifier as a real variable unless it was
    declared complex; a closed one rejects unknown names at parse time.
    """

    def __init__(self, real=(), complex=(), open=False):
        self._kinds = {}
        for n in real:
            self._kinds[n] = REAL
        for n in complex:
            self._kinds[n] = COMPLEX
        self.open = open

    def __contains__(self, name):
        return self.open or name in self._kinds

    def kind(self, name) -> str:
        k = self._kinds.get(name)
        if k is None:
            if self.open:
                return REAL
            raise KeyError(f"unknown variable {name!r}")
        return k

    def is_complex(self, name) -> bool:
        return self._kinds.get(name) == COMPLEX

    def names(self):
        return sorted(self._kinds)

    def extended(self, real=(), complex=()):
        r = Registry(open=self.open)
        r._kinds = dict(self._kinds)
        for n in real:
            r._kinds[n] = REAL
        for n in complex:
            r._kinds[n] = COMPLEX
        return r

    def __repr__(self):
        return f"Registry({self._kinds!r}, open={self.open})"


# 'z' is the complex variable used by generating functions everywhere
DEFAULT = Registry(complex=("z",), open=True)
