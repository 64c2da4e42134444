"""Second-order forward-mode dual numbers over numpy arrays.

A :class:`Jet` carries (value, first derivative, second derivative) of a
function of the single variable x.  Composition with a scalar function
phi uses  (phi o u)'' = phi''(u) u'^2 + phi'(u) u''.
"""

from __future__ import annotations

import numpy as np


class Jet:
    __slots__ = ("v", "d1", "d2")

    def __init__(self, v, d1, d2):
        self.v = v
        self.d1 = d1
        self.d2 = d2

    @classmethod
    def variable(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x, np.ones_like(x), np.zeros_like(x))

    @classmethod
    def constant(cls, c, like):
        z = np.zeros_like(like, dtype=float)
        return cls(z + c, z, z.copy())

    def __add__(self, o):
        return Jet(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)

    def __sub__(self, o):
        return Jet(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)

    def __neg__(self):
        return Jet(-self.v, -self.d1, -self.d2)

    def __mul__(self, o):
        return Jet(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )

    def __truediv__(self, o):
        q = self.v / o.v
        q1 = (self.d1 - q * o.d1) / o.v
        q2 = (self.d2 - 2.0 * q1 * o.d1 - q * o.d2) / o.v
        return Jet(q, q1, q2)

    def chain(self, value, first, second):
        """Compose with phi given phi(u), phi'(u), phi''(u) at u = self.v."""
        return Jet(value, first * self.d1, second * self.d1 * self.d1 + first * self.d2)

    def powc(self, c: float):
        """self ** c for a constant exponent."""
        u = self.v
        if c == 0.0:
            return Jet.constant(1.0, u)
        if float(c).is_integer() and c > 0:
            ci = int(c)
            first = c * u ** (ci - 1)
            second = c * (c - 1) * u ** (ci - 2) if ci >= 2 else np.zeros_like(u)
            return self.chain(u ** ci, first, second)
        return self.chain(np.power(u, c), c * np.power(u, c - 1.0), c * (c - 1.0) * np.power(u, c - 2.0))

    def exp(self):
        e = np.exp(self.v)
        return self.chain(e, e, e)

    def log(self):
        u = self.v
        return self.chain(np.log(u), 1.0 / u, -1.0 / (u * u))

    def log1p_shift(self, shift: float):
        """ln(1 + shift + u), the lnmu builtin."""
        s = 1.0 + shift + self.v
        return self.chain(np.log1p(shift + self.v), 1.0 / s, -1.0 / (s * s))

    def sin(self):
        s, c = np.sin(self.v), np.cos(self.v)
        return self.chain(s, c, -s)

    def cos(self):
        s, c = np.sin(self.v), np.cos(self.v)
        return self.chain(c, -s, -c)

    def abs(self):
        # subgradient at 0 is 0
        sg = np.sign(self.v)
        return Jet(np.abs(self.v), sg * self.d1, sg * self.d2)

    @staticmethod
    def select(mask, a, b):
        return Jet(np.where(mask, a.v, b.v), np.where(mask, a.d1, b.d1), np.where(mask, a.d2, b.d2))
