"""Reference model of ``Z[theta]`` as integer polynomials modulo ``Phi_p``.

Carry-free: ideal membership in ``kappa^j`` is decided by repeated exact
division by ``X - 1``.  It shares no code with :mod:`maxclass.cyclotomic`
and serves as the referee for digit arithmetic.
"""
from __future__ import annotations

from typing import Sequence


class PolyRing:
    def __init__(self, p: int):
        self.p = p
        self.deg = p - 1
        self._kappa_powers = [self.from_int(1)]

    def reduce(self, f: Sequence[int]) -> list[int]:
        f = list(f)
        # X^p = 1, then subtract multiples of 1 + X + ... + X^(p-1)
        out = [0] * self.p
        for i, c in enumerate(f):
            out[i % self.p] += c
        top = out[self.p - 1]
        return [c - top for c in out[: self.p - 1]]

    def add(self, f, g) -> list[int]:
        return [a + b for a, b in zip(f, g)]

    def sub(self, f, g) -> list[int]:
        return [a - b for a, b in zip(f, g)]

    def mul(self, f, g) -> list[int]:
        out = [0] * (len(f) + len(g))
        for i, a in enumerate(f):
            if a:
                for k, b in enumerate(g):
                    out[i + k] += a * b
        return self.reduce(out)

    def theta(self, f, r: int = 1) -> list[int]:
        """Multiplication by ``X^r``."""
        return self.reduce([0] * (r % self.p) + list(f))

    def from_int(self, k: int) -> list[int]:
        return [k] + [0] * (self.deg - 1)

    def from_digits(self, digits: Sequence[int]) -> list[int]:
        """``sum d_u (X - 1)^u``."""
        pw = self._kappa_powers
        while len(pw) < len(digits):
            pw.append(self.mul(pw[-1], self.reduce([-1, 1])))
        acc = [0] * self.deg
        for d, power in zip(digits, pw):
            if d:
                acc = self.add(acc, [d * c for c in power])
        return acc

    def valuation(self, f, cap: int) -> int:
        """``kappa``-adic valuation of ``f``, saturating at ``cap``."""
        f = list(f)
        v = 0
        while v < cap:
            if not any(f):
                return cap
            s = sum(f)
            if s % self.p:
                return v
            # subtract (s/p) * Phi_p so the value at X = 1 becomes 0, then divide by X - 1
            t = s // self.p
            g = [c - t for c in f] + [-t]
            q = [0] * self.deg
            acc = 0
            for i in range(len(g) - 1, 0, -1):
                acc += g[i]
                q[i - 1] = acc
            f = self.reduce(q)
            v += 1
        return cap

    def congruent(self, f, g, j: int) -> bool:
        return self.valuation(self.sub(f, g), j) >= j
