"""Derivations of the rational-function field."""

from __future__ import annotations

from typing import Mapping

from .polys import RING, RatFunc, var_index


class InertSymbolError(ValueError):
    pass


class Derivation:
    """A derivation given by the images of the ring variables.

    Variables without an image are constants (image 0), except those listed in
    ``inert``: differentiating an expression that contains one of those raises
    :class:`InertSymbolError`.
    """

    def __init__(self, images: Mapping[str, object], inert=frozenset(), name: str = "d"):
        self.images = {k: RatFunc(v) for k, v in images.items()}
        for k in self.images:
            var_index(k)
        self.inert = frozenset(inert) - set(self.images)
        self.name = name

    def image(self, name: str) -> RatFunc:
        return self.images.get(name, RatFunc(0))

    def _poly(self, p) -> RatFunc:
        out = RatFunc(0)
        for name, img in self.images.items():
            if img.is_zero():
                continue
            dp = p.diff(RING.gens[var_index(name)])
            if dp:
                out = out + RatFunc._raw(dp, RING.one) * img
        return out

    def __call__(self, f) -> RatFunc:
        f = RatFunc(f) if not isinstance(f, RatFunc) else f
        bad = self.inert & f.variables()
        if bad:
            raise InertSymbolError(
                f"derivative of inert gauge symbol requested: {sorted(bad)} under {self.name}"
            )
        dn = self._poly(f._n)
        if f.is_polynomial():
            return dn
        dd = self._poly(f._d)
        den = RatFunc._raw(f._d, RING.one)
        return (dn * den - RatFunc._raw(f._n, RING.one) * dd) / (den * den)

    def with_image(self, name: str, value) -> Derivation:
        images = dict(self.images)
        images[name] = RatFunc(value)
        return Derivation(images, self.inert, self.name)

    def __repr__(self):
        body = ", ".join(f"{k} -> {v}" for k, v in self.images.items())
        return f"Derivation({self.name}: {body})"


def partial(name: str) -> Derivation:
    """Partial derivative with respect to one variable."""
    return Derivation({name: 1}, name=f"d/d{name}")


d_t = partial("t")


def derive(d: Derivation, f) -> RatFunc:
    return d(f)

