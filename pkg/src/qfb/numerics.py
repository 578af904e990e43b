"""Tolerance-deduplicated storage for complex edge weights.

Every weight that ends up on a decision-diagram edge is passed through
:meth:`ComplexTable.lookup`, which returns a *canonical representative*:
the first value ever stored within ``eps`` of the query.  Representatives
are plain Python ``complex`` objects, so a handle is simply the canonical
value itself, and handle equality (``==``) is entry identity.

With ``relative=True`` a match must additionally satisfy
``|e - v| <= max(eps * |v|, 1e-14)``.  Small weights then keep their own entries instead
of being merged with a neighbour that is close in absolute terms only.  That
matters for products of dense diagrams, where every merge error is summed
over many paths and can push equal sub-matrices further apart than ``eps``.
"""

from __future__ import annotations

import math

DEFAULT_EPS = 1e-10

ZERO = 0j
ONE = 1 + 0j

ComplexRef = complex

# exact-value memo is flushed past this many keys; canonical entries are kept
_EXACT_CACHE_LIMIT = 1 << 20
# relative matches always accept differences this small: rounding noise from
# O(1) arithmetic, which would otherwise split weights near the tolerance
_NOISE_FLOOR = 1e-14


class ComplexTable:
    """Grow-only table of canonical complex numbers.

    Lookup hashes the value into a square bucket of side ``4 * eps`` and
    probes a neighbouring bucket only when the value lies within ``eps`` of
    a bucket border, so a hit costs one or two dict probes on average.
    """

    def __init__(self, eps: float = DEFAULT_EPS, relative: bool = False):
        if not (eps > 0 and math.isfinite(eps)):
            raise ValueError(f"tolerance must be positive and finite, got {eps!r}")
        self.eps = eps
        self.relative = relative
        self._width = 4 * eps
        self._inv_width = 1.0 / self._width
        self._buckets: dict[tuple[int, int], list[complex]] = {}
        self._exact: dict[complex, complex] = {ZERO: ZERO, ONE: ONE}
        self._count = 0
        self._insert(ZERO)
        self._insert(ONE)
        self.misses = 0

    def __len__(self) -> int:
        return self._count

    def _key(self, re: float, im: float) -> tuple[int, int]:
        return (math.floor(re * self._inv_width), math.floor(im * self._inv_width))

    def _insert(self, v: complex) -> None:
        self._buckets.setdefault(self._key(v.real, v.imag), []).append(v)
        self._count += 1

    def _find(self, re: float, im: float) -> complex | None:
        eps = self.eps
        w = self._width
        kr, ki = self._key(re, im)
        # neighbouring buckets that may hold an entry within eps
        rs = [kr]
        fr = re - kr * w
        if fr <= eps:
            rs.append(kr - 1)
        elif w - fr <= eps:
            rs.append(kr + 1)
        is_ = [ki]
        fi = im - ki * w
        if fi <= eps:
            is_.append(ki - 1)
        elif w - fi <= eps:
            is_.append(ki + 1)
        buckets = self._buckets
        rtol = max(eps * math.hypot(re, im), _NOISE_FLOOR) if self.relative else math.inf
        for a in rs:
            for b in is_:
                bucket = buckets.get((a, b))
                if bucket is None:
                    continue
                for e in bucket:
                    if (abs(e.real - re) <= eps and abs(e.imag - im) <= eps
                            and abs(e - complex(re, im)) <= rtol):
                        return e
        return None

    def lookup(self, v: complex) -> complex:
        """Return the canonical handle for ``v``, inserting it if new."""
        c = self._exact.get(v)
        if c is not None:
            return c
        v = complex(v)
        re, im = v.real, v.imag
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError(f"non-finite complex value {v!r}")
        eps = self.eps
        if abs(re) <= eps and abs(im) <= eps:
            c = ZERO
        elif abs(re - 1.0) <= eps and abs(im) <= eps:
            c = ONE
        else:
            c = self._find(re, im)
            if c is None:
                self.misses += 1
                # store exact zeros for coordinates lost in rounding noise
                if abs(re) <= eps:
                    re = 0.0
                if abs(im) <= eps:
                    im = 0.0
                c = complex(re, im)
                self._insert(c)
        if len(self._exact) >= _EXACT_CACHE_LIMIT:
            self._exact = {ZERO: ZERO, ONE: ONE}
        self._exact[v] = c
        return c

    def cadd(self, a: complex, b: complex) -> complex:
        return self.lookup(a + b)

    def cmul(self, a: complex, b: complex) -> complex:
        return self.lookup(a * b)

    def cneg(self, a: complex) -> complex:
        return self.lookup(-a)

    def cdiv(self, a: complex, b: complex) -> complex:
        if b == 0:
            raise ZeroDivisionError("division by the ZERO weight")
        return self.lookup(a / b)
