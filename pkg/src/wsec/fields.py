"""Exact arithmetic in prime fields and their polynomial extension towers.

A tower starts at GF(p) and climbs one extension per level.  Every choice is
canonical so that independent constructions agree bit for bit:

* the modulus of each level is the first monic irreducible polynomial of the
  required degree, with coefficients enumerated little-endian in the canonical
  order of the level below;
* elements are length-e coordinate vectors over GF(p) in the tower basis,
  little-endian (constant term first at every level);
* the canonical enumeration of a field lists coordinate vectors as
  little-endian base-p counters, so index 0 is zero and index 1 is one.

Subfield inclusions along the tower pad the higher coordinates with zeros.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import FormatError

__all__ = [
    "FElem",
    "FieldTower",
    "embed",
    "find_primitive",
    "format_elem",
    "format_tower",
    "is_prime",
    "make_tower",
    "parse_elem",
    "parse_tower",
    "prime_power",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1 if f == 2 else 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, s) with q = p**s and p prime.

    Raises ValueError when q is not a prime power.
    """
    if q < 2:
        raise ValueError(f"not a prime power: {q}")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1 if p == 2 else 2
    else:
        return q, 1
    s = 0
    m = q
    while m % p == 0:
        m //= p
        s += 1
    if m != 1:
        raise ValueError(f"not a prime power: {q}")
    return p, s


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of n, ascending, by trial division."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


class FElem:
    """A single field element: a length-e coordinate vector over GF(p)."""

    __slots__ = ("tower", "coords")

    def __init__(self, tower: "FieldTower", coords: tuple[int, ...]):
        self.tower = tower
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FElem):
            if other.tower is self.tower or other.tower.signature == self.tower.signature:
                return other.coords
            raise ValueError("field elements belong to different towers")
        if isinstance(other, int):
            return self.tower.scalar(other).coords
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FElem(self.tower, self.tower._add(self.coords, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FElem(self.tower, self.tower._sub(self.coords, c))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FElem(self.tower, self.tower._sub(c, self.coords))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FElem(self.tower, self.tower._mul(self.coords, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FElem(self.tower, self.tower._mul(self.coords, self.tower._inv(c)))

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FElem(self.tower, self.tower._mul(c, self.tower._inv(self.coords)))

    def __neg__(self):
        return FElem(self.tower, self.tower._neg(self.coords))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        return FElem(self.tower, self.tower._pow(self.coords, n))

    def inverse(self) -> "FElem":
        return FElem(self.tower, self.tower._inv(self.coords))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def index(self) -> int:
        """Position of this element in the canonical enumeration."""
        idx = 0
        for c in reversed(self.coords):
            idx = idx * self.tower.p + c
        return idx

    def __eq__(self, other):
        if not isinstance(other, FElem):
            return NotImplemented
        return (self.coords == other.coords
                and (self.tower is other.tower
                     or self.tower.signature == other.tower.signature))

    def __hash__(self):
        return hash((self.coords, self.tower._sig_hash))

    def __repr__(self):
        return f"<{format_elem(self)} in {self.tower!r}>"


class FieldTower:
    """GF(p) extended through zero or more canonical polynomial extensions.

    Use :func:`make_tower`, which caches constructions so equal parameters
    share one object.
    """

    __slots__ = ("p", "degrees", "e", "order", "base", "top_degree", "mod_poly",
                 "_table", "_sig", "_sig_hash", "_zero", "_one", "_primitive")

    def __init__(self, p: int, degrees: tuple[int, ...] = ()):
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        degrees = tuple(int(d) for d in degrees)
        if any(d < 1 for d in degrees):
            raise ValueError("extension degrees must be at least 1")
        self.p = p
        self.degrees = degrees
        e = 1
        for d in degrees:
            e *= d
        self.e = e
        self.order = p ** e
        if degrees:
            self.base = make_tower(p, degrees[:-1])
            self.top_degree = degrees[-1]
            self.mod_poly = _first_irreducible(self.base, self.top_degree)
            self._table = None
            self._table = self._build_table()
        else:
            self.base = None
            self.top_degree = 1
            self.mod_poly = None
            self._table = None
        mods = []
        t = self
        while t is not None and t.mod_poly is not None:
            mods.append(tuple(c.coords for c in t.mod_poly))
            t = t.base
        self._sig = (p, degrees, tuple(reversed(mods)))
        self._sig_hash = hash(self._sig)
        self._zero = FElem(self, (0,) * e)
        self._one = FElem(self, (1,) + (0,) * (e - 1))
        self._primitive = None

    # -- identity and pickling ------------------------------------------

    @property
    def signature(self):
        return self._sig

    def __repr__(self):
        if not self.degrees:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"

    def __reduce__(self):
        # route unpickling through the cached factory
        return (make_tower, (self.p, self.degrees))

    # -- elements ---------------------------------------------------------

    @property
    def zero(self) -> FElem:
        return self._zero

    @property
    def one(self) -> FElem:
        return self._one

    def scalar(self, n: int) -> FElem:
        """Image of the integer n under the natural map from Z."""
        return FElem(self, (n % self.p,) + (0,) * (self.e - 1))

    def from_coords(self, coords) -> FElem:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.e:
            raise ValueError(f"expected {self.e} coordinates, got {len(coords)}")
        if any(c < 0 or c >= self.p for c in coords):
            raise ValueError(f"coordinates must lie in [0, {self.p})")
        return FElem(self, coords)

    def element(self, index: int) -> FElem:
        """The index-th element in canonical enumeration order."""
        if not 0 <= index < self.order:
            raise ValueError(f"element index {index} outside [0, {self.order})")
        coords = []
        for _ in range(self.e):
            index, r = divmod(index, self.p)
            coords.append(r)
        return FElem(self, tuple(coords))

    def elements(self, count: int) -> list[FElem]:
        """The first `count` elements in canonical order."""
        if count < 0 or count > self.order:
            raise ValueError(f"cannot list {count} elements of a field with {self.order}")
        return [self.element(i) for i in range(count)]

    def subtower(self, levels: int) -> "FieldTower":
        if not 0 <= levels <= len(self.degrees):
            raise ValueError(f"tower has {len(self.degrees)} levels, not {levels}")
        return make_tower(self.p, self.degrees[:levels])

    def is_prefix_of(self, other: "FieldTower") -> bool:
        n = len(self.degrees)
        return self.p == other.p and other.degrees[:n] == self.degrees

    # -- coordinate arithmetic ---------------------------------------------

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul(self, a, b):
        if self.e == 1:
            return ((a[0] * b[0]) % self.p,)
        acc = [0] * self.e
        table = self._table
        for i, ai in enumerate(a):
            if ai:
                row = table[i]
                for j, bj in enumerate(b):
                    if bj:
                        c = ai * bj
                        for k, v in row[j]:
                            acc[k] += c * v
        p = self.p
        return tuple(x % p for x in acc)

    def _pow(self, a, n: int):
        if n < 0:
            a = self._inv(a)
            n = -n
        result = self._one.coords
        while n:
            if n & 1:
                result = self._mul(result, a)
            n >>= 1
            if n:
                a = self._mul(a, a)
        return result

    def _inv(self, a):
        if not any(a):
            raise ZeroDivisionError(f"division by zero in {self!r}")
        if self.e == 1:
            return (pow(a[0], -1, self.p),)
        return self._pow(a, self.order - 2)

    # -- construction helpers -----------------------------------------------

    def _nested_from_flat(self, flat):
        eb = self.base.e
        return [FElem(self.base, tuple(flat[t * eb:(t + 1) * eb]))
                for t in range(self.top_degree)]

    def _nested_mul(self, fa, fb):
        """Schoolbook product of nested (coefficient-list) forms; build-time only."""
        d = self.top_degree
        zero = self.base.zero
        prod = [zero] * (2 * d - 1)
        for i, ca in enumerate(fa):
            if not ca.is_zero:
                for j, cb in enumerate(fb):
                    if not cb.is_zero:
                        prod[i + j] = prod[i + j] + ca * cb
        mod = self.mod_poly
        for deg in range(2 * d - 2, d - 1, -1):
            c = prod[deg]
            if not c.is_zero:
                for t in range(d):
                    prod[deg - d + t] = prod[deg - d + t] - c * mod[t]
        return prod[:d]

    def _build_table(self):
        # basis_i * basis_j expanded once so multiplication runs on flat vectors
        e = self.e
        rows = []
        for i in range(e):
            unit_i = tuple(1 if t == i else 0 for t in range(e))
            fa = self._nested_from_flat(unit_i)
            row = []
            for j in range(e):
                unit_j = tuple(1 if t == j else 0 for t in range(e))
                fb = self._nested_from_flat(unit_j)
                coeffs = self._nested_mul(fa, fb)
                flat = tuple(c for fe in coeffs for c in fe.coords)
                row.append(tuple((k, v) for k, v in enumerate(flat) if v))
            rows.append(tuple(row))
        return tuple(rows)


@lru_cache(maxsize=None)
def _cached_tower(p: int, degrees: tuple[int, ...]) -> FieldTower:
    return FieldTower(p, degrees)


def make_tower(p: int, degrees=()) -> FieldTower:
    """Deterministically build GF(p) extended by the given degree sequence."""
    return _cached_tower(int(p), tuple(int(d) for d in degrees))


# -- polynomial helpers (little-endian lists of FElem over one field) --------


def _poly_deg(a) -> int:
    for i in range(len(a) - 1, -1, -1):
        if not a[i].is_zero:
            return i
    return -1


def _poly_sub(a, b, field):
    n = max(len(a), len(b))
    zero = field.zero
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else zero
        y = b[i] if i < len(b) else zero
        out.append(x - y)
    return out


def _poly_mod(a, b, field):
    """Remainder of a modulo b (b nonzero), degree < deg b."""
    a = list(a)
    db = _poly_deg(b)
    if db < 0:
        raise ZeroDivisionError("polynomial modulus is zero")
    lead_inv = b[db].inverse()
    da = _poly_deg(a)
    while da >= db:
        f = a[da] * lead_inv
        off = da - db
        for t in range(db + 1):
            if not b[t].is_zero:
                a[off + t] = a[off + t] - f * b[t]
        da = _poly_deg(a)
    rem = a[:db]
    rem.extend([field.zero] * (db - len(rem)))
    return rem


def _poly_mulmod(a, b, mod, field):
    n = len(a) + len(b) - 1
    prod = [field.zero] * max(n, 1)
    for i, ca in enumerate(a):
        if not ca.is_zero:
            for j, cb in enumerate(b):
                if not cb.is_zero:
                    prod[i + j] = prod[i + j] + ca * cb
    return _poly_mod(prod, mod, field)


def _poly_powmod(a, n: int, mod, field):
    result = [field.one]
    a = _poly_mod(a, mod, field)
    while n:
        if n & 1:
            result = _poly_mulmod(result, a, mod, field)
        n >>= 1
        if n:
            a = _poly_mulmod(a, a, mod, field)
    return result


def _poly_gcd(a, b, field):
    a, b = list(a), list(b)
    while _poly_deg(b) >= 0:
        a, b = b, _poly_mod(a, b, field)
    return a


def _is_irreducible(poly, base) -> bool:
    """Whether monic `poly` over `base` has no factor of degree <= deg/2."""
    d = _poly_deg(poly)
    if d < 1:
        return False
    if d == 1:
        return True
    x = [base.zero, base.one]
    h = list(x)
    for _ in range(d // 2):
        h = _poly_powmod(h, base.order, poly, base)
        g = _poly_gcd(poly, _poly_sub(h, x, base), base)
        if _poly_deg(g) > 0:
            return False
    return True


def _first_irreducible(base: FieldTower, d: int):
    """First monic irreducible of degree d over base, canonical coefficient order."""
    q = base.order
    for idx in range(q ** d):
        coeffs = []
        t = idx
        for _ in range(d):
            t, r = divmod(t, q)
            coeffs.append(base.element(r))
        poly = coeffs + [base.one]
        if _is_irreducible(poly, base):
            return tuple(poly)
    raise RuntimeError("no irreducible polynomial found; field arithmetic is broken")


# -- canonical distinguished elements ----------------------------------------


def find_primitive(tower: FieldTower) -> FElem:
    """First element in canonical order whose multiplicative order is |F| - 1."""
    if tower.order < 3:
        raise ValueError("need a field with at least 3 elements")
    if tower._primitive is not None:
        return tower._primitive
    target = tower.order - 1
    checks = [target // r for r in prime_factors(target)]
    one = tower.one
    for idx in range(1, tower.order):
        x = tower.element(idx)
        if all(x ** c != one for c in checks):
            tower._primitive = x
            return x
    raise RuntimeError("no primitive element found; field arithmetic is broken")


def embed(x: FElem, into: FieldTower) -> FElem:
    """Carry x along the canonical inclusion of its tower into `into`.

    The source tower must be a level prefix of the target tower; the
    inclusion pads higher coordinates with zeros and is a field homomorphism.
    """
    src = x.tower
    if src is into:
        return x
    if src.signature == into.signature:
        return FElem(into, x.coords)
    if not src.is_prefix_of(into):
        raise ValueError(f"{src!r} is not a canonical subfield of {into!r}")
    return FElem(into, x.coords + (0,) * (into.e - src.e))


# -- serialization ------------------------------------------------------------


def format_elem(x: FElem) -> str:
    return ",".join(str(c) for c in x.coords)


def parse_elem(text: str, tower: FieldTower) -> FElem:
    try:
        coords = tuple(int(tok) for tok in text.strip().split(","))
    except ValueError as exc:
        raise FormatError(f"bad field element {text!r}") from exc
    if len(coords) != tower.e or any(c < 0 or c >= tower.p for c in coords):
        raise FormatError(f"element {text!r} does not fit {tower!r}")
    return FElem(tower, coords)


def format_tower(tower: FieldTower) -> str:
    degs = ",".join(str(d) for d in tower.degrees)
    polys = []
    for level in range(1, len(tower.degrees) + 1):
        sub = tower.subtower(level)
        polys.append(",".join(str(c) for fe in sub.mod_poly for c in fe.coords))
    return f"GF p={tower.p} degs={degs} mods={';'.join(polys)}"


def parse_tower(line: str) -> FieldTower:
    parts = line.strip().split()
    if len(parts) != 4 or parts[0] != "GF":
        raise FormatError(f"bad tower header: {line!r}")
    fields = {}
    for tok in parts[1:]:
        key, eq, val = tok.partition("=")
        if not eq:
            raise FormatError(f"bad tower header: {line!r}")
        fields[key] = val
    try:
        p = int(fields["p"])
        degs = tuple(int(d) for d in fields["degs"].split(",")) if fields["degs"] else ()
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad tower header: {line!r}") from exc
    if "mods" not in fields:
        raise FormatError(f"bad tower header: {line!r}")
    try:
        tower = make_tower(p, degs)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if format_tower(tower) != line.strip():
        raise FormatError("tower header does not match the canonical construction")
    return tower
