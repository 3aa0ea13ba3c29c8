"""Outer coset codes that hide file groups from a limited eavesdropper.

A coset code stores the message S as the syndrome of a stored word X: encode
picks X with H X = S, decode recomputes S = H X.  Both generators produced
here use a square invertible H over an extension field of GF(q), so encoding
is deterministic; arbitrary square CUSTOM matrices and a plain IDENTITY
control (no protection at all) round out the family.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import FormatError
from .fields import (FElem, FieldTower, embed, find_primitive, format_elem,
                     make_tower, parse_elem, prime_factors, prime_power)
from .linalg import (FMatrix, cauchy, format_matrix, null_space,
                     parse_matrix_at, solve, vandermonde)

CONSTRUCT1 = "CONSTRUCT1"
CONSTRUCT2 = "CONSTRUCT2"
IDENTITY = "IDENTITY"
CUSTOM = "CUSTOM"
_TAGS = (CONSTRUCT1, CONSTRUCT2, IDENTITY, CUSTOM)

DEFAULT_MAX_FIELD = 1 << 25

__all__ = [
    "CONSTRUCT1", "CONSTRUCT2", "CUSTOM", "DEFAULT_MAX_FIELD", "IDENTITY",
    "CosetCode", "construct1", "construct2", "construct_identity",
    "format_coset", "format_vector", "parse_coset", "parse_vector",
]


@dataclass
class CosetCode:
    """An outer code given by its parity-check style matrix H (Bs x B)."""

    construction: str
    n: int
    k: int
    d: int
    alpha: int
    q: int
    qr: int
    m: int
    omega: FElem
    h: FMatrix
    _hinv: FMatrix | None = field(default=None, repr=False, compare=False)

    @property
    def B(self) -> int:
        return self.h.cols

    @property
    def Bs(self) -> int:
        return self.h.rows

    @property
    def tower(self) -> FieldTower:
        return self.h.tower

    def qr_tower(self) -> FieldTower:
        """The intermediate field GF(q_r) inside the top tower."""
        if self.m == 1:
            return self.tower
        return self.tower.subtower(len(self.tower.degrees) - 1)

    def h_inverse(self) -> FMatrix:
        if self._hinv is None:
            self._hinv = self.h.inverse()
        return self._hinv

    def encode(self, message, seed: int = 0) -> tuple:
        """Pick a stored word X with H X = message.

        Square H makes this deterministic; otherwise the null-space component
        is drawn uniformly from the generator seeded with `seed`.
        """
        message = _check_vector(self.tower, message, self.Bs, "message")
        if self.Bs == self.B:
            return self.h_inverse().mul_vec(message)
        x = list(solve(self.h, message))
        rng = random.Random(seed)
        for vec in null_space(self.h):
            c = self.tower.element(rng.randrange(self.tower.order))
            if not c.is_zero:
                x = [a + c * b for a, b in zip(x, vec)]
        return tuple(x)

    def decode(self, stored) -> tuple:
        """Recover the message as the syndrome H X."""
        stored = _check_vector(self.tower, stored, self.B, "stored word")
        return self.h.mul_vec(stored)


def _check_vector(tower, vec, length, what):
    vec = tuple(vec)
    if len(vec) != length:
        raise ValueError(f"{what} must have {length} symbols, got {len(vec)}")
    for x in vec:
        if not isinstance(x, FElem) or (
                x.tower is not tower and x.tower.signature != tower.signature):
            raise ValueError(f"{what} symbols must lie in {tower!r}")
    return vec


def _check_params(n, k, d, alpha, q):
    if k < 2:
        raise ValueError("constructions need k >= 2")
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if n < k:
        raise ValueError("need n >= k")
    if not k - 1 <= d <= n - 1:
        raise ValueError("need k-1 <= d <= n-1")
    prime_power(q)


def _build_towers(q, min_qr, m, max_field):
    """Pick q_r = q^t with q_r >= min_qr and build GF(p) -> GF(q_r) -> top."""
    p, s = prime_power(q)
    t = 1
    while q ** t < min_qr:
        t += 1
    qr = q ** t
    u = s * t
    e = u * m
    if p ** e > max_field:
        raise ValueError(f"top field GF({p}^{e}) exceeds the size cap {max_field}")
    degs = ([u] if u > 1 else []) + ([m] if m > 1 else [])
    top = make_tower(p, degs)
    qr_tower = make_tower(p, [u] if u > 1 else [])
    return qr, top, qr_tower


def construct1(n: int, k: int, d: int, alpha: int, q: int,
               max_field: int = DEFAULT_MAX_FIELD) -> CosetCode:
    """Power-table outer code: 1-weakly secure against ell = k - 1 observed nodes.

    H is B x B with h[i][j] = beta_j^(i-1), where every alpha-th column also
    carries the factor omega^(j/alpha) for a primitive omega of the top field
    GF(q_r^(k+1)).  The beta_j are the first B nonzero elements of GF(q_r),
    q_r being the smallest power of q exceeding B (so B nonzero values exist).
    """
    _check_params(n, k, d, alpha, q)
    b_total = k * alpha
    qr, top, qr_tower = _build_towers(q, b_total + 1, k + 1, max_field)
    betas = [embed(qr_tower.element(i), top) for i in range(1, b_total + 1)]
    omega = find_primitive(top)
    vm = vandermonde(betas, b_total)
    scale = [omega ** (j // alpha) if j % alpha == 0 else top.one
             for j in range(1, b_total + 1)]
    rows = [[x * s for x, s in zip(row, scale)] for row in vm.data]
    h = FMatrix(top, rows, cols=b_total)
    return CosetCode(CONSTRUCT1, n, k, d, alpha, q, qr, k + 1, omega, h)


def construct2(n: int, k: int, d: int, alpha: int, q: int,
               max_field: int = DEFAULT_MAX_FIELD) -> CosetCode:
    """Cauchy outer code: (B - alpha)-weakly secure against one observed node.

    H = H' W' where H' is the B x B Cauchy matrix over GF(q_r) built from the
    first 2B canonical elements (q_r the smallest power of q at or above 2B)
    and W' is the identity with its first alpha columns scaled by 1/omega,
    omega primitive in the top field GF(q_r^(alpha+1)).
    """
    _check_params(n, k, d, alpha, q)
    b_total = k * alpha
    qr, top, qr_tower = _build_towers(q, 2 * b_total, alpha + 1, max_field)
    xs = [qr_tower.element(i) for i in range(b_total)]
    ys = [qr_tower.element(i) for i in range(b_total, 2 * b_total)]
    hprime = cauchy(xs, ys).embed_into(top)
    omega = find_primitive(top)
    winv = omega.inverse()
    wprime = FMatrix(top, [[(winv if j < alpha else top.one) if i == j else top.zero
                            for j in range(b_total)] for i in range(b_total)],
                     cols=b_total)
    h = hprime @ wprime
    return CosetCode(CONSTRUCT2, n, k, d, alpha, q, qr, alpha + 1, omega, h)


def construct_identity(n: int, k: int, d: int, alpha: int, q: int) -> CosetCode:
    """Identity outer code: stores files verbatim.  Negative control only."""
    _check_params(n, k, d, alpha, q)
    p, s = prime_power(q)
    top = make_tower(p, [s] if s > 1 else [])
    omega = find_primitive(top) if top.order >= 3 else top.one
    b_total = k * alpha
    return CosetCode(IDENTITY, n, k, d, alpha, q, q, 1, omega,
                     FMatrix.identity(top, b_total))


# -- serialization -----------------------------------------------------------

_HEAD_KEYS = ("construction", "n", "k", "d", "alpha", "q", "qr", "m")


def format_coset(code: CosetCode) -> str:
    head = (f"COSET construction={code.construction} n={code.n} k={code.k} "
            f"d={code.d} alpha={code.alpha} q={code.q} qr={code.qr} m={code.m}")
    return head + "\n" + format_elem(code.omega) + "\n" + format_matrix(code.h)


def parse_coset(text: str) -> CosetCode:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or not lines[0].startswith("COSET "):
        raise FormatError("missing COSET header")
    fields_ = {}
    for tok in lines[0].split()[1:]:
        key, eq, val = tok.partition("=")
        if not eq:
            raise FormatError(f"bad COSET header token {tok!r}")
        fields_[key] = val
    if set(fields_) != set(_HEAD_KEYS):
        raise FormatError("COSET header must carry exactly "
                          + ", ".join(_HEAD_KEYS))
    tag = fields_["construction"]
    if tag not in _TAGS:
        raise FormatError(f"unknown construction tag {tag!r}")
    try:
        n, k, d = int(fields_["n"]), int(fields_["k"]), int(fields_["d"])
        alpha, q = int(fields_["alpha"]), int(fields_["q"])
        qr, m = int(fields_["qr"]), int(fields_["m"])
    except ValueError as exc:
        raise FormatError("non-integer COSET header field") from exc
    if len(lines) < 3:
        raise FormatError("COSET file is truncated")
    h, pos = parse_matrix_at(lines, 2)
    if pos != len(lines):
        raise FormatError("trailing content after coset code")
    omega = parse_elem(lines[1], h.tower)
    code = CosetCode(tag, n, k, d, alpha, q, qr, m, omega, h)
    _validate_parsed(code)
    return code


def _validate_parsed(code: CosetCode) -> None:
    if code.tower.order != code.qr ** code.m:
        raise FormatError("tower size disagrees with qr and m")
    p, s = prime_power(code.q)
    if code.tower.p != p:
        raise FormatError("tower characteristic disagrees with q")
    if code.construction in (CONSTRUCT1, CONSTRUCT2, IDENTITY):
        if code.Bs != code.B or code.B != code.k * code.alpha:
            raise FormatError("matrix shape disagrees with k and alpha")
    if code.Bs > code.B:
        raise FormatError("coset matrix cannot have more rows than columns")
    # omega must generate the multiplicative group (identity codes over GF(2)
    # are the one case with no generator of order >= 2)
    target = code.tower.order - 1
    one = code.tower.one
    if target >= 2:
        for r in prime_factors(target):
            if code.omega ** (target // r) == one:
                raise FormatError("omega is not primitive in the top field")
        if code.omega ** target != one:
            raise FormatError("omega is not primitive in the top field")


def format_vector(vec) -> str:
    """Serialize a symbol vector as a one-row matrix."""
    vec = tuple(vec)
    if not vec:
        raise ValueError("cannot serialize an empty vector")
    return format_matrix(FMatrix(vec[0].tower, [vec], cols=len(vec)))


def parse_vector(text: str) -> tuple:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    m, pos = parse_matrix_at(lines, 0)
    if pos != len(lines):
        raise FormatError("trailing content after vector")
    if m.rows != 1:
        raise FormatError(f"expected a one-row vector, got {m.rows} rows")
    return m.data[0]
