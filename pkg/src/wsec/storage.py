"""Inner storage codes: a striped systematic MDS array code over GF(q).

Each of the n nodes stores alpha symbols of a length-B codeword X, described
by an alpha x B generator block G_i (node symbols are G_i X).  The first k
nodes are systematic; parity node j carries scaled identity blocks
[c_j1 I | ... | c_jk I] with Cauchy coefficients, which gives the two
properties everything downstream relies on: any k nodes reconstruct X, and
the first thick column of every parity block is invertible.  Repair
parameters (d, beta) travel as metadata only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FormatError, SingularMatrixError
from .fields import FElem, FieldTower, make_tower, prime_power
from .linalg import (FMatrix, cauchy, format_matrix, parse_matrix_at,
                     take_thick_cols, vstack)

__all__ = [
    "EavesdropView", "StorageCode", "StorageCodeSpec", "StructureReport",
    "bounds_from_params", "capacity_bounds", "eavesdrop_view", "format_storage",
    "make_striped_mds", "parse_storage", "reconstruct", "storage_field",
    "storage_encode", "verify_structure",
]


@dataclass(frozen=True)
class StorageCodeSpec:
    """Parameters of an (n, k, d, alpha, beta) array code over GF(q)."""

    n: int
    k: int
    d: int
    alpha: int
    beta: int
    q: int

    def __post_init__(self):
        if self.k < 1 or self.n < self.k:
            raise ValueError("need 1 <= k <= n")
        if self.alpha < 1 or self.beta < 1:
            raise ValueError("alpha and beta must be at least 1")
        if not self.k - 1 <= self.d <= self.n - 1:
            raise ValueError("need k-1 <= d <= n-1")
        prime_power(self.q)

    @property
    def B(self) -> int:
        return self.k * self.alpha


class StorageCode:
    """A concrete code: one generator block per node."""

    __slots__ = ("spec", "node_gens")

    def __init__(self, spec: StorageCodeSpec, node_gens):
        node_gens = tuple(node_gens)
        if len(node_gens) != spec.n:
            raise ValueError(f"expected {spec.n} node generators, got {len(node_gens)}")
        field = node_gens[0].tower
        if field.order != spec.q:
            raise ValueError(f"node generators must live over GF({spec.q})")
        for g in node_gens:
            if g.rows != spec.alpha or g.cols != spec.B:
                raise ValueError("node generators must be alpha x B")
            if g.tower.signature != field.signature:
                raise ValueError("node generators must share one field")
        self.spec = spec
        self.node_gens = node_gens

    @property
    def field(self) -> FieldTower:
        return self.node_gens[0].tower

    def node(self, i: int) -> FMatrix:
        """Generator block of node i (1-based)."""
        if not 1 <= i <= self.spec.n:
            raise ValueError(f"node {i} out of range 1..{self.spec.n}")
        return self.node_gens[i - 1]

    def stacked(self, nodes) -> FMatrix:
        return vstack(*[self.node(i) for i in nodes])

    def __eq__(self, other):
        if not isinstance(other, StorageCode):
            return NotImplemented
        return self.spec == other.spec and self.node_gens == other.node_gens

    __hash__ = None


@dataclass(frozen=True)
class EavesdropView:
    """The stacked generator rows an adversary observing `nodes` sees."""

    nodes: tuple[int, ...]
    gprime: FMatrix

    @property
    def mu(self) -> int:
        return self.gprime.rows


@dataclass(frozen=True)
class StructureReport:
    systematic_ok: bool
    reconstruction_ok: bool
    parity_blocks_ok: bool
    failures: tuple = ()

    @property
    def ok(self) -> bool:
        return self.systematic_ok and self.reconstruction_ok and self.parity_blocks_ok


def storage_field(q: int) -> FieldTower:
    p, s = prime_power(q)
    return make_tower(p, [s] if s > 1 else [])


def make_striped_mds(spec: StorageCodeSpec) -> StorageCode:
    """Build the striped systematic MDS code for `spec`.

    Needs q >= n so the Cauchy coefficient matrix has n distinct points
    (n - k row points followed by k column points, disjoint by construction).
    """
    if spec.q < spec.n:
        raise ValueError(f"q={spec.q} too small: need q >= n={spec.n} "
                         "distinct Cauchy points")
    field = storage_field(spec.q)
    a, b_total = spec.alpha, spec.B
    zero, one = field.zero, field.one
    gens = []
    for i in range(1, spec.k + 1):
        rows = [[one if c == (i - 1) * a + r else zero for c in range(b_total)]
                for r in range(a)]
        gens.append(FMatrix(field, rows, cols=b_total))
    if spec.n > spec.k:
        xs = field.elements(spec.n - spec.k)
        ys = [field.element(t) for t in range(spec.n - spec.k, spec.n)]
        coeff = cauchy(xs, ys)
        for j in range(spec.n - spec.k):
            rows = []
            for r in range(a):
                row = [zero] * b_total
                for t in range(spec.k):
                    row[t * a + r] = coeff[j, t]
                rows.append(row)
            gens.append(FMatrix(field, rows, cols=b_total))
    return StorageCode(spec, gens)


def storage_encode(code: StorageCode, stored) -> list[tuple]:
    """Split the codeword into the n per-node share vectors."""
    stored = tuple(stored)
    if len(stored) != code.spec.B:
        raise ValueError(f"codeword must have {code.spec.B} symbols")
    tower = stored[0].tower
    return [g.embed_into(tower).mul_vec(stored) for g in code.node_gens]


def reconstruct(code: StorageCode, nodes, shares) -> tuple:
    """Recover the codeword from the shares of any k distinct nodes."""
    nodes = tuple(nodes)
    shares = [tuple(s) for s in shares]
    if len(nodes) != code.spec.k or len(set(nodes)) != code.spec.k:
        raise ValueError(f"need exactly k={code.spec.k} distinct nodes")
    if len(shares) != len(nodes):
        raise ValueError("one share vector per node required")
    for s in shares:
        if len(s) != code.spec.alpha:
            raise ValueError(f"each share carries alpha={code.spec.alpha} symbols")
    tower = shares[0][0].tower
    stack = vstack(*[code.node(i).embed_into(tower) for i in nodes])
    try:
        inv = stack.inverse()
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"nodes {nodes} cannot reconstruct: generator stack is singular",
            rank=exc.rank) from exc
    flat = [sym for share in shares for sym in share]
    return inv.mul_vec(flat)


def eavesdrop_view(code: StorageCode, nodes) -> EavesdropView:
    """Stack the generator blocks of the observed nodes in ascending order."""
    nodes = tuple(sorted(nodes))
    if len(set(nodes)) != len(nodes):
        raise ValueError("observed nodes must be distinct")
    for i in nodes:
        if not 1 <= i <= code.spec.n:
            raise ValueError(f"node {i} out of range 1..{code.spec.n}")
    if not nodes:
        gprime = FMatrix(code.field, [], cols=code.spec.B)
    else:
        gprime = code.stacked(nodes)
    return EavesdropView(nodes, gprime)


def verify_structure(code: StorageCode) -> StructureReport:
    """Check the three facts the security analysis depends on.

    (a) nodes 1..k are systematic, (b) every k-subset of generator blocks
    stacks to an invertible matrix, (c) the first thick column of every
    parity block is invertible.
    """
    spec = code.spec
    field = code.field
    a = spec.alpha
    failures = []
    ident = FMatrix.identity(field, a)
    zeros = FMatrix.zeros(field, a, a)
    systematic_ok = True
    for i in range(1, spec.k + 1):
        g = code.node(i)
        for t in range(1, spec.k + 1):
            want = ident if t == i else zeros
            if take_thick_cols(g, [t], a) != want:
                systematic_ok = False
                failures.append(("systematic", (i, t)))
                break
    reconstruction_ok = True
    for subset in itertools.combinations(range(1, spec.n + 1), spec.k):
        if code.stacked(subset).rank() != spec.B:
            reconstruction_ok = False
            failures.append(("reconstruction", subset))
    parity_blocks_ok = True
    for j in range(spec.k + 1, spec.n + 1):
        if take_thick_cols(code.node(j), [1], a).rank() != a:
            parity_blocks_ok = False
            failures.append(("parity_block", j))
    return StructureReport(systematic_ok, reconstruction_ok, parity_blocks_ok,
                           tuple(failures))


def bounds_from_params(k: int, d: int, alpha: int, beta: int, ell: int) -> tuple[int, int]:
    """Capacity ceilings (total files, securable files) for an ell-eavesdropper."""
    if k < 1 or alpha < 1 or beta < 1:
        raise ValueError("k, alpha and beta must be at least 1")
    if d < k - 1:
        raise ValueError("need d >= k-1")
    if not 0 <= ell < k:
        raise ValueError("eavesdropper strength must satisfy 0 <= l < k")
    terms = [min(alpha, (d - i) * beta) for i in range(k)]
    return sum(terms), sum(terms[ell:])


def capacity_bounds(spec: StorageCodeSpec, ell: int) -> tuple[int, int]:
    return bounds_from_params(spec.k, spec.d, spec.alpha, spec.beta, ell)


# -- serialization -----------------------------------------------------------


def format_storage(code: StorageCode) -> str:
    s = code.spec
    head = f"STORE n={s.n} k={s.k} d={s.d} alpha={s.alpha} beta={s.beta} q={s.q}"
    return head + "\n" + "".join(format_matrix(g) for g in code.node_gens)


def parse_storage(text: str) -> StorageCode:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or not lines[0].startswith("STORE "):
        raise FormatError("missing STORE header")
    fields_ = {}
    for tok in lines[0].split()[1:]:
        key, eq, val = tok.partition("=")
        if not eq:
            raise FormatError(f"bad STORE header token {tok!r}")
        fields_[key] = val
    keys = ("n", "k", "d", "alpha", "beta", "q")
    if set(fields_) != set(keys):
        raise FormatError("STORE header must carry exactly " + ", ".join(keys))
    try:
        spec = StorageCodeSpec(**{key: int(fields_[key]) for key in keys})
    except ValueError as exc:
        raise FormatError(f"bad STORE header: {exc}") from exc
    gens = []
    pos = 1
    for _ in range(spec.n):
        g, pos = parse_matrix_at(lines, pos)
        gens.append(g)
    if pos != len(lines):
        raise FormatError("trailing content after storage code")
    try:
        return StorageCode(spec, gens)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
