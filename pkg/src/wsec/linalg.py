"""Dense exact linear algebra over tower fields.

Everything here is plain Gaussian elimination with first-nonzero pivoting;
matrices are immutable and all results are exact.  Rows and columns are
indexed from 0, except thick columns (width-alpha groups) which follow the
1-based numbering used for storage nodes throughout the package.
"""

from __future__ import annotations

from .errors import FormatError, SingularMatrixError
from .fields import (FElem, FieldTower, embed, format_elem, format_tower,
                     parse_elem, parse_tower)

__all__ = [
    "FMatrix",
    "cauchy",
    "format_matrix",
    "null_space",
    "parse_matrix",
    "solve",
    "take_rows",
    "take_thick_cols",
    "vandermonde",
    "vstack",
]


class FMatrix:
    """Immutable dense matrix of field elements."""

    __slots__ = ("tower", "rows", "cols", "data")

    def __init__(self, tower: FieldTower, data, cols: int | None = None):
        data = tuple(tuple(row) for row in data)
        if data:
            width = len(data[0])
            if cols is not None and cols != width:
                raise ValueError(f"declared {cols} columns but rows have {width}")
            cols = width
            for row in data:
                if len(row) != width:
                    raise ValueError("rows have inconsistent lengths")
                for x in row:
                    if not isinstance(x, FElem):
                        raise ValueError("matrix entries must be field elements")
                    if x.tower is not tower and x.tower.signature != tower.signature:
                        raise ValueError("matrix entries belong to a different tower")
        elif cols is None:
            raise ValueError("a matrix with no rows needs an explicit column count")
        self.tower = tower
        self.rows = len(data)
        self.cols = cols
        self.data = data

    # -- builders --------------------------------------------------------

    @classmethod
    def zeros(cls, tower: FieldTower, rows: int, cols: int) -> "FMatrix":
        z = tower.zero
        return cls(tower, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, tower: FieldTower, n: int) -> "FMatrix":
        z, o = tower.zero, tower.one
        return cls(tower, [[o if i == j else z for j in range(n)] for i in range(n)],
                   cols=n)

    # -- access ----------------------------------------------------------

    def __getitem__(self, rc):
        r, c = rc
        return self.data[r][c]

    def row(self, i: int):
        return self.data[i]

    def column(self, j: int):
        return tuple(row[j] for row in self.data)

    def __eq__(self, other):
        if not isinstance(other, FMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self.tower.signature == other.tower.signature
                and self.data == other.data)

    __hash__ = None

    def __repr__(self):
        return f"<FMatrix {self.rows}x{self.cols} over {self.tower!r}>"

    # -- arithmetic --------------------------------------------------------

    def transpose(self) -> "FMatrix":
        return FMatrix(self.tower, list(zip(*self.data)) if self.data else [],
                       cols=self.rows)

    def __matmul__(self, other):
        if not isinstance(other, FMatrix):
            return NotImplemented
        if self.tower.signature != other.tower.signature:
            raise ValueError("matrices live over different towers")
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by "
                             f"{other.rows}x{other.cols}")
        zero = self.tower.zero
        out = []
        for arow in self.data:
            orow = []
            for j in range(other.cols):
                s = zero
                for t in range(self.cols):
                    a = arow[t]
                    if not a.is_zero:
                        b = other.data[t][j]
                        if not b.is_zero:
                            s = s + a * b
                orow.append(s)
            out.append(orow)
        return FMatrix(self.tower, out, cols=other.cols)

    def mul_vec(self, vec) -> tuple:
        vec = tuple(vec)
        if len(vec) != self.cols:
            raise ValueError(f"vector length {len(vec)} does not match {self.cols} columns")
        zero = self.tower.zero
        out = []
        for row in self.data:
            s = zero
            for a, x in zip(row, vec):
                if not a.is_zero and not x.is_zero:
                    s = s + a * x
            out.append(s)
        return tuple(out)

    def scale_column(self, j: int, factor: FElem) -> "FMatrix":
        rows = [list(row) for row in self.data]
        for row in rows:
            row[j] = row[j] * factor
        return FMatrix(self.tower, rows, cols=self.cols)

    def embed_into(self, tower: FieldTower) -> "FMatrix":
        if tower.signature == self.tower.signature:
            return self if tower is self.tower else FMatrix(tower, self.data, cols=self.cols)
        return FMatrix(tower, [[embed(x, tower) for x in row] for row in self.data],
                       cols=self.cols)

    def submatrix(self, row_idx, col_idx) -> "FMatrix":
        rows = [[self.data[r][c] for c in col_idx] for r in row_idx]
        return FMatrix(self.tower, rows, cols=len(tuple(col_idx)))

    # -- elimination -------------------------------------------------------

    def _lists(self):
        return [list(r) for r in self.data]

    def rank(self) -> int:
        return _forward_rank(self._lists())

    def inverse(self) -> "FMatrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        n = self.rows
        one, zero = self.tower.one, self.tower.zero
        m = [list(self.data[i]) + [one if j == i else zero for j in range(n)]
             for i in range(n)]
        pivots = _rref(m)
        core = sum(1 for c in pivots if c < n)
        if core < n:
            raise SingularMatrixError(f"matrix is singular (rank {core} of {n})",
                                      rank=core)
        return FMatrix(self.tower, [row[n:] for row in m], cols=n)


def _forward_rank(m) -> int:
    """Row-echelon rank; destroys m."""
    nr = len(m)
    if not nr:
        return 0
    nc = len(m[0])
    r = 0
    for c in range(nc):
        if r == nr:
            break
        prow = None
        for i in range(r, nr):
            if not m[i][c].is_zero:
                prow = i
                break
        if prow is None:
            continue
        m[r], m[prow] = m[prow], m[r]
        pivinv = m[r][c].inverse()
        row_r = m[r]
        for i in range(r + 1, nr):
            f = m[i][c]
            if not f.is_zero:
                f = f * pivinv
                row_i = m[i]
                for t in range(c, nc):
                    row_i[t] = row_i[t] - f * row_r[t]
        r += 1
    return r


def _rref(m):
    """Reduced row echelon form in place; returns the pivot column list."""
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        prow = None
        for i in range(r, nr):
            if not m[i][c].is_zero:
                prow = i
                break
        if prow is None:
            continue
        m[r], m[prow] = m[prow], m[r]
        inv = m[r][c].inverse()
        m[r] = [inv * v for v in m[r]]
        row_r = m[r]
        for i in range(nr):
            if i != r and not m[i][c].is_zero:
                f = m[i][c]
                row_i = m[i]
                for t in range(c, nc):
                    row_i[t] = row_i[t] - f * row_r[t]
        pivots.append(c)
        r += 1
    return pivots


def solve(matrix: FMatrix, rhs) -> tuple:
    """One particular solution of matrix @ x = rhs, free variables at zero."""
    rhs = tuple(rhs)
    if len(rhs) != matrix.rows:
        raise ValueError("right-hand side length does not match the row count")
    nc = matrix.cols
    m = [list(matrix.data[i]) + [rhs[i]] for i in range(matrix.rows)]
    pivots = _rref(m)
    if any(c == nc for c in pivots):
        raise SingularMatrixError("inconsistent linear system",
                                  rank=sum(1 for c in pivots if c < nc))
    x = [matrix.tower.zero] * nc
    for r, c in enumerate(pivots):
        x[c] = m[r][nc]
    return tuple(x)


def null_space(matrix: FMatrix) -> list[tuple]:
    """Basis of the right null space, one vector per free column."""
    m = matrix._lists()
    pivots = _rref(m)
    pivot_set = set(pivots)
    zero, one = matrix.tower.zero, matrix.tower.one
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        v = [zero] * matrix.cols
        v[free] = one
        for r, c in enumerate(pivots):
            v[c] = -m[r][free]
        basis.append(tuple(v))
    return basis


# -- structured builders -------------------------------------------------


def vandermonde(points, nrows: int) -> FMatrix:
    """Rows 1, x, x^2, ... evaluated at the given points (0^0 taken as 1)."""
    points = tuple(points)
    if not points or nrows < 1:
        raise ValueError("need at least one point and one row")
    tower = points[0].tower
    if len({x.coords for x in points}) != len(points):
        raise ValueError("Vandermonde points must be pairwise distinct")
    rows = [[tower.one] * len(points)]
    for _ in range(1, nrows):
        rows.append([x * b for x, b in zip(rows[-1], points)])
    return FMatrix(tower, rows, cols=len(points))


def cauchy(xs, ys) -> FMatrix:
    """Matrix with entries 1 / (x_i - y_j)."""
    xs, ys = tuple(xs), tuple(ys)
    if not xs or not ys:
        raise ValueError("need nonempty point lists")
    tower = xs[0].tower
    xset = {x.coords for x in xs}
    yset = {y.coords for y in ys}
    if len(xset) != len(xs) or len(yset) != len(ys):
        raise ValueError("Cauchy points must be pairwise distinct")
    if xset & yset:
        raise ValueError("Cauchy row and column points must not coincide")
    rows = [[(x - y).inverse() for y in ys] for x in xs]
    return FMatrix(tower, rows, cols=len(ys))


# -- block operations ------------------------------------------------------


def vstack(*matrices) -> FMatrix:
    if not matrices:
        raise ValueError("nothing to stack")
    first = matrices[0]
    for m in matrices[1:]:
        if m.cols != first.cols:
            raise ValueError("stacked matrices must share the column count")
        if m.tower.signature != first.tower.signature:
            raise ValueError("stacked matrices must share the tower")
    data = [row for m in matrices for row in m.data]
    return FMatrix(first.tower, data, cols=first.cols)


def take_rows(matrix: FMatrix, indices) -> FMatrix:
    """Rows by 0-based index, in the order given."""
    rows = []
    for i in indices:
        if not 0 <= i < matrix.rows:
            raise ValueError(f"row {i} out of range 0..{matrix.rows - 1}")
        rows.append(matrix.data[i])
    return FMatrix(matrix.tower, rows, cols=matrix.cols)


def take_thick_cols(matrix: FMatrix, idx, alpha: int) -> FMatrix:
    """Width-alpha column groups by 1-based group number, in the order given."""
    if alpha < 1 or matrix.cols % alpha:
        raise ValueError("column count is not a multiple of the thick-column width")
    groups = matrix.cols // alpha
    cols = []
    for t in idx:
        if not 1 <= t <= groups:
            raise ValueError(f"thick column {t} out of range 1..{groups}")
        cols.extend(range((t - 1) * alpha, t * alpha))
    rows = [[row[c] for c in cols] for row in matrix.data]
    return FMatrix(matrix.tower, rows, cols=len(cols))


# -- serialization -----------------------------------------------------------


def format_matrix(matrix: FMatrix) -> str:
    lines = [format_tower(matrix.tower), f"{matrix.rows} {matrix.cols}"]
    for row in matrix.data:
        lines.append(" ".join(format_elem(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix_at(lines, pos: int) -> tuple[FMatrix, int]:
    """Parse one matrix starting at lines[pos]; returns it and the next index."""
    if pos >= len(lines):
        raise FormatError("expected a matrix, found end of input")
    tower = parse_tower(lines[pos])
    if pos + 1 >= len(lines):
        raise FormatError("matrix is missing its dimension line")
    dims = lines[pos + 1].split()
    if len(dims) != 2:
        raise FormatError(f"bad matrix dimension line: {lines[pos + 1]!r}")
    try:
        rows, cols = int(dims[0]), int(dims[1])
    except ValueError as exc:
        raise FormatError(f"bad matrix dimension line: {lines[pos + 1]!r}") from exc
    if rows < 0 or cols < 0:
        raise FormatError("matrix dimensions must be nonnegative")
    data = []
    pos += 2
    for _ in range(rows):
        if pos >= len(lines):
            raise FormatError("matrix has fewer rows than declared")
        toks = lines[pos].split()
        if len(toks) != cols:
            raise FormatError(f"matrix row has {len(toks)} entries, expected {cols}")
        data.append([parse_elem(tok, tower) for tok in toks])
        pos += 1
    return FMatrix(tower, data, cols=cols), pos


def parse_matrix(text: str) -> FMatrix:
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    matrix, pos = parse_matrix_at(lines, 0)
    if pos != len(lines):
        raise FormatError("trailing content after matrix")
    return matrix
