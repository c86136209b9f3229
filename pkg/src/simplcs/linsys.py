"""Linear systems (A, b) over Z_d, the .lcs file format, and built-in systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .zmod import ZModMatrix, span_generates_zd, spans_equal


class RowConditionError(ValueError):
    """A system violates the generate-Z_d / distinct-spans row conditions."""


@dataclass(frozen=True)
class LinearSystem:
    """Ax = b over Z_d, with optional row/column labels (e.g. simplex tokens)."""

    matrix: ZModMatrix
    rhs: tuple[int, ...]
    row_labels: Optional[tuple] = None
    col_labels: Optional[tuple] = None

    def __post_init__(self):
        if len(self.rhs) != self.matrix.num_rows:
            raise ValueError("rhs length must match row count")
        object.__setattr__(self, "rhs",
                           tuple(v % self.modulus for v in self.rhs))
        if self.row_labels is not None and len(self.row_labels) != self.matrix.num_rows:
            raise ValueError("row label count mismatch")
        if self.col_labels is not None and len(self.col_labels) != self.matrix.num_cols:
            raise ValueError("column label count mismatch")

    @property
    def modulus(self) -> int:
        return self.matrix.modulus

    @property
    def num_rows(self) -> int:
        return self.matrix.num_rows

    @property
    def num_cols(self) -> int:
        return self.matrix.num_cols

    def row_condition_violations(self) -> list[str]:
        """Rows whose span is not Z_d, and row pairs with equal spans."""
        out = []
        m, d = self.matrix, self.modulus
        for i in range(m.num_rows):
            if not span_generates_zd(m.row(i), d):
                out.append(f"row {i} does not generate Z_{d}")
        for i in range(m.num_rows):
            for j in range(i + 1, m.num_rows):
                if spans_equal(m.row(i), m.row(j), d):
                    out.append(f"rows {i} and {j} have equal spans")
        return out

    def check_row_conditions(self) -> None:
        bad = self.row_condition_violations()
        if bad:
            raise RowConditionError("; ".join(bad))

    def reduce_mod(self, new_modulus: int) -> "LinearSystem":
        """Entrywise reduction Z_d -> Z_{d'} (d' dividing d)."""
        if self.modulus % new_modulus:
            raise ValueError("new modulus must divide the old one")
        return LinearSystem(
            ZModMatrix([[e % new_modulus for e in row] for row in self.matrix.rows],
                       new_modulus, num_cols=self.num_cols),
            tuple(v % new_modulus for v in self.rhs),
            self.row_labels, self.col_labels)


def make_system(rows: Sequence[Sequence[int]], rhs: Sequence[int], d: int,
                row_labels=None, col_labels=None) -> LinearSystem:
    ncols = len(rows[0]) if rows else (len(col_labels) if col_labels else 0)
    return LinearSystem(ZModMatrix(rows, d, num_cols=ncols), tuple(rhs),
                        tuple(row_labels) if row_labels is not None else None,
                        tuple(col_labels) if col_labels is not None else None)


# ------------------------------------------------------------------ .lcs I/O

def parse_lcs(text: str) -> LinearSystem:
    """`.lcs`: line 1 `d r c`, then r matrix rows, final line b; `#` comments."""
    lines = []
    for num, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#")[0].strip()
        if stripped:
            lines.append((num, stripped))
    if not lines:
        raise ValueError("empty .lcs input")
    num, head = lines[0]
    try:
        d, r, c = map(int, head.split())
    except ValueError as exc:
        raise ValueError(f"line {num}: expected `d r c`") from exc
    if len(lines) != r + 2:
        raise ValueError(f"expected {r} matrix rows plus a b line, "
                         f"got {len(lines) - 1} data lines")
    rows = []
    for num, ln in lines[1:r + 1]:
        vals = ln.split()
        if len(vals) != c:
            raise ValueError(f"line {num}: expected {c} entries, got {len(vals)}")
        try:
            rows.append([int(v) for v in vals])
        except ValueError as exc:
            raise ValueError(f"line {num}: non-integer entry") from exc
    num, bline = lines[r + 1]
    bvals = bline.split()
    if len(bvals) != r:
        raise ValueError(f"line {num}: b needs {r} entries, got {len(bvals)}")
    return make_system(rows, [int(v) for v in bvals], d)


def load_lcs(path: str) -> LinearSystem:
    with open(path) as fh:
        return parse_lcs(fh.read())


def write_lcs(sys_: LinearSystem) -> str:
    lines = [f"{sys_.modulus} {sys_.num_rows} {sys_.num_cols}"]
    lines += [" ".join(map(str, row)) for row in sys_.matrix.rows]
    lines.append(" ".join(map(str, sys_.rhs)))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- builtins

K33_COLUMNS = tuple((i, j) for i in (1, 2, 3) for j in (4, 5, 6))


def k33_system(b: Sequence[int], d: int = 2) -> LinearSystem:
    """Incidence system of the complete bipartite graph K_{3,3}.

    Columns are the nine edges (i, j), rows the six graph vertices; row v has
    ones on the edges at v.
    """
    b = tuple(b)
    if len(b) != 6:
        raise ValueError("K_{3,3} takes six b values")
    rows = []
    row_labels = []
    for v in (1, 2, 3, 4, 5, 6):
        rows.append([1 if v in edge else 0 for edge in K33_COLUMNS])
        row_labels.append(v)
    return make_system(rows, b, d, row_labels=row_labels, col_labels=K33_COLUMNS)


def two_vertex_system(b: Sequence[int], d: int = 2) -> LinearSystem:
    """The 2x2 system [[1,1],[1,0]] x = b."""
    b = tuple(b)
    if len(b) != 2:
        raise ValueError("this system takes two b values")
    return make_system([[1, 1], [1, 0]], b, d,
                       col_labels=("v1", "v2"))


def single_vertex_system(b: int, d: int = 2) -> LinearSystem:
    return make_system([[1]], [b], d, col_labels=("v",))
