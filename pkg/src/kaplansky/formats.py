"""Text formats: cycles, morphisms, invariant tables, terminal reps, supports,
decompositions and adapted bases.  Every parser reports line numbers."""

from __future__ import annotations

from typing import Iterator

from .admissible import AdmissibleFamily
from .classify import AdaptedBasis, CellMultiset, symbolic_chain
from .cyclerep import ALEPH0, CycleRep, MorphismFamily, parse_card
from .exactalg import FieldSpec, LinAlgError, Matrix
from .filtration import InvariantTable
from .ordinal import INF, OrdinalError, format_ordinal, parse_height, parse_ordinal
from .terminal import TerminalError, TerminalRep


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    """(line number, tokens) for every non-blank line, comments stripped."""
    for i, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield i, body.split()


class _Reader:
    def __init__(self, text: str):
        self.items = list(_lines(text))
        self.pos = 0
        self.last = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self, what: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.items):
            raise ParseError(self.last + 1, f"unexpected end of input, expected {what}")
        item = self.items[self.pos]
        self.pos += 1
        self.last = item[0]
        return item

    def expect(self, *head: str) -> tuple[int, list[str]]:
        ln, toks = self.next(" ".join(head))
        if toks[:len(head)] != list(head):
            raise ParseError(ln, f"expected {' '.join(head)!r}, got {' '.join(toks)!r}")
        return ln, toks[len(head):]


def _int(ln: int, text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(ln, f"{what} must be an integer, got {text!r}") from None


def parse_field(text: str) -> FieldSpec:
    """``Q``, ``Fp:<p>`` or ``Fp <p>``."""
    text = text.strip()
    if text == "Q":
        return FieldSpec.rationals()
    for sep in (":", " "):
        head, _, p = text.partition(sep)
        if head == "Fp" and p.strip():
            return FieldSpec.prime(int(p))
    raise ValueError(f"unknown field {text!r} (use Q or Fp:<p>)")


def _read_field(r: _Reader) -> FieldSpec:
    ln, toks = r.expect("field")
    try:
        return parse_field(" ".join(toks))
    except (ValueError, LinAlgError) as exc:
        raise ParseError(ln, str(exc)) from None


def _read_matrix(r: _Reader, F: FieldSpec, rows: int, cols: int) -> Matrix:
    """Rows of a matrix; a matrix without columns has no row lines."""
    if cols == 0:
        return Matrix.zeros(F, rows, 0)
    data = []
    for _ in range(rows):
        ln, toks = r.next("a matrix row")
        if len(toks) != cols:
            raise ParseError(ln, f"expected {cols} entries, got {len(toks)}")
        try:
            data.append(tuple(F.parse(a) for a in toks))
        except LinAlgError as exc:
            raise ParseError(ln, str(exc)) from None
    return Matrix(F, rows, cols, tuple(data))


def _write_matrix_rows(M: Matrix) -> list[str]:
    if M.cols == 0:
        return []
    return [" ".join(M.field.format(a) for a in row) for row in M.data]


def _format_card(c) -> str:
    return "inf" if c is ALEPH0 else str(c)


# ---------------------------------------------------------------------------
# cyclerep v1


def write_cyclerep(u: CycleRep) -> str:
    out = ["cyclerep v1", f"field {u.field}", f"n {u.n}", "dims " + " ".join(map(str, u.dims))]
    for k in range(u.n):
        out.append(f"map {k}")
        out.extend(_write_matrix_rows(u.maps[k]))
    if u.saturated:
        out.append("saturated " + " ".join(f"{b}:{_format_card(c)}" for b, c in u.saturated))
    return "\n".join(out) + "\n"


def parse_cyclerep(text: str) -> CycleRep:
    r = _Reader(text)
    r.expect("cyclerep", "v1")
    F = _read_field(r)
    ln, toks = r.expect("n")
    n = _int(ln, toks[0] if toks else "", "n")
    if n < 1:
        raise ParseError(ln, "n must be at least 1")
    ln, toks = r.expect("dims")
    if len(toks) != n:
        raise ParseError(ln, f"expected {n} dimensions, got {len(toks)}")
    dims = [_int(ln, t, "dimension") for t in toks]
    maps = []
    for k in range(n):
        ln, toks = r.expect("map")
        if toks != [str(k)]:
            raise ParseError(ln, f"expected 'map {k}'")
        maps.append(_read_matrix(r, F, dims[(k + 1) % n], dims[k]))
    saturated = []
    if r.peek() is not None:
        ln, toks = r.expect("saturated")
        for tok in toks:
            base, sep, mult = tok.partition(":")
            if not sep:
                raise ParseError(ln, f"saturated entries look like <k>:<mult>, got {tok!r}")
            try:
                saturated.append((_int(ln, base, "base"), parse_card(mult)))
            except ValueError as exc:
                raise ParseError(ln, str(exc)) from None
    if r.peek() is not None:
        raise ParseError(r.peek()[0], "trailing input")
    return CycleRep(F, n, tuple(dims), tuple(maps), tuple(saturated))


# ---------------------------------------------------------------------------
# morphism v1


def write_morphism(phi: MorphismFamily) -> str:
    out = ["morphism v1"]
    for k, P in enumerate(phi.phis):
        out.append(f"phi {k}")
        out.extend(_write_matrix_rows(P))
    return "\n".join(out) + "\n"


def parse_morphism(text: str, source: CycleRep, target: CycleRep) -> MorphismFamily:
    r = _Reader(text)
    r.expect("morphism", "v1")
    phis = []
    for k in range(source.n):
        ln, toks = r.expect("phi")
        if toks != [str(k)]:
            raise ParseError(ln, f"expected 'phi {k}'")
        phis.append(_read_matrix(r, source.field, target.dims[k], source.dims[k]))
    if r.peek() is not None:
        raise ParseError(r.peek()[0], "trailing input")
    return MorphismFamily(source, target, tuple(phis), source.saturated)


# ---------------------------------------------------------------------------
# invariant tables


def write_invariants(t: InvariantTable) -> str:
    rows = [f"kappa {k} {format_ordinal(a)} {c}" for k, a, c in t.entries()]
    return "".join(r + "\n" for r in rows)


def parse_invariants(text: str, n: int) -> InvariantTable:
    fin, inf = {}, {}
    for ln, toks in _lines(text):
        if toks[0] != "kappa" or len(toks) != 4:
            raise ParseError(ln, "expected 'kappa <k> <ordinal> <card>'")
        k = _int(ln, toks[1], "vertex")
        try:
            a = parse_height(toks[2])
            c = parse_card(toks[3])
        except (OrdinalError, ValueError) as exc:
            raise ParseError(ln, str(exc)) from None
        if a is INF:
            inf[k] = c
        else:
            fin[(k, a)] = c
    return InvariantTable(n, fin, inf)


# ---------------------------------------------------------------------------
# terminal v1


def write_terminal(f: TerminalRep) -> str:
    out = ["terminal v1", f"n {f.n}"]
    for k in range(f.n):
        out.append(f"vertex {k} base {f.bases[k]} elems " + " ".join(f.elems[k]))
    for k in range(f.n):
        pairs = " ".join(f"{x}->{y}" for x, y in zip(f.elems[k], f.images[k]))
        out.append(f"map {k}: {pairs}".rstrip())
    return "\n".join(out) + "\n"


def parse_terminal(text: str) -> TerminalRep:
    r = _Reader(text)
    r.expect("terminal", "v1")
    ln, toks = r.expect("n")
    n = _int(ln, toks[0] if toks else "", "n")
    elems, bases, maps = [], [], []
    for k in range(n):
        ln, toks = r.expect("vertex")
        if len(toks) < 4 or toks[0] != str(k) or toks[1] != "base" or toks[3] != "elems":
            raise ParseError(ln, f"expected 'vertex {k} base <id> elems <id>...'")
        base, X = toks[2], toks[4:]
        if base not in X:
            X = [base] + X
        elems.append(X)
        bases.append(base)
    for k in range(n):
        ln, toks = r.expect("map")
        if not toks or toks[0] != f"{k}:":
            raise ParseError(ln, f"expected 'map {k}: ...'")
        m = {}
        for pair in toks[1:]:
            x, sep, y = pair.partition("->")
            if not sep:
                raise ParseError(ln, f"bad map entry {pair!r}")
            m[x] = y
        maps.append(m)
    try:
        return TerminalRep.from_maps(n, elems, bases, maps)
    except TerminalError as exc:
        raise ParseError(r.last, str(exc)) from None


# ---------------------------------------------------------------------------
# support v1


def write_support(fam: AdmissibleFamily) -> str:
    out = ["support v1", f"n {fam.n}"]
    for (k, a), c in sorted(fam.points.items(), key=lambda p: (p[0][0], p[0][1])):
        out.append(f"point {k} {format_ordinal(a)} {_format_card(c)}")
    for (k, d), c in sorted(fam.ladders.items(), key=lambda p: (p[0][0], p[0][1])):
        out.append(f"ladder {k} {format_ordinal(d)} {_format_card(c)}")
    for k, c in sorted(fam.infinite.items()):
        out.append(f"inf {k} {_format_card(c)}")
    return "\n".join(out) + "\n"


def parse_support(text: str) -> AdmissibleFamily:
    r = _Reader(text)
    r.expect("support", "v1")
    ln, toks = r.expect("n")
    n = _int(ln, toks[0] if toks else "", "n")
    points, ladders, infinite = {}, {}, {}
    while r.peek() is not None:
        ln, toks = r.next("a support line")
        try:
            if toks[0] in ("point", "ladder") and len(toks) in (3, 4):
                k = _int(ln, toks[1], "vertex") % n
                a = parse_ordinal(toks[2])
                c = parse_card(toks[3]) if len(toks) == 4 else 1
                (points if toks[0] == "point" else ladders)[(k, a)] = c
            elif toks[0] == "inf" and len(toks) == 3:
                infinite[_int(ln, toks[1], "vertex") % n] = parse_card(toks[2])
            else:
                raise ParseError(ln, f"unknown support line {' '.join(toks)!r}")
        except (OrdinalError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(ln, str(exc)) from None
    fam = AdmissibleFamily(n, points, ladders, infinite)
    try:
        fam.support
    except ValueError as exc:
        raise ParseError(r.last, str(exc)) from None
    return fam


# ---------------------------------------------------------------------------
# reports


def write_decomposition(cells: CellMultiset) -> str:
    rows = [f"cell {b} {i} {c}" for (b, i), c in cells.finite]
    rows += [f"infcell {b} {_format_card(c)}" for b, c in cells.infinite]
    return "".join(r + "\n" for r in rows)


def parse_decomposition(text: str, n: int) -> CellMultiset:
    fin, inf = {}, {}
    for ln, toks in _lines(text):
        if toks[0] == "cell" and len(toks) == 4:
            fin[(_int(ln, toks[1], "base"), _int(ln, toks[2], "size"))] = _int(ln, toks[3], "count")
        elif toks[0] == "infcell" and len(toks) == 3:
            inf[_int(ln, toks[1], "base")] = parse_card(toks[2])
        else:
            raise ParseError(ln, "expected 'cell <base> <size> <count>' or 'infcell <base> <card>'")
    return CellMultiset(n, fin, inf)


def write_adapted_basis(B: AdaptedBasis, field: FieldSpec) -> str:
    rows = []
    for k in range(B.n):
        for name, x in B.vectors[k]:
            rows.append(f"basis {k} {name} : " + " ".join(field.format(a) for a in x))
    for k in range(B.n):
        for name in B.names(k):
            rows.append(f"succ {name} -> {B.successor[name] or 'ZERO'}")
    for b, c in B.symbolic:
        rows.append(f"chain {b} {_format_card(c)} : {symbolic_chain(b, B.n)}")
    return "".join(r + "\n" for r in rows)
