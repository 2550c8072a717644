"""Reading and writing the line-oriented ``.anyon`` model format.

Grammar (one declaration per line, ``#`` starts a comment, tokens are
separated by whitespace)::

    model <name>
    labels <unit> <l2> <l3> ...
    dual <l> <l*>
    fuse <a> <b> -> <c1>[*<m1>] <c2>[*<m2>] ...

The first label is the unit.  Labels without a ``dual`` line are self-dual;
``dual a b`` also sets ``dual(b) = a`` unless ``b`` has its own line.  Fusion
with the unit may be omitted (filled in by the unit law), and a missing
``fuse b a`` line is mirrored from ``fuse a b``.  Mirrored pairs are recorded
in :attr:`ModelDocument.mirrored`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import AnyonError
from .fusion_ring import FusionRing

BUNDLED = ('fibonacci', 'ising', 'moore_read')


@dataclass(frozen=True)
class ParseIssue:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f'{self.line}:{self.column}: {self.message}'


class ModelParseError(AnyonError):
    """Raised by :func:`parse_model`; carries every issue found, not just the first."""

    def __init__(self, issues: list[ParseIssue], source: str | None = None):
        self.issues = list(issues)
        self.source = source
        prefix = f'{source}:' if source else ''
        super().__init__('\n'.join(prefix + str(i) for i in self.issues))


@dataclass(frozen=True)
class ModelDocument:
    name: str
    text: str
    ring: FusionRing
    locations: dict = field(default_factory=dict)
    mirrored: tuple[tuple[int, int], ...] = ()


def _tokenize(line: str) -> list[tuple[str, int]]:
    """Split into (token, 1-based column) pairs, ignoring everything after ``#``."""
    cut = line.find('#')
    if cut >= 0:
        line = line[:cut]
    toks = []
    i, n = 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not line[j].isspace():
            j += 1
        toks.append((line[i:j], i + 1))
        i = j
    return toks


def parse_model(text: str, source: str | None = None) -> ModelDocument:
    """Parse ``.anyon`` text into a :class:`ModelDocument`.

    Raises :class:`ModelParseError` listing every problem with its line and
    column.  Ring axioms (associativity, duality, ...) are *not* checked here;
    use :func:`anyonkit.fusion_ring.verify_ring` for that.
    """
    issues: list[ParseIssue] = []
    name = None
    labels: list[str] | None = None
    locations: dict = {}
    dual_lines: list[tuple[int, list[tuple[str, int]]]] = []
    fuse_lines: list[tuple[int, list[tuple[str, int]]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw)
        if not toks:
            continue
        kw, col = toks[0]
        args = toks[1:]
        if kw == 'model':
            if len(args) != 1:
                issues.append(ParseIssue(lineno, col, 'expected: model <name>'))
            elif name is not None:
                issues.append(ParseIssue(lineno, col, 'duplicate model declaration'))
            else:
                name = args[0][0]
                locations['model'] = lineno
        elif kw == 'labels':
            if labels is not None:
                issues.append(ParseIssue(lineno, col, 'duplicate labels declaration'))
            elif not args:
                issues.append(ParseIssue(lineno, col, 'labels line is empty; the first label is the unit'))
            else:
                seen = set()
                for tok, c in args:
                    if tok in seen:
                        issues.append(ParseIssue(lineno, c, f'label {tok!r} declared twice'))
                    elif tok in ('->',) or '*' in tok:
                        issues.append(ParseIssue(lineno, c, f'invalid label name {tok!r}'))
                    seen.add(tok)
                labels = [t for t, _ in args]
                locations['labels'] = lineno
        elif kw == 'dual':
            if len(args) != 2:
                issues.append(ParseIssue(lineno, col, 'expected: dual <label> <dual label>'))
            else:
                dual_lines.append((lineno, args))
        elif kw == 'fuse':
            if len(args) < 3 or args[2][0] != '->':
                issues.append(ParseIssue(lineno, col, 'expected: fuse <a> <b> -> <c>[*m] ...'))
            else:
                fuse_lines.append((lineno, args))
        else:
            issues.append(ParseIssue(lineno, col, f'unknown keyword {kw!r}'))

    if labels is None:
        issues.append(ParseIssue(1, 1, 'missing labels declaration (the first label is the unit)'))
        raise ModelParseError(issues, source)

    index = {l: i for i, l in enumerate(labels)}
    L = len(labels)

    def lookup(tok: str, lineno: int, col: int) -> int | None:
        if tok not in index:
            issues.append(ParseIssue(lineno, col, f'unknown label {tok!r}'))
            return None
        return index[tok]

    explicit_dual: dict[int, tuple[int, int]] = {}
    for lineno, args in dual_lines:
        a = lookup(args[0][0], lineno, args[0][1])
        b = lookup(args[1][0], lineno, args[1][1])
        if a is None or b is None:
            continue
        if a in explicit_dual and explicit_dual[a][0] != b:
            issues.append(ParseIssue(lineno, args[0][1],
                                     f'conflicting dual for {labels[a]!r} (line {explicit_dual[a][1]})'))
            continue
        explicit_dual[a] = (b, lineno)
        locations[('dual', a)] = lineno
    dual = list(range(L))
    for a, (b, _) in explicit_dual.items():
        dual[a] = b
    for a, (b, _) in explicit_dual.items():
        if b not in explicit_dual:
            dual[b] = a

    rows: dict[tuple[int, int], tuple[np.ndarray, int]] = {}
    for lineno, args in fuse_lines:
        a = lookup(args[0][0], lineno, args[0][1])
        b = lookup(args[1][0], lineno, args[1][1])
        row = np.zeros(L, dtype=np.int64)
        ok = a is not None and b is not None
        for tok, c in args[3:]:
            lab, star, mult = tok.partition('*')
            m = 1
            if star:
                try:
                    m = int(mult)
                except ValueError:
                    issues.append(ParseIssue(lineno, c + len(lab) + 1, f'multiplicity {mult!r} is not an integer'))
                    ok = False
                    continue
                if m <= 0:
                    issues.append(ParseIssue(lineno, c + len(lab) + 1, f'multiplicity must be positive, got {m}'))
                    ok = False
                    continue
            k = lookup(lab, lineno, c)
            if k is None:
                ok = False
                continue
            row[k] += m
        if not ok:
            continue
        if (a, b) in rows:
            prev, prev_line = rows[(a, b)]
            if not np.array_equal(prev, row):
                issues.append(ParseIssue(lineno, args[0][1],
                                         f'fuse {labels[a]} {labels[b]} conflicts with line {prev_line}'))
            continue
        rows[(a, b)] = (row, lineno)
        locations[('fuse', a, b)] = lineno

    if issues:
        raise ModelParseError(issues, source)

    N = np.zeros((L, L, L), dtype=np.int64)
    for (a, b), (row, _) in rows.items():
        N[a, b] = row
    for x in range(L):
        for pair in ((0, x), (x, 0)):
            if pair not in rows:
                N[pair][x] = 1
    mirrored = []
    for (a, b), (row, _) in sorted(rows.items()):
        if (b, a) not in rows and a != 0 and b != 0:
            N[b, a] = row
            mirrored.append((b, a))
    ring = FusionRing(labels, dual, N)
    return ModelDocument(name or 'unnamed', text, ring, locations, tuple(mirrored))


def _rhs(ring: FusionRing, row: np.ndarray) -> str:
    parts = []
    for c in np.flatnonzero(row):
        m = int(row[c])
        parts.append(ring.names[c] if m == 1 else f'{ring.names[c]}*{m}')
    return ' '.join(parts)


def serialize_model(ring: FusionRing, name: str) -> str:
    """Canonical text for a ring; ``parse_model(serialize_model(r, n)).ring == r``."""
    nm = ring.names
    N = ring.N
    lines = [f'model {name}', 'labels ' + ' '.join(nm)]
    for a in ring.labels:
        b = ring.dual(a)
        if b == a:
            continue
        if ring.dual(b) == a and b < a:
            continue  # written as "dual b a"
        lines.append(f'dual {nm[a]} {nm[b]}')
    for a in ring.labels:
        for b in ring.labels:
            row = N[a, b]
            if a == 0 or b == 0:
                x = b if a == 0 else a
                if row.sum() == 1 and row[x] == 1:
                    continue
            elif a > b:
                if np.array_equal(row, N[b, a]):
                    continue
            elif a == b or np.array_equal(row, N[b, a]):
                if not row.any():
                    continue
            lines.append(f'fuse {nm[a]} {nm[b]} -> {_rhs(ring, row)}'.rstrip())
    return '\n'.join(lines) + '\n'


def load_model(path) -> ModelDocument:
    path = Path(path)
    return parse_model(path.read_text(encoding='utf-8'), source=str(path))


def bundled_text(name: str) -> str:
    if name not in BUNDLED:
        raise KeyError(f'no bundled model {name!r}; choose from {", ".join(BUNDLED)}')
    return resources.files('anyonkit').joinpath('models', f'{name}.anyon').read_text(encoding='utf-8')


@functools.lru_cache(maxsize=None)
def _bundled(name: str) -> ModelDocument:
    return parse_model(bundled_text(name), source=f'<bundled {name}>')


def bundled_models() -> dict[str, ModelDocument]:
    """The Fibonacci, Ising and Moore-Read models shipped with the package."""
    return {name: _bundled(name) for name in BUNDLED}


def bundled_ring(name: str) -> FusionRing:
    return _bundled(name).ring
