"""Reading, validating and writing letter probability tables.

A table file is UTF-8 with tab-separated rows::

    index<TAB>letter<TAB>codepoints<TAB>probability

where *codepoints* is a space-separated list of ``U+XXXX`` tokens and is
authoritative over the glyph column.  Tier boundaries are comment lines
``# tier r=<value> end=<N>``: the first N rows form the letter set for r.
Other ``#`` lines are ignored.

The reference table shipped with the package has 408 rows and eight tiers.
"""

from __future__ import annotations

import io
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Mapping

from .letterstats import LetterSetFamily, ProbabilityTable, r_label
from .segmenter import Letter, is_valid_letter

_TIER_RE = re.compile(r"^#\s*tier\s+r=(\S+)\s+end=(\S+)\s*$")
_CODEPOINT_RE = re.compile(r"^[Uu]\+([0-9A-Fa-f]{4,6})$")


class TableError(ValueError):
    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(self.diagnostics))


@dataclass(frozen=True)
class TableRow:
    index: int
    glyph: str
    letter: Letter
    probability: float

    @property
    def consistent(self) -> bool:
        """Glyph column encodes exactly the listed codepoints."""
        return self.glyph == self.letter


@dataclass(frozen=True)
class LetterTable:
    rows: tuple[TableRow, ...]
    tiers: tuple[tuple[float, int], ...]
    warnings: tuple[str, ...] = field(default=(), compare=False, repr=False)

    @property
    def tier_sizes(self) -> dict[float, int]:
        return dict(self.tiers)

    @property
    def r_values(self) -> tuple[float, ...]:
        return tuple(r for r, _ in self.tiers)

    @property
    def probabilities(self) -> dict[Letter, float]:
        return {row.letter: row.probability for row in self.rows}

    def tier_end(self, r) -> int:
        for rv, end in self.tiers:
            if abs(rv - float(r)) < 1e-12:
                return end
        raise KeyError(f"unknown tier r={r}; table declares {list(self.r_values)}")

    def to_family(self) -> LetterSetFamily:
        """The tiers as a letter-set family (union and intersection equal the sets)."""
        sets = {r: tier_set(self, r) for r in self.r_values}
        return LetterSetFamily(self.r_values, sets, sets, sets, None)


def tier_set(table: LetterTable, r) -> frozenset[Letter]:
    return frozenset(row.letter for row in table.rows[: table.tier_end(r)])


def consistent_rows(table: LetterTable) -> list[TableRow]:
    return [row for row in table.rows if row.consistent]


def _fmt_codepoints(letter: str) -> str:
    return " ".join(f"U+{ord(c):04X}" for c in letter)


def _check_tiers(tiers: list[tuple[float, int]], n_rows: int) -> list[str]:
    errors = []
    for r, end in tiers:
        if not 0 < r <= 1:
            errors.append(f"tier r={r}: value outside (0, 1]")
        if not 0 <= end <= n_rows:
            errors.append(f"tier r={r}: end {end} outside 0..{n_rows}")
    for (r1, e1), (r2, e2) in zip(tiers, tiers[1:]):
        if r2 <= r1:
            errors.append(f"tier r={r2}: tiers must have strictly increasing r")
        elif e2 < e1:
            errors.append(f"tier r={r2}: end {e2} smaller than end {e1} of tier r={r1}")
    return errors


def _parse(lines, name: str) -> tuple[LetterTable | None, list[str], list[str]]:
    errors: list[str] = []
    warnings: list[str] = []
    tiers: list[tuple[float, int]] = []
    rows: list[TableRow] = []
    seen: dict[str, int] = {}
    n = 0
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            m = _TIER_RE.match(line)
            if m:
                try:
                    tiers.append((float(m.group(1)), int(m.group(2))))
                except ValueError:
                    errors.append(f"line {lineno}: malformed tier record {line!r}")
            elif line.lstrip("# ").startswith("tier"):
                errors.append(f"line {lineno}: malformed tier record {line!r}")
            continue
        n += 1
        parts = line.split("\t")
        if len(parts) != 4:
            errors.append(f"row {n}: expected 4 tab-separated fields, got {len(parts)}")
            continue
        index_s, glyph, cps, prob_s = parts
        row_errors = []
        try:
            index = int(index_s)
            if index != n:
                row_errors.append(f"row {n}: index {index} breaks the consecutive numbering")
        except ValueError:
            row_errors.append(f"row {n}: index {index_s!r} is not an integer")
        codepoints = []
        for tok in cps.split():
            m = _CODEPOINT_RE.match(tok)
            if not m:
                row_errors.append(f"row {n}: malformed codepoint token {tok!r}")
                break
            codepoints.append(int(m.group(1), 16))
        if not cps.split():
            row_errors.append(f"row {n}: empty codepoint sequence")
        letter_text = "".join(map(chr, codepoints))
        if codepoints and len(codepoints) == len(cps.split()) and not is_valid_letter(letter_text):
            row_errors.append(f"row {n}: codepoints {cps} do not form one Devanagari letter")
        try:
            prob = float(prob_s)
            if not 0 < prob < 1:
                row_errors.append(f"row {n}: probability {prob_s} outside (0, 1)")
        except ValueError:
            row_errors.append(f"row {n}: probability {prob_s!r} is not a number")
        if row_errors:
            errors.extend(row_errors)
            continue
        if letter_text in seen:
            errors.append(f"row {n}: duplicate letter {cps} (first at row {seen[letter_text]})")
            continue
        seen[letter_text] = n
        if glyph != letter_text:
            warnings.append(
                f"row {n}: glyph {_fmt_codepoints(glyph) or '<empty>'} disagrees with codepoints {cps}; using codepoints"
            )
        rows.append(TableRow(index, glyph, Letter(letter_text), prob))
    if n == 0:
        errors.append(f"{name}: table has no rows")
    if not tiers:
        errors.append(f"{name}: table declares no tiers")
    errors.extend(_check_tiers(tiers, n))
    if errors:
        return None, errors, warnings
    return LetterTable(tuple(rows), tuple(tiers), tuple(warnings)), errors, warnings


def _read(source) -> tuple[list[str], str]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return fh.readlines(), os.fspath(source)
    return source.readlines(), getattr(source, "name", "<stream>")


def load_table(source) -> LetterTable:
    """Parse a table file (path or text stream); raise TableError on any error."""
    lines, name = _read(source)
    table, errors, _ = _parse(lines, name)
    if errors:
        raise TableError(errors)
    return table


def validate_table(source) -> tuple[LetterTable | None, list[str]]:
    """The parsed table (None if invalid) and every diagnostic, errors first."""
    lines, name = _read(source)
    table, errors, warnings = _parse(lines, name)
    return table, errors + [f"warning: {w}" for w in warnings]


def _fmt_probability(p: float) -> str:
    s = format(p, ".6e")
    return s if float(s) == p else repr(p)


def emit_table(table: LetterTable, sink, title: str | None = None) -> None:
    """Write *table* to a path or text stream; refuses tables that would not load."""
    errors = _check_tiers(list(table.tiers), len(table.rows))
    for i, row in enumerate(table.rows, start=1):
        if row.index != i:
            errors.append(f"row {i}: index {row.index} breaks the consecutive numbering")
        if not 0 < row.probability < 1:
            errors.append(f"row {i}: probability {row.probability} outside (0, 1)")
    if len({row.letter for row in table.rows}) != len(table.rows):
        errors.append("table has duplicate letters")
    if not table.rows or not table.tiers:
        errors.append("table needs rows and tiers")
    if errors:
        raise TableError(errors)

    buf = io.StringIO()
    if title:
        buf.write(f"# {title}\n")
    buf.write("# columns: index, letter, codepoints, probability\n")
    for r, end in table.tiers:
        buf.write(f"# tier r={r_label(r)} end={end}\n")
    for row in table.rows:
        buf.write(f"{row.index}\t{row.glyph}\t{_fmt_codepoints(row.letter)}\t{_fmt_probability(row.probability)}\n")
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sink.write(buf.getvalue())


def build_table(prob: ProbabilityTable, family: LetterSetFamily) -> LetterTable:
    """Table of the largest tier's letters, ordered so each tier is a prefix."""
    p = prob.p
    top = family.r_values[-1]
    order = family.ordered(top, p)
    rows = tuple(
        TableRow(i, x, x, p[x]) for i, x in enumerate(order, start=1) if p.get(x, 0) > 0
    )
    if len(rows) != len(order):
        missing = [x for x in order if p.get(x, 0) <= 0]
        raise TableError([f"letter {_fmt_codepoints(x)} has no probability" for x in missing])
    tiers = tuple((r, len(family.sets[r])) for r in family.r_values)
    return LetterTable(rows, tiers)


def reference_table_path():
    return resources.files(__package__).joinpath("data", "reference_table.tsv")


def reference_table() -> LetterTable:
    with resources.as_file(reference_table_path()) as path:
        return load_table(path)


def tier_sums(table: LetterTable) -> Mapping[float, float]:
    """Total probability of each tier's letters."""
    return {r: sum(row.probability for row in table.rows[:end]) for r, end in table.tiers}
