"""Letter frequency statistics: rankings, share curves, canonical letter sets,
per-book probabilities and word lengths."""

from __future__ import annotations

import csv
import logging
import statistics
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Mapping, Sequence

from .segmenter import Letter

log = logging.getLogger(__name__)

R_VALUES: tuple[float, ...] = (0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95)


def exact_fraction(r) -> Fraction:
    """Exact rational for a share parameter; ``0.6`` becomes 3/5, not the binary float."""
    if isinstance(r, Fraction):
        return r
    if isinstance(r, int):
        return Fraction(r)
    return Fraction(str(r))


def default_majority(n_books: int) -> int:
    """ceil(0.7 * n_books), computed in integers: 7 of 10, 14 of 20, 3 of 3."""
    return (7 * n_books + 9) // 10


@dataclass(frozen=True)
class FrequencyTable:
    counts: Mapping[str, int]
    total: int
    ranking: tuple[Letter, ...]

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "FrequencyTable":
        kept = {Letter(k): int(v) for k, v in counts.items() if v > 0}
        ranking = tuple(sorted(kept, key=lambda x: (-kept[x], x)))
        return cls(counts=kept, total=sum(kept.values()), ranking=ranking)

    @classmethod
    def from_letters(cls, letters: Iterable[str]) -> "FrequencyTable":
        return cls.from_counts(Counter(letters))

    def __add__(self, other: "FrequencyTable") -> "FrequencyTable":
        merged = Counter(self.counts)
        merged.update(other.counts)
        return FrequencyTable.from_counts(merged)

    def __len__(self) -> int:
        return len(self.ranking)

    def q(self, letter: str) -> float:
        return self.counts.get(letter, 0) / self.total


@dataclass(frozen=True)
class ShareCurve:
    points: tuple[tuple[int, float], ...]

    def share_at(self, n: int) -> float:
        return self.points[n - 1][1]


def share_curve(table: FrequencyTable) -> ShareCurve:
    if table.total <= 0:
        raise ValueError("share curve of an empty frequency table")
    points = []
    running = 0
    for n, letter in enumerate(table.ranking, start=1):
        running += table.counts[letter]
        points.append((n, running / table.total))
    return ShareCurve(tuple(points))


def top_share_set(table: FrequencyTable, r) -> frozenset[Letter]:
    """Shortest prefix of the ranking whose cumulative share is at least *r*."""
    frac = exact_fraction(r)
    if not 0 < frac <= 1:
        raise ValueError(f"share must lie in (0, 1], got {r}")
    if table.total <= 0:
        raise ValueError("top-share set of an empty frequency table")
    target = frac.numerator * table.total
    running = 0
    for n, letter in enumerate(table.ranking, start=1):
        running += table.counts[letter]
        # running / total >= num / den, kept in integers
        if running * frac.denominator >= target:
            return frozenset(table.ranking[:n])
    return frozenset(table.ranking)


@dataclass(frozen=True)
class LetterSetFamily:
    r_values: tuple[float, ...]
    sets: Mapping[float, frozenset[Letter]]
    union_sets: Mapping[float, frozenset[Letter]]
    intersection_sets: Mapping[float, frozenset[Letter]]
    majority_threshold: int | None
    per_book: tuple[Mapping[float, frozenset[Letter]], ...] = field(default=(), repr=False)

    def resolve(self, r) -> float:
        """The stored tier key equal to *r* (tolerating float spelling)."""
        for rv in self.r_values:
            if abs(float(rv) - float(r)) < 1e-12:
                return rv
        raise KeyError(f"r={r} is not one of the tiers {self.r_values}")

    def __getitem__(self, r) -> frozenset[Letter]:
        return self.sets[self.resolve(r)]

    def sizes(self) -> dict[float, int]:
        return {r: len(self.sets[r]) for r in self.r_values}

    def ordered(self, r, probabilities: Mapping[str, float] | None = None) -> list[Letter]:
        """Members of L_r, earliest tier first, then by descending probability."""
        tier_of = {}
        for rv in self.r_values:
            for x in self.sets[rv]:
                tier_of.setdefault(x, rv)
        probabilities = probabilities or {}
        return sorted(self.sets[r], key=lambda x: (tier_of[x], -probabilities.get(x, 0.0), x))


def canonical_sets(
    books: Sequence[FrequencyTable],
    r_values: Sequence[float] = R_VALUES,
    majority: int | None = None,
) -> LetterSetFamily:
    """Majority vote over per-book top-share sets, with union and intersection."""
    if not books:
        raise ValueError("canonical sets need at least one book")
    if majority is None:
        majority = default_majority(len(books))
    if not 1 <= majority <= len(books):
        raise ValueError(f"majority {majority} outside 1..{len(books)}")
    r_values = tuple(r_values)
    per_book = tuple({r: top_share_set(b, r) for r in r_values} for b in books)

    sets, unions, inters = {}, {}, {}
    for r in r_values:
        votes = Counter(x for book_sets in per_book for x in book_sets[r])
        sets[r] = frozenset(x for x, v in votes.items() if v >= majority)
        unions[r] = frozenset(votes)
        inters[r] = frozenset(x for x, v in votes.items() if v == len(books))
    return LetterSetFamily(r_values, sets, unions, inters, majority, per_book)


@dataclass(frozen=True)
class ProbabilityEntry:
    letter: Letter
    p: float
    cv: float
    per_book_q: tuple[float, ...]


@dataclass(frozen=True)
class ProbabilityTable:
    entries: tuple[ProbabilityEntry, ...]
    diagnostics: tuple[str, ...] = ()

    @property
    def p(self) -> dict[Letter, float]:
        return {e.letter: e.p for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)


def probabilities(books: Sequence[FrequencyTable], letters: Iterable[str]) -> ProbabilityTable:
    """Per-book relative frequencies q, their mean p and coefficient of variation.

    The CV uses the population standard deviation over the books.
    """
    if not books:
        raise ValueError("probabilities need at least one book")
    for t, b in enumerate(books):
        if b.total <= 0:
            raise ValueError(f"book {t} has no letters")
    entries, diagnostics = [], []
    for x in letters:
        qs = tuple(b.counts.get(x, 0) / b.total for b in books)
        p = statistics.fmean(qs)
        if p == 0:
            diagnostics.append(f"letter {x} ({_codepoints(x)}) absent from all books")
            cv = 0.0
        else:
            cv = statistics.pstdev(qs) / p
        entries.append(ProbabilityEntry(Letter(x), p, cv, qs))
    entries.sort(key=lambda e: (-e.p, e.letter))
    for msg in diagnostics:
        log.warning(msg)
    return ProbabilityTable(tuple(entries), tuple(diagnostics))


def sanity_ratio(prob: ProbabilityTable | Mapping[str, float], family: LetterSetFamily, r) -> float:
    """Total probability of L_r divided by r; close to 1 for a good table."""
    members = family[r]
    if not members:
        return 0.0
    p = prob.p if isinstance(prob, ProbabilityTable) else prob
    return sum(p.get(x, 0.0) for x in sorted(members)) / float(r)


@dataclass(frozen=True)
class WordLengthStats:
    histogram: dict[int, int]
    words: int
    mean: float | None  # None when there are no words

    @property
    def mode(self) -> int | None:
        if not self.histogram:
            return None
        return max(self.histogram, key=lambda n: (self.histogram[n], -n))


def word_length_stats(words: Iterable[Sequence[str]]) -> WordLengthStats:
    hist = Counter(len(w) for w in words)
    n_words = sum(hist.values())
    if not n_words:
        return WordLengthStats({}, 0, None)
    letters = sum(n * c for n, c in hist.items())
    return WordLengthStats(dict(sorted(hist.items())), n_words, letters / n_words)


def _codepoints(x: str) -> str:
    return " ".join(f"U+{ord(c):04X}" for c in x)


def r_label(r) -> str:
    s = f"{r:.2f}"
    return s if float(s) == float(r) else repr(float(r))


def write_share_curve(curve: ShareCurve, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "share"])
    w.writerows((n, repr(s)) for n, s in curve.points)


def write_ranking(table: FrequencyTable, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["rank", "letter", "codepoints", "count"])
    for i, x in enumerate(table.ranking, start=1):
        w.writerow([i, x, _codepoints(x), table.counts[x]])


def write_word_lengths(stats: WordLengthStats, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["length", "count"])
    w.writerows(stats.histogram.items())


def write_probabilities(prob: ProbabilityTable, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["letter", "codepoints", "p", "cv"])
    for e in prob.entries:
        w.writerow([e.letter, _codepoints(e.letter), repr(e.p), repr(e.cv)])


def write_membership(family: LetterSetFamily, fh: IO[str], order: Sequence[str] | None = None) -> None:
    """0/1 matrix of letter membership in each L_r."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["letter"] + [f"r{r_label(r)}" for r in family.r_values])
    top = family.r_values[-1]
    letters = order if order is not None else family.ordered(top)
    for x in letters:
        w.writerow([x] + [int(x in family.sets[r]) for r in family.r_values])


def write_set_sizes(family: LetterSetFamily, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["r", "N_r", "union", "intersection"])
    for r in family.r_values:
        w.writerow([r_label(r), len(family.sets[r]), len(family.union_sets[r]),
                    len(family.intersection_sets[r])])
