"""Shannon entropy of finite distributions and k-block entropies of letter streams.

``E_k`` is the entropy of the empirical distribution of the ``s - k + 1``
overlapping k-blocks of a stream of ``s`` symbols, with ``E_0 = 0``.  The
k-gram entropy is ``F_k = E_k - E_{k-1}``.  For a corpus, ``E_k`` is averaged
over books first and ``F_k`` is the difference of the averages.
"""

from __future__ import annotations

import csv
import itertools
import math
import statistics
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .approximator import PLACEHOLDER, check_placeholder
from .letterstats import LetterSetFamily, r_label

LN2 = math.log(2.0)
NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class FiniteDistribution:
    weights: tuple[float, ...]
    labels: tuple[Hashable, ...] | None = None

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise ValueError("negative weight in distribution")
        if not self.weights or abs(math.fsum(self.weights) - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"weights sum to {math.fsum(self.weights)!r}, not 1")
        if self.labels is not None and len(self.labels) != len(self.weights):
            raise ValueError("labels and weights differ in length")

    @classmethod
    def from_mapping(cls, probs: Mapping[Hashable, float]) -> "FiniteDistribution":
        return cls(tuple(float(v) for v in probs.values()), tuple(probs))

    @classmethod
    def from_counts(cls, counts: Mapping[Hashable, float] | Sequence[float]) -> "FiniteDistribution":
        """Normalize nonnegative counts (or unnormalized weights)."""
        labels = tuple(counts) if isinstance(counts, Mapping) else None
        values = list(counts.values()) if isinstance(counts, Mapping) else list(counts)
        if any(v < 0 for v in values):
            raise ValueError("negative weight in distribution")
        total = math.fsum(values)
        if total <= 0:
            raise ValueError("counts sum to zero")
        return cls(tuple(v / total for v in values), labels)

    def as_dict(self) -> dict:
        labels = self.labels if self.labels is not None else range(len(self.weights))
        return dict(zip(labels, self.weights))


def _as_distribution(d) -> FiniteDistribution:
    if isinstance(d, FiniteDistribution):
        return d
    if isinstance(d, Mapping):
        return FiniteDistribution.from_mapping(d)
    return FiniteDistribution(tuple(float(w) for w in d))


def shannon_entropy(d: FiniteDistribution | Mapping[Hashable, float] | Sequence[float]) -> float:
    """Entropy in bits, with 0 log 0 = 0."""
    d = _as_distribution(d)
    h = -math.fsum(p * math.log(p) for p in d.weights if p > 0) / LN2
    return h if h > 0 else 0.0


def _rows(joint) -> dict[Hashable, list[float]]:
    if isinstance(joint, FiniteDistribution):
        if joint.labels is None:
            raise ValueError("joint distribution needs (x, y) labels")
        joint = joint.as_dict()
    rows: dict[Hashable, list[float]] = {}
    if isinstance(joint, Mapping):
        for (x, _y), p in joint.items():
            rows.setdefault(x, []).append(float(p))
    else:
        for x, row in enumerate(joint):
            rows[x] = [float(p) for p in row]
    return rows


def conditional_entropy(joint, marginal) -> float:
    """H(Y | X) = H(X, Y) - H(X).

    *joint* is either a mapping ``{(x, y): p}`` or a sequence of rows indexed
    by x; *marginal* is the distribution of X, keyed or ordered the same way.
    """
    rows = _rows(joint)
    if isinstance(marginal, FiniteDistribution):
        marginal = marginal.as_dict() if marginal.labels is not None else list(marginal.weights)
    px = dict(marginal) if isinstance(marginal, Mapping) else dict(enumerate(marginal))
    for x in set(px) | set(rows):
        row_sum = math.fsum(rows.get(x, ()))
        if abs(row_sum - px.get(x, 0.0)) > NORMALIZATION_TOL:
            raise ValueError(f"marginal p({x!r})={px.get(x, 0.0)} inconsistent with joint row sum {row_sum}")
    h_joint = shannon_entropy([p for row in rows.values() for p in row])
    h = h_joint - shannon_entropy(list(px.values()))
    return h if h > 0 or h < -1e-12 else 0.0


@dataclass(frozen=True)
class BlockDistribution:
    k: int
    counts: Counter
    positions: int

    def rho(self) -> dict[tuple, float]:
        return {c: m / self.positions for c, m in self.counts.items()}


def block_distribution(letters: Sequence[Hashable], k: int) -> BlockDistribution:
    s = len(letters)
    if k < 1:
        raise ValueError("block length must be at least 1")
    if k > s:
        raise ValueError(f"block length {k} exceeds stream length {s}")
    counts = Counter(tuple(letters[i:i + k]) for i in range(s - k + 1))
    return BlockDistribution(k, counts, s - k + 1)


def _entropy_from_counts(counts: np.ndarray) -> float:
    p = counts / counts.sum()
    h = float(-(p * np.log(p)).sum() / LN2)
    return h if h > 0 else 0.0


def encode(symbols: Iterable[Hashable]) -> np.ndarray:
    """Dense integer ids for a symbol stream (ids in first-seen order)."""
    index: dict = {}
    seq = list(symbols)
    return np.fromiter((index.setdefault(x, len(index)) for x in seq), dtype=np.int64, count=len(seq))


def block_entropies(symbols: Sequence[Hashable] | np.ndarray, k_max: int) -> list[float]:
    """``[E_0, E_1, ..., E_k_max]`` of one stream.

    Blocks of length k are numbered by extending the dense numbering of the
    (k-1)-blocks by one symbol, so codes never exceed ``len(stream) * alphabet``.
    """
    if isinstance(symbols, np.ndarray) and symbols.dtype.kind in "iu":
        _, codes = np.unique(symbols, return_inverse=True)
        codes = codes.reshape(-1).astype(np.int64)
    else:
        codes = encode(symbols)
    s = len(codes)
    if k_max < 0:
        raise ValueError("block length must be nonnegative")
    if k_max > s:
        raise ValueError(f"block length {k_max} exceeds stream length {s}")
    out = [0.0]
    if k_max == 0:
        return out
    alphabet = int(codes.max()) + 1
    prev = None
    for k in range(1, k_max + 1):
        blocks = codes if k == 1 else prev[:-1] * alphabet + codes[k - 1:]
        _, inverse, counts = np.unique(blocks, return_inverse=True, return_counts=True)
        out.append(_entropy_from_counts(counts))
        prev = inverse.reshape(-1).astype(np.int64)
    return out


def block_entropy(letters: Sequence[Hashable] | np.ndarray, k: int) -> float:
    if k < 0:
        raise ValueError("block length must be nonnegative")
    if k == 0:
        return 0.0
    return block_entropies(letters, k)[k]


@dataclass(frozen=True)
class EntropyReport:
    r_values: tuple[float, ...]
    k_max: int
    books: tuple[int, ...]
    per_book: Mapping[tuple[float, int], tuple[float, ...]]
    mean: Mapping[tuple[float, int], float]  # includes k = 0
    cv: Mapping[tuple[float, int], float]
    F: Mapping[tuple[float, int], float]

    def f_curve(self, r) -> list[float]:
        return [self.F[(r, k)] for k in range(1, self.k_max + 1)]


def _tiers(family) -> dict[float, frozenset]:
    if isinstance(family, LetterSetFamily):
        return {r: family.sets[r] for r in family.r_values}
    return {r: frozenset(s) for r, s in family.items()}


def _book_entropies(letters: Sequence[str], tiers: dict, k_max: int) -> dict:
    vocab = sorted(set(letters))
    index = {x: i for i, x in enumerate(vocab)}
    ids = np.fromiter((index[x] for x in letters), dtype=np.int64, count=len(letters))
    hole = len(vocab)
    result = {}
    for r, keep in tiers.items():
        kept = np.array([x in keep for x in vocab] + [True], dtype=bool)
        stream = np.where(kept[ids], ids, hole)
        result[r] = block_entropies(stream, k_max)[1:]
    return result


def kgram_grid(
    entropy_books: Sequence,
    family: LetterSetFamily | Mapping[float, Iterable[str]],
    placeholder: str = PLACEHOLDER,
    k_max: int = 6,
    *,
    workers: int = 1,
) -> EntropyReport:
    """E_k and F_k for every tier r over the approximated entropy books.

    Each book's letter stream is mapped onto ``L_r | {placeholder}`` and its
    block entropies are computed for k = 1..k_max; E is averaged over books
    and F is the difference of consecutive averages.
    """
    check_placeholder(placeholder)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if not entropy_books:
        raise ValueError("no entropy books")
    tiers = _tiers(family)
    streams = []
    for pos, b in enumerate(entropy_books):
        if hasattr(b, "letters"):
            letters, label = b.letters, b.index
        else:
            letters, label = b, pos
        if len(letters) < k_max:
            raise ValueError(f"book {label} has {len(letters)} letters, fewer than k_max={k_max}")
        streams.append((label, letters))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _book_entropies(s[1], tiers, k_max), streams))
    else:
        results = [_book_entropies(s[1], tiers, k_max) for s in streams]

    r_values = tuple(tiers)
    per_book, mean, cv, F = {}, {}, {}, {}
    for r in r_values:
        mean[(r, 0)] = 0.0
        cv[(r, 0)] = 0.0
        for k in range(1, k_max + 1):
            values = tuple(res[r][k - 1] for res in results)
            m = statistics.fmean(values)
            per_book[(r, k)] = values
            mean[(r, k)] = m
            cv[(r, k)] = statistics.pstdev(values) / m if m > 0 else 0.0
            F[(r, k)] = m - mean[(r, k - 1)]
    return EntropyReport(r_values, k_max, tuple(s[0] for s in streams), per_book, mean, cv, F)


def curve_crossings(a: Sequence[float], b: Sequence[float]) -> list[float]:
    """k positions (1-based, linearly interpolated) where curve a - b changes sign."""
    d = [x - y for x, y in zip(a, b)]
    found = []
    for i, (u, v) in enumerate(itertools.pairwise(d), start=1):
        if u == 0:
            found.append(float(i))
        elif u * v < 0:
            found.append(i + u / (u - v))
    if d and d[-1] == 0:
        found.append(float(len(d)))
    return found


def mesh_crossings(report: EntropyReport) -> list[tuple[float, float, float]]:
    """Every crossing of the F_k curves of two different tiers, as (r1, r2, k)."""
    out = []
    for r1, r2 in itertools.combinations(report.r_values, 2):
        for k in curve_crossings(report.f_curve(r1), report.f_curve(r2)):
            out.append((r1, r2, k))
    return out


def mesh_within(report: EntropyReport, low: float = 2.5, high: float = 4.5) -> bool:
    crossings = mesh_crossings(report)
    return bool(crossings) and all(low <= k <= high for _, _, k in crossings)


def max_cv(report: EntropyReport) -> float:
    return max(v for (r, k), v in report.cv.items() if k >= 1)


def write_report(report: EntropyReport, fh: IO[str], per_book: bool = False) -> None:
    w = csv.writer(fh, lineterminator="\n")
    header = ["r", "k", "E_mean", "E_cv", "F"]
    if per_book:
        header += [f"E_book{t}" for t in report.books]
    w.writerow(header)
    for r in report.r_values:
        for k in range(1, report.k_max + 1):
            row = [r_label(r), k, repr(report.mean[(r, k)]), repr(report.cv[(r, k)]), repr(report.F[(r, k)])]
            if per_book:
                row += [repr(v) for v in report.per_book[(r, k)]]
            w.writerow(row)
