"""Command-line front end.

Every command writes CSV (or text) to ``--output`` / stdout and a short
summary to stderr.  Settings come from flags, then a JSON ``--config`` file,
then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import corpus, entropy, letterstats, segmenter, table_io
from .approximator import PLACEHOLDER, approximate, check_placeholder, replaced_fraction

COMMANDS = ("segment", "wordlen", "partition", "freq", "sets", "probs", "approx", "entropy", "validate-table")


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    r_values: tuple[float, ...] = letterstats.R_VALUES
    r: float = 0.85
    n_books: int = corpus.N_BOOKS
    frequency_books: list[int] | None = None
    majority: int | None = None
    k_max: int = 6
    placeholder: str = PLACEHOLDER
    nfc: bool = False
    workers: int = 1
    table: str | None = None
    share_csv: str | None = None
    sizes_csv: str | None = None
    table_out: str | None = None
    per_book: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        rs = self.r_values
        if not rs or any(not 0 < r <= 1 for r in rs):
            raise ValueError("r values must lie in (0, 1]")
        if any(b <= a for a, b in zip(rs, rs[1:])):
            raise ValueError("r values must be strictly increasing")
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if self.n_books < 1:
            raise ValueError("n_books must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        check_placeholder(self.placeholder)


def _parse_r_values(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.replace(" ", "").split(",") if x)


def _parse_books(text: str) -> list[int]:
    """``"0-9"`` or ``"0,2,4"`` or a mix."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="akshara-entropy", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, corpus_opts=False, sets_opts=False):
        sp.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        sp.add_argument("--config", default=None, help="JSON file of defaults for these flags")
        sp.add_argument("--nfc", action="store_const", const=True, default=None,
                        help="NFC-normalize input before segmenting")
        if corpus_opts:
            sp.add_argument("--n-books", type=int, default=None)
            sp.add_argument("--workers", type=int, default=None)
            sp.add_argument("--frequency-books", type=_parse_books, default=None,
                            help="book indices used for letter sets, e.g. 0-9 (default: first half)")
        if sets_opts:
            sp.add_argument("--r-values", type=_parse_r_values, default=None,
                            help="comma-separated tiers (default 0.60,...,0.95)")
            sp.add_argument("--majority", type=int, default=None,
                            help="books needed to admit a letter (default ceil(0.7 * books))")

    sp = sub.add_parser("segment", help="tokenize text into letters and separators")
    sp.add_argument("inputs", nargs="*", help="UTF-8 files (default stdin)")
    common(sp)

    sp = sub.add_parser("wordlen", help="word-length histogram (length,count)")
    sp.add_argument("inputs", nargs="*")
    common(sp)

    sp = sub.add_parser("freq", help="ranked letter frequencies and share curve")
    sp.add_argument("inputs", nargs="*")
    sp.add_argument("--share-csv", default=None, help="also write the share curve (n,share)")
    common(sp)

    sp = sub.add_parser("partition", help="split a manifest's articles into books")
    sp.add_argument("inputs", nargs=1, metavar="MANIFEST")
    common(sp, corpus_opts=True)

    sp = sub.add_parser("sets", help="canonical letter sets from the frequency books")
    sp.add_argument("inputs", nargs=1, metavar="MANIFEST")
    sp.add_argument("--sizes-csv", default=None, help="also write r,N_r,union,intersection")
    common(sp, corpus_opts=True, sets_opts=True)

    sp = sub.add_parser("probs", help="letter probabilities and CVs over the frequency books")
    sp.add_argument("inputs", nargs=1, metavar="MANIFEST")
    sp.add_argument("--table-out", default=None, help="also write a letter table file")
    common(sp, corpus_opts=True, sets_opts=True)

    sp = sub.add_parser("approx", help="mask letters outside a table tier")
    sp.add_argument("inputs", nargs="*")
    sp.add_argument("--table", default=None, help="letter table (default: shipped reference table)")
    sp.add_argument("--r", type=float, default=None, help="tier to keep (default 0.85)")
    sp.add_argument("--placeholder", default=None)
    common(sp)

    sp = sub.add_parser("entropy", help="k-gram entropy grid over the entropy books")
    sp.add_argument("inputs", nargs=1, metavar="MANIFEST")
    sp.add_argument("--table", default=None, help="use this table's tiers instead of building sets")
    sp.add_argument("--k-max", type=int, default=None)
    sp.add_argument("--placeholder", default=None)
    sp.add_argument("--per-book", action="store_const", const=True, default=None)
    common(sp, corpus_opts=True, sets_opts=True)

    sp = sub.add_parser("validate-table", help="check a letter table file")
    sp.add_argument("inputs", nargs="?", default=None, metavar="TABLE",
                    help="table file (default: shipped reference table)")
    common(sp)
    return p


def make_config(args: argparse.Namespace) -> RunConfig:
    file_values = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            file_values = json.load(fh)
        if not isinstance(file_values, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(file_values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "r_values" in file_values:
        file_values["r_values"] = tuple(float(r) for r in file_values["r_values"])
    if isinstance(file_values.get("frequency_books"), str):
        file_values["frequency_books"] = _parse_books(file_values["frequency_books"])

    inputs = args.inputs
    if inputs is None:
        inputs = []
    elif isinstance(inputs, str):
        inputs = [inputs]
    values = {"command": args.command, "inputs": list(inputs)}
    for name in known - {"command", "inputs"}:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
        elif name in file_values:
            values[name] = file_values[name]
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


@contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _read_inputs(cfg: RunConfig) -> str:
    if not cfg.inputs or cfg.inputs == ["-"]:
        text = sys.stdin.read()
    else:
        text = "".join(Path(p).read_text(encoding="utf-8") for p in cfg.inputs)
    return segmenter.normalize(text) if cfg.nfc else text


def _books(cfg: RunConfig) -> list[corpus.Book]:
    entries = corpus.read_manifest(cfg.inputs[0])
    articles = corpus.load_articles(entries)
    return corpus.partition(articles, cfg.n_books, nfc=cfg.nfc, workers=cfg.workers)


def _family(cfg: RunConfig, freq_books: Sequence[corpus.Book]) -> letterstats.LetterSetFamily:
    tables = [corpus.count_letters(b) for b in freq_books]
    empty = [b.index for b in freq_books if b.total_letters == 0]
    if empty:
        raise ValueError(f"frequency books without letters: {empty}")
    return letterstats.canonical_sets(tables, cfg.r_values, cfg.majority)


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_segment(cfg: RunConfig) -> int:
    tokens = segmenter.segment(_read_inputs(cfg))
    with _sink(cfg.output) as out:
        for t in tokens:
            if t.kind == segmenter.LETTER:
                cps = " ".join(f"U+{c:04X}" for c in t.letter.codepoints)
                out.write(f"letter\t{t.letter}\t{cps}\n")
            else:
                tag = "orphan" if t.orphan else t.separator_class
                out.write(f"separator\t{tag}\t{json.dumps(t.text, ensure_ascii=False)}\n")
    _err(f"letters={sum(t.kind == segmenter.LETTER for t in tokens)} orphan_marks={segmenter.orphan_count(tokens)}")
    return 0


def cmd_wordlen(cfg: RunConfig) -> int:
    stats = letterstats.word_length_stats(segmenter.words_of(segmenter.segment(_read_inputs(cfg))))
    with _sink(cfg.output) as out:
        letterstats.write_word_lengths(stats, out)
    mean = "undefined" if stats.mean is None else f"{stats.mean:.4f}"
    _err(f"words={stats.words} mean={mean} mode={stats.mode}")
    return 0


def cmd_freq(cfg: RunConfig) -> int:
    table = letterstats.FrequencyTable.from_letters(segmenter.iter_letters(_read_inputs(cfg)))
    with _sink(cfg.output) as out:
        letterstats.write_ranking(table, out)
    if cfg.share_csv and table.total:
        with _sink(cfg.share_csv) as out:
            letterstats.write_share_curve(letterstats.share_curve(table), out)
    _err(f"letters={table.total} distinct={len(table)}")
    return 0


def cmd_partition(cfg: RunConfig) -> int:
    books = _books(cfg)
    with _sink(cfg.output) as out:
        out.write("book,articles,letters,distinct\n")
        for b in books:
            out.write(f"{b.index},{len(b.sources)},{b.total_letters},{len(b.counts)}\n")
    _err(f"books={len(books)} letters={sum(b.total_letters for b in books)}")
    return 0


def cmd_sets(cfg: RunConfig) -> int:
    freq_books, _ = corpus.split_books(_books(cfg), cfg.frequency_books)
    family = _family(cfg, freq_books)
    with _sink(cfg.output) as out:
        letterstats.write_membership(family, out)
    if cfg.sizes_csv:
        with _sink(cfg.sizes_csv) as out:
            letterstats.write_set_sizes(family, out)
    for r in family.r_values:
        _err(f"r={letterstats.r_label(r)} N_r={len(family.sets[r])} "
             f"union={len(family.union_sets[r])} intersection={len(family.intersection_sets[r])}")
    return 0


def cmd_probs(cfg: RunConfig) -> int:
    freq_books, _ = corpus.split_books(_books(cfg), cfg.frequency_books)
    family = _family(cfg, freq_books)
    tables = [corpus.count_letters(b) for b in freq_books]
    top = family.r_values[-1]
    prob = letterstats.probabilities(tables, family.ordered(top))
    with _sink(cfg.output) as out:
        letterstats.write_probabilities(prob, out)
    if cfg.table_out:
        table_io.emit_table(table_io.build_table(prob, family), cfg.table_out,
                            title="letter table computed from " + cfg.inputs[0])
    for r in family.r_values:
        _err(f"r={letterstats.r_label(r)} sanity_ratio={letterstats.sanity_ratio(prob, family, r):.4f}")
    return 0


def _load_table(path: str | None) -> table_io.LetterTable:
    return table_io.reference_table() if path is None else table_io.load_table(path)


def cmd_approx(cfg: RunConfig) -> int:
    table = _load_table(cfg.table)
    keep = table_io.tier_set(table, cfg.r)
    result = approximate(_read_inputs(cfg), keep, cfg.placeholder)
    with _sink(cfg.output) as out:
        out.write(result.text)
    frac = f"{replaced_fraction(result):.6f}" if result.letters else "undefined"
    _err(f"letters={result.letters} replaced={result.replaced} fraction={frac}")
    return 0


def cmd_entropy(cfg: RunConfig) -> int:
    books = _books(cfg)
    freq_books, entropy_books = corpus.split_books(books, cfg.frequency_books)
    if cfg.table:
        family = _load_table(cfg.table).to_family()
    else:
        family = _family(cfg, freq_books)
    report = entropy.kgram_grid(entropy_books, family, cfg.placeholder, cfg.k_max, workers=cfg.workers)
    with _sink(cfg.output) as out:
        entropy.write_report(report, out, per_book=cfg.per_book)
    crossings = entropy.mesh_crossings(report)
    if crossings:
        ks = [k for _, _, k in crossings]
        _err(f"mesh: {len(crossings)} crossings, k in [{min(ks):.3f}, {max(ks):.3f}]")
    else:
        _err("mesh: no crossings")
    _err(f"max cross-book CV of E_k: {entropy.max_cv(report):.4%}")
    return 0


def cmd_validate_table(cfg: RunConfig) -> int:
    if cfg.inputs:
        table, report = table_io.validate_table(cfg.inputs[0])
    else:
        with resources.as_file(table_io.reference_table_path()) as path:
            table, report = table_io.validate_table(path)
    with _sink(cfg.output) as out:
        for line in report:
            out.write(line + "\n")
        if table is None:
            out.write("status: invalid\n")
            return 1
        out.write(f"rows: {len(table.rows)}\n")
        out.write(f"tiers: {len(table.tiers)}\n")
        sums = table_io.tier_sums(table)
        for r, end in table.tiers:
            out.write(f"tier r={letterstats.r_label(r)} end={end} sum={sums[r]:.6f} ratio={sums[r] / r:.6f}\n")
        out.write(f"consistent glyph rows: {len(table_io.consistent_rows(table))}\n")
        out.write("status: ok\n")
    return 0


HANDLERS = {
    "segment": cmd_segment,
    "wordlen": cmd_wordlen,
    "freq": cmd_freq,
    "partition": cmd_partition,
    "sets": cmd_sets,
    "probs": cmd_probs,
    "approx": cmd_approx,
    "entropy": cmd_entropy,
    "validate-table": cmd_validate_table,
}


def run(cfg: RunConfig) -> int:
    return HANDLERS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return run(make_config(args))
    except (OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        _err(f"error: {msg}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
