import io

import pytest

from akshara_entropy.corpus import Article, count_letters, partition
from akshara_entropy.letterstats import canonical_sets, probabilities, sanity_ratio
from akshara_entropy.table_io import (
    LetterTable,
    TableError,
    TableRow,
    build_table,
    consistent_rows,
    emit_table,
    load_table,
    reference_table_path,
    tier_set,
    tier_sums,
    validate_table,
)
from akshara_entropy.segmenter import Letter
from conftest import synthetic_articles

TIERS = {0.60: 54, 0.65: 66, 0.70: 83, 0.75: 104, 0.80: 134, 0.85: 177, 0.90: 251, 0.95: 408}
HEADER = "# columns: index, letter, codepoints, probability\n# tier r=0.50 end=1\n"


def parse(text):
    return load_table(io.StringIO(text))


def test_reference_rows_and_tiers(table):
    assert len(table.rows) == 408
    assert [r.index for r in table.rows] == list(range(1, 409))
    assert table.tier_sizes == TIERS
    first = table.rows[0]
    assert first.letter == "त" and first.letter.codepoints == (0x0924,)
    assert first.probability == 3.657388e-02


def test_tier_set(table):
    l60 = tier_set(table, 0.60)
    assert len(l60) == 54 and {"त", "र", "क"} <= l60
    assert [row.letter for row in table.rows[:3]] == ["त", "र", "क"]
    assert len(tier_set(table, 0.95)) == 408
    with pytest.raises(KeyError):
        tier_set(table, 0.50)


def test_reference_invariants(table):
    assert 0.192 <= sum(row.probability for row in table.rows[:7]) <= 0.194
    top = [row.probability for row in table.rows[:54]]
    assert top == sorted(top, reverse=True)
    assert all(0 < row.probability < 1 for row in table.rows)
    sizes = list(TIERS.values())
    assert sizes == sorted(sizes)


def test_reference_sanity_ratios_to_four_places(table):
    # the published bounds are four-decimal roundings of the extreme ratios
    family = table.to_family()
    ratios = [sanity_ratio(table.probabilities, family, r) for r in table.r_values]
    assert round(min(ratios), 4) == 0.9886
    assert round(max(ratios), 4) == 0.9958
    sums = tier_sums(table)
    assert all(sums[r] / r == pytest.approx(x) for r, x in zip(table.r_values, ratios))


def test_glyph_mismatches_are_warnings(table):
    consistent = consistent_rows(table)
    assert len(consistent) >= 300
    flagged = {row.index for row in table.rows if not row.consistent}
    assert {118, 247, 277, 333, 341, 346, 358, 359, 365, 379, 387} <= flagged
    assert len(table.warnings) == len(flagged)
    assert all(w.startswith("row ") for w in table.warnings)


def test_round_trip_is_byte_exact(table):
    original = reference_table_path().read_text(encoding="utf-8")
    title = original.splitlines()[0][2:]
    buf = io.StringIO()
    emit_table(table, buf, title=title)
    assert buf.getvalue() == original
    again = parse(buf.getvalue())
    assert again == table


def test_round_trip_of_a_computed_table(tmp_path):
    articles = [Article(m, t) for m, t in enumerate(synthetic_articles(40, 200, seed=9))]
    books = [count_letters(b) for b in partition(articles, n_books=4)]
    family = canonical_sets(books)
    prob = probabilities(books, family.ordered(family.r_values[-1]))
    built = build_table(prob, family)
    path = tmp_path / "toy.tsv"
    emit_table(built, path)
    loaded = load_table(path)
    assert loaded == built
    for r in family.r_values:
        assert tier_set(loaded, r) == family[r]


def test_emit_refuses_invalid_tables():
    row = TableRow(1, "त", Letter("त"), 0.5)
    with pytest.raises(TableError):
        emit_table(LetterTable((row,), ((0.8, 1), (0.6, 1))), io.StringIO())
    with pytest.raises(TableError):
        emit_table(LetterTable((row,), ((0.6, 2),)), io.StringIO())
    with pytest.raises(TableError):
        emit_table(LetterTable((row, TableRow(2, "त", Letter("त"), 0.1)), ((0.6, 1),)), io.StringIO())


@pytest.mark.parametrize("body,message", [
    ("", "no rows"),
    ("1\tत\tU+0924\t0.5\n", None),
    ("1\tत\tU+0924\n", "row 1: expected 4"),
    ("1\tत\tU+09ZZ\t0.5\n", "row 1: malformed codepoint"),
    ("1\tत\tU+0924\t1.5\n", "row 1: probability"),
    ("1\tा\tU+093E\t0.5\n", r"row 1: codepoints U\+093E do not form"),
    ("1\tत\tU+0924\t0.5\n2\tत\tu+0924\t0.1\n", "row 2: duplicate letter"),
    ("2\tत\tU+0924\t0.5\n", "row 1: index 2"),
])
def test_load_errors(body, message):
    text = HEADER + body if body else ""
    if message is None:
        assert len(parse(text).rows) == 1
        return
    with pytest.raises(TableError, match=message):
        parse(text)


def test_tier_errors():
    row = "1\tत\tU+0924\t0.5\n2\tर\tU+0930\t0.4\n"
    with pytest.raises(TableError, match="strictly increasing"):
        parse("# tier r=0.7 end=1\n# tier r=0.6 end=2\n" + row)
    with pytest.raises(TableError, match="smaller than end"):
        parse("# tier r=0.6 end=2\n# tier r=0.7 end=1\n" + row)
    with pytest.raises(TableError, match="no tiers"):
        parse(row)
    with pytest.raises(TableError, match="outside"):
        parse("# tier r=0.6 end=3\n" + row)


def test_validate_table_reports_instead_of_raising():
    table, report = validate_table(io.StringIO(HEADER + "1\tक\tU+0924\t0.5\n"))
    assert table is not None
    assert report == ["warning: row 1: glyph U+0915 disagrees with codepoints U+0924; using codepoints"]
    table, report = validate_table(io.StringIO(HEADER + "x\tत\tU+0924\t0.5\n"))
    assert table is None and report[0].startswith("row 1:")
