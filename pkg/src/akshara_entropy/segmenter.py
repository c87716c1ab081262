"""Lossless segmentation of Unicode text into Devanagari letters (aksharas).

A letter is a consonant cluster joined by viramas, optionally followed by one
dependent vowel sign and any final modifiers (candrabindu, anusvara, visarga),
or an independent vowel with its modifiers.  A virama that is not followed by a
consonant closes the letter, so word-final halant forms such as ``त्`` are
letters of their own.  Everything else (whitespace, digits, punctuation, other
scripts) becomes a separator token, so that concatenating the token texts
always reproduces the input.

    >>> [t.text for t in segment("तर सं.")]
    ['त', 'र', ' ', 'सं', '.']
"""

from __future__ import annotations

import itertools
import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Letter",
    "Token",
    "LETTER",
    "SEPARATOR",
    "segment",
    "letters_of",
    "words_of",
    "iter_letters",
    "orphan_count",
    "is_valid_letter",
    "normalize",
]

LETTER = "letter"
SEPARATOR = "separator"

WHITESPACE = "whitespace"
PUNCTUATION = "punctuation"
DIGIT = "digit"
FOREIGN = "foreign"

VIRAMA = "\u094d"
NUKTA = "\u093c"
ZWNJ = "\u200c"
ZWJ = "\u200d"

_CONSONANT = "\u0915-\u0939\u0958-\u095f\u0978-\u097f"
_INDEPENDENT_VOWEL = "\u0904-\u0914\u0960\u0961\u0972-\u0977"
_VOWEL_SIGN = "\u093a\u093b\u093e-\u094c\u094e\u094f\u0955-\u0957\u0962\u0963"
_MODIFIER = "\u0900-\u0903"
_JOINERS = ZWNJ + ZWJ

# Signs that only make sense attached to a base; alone they are orphans.
_COMBINING = _MODIFIER + _VOWEL_SIGN + NUKTA + VIRAMA

_J = f"[{_JOINERS}]*"
_CONS_UNIT = f"[{_CONSONANT}]{NUKTA}?"
_LETTER_PATTERN = (
    "(?:"
    # consonant cluster, then either a trailing virama or vowel sign + modifiers
    f"{_CONS_UNIT}(?:{_J}{VIRAMA}{_J}{_CONS_UNIT})*"
    f"(?:{_J}{VIRAMA}|(?:{_J}[{_VOWEL_SIGN}])?(?:{_J}[{_MODIFIER}])*)"
    # a/aa with a candra sign: the decomposed spellings of U+0972 and U+0911
    f"|[\u0905\u0906](?:{_J}[\u0945\u0949])?(?:{_J}[{_MODIFIER}])*"
    f"|[{_INDEPENDENT_VOWEL}](?:{_J}[{_MODIFIER}])*"
    f"){_J}"
)

_LETTER_RE = re.compile(_LETTER_PATTERN)
_TOKEN_RE = re.compile(
    f"(?P<letter>{_LETTER_PATTERN})"
    f"|(?P<orphan>[{_COMBINING}])"
    f"|(?P<other>[^{_CONSONANT}{_INDEPENDENT_VOWEL}{_COMBINING}]+)"
)

_STRIP_JOINERS = str.maketrans("", "", _JOINERS)

# Devanagari codepoints outside the letter model: danda, double danda,
# abbreviation sign, high spacing dot, avagraha, om, Vedic stress signs.
_DEVANAGARI_PUNCTUATION = frozenset(
    "\u0964\u0965\u0970\u0971\u093d\u0950\u0951\u0952\u0953\u0954"
)


class Letter(str):
    """One orthographic letter, stored as its joiner-free string form.

    Letters compare and hash like the plain strings they wrap, so sets of
    letters can be probed with ordinary ``str`` values.
    """

    __slots__ = ()

    @classmethod
    def from_codepoints(cls, codepoints: Iterable[int]) -> "Letter":
        text = "".join(chr(c) for c in codepoints)
        if not is_valid_letter(text):
            raise ValueError(f"not a single Devanagari letter: {_fmt(text)}")
        return cls(text)

    @property
    def codepoints(self) -> tuple[int, ...]:
        return tuple(ord(c) for c in self)

    @property
    def text(self) -> str:
        return str(self)

    def __repr__(self) -> str:
        return f"Letter({_fmt(self)})"


def _fmt(text: str) -> str:
    return " ".join(f"U+{ord(c):04X}" for c in text) or "<empty>"


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    start: int
    end: int
    letter: Letter | None = None
    separator_class: str | None = None
    orphan: bool = False

    @property
    def is_letter(self) -> bool:
        return self.kind == LETTER


def _classify(ch: str) -> str:
    if ch.isspace():
        return WHITESPACE
    if "0" <= ch <= "9" or "\u0966" <= ch <= "\u096f":
        return DIGIT
    if ch in _DEVANAGARI_PUNCTUATION or unicodedata.category(ch)[0] in "PS":
        return PUNCTUATION
    return FOREIGN


def _canonical(raw: str) -> Letter:
    if ZWJ in raw or ZWNJ in raw:
        raw = raw.translate(_STRIP_JOINERS)
    return Letter(raw)


def normalize(text: str) -> str:
    """Optional NFC pre-pass; segmentation itself never normalizes."""
    return unicodedata.normalize("NFC", text)


def segment(text: str) -> list[Token]:
    """Split *text* into letter and separator tokens.

    Spans are ``str`` offsets into *text*.  Combining signs with no base are
    emitted one per token as ``foreign`` separators with ``orphan=True``.
    """
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "letter":
            raw = m.group()
            tokens.append(Token(LETTER, raw, m.start(), m.end(), letter=_canonical(raw)))
        elif kind == "orphan":
            tokens.append(
                Token(SEPARATOR, m.group(), m.start(), m.end(),
                      separator_class=FOREIGN, orphan=True)
            )
        else:
            pos = m.start()
            for cls, run in itertools.groupby(m.group(), key=_classify):
                chunk = "".join(run)
                tokens.append(
                    Token(SEPARATOR, chunk, pos, pos + len(chunk), separator_class=cls)
                )
                pos += len(chunk)
    return tokens


def iter_letters(text: str) -> Iterator[Letter]:
    """Letters of *text* in order, without building separator tokens.

    Yields exactly ``letters_of(segment(text))``; used on corpus-sized input.
    """
    for m in _LETTER_RE.finditer(text):
        yield _canonical(m.group())


def letters_of(tokens: Iterable[Token]) -> list[Letter]:
    return [t.letter for t in tokens if t.kind == LETTER]


def words_of(tokens: Iterable[Token]) -> list[list[Letter]]:
    """Maximal runs of consecutive letter tokens."""
    words = []
    for is_letter, run in itertools.groupby(tokens, key=lambda t: t.kind == LETTER):
        if is_letter:
            words.append([t.letter for t in run])
    return words


def orphan_count(tokens: Sequence[Token]) -> int:
    return sum(1 for t in tokens if t.orphan)


def is_valid_letter(text: str) -> bool:
    """True if *text* is exactly one joiner-free letter."""
    if not text or ZWJ in text or ZWNJ in text:
        return False
    return _LETTER_RE.fullmatch(text) is not None
