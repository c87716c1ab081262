"""Approximate a text by masking every letter outside a kept set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable

from .segmenter import LETTER, ZWJ, ZWNJ, segment

PLACEHOLDER = "\u25a1"  # WHITE SQUARE


@dataclass(frozen=True)
class ApproximatedText:
    text: str
    replaced: int
    kept: int

    @property
    def letters(self) -> int:
        return self.replaced + self.kept


def check_placeholder(placeholder: str) -> str:
    if len(placeholder) != 1:
        raise ValueError(f"placeholder must be one character, got {placeholder!r}")
    if "\u0900" <= placeholder <= "\u097f" or placeholder in (ZWJ, ZWNJ):
        raise ValueError(f"placeholder U+{ord(placeholder):04X} would be read as part of a letter")
    return placeholder


def approximate(text: str, keep: AbstractSet[str], placeholder: str = PLACEHOLDER) -> ApproximatedText:
    """Replace each letter not in *keep* by one *placeholder*; separators pass through."""
    check_placeholder(placeholder)
    out = []
    replaced = kept = 0
    for tok in segment(text):
        if tok.kind != LETTER:
            out.append(tok.text)
        elif tok.letter in keep:
            out.append(tok.text)
            kept += 1
        else:
            out.append(placeholder)
            replaced += 1
    return ApproximatedText("".join(out), replaced, kept)


def approximate_letters(letters: Iterable[str], keep: AbstractSet[str], placeholder: str = PLACEHOLDER) -> list[str]:
    """The letter-stream form: the symbol sequence over ``keep | {placeholder}``."""
    return [x if x in keep else placeholder for x in letters]


def replaced_fraction(result: ApproximatedText) -> float:
    if result.letters == 0:
        raise ValueError("source text has no letters")
    return result.replaced / result.letters
