"""Free-text query parsing: normalization plus filter extraction.

Queries run through the same normalization as postings, then trigger
vocabularies pull out work mode, seniority, employment type and a location
hint.  Trigger tokens stay in the query text so they still contribute to
scoring.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .ingest import expand_abbreviations, normalize_text
from .lexical import tokenize

# Trigger phrases are stored in normalized form (e.g. "on-site" -> "on site").
WORK_MODE_TRIGGERS: dict[str, str] = {
    "remote": "remote",
    "hybrid": "hybrid",
    "onsite": "onsite",
    "on site": "onsite",
    "office": "onsite",
}

SENIORITY_TRIGGERS: dict[str, str] = {
    "intern": "internship",
    "internship": "internship",
    "junior": "entry",
    "entry": "entry",
    "entry level": "entry",
    "graduate": "entry",
    "mid": "mid",
    "mid level": "mid",
    "associate": "mid",
    "senior": "senior",
    "sr": "senior",
    "lead": "lead",
    "principal": "lead",
    "staff": "lead",
    "director": "director",
    "vp": "director",
    "head": "director",
    "executive": "executive",
    "cxo": "executive",
    "chief": "executive",
}

EMPLOYMENT_TRIGGERS: dict[str, str] = {
    "full time": "full-time",
    "fulltime": "full-time",
    "part time": "part-time",
    "contract": "contract",
    "contractor": "contract",
    "temporary": "temporary",
    "temp": "temporary",
    "internship": "internship",
}

WORK_MODES = ("remote", "hybrid", "onsite")
SENIORITY_LEVELS = ("internship", "entry", "mid", "senior", "lead", "director", "executive")
EMPLOYMENT_TYPES = ("full-time", "part-time", "contract", "temporary", "internship")

_ALL_TRIGGER_PHRASES = (
    frozenset(WORK_MODE_TRIGGERS) | frozenset(SENIORITY_TRIGGERS) | frozenset(EMPLOYMENT_TRIGGERS)
)
_MAX_NGRAM = 3


def _triggers_for(table: Mapping[str, str]) -> dict[str, list[str]]:
    grouped: dict[str, list[str]] = {}
    for phrase, canonical in table.items():
        grouped.setdefault(canonical, []).append(phrase)
    return grouped

_WORK_MODE_PHRASES = _triggers_for(WORK_MODE_TRIGGERS)
_SENIORITY_PHRASES = _triggers_for(SENIORITY_TRIGGERS)
_EMPLOYMENT_PHRASES = _triggers_for(EMPLOYMENT_TRIGGERS)


@dataclass(frozen=True)
class ParsedQuery:
    """Normalized query text plus any extracted filters."""

    raw: str
    normalized: str
    tokens: tuple[str, ...]
    work_mode: str | None = None
    seniority_filter: str | None = None
    employment_filter: str | None = None
    location_hint: str | None = None


def _ngram(tokens: tuple[str, ...], start: int, length: int) -> str:
    return " ".join(tokens[start : start + length])


def _first_trigger(tokens: tuple[str, ...], table: Mapping[str, str]) -> str | None:
    """Longest match wins; among equal lengths, the leftmost occurrence."""
    max_len = min(_MAX_NGRAM, len(tokens))
    for length in range(max_len, 0, -1):
        for start in range(len(tokens) - length + 1):
            phrase = _ngram(tokens, start, length)
            if phrase in table:
                return table[phrase]
    return None


def _location_hint(tokens: tuple[str, ...], location_vocabulary: Iterable[str]) -> str | None:
    """Longest query n-gram (up to three tokens) found inside a corpus location."""
    locations = list(location_vocabulary)
    if not locations:
        return None
    max_len = min(_MAX_NGRAM, len(tokens))
    for length in range(max_len, 0, -1):
        for start in range(len(tokens) - length + 1):
            phrase = _ngram(tokens, start, length)
            if phrase in _ALL_TRIGGER_PHRASES:
                continue
            if any(phrase in location for location in locations):
                return phrase
    return None


def parse_query(raw: str, location_vocabulary: Iterable[str]) -> ParsedQuery:
    """Normalize ``raw`` and extract filters from trigger vocabularies.

    The token "internship" sets both the seniority and the employment filter.
    """
    normalized = expand_abbreviations(normalize_text(raw))
    tokens = tuple(tokenize(normalized))
    return ParsedQuery(
        raw=raw,
        normalized=normalized,
        tokens=tokens,
        work_mode=_first_trigger(tokens, WORK_MODE_TRIGGERS),
        seniority_filter=_first_trigger(tokens, SENIORITY_TRIGGERS),
        employment_filter=_first_trigger(tokens, EMPLOYMENT_TRIGGERS),
        location_hint=_location_hint(tokens, location_vocabulary),
    )


def _canonical_field(field_text: str, phrases_by_level: Mapping[str, list[str]],
                     order: tuple[str, ...]) -> str | None:
    if not field_text:
        return None
    tokens = tuple(tokenize(field_text))
    token_set = set(tokens)
    for canonical in order:
        for phrase in phrases_by_level.get(canonical, ()):
            words = phrase.split()
            if len(words) == 1:
                if words[0] in token_set:
                    return canonical
            elif contains_phrase(tokens, words):
                return canonical
    return None


def contains_phrase(tokens: tuple[str, ...], phrase_tokens: list[str]) -> bool:
    """True when ``phrase_tokens`` occurs as a consecutive run inside ``tokens``."""
    width = len(phrase_tokens)
    return any(
        list(tokens[i : i + width]) == phrase_tokens for i in range(len(tokens) - width + 1)
    )


def canonical_seniority(field_text: str) -> str | None:
    """Map a posting's seniority text onto one of the canonical levels.

    Levels are tried in fixed order (internship first), so a mixed value
    like "mid senior level" resolves to the earlier level.
    """
    return _canonical_field(field_text, _SENIORITY_PHRASES, SENIORITY_LEVELS)


def canonical_employment(field_text: str) -> str | None:
    """Map a posting's employment text onto one of the canonical types."""
    return _canonical_field(field_text, _EMPLOYMENT_PHRASES, EMPLOYMENT_TYPES)


def work_mode_phrases(mode: str) -> list[str]:
    """Trigger phrases announcing a work mode inside posting text."""
    return _WORK_MODE_PHRASES.get(mode, [])
