"""Tokenization and word-normalization helpers.

Headlines are tokenized by whitespace; token *matching* (lexicon lookups,
duplicate detection, identity-substitution checks) works on a normalized
form with surrounding punctuation stripped and case folded.
"""
from __future__ import annotations

import re
import string

_EDGE_PUNCT = string.punctuation + "‘’“”–—"
_NON_WORD = re.compile(r"[^\w\s]+", re.UNICODE)
_WS = re.compile(r"\s+")


def tokenize(text: str) -> list[str]:
    return text.split()


def norm_token(token: str) -> str:
    """Lowercased token with leading/trailing punctuation removed."""
    return token.strip(_EDGE_PUNCT).lower()


def normalize_text(text: str) -> str:
    """Canonical form for duplicate detection: lowercase, no punctuation,
    single spaces."""
    return _WS.sub(" ", _NON_WORD.sub("", text.lower())).strip()


def stem(word: str) -> str:
    """Crude suffix stripper, good enough for lexicon and blacklist lookups.

    Keeps at least three characters of stem so short words pass through
    unchanged ("has" stays "has", "donors" becomes "donor").
    """
    for suffix in ("ing", "ed", "es", "s"):
        if word.endswith(suffix) and len(word) - len(suffix) >= 3:
            return word[: -len(suffix)]
    return word


def render_tokens(tokens: list[str], replaced_index: int | None = None,
                  substitute: str | None = None) -> str:
    """Join tokens back into a headline, optionally applying a substitution."""
    if replaced_index is None:
        return " ".join(tokens)
    out = list(tokens)
    out[replaced_index] = substitute if substitute is not None else out[replaced_index]
    return " ".join(out)


def mark_token(tokens: list[str], index: int) -> str:
    """Headline text with the token at ``index`` wrapped as ``<token/>``."""
    out = list(tokens)
    out[index] = f"<{out[index]}/>"
    return " ".join(out)
