"""Letter and bigram statistics from raw text.

Characters outside the configured letter set act as word separators, so
bigrams never straddle a word boundary.  Case folding is a plain lowercase
mapping.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable

DEFAULT_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class EmptyCorpusError(ValueError):
    """Raised when no configured letter occurs in the input."""


@dataclass(frozen=True)
class CorpusStats:
    """Unigram and adjacent-pair probabilities over a fixed letter set."""

    letters: tuple[str, ...]
    letter_freq: dict[str, float]
    bigram_prob: dict[tuple[str, str], float]
    total_letters: int
    total_bigrams: int

    def to_dict(self) -> dict:
        return {
            "letters": list(self.letters),
            "p": {l: self.letter_freq[l] for l in self.letters},
            "bigram": {a + b: p for (a, b), p in sorted(self.bigram_prob.items())},
            "total_letters": self.total_letters,
            "total_bigrams": self.total_bigrams,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusStats":
        letters = tuple(data["letters"])
        freq = {l: float(data["p"][l]) for l in letters}
        bigram = {(k[0], k[1]): float(v) for k, v in data["bigram"].items()}
        stats = cls(letters, freq, bigram, int(data["total_letters"]), int(data["total_bigrams"]))
        stats._check()
        return stats

    def _check(self) -> None:
        if abs(sum(self.letter_freq.values()) - 1.0) > 1e-9:
            raise ValueError("letter probabilities do not sum to 1")
        if self.bigram_prob and abs(sum(self.bigram_prob.values()) - 1.0) > 1e-9:
            raise ValueError("bigram probabilities do not sum to 1")
        for pair in self.bigram_prob:
            if len(pair) != 2 or any(l not in self.letter_freq for l in pair):
                raise ValueError(f"bigram {pair!r} references unknown letters")

    def digest(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _normalize_letters(letters: Iterable[str]) -> list[str]:
    out: list[str] = []
    for entry in letters:
        folded = entry.lower()
        if len(folded) != 1:
            raise ValueError(f"letter set entries must be single characters, got {entry!r}")
        if folded in out:
            raise ValueError(f"duplicate letter {folded!r} in letter set")
        out.append(folded)
    if not out:
        raise ValueError("letter set must not be empty")
    return out


def analyze_corpus(text: str | Iterable[str], letters: Iterable[str] = DEFAULT_LETTERS) -> CorpusStats:
    """Single-pass counting of letters and adjacent in-word letter pairs."""
    letter_list = _normalize_letters(letters)
    members = set(letter_list)
    counts = dict.fromkeys(letter_list, 0)
    pair_counts: dict[tuple[str, str], int] = {}
    prev: str | None = None
    chunks: Iterable[str] = (text,) if isinstance(text, str) else text
    for chunk in chunks:
        for ch in chunk:
            c = ch.lower()
            if c in members:
                counts[c] += 1
                if prev is not None:
                    pair = (prev, c)
                    pair_counts[pair] = pair_counts.get(pair, 0) + 1
                prev = c
            else:
                prev = None
    total = sum(counts.values())
    if total == 0:
        raise EmptyCorpusError("no configured letters found in the input")
    total_pairs = sum(pair_counts.values())
    freq = {l: counts[l] / total for l in letter_list}
    bigram = {pair: n / total_pairs for pair, n in pair_counts.items()}
    return CorpusStats(tuple(letter_list), freq, bigram, total, total_pairs)


def top_bigrams(stats: CorpusStats, k: int) -> list[tuple[tuple[str, str], float]]:
    """The k most probable bigrams; ties broken lexicographically."""
    ranked = sorted(stats.bigram_prob.items(), key=lambda item: (-item[1], item[0]))
    return ranked[: max(k, 0)]


def save_stats(stats: CorpusStats, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(stats.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_stats(path) -> CorpusStats:
    with open(path, "r", encoding="utf-8") as fh:
        return CorpusStats.from_dict(json.load(fh))
