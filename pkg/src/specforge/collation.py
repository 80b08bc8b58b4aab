"""Collation of alphanumeric position designations.

Surveying real drawings shows position designations of wildly different
shapes; the one common trait is serial-ordinal structure, with or without
separators.  This module gives that structure a total order and a few
diagnostics on top of it:

* designations split into structural parts, left to right, on the
  separator set ``"-/()"``;
* parts are ordered part by part: numbers before letters, Arabic numerals
  before Roman, numbers ascending by value, Cyrillic letters before Latin,
  alphabetically within each alphabet, uppercase before lowercase;
* every designation maps to a structure signature (``N`` arabic number,
  ``R`` roman number, ``C`` cyrillic run, ``L`` latin run, separators kept
  in place), and signature frequencies over a drawing expose likely typos:
  wrong-alphabet letters, zero vs letter O, missing or wrong separators.

All functions are pure; tokenisation is cached, so repeated comparisons of
the same designations are cheap.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cmp_to_key, lru_cache

SEPARATORS = "-/()"

# Russian alphabetical order differs from code-point order: ё lives between
# е and ж, while Unicode parks it outside the а..я block.
RUSSIAN_ALPHABET = "абвгдеёжзийклмнопрстуфхцчшщъыьэюя"
LATIN_ALPHABET = "abcdefghijklmnopqrstuvwxyz"

_ROMAN_RE = re.compile(r"M{0,3}(CM|CD|D?C{0,3})(XC|XL|L?X{0,3})(IX|IV|V?I{0,3})")
_ROMAN_DIGITS = {"I": 1, "V": 5, "X": 10, "L": 50, "C": 100, "D": 500, "M": 1000}


@dataclass(frozen=True)
class Tokenization:
    """A designation split into parts and separators, losslessly.

    ``separators`` holds ``(gap, char)`` pairs where ``gap`` counts the
    parts seen before the separator: 0 = before the first part,
    ``len(parts)`` = after the last part.  Several separators may share a
    gap; their relative order is the source order.
    """

    text: str
    parts: tuple[str, ...]
    separators: tuple[tuple[int, str], ...]

    def reassemble(self) -> str:
        out: list[str] = []
        for gap in range(len(self.parts) + 1):
            out.extend(ch for g, ch in self.separators if g == gap)
            if gap < len(self.parts):
                out.append(self.parts[gap])
        return "".join(out)


@dataclass(frozen=True)
class Run:
    """A maximal same-class character run inside a part."""

    cls: str  # "N" digits, "C" cyrillic, "L" latin (and anything else)
    text: str


@dataclass(frozen=True)
class AnomalyHint:
    designation: str
    kind: str  # "alphabet_confusion" | "zero_oh_confusion" | "separator_anomaly"
    evidence: str


@dataclass(frozen=True)
class AnomalyConfig:
    """Frequency thresholds for the structure-based anomaly hints."""

    rare_max: int = 1
    frequent_min: int = 3


def tokenize(designation: str) -> Tokenization:
    """Split a designation into parts and separators.

    Lossless: reassembling separators and parts reproduces the trimmed
    input exactly.  Consecutive separators produce no empty parts, but all
    separators are retained with their positions.
    """
    text = designation.strip()
    if not text:
        raise ValueError("designation is empty")
    return _tokenize_cached(text)


@lru_cache(maxsize=65536)
def _tokenize_cached(text: str) -> Tokenization:
    parts: list[str] = []
    separators: list[tuple[int, str]] = []
    buf: list[str] = []
    for ch in text:
        if ch in SEPARATORS:
            if buf:
                parts.append("".join(buf))
                buf.clear()
            separators.append((len(parts), ch))
        else:
            buf.append(ch)
    if buf:
        parts.append("".join(buf))
    return Tokenization(text=text, parts=tuple(parts), separators=tuple(separators))


def _char_class(ch: str) -> str:
    if "0" <= ch <= "9":
        return "N"
    if "Ѐ" <= ch <= "ӿ":
        return "C"
    # Latin letters; anything foreign is folded into the Latin run and can
    # surface in anomaly evidence.
    return "L"


def split_runs(part: str) -> tuple[Run, ...]:
    runs: list[Run] = []
    for ch in part:
        cls = _char_class(ch)
        if runs and runs[-1].cls == cls:
            runs[-1] = Run(cls, runs[-1].text + ch)
        else:
            runs.append(Run(cls, ch))
    return tuple(runs)


def is_roman(part: str) -> bool:
    """Whole-part Roman numeral check: uppercase Latin, strict grammar."""
    return bool(part) and all(ch in _ROMAN_DIGITS for ch in part) and bool(
        _ROMAN_RE.fullmatch(part)
    )


def roman_value(part: str) -> int:
    total = 0
    prev = 0
    for ch in reversed(part):
        v = _ROMAN_DIGITS[ch]
        total += v if v >= prev else -v
        prev = max(prev, v)
    return total


def classify_part(part: str) -> str:
    """Classify a part: arabic | roman | cyrillic | latin | mixed."""
    runs = split_runs(part)
    if len(runs) == 1:
        run = runs[0]
        if run.cls == "N":
            return "arabic"
        if run.cls == "C":
            return "cyrillic"
        if is_roman(part):
            return "roman"
        if all(ch.isascii() and ch.isalpha() for ch in part):
            return "latin"
    return "mixed"


@dataclass(frozen=True)
class _CompRun:
    kind: str  # "arabic" | "roman" | "cyr" | "lat"
    text: str
    value: int = 0


def _comparable_runs(part: str) -> tuple[_CompRun, ...]:
    if is_roman(part):
        return (_CompRun("roman", part, roman_value(part)),)
    out: list[_CompRun] = []
    for run in split_runs(part):
        if run.cls == "N":
            out.append(_CompRun("arabic", run.text, int(run.text)))
        elif run.cls == "C":
            out.append(_CompRun("cyr", run.text))
        else:
            out.append(_CompRun("lat", run.text))
    return tuple(out)


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def _letter_position(ch: str) -> int:
    folded = ch.casefold()
    idx = RUSSIAN_ALPHABET.find(folded)
    if idx >= 0:
        return idx
    idx = LATIN_ALPHABET.find(folded)
    if idx >= 0:
        return idx
    # Foreign characters sort after proper letters, by code point.
    return 100 + ord(folded)


def _folded_positions(text: str) -> tuple[int, ...]:
    positions: list[int] = []
    for ch in text:
        for sub in ch.casefold():
            positions.append(_letter_position(sub))
    return tuple(positions)


def _case_pattern(text: str) -> tuple[int, ...]:
    return tuple(1 if ch.islower() else 0 for ch in text)


def _compare_runs(ra: _CompRun, rb: _CompRun) -> int:
    num_a = ra.kind in ("arabic", "roman")
    num_b = rb.kind in ("arabic", "roman")
    if num_a != num_b:
        return -1 if num_a else 1  # numbers before letters
    if num_a:
        if ra.kind != rb.kind:
            return -1 if ra.kind == "arabic" else 1  # arabic before roman
        if ra.value != rb.value:
            return _cmp(ra.value, rb.value)
        # Same value, different zero padding: fewer digits first, so the
        # order stays consistent with "equal means identical tokenization".
        return _cmp(len(ra.text), len(rb.text))
    alpha_a = 0 if ra.kind == "cyr" else 1
    alpha_b = 0 if rb.kind == "cyr" else 1
    if alpha_a != alpha_b:
        return _cmp(alpha_a, alpha_b)  # cyrillic before latin
    c = _cmp(_folded_positions(ra.text), _folded_positions(rb.text))
    if c:
        return c
    return _cmp(_case_pattern(ra.text), _case_pattern(rb.text))


def _compare_parts(pa: str, pb: str) -> int:
    if pa == pb:
        return 0
    runs_a = _comparable_runs(pa)
    runs_b = _comparable_runs(pb)
    for ra, rb in zip(runs_a, runs_b):
        c = _compare_runs(ra, rb)
        if c:
            return c
    return _cmp(len(runs_a), len(runs_b))


def compare(a: str, b: str) -> int:
    """Total order over designations; negative, zero or positive.

    Equal (0) holds exactly when the two designations have identical
    tokenizations, i.e. the same trimmed text.
    """
    ta = tokenize(a)
    tb = tokenize(b)
    for pa, pb in zip(ta.parts, tb.parts):
        c = _compare_parts(pa, pb)
        if c:
            return c
    c = _cmp(len(ta.parts), len(tb.parts))
    if c:
        return c
    sa = [(SEPARATORS.index(ch), gap) for gap, ch in ta.separators]
    sb = [(SEPARATORS.index(ch), gap) for gap, ch in tb.separators]
    return _cmp(sa, sb)


sort_key = cmp_to_key(compare)


def sort_designations(designations: list[str]) -> list[str]:
    return sorted(designations, key=sort_key)


def _part_signature(part: str) -> str:
    if is_roman(part):
        return "R"
    return "".join(run.cls for run in split_runs(part))


def signature(designation: str) -> str:
    """Structure signature with original separators interleaved."""
    t = tokenize(designation)
    out: list[str] = []
    for gap in range(len(t.parts) + 1):
        out.extend(ch for g, ch in t.separators if g == gap)
        if gap < len(t.parts):
            out.append(_part_signature(t.parts[gap]))
    return "".join(out)


def structure_frequencies(designations: list[str]) -> dict[str, int]:
    """Signature -> count, iterating by descending count then signature."""
    counts = Counter(signature(d) for d in designations)
    return dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))


_SWAP_CL = str.maketrans("CL", "LC")
_OH_CHARS = "OoОо"


def _swap_signature(sig: str) -> str:
    return sig.translate(_SWAP_CL)


def _has_latin_letter(run: Run) -> bool:
    return run.cls == "L" and any(ch.isascii() and ch.isalpha() for ch in run.text)


def _mixed_alphabet_parts(designation: str) -> list[str]:
    bad: list[str] = []
    for part in tokenize(designation).parts:
        runs = split_runs(part)
        for prev, cur in zip(runs, runs[1:]):
            pair = (prev, cur)
            if any(r.cls == "C" for r in pair) and any(_has_latin_letter(r) for r in pair):
                bad.append(part)
                break
    return bad


def _zero_oh_variants(designation: str) -> list[tuple[str, str]]:
    """One-run O<->0 replacement variants as (description, new text)."""
    t = tokenize(designation)
    variants: list[tuple[str, str]] = []
    for part in t.parts:
        for run in split_runs(part):
            if run.cls in ("C", "L") and any(ch in _OH_CHARS for ch in run.text):
                fixed = "".join("0" if ch in _OH_CHARS else ch for ch in run.text)
                variants.append(
                    (f"'{run.text}' -> '{fixed}'", designation.replace(run.text, fixed, 1))
                )
            elif run.cls == "N" and "0" in run.text:
                for letter in ("O", "О"):
                    fixed = run.text.replace("0", letter)
                    variants.append(
                        (f"'{run.text}' -> '{fixed}'", designation.replace(run.text, fixed, 1))
                    )
    return variants


def _separator_edits(sig: str) -> list[str]:
    edits: list[str] = []
    for i, ch in enumerate(sig):
        if ch in SEPARATORS:
            edits.append(sig[:i] + sig[i + 1 :])
    for i in range(len(sig) + 1):
        for ch in SEPARATORS:
            edits.append(sig[:i] + ch + sig[i:])
    return edits


def anomaly_hints(
    designations: list[str], config: AnomalyConfig = AnomalyConfig()
) -> list[AnomalyHint]:
    """Flag designations that look like typos against the drawing's norm.

    Hints fire on rare structures that become frequent structures after a
    plausible slip is undone: a Cyrillic/Latin alphabet mix-up, a zero
    typed as the letter O (or vice versa), a missing or wrong separator.
    Designations whose part lists coincide while separators differ are
    flagged unconditionally.
    """
    freqs = Counter(signature(d) for d in designations)
    seen: set[str] = set()
    unique: list[str] = []
    for d in designations:
        if d not in seen:
            seen.add(d)
            unique.append(d)

    by_parts: dict[tuple[str, ...], set[str]] = {}
    for d in unique:
        by_parts.setdefault(tokenize(d).parts, set()).add(d)

    hints: list[AnomalyHint] = []
    for d in unique:
        own = signature(d)
        own_count = freqs[own]

        fired_alphabet = False
        if own_count <= config.rare_max:
            swapped = _swap_signature(own)
            if swapped != own and freqs.get(swapped, 0) >= config.frequent_min:
                hints.append(
                    AnomalyHint(
                        d,
                        "alphabet_confusion",
                        f"signature {own} occurs {own_count}x, alphabet-swapped "
                        f"{swapped} occurs {freqs[swapped]}x",
                    )
                )
                fired_alphabet = True
        if not fired_alphabet:
            mixed = _mixed_alphabet_parts(d)
            if mixed:
                hints.append(
                    AnomalyHint(
                        d,
                        "alphabet_confusion",
                        "part(s) mixing Cyrillic and Latin letters: "
                        + ", ".join(repr(p) for p in mixed),
                    )
                )

        if own_count < config.frequent_min:
            for desc, variant in _zero_oh_variants(d):
                vsig = signature(variant)
                if vsig != own and freqs.get(vsig, 0) >= config.frequent_min:
                    hints.append(
                        AnomalyHint(
                            d,
                            "zero_oh_confusion",
                            f"replacing {desc} turns {own} into {vsig} "
                            f"({freqs[vsig]}x)",
                        )
                    )
                    break

        siblings = by_parts[tokenize(d).parts] - {d}
        conflicting = sorted(s for s in siblings if tokenize(s).parts == tokenize(d).parts)
        if conflicting:
            hints.append(
                AnomalyHint(
                    d,
                    "separator_anomaly",
                    "same parts, different separators: "
                    + ", ".join(repr(s) for s in conflicting),
                )
            )
        elif own_count < config.frequent_min:
            for edited in _separator_edits(own):
                if edited != own and freqs.get(edited, 0) >= config.frequent_min:
                    hints.append(
                        AnomalyHint(
                            d,
                            "separator_anomaly",
                            f"one separator edit turns {own} into frequent "
                            f"{edited} ({freqs[edited]}x)",
                        )
                    )
                    break
    return hints
