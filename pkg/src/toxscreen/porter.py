"""Porter stemming algorithm (Porter 1980, steps 1a-5b).

This follows the author's canonical ANSI C demonstration code, including
its two departures from the published paper (``bli -> ble`` and
``logi -> log`` in step 2) and its rule of leaving words shorter than
three letters untouched.  The implementation reproduces the sample
vocabulary/output pair distributed with that code exactly; the test
suite checks all ~23k word pairs.
"""

from __future__ import annotations

from functools import lru_cache

_VOWELS = "aeiou"

# step 2 and step 4 rules are grouped by the penultimate letter of the
# word, step 3 by the final letter, mirroring the original dispatch.
_STEP2 = {
    "a": (("ational", "ate"), ("tional", "tion")),
    "c": (("enci", "ence"), ("anci", "ance")),
    "e": (("izer", "ize"),),
    "l": (("bli", "ble"), ("alli", "al"), ("entli", "ent"), ("eli", "e"),
          ("ousli", "ous")),
    "o": (("ization", "ize"), ("ation", "ate"), ("ator", "ate")),
    "s": (("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
          ("ousness", "ous")),
    "t": (("aliti", "al"), ("iviti", "ive"), ("biliti", "ble")),
    "g": (("logi", "log"),),
}

_STEP3 = {
    "e": (("icate", "ic"), ("ative", ""), ("alize", "al")),
    "i": (("iciti", "ic"),),
    "l": (("ical", "ic"), ("ful", "")),
    "s": (("ness", ""),),
}

_STEP4 = {
    "a": ("al",),
    "c": ("ance", "ence"),
    "e": ("er",),
    "i": ("ic",),
    "l": ("able", "ible"),
    "n": ("ant", "ement", "ment", "ent"),
    "o": ("ion", "ou"),
    "s": ("ism",),
    "t": ("ate", "iti"),
    "u": ("ous",),
    "v": ("ive",),
    "z": ("ize",),
}


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y is a consonant at the start of a word, and after a vowel
        return True if i == 0 else not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences ([C](VC)^m[V])."""
    n = 0
    i = 0
    ln = len(stem)
    while i < ln and _is_consonant(stem, i):
        i += 1
    while i < ln:
        while i < ln and not _is_consonant(stem, i):
            i += 1
        if i >= ln:
            break
        n += 1
        while i < ln and _is_consonant(stem, i):
            i += 1
    return n


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(stem: str) -> bool:
    """consonant-vowel-consonant ending where the final consonant is not
    w, x or y (the rule enabling e.g. hop -> hope restoration)."""
    n = len(stem)
    if n < 3:
        return False
    if not (
        _is_consonant(stem, n - 1)
        and not _is_consonant(stem, n - 2)
        and _is_consonant(stem, n - 3)
    ):
        return False
    return stem[-1] not in "wxy"


def _step1a(w: str) -> str:
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith("ies"):
        return w[:-3] + "i"
    if w.endswith("s") and len(w) >= 2 and w[-2] != "s":
        return w[:-1]
    return w


def _step1b(w: str) -> str:
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            return w[:-1]
        return w
    if w.endswith("ed"):
        stem = w[:-2]
    elif w.endswith("ing"):
        stem = w[:-3]
    else:
        return w
    if not _has_vowel(stem):
        return w
    w = stem
    if w.endswith(("at", "bl", "iz")):
        return w + "e"
    if _ends_double_consonant(w) and w[-1] not in "lsz":
        return w[:-1]
    if _measure(w) == 1 and _ends_cvc(w):
        return w + "e"
    return w


def _step1c(w: str) -> str:
    if w.endswith("y") and _has_vowel(w[:-1]):
        return w[:-1] + "i"
    return w


def _apply_rule_table(w: str, rules) -> str:
    # the first textually matching suffix settles the step, whether or
    # not its measure condition passes
    for suffix, repl in rules:
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if _measure(stem) > 0:
                return stem + repl
            return w
    return w


def _step2(w: str) -> str:
    if len(w) < 2:
        return w
    rules = _STEP2.get(w[-2])
    return _apply_rule_table(w, rules) if rules else w


def _step3(w: str) -> str:
    rules = _STEP3.get(w[-1])
    return _apply_rule_table(w, rules) if rules else w


def _step4(w: str) -> str:
    if len(w) < 2:
        return w
    suffixes = _STEP4.get(w[-2])
    if not suffixes:
        return w
    for suffix in suffixes:
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if suffix == "ion" and not stem.endswith(("s", "t")):
                continue
            if _measure(stem) > 1:
                return stem
            return w
    return w


def _step5(w: str) -> str:
    if w.endswith("e"):
        a = _measure(w[:-1])
        if a > 1 or (a == 1 and not _ends_cvc(w[:-1])):
            w = w[:-1]
    if w.endswith("ll") and _measure(w) > 1:
        w = w[:-1]
    return w


def _stem_lowercase_word(w: str) -> str:
    if len(w) < 3:
        return w
    w = _step1a(w)
    w = _step1b(w)
    w = _step1c(w)
    w = _step2(w)
    w = _step3(w)
    w = _step4(w)
    w = _step5(w)
    return w


@lru_cache(maxsize=65536)
def porter_stem(token: str) -> str:
    """Stem a lowercase alphabetic token; anything else passes through
    unchanged (numerals, tokens with apostrophes, non-ASCII words)."""
    if not token or not all("a" <= c <= "z" for c in token):
        return token
    return _stem_lowercase_word(token)
