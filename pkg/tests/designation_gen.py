"""Random designation generator covering all part classes."""

from __future__ import annotations

import random

ROMANS = ["I", "II", "III", "IV", "V", "IX", "X", "XI", "XIV", "XL", "C", "MCM"]
CYR_UP = "АБВГДЕЁЖЗИК"
CYR_LOW = "абвгдеёжзик"
LAT_UP = "ABCDEFGHKOX"
LAT_LOW = "abcdefghkox"
SEPS = "-/()"


def random_part(rng: random.Random) -> str:
    kind = rng.randrange(6)
    if kind == 0:  # arabic, sometimes zero padded
        n = str(rng.randrange(0, 120))
        if rng.random() < 0.2:
            n = "0" * rng.randrange(1, 3) + n
        return n
    if kind == 1:
        return rng.choice(ROMANS)
    if kind == 2:
        return "".join(rng.choice(CYR_UP + CYR_LOW) for _ in range(rng.randrange(1, 4)))
    if kind == 3:
        return "".join(rng.choice(LAT_UP + LAT_LOW) for _ in range(rng.randrange(1, 4)))
    # mixed runs
    out = []
    for _ in range(rng.randrange(2, 4)):
        pick = rng.randrange(3)
        if pick == 0:
            out.append(str(rng.randrange(0, 60)))
        elif pick == 1:
            out.append(rng.choice(CYR_UP + CYR_LOW))
        else:
            out.append(rng.choice(LAT_UP + LAT_LOW))
    return "".join(out)


def random_designation(rng: random.Random) -> str:
    n_parts = rng.randrange(1, 5)
    pieces: list[str] = []
    if rng.random() < 0.25:
        pieces.append(rng.choice(SEPS))
    for i in range(n_parts):
        pieces.append(random_part(rng))
        if i < n_parts - 1:
            pieces.append(rng.choice(SEPS))
            while rng.random() < 0.08:
                pieces.append(rng.choice(SEPS))
    if rng.random() < 0.25:
        pieces.append(rng.choice(SEPS))
    return "".join(pieces)


def corpus(seed: int, size: int) -> list[str]:
    rng = random.Random(seed)
    return [random_designation(rng) for _ in range(size)]
