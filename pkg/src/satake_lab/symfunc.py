"""Combinatorics of partitions used by the character calculus.

Partitions are plain tuples of positive integers in non-increasing order.
Everything here is exact integer arithmetic and memoised with
``functools.lru_cache`` (whose cache bookkeeping is thread safe).
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial
from typing import Iterator

Partition = tuple[int, ...]


def strip_zeros(parts) -> Partition:
    return tuple(int(p) for p in parts if p != 0)


def partitions(n: int, max_part: int | None = None, max_len: int | None = None) -> Iterator[Partition]:
    """Yield partitions of ``n`` in reverse-lexicographic order."""
    if max_part is None:
        max_part = n
    if max_len is None:
        max_len = n
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        if first * max_len < n:
            break
        for rest in partitions(n - first, first, max_len - 1):
            yield (first,) + rest


def dominated_by(lam: Partition, mu: Partition) -> bool:
    """True when ``lam <= mu`` in dominance order (equal sizes assumed)."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a > b:
            return False
    return True


def z_centralizer(mu: Partition) -> int:
    """Order of the centralizer of a permutation of cycle type ``mu``."""
    out = 1
    for part, mult in Counter(mu).items():
        out *= part**mult * factorial(mult)
    return out


# ---------------------------------------------------------------------------
# Murnaghan-Nakayama via beta-sets


def _beta_set(lam: Partition, length: int) -> tuple[int, ...]:
    padded = tuple(lam) + (0,) * (length - len(lam))
    return tuple(padded[i] + length - 1 - i for i in range(length))


@lru_cache(maxsize=None)
def _mn_beta(beta: tuple[int, ...], mu: Partition) -> int:
    if not mu:
        return 1
    m, rest = mu[0], mu[1:]
    members = set(beta)
    total = 0
    for b in beta:
        nb = b - m
        if nb < 0 or nb in members:
            continue
        between = sum(1 for x in beta if nb < x < b)
        new = tuple(sorted((members - {b}) | {nb}, reverse=True))
        term = _mn_beta(new, rest)
        total += -term if between % 2 else term
    return total


def sn_character(lam: Partition, mu: Partition) -> int:
    """Irreducible symmetric-group character chi^lam at cycle type mu."""
    lam, mu = strip_zeros(lam), strip_zeros(mu)
    if sum(lam) != sum(mu):
        raise ValueError("partition sizes differ")
    # Removing the largest cycles first keeps the recursion shallow.
    return _mn_beta(_beta_set(lam, len(lam)), tuple(sorted(mu, reverse=True)))


# ---------------------------------------------------------------------------
# Horizontal strips, Kostka numbers, Littlewood-Richardson


def _strips_added(kappa: Partition, size: int, max_rows: int) -> Iterator[Partition]:
    """Shapes lam containing kappa with lam/kappa a horizontal strip of ``size`` boxes."""
    rows = list(kappa) + [0] * (max_rows - len(kappa))
    rows = rows[:max_rows]
    out = [0] * len(rows)

    def rec(i: int, left: int) -> Iterator[Partition]:
        if i == len(rows):
            if left == 0:
                yield strip_zeros(out)
            return
        cap = left if i == 0 else min(left, rows[i - 1] - rows[i])
        for add in range(cap, -1, -1):
            out[i] = rows[i] + add
            yield from rec(i + 1, left - add)

    yield from rec(0, size)


def _strips_removed(lam: Partition, size: int) -> Iterator[Partition]:
    """Shapes kappa inside lam with lam/kappa a horizontal strip of ``size`` boxes."""
    rows = list(lam)
    out = [0] * len(rows)

    def rec(i: int, left: int) -> Iterator[Partition]:
        if i == len(rows):
            if left == 0:
                yield strip_zeros(out)
            return
        floor = rows[i + 1] if i + 1 < len(rows) else 0
        for take in range(min(left, rows[i] - floor), -1, -1):
            out[i] = rows[i] - take
            yield from rec(i + 1, left - take)

    yield from rec(0, size)


@lru_cache(maxsize=None)
def kostka(lam: Partition, content: tuple[int, ...]) -> int:
    """Number of semistandard tableaux of shape ``lam`` with the given content.

    The content may be any sequence of non-negative integers; the count is
    symmetric in it, so it is sorted first to improve cache reuse.
    """
    lam = strip_zeros(lam)
    content = tuple(sorted((c for c in content if c), reverse=True))
    if sum(lam) != sum(content):
        return 0
    if not content:
        return 1
    if len(lam) > len(content):
        return 0
    last, rest = content[-1], content[:-1]
    return sum(kostka(kappa, rest) for kappa in _strips_removed(lam, last))


def lr_product(mu: Partition, nu: Partition, max_rows: int | None = None) -> dict[Partition, int]:
    """Littlewood-Richardson expansion of s_mu * s_nu, truncated to ``max_rows`` rows."""
    mu, nu = strip_zeros(mu), strip_zeros(nu)
    if max_rows is None:
        max_rows = len(mu) + len(nu)
    if len(mu) > max_rows or len(nu) > max_rows:
        return {}
    return dict(_lr(mu, nu, max_rows))


@lru_cache(maxsize=None)
def _lr(mu: Partition, nu: Partition, max_rows: int) -> tuple[tuple[Partition, int], ...]:
    # State: (shape, counts) where counts[i] is the number of boxes with the
    # previous label in row i; the lattice condition only compares
    # consecutive labels.
    start = (mu, (0,) * max_rows)
    states: Counter = Counter({start: 1})
    for label, size in enumerate(nu):
        nxt: Counter = Counter()
        for (shape, prev), mult in states.items():
            base = list(shape) + [0] * (max_rows - len(shape))
            for lam in _strips_added(shape, size, max_rows):
                full = list(lam) + [0] * (max_rows - len(lam))
                added = tuple(full[i] - base[i] for i in range(max_rows))
                if label > 0:
                    ok, have_prev, have_cur = True, 0, 0
                    for i in range(max_rows):
                        have_cur += added[i]
                        if have_cur > have_prev:
                            ok = False
                            break
                        have_prev += prev[i]
                    if not ok:
                        continue
                nxt[(lam, added)] += mult
        states = nxt
    result: Counter = Counter()
    for (shape, _), mult in states.items():
        result[shape] += mult
    return tuple(sorted(result.items(), reverse=True))


# ---------------------------------------------------------------------------
# Semistandard tableaux (oracle path)


def ssyt_contents(lam: Partition, n: int) -> Counter:
    """Multiset of contents of all semistandard tableaux of shape lam in 1..n."""
    lam = strip_zeros(lam)
    cells = [(i, j) for i, row in enumerate(lam) for j in range(row)]
    filling: dict[tuple[int, int], int] = {}
    content = [0] * n
    found: Counter = Counter()

    def rec(k: int) -> None:
        if k == len(cells):
            found[tuple(content)] += 1
            return
        i, j = cells[k]
        lo = 1
        if j > 0:
            lo = max(lo, filling[(i, j - 1)])
        if i > 0:
            lo = max(lo, filling[(i - 1, j)] + 1)
        # Column strictness caps the entry: rows below need room.
        hi = n - (len([r for r in lam[i + 1:] if r > j]))
        for v in range(lo, hi + 1):
            filling[(i, j)] = v
            content[v - 1] += 1
            rec(k + 1)
            content[v - 1] -= 1
        filling.pop((i, j), None)

    rec(0)
    return found


def clear_caches() -> None:
    _mn_beta.cache_clear()
    kostka.cache_clear()
    _lr.cache_clear()
