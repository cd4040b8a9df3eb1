"""Brute-force reference implementations used only by the tests.

Nothing here calls into the library's decision procedures: points are
handled as explicit (kind, symbols) data and unrolled to plain lists.
"""

import itertools


def unroll(pre, per, n):
    """First n symbols of pre · per^∞."""
    out = list(pre)
    i = 0
    while len(out) < n:
        out.append(per[i % len(per)])
        i += 1
    return tuple(out[:n])


def subblocks(word, size):
    return {tuple(word[i : i + size]) for i in range(len(word) - size + 1)}


def brute_allowed_forbidden(forbidden, word):
    return not any(tuple(word[i:j]) in forbidden for i in range(len(word)) for j in range(i + 1, len(word) + 1))


def brute_allowed_step(rule, window, word):
    return all(rule(tuple(word[i : i + window])) for i in range(len(word) - window + 1))


def all_words(n, max_len):
    for k in range(max_len + 1):
        yield from itertools.product(range(n), repeat=k)


def lassos(n, max_pre, max_per):
    """Every (pre, per) description with symbols < n, no canonicalization."""
    for a in range(max_pre + 1):
        for q in range(1, max_per + 1):
            for pre in itertools.product(range(n), repeat=a):
                for per in itertools.product(range(n), repeat=q):
                    yield pre, per


def same_sequence(d1, d2, depth=64):
    return unroll(*d1, depth) == unroll(*d2, depth)


def brute_cylinder_member(base, forbidden, kind, symbols):
    """Membership of a point given as ("finite", word) or ("inf", unrolled
    prefix long enough to cover len(base) + 1)."""
    k = len(base)
    if kind == "finite" and len(symbols) < k:
        return False
    if tuple(symbols[:k]) != tuple(base):
        return False
    if len(symbols) > k and symbols[k] in forbidden:
        return False
    return True


def sample_points(n, depth):
    """Finite words of length <= depth and infinite lassos with pre, per <= 2,
    all over symbols < n, as (kind, symbols) pairs."""
    pts = [("finite", w) for w in all_words(n, depth)]
    pts += [("inf", unroll(pre, per, depth + 2)) for pre, per in lassos(n, 2, 2)]
    return pts


def brute_extension_symbols(allowed, x, n, max_pre, max_per):
    """Symbols a < n for which some y = pre · per^∞ (symbols < n, bounded
    lengths) makes x·a·y pass ``allowed`` on a long prefix."""
    out = []
    for a in range(n):
        for pre, per in lassos(n, max_pre, max_per):
            if allowed(tuple(x) + (a,) + unroll(pre, per, 3 * (max_pre + max_per) + 8)):
                out.append(a)
                break
    return out
