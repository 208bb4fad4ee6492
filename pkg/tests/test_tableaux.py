import itertools
import json
from collections import Counter

import pytest

from rskpath.tableaux import (
    chain_to_standard,
    column_insert,
    greene,
    horizontal_strips,
    kostka,
    num_standard,
    recording_shapes,
    row_insert,
    rs,
    rs_inverse,
    semistandard_tableaux,
    shape,
    standard_to_chain,
    strip_zeros,
    tableau_from_array,
    tableau_from_json,
    tableau_to_json,
    validate_tableau,
    weight,
)

RUNNING_EXAMPLE = [3, 1, 1, 2, 3, 2, 2]

# tableau after each letter of the running example
EXAMPLE_TABLEAUX = [
    (),
    ((3,),),
    ((1, 3),),
    ((1, 1, 3),),
    ((1, 1, 3), (2,)),
    ((1, 1, 3), (2,), (3,)),
    ((1, 1, 3), (2, 2), (3,)),
    ((1, 1, 2, 3), (2, 2), (3,)),
]


def words(k, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(1, k + 1), repeat=n)


def test_validate_tableau():
    validate_tableau([[1, 1, 2], [2, 3]])
    for bad in (
        [[1, 3], [2, 3]],  # column tie
        [[2, 1]],  # row decreasing
        [[1], [1, 2]],  # widening row
        [[0]],  # nonpositive entry
        [[1], []],  # empty row
    ):
        with pytest.raises(ValueError):
            validate_tableau(bad)


def test_column_insert_examples():
    assert column_insert(((2,),), 1) == ((1, 2),)
    assert column_insert(EXAMPLE_TABLEAUX[6], 2) == EXAMPLE_TABLEAUX[7]


def test_row_insert_example():
    assert row_insert(((1, 2),), 1) == ((1, 1), (2,))
    assert row_insert((), 5) == ((5,),)


def test_insertion_sequence_of_running_example():
    t = ()
    for n, a in enumerate(RUNNING_EXAMPLE, start=1):
        t = column_insert(t, a)
        assert t == EXAMPLE_TABLEAUX[n]


def test_rs_running_example():
    p, q = rs(RUNNING_EXAMPLE)
    assert p == ((1, 1, 2, 3), (2, 2), (3,))
    assert q == ((1, 2, 3, 7), (4, 6), (5,))
    assert recording_shapes(RUNNING_EXAMPLE) == (
        (1,),
        (2,),
        (3,),
        (3, 1),
        (3, 1, 1),
        (3, 2, 1),
        (4, 2, 1),
    )


def test_insertions_always_produce_tableaux():
    for word in words(3, 6):
        p, q = rs(word)
        validate_tableau(p) if p else None
        validate_tableau(q) if q else None
        assert shape(p) == shape(q)
        assert weight(p, 3) == tuple(word.count(i) for i in (1, 2, 3))


def test_column_equals_row_of_reversed_word():
    for word in words(3, 6):
        assert rs(word, "column").p == rs(word[::-1], "row").p


def test_rs_is_invertible():
    for mode in ("column", "row"):
        seen = {}
        for word in words(3, 5):
            pair = rs(word, mode)
            assert rs_inverse(pair.p, pair.q, mode) == list(word)
            assert pair not in seen
            seen[pair] = word


def test_word_counts_by_shape():
    # the insertion bijection implies
    # #{words of length n with shape L} = num_standard(L) * #SSYT(L, <= k)
    k, n = 3, 5
    by_shape = Counter(shape(rs(word).p) for word in itertools.product(range(1, k + 1), repeat=n))
    for lam, count in by_shape.items():
        ssyt_count = sum(1 for _ in semistandard_tableaux(lam, k))
        assert count == num_standard(lam) * ssyt_count


def test_tableau_from_array_matches_insertion():
    from rskpath.paths import word_to_walk
    from rskpath.transform import triangular

    for k in (2, 3):
        for word in words(k, 5):
            arr = triangular(word_to_walk(word, k))
            for n in range(len(word) + 1):
                assert tableau_from_array(arr.d_matrix(n)) == rs(word[:n]).p


def test_tableau_from_array_rejects_bad_triangle():
    with pytest.raises(ValueError):
        tableau_from_array(((1, 0), (0,)))  # stage counts decrease


def chain_count(lam):
    """Standard tableaux counted by growth chains, as an oracle."""
    lam = strip_zeros(lam)
    if sum(lam) == 0:
        return 1
    total = 0
    for r in range(len(lam)):
        if lam[r] and (r == len(lam) - 1 or lam[r] > lam[r + 1]):
            smaller = lam[:r] + (lam[r] - 1,) + lam[r + 1 :]
            total += chain_count(smaller)
    return total


def partitions(n, max_parts):
    def rec(remaining, cap, acc):
        if remaining == 0:
            yield tuple(acc)
            return
        if len(acc) == max_parts:
            return
        for part in range(min(cap, remaining), 0, -1):
            acc.append(part)
            yield from rec(remaining - part, part, acc)
            acc.pop()

    yield from rec(n, n, [])


def test_num_standard_against_chain_enumeration():
    assert num_standard((2, 1)) == 2
    assert num_standard(()) == 1
    assert num_standard((4, 2, 1)) == 35
    for n in range(1, 9):
        for lam in partitions(n, 4):
            assert num_standard(lam) == chain_count(lam)
    with pytest.raises(ValueError):
        num_standard((1, 2))


def test_kostka_examples_and_brute_force():
    assert kostka((2, 1), (1, 1, 1)) == 2
    assert kostka((2, 1), (2, 1)) == 1
    assert kostka((2, 1), (3,)) == 0
    for n in range(1, 7):
        for lam in partitions(n, 3):
            for mu in itertools.product(range(n + 1), repeat=3):
                if sum(mu) != n:
                    continue
                brute = sum(
                    1
                    for t in semistandard_tableaux(lam, 3)
                    if weight(t, 3) == mu
                )
                assert kostka(lam, mu) == brute


def test_kostka_symmetric_in_weight():
    for lam in partitions(5, 3):
        for mu in itertools.permutations((2, 2, 1)):
            assert kostka(lam, mu) == kostka(lam, (2, 2, 1))


def test_semistandard_tableaux_are_valid_and_complete():
    got = set(semistandard_tableaux((2, 1), 3))
    assert len(got) == 8
    for t in got:
        validate_tableau(t)
        assert shape(t) == (2, 1)
    # against a direct filter over all fillings
    brute = set()
    for a, b, c in itertools.product((1, 2, 3), repeat=3):
        try:
            brute.add(validate_tableau(((a, b), (c,))))
        except ValueError:
            pass
    assert got == brute


def test_horizontal_strips():
    assert set(horizontal_strips((2, 1), 2)) == {
        (4, 1),
        (3, 2),
        (3, 1, 1),
        (2, 2, 1),
    }
    assert list(horizontal_strips((), 3)) == [(3,)]
    assert list(horizontal_strips((2,), 0)) == [(2,)]


def brute_greene(word, i):
    """Assign each position to one of i subsequences or drop it."""
    best = 0
    n = len(word)
    for labels in itertools.product(range(i + 1), repeat=n):
        ok = True
        for s in range(1, i + 1):
            sub = [word[p] for p in range(n) if labels[p] == s]
            if any(a > b for a, b in zip(sub, sub[1:])):
                ok = False
                break
        if ok:
            best = max(best, sum(1 for l in labels if l))
    return best


def test_greene_against_brute_force():
    rev = RUNNING_EXAMPLE[::-1]
    assert [greene(rev, i) for i in (1, 2, 3)] == [4, 6, 7]
    for word in words(3, 5):
        for i in (1, 2, 3):
            assert greene(word, i) == brute_greene(word, i)
    assert greene([], 2) == 0
    assert greene([1, 2], 0) == 0


def test_greene_matches_shape_partial_sums():
    for word in words(3, 6):
        lam = shape(rs(word).p)
        for i in (1, 2, 3):
            assert greene(word[::-1], i) == sum(lam[:i])


def test_chain_conversions():
    chain = recording_shapes(RUNNING_EXAMPLE)
    q = chain_to_standard(chain)
    assert q == rs(RUNNING_EXAMPLE).q
    assert standard_to_chain(q) == chain
    with pytest.raises(ValueError):
        standard_to_chain(((1, 4), (2,)))  # entries are not 1..n
    assert chain_to_standard(()) == ()


def test_json_roundtrip():
    t = ((1, 1, 2, 3), (2, 2), (3,))
    assert tableau_from_json(tableau_to_json(t)) == t
    assert json.loads(tableau_to_json(t)) == {
        "rows": [[1, 1, 2, 3], [2, 2], [3]]
    }
    with pytest.raises(ValueError):
        tableau_from_json('{"rows": [[2, 1]]}')
