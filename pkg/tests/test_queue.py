import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itplan.queue import LexQueue


def test_lexicographic_order():
    q = LexQueue()
    q.push("a", (1.0, 2.0, 0))
    q.push("b", (1.0, 1.0, 1))
    q.push("c", (0.5, 9.0, 2))
    assert [q.pop()[0] for _ in range(3)] == ["c", "b", "a"]


def test_push_updates_key():
    q = LexQueue()
    q.push("a", (3.0,))
    q.push("b", (2.0,))
    q.push("a", (1.0,))
    assert len(q) == 2
    assert q.pop() == ("a", (1.0,))
    assert q.pop() == ("b", (2.0,))
    assert not q


def test_remove_and_contains():
    q = LexQueue()
    q.push(1, (1.0,))
    q.push(2, (2.0,))
    assert q.remove(1) and not q.remove(1)
    assert 1 not in q and 2 in q
    assert q.peek() == (2, (2.0,))


def test_empty_behaviour():
    q = LexQueue()
    assert q.peek() is None and q.peek_key() is None
    with pytest.raises(IndexError):
        q.pop()


def test_ordered_does_not_mutate():
    q = LexQueue()
    for i, k in enumerate([5, 3, 4]):
        q.push(i, (k, i))
    assert [x for x, _ in q.ordered()] == [1, 2, 0]
    assert len(q) == 3


ops = st.lists(
    st.tuples(st.sampled_from(["push", "remove", "pop"]), st.integers(0, 15), st.integers(0, 5), st.integers(0, 5)),
    max_size=300,
)


@settings(max_examples=300, deadline=None)
@given(ops)
def test_matches_sorted_dict_oracle(seq):
    q, ref = LexQueue(), {}
    for op, item, k1, k2 in seq:
        if op == "push":
            key = (float(k1), float(k2), item)
            q.push(item, key)
            ref[item] = key
        elif op == "remove":
            assert q.remove(item) == (item in ref)
            ref.pop(item, None)
        elif ref:
            best = min(ref, key=ref.get)
            assert q.pop() == (best, ref.pop(best))
        assert len(q) == len(ref)
        if ref:
            assert q.peek_key() == min(ref.values())
    assert list(q.ordered()) == sorted(ref.items(), key=lambda kv: kv[1])


def test_heavy_churn_compacts():
    rng = random.Random(0)
    q = LexQueue()
    for step in range(20_000):
        q.push(rng.randrange(50), (rng.random(),))
    assert len(q) == 50
    assert len(q._heap) <= 4 * 50 + 64
    keys = [q.pop()[1] for _ in range(50)]
    assert keys == sorted(keys)
