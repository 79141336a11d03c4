import numpy as np
import pytest

from topkolors.docs import (
    DocumentCollection,
    DocumentIndex,
    RangeHeapMerger,
    build_suffix_array,
    merge_ranges_topk,
    naive_ranked_list,
    naive_suffix_array,
    naive_t_mine,
    relevance_weights,
)
from topkolors.errors import (
    BadParameter,
    EmptyArray,
    OverlappingRanges,
    SeparatorInContent,
    UnsupportedT,
)
from topkolors.model import new_color_array, oracle_topk
from topkolors.optimal import OptimalTopK


def test_suffix_array_matches_naive_random():
    rng = np.random.default_rng(31)
    for n in (1, 2, 7, 50, 200):
        for _ in range(4):
            text = bytes(rng.integers(0, 4, size=n).astype(np.uint8))
            got = [int(v) for v in build_suffix_array(text)]
            assert got == naive_suffix_array(text), text


def test_two_doc_worked_example():
    coll = DocumentCollection(["ab", "ba"])
    assert coll.text == b"ab\x00ba\x00"
    assert [int(v) for v in build_suffix_array(coll.text)] == [5, 2, 4, 0, 1, 3]
    ix = DocumentIndex(coll, {0: 3, 1: 9})
    # slots in suffix order carry owning docs, separators the dummy color
    assert [int(c) for c in ix.arr.colors] == [2, 2, 1, 0, 0, 1]
    assert ix.pattern_range("a") == (3, 4)
    assert ix.pattern_range("b") == (5, 6)
    assert ix.pattern_range("ab") == (4, 4)
    assert ix.pattern_range("ba") == (6, 6)
    assert ix.pattern_range("c") is None
    assert ix.ranked_list("a", 2) == [(1, 9), (0, 3)]
    assert ix.ranked_list("ab", 2) == [(0, 3)]
    assert ix.ranked_list("c", 3) == []


def test_ranked_list_three_docs():
    coll = DocumentCollection(["abab", "bab", "ca"])
    ix = DocumentIndex(coll, {0: 3, 1: 9, 2: 5})
    assert ix.ranked_list("ab", 2) == [(1, 9), (0, 3)]
    assert ix.ranked_list("ab", 1) == [(1, 9)]
    assert ix.ranked_list("ca", 3) == [(2, 5)]
    assert ix.ranked_list("bab", 3) == [(1, 9), (0, 3)]


def test_t_mine_worked_example():
    coll = DocumentCollection(["ababab", "abba"])
    ix = DocumentIndex(coll, {0: 2, 1: 6})
    assert ix.t_values == [1, 2, 4]
    assert ix.t_mine("ab", 1, 2) == [(1, 6), (0, 2)]
    assert ix.t_mine("ab", 2, 5) == [(0, 2)]
    assert ix.t_mine("ab", 4, 5) == []
    assert ix.t_mine("b", 2, 5) == [(1, 6), (0, 2)]
    # above every document length: trivially empty, no threshold needed
    assert ix.t_mine("ab", 7, 1) == []
    with pytest.raises(UnsupportedT):
        ix.t_mine("ab", 3, 1)


def test_custom_t_values():
    coll = DocumentCollection(["ababab", "abba"])
    ix = DocumentIndex(coll, {0: 2, 1: 6}, t_values=[1, 3])
    assert ix.t_mine("ab", 3, 2) == [(0, 2)]
    with pytest.raises(UnsupportedT):
        ix.t_mine("ab", 2, 1)
    with pytest.raises(BadParameter):
        DocumentIndex(coll, {0: 2, 1: 6}, t_values=[0])


def test_input_validation():
    with pytest.raises(EmptyArray):
        DocumentCollection([])
    with pytest.raises(EmptyArray):
        DocumentCollection(["ok", ""])
    with pytest.raises(SeparatorInContent):
        DocumentCollection([b"a\x00b"])
    coll = DocumentCollection(["abc"])
    ix = DocumentIndex(coll, {0: 1})
    with pytest.raises(BadParameter):
        ix.ranked_list("", 1)
    with pytest.raises(SeparatorInContent):
        ix.ranked_list(b"a\x00", 1)
    with pytest.raises(BadParameter):
        ix.ranked_list("a", 0)
    with pytest.raises(BadParameter):
        ix.t_mine("a", 0, 1)
    with pytest.raises(BadParameter):
        ix.occurrence_count(5, "a")


def random_collection(rng, num_docs, max_len, alphabet=b"ab"):
    docs = []
    for _ in range(num_docs):
        length = int(rng.integers(1, max_len + 1))
        docs.append(bytes(alphabet[int(i)] for i in rng.integers(0, len(alphabet), length)))
    return DocumentCollection(docs)


def all_patterns(coll, max_len):
    pats = set()
    for d in coll.docs:
        for i in range(len(d)):
            for m in range(1, max_len + 1):
                if i + m <= len(d):
                    pats.add(d[i : i + m])
    return sorted(pats)


def test_pattern_range_exhaustive_small():
    rng = np.random.default_rng(32)
    coll = random_collection(rng, 5, 8)
    ix = DocumentIndex(coll, {j: j + 1 for j in range(5)})
    sa = [int(v) for v in ix.suffix_array]
    text = coll.text
    for p in all_patterns(coll, 3) + [b"zz", b"aaaaaaaaaa"]:
        starts = {i for i in range(len(text)) if text[i : i + len(p)] == p}
        rng_got = ix.pattern_range(p)
        if not starts:
            assert rng_got is None
            continue
        a, b = rng_got
        assert {sa[i - 1] for i in range(a, b + 1)} == starts


def test_occurrence_count_matches_scan():
    rng = np.random.default_rng(33)
    coll = random_collection(rng, 6, 12)
    ix = DocumentIndex(coll, {j: 10 * j for j in range(6)})
    for p in all_patterns(coll, 3):
        for j in range(coll.num_docs):
            assert ix.occurrence_count(j, p) == coll.count_occurrences(j, p)


def test_t_mine_matches_naive_exhaustive():
    rng = np.random.default_rng(34)
    for trial in range(6):
        coll = random_collection(rng, 8, 14)
        weights = {j: int(w) for j, w in enumerate(rng.permutation(8) * 3)}
        ix = DocumentIndex(coll, weights)
        for p in all_patterns(coll, 2):
            for t in ix.t_values:
                for k in (1, 3, 8):
                    got = ix.t_mine(p, t, k)
                    assert got == naive_t_mine(coll, weights, p, t, k), (
                        trial, p, t, k,
                    )
            for k in (1, 4):
                assert ix.ranked_list(p, k) == naive_ranked_list(
                    coll, weights, p, k
                )


def test_t_mine_equal_weights_tie_break():
    coll = DocumentCollection(["aa", "aa", "aa"])
    ix = DocumentIndex(coll, {0: 5, 1: 5, 2: 5})
    assert ix.t_mine("a", 2, 3) == [(2, 5), (1, 5), (0, 5)]
    assert ix.ranked_list("aa", 2) == [(2, 5), (1, 5)]


def test_relevance_weights_fixture():
    coll = DocumentCollection(["abab", "axxab", "b"])
    assert relevance_weights(coll, "ab", "freq") == {0: 2, 1: 1, 2: 0}
    # closest pair in doc 0 sits 2 apart; docs without a pair score 0
    assert relevance_weights(coll, "ab", "mindist") == {0: 4, 1: 0, 2: 0}
    with pytest.raises(BadParameter):
        relevance_weights(coll, "ab", "nope")


MERGE_ARR = new_color_array(
    [0, 1, 2, 3, 4, 5], {0: 5, 1: 1, 2: 9, 3: 2, 4: 7, 5: 3}
)


def test_merger_worked_example():
    ix = OptimalTopK(MERGE_ARR)
    got = merge_ranges_topk(ix, [(1, 2), (3, 4), (5, 6)], 3)
    assert got == [(2, 9), (4, 7), (0, 5)]
    assert [p for _, p in got] == [9, 7, 5]


def test_merger_keeps_duplicates_across_ranges():
    arr = new_color_array([0, 0], {0: 7})
    ix = OptimalTopK(arr)
    assert merge_ranges_topk(ix, [(1, 1), (2, 2)], 2) == [(0, 7), (0, 7)]


def test_merger_validates_overlap():
    ix = OptimalTopK(MERGE_ARR)
    with pytest.raises(OverlappingRanges):
        RangeHeapMerger(ix, [(1, 3), (3, 5)])
    with pytest.raises(OverlappingRanges):
        RangeHeapMerger(ix, [(4, 6), (1, 4)])
    # disjoint but unsorted input is fine
    assert merge_ranges_topk(ix, [(5, 6), (1, 2)], 2) == [(4, 7), (0, 5)]


def test_merger_matches_flatten_oracle():
    rng = np.random.default_rng(35)
    raw = rng.integers(0, 12, size=80)
    _, dense = np.unique(raw, return_inverse=True)
    sig = int(dense.max()) + 1
    arr = new_color_array(dense, {c: int(p) for c, p in enumerate(rng.integers(0, 9, sig))})
    ix = OptimalTopK(arr)
    for _ in range(40):
        cuts = sorted(rng.choice(np.arange(1, 81), size=6, replace=False))
        ranges = []
        pos = 1
        for c in cuts:
            if pos <= c - 1:
                ranges.append((pos, c - 1))
            pos = c + 1
        if not ranges:
            continue
        for k in (1, 2, 5, 30):
            flat = []
            for a, b in ranges:
                flat.extend(oracle_topk(arr, a, b, 80))
            flat.sort(key=lambda e: (e[1], e[0]), reverse=True)
            assert merge_ranges_topk(ix, ranges, k) == flat[:k], (ranges, k)


def test_merger_seeding_discards_low_heads():
    ix = OptimalTopK(MERGE_ARR)
    # five singleton ranges, only two seats: heads 9 and 7 win
    got = merge_ranges_topk(ix, [(1, 1), (2, 2), (3, 3), (5, 5), (6, 6)], 2)
    assert got == [(2, 9), (4, 7)]
