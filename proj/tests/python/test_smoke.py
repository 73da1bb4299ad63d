"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import aesrank


def test_version_and_constants():
    assert aesrank.__version__ == "0.1.0"
    assert aesrank.WINDOW_ROWS == 31745
    assert aesrank.NUM_WINDOWS == 33792
    assert aesrank.SET_SIZE == 65536
    assert aesrank.AMBIENT_DIM == 32768


def test_sbox_is_the_standard_permutation():
    table = aesrank.sbox_table()
    assert len(table) == 256
    assert sorted(table) == list(range(256))
    assert table[0x00] == 0x63
    assert table[0x53] == 0xED


def test_encrypt_matches_the_published_vector():
    key = bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c")
    pt = bytes.fromhex("3243f6a8885a308d313198a2e0370734")
    assert aesrank.encrypt(key, pt).hex() == "3925841d02dc09fbdc118597196a0b32"
    # 0 rounds is bare whitening
    whitened = aesrank.encrypt(key, pt, rounds=0)
    assert whitened == bytes(a ^ b for a, b in zip(key, pt))
    with pytest.raises(ValueError):
        aesrank.encrypt(key[:-1], pt)
    with pytest.raises(ValueError):
        aesrank.encrypt(key, pt, rounds=11)


def test_mixing_layer_has_order_eight():
    assert aesrank.mixing_order() == 8


def test_embedding_info():
    info = aesrank.embedding_info()
    assert info["ambient_dim"] == 32768
    assert info["dimension_bound"] == 31745
    assert info["order"] == 8
    assert info["byte_oriented"] is True
    assert info["elements"] == 16
    assert info["element_bits"] == 8


def test_alpha_support_of_the_zero_block():
    support = aesrank.alpha_support(bytes(16))
    assert support == [(j * 16 + i) * 256 for j in range(8) for i in range(16)]
    assert len(aesrank.alpha_support(bytes(range(16)))) == 128


def test_sbar_elements():
    assert aesrank.sbar_element(0) == bytes(16)
    e = aesrank.sbar_element(0x0102)
    assert e[:14] == bytes(14)
    assert (e[14], e[15]) == (0x01, 0x02)
    swapped = aesrank.sbar_element(0x0102, pair_order=16)
    assert (swapped[14], swapped[15]) == (0x02, 0x01)


def test_theory_and_expected_census():
    t = aesrank.theory()
    assert t["n"] == 31745
    assert math.isclose(t["p_full"], 0.288788095086602, rel_tol=1e-9)
    assert math.isclose(t["p_tail"], 0.133635714740193, rel_tol=1e-9)
    assert math.isclose(sum(aesrank.theory(6)[k] for k in ("p_full", "p_second", "p_tail")), 1.0)

    expected = aesrank.expected_census(33792, bins=3)
    assert [round(e) for e in expected] == [9759, 19517, 4516]
    assert math.isclose(
        aesrank.rank_probability(31745, 31745), t["p_full"], rel_tol=1e-12
    )


def test_chi_square():
    res = aesrank.chi_square([70, 30], [50.0, 50.0])
    assert math.isclose(res["statistic"], 16.0)
    assert res["df"] == 1
    assert res["significant"]
    assert math.isclose(aesrank.chi2_upper_tail(0.0, 4), 1.0)
    with pytest.raises(ValueError):
        aesrank.chi_square([1, 2], [1.0])


def test_rank_rows_against_pure_python():
    def py_rank(rows, ncols):
        rows = [int.from_bytes(r, "little") for r in rows]
        rank = 0
        for col in range(ncols):
            bit = 1 << col
            pivot = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i] & bit:
                    rows[i] ^= rows[rank]
            rank += 1
        return rank

    import random

    rng = random.Random(7)
    for trial in range(25):
        nrows = rng.randrange(1, 40)
        ncols = rng.randrange(1, 70)
        nbytes = (ncols + 7) // 8
        mask = (1 << ncols) - 1
        rows = [
            (rng.getrandbits(ncols) & mask).to_bytes(nbytes, "little") for _ in range(nrows)
        ]
        assert aesrank.rank_rows(rows, ncols) == py_rank(rows, ncols), f"trial {trial}"

    with pytest.raises(ValueError):
        aesrank.rank_rows([b"\x01\x00"], 3)  # row longer than the packing needs


def test_evenly_spaced_starts():
    assert aesrank.evenly_spaced_starts(1) == [1]
    assert aesrank.evenly_spaced_starts(3) == [1, 16896, 33792]
    with pytest.raises(ValueError):
        aesrank.evenly_spaced_starts(0)


def test_selftest_items_pass():
    items = aesrank.run_selftest()
    assert items, "selftest produced no items"
    assert all(ok for _, ok, _ in items), items


def test_census_of_the_chosen_set():
    assert aesrank.census("plain", [1]) == {4690: 1}
    with pytest.raises(ValueError):
        aesrank.census("martian", [1])
