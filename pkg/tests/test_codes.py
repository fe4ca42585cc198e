import numpy as np
import pytest

from gsldpc.codes import (
    CodeFormatError,
    bundled_code,
    conventional_groups,
    dump_alist,
    expand_qc,
    from_check_adjacency,
    parse_alist,
    parse_qc_base,
    random_regular_code,
    validate,
)

TOY_2X3 = """\
3 2
2 2
1 2 1
2 2
1
1 2
2
1 2
2 3
"""


def toy_code():
    # checks {0,1,3},{1,2,4},{0,4,5},{2,3,5}: 4x6, dv=2, dc=3
    return from_check_adjacency(
        [np.array(a) for a in ([0, 1, 3], [1, 2, 4], [0, 4, 5], [2, 3, 5])], 6)


def test_parse_alist_smallest_asymmetric():
    code = parse_alist(TOY_2X3)
    assert code.n_vars == 3 and code.n_checks == 2
    assert list(code.var_deg) == [1, 2, 1]
    assert list(code.check_deg) == [2, 2]
    assert [list(a) for a in code.check_adj] == [[0, 1], [1, 2]]
    assert code.max_var_deg == 2
    assert validate(code) == []


def test_parse_alist_zero_padded_entries_dropped():
    padded = """\
3 2
2 2
1 2 1
2 2
1 0
1 2
2 0
1 2
2 3
"""
    code = parse_alist(padded)
    assert [list(a) for a in code.check_adj] == [[0, 1], [1, 2]]


def test_parse_alist_bundled_regular_code():
    code = bundled_code("regular-1008-504")
    assert code.n_vars == 1008 and code.n_checks == 504
    assert (code.var_deg == 3).all()
    assert (code.check_deg == 6).all()
    assert code.rate == 0.5
    assert validate(code) == []


def test_parse_alist_asymmetry_reported_with_line():
    bad = TOY_2X3.replace("2 3", "1 3")  # row list disagrees with columns
    with pytest.raises(CodeFormatError, match=r"line 9.*asymmetry"):
        parse_alist(bad)


def test_parse_alist_out_of_range_index():
    bad = TOY_2X3.replace("2 3", "2 4")
    with pytest.raises(CodeFormatError, match="out of range"):
        parse_alist(bad)


def test_parse_alist_degree_mismatch():
    bad = TOY_2X3.replace("1 2 1", "1 1 1")
    with pytest.raises(CodeFormatError, match="line"):
        parse_alist(bad)


def test_parse_alist_malformed_header():
    with pytest.raises(CodeFormatError, match="header"):
        parse_alist("3\n2 2\n")


def test_alist_round_trip_preserves_adjacency():
    code = bundled_code("regular-816-272")
    back = parse_alist(dump_alist(code))
    assert back.n_vars == code.n_vars and back.n_checks == code.n_checks
    for a, b in zip(back.check_adj, code.check_adj):
        assert (a == b).all()


def test_expand_qc_identity_block():
    code = expand_qc(np.array([[0]]), 3)
    assert code.n_vars == 3 and code.n_checks == 3
    assert [list(a) for a in code.check_adj] == [[0], [1], [2]]


def test_expand_qc_single_shifted_block():
    # shift 1 at z=2: check k connects to column (k+1) mod 2
    code = expand_qc(np.array([[1, -1]]), 2)
    assert code.n_vars == 4 and code.n_checks == 2
    assert list(code.check_adj[0]) == [1]
    assert list(code.check_adj[1]) == [0]


def test_expand_qc_wifi_dimensions():
    code = bundled_code("wifi-1944-972")
    assert code.n_vars == 1944 and code.n_checks == 972
    assert code.max_var_deg == 11
    assert validate(code) == []
    # every check degree equals the non-void entries of its base row
    base, z = parse_qc_base(
        __import__("importlib.resources", fromlist=["files"])
        .files("gsldpc.data").joinpath("wifi_rate12_z81.qcb").read_text())
    for i in range(base.shape[0]):
        row_deg = int((base[i] >= 0).sum())
        for k in range(z):
            assert code.check_deg[i * z + k] == row_deg


def test_expand_qc_rejects_bad_shift():
    with pytest.raises(ValueError, match="shift"):
        expand_qc(np.array([[5]]), 4)


def test_expand_qc_rejects_ragged_base():
    with pytest.raises(ValueError):
        expand_qc(np.array([[1, 2], [3]], dtype=object), 4)


@pytest.mark.parametrize("z,base", [(2, [[1, 0], [0, 1]]), (5, [[3, -1, 2]])])
def test_expand_qc_output_validates(z, base):
    code = expand_qc(np.array(base), z)
    assert validate(code) == []


def test_conventional_groups_even_split():
    code = toy_code()
    part = conventional_groups(code, 3)
    assert [list(gr) for gr in part] == [[0, 1], [2, 3], [4, 5]]


def test_conventional_groups_single_group():
    code = toy_code()
    part = conventional_groups(code, 1)
    assert [list(gr) for gr in part] == [[0, 1, 2, 3, 4, 5]]


def test_conventional_groups_direct_definition():
    code = bundled_code("regular-1008-504")
    part = conventional_groups(code, 4)
    assert len(part) == 4
    for i, gr in enumerate(part):
        assert gr.size == 252
        assert gr[0] == i * 252 and gr[-1] == (i + 1) * 252 - 1
    assert (np.concatenate(part.groups) == np.arange(1008)).all()


def test_conventional_groups_remainder_goes_to_last_group():
    code = from_check_adjacency([np.array([0, 1, 2, 3, 4, 5, 6])], 7)
    part = conventional_groups(code, 3)
    assert [list(gr) for gr in part] == [[0, 1], [2, 3], [4, 5, 6]]


def test_conventional_groups_bad_group_count():
    code = toy_code()
    with pytest.raises(ValueError):
        conventional_groups(code, 0)
    with pytest.raises(ValueError):
        conventional_groups(code, 7)


def test_validate_flags_duplicate_entry():
    code = toy_code()
    code.check_adj[1] = np.array([1, 1, 4], dtype=np.int32)
    problems = validate(code)
    assert any("check 1" in p and "duplicate" in p for p in problems)


def test_validate_flags_edge_count_mismatch():
    code = toy_code()
    code.var_deg = code.var_deg.copy()
    code.var_deg[0] += 1
    problems = validate(code)
    assert any("edge count mismatch" in p for p in problems)


def test_validate_clean_code_is_empty():
    assert validate(toy_code()) == []


def test_random_regular_code_properties():
    code = random_regular_code(96, 48, 3, seed=5)
    assert (code.var_deg == 3).all() and (code.check_deg == 6).all()
    assert validate(code) == []
    # girth 6: no two checks share more than one variable
    for m1 in range(code.n_checks):
        for m2 in range(m1 + 1, code.n_checks):
            shared = np.intersect1d(code.check_adj[m1], code.check_adj[m2])
            assert shared.size <= 1


def test_random_regular_code_deterministic():
    a = random_regular_code(60, 30, 3, seed=11)
    b = random_regular_code(60, 30, 3, seed=11)
    for x, y in zip(a.check_adj, b.check_adj):
        assert (x == y).all()
