from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cancel_codes.errors import FormatError
from cancel_codes.family import (
    SetFamily,
    VertexPartition,
    format_bits,
    format_fam,
    mask_of,
    parse_bits,
    parse_fam,
    read_family,
    vertices_of,
    write_family,
)


@st.composite
def families(draw):
    n = draw(st.integers(0, 12))
    members = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=15))
    return SetFamily(n, tuple(members))


@settings(max_examples=200, deadline=None)
@given(families())
def test_roundtrips(F):
    assert parse_fam(format_fam(F, ["made by a test"])) == F
    assert parse_bits(format_bits(F)) == F
    assert parse_fam(format_fam(parse_bits(format_bits(F)))) == F


def test_mask_helpers():
    assert mask_of([0, 3]) == 0b1001
    assert vertices_of(0b1001) == (0, 3)
    assert vertices_of(0) == ()


def test_fam_layout():
    F = SetFamily.from_sets(5, [[0, 1], [], [4]])
    assert format_fam(F) == "5 3\n0 1\n\n4\n"
    assert parse_fam("# comment\n5 3\n0 1\n\n4\n") == F


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("3\n", 1),
        ("3 2\n0 1\n", 3),  # truncated
        ("3 1\n1 0\n", 2),  # not increasing
        ("3 1\n0 3\n", 2),  # out of range
        ("3 1\n0  1\n", 2),  # double space
        ("3 1\n0 x\n", 2),
        ("3 1\n0\n1\n", 3),  # extra line
    ],
)
def test_fam_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as exc:
        parse_fam(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_bits_errors():
    with pytest.raises(FormatError):
        parse_bits("0101\n011\n")
    with pytest.raises(FormatError):
        parse_bits("01a1\n")
    with pytest.raises(FormatError):
        parse_bits("")
    assert parse_bits("0110\n1000\n") == SetFamily(4, (0b0110, 0b0001))


def test_files_by_suffix(tmp_path):
    F = SetFamily.from_sets(6, [[0, 2, 4], [1, 3, 5]])
    for name in ("a.fam", "a.bits"):
        p = tmp_path / name
        write_family(F, p)
        assert read_family(p) == F
    assert (tmp_path / "a.bits").read_text().splitlines()[1] == "101010"


def test_vertex_partition():
    P = VertexPartition.from_sets([[0, 1], [2]])
    assert P.is_partition_of(3)
    assert not P.is_partition_of(4)
    assert not VertexPartition.from_sets([[0, 1], [1, 2]]).is_partition_of(3)
    assert P.sets() == [(0, 1), (2,)]
