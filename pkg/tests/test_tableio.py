"""CSV persistence: round trips, checksums, format rejection."""

import pytest

from merge_lab.adversary import compute_tables
from merge_lab.tableio import (
    export_csv,
    fnv1a64,
    import_csv,
    table_from_csv_bytes,
    table_to_csv_bytes,
)
from merge_lab.errors import FormatError


def test_fnv1a64_vectors():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_roundtrip(tmp_path):
    table = compute_tables(6, 4)
    path = tmp_path / "t.csv"
    export_csv(table, path)
    loaded = import_csv(path)
    assert loaded.max_m == 6 and loaded.max_n == 4
    assert (loaded.values == table.values).all()
    assert table_to_csv_bytes(loaded) == path.read_bytes()


def test_known_rows_present():
    table = compute_tables(5, 5)
    text = table_to_csv_bytes(table).decode()
    assert text.splitlines()[0] == "merge-lab-table,v1,max_m=5,max_n=5"
    assert "dot,dot,1,1,1" in text
    assert "dot,dot,4,5,8" in text
    assert "bs,fs,1,2,invalid" in text


def test_checksum_detects_corruption():
    data = table_to_csv_bytes(compute_tables(4, 4))
    corrupt = data.replace(b"dot,dot,1,1,1", b"dot,dot,1,1,2", 1)
    with pytest.raises(FormatError, match="checksum"):
        table_from_csv_bytes(corrupt)


def test_version_rejected():
    data = table_to_csv_bytes(compute_tables(3, 3))
    body = data[: data.rindex(b"checksum,")]
    body = body.replace(b"merge-lab-table,v1", b"merge-lab-table,v2", 1)
    forged = body + f"checksum,{fnv1a64(body):016x}\n".encode()
    with pytest.raises(FormatError, match="version"):
        table_from_csv_bytes(forged)


def test_semantic_tampering_rejected():
    # consistent checksum but a value where an inconsistent key belongs
    data = table_to_csv_bytes(compute_tables(3, 3))
    body = data[: data.rindex(b"checksum,")]
    body = body.replace(b"bs,fs,1,2,invalid", b"bs,fs,1,2,0", 1)
    forged = body + f"checksum,{fnv1a64(body):016x}\n".encode()
    with pytest.raises(FormatError, match="consistency"):
        table_from_csv_bytes(forged)


def test_truncation_rejected():
    data = table_to_csv_bytes(compute_tables(3, 3))
    with pytest.raises(FormatError):
        table_from_csv_bytes(data[: len(data) // 2])
