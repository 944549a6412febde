"""CSV persistence for adversary tables.

Format, version 1 (text, \\n newlines):
  merge-lab-table,v1,max_m=<int>,max_n=<int>
  <left>,<right>,<m>,<n>,<value>          one row per key, sorted by
                                          (left, right, m, n) with the
                                          constraint order dot < bs < fs
  checksum,<16 lowercase hex digits>      64-bit FNV-1a of every byte above

value is a nonnegative integer, or the literal `invalid` for keys with no
consistent interleaving.  Round-trips are lossless.
"""

from __future__ import annotations

import io

import numpy as np

from .adversary import INVALID, AdversaryTable
from .combinatorics import Constraint, ProblemKey, constraint_from_token, is_consistent
from .errors import FormatError

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def table_to_csv_bytes(table: AdversaryTable) -> bytes:
    out = io.StringIO()
    out.write(f"merge-lab-table,v1,max_m={table.max_m},max_n={table.max_n}\n")
    for left in Constraint:
        for right in Constraint:
            for m in range(table.max_m + 1):
                for n in range(table.max_n + 1):
                    v = int(table.values[left, right, m, n])
                    cell = "invalid" if v == INVALID else str(v)
                    out.write(f"{left.token},{right.token},{m},{n},{cell}\n")
    body = out.getvalue().encode("ascii")
    return body + f"checksum,{fnv1a64(body):016x}\n".encode("ascii")


def export_csv(table: AdversaryTable, path) -> None:
    data = table_to_csv_bytes(table)
    with open(path, "wb") as fh:
        fh.write(data)


def table_from_csv_bytes(data: bytes) -> AdversaryTable:
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    if len(lines) < 2:
        raise FormatError("truncated table file")
    check_line = lines[-1].decode("ascii", errors="replace")
    parts = check_line.split(",")
    if len(parts) != 2 or parts[0] != "checksum":
        raise FormatError("missing checksum line")
    body_len = len(data) - len(lines[-1]) - 1
    body = data[:body_len]
    if f"{fnv1a64(body):016x}" != parts[1]:
        raise FormatError("checksum mismatch")

    header = lines[0].decode("ascii").split(",")
    if len(header) != 4 or header[0] != "merge-lab-table":
        raise FormatError("not a merge-lab table file")
    if header[1] != "v1":
        raise FormatError(f"unsupported table format version {header[1]!r}")
    try:
        max_m = int(header[2].removeprefix("max_m="))
        max_n = int(header[3].removeprefix("max_n="))
    except ValueError as exc:
        raise FormatError(f"bad header bounds: {header}") from exc

    values = np.full((3, 3, max_m + 1, max_n + 1), INVALID, dtype=np.int16)
    expected_rows = 9 * (max_m + 1) * (max_n + 1)
    rows = lines[1:-1]
    if len(rows) != expected_rows:
        raise FormatError(f"expected {expected_rows} rows, found {len(rows)}")
    for raw in rows:
        fields = raw.decode("ascii").split(",")
        if len(fields) != 5:
            raise FormatError(f"malformed row {raw!r}")
        left = constraint_from_token(fields[0])
        right = constraint_from_token(fields[1])
        m, n = int(fields[2]), int(fields[3])
        if not (0 <= m <= max_m and 0 <= n <= max_n):
            raise FormatError(f"row out of bounds {raw!r}")
        cell = fields[4]
        v = INVALID if cell == "invalid" else int(cell)
        if v != INVALID and not 0 <= v <= max(m + n - 1, 0):
            raise FormatError(f"value out of range in row {raw!r}")
        consistent = is_consistent(ProblemKey(m, n, left, right))
        if consistent == (v == INVALID):
            raise FormatError(f"consistency mismatch in row {raw!r}")
        values[left, right, m, n] = v
    return AdversaryTable(max_m, max_n, values)


def import_csv(path) -> AdversaryTable:
    with open(path, "rb") as fh:
        return table_from_csv_bytes(fh.read())
