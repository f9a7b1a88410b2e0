"""Tests for :func:`utilities.tools.log_trim.trim_log_file`."""

import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from utilities.tools.log_trim import trim_log_file  # noqa: E402


def test_trim_log_file(tmp_path):
    """Trim a single-line file larger than ``max_size`` to its raw tail."""
    log = tmp_path / "test.log"
    original = b"a" * 2048
    log.write_bytes(original)

    size = trim_log_file(str(log), max_size=1024)

    data = log.read_bytes()
    assert size == len(data) == 1024
    assert data == original[-1024:]


def test_trim_log_file_starts_on_line_boundary(tmp_path):
    """The kept tail starts with a whole record."""
    log = tmp_path / "lines.log"
    lines = [f"record {i:04d}\n".encode() for i in range(200)]
    log.write_bytes(b"".join(lines))

    trim_log_file(str(log), max_size=100)

    data = log.read_bytes()
    assert len(data) <= 100
    assert data.startswith(b"record ")
    assert data.endswith(lines[-1])


def test_trim_log_file_small_file_untouched(tmp_path):
    """Files within the limit keep their content."""
    log = tmp_path / "small.log"
    log.write_bytes(b"short\n")
    assert trim_log_file(str(log), max_size=1024) == 6
    assert log.read_bytes() == b"short\n"


def test_trim_log_file_missing(tmp_path):
    """Silently skip trimming when the target file is absent."""
    missing = tmp_path / "missing.log"
    assert trim_log_file(str(missing)) == 0
    assert not missing.exists()
