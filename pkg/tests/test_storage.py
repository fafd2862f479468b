import io
import json
import struct
import zlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphsketch import (
    BadMagicError,
    ChecksumError,
    CodebookSpec,
    EdgeListParseError,
    SketchFormatError,
    TruncatedFileError,
    UnsupportedVersionError,
    build_sketch,
    empty_sketch,
    generate_graph,
    load_sketch,
    read_edge_list,
    read_label_set,
    read_report,
    save_sketch,
    write_edge_list,
    write_report,
)
from graphsketch.harness import default_config, run_experiment
from graphsketch.storage import HEADER_SIZE, parse_edge_list, sketch_file_size, sketch_from_bytes, sketch_to_bytes


def _round_trip(s):
    buf = io.BytesIO()
    save_sketch(s, buf)
    buf.seek(0)
    return load_sketch(buf), buf.getvalue()


class TestSketchFiles:
    def test_empty_round_trip(self, spec):
        s = empty_sketch(spec)
        back, raw = _round_trip(s)
        assert back == s
        assert back.matrix.tobytes() == s.matrix.tobytes()

    def test_hundred_edge_round_trip(self, tmp_path):
        g = generate_graph("erdos_renyi", seed=3, n=80, k=100)
        s = build_sketch(g, CodebookSpec(seed=2**63 + 5, dimension=48))
        path = tmp_path / "s.gsk"
        save_sketch(s, path)
        back = load_sketch(path)
        assert back == s
        assert back.matrix.tobytes() == s.matrix.tobytes()
        assert path.read_bytes() == sketch_to_bytes(s)

    @pytest.mark.parametrize("count", [None, -1, 0, 7, 2**62])
    def test_edge_count_preserved(self, spec, count):
        from graphsketch import Sketch

        s = Sketch(spec, np.eye(64), count)
        assert _round_trip(s)[0].edge_count == count

    def test_derived_sketch_round_trip(self, random_graph, spec):
        s = build_sketch(random_graph, spec).power(2)
        back = _round_trip(s)[0]
        assert back.is_derived and back == s

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**64 - 1), d=st.integers(1, 12),
           values=st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=144))
    def test_arbitrary_matrix_round_trip(self, seed, d, values):
        from graphsketch import Sketch

        m = np.resize(np.array(values), (d, d))
        s = Sketch(CodebookSpec(seed=seed, dimension=d), m, 3)
        assert sketch_from_bytes(sketch_to_bytes(s)).matrix.tobytes() == s.matrix.tobytes()

    @pytest.mark.parametrize("d", [1, 8, 100])
    def test_file_size(self, d):
        raw = sketch_to_bytes(empty_sketch(CodebookSpec(seed=0, dimension=d)))
        assert len(raw) == sketch_file_size(d) == 8 * d * d + 46
        assert HEADER_SIZE == 42

    def test_layout(self):
        s = empty_sketch(CodebookSpec(seed=9, dimension=3)).add_edge("a", "b")
        raw = sketch_to_bytes(s)
        assert raw[:4] == b"GSKT"
        assert struct.unpack_from("<H", raw, 4)[0] == 1
        assert raw[6:10] == b"GSCB"
        count, d = struct.unpack_from("<qI", raw, 30)
        assert (count, d) == (1, 3)
        assert np.array_equal(np.frombuffer(raw, "<f8", 9, 42).reshape(3, 3), s.matrix)
        assert struct.unpack_from("<I", raw, len(raw) - 4)[0] == zlib.crc32(raw[:-4])

    def test_every_single_byte_corruption_rejected(self):
        s = build_sketch([("a", "b"), ("b", "c")], CodebookSpec(seed=77, dimension=4))
        raw = sketch_to_bytes(s)
        for offset in range(len(raw)):
            for flip in (0x01, 0x80, 0xFF):
                bad = bytearray(raw)
                bad[offset] ^= flip
                with pytest.raises(SketchFormatError):
                    sketch_from_bytes(bytes(bad))

    def test_distinct_error_kinds(self, spec):
        raw = sketch_to_bytes(empty_sketch(CodebookSpec(seed=1, dimension=4)))
        with pytest.raises(BadMagicError):
            sketch_from_bytes(b"XXXX" + raw[4:])
        with pytest.raises(UnsupportedVersionError):
            sketch_from_bytes(raw[:4] + struct.pack("<H", 2) + raw[6:])
        with pytest.raises(ChecksumError):
            sketch_from_bytes(raw[:-1] + bytes([raw[-1] ^ 1]))
        for cut in (0, 3, 20, 41, len(raw) - 1):
            with pytest.raises(TruncatedFileError):
                sketch_from_bytes(raw[:cut])
        with pytest.raises(SketchFormatError):
            sketch_from_bytes(raw + b"\0")

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_sketch(tmp_path / "nope.gsk")


class TestEdgeLists:
    def test_basic(self):
        g = read_edge_list("# c\n1 2\n2 3\n")
        assert g.edges == [("1", "2"), ("2", "3")]

    def test_empty(self):
        assert read_edge_list("").n_edges == 0

    def test_duplicates(self):
        g = read_edge_list("1 2\n1 2\n")
        assert g.n_edges == 1 and g.n_duplicates == 1
        assert read_edge_list("1 2\n1 2\n", keep_duplicates=True).n_edges == 2

    def test_whitespace_and_blank_lines(self):
        g = read_edge_list("\n  a\tb  \n\n# x\nb    c\n")
        assert g.edges == [("a", "b"), ("b", "c")]

    @pytest.mark.parametrize("text,line", [("1 2\n3\n", 2), ("1 2 3\n", 1), ("# ok\n\nx\n", 3)])
    def test_malformed_line_reported(self, text, line):
        with pytest.raises(EdgeListParseError) as info:
            read_edge_list(text)
        assert info.value.line_number == line
        assert f"line {line}" in str(info.value)

    def test_comments_kept_in_document(self):
        doc = parse_edge_list("# first\n1 2\n#second\n")
        assert doc.comments == ["first", "second"]

    def test_file_round_trip(self, tmp_path, random_graph):
        path = tmp_path / "g.txt"
        write_edge_list(random_graph, path, comments=["generated"])
        back = read_edge_list(path)
        assert back.edges == [(str(s), str(t)) for s, t in random_graph.edges]
        assert path.read_text().startswith("# generated\n")

    def test_integer_tokens_share_codes_with_ints(self, spec):
        from_file = build_sketch(read_edge_list("1 2\n"), spec)
        from_ints = build_sketch([(1, 2)], spec)
        assert np.array_equal(from_file.matrix, from_ints.matrix)

    def test_label_set(self):
        assert read_label_set("# header\na\nb\na\n\nc\n") == ["a", "b", "c"]
        with pytest.raises(EdgeListParseError):
            read_label_set("a b\n")


@pytest.fixture(scope="module")
def report():
    return run_experiment(default_config("norm", trials=20, d=64, k=30))


class TestReports:
    def test_json_round_trip(self, report, tmp_path):
        path = tmp_path / "r.json"
        write_report(report, path)
        back = read_report(path)
        assert back == report
        data = json.loads(path.read_text())
        assert {"config", "tails", "bounds", "checks", "passed"} <= set(data)

    def test_csv_long_form(self, report):
        buf = io.StringIO()
        write_report(report, buf, format="csv")
        lines = buf.getvalue().splitlines()
        assert lines[0] == "series,trial,value"
        assert len(lines) == 1 + sum(len(v) for v in report.samples.values())
        name, trial, value = lines[1].split(",")
        assert float(value) == report.samples[name][int(trial)]

    def test_unknown_format(self, report):
        with pytest.raises(ValueError):
            write_report(report, io.StringIO(), format="xml")
