"""PGM reading and writing, including the label/sample quantization."""

import numpy as np
import pytest

from mrfdenoise import GrayImage, PgmParseError, make_rng, read_pgm, write_pgm


def _random_image(w, h, q, seed):
    return GrayImage.from_grid(make_rng(seed).integers(0, q, size=(h, w)), q)


class TestRoundTrip:
    @pytest.mark.parametrize("q", [2, 3, 5, 256])
    @pytest.mark.parametrize("ascii_format", [False, True])
    def test_write_then_read(self, tmp_path, q, ascii_format):
        image = _random_image(7, 5, q, seed=q)
        path = tmp_path / "img.pgm"
        write_pgm(image, path, ascii_format=ascii_format)
        assert read_pgm(path, q=q) == image

    def test_binary_writer_spreads_labels(self, tmp_path):
        image = GrayImage.from_grid(np.array([[0, 1], [2, 2]], dtype=np.int64), 3)
        path = tmp_path / "img.pgm"
        write_pgm(image, path)
        assert path.read_bytes() == b"P5\n2 2\n255\n\x00\x7f\xff\xff"

    def test_ascii_writer_layout(self, tmp_path):
        image = GrayImage.from_grid(np.array([[0, 1], [2, 2]], dtype=np.int64), 3)
        path = tmp_path / "img.pgm"
        write_pgm(image, path, ascii_format=True)
        assert path.read_text() == "P2\n2 2\n255\n0 127\n255 255\n"


class TestReader:
    def test_plain_format_with_comments(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P2 # magic\n# a remark\n 3 2\n255\n0 255 0\n255 0 255\n")
        image = read_pgm(path, q=2)
        assert image.grid().tolist() == [[0, 1, 0], [1, 0, 1]]

    def test_sixteen_bit_samples_are_big_endian(self, tmp_path):
        path = tmp_path / "img.pgm"
        raster = (500).to_bytes(2, "big") + (65000).to_bytes(2, "big")
        path.write_bytes(b"P5 2 1 65535\n" + raster)
        assert read_pgm(path, q=4).labels.tolist() == [0, 3]

    def test_quantization_splits_range_evenly(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_bytes(b"P5 4 1 255\n" + bytes([0, 127, 128, 255]))
        # label = value * q // (maxval + 1), so 127 -> 0 and 128 -> 1 at q = 2.
        assert read_pgm(path, q=2).labels.tolist() == [0, 0, 1, 1]

    def test_single_byte_raster_even_with_odd_maxval(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_bytes(b"P5 2 1 15\n" + bytes([3, 12]))
        assert read_pgm(path, q=4).labels.tolist() == [0, 3]


class TestMalformedInputs:
    @pytest.mark.parametrize(
        "data, offset",
        [
            (b"P3 2 2 255\n\x00\x00\x00\x00", 0),  # wrong magic
            (b"P5 2 2 255\n\x00\x00\x00", 14),  # truncated raster
            (b"P5 2 2 255\n\x00\x00\x00\x00\x00", 15),  # trailing byte
            (b"P2 2 1 255\n12 999\n", 14),  # sample above maxval
            (b"P5 -2 2 255\n\x00\x00", 3),  # negative width
            (b"P5 2 2 70000\n\x00\x00\x00\x00", 7),  # maxval too large
            (b"P2 2 1 255\n12 x\n", 14),  # non-numeric sample
            (b"P5 2 255\n\x00\x00\x00\x00", 9),  # header runs into raster
        ],
    )
    def test_errors_carry_byte_offsets(self, tmp_path, data, offset):
        path = tmp_path / "bad.pgm"
        path.write_bytes(data)
        with pytest.raises(PgmParseError) as excinfo:
            read_pgm(path, q=2)
        assert excinfo.value.offset == offset
        assert f"(byte offset {offset})" in str(excinfo.value)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"")
        with pytest.raises(PgmParseError):
            read_pgm(path, q=2)

    def test_parse_error_is_a_value_error(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"who knows")
        with pytest.raises(ValueError):
            read_pgm(path, q=2)
