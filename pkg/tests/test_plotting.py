import re

import numpy as np
import pytest

from bandclust import InputError, render_dotplot, render_panels


def rects(svg):
    return re.findall(r"<rect [^>]*/>", svg)


def opacities(svg):
    return [float(x) for x in re.findall(r'fill-opacity="([0-9.]+)"', svg)]


def test_identity_two_rects():
    assert len(rects(render_dotplot(np.eye(2)))) == 2


def test_all_zero_frame_only():
    svg = render_dotplot(np.zeros((3, 4)))
    assert rects(svg) == []
    assert "<path" in svg


def test_opacity_relative_to_max():
    assert opacities(render_dotplot([[1, 0], [0, 1]])) == [1.0, 1.0]
    assert opacities(render_dotplot([[2, 0], [0, 2]])) == [1.0, 1.0]
    assert opacities(render_dotplot([[2, 0], [0, -1]])) == [1.0, 0.5]


def test_cell_positions_row_major():
    svg = render_dotplot([[0, 3], [0, 0]])
    (cell,) = rects(svg)
    x = float(re.search(r' x="([0-9.]+)"', cell).group(1))
    y = float(re.search(r' y="([0-9.]+)"', cell).group(1))
    assert x > y  # column 1, row 0


def test_deterministic_bytes(tmp_path):
    A = np.random.default_rng(0).integers(0, 4, (6, 5))
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render_dotplot(A, a, title="x < y")
    render_dotplot(A, b, title="x < y")
    assert a.read_bytes() == b.read_bytes()
    assert "x &lt; y" in a.read_text()


def test_panels_count_all_cells():
    A = np.eye(3)
    svg = render_panels([A, A, np.zeros((2, 2))], titles=["a", "b", "c"])
    assert len(rects(svg)) == 6
    assert svg.count("<text") == 3


def test_empty_matrix_rejected():
    with pytest.raises(InputError):
        render_dotplot(np.zeros((0, 2)))


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        render_dotplot(np.eye(2), tmp_path / "missing" / "dir" / "p.svg")
