"""SVG figures of the fundamental triangle and of the geodesic G_QP.

Output is byte-stable: no timestamps and a fixed SVG hash salt.
"""
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import mpmath  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib import rcParams  # noqa: E402

from .triangle_group import adjacent_triangles, geodesic_points, special_fixed_points  # noqa: E402

rcParams["svg.hashsalt"] = "m11lab"
rcParams["svg.fonttype"] = "none"
rcParams["axes.spines.top"] = False
rcParams["axes.spines.right"] = False
rcParams["font.size"] = 10

PathLike = Union[str, Path]


def _c(z) -> complex:
    return complex(float(mpmath.re(z)), float(mpmath.im(z)))


def geodesic_arc(z1: complex, z2: complex, n: int = 200) -> Tuple[np.ndarray, np.ndarray]:
    """Points of the upper half-plane geodesic from z1 to z2"""
    if abs(z1.real - z2.real) < 1e-12:
        ys = np.linspace(z1.imag, z2.imag, n)
        return np.full(n, z1.real), ys
    center = (abs(z1) ** 2 - abs(z2) ** 2) / (2 * (z1.real - z2.real))
    radius = abs(z1 - center)
    a1, a2 = np.angle(z1 - center), np.angle(z2 - center)
    theta = np.linspace(a1, a2, n)
    return center + radius * np.cos(theta), radius * np.sin(theta)


def _draw_triangle(ax, vertices: Sequence[complex], **kwargs) -> None:
    for i in range(3):
        xs, ys = geodesic_arc(vertices[i], vertices[(i + 1) % 3])
        ax.plot(xs, ys, **kwargs)


def _save(fig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_triangle(path: PathLike) -> Path:
    fixed = special_fixed_points()
    tri = [_c(fixed[name]) for name in ("P", "Q", "R")]
    fig, ax = plt.subplots(figsize=(5, 4))
    _draw_triangle(ax, tri, color="k", lw=1.5)
    for name, image in adjacent_triangles():
        _draw_triangle(ax, [_c(z) for z in image], color="0.6", lw=0.8)
    for name, z in zip(("P", "Q", "R"), tri):
        ax.plot(z.real, z.imag, "o", color="C3", ms=4)
        ax.annotate(name, (z.real, z.imag), textcoords="offset points", xytext=(4, 4))
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("fundamental (2,3,10) triangle")
    return _save(fig, path)


def plot_geodesic(path: PathLike, extra: Sequence[Tuple[str, complex]] = ()) -> Path:
    """The half circle through P~ and Q~ with its marked points, plus extra labelled points"""
    marked: List[Tuple[str, complex]] = [(name, _c(z)) for name, _, z in geodesic_points()]
    marked.extend((name, _c(z)) for name, z in extra)
    radius = abs(marked[0][1])
    theta = np.linspace(0, np.pi, 400)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(radius * np.cos(theta), radius * np.sin(theta), color="k", lw=1.2)
    for name, z in marked:
        ax.plot(z.real, z.imag, "o", ms=4)
        ax.annotate(name, (z.real, z.imag), textcoords="offset points", xytext=(4, 4))
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("geodesic through P~ and Q~")
    return _save(fig, path)
