import matplotlib
import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import Polygon

from .config import Config
from .stability import UnsupportedError


def _rgb(color):
    return tuple(c / 255.0 for c in color)


class FanRenderer:
    """
    Draws a rank-2 GIT fan as SVG: one filled polygon per full-dimensional
    chamber (clipped to the viewport square), one stroke per wall ray and the
    chamber index at each chamber's representative.
    """

    def __init__(self, gitfan, width=None, height=None):
        if gitfan.fan.rank != 2:
            raise UnsupportedError(
                f"SVG rendering needs a rank-2 character space, got rank {gitfan.fan.rank}",
                kind="unsupported_rank",
            )
        self.gitfan = gitfan
        self.width = width if width is not None else Config.SVG_WIDTH
        self.height = height if height is not None else Config.SVG_HEIGHT
        self.viewport = Config.SVG_VIEWPORT

        # Square viewport, counterclockwise
        v = self.viewport
        self.square = np.array([[-v, -v], [v, -v], [v, v], [-v, v]], dtype=float)

    def _clip(self, polygon, normal):
        """Sutherland-Hodgman step: keeps the part of polygon with <normal, x> >= 0."""
        if len(polygon) == 0:
            return polygon
        n = np.array(normal, dtype=float)
        out = []
        for i in range(len(polygon)):
            p, q = polygon[i], polygon[(i + 1) % len(polygon)]
            fp, fq = float(n @ p), float(n @ q)
            if fp >= 0:
                out.append(p)
            if (fp >= 0) != (fq >= 0):
                t = fp / (fp - fq)
                out.append(p + t * (q - p))
        return np.array(out)

    def chamber_polygon(self, cone):
        poly = self.square.copy()
        for normal in cone.facets:
            poly = self._clip(poly, normal)
        return poly

    def _ray_end(self, ray):
        r = np.array(ray, dtype=float)
        return r * (self.viewport / np.max(np.abs(r)))

    def wall_segments(self):
        segments = []
        for wall in self.gitfan.walls:
            for ray in wall.pointed_rays:
                segments.append(((0.0, 0.0), tuple(self._ray_end(ray))))
            for line in wall.lineality:
                segments.append((tuple(self._ray_end([-x for x in line])), tuple(self._ray_end(line))))
        return segments

    def render(self, output_path):
        matplotlib.rcParams["svg.hashsalt"] = "gitfan"
        matplotlib.rcParams["svg.fonttype"] = "none"

        fig = Figure(figsize=(self.width, self.height))
        fig.patch.set_facecolor(_rgb(Config.COLOR_BG))
        ax = fig.add_axes([0, 0, 1, 1])
        ax.set_xlim(-self.viewport * 1.05, self.viewport * 1.05)
        ax.set_ylim(-self.viewport * 1.05, self.viewport * 1.05)
        ax.set_aspect("equal")
        ax.axis("off")

        maximal = self.gitfan.maximal_chambers()
        full = [ch for ch in maximal if ch.cone.dim == 2]
        for i, chamber in enumerate(full):
            poly = self.chamber_polygon(chamber.cone)
            if len(poly) < 3:
                continue
            patch = Polygon(poly, closed=True, facecolor=_rgb(Config.chamber_color(i)),
                            edgecolor="none", alpha=0.85)
            patch.set_gid(f"chamber-{i}")
            ax.add_patch(patch)

            label = np.array(chamber.representative, dtype=float)
            label = label * (0.6 * self.viewport / np.max(np.abs(label)))
            ax.text(label[0], label[1], str(i), gid=f"label-{i}", ha="center", va="center",
                    fontsize=Config.SVG_LABEL_SIZE, color=_rgb(Config.COLOR_WALL))

        for i, (start, end) in enumerate(self.wall_segments()):
            line, = ax.plot([start[0], end[0]], [start[1], end[1]], color=_rgb(Config.COLOR_WALL), linewidth=1.5)
            line.set_gid(f"wall-{i}")

        origin, = ax.plot([0.0], [0.0], marker="o", markersize=4, color=_rgb(Config.COLOR_ORIGIN))
        origin.set_gid("origin")

        fig.savefig(output_path, format="svg", metadata={"Date": None}, facecolor=fig.get_facecolor())
        return output_path


def render_fan_svg(gitfan, output_path):
    return FanRenderer(gitfan).render(output_path)
