import os
import shutil
import tempfile
import unittest

from gitfan.config import Config
from gitfan.groupdata import GroupSpec, ModuleSpec, Summand, build_group
from gitfan.polycone import Fan, cone_from_rays, zero_cone
from gitfan.renderer import FanRenderer, render_fan_svg
from gitfan.stability import GITFan, Chamber, UnsupportedError, git_fan


def torus_fan(weights):
    module = ModuleSpec(tuple(Summand(kind="torus_char", weight=w) for w in weights))
    return git_fan(*build_group(GroupSpec(torus_rank=len(weights[0])), module))


class TestFanRenderer(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.hirzebruch = torus_fan([(1, 0), (1, 0), (-1, 1), (0, 1)])

    def tearDown(self):
        Config.apply_theme("classic")
        shutil.rmtree(self.tmp, ignore_errors=True)

    def render(self, gitfan, name="fan.svg"):
        path = os.path.join(self.tmp, name)
        render_fan_svg(gitfan, path)
        with open(path) as f:
            return f.read()

    def test_chambers_and_walls(self):
        svg = self.render(self.hirzebruch)
        self.assertEqual(svg.count('id="chamber-'), 2)
        self.assertEqual(svg.count('id="wall-'), 3)
        self.assertIn('id="origin"', svg)

    def test_origin_only(self):
        origin = zero_cone(2)
        fan = Fan(rank=2, cones=(origin,), face_pairs=())
        gitfan = GITFan(fan=fan, chambers=(Chamber(origin, (0, 0), ((),), (), None),),
                        effective_cone=origin, walls=(), complete=True, invariants_trivial=False)
        svg = self.render(gitfan)
        self.assertEqual(svg.count('id="chamber-'), 0)
        self.assertEqual(svg.count('id="wall-'), 0)
        self.assertIn('id="origin"', svg)

    def test_rank_must_be_two(self):
        with self.assertRaises(UnsupportedError) as ctx:
            FanRenderer(torus_fan([(1,), (1,)]))
        self.assertEqual(ctx.exception.kind, "unsupported_rank")

    def test_byte_identical(self):
        self.assertEqual(self.render(self.hirzebruch, "a.svg"), self.render(self.hirzebruch, "b.svg"))

    def test_chamber_polygon_is_clipped(self):
        renderer = FanRenderer(self.hirzebruch)
        poly = renderer.chamber_polygon(cone_from_rays(2, [(1, 0), (0, 1)]))
        self.assertEqual(len(poly), 4)
        self.assertTrue((poly >= 0).all())
        self.assertTrue((poly <= Config.SVG_VIEWPORT).all())

    def test_theme_changes_background(self):
        Config.apply_theme("noir")
        svg = self.render(self.hirzebruch)
        Config.apply_theme("classic")
        self.assertNotEqual(svg, self.render(self.hirzebruch, "classic.svg"))


if __name__ == '__main__':
    unittest.main()
