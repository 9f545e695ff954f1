import itertools
import unittest

import numpy as np

from gitfan.groupdata import GroupSpec, ModuleSpec, Summand, build_group
from gitfan.linalg import dot, rank as mat_rank
from gitfan.polycone import cone_from_rays, cone_key, membership, zero_cone
from gitfan.stability import (
    PROPERLY_STABLE, SEMISTABLE, UNSTABLE, PointSupport, UnsupportedError, brute_force_unstable_supports,
    chamber_lookup, effective_cone_and_walls, git_fan, gkz_refinement, invariants_trivial,
    minimal_semistable_supports, point_test, semistable_locus_empty, support_semistable, unstable_components,
)

F1 = [(1, 0), (1, 0), (-1, 1), (0, 1)]


def torus(weights):
    module = ModuleSpec(tuple(Summand(kind="torus_char", weight=tuple(w)) for w in weights))
    return build_group(GroupSpec(torus_rank=len(weights[0])), module)


def grassmannian():
    return build_group(GroupSpec(gl_blocks=(2,)), ModuleSpec((Summand(kind="std", block=0, multiplicity=4),)))


def flag_variety():
    return build_group(GroupSpec(gl_blocks=(1, 2)), ModuleSpec((
        Summand(kind="hom", src=0, dst=1),
        Summand(kind="dual_std", block=1, multiplicity=3),
    )))


def random_interior_point(cone, rng):
    point = [0] * cone.rank
    for r in cone.rays:
        c = int(rng.randint(1, 6))
        point = [a + c * b for a, b in zip(point, r)]
    return tuple(point)


class TestSupportSemistable(unittest.TestCase):
    def setUp(self):
        self.gd, self.ws = torus(F1)

    def test_semistable_with_witness(self):
        cert = support_semistable(self.ws, (1, 1), {0, 2})
        self.assertEqual(cert.verdict, SEMISTABLE)
        total = [sum(c * self.ws.columns[a].weight[i] for a, c in cert.witness) for i in range(2)]
        self.assertEqual(total, [1, 1])
        self.assertTrue(all(c >= 0 for _, c in cert.witness))

    def test_unstable_certificate(self):
        cert = support_semistable(self.ws, (1, 1), {0, 1})
        self.assertEqual(cert.verdict, UNSTABLE)
        self.assertEqual(cert.lam, (0, -1))
        self.assertEqual(cert.pairing, -1)

    def test_origin_unstable(self):
        cert = support_semistable(self.ws, (2, 3), set())
        self.assertEqual(cert.verdict, UNSTABLE)
        self.assertLess(cert.pairing, 0)

    def test_certificates_sound_and_upward_closed(self):
        rng = np.random.RandomState(17)
        for _ in range(500):
            chi = tuple(int(x) for x in rng.randint(-4, 5, size=2))
            support = {a for a in range(4) if rng.random_sample() < 0.5}
            cert = support_semistable(self.ws, chi, support)
            if cert.verdict == UNSTABLE:
                self.assertLess(dot(chi, cert.lam), 0)
                for a in support:
                    self.assertGreaterEqual(dot(self.ws.columns[a].weight, cert.lam), 0)
            else:
                for extra in range(4):
                    self.assertEqual(support_semistable(self.ws, chi, support | {extra}).verdict, SEMISTABLE)
                total = [sum(c * self.ws.columns[a].weight[i] for a, c in cert.witness) for i in range(2)]
                self.assertEqual(total, list(chi))


class TestPointTest(unittest.TestCase):
    def test_projective_plane(self):
        gd, ws = torus([(1,), (1,), (1,)])
        self.assertEqual(point_test(gd, ws, (1,), PointSupport.from_coordinates((0, 0, 1))).verdict, PROPERLY_STABLE)
        self.assertEqual(point_test(gd, ws, (1,), PointSupport.from_coordinates((0, 0, 0))).verdict, UNSTABLE)

    def test_wall_character(self):
        gd, ws = torus(F1)
        cert = point_test(gd, ws, (1, 0), PointSupport(frozenset({0, 1})))
        self.assertEqual(cert.verdict, SEMISTABLE)
        self.assertEqual(cert.pairing, 0)
        self.assertFalse(all(x == 0 for x in cert.lam))
        for a in (0, 1):
            self.assertGreaterEqual(dot(ws.columns[a].weight, cert.lam), 0)

    def test_reductive_unsupported(self):
        gd, ws = grassmannian()
        with self.assertRaises(UnsupportedError):
            point_test(gd, ws, (1, 1), PointSupport(frozenset({0})))


class TestUnstableComponents(unittest.TestCase):
    def test_projective_plane(self):
        gd, ws = torus([(1,), (1,), (1,)])
        comps = unstable_components(gd, ws, (1,))
        self.assertEqual(len(comps), 1)
        self.assertEqual(comps[0].support, ())
        self.assertEqual(comps[0].vanishing, (0, 1, 2))
        self.assertEqual(comps[0].class_T, gd.gens[0] ** 3)
        self.assertEqual(comps[0].codim_E, 3)
        self.assertEqual(comps[0].codim_orbit, 3)

    def test_hirzebruch(self):
        gd, ws = torus(F1)
        t1, t2 = gd.gens
        comps = unstable_components(gd, ws, (1, 1))
        self.assertEqual([c.support for c in comps], [(0, 1), (2, 3)])
        self.assertEqual(comps[0].class_T, (t2 - t1) * t2)
        self.assertEqual(comps[1].class_T, t1 ** 2)
        self.assertTrue(all(c.maximal_flag == "certified" for c in comps))

    def test_zero_character(self):
        gd, ws = torus(F1)
        self.assertEqual(unstable_components(gd, ws, (0, 0)), [])

    def test_grassmannian(self):
        gd, ws = grassmannian()
        comps = unstable_components(gd, ws, (1, 1))
        self.assertEqual(len(comps), 1)
        comp = comps[0]
        self.assertEqual(comp.support, (0,))
        self.assertEqual(comp.lam, (0, -1))
        self.assertEqual(comp.class_T, gd.gens[1] ** 4)
        self.assertEqual(comp.codim_orbit, 3)
        self.assertEqual(comp.dim_stab, 3)

    def test_matches_brute_force(self):
        rng = np.random.RandomState(23)
        checked = 0
        while checked < 40:
            weights = [tuple(int(x) for x in rng.randint(-3, 4, size=2)) for _ in range(5)]
            if mat_rank(weights, 2) < 2:
                continue
            gd, ws = torus(weights)
            chi = tuple(int(x) for x in rng.randint(-3, 4, size=2))
            for strict, variant in ((True, "semistable"), (False, "stable")):
                found = sorted(c.support for c in unstable_components(gd, ws, chi, variant))
                if strict and chi == (0, 0):
                    self.assertEqual(found, [])
                    continue
                self.assertEqual(found, brute_force_unstable_supports(ws, chi, strict))
            checked += 1

    def test_weyl_saturation_matches_torus(self):
        gd, ws = build_group(GroupSpec(gl_blocks=(2,), torus_rank=1),
                             ModuleSpec((Summand(kind="std", block=0, multiplicity=2),
                                         Summand(kind="dual_std", block=0, twist=(0, 1)),
                                         Summand(kind="torus_char", weight=(0, 0, 1)))))
        tgd, tws = torus([c.weight for c in ws.columns])
        for coords in [(1, 1), (1, 3), (-1, 2), (2, 1)]:
            chi = gd.character_embed(coords)
            saturated = set()
            for comp in unstable_components(gd, ws, chi):
                for w in gd.weyl_elements():
                    perm = gd.column_permutation(w, ws)
                    saturated.add(tuple(sorted(perm[a] for a in comp.support)))
            torus_family = {c.support for c in unstable_components(tgd, tws, chi)}
            self.assertEqual(saturated, torus_family)


class TestEffectiveConeAndWalls(unittest.TestCase):
    def test_p1xp1(self):
        gd, ws = torus([(1, 0), (1, 0), (0, 1), (0, 1)])
        effective, walls, complete = effective_cone_and_walls(gd, ws)
        self.assertEqual(effective, cone_from_rays(2, [(1, 0), (0, 1)]))
        self.assertEqual(set(walls), {cone_from_rays(2, [(1, 0)]), cone_from_rays(2, [(0, 1)])})
        self.assertTrue(complete)

    def test_whole_plane(self):
        gd, ws = torus([(1, 0), (0, 1), (-1, 0), (0, -1)])
        effective, walls, _ = effective_cone_and_walls(gd, ws)
        self.assertEqual(effective.lineality_dim, 2)
        self.assertEqual(set(walls), {cone_from_rays(2, [(1, 0), (-1, 0)]), cone_from_rays(2, [(0, 1), (0, -1)])})
        self.assertFalse(invariants_trivial(ws))

    def test_rank_one(self):
        gd, ws = torus([(1,), (1,), (1,)])
        effective, walls, _ = effective_cone_and_walls(gd, ws)
        self.assertEqual(effective, cone_from_rays(1, [(1,)]))
        self.assertEqual(walls, [zero_cone(1)])
        self.assertTrue(invariants_trivial(ws))

    def test_grassmannian(self):
        gd, ws = grassmannian()
        effective, walls, complete = effective_cone_and_walls(gd, ws)
        self.assertEqual(effective, cone_from_rays(1, [(1,)]))
        self.assertEqual(walls, [zero_cone(1)])
        self.assertTrue(complete)


class TestGitFan(unittest.TestCase):
    def test_single_weight(self):
        gd, ws = torus([(1,)])
        fan = git_fan(gd, ws)
        self.assertEqual(len(fan.fan.cones), 2)
        self.assertEqual(fan.fan.maximal_cones(), [cone_from_rays(1, [(1,)])])

    def test_p1xp1(self):
        gd, ws = torus([(1, 0), (1, 0), (0, 1), (0, 1)])
        fan = git_fan(gd, ws)
        self.assertEqual(fan.fan.maximal_cones(), [cone_from_rays(2, [(1, 0), (0, 1)])])
        self.assertEqual(len(fan.fan.rays()), 2)
        self.assertEqual(len(fan.fan.cones), 4)
        self.assertTrue(fan.fan.is_consistent())

    def test_hirzebruch(self):
        for a in (1, 2):
            gd, ws = torus([(1, 0), (1, 0), (-a, 1), (0, 1)])
            fan = git_fan(gd, ws)
            self.assertEqual(
                set(fan.fan.maximal_cones()),
                {cone_from_rays(2, [(1, 0), (0, 1)]), cone_from_rays(2, [(0, 1), (-a, 1)])},
            )
            self.assertEqual(set(fan.walls), {cone_from_rays(2, [r]) for r in [(1, 0), (0, 1), (-a, 1)]})

    def test_chamber_lookup(self):
        gd, ws = torus(F1)
        fan = git_fan(gd, ws)
        found = chamber_lookup(fan, (2, 3))
        self.assertTrue(found.effective)
        self.assertEqual(found.chamber.cone, cone_from_rays(2, [(1, 0), (0, 1)]))
        self.assertTrue(found.properly_stable)
        on_wall = chamber_lookup(fan, (0, 1))
        self.assertEqual(on_wall.chamber.cone, cone_from_rays(2, [(0, 1)]))
        self.assertFalse(on_wall.properly_stable)
        self.assertFalse(chamber_lookup(fan, (0, -1)).effective)
        self.assertEqual(chamber_lookup(fan, (4, 6)).chamber, found.chamber)

    def test_grassmannian_scaling(self):
        gd, ws = grassmannian()
        fan = git_fan(gd, ws)
        self.assertTrue(fan.complete)
        self.assertEqual(chamber_lookup(fan, (5,)).chamber, chamber_lookup(fan, (1,)).chamber)
        self.assertTrue(chamber_lookup(fan, (1,)).properly_stable)

    def test_chamber_interiors_consistent(self):
        rng = np.random.RandomState(29)
        gd, ws = torus([(1, 0), (1, 1), (0, 1), (-1, 2), (2, -1)])
        fan = git_fan(gd, ws)
        for chamber in fan.maximal_chambers():
            for _ in range(5):
                chi = random_interior_point(chamber.cone, rng)
                self.assertEqual(minimal_semistable_supports(ws, chi), chamber.semistable_supports)
        cones = list(fan.fan.cones)
        for low, high in fan.fan.face_pairs:
            face_chi = fan.chambers[low].representative
            for support in fan.chambers[high].semistable_supports:
                self.assertEqual(support_semistable(ws, face_chi, support).verdict, SEMISTABLE)
            self.assertTrue(membership(cones[high], face_chi))

    def test_gkz_cross_validation(self):
        rng = np.random.RandomState(31)
        checked = 0
        while checked < 50:
            weights = [tuple(int(x) for x in rng.randint(-3, 4, size=2)) for _ in range(5)]
            if mat_rank(weights, 2) < 2:
                continue
            gd, ws = torus(weights)
            fan = git_fan(gd, ws)
            self.assertEqual(sorted(fan.fan.maximal_cones(), key=cone_key), gkz_refinement(ws))
            checked += 1

    def test_flag_variety_single_chamber(self):
        gd, ws = flag_variety()
        fan = git_fan(gd, ws)
        self.assertEqual(fan.effective_cone, cone_from_rays(2, [(-1, 0), (0, -1)]))
        self.assertEqual([c.cone for c in fan.maximal_chambers()], [cone_from_rays(2, [(-1, 0), (0, -1)])])
        self.assertTrue(chamber_lookup(fan, (-1, -1)).effective)
        # T-semistable, but every point is unstable for GL(1) x GL(2)
        self.assertFalse(chamber_lookup(fan, (-3, 1)).effective)

    def test_empty_semistable_locus_not_effective(self):
        gd, ws = build_group(GroupSpec(gl_blocks=(2,)), ModuleSpec((Summand(kind="std", block=0),)))
        fan = git_fan(gd, ws)
        self.assertEqual(fan.effective_cone, zero_cone(1))
        self.assertFalse(chamber_lookup(fan, (1,)).effective)
        self.assertTrue(semistable_locus_empty(unstable_components(gd, ws, gd.character_embed((1,)))))

    def test_brute_force_limit(self):
        gd, ws = torus([(1,)] * 17)
        with self.assertRaises(ValueError):
            brute_force_unstable_supports(ws, (1,))


class TestMinimalSupports(unittest.TestCase):
    def test_hirzebruch_interior(self):
        gd, ws = torus(F1)
        supports = minimal_semistable_supports(ws, (1, 1))
        for s in supports:
            self.assertEqual(support_semistable(ws, (1, 1), s).verdict, SEMISTABLE)
            for sub in itertools.combinations(s, len(s) - 1):
                self.assertEqual(support_semistable(ws, (1, 1), sub).verdict, UNSTABLE)
        self.assertIn((0, 3), supports)
        self.assertEqual(minimal_semistable_supports(ws, (0, 0)), ((),))


if __name__ == '__main__':
    unittest.main()
