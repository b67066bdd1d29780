import math
import random

import numpy as np
import pytest

from spatialui import (
    NodeKind,
    NotFoundError,
    Obb,
    Pose,
    Quat,
    Ray,
    Scene,
    Vec3,
    pick,
    ray_intersect_obb,
)

from .test_math3d import pose_to_matrix, random_pose


def build_random_forest(rng: random.Random, n_nodes: int) -> Scene:
    scene = Scene()
    ids: list[int] = []
    for _ in range(n_nodes):
        parent = rng.choice(ids) if ids and rng.random() < 0.7 else None
        node = scene.add(NodeKind.PANEL, parent=parent, local=random_pose(rng, spread=1.0))
        ids.append(node.node_id)
    return scene


def world_matrix_oracle(scene: Scene, node_id: int) -> np.ndarray:
    """Flattened 4x4 matrix chain, root to node."""
    chain = []
    nid: int | None = node_id
    while nid is not None:
        node = scene.node(nid)
        chain.append(node.local)
        nid = node.parent
    m = np.eye(4)
    for local in reversed(chain):
        m = m @ pose_to_matrix(local)
    return m


class TestWorldPose:
    def test_root_returns_local(self):
        scene = Scene()
        p = Pose.from_xyz(0.5, 1.0, -0.25)
        node = scene.add(NodeKind.PANEL, local=p)
        assert scene.world_pose(node.node_id) == p

    def test_translation_chain(self):
        scene = Scene()
        a = scene.add(NodeKind.PANEL, local=Pose.from_xyz(0, 1, 0))
        b = scene.add(NodeKind.BUTTON, parent=a.node_id, local=Pose.from_xyz(0, 0, 2))
        w = scene.world_pose(b.node_id)
        assert (w.position.x, w.position.y, w.position.z) == (0.0, 1.0, 2.0)

    def test_three_deep_mixed_rotations_matches_matrix_oracle(self):
        scene = Scene()
        a = scene.add(
            NodeKind.PANEL,
            local=Pose(Vec3(0.2, 1.1, -0.4), Quat.from_axis_angle(Vec3(0, 1, 0), 0.7)),
        )
        b = scene.add(
            NodeKind.PANEL,
            parent=a.node_id,
            local=Pose(Vec3(-0.3, 0.05, 0.6), Quat.from_axis_angle(Vec3(1, 0, 0), -1.2)),
        )
        c = scene.add(
            NodeKind.BUTTON,
            parent=b.node_id,
            local=Pose(Vec3(0.1, -0.2, 0.05), Quat.from_axis_angle(Vec3(0, 0, 1), 2.0)),
        )
        got = pose_to_matrix(scene.world_pose(c.node_id))
        want = world_matrix_oracle(scene, c.node_id)
        assert np.allclose(got, want, atol=1e-12)

    def test_unknown_id_raises(self):
        with pytest.raises(NotFoundError):
            Scene().world_pose(42)

    def test_thousand_random_forests_match_matrix_oracle(self):
        rng = random.Random(2024)
        for _ in range(1000):
            scene = build_random_forest(rng, rng.randint(1, 12))
            for node_id in scene.ids():
                got = pose_to_matrix(scene.world_pose(node_id))
                want = world_matrix_oracle(scene, node_id)
                assert np.allclose(got, want, atol=1e-5)


def unit_box(scene: Scene, z: float, half: float = 0.5, visible: bool = True):
    return scene.add(
        NodeKind.BUTTON,
        local=Pose.from_xyz(0, 0, z),
        collider=Obb(Pose.identity(), Vec3(half, half, half)),
        visible=visible,
    )


class TestPick:
    def test_empty_scene(self):
        ray = Ray(Vec3(), Vec3(0, 0, -1))
        assert pick(Scene(), ray) is None

    def test_nearer_box_wins(self):
        scene = Scene()
        near = unit_box(scene, -2.0)
        unit_box(scene, -5.0)
        hit = pick(scene, Ray(Vec3(), Vec3(0, 0, -1)))
        assert hit is not None
        assert hit[0] == near.node_id
        assert hit[1] == pytest.approx(1.5, abs=1e-12)

    def test_coincident_colliders_tie_break_lower_id(self):
        scene = Scene()
        first = unit_box(scene, -3.0)
        second = unit_box(scene, -3.0)
        ray = Ray(Vec3(), Vec3(0, 0, -1))
        # Both really are hit at the same distance.
        t1 = ray_intersect_obb(ray, scene.world_collider(first.node_id))
        t2 = ray_intersect_obb(ray, scene.world_collider(second.node_id))
        assert t1 == t2
        hit = pick(scene, ray)
        assert hit is not None and hit[0] == first.node_id

    def test_invisible_nodes_never_picked(self):
        scene = Scene()
        unit_box(scene, -2.0, visible=False)
        behind = unit_box(scene, -5.0)
        hit = pick(scene, Ray(Vec3(), Vec3(0, 0, -1)))
        assert hit is not None and hit[0] == behind.node_id

    def test_hidden_ancestor_hides_subtree(self):
        scene = Scene()
        root = scene.add(NodeKind.PANEL, local=Pose.from_xyz(0, 0, -2), visible=False)
        scene.add(
            NodeKind.BUTTON,
            parent=root.node_id,
            collider=Obb(Pose.identity(), Vec3(0.5, 0.5, 0.5)),
        )
        assert pick(scene, Ray(Vec3(), Vec3(0, 0, -1))) is None

    def test_pick_distance_equals_direct_intersection(self):
        rng = random.Random(9)
        for _ in range(50):
            scene = Scene()
            for _ in range(rng.randint(1, 6)):
                scene.add(
                    NodeKind.BUTTON,
                    local=random_pose(rng, spread=1.5),
                    collider=Obb(
                        Pose.identity(),
                        Vec3(rng.uniform(0.1, 0.5), rng.uniform(0.1, 0.5), rng.uniform(0.1, 0.5)),
                    ),
                )
            direction = Vec3(
                rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1) - 0.5
            ).normalized()
            ray = Ray(Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), 3.0), direction)
            hit = pick(scene, ray)
            if hit is not None:
                node_id, dist = hit
                assert dist == ray_intersect_obb(ray, scene.world_collider(node_id))


class TestSceneStructure:
    def test_parent_must_exist(self):
        with pytest.raises(NotFoundError):
            Scene().add(NodeKind.BUTTON, parent=99)

    def test_ids_unique_and_increasing(self):
        scene = Scene()
        ids = [scene.add(NodeKind.MARKER).node_id for _ in range(5)]
        assert ids == sorted(set(ids))

    def test_opacity_clamped_on_construction(self):
        scene = Scene()
        node = scene.add(NodeKind.PANEL, opacity=1.7)
        assert node.opacity == 1.0

    def test_set_world_pose_root_is_verbatim(self):
        scene = Scene()
        node = scene.add(NodeKind.PANEL, local=random_pose(random.Random(4)))
        target = Pose(Vec3(0.123456789, -1.5, 2.0), Quat.from_axis_angle(Vec3(0, 1, 0), 0.3))
        scene.set_world_pose(node.node_id, target)
        assert scene.world_pose(node.node_id) == target

    def test_set_world_pose_child_lands_on_target(self):
        rng = random.Random(6)
        scene = Scene()
        a = scene.add(NodeKind.PANEL, local=random_pose(rng))
        b = scene.add(NodeKind.BUTTON, parent=a.node_id, local=random_pose(rng))
        target = random_pose(rng)
        scene.set_world_pose(b.node_id, target)
        got = scene.world_pose(b.node_id)
        assert got.position.x == pytest.approx(target.position.x, abs=1e-9)
        assert got.position.y == pytest.approx(target.position.y, abs=1e-9)
        assert got.position.z == pytest.approx(target.position.z, abs=1e-9)
        assert abs(got.rotation.dot(target.rotation)) >= 1.0 - 1e-9
