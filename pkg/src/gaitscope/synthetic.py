"""Synthetic walking scenes with known ground truth.

A pinhole camera observes a flat street scene: lane markings on the
ground plane, and walkers moving along the lane direction with planted
footfall positions and a sinusoidal head bob.  Because every projected
landmark comes from known world geometry, the rectified features the
pipeline should recover are available in closed form, which makes these
scenes the independent oracle for the geometry and gait modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .annotations import AnnotationDocument
from .gait import Direction, FrameLandmarks, Outcome, WalkSequence
from .geometry import LanePair, Point2

# Ground-plane layout (world units; z is up).
LANE_X0, LANE_X1 = 0.0, 10.0
LANE_Y_A, LANE_Y_B = -3.0, -5.0
WALK_Y = 0.0
LANE_GROUND_LENGTH = LANE_X1 - LANE_X0

# Images are rescaled so the mean projected lane length is fixed, which
# makes rectified units commensurate across camera poses.
TARGET_LANE_PIXELS = 200.0

#: Rectified top-view pixels per ground unit under that normalization.
PIXELS_PER_GROUND_UNIT = TARGET_LANE_PIXELS / LANE_GROUND_LENGTH


@dataclass(frozen=True)
class Camera:
    """3x4 pinhole projection matrix."""

    p: np.ndarray

    def project(self, pts3d) -> np.ndarray:
        pts = np.asarray(pts3d, dtype=float)
        homog = np.column_stack([pts, np.ones(len(pts))]) @ self.p.T
        if np.any(homog[:, 2] <= 1e-9):
            raise ValueError("point behind the camera")
        return homog[:, :2] / homog[:, 2:3]

    def ground_homography(self) -> np.ndarray:
        """Image <- ground-plane (x, y, z=0) homography."""
        return self.p[:, [0, 1, 3]].copy()

    def wall_homography(self, y0: float) -> np.ndarray:
        """Image <- vertical plane y=y0 homography, coords (x, z)."""
        h = np.column_stack(
            [self.p[:, 0], self.p[:, 2], y0 * self.p[:, 1] + self.p[:, 3]]
        )
        return h


def make_camera(
    azimuth_deg: float,
    elevation_deg: float,
    distance: float,
    focal: float = 1000.0,
    target=(5.0, -1.0, 0.8),
) -> Camera:
    """Camera on a sphere around the scene, looking at its center."""
    az = math.radians(azimuth_deg)
    el = math.radians(elevation_deg)
    target = np.asarray(target, dtype=float)
    center = target + distance * np.array(
        [math.sin(az) * math.cos(el), -math.cos(az) * math.cos(el),
         math.sin(el)]
    )
    forward = target - center
    forward /= np.linalg.norm(forward)
    world_up = np.array([0.0, 0.0, 1.0])
    right = np.cross(forward, world_up)
    right /= np.linalg.norm(right)
    down = np.cross(forward, right)
    r = np.vstack([right, down, forward])
    k = np.array([[focal, 0.0, 320.0], [0.0, focal, 240.0], [0.0, 0.0, 1.0]])
    p = k @ np.column_stack([r, -r @ center])
    return Camera(p)


def random_camera(rng: np.random.Generator) -> Camera:
    return make_camera(
        azimuth_deg=float(rng.uniform(-50, 50)),
        elevation_deg=float(rng.uniform(20, 55)),
        distance=float(rng.uniform(15, 30)),
        focal=float(rng.uniform(800, 1400)),
    )


def lane_endpoints_ground() -> np.ndarray:
    return np.array(
        [
            [LANE_X0, LANE_Y_A, 0.0],
            [LANE_X1, LANE_Y_A, 0.0],
            [LANE_X0, LANE_Y_B, 0.0],
            [LANE_X1, LANE_Y_B, 0.0],
        ]
    )


def image_scale_factor(camera: Camera) -> float:
    """Similarity scale making the mean projected lane length fixed."""
    pts = camera.project(lane_endpoints_ground())
    mean_len = 0.5 * (
        np.linalg.norm(pts[1] - pts[0]) + np.linalg.norm(pts[3] - pts[2])
    )
    return TARGET_LANE_PIXELS / mean_len


def projected_lanes(camera: Camera, scale: float) -> LanePair:
    pts = camera.project(lane_endpoints_ground()) * scale
    return LanePair(
        (Point2(*pts[0]), Point2(*pts[1])),
        (Point2(*pts[2]), Point2(*pts[3])),
    )


@dataclass(frozen=True)
class WalkTruth:
    """World-space ground truth behind one synthetic walk."""

    stride: float  # ground units between successive footfalls
    footfalls_ground: np.ndarray  # (n, 2) planted ground positions
    height: float
    bob_amp_pct: float
    bob_period: int

    @property
    def expected_stride_pixels(self) -> float:
        return self.stride * PIXELS_PER_GROUND_UNIT

    @property
    def expected_head_range(self) -> float:
        """2a shrunk by the smoothing kernel's gain at the bob frequency.

        The kernel is the documented truncated Gaussian (sigma=2, radius
        ceil(3*sigma), renormalized), so its discrete-time frequency
        response sum_k w_k cos(omega*k) is the closed-form attenuation of
        a sinusoid of that period.
        """
        sigma = 2.0
        radius = math.ceil(3.0 * sigma)
        offsets = np.arange(-radius, radius + 1)
        w = np.exp(-0.5 * (offsets / sigma) ** 2)
        w /= w.sum()
        omega = 2.0 * math.pi / self.bob_period
        gain = float(np.sum(w * np.cos(omega * offsets)))
        return 2.0 * self.bob_amp_pct * gain


def make_walk(
    camera: Camera,
    person_id: int,
    stride: float = 1.2,
    n_stances: int = 4,
    contact_len: int = 8,
    swing_len: int = 8,
    height: float = 1.7,
    bob_amp_pct: float = 3.0,
    bob_period: int = 64,
    start_frame: int = 0,
    outcome: Outcome = Outcome.NO_FALL,
    jitter: float = 0.0,
    rng: np.random.Generator | None = None,
    scale: float | None = None,
) -> tuple[WalkSequence, WalkTruth]:
    """One walker along the lane direction, projected into the image.

    Footfalls alternate feet but lie on the walk line, so the planted
    stride equals the ground distance between successive footfalls.  The
    walk length is padded to a whole number of bob periods so the head
    starts and ends at its nominal height.
    """
    if scale is None:
        scale = image_scale_factor(camera)
    step = contact_len + swing_len
    n_frames = (n_stances - 1) * step + contact_len
    # Pad so (n_frames - 1) is a multiple of the bob period: the side
    # quad's head corners then sit exactly at nominal height.
    while (n_frames - 1) % bob_period != 0:
        n_frames += 1

    footfalls = np.array(
        [[1.0 + k * stride, WALK_Y] for k in range(n_stances)]
    )
    x_path = np.linspace(footfalls[0, 0], footfalls[-1, 0], n_frames)
    amp = height * bob_amp_pct / 100.0

    rng = rng or np.random.default_rng(0)
    frames = []
    for t in range(n_frames):
        head3 = [
            x_path[t],
            WALK_Y,
            height + amp * math.sin(2.0 * math.pi * t / bob_period),
        ]
        feet3 = {"left": None, "right": None}
        contacts = {"left": False, "right": False}
        for k in range(n_stances):
            foot = "left" if k % 2 == 0 else "right"
            if k * step <= t < k * step + contact_len:
                contacts[foot] = True
                feet3[foot] = [footfalls[k, 0], footfalls[k, 1], 0.0]
        for foot in ("left", "right"):
            if feet3[foot] is None:
                feet3[foot] = [x_path[t], WALK_Y, 0.0]

        pts = camera.project([head3, feet3["left"], feet3["right"]]) * scale
        if jitter > 0:
            pts = pts + rng.normal(0.0, jitter, pts.shape)
        frames.append(
            FrameLandmarks(
                frame=start_frame + t,
                head=Point2(*pts[0]),
                left_foot=Point2(*pts[1]),
                right_foot=Point2(*pts[2]),
                left_contact=contacts["left"],
                right_contact=contacts["right"],
            )
        )

    end_frame = start_frame + n_frames - 1
    walk = WalkSequence(
        person_id=person_id,
        start_frame=start_frame,
        end_frame=end_frame,
        obstacle_frame=end_frame + 1,
        direction=Direction.LEFT_TO_RIGHT,
        outcome=outcome,
        frames=tuple(frames),
    )
    truth = WalkTruth(stride, footfalls, height, bob_amp_pct, bob_period)
    return walk, truth


def make_scene(
    seed: int = 7,
    n_people: int = 3,
    jitter: float = 0.0,
    camera: Camera | None = None,
) -> tuple[AnnotationDocument, dict[int, WalkTruth], Camera]:
    """A full annotation document with per-person ground truth."""
    rng = np.random.default_rng(seed)
    if camera is None:
        camera = random_camera(rng)
    scale = image_scale_factor(camera)
    lanes = projected_lanes(camera, scale)

    sequences = []
    truths = {}
    start = 0
    for person_id in range(1, n_people + 1):
        stride = float(rng.uniform(0.8, 1.6))
        walk, truth = make_walk(
            camera,
            person_id,
            stride=stride,
            n_stances=int(rng.integers(3, 6)),
            bob_amp_pct=float(rng.uniform(1.5, 4.0)),
            outcome=Outcome.FALL if person_id % 2 else Outcome.NO_FALL,
            start_frame=start,
            jitter=jitter,
            rng=rng,
            scale=scale,
        )
        sequences.append(walk)
        truths[person_id] = truth
        start = walk.end_frame + 10

    doc = AnnotationDocument(
        f"synthetic-street-{seed}", 25.0, lanes, tuple(sequences)
    )
    return doc, truths, camera
