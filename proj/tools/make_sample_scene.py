#!/usr/bin/env python3
"""Writes the two-view bottle scene under data/scenes/jar.

A 90 mm x 160 mm jar stands at (0.55, 0.05) on a table at z = 0 next to a
smaller can. Two cameras each see one half of the scene.
"""

import json
import math
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "data" / "scenes" / "jar"
rng = np.random.default_rng(5)


def cylinder(center, diameter, height, angles, levels):
    phi = 2 * math.pi * np.arange(angles) / angles
    z = np.linspace(0.0, height, levels)
    pp, zz = np.meshgrid(phi, z, indexing="ij")
    r = diameter / 2
    return np.stack([center[0] + r * np.cos(pp).ravel(), center[1] + r * np.sin(pp).ravel(), zz.ravel()], axis=1)


def pose(yaw, pitch, t):
    cz, sz = math.cos(yaw), math.sin(yaw)
    cx, sx = math.cos(pitch), math.sin(pitch)
    rz = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
    rx = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
    m = np.eye(4)
    m[:3, :3] = rz @ rx
    m[:3, 3] = t
    return m


jar = cylinder((0.55, 0.05), 0.09, 0.16, 64, 60)
can = cylinder((0.80, -0.20), 0.066, 0.12, 48, 30)
table = np.column_stack([rng.uniform(0.2, 1.0, 1500), rng.uniform(-0.4, 0.4, 1500), rng.normal(0.0, 0.0005, 1500)])
scene = np.vstack([jar, can, table])
scene += rng.normal(0.0, 0.0003, scene.shape)
# a few stray returns from the background
scene = np.vstack([scene, rng.uniform([-0.5, -1.0, -0.2], [1.5, 1.0, 0.8], (40, 3))])

views = [
    (scene[scene[:, 0] <= 0.55], pose(0.3, -2.3, (0.2, -0.5, 0.6))),
    (scene[scene[:, 0] >= 0.55], pose(-2.8, -2.2, (1.0, 0.4, 0.55))),
]


def fmt(v):
    return repr(float(v))


OUT.mkdir(parents=True, exist_ok=True)
entries = []
for i, (pts, m) in enumerate(views):
    cam = (m[:3, :3].T @ (pts - m[:3, 3]).T).T
    if i == 0:
        name = "view0.pcd"
        lines = [
            "# .PCD v0.7 - Point Cloud Data file format",
            "VERSION 0.7",
            "FIELDS x y z",
            "SIZE 8 8 8",
            "TYPE F F F",
            "COUNT 1 1 1",
            f"WIDTH {len(cam)}",
            "HEIGHT 1",
            "VIEWPOINT 0 0 0 1 0 0 0",
            f"POINTS {len(cam)}",
            "DATA ascii",
        ]
    else:
        name = "view1.xyz"
        lines = ["# x y z, meters, camera frame"]
    lines += [" ".join(fmt(c) for c in p) for p in cam]
    (OUT / name).write_text("\n".join(lines) + "\n")
    entries.append({"cloud": name, "transform": [float(x) for x in m.ravel()]})

manifest = {
    "views": entries,
    "roi": {"min": [0.45, -0.05, 0.002], "max": [0.65, 0.15, 0.40]},
    "trim_percentile": 0.01,
}
(OUT / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
