#!/usr/bin/env python3
"""Arbitrary-precision reference values for the finger kinematics.

Evaluates the slider-crank / isosceles-finger chain with mpmath at 50 digits
for the shipped default geometry. The printed values are frozen into
tests/test_kinematics.cpp; rerun this script after changing
data/default_geometry.json and update the test constants.
"""
import json
import pathlib
import sys

from mpmath import mp, mpf, cos, sin, sqrt, asin, acos, diff

mp.dps = 50

ROOT = pathlib.Path(__file__).resolve().parents[2]


def load_geometry(path):
    raw = json.loads(pathlib.Path(path).read_text())
    return {k: mpf(str(v)) for k, v in raw.items()}


def chain(g, theta):
    theta = mpf(theta)
    y_b = g["r1"] * cos(theta) + sqrt(g["r2"] ** 2 - g["r1"] ** 2 * sin(theta) ** 2)
    delta = g["e"] - g["c"] - y_b
    b = sqrt(g["d"] ** 2 + delta ** 2)
    alpha = asin(delta / b) + acos(b / (2 * g["l"]))
    x_left = g["l"] * cos(alpha) - g["delta_x"]
    x_right = g["delta_x"] - g["l"] * cos(alpha)
    y_tip = g["l"] * sin(alpha) + g["delta_y"]
    return dict(y_b=y_b, delta=delta, b=b, alpha=alpha, x_left=x_left,
                x_right=x_right, y_tip=y_tip, aperture=x_right - x_left)


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else ROOT / "data" / "default_geometry.json"
    g = load_geometry(path)
    for theta in ("-0.8", "-1.0", "-1.4", "-1.9"):
        s = chain(g, theta)
        print(f"theta = {theta}")
        for key, value in s.items():
            print(f"  {key:9s} = {mp.nstr(value, 20)}")
        dx = diff(lambda t: chain(g, t)["x_left"], mpf(theta))
        dy = diff(lambda t: chain(g, t)["y_tip"], mpf(theta))
        print(f"  dx_left/dtheta = {mp.nstr(dx, 20)}")
        print(f"  dy_tip/dtheta  = {mp.nstr(dy, 20)}")


if __name__ == "__main__":
    main()
