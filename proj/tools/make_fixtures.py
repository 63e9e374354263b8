#!/usr/bin/env python3
"""Regenerates the seeded controller networks and scenario files in tests/fixtures.

Weights are drawn with numpy's PCG64 generator, so the files are reproducible from the
seeds below on any platform.
"""

import json
import math
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"

DOUBLE_INTEGRATOR_SEED = 0
LATERAL_SEED = 34
STAR_CENTER = (11.0, 17.2)
STAR_HIT_CENTER = (13.5, 14.4)


def network(seed, sizes, bias_scale=0.1, gain=1.0):
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        W = rng.normal(0.0, gain * math.sqrt(2.0 / fan_in), size=(fan_out, fan_in))
        v = rng.normal(0.0, bias_scale, size=fan_out)
        layers.append({"W": np.round(W, 6).tolist(), "v": np.round(v, 6).tolist()})
    return {"layers": layers}


def write(name, obj):
    path = HERE / name
    path.write_text(json.dumps(obj, indent=1) + "\n")


def star(center, arm=0.6, width=0.1, arms=3):
    parts = []
    for k in range(arms):
        th = math.pi * k / arms
        G = [[arm * math.cos(th), -width * math.sin(th)], [arm * math.sin(th), width * math.cos(th)]]
        parts.append({"c": list(center), "Gc": [[round(x, 12) for x in row] for row in G]})
    return {"union": parts}


DI_SYSTEM = {"A_d": [[1, 1], [0, 1]], "B_d": [[0.5], [1]]}
DI_X0 = {"c": [2.5, 0], "Gc": [[0.2, 0], [0, 0.2]], "Gb": [[0.25], [0]]}
LATERAL_SYSTEM = {
    "A_d": [[0, 1, 5, 0], [0, -5, 0, -9.5], [0, 0, 0, 1], [0, 0.05, 0, -2.8]],
    "B_d": [[0], [25], [0], [50]],
}


def scenario(system, net, x0, horizon, out, **extra):
    s = {
        "system": system,
        "network": net,
        "initial_set": x0,
        "horizon": horizon,
        "mode": "exact",
        "output_dir": out,
        "seed": 7,
        "polygon": {"pair": [0, 1], "directions": 64, "cap": 4096},
    }
    s.update(extra)
    return s


def main():
    HERE.mkdir(parents=True, exist_ok=True)
    write("double_integrator_net.json", network(DOUBLE_INTEGRATOR_SEED, [2, 5, 5, 1]))
    write("lateral_net.json", network(LATERAL_SEED, [4, 6, 1]))
    di = "double_integrator_net.json"
    write("double_integrator.json", scenario(DI_SYSTEM, di, DI_X0, 2, "out/double_integrator"))
    write("di_far_unsafe.json", scenario(DI_SYSTEM, di, DI_X0, 2, "out/di_far_unsafe",
                                         unsafe_set={"box": {"lo": [30, 30], "hi": [31, 31]}}))
    write("di_star_unsafe.json", scenario(DI_SYSTEM, di, DI_X0, 2, "out/di_star_unsafe",
                                          unsafe_set=star(STAR_CENTER)))
    write("di_star_hit.json", scenario(DI_SYSTEM, di, DI_X0, 2, "out/di_star_hit",
                                       unsafe_set=star(STAR_HIT_CENTER)))
    write("di_reduced.json", scenario(DI_SYSTEM, di, DI_X0, 2, "out/di_reduced",
                                      reduction={"n_g": 4, "n_b": 2, "relax_order": "last"}))
    lateral_x0 = {"box": {"lo": [0.1, -0.9, 0.05, 0.05], "hi": [0.9, -0.1, 0.15, 0.15]}}
    write("lateral.json", scenario(LATERAL_SYSTEM, "lateral_net.json", lateral_x0, 1, "out/lateral"))


if __name__ == "__main__":
    main()
