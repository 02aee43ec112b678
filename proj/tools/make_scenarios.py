#!/usr/bin/env python3
"""Regenerates the bundled scenario gallery under scenarios/.

The 21-bus cases use a uniform line section of (0.233 + j0.366) ohm on a
4.16 kV / 1 MVA base. The 123-node case is a synthetic single-phase radial
feeder: a 42-bus trunk with eight 10-bus laterals, deterministic impedance
variety, and a mean voltage profile derived from a uniform real-power load.
"""

import json
import pathlib

S_BASE_VA = 1.0e6
V_BASE_V = 4160.0
Z_BASE = V_BASE_V**2 / S_BASE_VA  # 17.3056 ohm

R_PU = 0.233 / Z_BASE
X_PU = 0.366 / Z_BASE

OUT = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


def chain_lines(n, r, x):
    return [{"from": j, "to": j + 1, "r": r, "x": x} for j in range(n)]


def base_block(note):
    return {"s_base_va": S_BASE_VA, "v_base_v": V_BASE_V, "note": note}


def write(name, doc):
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {path}")


def tc123_topology():
    """42-bus trunk + 8 laterals x 10 buses = 122 non-root buses."""
    lines = []
    next_bus = 1
    trunk = [0]
    for _ in range(42):
        lines.append((trunk[-1], next_bus))
        trunk.append(next_bus)
        next_bus += 1
    for i in range(8):
        tap = trunk[4 + 4 * i]  # every 4th trunk bus hosts a lateral
        prev = tap
        for _ in range(10):
            lines.append((prev, next_bus))
            prev = next_bus
            next_bus += 1
    assert next_bus == 123
    out = []
    for k, (a, b) in enumerate(lines):
        # deterministic variety around the 21-bus section values
        r = R_PU * (0.6 + 0.8 * ((7 * k + 3) % 11) / 10.0)
        x = X_PU * (0.6 + 0.8 * ((5 * k + 1) % 11) / 10.0)
        out.append({"from": a, "to": b, "r": r, "x": x})
    return out


def nominal_profile(lines, load_pu):
    """Zero-injection voltages 1 + R p for a uniform real-power draw."""
    n = len(lines)
    parent = {}
    r_into = {}
    for l in lines:
        parent[l["to"]] = l["from"]
        r_into[l["to"]] = l["r"]
    # accumulate subtree load (every bus draws load_pu)
    flow = {b: 0.0 for b in range(1, n + 1)}
    for b in range(n, 0, -1):  # children have larger indices by construction
        flow[b] += load_pu
        if parent[b] >= 1:
            flow[parent[b]] += flow[b]
    # line flow toward bus b is minus the subtree injection sum, so the drop
    # along r is -r * flow
    v = {0: 1.0}
    for b in range(1, n + 1):
        v[b] = v[parent[b]] + r_into[b] * flow[b]
    return [v[b] for b in range(1, n + 1)]


def main():
    OUT.mkdir(exist_ok=True)

    write("unit", {
        "name": "unit",
        "topology": {"buses": 2, "lines": [{"from": 0, "to": 1, "r": 0.3, "x": 0.4}], "v0": 1.0},
        "base": base_block("toy single-line network"),
        "controller": {"epsilon": "auto_sync", "safety": 0.5, "scaling": "newton_diag", "mu": "flat"},
        "dynamics": {
            "alpha": 0.0, "sigma2": 0.0, "mean_profile": [1.05], "seed": 1,
            "limits": {"mode": "static", "lower": -0.02, "upper": 0.02},
        },
        "schedule": {"mode": "sync"},
        "horizon": 200, "realizations": 3, "master_seed": 101,
        "physics": "linear", "mode": "strict",
    })

    write("tc1", {
        "name": "tc1",
        "topology": {"buses": 21, "lines": chain_lines(20, R_PU, X_PU), "v0": 1.0},
        "base": base_block("uniform 0.233+0.366j ohm line sections"),
        "controller": {"epsilon": "auto_sync", "safety": 0.5, "scaling": "newton_diag", "mu": "flat"},
        "dynamics": {
            "alpha": 0.0, "sigma2": 0.0, "mean_profile": "paper_ramp", "seed": 11,
            "limits": {"mode": "static", "lower": -0.1, "upper": 0.1},
        },
        "schedule": {"mode": "duty_cycle", "K": 50, "eta": 0.5, "seed": 7},
        "horizon": 5000, "realizations": 30, "master_seed": 712025,
        "physics": "linear", "mode": "strict",
    })

    write("tc2", {
        "name": "tc2",
        "topology": {"buses": 21, "lines": chain_lines(20, R_PU, X_PU), "v0": 1.0},
        "base": base_block("uniform 0.233+0.366j ohm line sections"),
        "controller": {"epsilon": "auto_dynamic", "safety": 1.0, "scaling": "newton_diag", "mu": "flat"},
        "dynamics": {
            "alpha": 0.1, "sigma2": 6.0e-6, "mean_profile": "paper_ramp", "seed": 13,
            "limits": {"mode": "static", "lower": -0.1, "upper": 0.1},
        },
        "schedule": {"mode": "sync"},
        "horizon": 2500, "realizations": 30, "master_seed": 88172,
        "physics": "linear", "mode": "strict",
    })

    lines123 = tc123_topology()
    profile = nominal_profile(lines123, -0.00125)
    lo = min(profile)
    assert 0.93 < lo < 0.995, lo
    write("tc3", {
        "name": "tc3",
        "topology": {"buses": 123, "lines": lines123, "v0": 1.0},
        "base": base_block("synthetic branched feeder, trunk + laterals"),
        # half the synchronous bound: on this deep feeder the dynamic-regime
        # step leaves the top mode barely damped and full participation
        # oscillates for thousands of steps
        "controller": {"epsilon": "auto_sync", "safety": 0.5, "scaling": "newton_diag", "mu": "flat"},
        "dynamics": {
            "alpha": 0.1, "sigma2": 1.0e-6, "mean_profile": profile, "seed": 17,
            "limits": {"mode": "static", "lower": -0.1, "upper": 0.1},
        },
        "schedule": {"mode": "duty_cycle", "K": 50, "eta": 0.5, "seed": 19},
        "horizon": 1500, "realizations": 8, "master_seed": 3355,
        "physics": "linear", "mode": "strict",
    })


if __name__ == "__main__":
    main()
