"""Built-in example problems, addressable by name without a file."""
from __future__ import annotations

BUILTIN_PROBLEMS = {
    # 2 Re z3 + |z1|^2 - |z2|^2 = 0 with the standard complex structure
    "hyperquadric": {
        "dimension_2n": 6,
        "mode": "real",
        "rho": "2*f5 + f1^2 + f2^2 - f3^2 - f4^2",
        "structure": {"kind": "complex_standard"},
        "distinguished_pair": [1, 2],
        "points": {"P0": ["1", "0", "1", "0", "0", "0"]},
        "jets": {
            "J0": {"point": "P0", "p_reduced": ["1", "0", "0", "0"]},
            "J1": {"point": "P0", "p_reduced": ["2", "1", "1", "3"]},
        },
        "strata": {
            "nonzero_velocity": {
                "equalities": [
                    "z3 + zb3 + z1*zb1 - z2*zb2",
                    "w3 + w1*zb1 - w2*zb2",
                    "w1*wb1 - w2*wb2",
                ],
                "openings": [{"expr": "w1*wb1 + w2*wb2", "sign": "+"}],
                "probes": {
                    "Q0": {"z": [["1", "0"], ["1", "0"], ["0", "0"]],
                           "w": [["1", "0"], ["1", "0"], ["0", "0"]]},
                    "Q1": {"z": [["2", "0"], ["2", "0"], ["0", "0"]],
                           "w": [["0", "1"], ["0", "1"], ["0", "0"]]},
                },
            },
        },
    },
    # Re z3 + |z1^2 - z2^3|^2 = 0, standard structure
    "cusp": {
        "dimension_2n": 6,
        "mode": "real",
        "rho": ("f5 + (f1^2 - f2^2 - f3^3 + 3*f3*f4^2)^2"
                " + (2*f1*f2 - 3*f3^2*f4 + f4^3)^2"),
        "structure": {"kind": "complex_standard"},
        "points": {"P0": ["1", "0", "0", "0", "-1", "0"]},
        "strata": {
            "generic": {
                "equalities": [
                    "1/2*z3 + 1/2*zb3 + (z1^2 - z2^3)*(zb1^2 - zb2^3)",
                    "w3",
                    "2*z1*w1 - 3*z2^2*w2",
                ],
                "openings": [
                    {"expr": "z1*zb1 + z2*zb2 + w1*wb1", "sign": "+"},
                ],
                "probes": {
                    "P_generic": {"z": [["1", "0"], ["0", "0"], ["-1", "0"]],
                                  "w": [["0", "0"], ["1", "0"], ["0", "0"]]},
                    "P_origin": {"z": [["0", "0"], ["0", "0"], ["0", "1"]],
                                 "w": [["1", "0"], ["0", "0"], ["0", "0"]]},
                },
            },
            "vertex": {
                "equalities": [
                    "1/2*z3 + 1/2*zb3 + (z1^2 - z2^3)*(zb1^2 - zb2^3)",
                    "w3",
                    "z1",
                    "z2",
                    "w1",
                ],
                "openings": [],
                "probes": {
                    "R0": {"z": [["0", "0"], ["0", "0"], ["0", "1"]],
                           "w": [["0", "0"], ["0", "0"], ["0", "0"]]},
                },
            },
        },
    },
    # Re z3 = 0
    "flat": {
        "dimension_2n": 6,
        "mode": "real",
        "rho": "f5",
        "structure": {"kind": "complex_standard"},
        "points": {"P0": ["0", "0", "0", "0", "0", "0"]},
        "jets": {"J0": {"point": "P0", "p_reduced": ["1", "0", "0", "0"]}},
        "strata": {
            "base": {
                "equalities": ["1/2*z3 + 1/2*zb3", "w3"],
                "openings": [],
                "probes": {
                    "Q0": {"z": [["0", "0"], ["0", "0"], ["0", "0"]],
                           "w": [["1", "0"], ["0", "0"], ["0", "0"]]},
                },
            },
        },
    },
}
