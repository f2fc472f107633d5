#!/usr/bin/env python3
"""Write the shipped resolution data files.

Unit tables are counted from explicit charts of each resolution; run from
the repository root. Output goes to crates/cli/data/resolutions/.
"""
import json
import os
from collections import Counter

PRIMES = [3, 5, 7, 11, 13, 17, 19]
OUT = os.path.join("crates", "cli", "data", "resolutions")


def table(values, q):
    c = Counter(v % q for v in values)
    assert 0 not in c, "non-unit residual value"
    return {str(u): c[u] for u in sorted(c)}


def divisor(i, n, nu, primes):
    return {"id": i, "N": n, "nu": nu, "meets_z": True,
            "image_meets_z_mod": {str(q): True for q in primes}}


def stratum(ids, per_q, constant=None):
    s = {"ids": ids, "nonempty": True}
    if constant is not None:
        s["constant_unit"] = constant
    s["unit_counts"] = {str(q): t for q, t in per_q.items()}
    return s


def x_power(a):
    primes = PRIMES
    return {
        "name": f"x^{a}",
        "n": 1,
        "vanish_on_z": False,
        "provenance": [
            f"x^{a} is already a normal crossing divisor: h = id, E = {{x = 0}}, N = {a}, nu = 1.",
            "E_0 is the origin with residual unit 1; off E the unit is f itself.",
        ],
        "divisors": [divisor("E", a, 1, primes)],
        "strata": [
            stratum([], {q: table([pow(x, a, q) for x in range(1, q)], q) for q in primes}),
            stratum(["E"], {q: {"1": 1} for q in primes}, "1"),
        ],
        "witnesses": [{"ids": ["E"], "d": d, "note": "u = 1 on the origin"}
                      for d in range(2, a + 1) if a % d == 0],
    }


def crossing():
    primes = PRIMES
    units = lambda q: table(range(1, q), q)
    return {
        "name": "xy",
        "n": 2,
        "vanish_on_z": False,
        "provenance": [
            "One blow-up of the origin; charts (x, y) = (u, uw) and (uw, w).",
            "Chart 1: f = u^2 w, E = {u = 0}, strict transform Sy = {w = 0}.",
            "Chart 2: f = u w^2, E = {w = 0}, strict transform Sx = {u = 0}.",
            "E_0 = P^1 minus two points, residual unit w; Sx_0 = {x = 0, y != 0} with unit y, likewise Sy_0.",
            "Sx meets E and Sy meets E in one point each, with unit 1.",
        ],
        "divisors": [divisor("Sx", 1, 1, primes), divisor("Sy", 1, 1, primes), divisor("E", 2, 2, primes)],
        "strata": [
            stratum([], {q: table([x * y for x in range(1, q) for y in range(1, q)], q) for q in primes}),
            stratum(["Sx"], {q: units(q) for q in primes}),
            stratum(["Sy"], {q: units(q) for q in primes}),
            stratum(["E"], {q: units(q) for q in primes}),
            stratum(["Sx", "E"], {q: {"1": 1} for q in primes}, "1"),
            stratum(["Sy", "E"], {q: {"1": 1} for q in primes}, "1"),
            {"ids": ["Sx", "Sy"], "nonempty": False},
        ],
        "witnesses": [],
    }


def cusp():
    primes = [q for q in PRIMES if q >= 5]
    f = lambda x, y: x * x + y ** 3
    return {
        "name": "x^2+y^3",
        "n": 2,
        "vanish_on_z": False,
        "provenance": [
            "Toric resolution with rays (1,1), (2,1), (3,2) between the axes; equivalent to three point blow-ups.",
            "E1 = ray (1,1): N = 2, nu = 2. Chart (x, y) = (u, uw): f = u^2 (1 + u w^3), unit 1 on E1.",
            "E2 = ray (2,1): N = 3, nu = 3. Chart (x, y) = (u w^2, w): f = w^3 (1 + u^2 w), unit 1 on E2.",
            "E3 = ray (3,2): N = 6, nu = 5. Chart (x, y) = (u^3 w, u^2 w): f = u^6 w^2 (1 + w).",
            "S = strict transform, meets E3 at w = -1 with unit w^2 = 1 in that chart.",
            "E3_0 = {w != 0, -1} with unit w^2 (1 + w); S_0 = {s != 0} via (x, y) = (s^3, -s^2), unit 1.",
            "Good reduction needs p > 3.",
        ],
        "divisors": [divisor("S", 1, 1, primes), divisor("E1", 2, 2, primes),
                     divisor("E2", 3, 3, primes), divisor("E3", 6, 5, primes)],
        "strata": [
            stratum([], {q: table([f(x, y) for x in range(q) for y in range(q) if f(x, y) % q], q) for q in primes}),
            stratum(["S"], {q: {"1": q - 1} for q in primes}, "1"),
            stratum(["E1"], {q: {"1": q} for q in primes}, "1"),
            stratum(["E2"], {q: {"1": q} for q in primes}, "1"),
            stratum(["E3"], {q: table([w * w * (1 + w) for w in range(1, q - 1)], q) for q in primes}),
            stratum(["S", "E3"], {q: {"1": 1} for q in primes}, "1"),
            stratum(["E1", "E3"], {q: {"1": 1} for q in primes}, "1"),
            stratum(["E2", "E3"], {q: {"1": 1} for q in primes}, "1"),
        ],
        "witnesses": [
            {"ids": ["E1"], "d": 2, "note": "u = 1 on E1_0"},
            {"ids": ["E2"], "d": 3, "note": "u = 1 on E2_0"},
        ],
    }


def main():
    os.makedirs(OUT, exist_ok=True)
    files = {"x1.json": x_power(1), "x2.json": x_power(2), "x3.json": x_power(3),
             "x4.json": x_power(4), "xy.json": crossing(), "cusp.json": cusp()}
    for name, data in files.items():
        with open(os.path.join(OUT, name), "w") as fh:
            json.dump(data, fh, indent=1)
            fh.write("\n")


if __name__ == "__main__":
    main()
