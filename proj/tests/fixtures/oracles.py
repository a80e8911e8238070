#!/usr/bin/env python3
#
# Copyright 2026, The diffscope Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy of
# the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.
#

"""Independent oracles for the test suite.

Writes oracles.json next to this file, or with --check compares a fresh
computation against the stored file. Everything here is derived from closed
forms or direct numerical integration of known transition densities, never
from the library under test.
"""

import argparse
import json
import pathlib
import sys

import mpmath as mp

mp.mp.dps = 30
HERE = pathlib.Path(__file__).resolve().parent


def normal_cdf(x):
    return mp.ncdf(x)


def bessel3_density_mean(x0=1, T=1):
    # Under the density process the price is Brownian motion absorbed at 0;
    # E[Z_T] is its survival probability, by the reflection principle.
    return 2 * normal_cdf(x0 / mp.sqrt(T)) - 1


def inverse_bessel3_mean(r0=1, t=1):
    # E[1 / R_t] for a three-dimensional Bessel process R started at r0,
    # integrating 1/y against the transition density
    # p(t, x, y) = (y / x) (phi_t(y - x) - phi_t(y + x)).
    def phi(z):
        return mp.exp(-z * z / (2 * t)) / mp.sqrt(2 * mp.pi * t)

    return mp.quad(lambda y: (phi(y - r0) - phi(y + r0)) / r0, [0, r0, mp.inf])


def exit_time(a, b, x, atoms=()):
    # E[tau] for Brownian motion on (a, b) with unit speed density plus atoms:
    # integral of the Green function G(x, y) = 2 (x^y - a)(b - x v y) / (b - a).
    def G(y):
        return 2 * (min(x, y) - a) * (b - max(x, y)) / (b - a)

    total = mp.quad(G, [a, x, b])
    for z, gamma in atoms:
        total += gamma * G(z)
    return total


def power_family_verdicts(m, sigma, k):
    # mu = m x^k, a = sigma^2 x^(k+1) on (0, inf), theta = 2m / sigma^2.
    # beta = -theta / x, s' = x^(-theta), speed density x^(theta - k - 1) / sigma^2.
    theta = 2 * m / sigma**2
    weighted_beta_finite = m == 0          # int x beta^2 = theta^2 int dx / x
    weighted_speed_infinite = k >= 1       # int x s' dm = int x^(-k) / sigma^2
    s_zero_finite = theta < 1
    feller_infinite = k >= 1               # int (s - s(0)) dm ~ int x^(-k)
    emm_tail_infinite = k <= 1             # int^inf x / a = int x^(-k)
    nupbr_fin = weighted_beta_finite or (s_zero_finite and feller_infinite) or not s_zero_finite
    nflvr_fin = weighted_beta_finite or (weighted_speed_infinite and (feller_infinite or not s_zero_finite))
    emm_fin = nflvr_fin and emm_tail_infinite
    scale_top_infinite = theta <= 1
    nupbr_inf = weighted_beta_finite and scale_top_infinite
    nflvr_inf = nupbr_inf
    emm_inf = False
    word = {True: "holds", False: "fails"}
    return {
        "nupbr_finite": word[nupbr_fin],
        "nflvr_finite": word[nflvr_fin],
        "emm_finite": word[emm_fin],
        "nupbr_infinite": word[nupbr_inf],
        "nflvr_infinite": word[nflvr_inf],
        "emm_infinite": word[emm_inf],
    }


def power_family_table():
    rows = []
    for m in (-0.5, 0.0, 0.25, 0.4, 0.75, 1.5):
        for k in (-1.0, 0.0, 0.5, 1.0, 1.5, 2.0):
            theta = 2 * m
            if theta > 1 and k > 1:
                continue  # +inf accessible: outside the family
            rows.append({"m": m, "sigma": 1.0, "k": k,
                         "verdicts": power_family_verdicts(m, 1.0, k)})
    return rows


def build():
    return {
        "bessel3_density_mean_T1": float(bessel3_density_mean()),
        "inverse_bessel3_mean_T1": float(inverse_bessel3_mean()),
        "inverse_bessel3_gap_T1": float(inverse_bessel3_mean() - 1),
        "bm_exit_time_from_0_of_m1_1": float(exit_time(-1, 1, 0)),
        "sticky_bm_exit_time_gamma2": float(exit_time(-1, 1, 0, atoms=[(0, 2)])),
        "bm_absorption_upper_from_0.3_on_0_1": 0.3,
        "power_family": power_family_table(),
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--check", action="store_true")
    args = parser.parse_args()
    data = build()
    target = HERE / "oracles.json"
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if args.check:
        stored = json.loads(target.read_text())
        fresh = json.loads(text)
        if stored != fresh:
            print("stored oracles differ from a fresh computation", file=sys.stderr)
            return 1
        print("oracles match")
        return 0
    target.write_text(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
