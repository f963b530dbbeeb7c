#!/usr/bin/env python3
# Copyright 2026 The gmmee-soc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Samples the synthetic OCV template and fits a 6th-order polynomial.

Writes tests/fixtures/ocv_fit.json, which the C++ tests use as an
independent reference for fit_ocv.
"""

import json
import pathlib

import numpy as np


def template(s):
    return 3.0 + 0.45 * (1.0 - np.exp(-15.0 * s)) + 0.75 * s ** 1.5


def main():
    soc = np.linspace(0.0, 1.0, 101)
    volts = template(soc)
    vander = np.vander(soc, 7, increasing=True)
    coeffs, *_ = np.linalg.lstsq(vander, volts, rcond=None)
    rmse = float(np.sqrt(np.mean((vander @ coeffs - volts) ** 2)))
    out = {
        "points": [[float(s), float(v)] for s, v in zip(soc, volts)],
        "coefficients": [float(c) for c in coeffs],
        "rmse": rmse,
    }
    root = pathlib.Path(__file__).resolve().parent.parent
    path = root / "tests" / "fixtures" / "ocv_fit.json"
    path.write_text(json.dumps(out, indent=2) + "\n")
    print(path, "rmse", rmse)
    print(json.dumps(out["coefficients"]))


if __name__ == "__main__":
    main()
