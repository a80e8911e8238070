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

"""Checks catalog documents and hand-written examples against the shipped schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main():
    cli, schema_path = sys.argv[1], pathlib.Path(sys.argv[2])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    listing = json.loads(subprocess.run([cli, "catalog"], check=True, capture_output=True, text=True).stdout)
    failures = 0
    for model in listing["models"]:
        doc = json.loads(subprocess.run([cli, "catalog", model["name"]], check=True,
                                        capture_output=True, text=True).stdout)
        errors = list(validator.iter_errors(doc))
        status = "ok" if not errors else "FAIL " + "; ".join(e.message for e in errors)
        failures += bool(errors)
        print(f"{model['name']}: {status}")
    bad = [
        {"state_interval": {"l": 0, "r": "inf"}, "scale": {"form": "ito", "mu": "1/x", "a": "1"}},
        {"state_interval": {"l": 0, "r": "inf"}, "scale": {"form": "spline"}, "x0": 1},
        {"state_interval": {"l": 0, "r": "inf"}, "scale": {"form": "ito", "mu": "0", "a": "1"},
         "speed": {"boundary_mass_l": -1}, "x0": 1},
    ]
    for i, doc in enumerate(bad):
        if validator.is_valid(doc):
            print(f"bad document {i}: FAIL accepted")
            failures += 1
        else:
            print(f"bad document {i}: rejected")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
