#!/usr/bin/env python3
# Copyright 2026 The qsig Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Runs every scenario through the CLI and validates each report against the schema.

Usage: validate_reports.py <qsig binary> <report.schema.json>
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

RUNS = [
    ["--scenario", "honest_arbitrated", "--trials", "20"],
    ["--scenario", "eve_pauli_tamper", "--trials", "50", "--channel", "y"],
    ["--scenario", "eve_pauli_tamper", "--trials", "1", "--channel", "t_reply", "--seed", "35"],
    ["--scenario", "bob_pauli_forgery", "--trials", "50", "--mode", "protocol"],
    ["--scenario", "wrong_key_binding", "--trials", "20", "--swap", "full"],
    ["--scenario", "honest_truesig", "--trials", "20", "--d", "7", "--k", "3"],
    ["--scenario", "truesig_forgery", "--trials", "20", "--mode", "protocol"],
    ["--scenario", "truesig_random_substitution", "--trials", "50"],
    ["--scenario", "mac_forgery", "--trials", "200", "--b", "64"],
    ["--scenario", "qotp_mixing", "--trials", "5", "--d", "3"],
]


def check_consistency(report):
    trials = report["scenario"]["trials"]
    verdicts = report["trials"]
    assert len(verdicts) == trials, "trial count mismatch"
    accepted = sum(1 for ok, _ in verdicts if ok)
    assert accepted == report["accept_count"], "accept_count mismatch"
    assert report["accept_rate"] == accepted / trials, "accept_rate mismatch"
    assert sum(report["failure_stages"].values()) == trials - accepted, "histogram mismatch"


def main():
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    binary, schema_path = sys.argv[1], Path(sys.argv[2])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, args in enumerate(RUNS):
            out = Path(tmp) / f"report{i}.json"
            proc = subprocess.run([binary, "run", *args, "--out", str(out)], capture_output=True, text=True)
            if proc.returncode not in (0, 1):
                print(f"FAIL {' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
                failures += 1
                continue
            report = json.loads(out.read_text())
            errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
            try:
                check_consistency(report)
            except AssertionError as e:
                errors.append(e)
            if errors:
                failures += 1
                for e in errors:
                    print(f"FAIL {' '.join(args)}: {getattr(e, 'message', e)}")
            else:
                print(f"ok   {' '.join(args)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
