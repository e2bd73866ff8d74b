"""Runs each hexspine subcommand and validates its JSON against the shipped schema."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

binary, schema_path = sys.argv[1], sys.argv[2]
schema = json.loads(Path(schema_path).read_text())
validator = jsonschema.Draft202012Validator(schema)


def holds_number(v):
    if isinstance(v, bool):
        return False
    if isinstance(v, (int, float)):
        return True
    if isinstance(v, dict):
        return any(holds_number(x) for x in v.values())
    if isinstance(v, list):
        return any(holds_number(x) for x in v)
    return False


tmp = Path(tempfile.mkdtemp())
commands = [
    ["trig", "--eps", "1.5707963"],
    ["pants", "--k", "4", "--eps", "0.7"],
    ["pants", "--k", "3", "--grid", "lin:0.2:2.8:5"],
    ["pants-asymptotics"],
    ["preset", "build", "--name", "gen2", "--out", str(tmp / "gen2.json")],
    ["axioms", "check", "--map", str(tmp / "gen2.json")],
    ["curves", "list"],
    ["filling", "--indices", "3,4,5,6"],
    ["systoles", "--preset", "gen2", "--eps", "1.0", "--window", "0.3"],
    ["bracket", "--eps", "0.9", "--elide"],
    ["delta", "--grid", "geom:0.004:0.0005:4"],
    ["codim-report", "--indices", "3,4,5,6"],
    ["bolza-crossing", "--tol", "1e-6"],
    ["bound", "--g", "100"],
]
failures = [["bound", "--g", "15"], ["nonsense"], ["delta", "--grid", "0,4"]]

bad = 0
for args in commands:
    p = subprocess.run([binary, *args], capture_output=True, text=True)
    errors = [e.message for e in validator.iter_errors(json.loads(p.stdout))] if p.returncode == 0 else [p.stderr]
    report = json.loads(p.stdout) if p.returncode == 0 else {}
    for key, value in report.get("result", {}).items():
        if holds_number(value) and key not in report["tolerances"]:
            errors.append(f"no tolerance for {key}")
    status = "ok" if not errors else "FAIL " + "; ".join(errors[:3])
    bad += bool(errors)
    print(" ".join(args), "->", status)

for args in failures:
    p = subprocess.run([binary, *args], capture_output=True, text=True)
    errors = [e.message for e in validator.iter_errors(json.loads(p.stderr))]
    if p.returncode != 2 or p.stdout:
        errors.append(f"exit {p.returncode}")
    bad += bool(errors)
    print(" ".join(args), "->", "ok" if not errors else "FAIL " + "; ".join(errors))

sys.exit(1 if bad else 0)
