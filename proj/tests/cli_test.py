#!/usr/bin/env python3
"""Runs fdtool over the sample data: exit codes, schema validity, byte-identical reruns."""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

tool, root = os.path.abspath(sys.argv[1]), os.path.abspath(sys.argv[2])
data = os.path.join(root, "data")
schemas = os.path.join(root, "schemas")
failures = []


def run(args):
    return subprocess.run([tool] + args, cwd=data, capture_output=True, text=True)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


# (schema file, arguments)
cases = [
    ("parse", ["parse", "annulus.fml"]),
    ("fdinfo", ["fdinfo", "circle.fml"]),
    ("cad", ["cad", "circle.fml", "--stats", "--approx", "6"]),
    ("cad", ["cad", "sphere.fml"]),
    ("components", ["components", "two_disks.fml"]),
    ("bound-check", ["bound-check", "product", "--to", "5"]),
    ("bound-check", ["bound-check", "lines", "--to", "2"]),
    ("bound-check", ["bound-check", "chebyshev", "--from", "2", "--to", "4"]),
    ("stratify", ["stratify", "circle.fml"]),
    ("triangulate", ["triangulate", "disk.fml"]),
    ("betti", ["betti", "annulus.fml"]),
    ("choice", ["choice", "family.fml", "--at", "1", "--at", "-1/2", "--approx", "4"]),
    ("choice", ["choice", "disk.fml", "--fiber-dim", "2", "--strict", "--at", ""]),
    ("tree", ["tree", "tree.json", "--lift", "--check", "--samples", "4"]),
    ("star", ["star", "star_circle.json", "circle.fml", "--ccd", "1"]),
    ("star", ["star", "two_disks.fml", "--ccd", "2"]),
    ("reduce-check", ["reduce-check", "reduction.json"]),
    ("report", ["report", "circle.fml", "disk.fml", "sphere.fml"]),
]

with tempfile.TemporaryDirectory() as tmp:
    for i, (schema, args) in enumerate(cases):
        outs = []
        for rep in range(2):
            path = os.path.join(tmp, "%d_%d.json" % (i, rep))
            r = run(args + ["--seed", "7", "--json", path])
            check(r.returncode == 0, "exit 0: " + " ".join(args) + (" " + r.stderr.strip() if r.returncode else ""))
            if r.returncode:
                break
            check("seed 7" in r.stdout, "seed echoed: " + args[0])
            with open(path, "rb") as f:
                outs.append(f.read())
        if len(outs) != 2:
            continue
        check(outs[0] == outs[1], "byte-identical rerun: " + " ".join(args))
        with open(os.path.join(schemas, schema + ".schema.json")) as f:
            s = json.load(f)
        doc = json.loads(outs[0])
        try:
            jsonschema.validate(doc, s)
            check(True, "schema " + schema + ": " + " ".join(args))
        except jsonschema.ValidationError as e:
            check(False, "schema " + schema + ": " + " ".join(args) + ": " + e.message)

r = run(["fdinfo", "circle.fml"])
check("FD (2, 2)" in r.stdout and "P-format 2" in r.stdout, "fdinfo circle: FD (2, 2), P-format 2")
r = run(["cad", "circle.fml", "--stats", "--json", "-"])
check(r.returncode == 0 and json.loads(r.stdout)["count"] == 13, "cad circle: 13 cells")
check(json.loads(r.stdout)["stats"]["cells"] == 13, "cad circle: stats report 13 cells")
r = run(["components", "missing.fml"])
check(r.returncode == 1 and "file not found" in r.stderr, "missing file: exit 1")
r = run(["cad", "sphere.fml", "--ceiling", "2"])
check(r.returncode == 2, "sphere under ceiling 2: exit 2")
r = run(["frobnicate"])
check(r.returncode == 1, "unknown subcommand: exit 1")
with tempfile.NamedTemporaryFile("w", suffix=".fml", delete=False) as f:
    f.write("(x > 0) and (x > 0\n")
r = run(["fdinfo", f.name])
os.unlink(f.name)
check(r.returncode == 1 and "error" in r.stderr, "syntax error: exit 1")
r = run(["choice", "circle.fml", "--at", "5"])
check(r.returncode == 1, "empty fiber: exit 1")
r = run(["betti", "two_disks.fml", "--json", "-"])
check(json.loads(r.stdout)["betti"] == [2, 0, 0], "betti two disks (2, 0, 0)")

print("%d failure(s)" % len(failures))
sys.exit(1 if failures else 0)
