#!/usr/bin/env python3
"""Drives the zerogap binary end to end: outputs, exit codes, cache handling, schema."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN, SCHEMA = sys.argv[1], sys.argv[2]
failures = []


def run(*args, env=None):
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=env, timeout=600)
    return p.returncode, p.stdout, p.stderr


def expect(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


with open(SCHEMA) as fh:
    schema = json.load(fh)


def valid(doc):
    try:
        jsonschema.validate(doc, schema)
        return True
    except jsonschema.ValidationError as e:
        print("  schema:", e.message)
        return False


with tempfile.TemporaryDirectory() as cache:
    env = dict(os.environ, ZEROGAP_CACHE_DIR=cache)

    rc, out, _ = run("smallgaps", "--degree", "3", env=env)
    expect(rc == 0 and "3, 1.088426, 0.905604" in out, "smallgaps table row for m = 3")

    rc, _, _ = run("smallgaps", "--degree", "0", env=env)
    expect(rc == 2, "degree 0 is a usage error")

    rc, out, _ = run("largegap", env=env)
    expect(rc == 0 and out.strip() == "rho*=1.000000 bound=1.7320508", "largegap line")

    rc, _, _ = run("moments", "--form", "zeta", "--mu", "0", "--nu", "0", env=env)
    expect(rc == 2, "missing --T is a usage error")

    rc, out, _ = run("moments", "--form", "zeta", "--T", "100", "--mu", "1", "--nu", "0", env=env)
    doc = json.loads(out) if rc == 0 else {}
    expect(rc == 0 and "ratio" in doc and doc["numeric"]["re"] < 0, "zeta (1,0) moment has negative real part")
    expect(rc == 0 and valid(doc), "moment report matches the schema")

    rc, _, err = run("moments", "--form", "zeta", "--T", "100", "--mu", "0", "--nu", "0",
                     "--node-budget", "10", env=env)
    expect(rc == 4 and "budget" in err, "node budget overrun exits 4")

    rc, out, _ = run("zeros", "--form", "delta", "--tmax", "100", "--format", "json", env=env)
    doc = json.loads(out) if rc == 0 else {}
    expect(doc.get("count", 0) >= 30, "Delta zeros below 100")
    expect(rc == 0 and valid(doc), "zeros output matches the schema")

    rc, out, _ = run("hypcheck", "--form", "zeta", "--x", "100000", "--format", "json", env=env)
    doc = json.loads(out) if rc == 0 else {}
    last = doc.get("trajectory", [{}])[-1].get("ratio", 0.0) if rc == 0 else 0.0
    expect(0.826 < last < 1.05, f"zeta prime-square ratio at 1e5 = {last}")
    expect(rc == 0 and valid(doc), "hypcheck output matches the schema")

    for args in (["smallgaps", "--degree", "4", "--format", "json"],
                 ["largegap", "--format", "json"],
                 ["shifted-moments", "--form", "zeta", "--T", "100", "--alpha", "0.02", "--beta", "0.02",
                  "--format", "json"],
                 ["gaps", "--form", "delta", "--tmax", "120", "--lo", "60", "--hi", "120", "--format", "json"],
                 ["paircorr", "--form", "zeta", "--T", "100", "--kernels", "--format", "json"],
                 ["coeffs", "--form", "delta", "--N", "1000", "--format", "json"]):
        rc, out, err = run(*args, env=env)
        ok = rc == 0
        try:
            ok = ok and valid(json.loads(out))
        except json.JSONDecodeError:
            ok = False
        expect(ok, f"{args[0]} json output matches the schema")

    rc1, out1, _ = run("paircorr", "--form", "zeta", "--T", "100", env=env)
    rc2, out2, _ = run("paircorr", "--form", "zeta", "--T", "100", env=env)
    expect(rc1 == 0 and rc2 == 0 and out1 == out2, "repeated runs are byte-identical")

    bogus = os.path.join(cache, "bad.toml")
    with open(bogus, "w") as fh:
        fh.write("[moments]\nbogus = 3\n")
    rc, _, _ = run("--config", bogus, "moments", "--form", "zeta", "--T", "100", "--mu", "0", "--nu", "0",
                   env=env)
    expect(rc == 2, "unknown config key is rejected")

    tables = [f for f in os.listdir(cache) if f == "coeffs-delta-200000.txt"]
    expect(bool(tables), "Delta coefficient table is cached")
    if tables:
        path = os.path.join(cache, tables[0])
        with open(path, "r+") as fh:
            lines = fh.readlines()
            # same shape, different exact value
            fields = lines[-1].split()
            fields[-1] = str(int(fields[-1]) + 1)
            lines[-1] = " ".join(fields) + "\n"
            fh.seek(0)
            fh.writelines(lines)
            fh.truncate()
        rc, _, err = run("hypcheck", "--form", "delta", "--x", "1000", env=env)
        expect(rc == 5, "corrupted cache entry exits 5")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
