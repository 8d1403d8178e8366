#!/usr/bin/env python3
# CLI smoke tests: documented outputs, exit codes, JSON report round trip.
# usage: cli_test.py <path-to-mopkit>
import json
import os
import subprocess
import sys
import tempfile

BIN = sys.argv[1]
failures = []

GOOD = '{"dim":1,"phi":[[1]],"psi":"-2x","mu0":"identity"}'
BLOCKED = '{"dim":1,"phi":"1-x^2","psi":"0.5+4x","mu0":"identity"}'
HERMITE_MOMENTS = "[1,0,0.5,0,0.75,0,1.875,0,6.5625]"
WRONG_PAIR = '{"dim":1,"moments":%s,"phi":[[1]],"psi":"-3x"}' % HERMITE_MOMENTS
RIGHT_PAIR = '{"dim":1,"moments":%s,"phi":[[1]],"psi":"-2x"}' % HERMITE_MOMENTS


def run(*args):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def check(name, ok, detail=""):
    print(("ok   " if ok else "FAIL ") + name + ("" if ok else "  " + detail))
    if not ok:
        failures.append(name)


# documented outputs
code, out, _ = run("moments", GOOD, "--n", "4")
check("moments gaussian", code == 0 and "1, 0, 0.5, 0, 0.75" in out, out)
code, out, _ = run("class", "gallery:example2")
check("class example2", code == 0 and "class s = 1" in out, out)
code, out, _ = run("module-basis", "gallery:example1", "--p", "3", "--q", "2")
check("module-basis example1", code == 0 and "rank(M_{3,2}) = 2" in out, out)

# exit codes
code, out, _ = run("mop", GOOD, "--n", "5")
check("good spec exits 0", code == 0, str(code))
code, out, _ = run("mop", BLOCKED, "--n", "4")
check("blocked spec exits 0", code == 0 and "maximal segment" in out, f"{code}\n{out}")
code, out, _ = run("zeroclass", "check", BLOCKED)
check("blocked zeroclass exits 0", code == 0, str(code))
code, out, _ = run("check-pearson", RIGHT_PAIR, "--n", "3")
check("claimed pair holds", code == 0, str(code))
code, out, _ = run("check-pearson", WRONG_PAIR, "--n", "3")
check("violation exits 1", code == 1 and "VIOLATION" in out, f"{code}\n{out}")
for label, args in [
    ("malformed json", ["mop", '{"dim":1,', "--n", "3"]),
    ("unknown gallery", ["mop", "gallery:nope"]),
    ("no subcommand", []),
    ("bad --n", ["mop", GOOD, "--n", "abc"]),
    ("pearson on moments only", ["check-pearson", '{"dim":1,"moments":[1,0,0.5]}']),
]:
    code, _, _ = run(*args)
    check(label + " exits 2", code == 2, str(code))

# round trip: saved JSON re-rendered gives the same text
cases = [
    ["mop", "gallery:hermite", "--n", "4"],
    ["class", "gallery:example1"],
    ["zeroclass", "closed-forms", "gallery:laguerre", "--n", "4"],
    ["check-pearson", WRONG_PAIR, "--n", "3"],
    ["gallery", "list"],
]
with tempfile.TemporaryDirectory() as tmp:
    for i, args in enumerate(cases):
        path = os.path.join(tmp, f"r{i}.json")
        c1, direct, _ = run("--json-out", path, *args)
        c2, again, _ = run("report", "--json", path)
        check("round trip " + args[0], direct == again and c1 == c2, f"{c1} vs {c2}")
        c3, js, _ = run("--format", "json", *args)
        try:
            doc = json.loads(js)
            check("json schema " + args[0], doc.get("schema") == 1 and doc.get("exit_code") == c1)
        except json.JSONDecodeError as e:
            check("json parses " + args[0], False, str(e))

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
