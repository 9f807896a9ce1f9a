"""Command-line tour.

Everything the library does is reachable from the besovk command:
norms, K curves, interpolation norms, field generation, and the
self-check suites.  Output formats are byte-stable across runs, so the
CLI is safe to diff in regression scripts.
"""

import json
import subprocess
import sys

FIELD = ["--generate", "lacunary", "--spec", "2,1,2,3", "--seed", "5"]


def run(*args):
    cmd = [sys.executable, "-m", "besovk", *args]
    print("$ besovk", " ".join(args))
    out = subprocess.run(cmd, capture_output=True, text=True)
    print(out.stdout, end="")
    if out.returncode != 0:
        print(f"  (exit {out.returncode})", out.stderr.strip())
    print()
    return out


run("generate", *FIELD)

run("norm", *FIELD, "--s0", "0.5", "--p0", "2", "--q0", "1")

run("kcurve", *FIELD, "--s0", "-0.5", "--p0", "2", "--q0", "1",
    "--s1", "1.0", "--q1", "1",
    "--t-min-exp", "-2", "--t-max-exp", "2", "--points-per-decade", "1")

run("interpnorm", *FIELD, "--s0", "-0.5", "--p0", "2", "--q0", "1",
    "--s1", "1.0", "--q1", "1", "--theta", "0.5", "--r", "2")

# the verify command runs a named self-check suite and exits 0/1
out = run("verify", "--suite", "q-equal", "--seed", "3")
print("verify exit code:", out.returncode)
print("passed:", json.loads(out.stdout)["passed"])
