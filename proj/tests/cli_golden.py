#!/usr/bin/env python3
"""Golden-file tests for the zxwring CLI.

Runs each verb against checked-in inputs and byte-compares stdout with the
files under golden/expected/. Commands run with the golden directory as cwd
so no absolute paths leak into the recorded bytes.

    cli_golden.py BIN GOLDEN_DIR           compare mode (used by ctest)
    cli_golden.py BIN GOLDEN_DIR --regen   rewrite the expected files
"""

import argparse
import subprocess
import sys
import tempfile
from pathlib import Path

# (name, argv) pairs; expected stdout lives at expected/<name>.
CASES = [
    ("eval_cnot.txt", ["eval", "inputs/cnot.json"]),
    ("eval_cnot.json", ["eval", "inputs/cnot.json", "--json"]),
    ("ctrl_x.txt", ["ctrl", "inputs/x_gate.json", "--name", "X"]),
    ("ctrl_x.json", ["ctrl", "inputs/x_gate.json", "--name", "X", "--json"]),
    ("toffoli.txt", ["ctrl", "inputs/x_gate.json", "--name", "X", "--controls", "2"]),
    ("ring_mul.txt", ["ring-op", "mul", "inputs/poly_a.json", "inputs/poly_b.json"]),
    ("ring_add.txt", ["ring-op", "add", "inputs/poly_a.json", "inputs/poly_b.json"]),
    ("ring_mul.json", ["ring-op", "mul", "inputs/poly_a.json", "inputs/poly_b.json", "--json"]),
    ("poly2diag_a.json", ["poly2diag", "x1 - 1"]),
    ("poly2diag_big.json", ["poly2diag", "2 x1 x3 - 0.5 x2 + 1", "--vars", "3"]),
    ("diag2poly_b.txt", ["diag2poly", "inputs/poly_b.json"]),
    ("diag2poly_chain.json", ["diag2poly", "inputs/chain.json", "--json"]),
    ("normalize_chain.json", ["normalize", "inputs/chain.json"]),
    ("normalize_chain_meta.json", ["normalize", "inputs/chain.json", "--json"]),
    ("check_rules.txt", ["check-rules", "--trials", "5", "--seed", "7"]),
    ("check_rules.json", ["check-rules", "--trials", "3", "--seed", "11", "--json"]),
    ("factor_text.txt", ["factor", "(x1 - 1)(2 x2 + 3)"]),
    ("factor_text.json", ["factor", "(x1 - 1)(2 x2 + 3)", "--json"]),
    ("factor_matpoly.txt", ["factor", "inputs/matpoly.json"]),
    ("factor_matpoly.json", ["factor", "inputs/matpoly.json", "--json"]),
    ("dot_cnot.dot", ["dot", "inputs/cnot.json"]),
    ("dot_poly_a.dot", ["dot", "inputs/poly_a.json"]),
]

# (argv, expected exit code) for the error contract: 1 domain, 2 usage.
EXIT_CASES = [
    (["eval", "inputs/no_such_file.json"], 1),
    (["eval", "inputs/x_gate.json"], 1),  # a bare matrix is not a diagram
    (["normalize", "inputs/cnot.json"], 1),  # not an arithmetic diagram
    (["ring-op", "div", "inputs/poly_a.json", "inputs/poly_b.json"], 2),
    (["no-such-verb"], 2),
    (["eval"], 2),
]


def run(binary, argv, cwd):
    return subprocess.run([binary] + argv, cwd=cwd, capture_output=True, timeout=120)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("binary")
    ap.add_argument("golden_dir")
    ap.add_argument("--regen", action="store_true")
    args = ap.parse_args()

    binary = str(Path(args.binary).resolve())
    golden = Path(args.golden_dir).resolve()
    expected_dir = golden / "expected"
    failures = []

    for name, argv in CASES:
        r = run(binary, argv, golden)
        if r.returncode != 0:
            failures.append(f"{name}: exit {r.returncode}: {r.stderr.decode(errors='replace').strip()}")
            continue
        exp_file = expected_dir / name
        if args.regen:
            exp_file.write_bytes(r.stdout)
            print(f"wrote {name} ({len(r.stdout)} bytes)")
            continue
        want = exp_file.read_bytes()
        if r.stdout != want:
            got_lines = r.stdout.decode(errors="replace").splitlines()
            want_lines = want.decode(errors="replace").splitlines()
            detail = "output length differs"
            for i, (g, w) in enumerate(zip(got_lines, want_lines)):
                if g != w:
                    detail = f"line {i + 1}: got {g!r}, want {w!r}"
                    break
            failures.append(f"{name}: {detail}")
        else:
            print(f"ok {name}")

    # Determinism: the seeded report must be byte-stable across runs.
    a = run(binary, ["check-rules", "--trials", "4", "--seed", "99"], golden)
    b = run(binary, ["check-rules", "--trials", "4", "--seed", "99"], golden)
    if a.stdout != b.stdout or a.returncode != 0:
        failures.append("check-rules: not byte-stable under a fixed seed")
    else:
        print("ok seed stability")

    # Idempotence: normalize of its own output is byte-identical.
    with tempfile.TemporaryDirectory() as td:
        first = Path(td) / "first.json"
        r1 = run(binary, ["normalize", "inputs/chain.json", "--out", str(first)], golden)
        r2 = run(binary, ["normalize", str(first)], golden)
        if r1.returncode != 0 or r2.returncode != 0 or r2.stdout != first.read_bytes():
            failures.append("normalize: not idempotent byte-for-byte")
        else:
            print("ok normalize idempotence")

    for argv, code in EXIT_CASES:
        r = run(binary, argv, golden)
        if r.returncode != code:
            failures.append(f"exit code for {' '.join(argv)}: got {r.returncode}, want {code}")
        else:
            print(f"ok exit {code}: {' '.join(argv)}")

    if failures:
        print(f"\n{len(failures)} golden failure(s):", file=sys.stderr)
        for f in failures:
            print(f"  {f}", file=sys.stderr)
        return 1
    print("all golden checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
