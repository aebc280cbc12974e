"""CLI contract: outputs, golden files and exit codes."""

import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

BIN = None
GOLDEN = Path(__file__).parent / "golden"


def cli(*args, env=None):
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=env)


class Run(unittest.TestCase):
    def test_text(self):
        r = cli("run", 7, "--variant", "ca3", "--format", "text")
        self.assertEqual(r.returncode, 0)
        self.assertEqual(r.stdout, "7 11 17 13 5 1\n")

    def test_one(self):
        r = cli("run", 1, "--variant", "ca2")
        self.assertEqual(r.returncode, 0)
        self.assertEqual(r.stdout, "1\n")

    def test_jsonl(self):
        r = cli("run", 27, "--variant", "ca1", "--format", "jsonl")
        self.assertEqual(r.returncode, 0)
        rec = json.loads(r.stdout)
        self.assertEqual(
            sorted(rec),
            ["ca_steps_to_one", "input", "iterates", "reached_one", "ticks_used", "variant"],
        )
        self.assertEqual(rec["iterates"][:4], [27, 41, 62, 31])
        self.assertEqual(rec["iterates"][-1], 1)
        self.assertEqual(rec["ca_steps_to_one"], len(rec["iterates"]) - 1)

    def test_undetermined(self):
        r = cli("run", 27, "--variant", "ca3", "--max-rows", "5")
        self.assertEqual(r.returncode, 2)

    def test_bad_flags(self):
        self.assertEqual(cli("run", 7, "--variant", "ca9").returncode, 1)
        self.assertEqual(cli("run", "x7").returncode, 1)
        self.assertEqual(cli().returncode, 1)
        self.assertEqual(cli("run", 7, "--max-rows", "0").returncode, 1)


class Verify(unittest.TestCase):
    def test_ranges(self):
        r = cli("verify", "--from", 2, "--to", 300, "--variant", "all")
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        self.assertEqual(r.stdout.count(" 0 mismatches"), 3)
        self.assertEqual(cli("verify", "--from", 7, "--to", 7, "--variant", "ca1").returncode, 0)
        self.assertEqual(cli("verify", "--from", 1, "--to", 1, "--variant", "ca3").returncode, 0)
        self.assertEqual(cli("verify", "--from", 9, "--to", 3).returncode, 1)


class Efficiency(unittest.TestCase):
    def test_single(self):
        r = cli("efficiency", "--from", 2, "--to", 2, "--variant", "ca1")
        self.assertEqual(r.returncode, 0)
        lines = r.stdout.splitlines()
        self.assertEqual(lines[0], "n,variant,ca_steps,tst,ratio")
        self.assertEqual(lines[1], "2,ca1,1,1,1.000000")

    def test_mean_matches_rows(self):
        r = cli("efficiency", "--from", 2, "--to", 100, "--variant", "ca3")
        rows = [l.split(",") for l in r.stdout.splitlines()[1:] if not l.startswith("#")]
        self.assertEqual(len(rows), 99)
        from fractions import Fraction

        mean = sum(Fraction(int(c[2]), int(c[3])) for c in rows) / len(rows)
        summary = [l for l in r.stdout.splitlines() if l.startswith("# mean")][0]
        self.assertEqual(summary.split()[-1], f"{mean.numerator}/{mean.denominator}")

    def test_bad_range(self):
        self.assertEqual(cli("efficiency", "--from", 1, "--to", 5).returncode, 1)


class Batch(unittest.TestCase):
    def setUp(self):
        self.dir = tempfile.TemporaryDirectory()
        self.inputs = Path(self.dir.name) / "inputs.txt"
        self.inputs.write_text("183\n120767\n53132499\n")

    def tearDown(self):
        self.dir.cleanup()

    def test_shared_matches_stacked(self):
        shared = cli("batch", "--inputs", self.inputs, "--mode", "shared", "--variant", "ca3")
        stacked = cli("batch", "--inputs", self.inputs, "--mode", "stacked", "--variant", "ca3")
        self.assertEqual(shared.returncode, 0, shared.stderr)
        self.assertEqual(stacked.returncode, 0)
        its = lambda out: [json.loads(l)["iterates"] for l in out.splitlines()]
        self.assertEqual(its(shared.stdout), its(stacked.stdout))
        self.assertEqual(len(its(stacked.stdout)), 3)

    def test_threads_do_not_change_output(self):
        env = dict(os.environ, COLLATZ_CA_THREADS="1")
        one = cli("batch", "--inputs", self.inputs, env=env)
        env["COLLATZ_CA_THREADS"] = "3"
        three = cli("batch", "--inputs", self.inputs, env=env)
        self.assertEqual(one.stdout, three.stdout)

    def test_collision(self):
        self.inputs.write_text("5\n7\n")
        r = cli("batch", "--inputs", self.inputs, "--mode", "shared", "--spacing", "0")
        self.assertEqual(r.returncode, 4)
        self.assertIn("collision", r.stderr)

    def test_empty_and_missing(self):
        self.inputs.write_text("")
        r = cli("batch", "--inputs", self.inputs)
        self.assertEqual((r.returncode, r.stdout), (0, ""))
        self.assertEqual(cli("batch", "--inputs", "/nonexistent/x").returncode, 1)


class Rules(unittest.TestCase):
    def test_sections(self):
        r = cli("rules", "--variant", "ca3")
        self.assertEqual(r.returncode, 0)
        self.assertIn("# section inner entries 16 laws 16", r.stdout)
        r = cli("rules", "--variant", "ca2")
        self.assertIn("# section even/inner entries 32 laws 32", r.stdout)
        self.assertIn("# section odd/inner/odd entries 48 laws 48", r.stdout)
        r = cli("rules", "--variant", "ca1")
        self.assertIn("# section inner entries 18 laws 18", r.stdout)

    def test_golden_and_write_failure(self):
        with tempfile.TemporaryDirectory() as d:
            out = Path(d) / "ca3.rules"
            self.assertEqual(cli("rules", "--variant", "ca3", "--out", out).returncode, 0)
            self.assertEqual(out.read_text(), (GOLDEN / "rules_ca3.txt").read_text())
        self.assertEqual(cli("rules", "--variant", "ca3", "--out", "/nonexistent/x").returncode, 1)


class Render(unittest.TestCase):
    def test_golden(self):
        for n, variant in [(7, "ca3"), (7, "ca1"), (7, "ca2"), (1, "ca3")]:
            r = cli("render", n, "--variant", variant)
            self.assertEqual(r.returncode, 0)
            self.assertEqual(r.stdout, (GOLDEN / f"render_{n}_{variant}.txt").read_text())

    def test_row_one_of_seven(self):
        r = cli("render", 7, "--variant", "ca3")
        rows = r.stdout.splitlines()
        self.assertTrue(rows[0].startswith("ca3 7 "))
        self.assertEqual(rows[2].replace("E", "").replace(" ", ""), "1011")

    def test_pgm(self):
        with tempfile.TemporaryDirectory() as d:
            out = Path(d) / "g.pgm"
            self.assertEqual(cli("render", 7, "--variant", "ca1", "--out", out).returncode, 0)
            self.assertEqual(out.read_text(), (GOLDEN / "render_7_ca1.pgm").read_text())


if __name__ == "__main__":
    BIN = sys.argv.pop(1)
    unittest.main()
