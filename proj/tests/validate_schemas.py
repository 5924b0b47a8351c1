"""Runs each CLI command and validates its JSON output against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, root = sys.argv[1], pathlib.Path(sys.argv[2])
schemas = root / "schemas"


def load(name):
    return json.loads((schemas / f"{name}.schema.json").read_text())


def check(name, path):
    jsonschema.validate(json.loads(pathlib.Path(path).read_text()), load(name))
    print(f"ok {name}: {path}")


with tempfile.TemporaryDirectory() as tmp:
    t = pathlib.Path(tmp)
    runs = [
        ("model", ["gen", "--seed", "3", "--depth", "3", "--dimension", "2"], "gen.json"),
        ("verify_report", ["verify", "--models-seed-range", "1..2"], "verify.json"),
        ("crosscheck_report", ["crosscheck", "--models-seed-range", "1..3"], "cross.json"),
        ("nupbr_verdict", ["nupbr", "--model", str(root / "fixtures/tent.json")], "nupbr_f.json"),
        ("nupbr_verdict", ["nupbr", "--model", str(root / "fixtures/tent.json"), "--filtration", "G", "--after-tau"],
         "nupbr_g.json"),
        ("example1_report", ["example1", "--paths", "500", "--seed", "7"], "e1.json"),
        ("example2_report", ["example2", "--paths", "500", "--seed", "7"], "e2.json"),
        ("psi_report", ["psi", "--mu", "2", "--u", "0,1", "--paths", "20000"], "psi.json"),
        ("brownian_report", ["brownian", "--seed", "3", "--paths", "100", "--nested", "20"], "bm.json"),
    ]
    for name, args, out in runs:
        subprocess.run([cli, *args, "--out", str(t / out)], check=True, stdout=subprocess.DEVNULL, cwd=tmp)
        check(name, t / out)
    for fixture in (root / "fixtures").glob("*.json"):
        check("model", fixture)
