"""Regenerate tests/golden from problems/*.jv (review the diff before committing)."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
FORMATS = {"el": ("text", "latex", "json"), "decompose": ("text", "latex", "json"),
           "verify": ("text", "json")}


def main():
    out_dir = ROOT / "tests" / "golden"
    out_dir.mkdir(exist_ok=True)
    for prob in sorted((ROOT / "problems").glob("*.jv")):
        for cmd, fmts in FORMATS.items():
            for fmt in fmts:
                res = subprocess.run([sys.executable, "-m", "jetvar.cli", cmd, str(prob), "--format", fmt],
                                     capture_output=True, check=True)
                (out_dir / f"{prob.stem}.{cmd}.{fmt}").write_bytes(res.stdout)
                print(f"{prob.stem}.{cmd}.{fmt}")
    for bad in sorted((out_dir / "errors").glob("*.jv")):
        res = subprocess.run([sys.executable, "-m", "jetvar.cli", "el", str(bad)], capture_output=True)
        bad.with_suffix(".err").write_bytes(res.stderr)
        print(bad.name, res.returncode)


if __name__ == "__main__":
    main()
