"""Drive the command line tool end to end, in process.

A gallery command emits a system file; check commands consume it and
print canonical-JSON reports with stable digests, so identical inputs
give byte-identical output (the wall-clock field aside) — every report
is diffable and cacheable.
"""

import tempfile
from pathlib import Path

from dynlab.cli import main


def run(*argv):
    print("$ dynlab", " ".join(argv))
    code = main(list(argv))
    print(f"(exit {code})\n")


def main_demo():
    with tempfile.TemporaryDirectory() as tmp:
        shift_file = Path(tmp) / "shift.json"
        run("gallery", "xpq", "--p", "3", "--q", "2",
            "--emit", str(shift_file))

        run("check", "shadowing", "--system", str(shift_file),
            "--window", "1", "--epsilon", "1/4", "--delta", "1/8")

        csv_file = Path(tmp) / "table.csv"
        run("modulus", "--system", str(shift_file), "--window", "1",
            "--prop", "shadowing", "--csv", str(csv_file))
        print("CSV emitted next to the JSON report:")
        print(csv_file.read_text())


if __name__ == "__main__":
    main_demo()
