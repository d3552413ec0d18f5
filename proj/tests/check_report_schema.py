#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Run synth + analyze on a small dataset and validate report.json against the schema."""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema


def main() -> int:
    cli, schema_path, work = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    shutil.rmtree(work, ignore_errors=True)
    data, out = work / "data", work / "out"
    subprocess.run([cli, "synth", "--preset", "hourly-grid", "--spatial", "5x5", "--steps", "8760",
                    "--seed", "1", "--out-dir", str(data)], check=True, stdout=subprocess.DEVNULL)
    for horizon in ("1", "12"):
        subprocess.run([cli, "analyze", "--grid", str(data / "grid.csv"), "--series", str(data / "series.csv"),
                        "--horizon", horizon, "--out-dir", str(out)], check=True, stdout=subprocess.DEVNULL)
        report = json.loads((out / "report.json").read_text())
        jsonschema.validate(report, json.loads(schema_path.read_text()))
        print(f"horizon {horizon}: report.json valid ({report['chi']['classification']})")
    shutil.rmtree(work, ignore_errors=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
