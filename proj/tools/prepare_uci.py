#!/usr/bin/env python3
"""Convert the UCI Abalone file (abalone.data) into a labeled CSV.

The categorical sex column (M, F, I) is one-hot encoded; the ring count is
the target column `y`.

    python3 tools/prepare_uci.py abalone.data abalone.csv
"""

import argparse
import csv
import sys

NUMERIC = ["length", "diameter", "height", "whole_weight", "shucked_weight", "viscera_weight", "shell_weight"]
SEXES = ["M", "F", "I"]


def convert(src, dst):
    reader = csv.reader(src)
    writer = csv.writer(dst, lineterminator="\n")
    writer.writerow([f"sex_{s}" for s in SEXES] + NUMERIC + ["y"])
    rows = 0
    for lineno, fields in enumerate(reader, start=1):
        if not fields:
            continue
        if len(fields) != 9:
            raise ValueError(f"line {lineno}: expected 9 fields, got {len(fields)}")
        sex = fields[0].strip()
        if sex not in SEXES:
            raise ValueError(f"line {lineno}: unknown sex code {sex!r}")
        numbers = [float(v) for v in fields[1:]]
        writer.writerow([1 if sex == s else 0 for s in SEXES] + [repr(v) for v in numbers[:-1]] + [repr(numbers[-1])])
        rows += 1
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("input", help="abalone.data")
    parser.add_argument("output", help="labeled CSV to write")
    args = parser.parse_args()
    with open(args.input, newline="") as src, open(args.output, "w", newline="") as dst:
        rows = convert(src, dst)
    print(f"wrote {rows} rows to {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()
