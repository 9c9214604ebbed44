#!/usr/bin/env python3
"""Rebuild data/animals.csv.

Body weight (kg) and brain weight (g) of 28 species, from Rousseeuw, P. J.
and Leroy, A. M. (1987), Robust Regression and Outlier Detection, Wiley,
p. 57. The table is distributed with the R package MASS as `Animals`; this
script takes the copy bundled in the `pydataset` source distribution so it
needs only pip.

    python3 scripts/fetch_animals.py [--out data/animals.csv]
"""

import argparse
import csv
import io
import pathlib
import subprocess
import sys
import tarfile
import tempfile

MEMBER = "MASS/Animals.csv"


def find_resources(workdir: pathlib.Path) -> pathlib.Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "pydataset==0.2.0",
         "--no-deps", "--no-binary", ":all:", "-d", str(workdir)],
        check=True,
    )
    sdist = next(workdir.glob("pydataset-*.tar.gz"))
    with tarfile.open(sdist) as outer:
        outer.extractall(workdir, filter="data")
    return next(workdir.glob("pydataset-*/pydataset/resources.tar.gz"))


def read_table(resources: pathlib.Path) -> list[tuple[str, str]]:
    with tarfile.open(resources) as inner:
        member = next(m for m in inner.getmembers() if m.name.endswith(MEMBER))
        text = inner.extractfile(member).read().decode("utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0][1:] != ["body", "brain"]:
        raise SystemExit(f"unexpected header {rows[0]}")
    return [(body, brain) for _, body, brain in rows[1:]]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    root = pathlib.Path(__file__).resolve().parent.parent
    parser.add_argument("--out", type=pathlib.Path, default=root / "data" / "animals.csv")
    args = parser.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        rows = read_table(find_resources(pathlib.Path(tmp)))
    if len(rows) != 28:
        raise SystemExit(f"expected 28 species, found {len(rows)}")
    with open(args.out, "w", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["body_kg", "brain_g"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
