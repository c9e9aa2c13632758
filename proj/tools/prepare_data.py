#!/usr/bin/env python3
# Copyright 2026 The zok Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the benchmark CSV files under data/.

bre: Wisconsin breast cancer (original), 699 x 9, taken from the MASS
     `biopsy` table shipped in the `rdatasets` wheel. The 16 missing values
     of the bare-nuclei column are filled with the column median.
hea: Statlog heart, 270 x 13, taken from the `keel-ds` wheel.
mon: MONK-3 full instance space (432 rows, 6 attributes), generated from
     the target rule (a5 = 3 and a4 = 1) or (a5 != 4 and a2 != 3).

Usage: prepare_data.py [outdir] (needs network access to a PyPI mirror).
"""

import io
import itertools
import pathlib
import subprocess
import sys
import tempfile
import zipfile

import pandas as pd


def _wheel(name, workdir):
    subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps",
                    name, "-d", workdir], check=True, capture_output=True)
    return next(pathlib.Path(workdir).glob(name.replace("-", "_") + "*.whl"))


def write_bre(out, workdir):
    z = zipfile.ZipFile(_wheel("rdatasets", workdir))
    raw = z.read("rdatasets/_data/MASS/biopsy.pkl.compress")
    df = pd.read_pickle(io.BytesIO(raw), compression="xz")
    x = df[[f"V{i}" for i in range(1, 10)]].copy()
    x["V6"] = x["V6"].fillna(x["V6"].median())
    y = df["class"].map({"malignant": 1, "benign": -1})
    _write(out / "bre.csv", x.values, y.values)


def write_hea(out, workdir):
    z = zipfile.ZipFile(_wheel("keel-ds", workdir))
    text = z.read("keel_ds/data/balanced/raw/heart.dat").decode()
    rows = [[float(v) for v in line.split(",")]
            for line in text.splitlines() if line.strip()]
    x = [r[:-1] for r in rows]
    y = [1 if r[-1] == 2 else -1 for r in rows]
    _write(out / "hea.csv", x, y)


def write_mon(out):
    x, y = [], []
    for a in itertools.product((1, 2, 3), (1, 2, 3), (1, 2), (1, 2, 3),
                               (1, 2, 3, 4), (1, 2)):
        a1, a2, a3, a4, a5, a6 = a
        positive = (a5 == 3 and a4 == 1) or (a5 != 4 and a2 != 3)
        x.append(a)
        y.append(1 if positive else -1)
    _write(out / "mon.csv", x, y)


def _write(path, x, y):
    with open(path, "w") as f:
        for row, label in zip(x, y):
            f.write(",".join(f"{v:g}" for v in row) + f",{int(label)}\n")
    print(f"wrote {path} ({len(y)} rows)")


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as workdir:
        write_bre(out, workdir)
        write_hea(out, workdir)
    write_mon(out)


if __name__ == "__main__":
    main()
