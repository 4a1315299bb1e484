"""Write a synthetic table in the UCI Air Quality file layout.

Same header, ``;`` separators, ``,`` decimals, ``-200`` missing codes, two
empty trailing columns, and blank ``;;;`` rows at the end.  Sensor responses
drift slowly over time so a temporal split sees a genuine shift.  Used as a
stand-in when the real file is not available.

    python scripts/make_uci_like.py out.csv --rows 3000 --seed 1
"""

import argparse
from datetime import datetime, timedelta

import numpy as np

HEADER = ["Date", "Time", "CO(GT)", "PT08.S1(CO)", "NMHC(GT)", "C6H6(GT)", "PT08.S2(NMHC)",
          "NOx(GT)", "PT08.S3(NOx)", "NO2(GT)", "PT08.S4(NO2)", "PT08.S5(O3)", "T", "RH", "AH"]


def _num(v, decimals):
    if v == -200:
        return "-200"
    s = f"{v:.{decimals}f}"
    return s.replace(".", ",") if decimals else s


def make_rows(n=3000, seed=1, missing_frac=0.03):
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    frac = t / n
    T = 12 + 10 * frac + 6 * np.sin(2 * np.pi * (t - 9) / 24) + np.cumsum(rng.normal(0, 0.25, n)) * 0.3
    RH = np.clip(55 - 1.6 * (T - 18) + rng.normal(0, 6, n), 8, 95)
    es = 6.112 * np.exp(17.67 * T / (T + 243.5))
    AH = es * RH * 2.1674 / (273.15 + T)
    traffic = np.clip(1.5 + np.sin(2 * np.pi * (t - 7) / 24) + rng.normal(0, 0.5, n), 0.1, None)
    co = traffic * 1.2 + rng.normal(0, 0.2, n)
    s1 = 900 + 180 * traffic + 6 * T + 40 * frac * (T - 15) + rng.normal(0, 25, n)
    s2 = 800 + 220 * traffic + 9 * T - 3 * RH + rng.normal(0, 30, n)
    s3 = 1100 - 200 * traffic - 4 * RH + 8 * T * (1 + 0.8 * frac) + rng.normal(0, 30, n)
    s4 = 1200 + 90 * traffic + 22 * T + 4 * RH - 60 * frac * (T - 15) / 5 + rng.normal(0, 25, n)
    s5 = 900 + 250 * traffic + rng.normal(0, 50, n)
    nmhc = 150 * traffic + rng.normal(0, 10, n)
    c6h6 = 8 * traffic + rng.normal(0, 1, n)
    nox = 150 * traffic + rng.normal(0, 15, n)
    no2 = 90 + 20 * traffic + rng.normal(0, 5, n)
    cols = [(co, 1), (s1, 0), (nmhc, 0), (c6h6, 1), (s2, 0), (nox, 0), (s3, 0), (no2, 0), (s4, 0),
            (s5, 0), (T, 1), (RH, 1), (AH, 4)]
    start = datetime(2004, 3, 10, 18)
    rows = []
    for i in range(n):
        stamp = start + timedelta(hours=i)
        cells = [stamp.strftime("%d/%m/%Y"), stamp.strftime("%H.%M.%S")]
        for j, (col, dec) in enumerate(cols):
            v = round(float(col[i]), dec)
            if rng.random() < missing_frac or (j == 2 and i > n // 3):
                v = -200
            cells.append(_num(v, dec))
        rows.append(";".join(cells) + ";;")
    return rows


def write_uci_like(path, n=3000, seed=1, trailing_blank=5):
    lines = [";".join(HEADER) + ";;"] + make_rows(n, seed)
    lines += [";" * (len(HEADER) + 1)] * trailing_blank
    with open(path, "w", newline="") as fh:
        fh.write("\r\n".join(lines) + "\r\n")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out")
    ap.add_argument("--rows", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()
    write_uci_like(a.out, a.rows, a.seed)
