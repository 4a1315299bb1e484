"""Independent oracle for the Air Quality audit, built on pandas/sklearn/scipy.

Follows the published protocol step by step with the standard stack instead
of measaudit's own parser, QR solver, and quantile function.  The noise step
uses a seeded numpy generator (its draws differ from measaudit's streams).

    python scripts/reference_run.py AirQualityUCI.csv > oracle.json
"""

import argparse
import json
import sys

import numpy as np
import pandas as pd
from scipy.stats import norm
from sklearn.linear_model import LinearRegression
from sklearn.metrics import mean_squared_error
from sklearn.preprocessing import StandardScaler

SHARED = ["AH", "RH"]
FEATURES = {
    "A": SHARED + ["PT08.S1(CO)", "PT08.S3(NOx)"],
    "B": SHARED + ["PT08.S2(NMHC)", "PT08.S4(NO2)"],
}
TARGET = "T"


def coverage(y_true, y_pred, sigma, levels):
    out = []
    for alpha in levels:
        z = norm.ppf(1 - (1 - alpha) / 2)
        out.append(float(np.mean((y_true >= y_pred - z * sigma) & (y_true <= y_pred + z * sigma))))
    return out


def reference_run(source, train_frac=0.6, gap_frac=0.2, seed=0):
    df = pd.read_csv(source, sep=";", decimal=",")
    n_raw = len(df)
    df = df.loc[:, ~df.columns.str.contains("^Unnamed")]
    df = df.replace(-200, np.nan).dropna().reset_index(drop=True)
    n = len(df)
    train_end = int(train_frac * n)
    gap_end = int((train_frac + gap_frac) * n)
    train, test = df.iloc[:train_end], df.iloc[gap_end:]
    y_train, y_test = train[TARGET].values, test[TARGET].values

    levels = np.linspace(0.1, 0.9, 9)
    noise_levels = np.linspace(0.0, 1.0, 8)
    rng = np.random.default_rng(seed)
    out = {"n_raw": n_raw, "n_clean": n, "train_end": train_end, "gap_end": gap_end, "models": {}}
    preds = {}
    for name, cols in FEATURES.items():
        scaler = StandardScaler()
        Xtr = scaler.fit_transform(train[cols].values)
        Xte = scaler.transform(test[cols].values)
        f = LinearRegression().fit(Xtr, y_train)
        ptr, pte = f.predict(Xtr), f.predict(Xte)
        sigma = float(np.std(y_train - ptr))
        resid = f.predict(Xtr) - y_train
        grad = np.concatenate([Xtr.T @ resid, [resid.sum()]])
        curve = [mean_squared_error(y_test, f.predict(Xte + rng.normal(0, s, Xte.shape))) for s in noise_levels]
        out["models"][name] = {
            "mse_train": float(mean_squared_error(y_train, ptr)),
            "mse_test": float(mean_squared_error(y_test, pte)),
            "coverage": coverage(y_test, pte, sigma, levels),
            "sigma": sigma,
            "coef": [float(c) for c in f.coef_],
            "intercept": float(f.intercept_),
            "means": [float(v) for v in scaler.mean_],
            "scales": [float(v) for v in scaler.scale_],
            "normal_eq_grad_max": float(np.max(np.abs(grad))),
            "robustness": [float(v) for v in curve],
        }
        preds[name] = pte
    d = preds["A"] - preds["B"]
    out["disagreement"] = {
        "mean": float(np.mean(d)),
        "std": float(np.std(d)),
        "relative_mean": float(np.mean(d) / np.std(y_test)),
        "pearson_r": float(np.corrcoef(d, y_test)[0, 1]),
        "slope": float(np.polyfit(y_test, d, 1)[0]),
    }
    out["y_test"] = [float(v) for v in y_test]
    out["d"] = [float(v) for v in d]
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--full", action="store_true", help="include per-row vectors")
    a = ap.parse_args()
    res = reference_run(a.csv, seed=a.seed)
    if not a.full:
        res.pop("y_test")
        res.pop("d")
    json.dump(res, sys.stdout, indent=2)
    print()
