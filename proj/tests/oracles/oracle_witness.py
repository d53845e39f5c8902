"""Partial integrals of the log-decay witness (w = 1, alpha = 1/2) by raw
quadrature in t, split at decades, against the gallery report."""

import json
import os
import subprocess
import tempfile

import mpmath as mp

from oracle_common import close, finish, truth

ALPHA = mp.mpf("0.5")
E = mp.e


def f_star(t):
    return 1 / E if t <= E else 1 / (t * mp.log(t) ** (1 / ALPHA))


def f_starstar(t):
    # (1/t) int_0^t f*, using d/dt(-1/log t) = 1/(t log^2 t) past e.
    return (1 + (1 - 1 / mp.log(t))) / t if t > E else 1 / E


def cuts(T):
    out = [E]
    k = 1
    while mp.mpf(10) ** k < T:
        out.append(mp.mpf(10) ** k)
        k += 1
    return out + [T]


def lambda_partial(T):
    return 1 + mp.quad(f_star, cuts(T))


def gamma_partial(T):
    return mp.quad(lambda t: f_star(t) ** ALPHA * f_starstar(t) ** (1 - ALPHA), cuts(T))


with tempfile.NamedTemporaryFile(suffix=".json", delete=False) as tmp:
    path = tmp.name
subprocess.run([os.environ["LORENTZ_LAB"], "gallery", "remark-2.19", "--out", path], check=True,
               capture_output=True)
with open(path) as fh:
    report = json.load(fh)
os.unlink(path)

details = report["result"]["scenarios"][0]["details"]["witness"]
for row in details["partials"]:
    T = mp.mpf(row["T"])
    close(f"Lambda^1 partial at T={row['T']:.0e}", row["lambda1_partial"], lambda_partial(T), rel=1e-9)
    close(f"Gamma^1_alpha partial at T={row['T']:.0e}", row["gamma1_alpha_partial"], gamma_partial(T), rel=1e-9)
close("Lambda^1 norm of the witness", details["lambda1_norm"]["value"], 2, rel=1e-12)
truth("Gamma^1_alpha partials increase", details["gamma_monotone"])

finish()
