"""Write the data behind the standard figures into ./figures_out.

Two sample paths (p = 991 and p = 997), one model path per sign class and the
sup-norm samples for a histogram comparison. Plotting is left to the reader's
tool of choice; every file is plain CSV.
"""

from pathlib import Path

from legendre_paths.cli import main

OUT = Path("figures_out")


def run(*argv):
    code = main([str(a) for a in argv])
    if code:
        raise SystemExit(code)


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for p in (991, 997):
        run("path", "--p", p, "--out", OUT / f"path_{p}.csv")
    for sign, name in ((1, "plus"), (-1, "minus")):
        run("sample", "--seed", 1, "--n-terms", 10**4, "--grid", 10**4, "--fix-sign", sign,
            "--out", OUT / f"model_{name}.csv")
    run("dist", "supnorm", "--q", 10**4, "--out", OUT / "supnorm_primes.csv")
    run("dist", "supnorm", "--source", "model", "--n-terms", 2000, "--count", 2000, "--seed", 2024,
        "--out", OUT / "supnorm_model.csv")
    print(f"wrote {len(list(OUT.glob('*.csv')))} CSV files to {OUT}/")
