"""Orthogonal vs spectrum-reuse average rate sweep; writes results/fig4.csv."""
import pathlib
import sys

from relaysched import cli

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    (ROOT / "results").mkdir(exist_ok=True)
    sys.exit(cli.main(["fig4", "--config", str(ROOT / "configs" / "fig4.cfg"),
                       "--out", str(ROOT / "results" / "fig4.csv"), *sys.argv[1:]]))
