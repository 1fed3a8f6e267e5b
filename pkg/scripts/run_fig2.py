"""Direct-link probability sweep; writes results/fig2.csv."""
import pathlib
import sys

from relaysched import cli

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    (ROOT / "results").mkdir(exist_ok=True)
    sys.exit(cli.main(["fig2", "--config", str(ROOT / "configs" / "fig2.cfg"),
                       "--out", str(ROOT / "results" / "fig2.csv"), *sys.argv[1:]]))
