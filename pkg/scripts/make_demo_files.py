"""Write the state and weight-scheme files used by the CLI examples in the README."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from mpconc.example import PSI, rho_example
from mpconc.partitions import theorem1_scheme
from mpconc.qstate import PureState, save_state


def main(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    save_state(PureState((2, 2, 2, 2), PSI), outdir / "bell_pair_product.json")
    save_state(rho_example(0.5), outdir / "rho_half.json")
    (outdir / "theorem1.json").write_text(json.dumps(theorem1_scheme().to_json(), indent=2) + "\n")
    for name in sorted(p.name for p in outdir.iterdir()):
        print(outdir / name)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("demo"))
    main(ap.parse_args().outdir)
