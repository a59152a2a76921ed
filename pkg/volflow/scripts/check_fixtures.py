# volflow/scripts/check_fixtures.py
from pathlib import Path

from volflow.reports import jets_from_file, load_jet_file, load_path_spec
from volflow.services.variation import volume_rate, zeta_path_rate

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def main():
    print("=== Fixtures — volflow ===")
    for path in sorted(FIXTURES.glob("*.json")):
        if path.name.startswith("bad_"):
            continue
        if path.name.endswith("_path.json"):
            spec = load_path_spec(path)
            print(f"{path.name}: caminho {spec.kind}, u0={spec.u0}, {spec.samples} amostras")
            continue
        jets = jets_from_file(load_jet_file(path))
        rate = volume_rate(jets)
        print(f"{path.name}: n={jets[0].n}, cúspides={len(jets)}, taxa={rate:.12g}, via ζ={zeta_path_rate(jets):.12g}")


if __name__ == "__main__":
    main()
