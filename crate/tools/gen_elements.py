"""Dump element weights, default valences and isotope masses from RDKit's periodic table."""
import sys
from rdkit import Chem

ORGANIC_VALENCES = {
    "B": [3], "C": [4], "N": [3, 5], "O": [2], "P": [3, 5], "S": [2, 4, 6],
    "F": [1], "Cl": [1], "Br": [1], "I": [1],
}

def main(out_dir):
    pt = Chem.GetPeriodicTable()
    with open(f"{out_dir}/elements.tsv", "w") as f:
        f.write("# symbol\tatomic_number\tstandard_weight\tvalences\n")
        for z in range(1, 104):
            sym = pt.GetElementSymbol(z)
            if sym in ORGANIC_VALENCES:
                vals = ORGANIC_VALENCES[sym]
            else:
                vals = [v for v in pt.GetValenceList(z) if v >= 0]
            f.write(f"{sym}\t{z}\t{pt.GetAtomicWeight(z)}\t{','.join(map(str, vals))}\n")
    with open(f"{out_dir}/isotopes.tsv", "w") as f:
        f.write("# symbol\tmass_number\tmass\n")
        for z in range(1, 57):
            sym = pt.GetElementSymbol(z)
            common = pt.GetMostCommonIsotope(z)
            for a in range(max(z, common - 6), common + 7):
                m = pt.GetMassForIsotope(z, a)
                if m > 0:
                    f.write(f"{sym}\t{a}\t{m}\n")

if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/data")
