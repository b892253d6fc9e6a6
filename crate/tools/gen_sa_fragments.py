#!/usr/bin/env python3
"""Regenerate crates/core/data/sa_fragments.tsv.gz, the fragment-score table of
the synthetic accessibility score (Ertl & Schuffenhauer, J. Cheminf. 2009).

Each line is `score<TAB>key,key,...`; keys are the 32-bit identifiers of
radius-0..2 circular atom environments (connectivity invariants with ring
membership, bond types, duplicate environments removed), the same keys the
score's reference implementation derives from the PubChem fragment census.
Requires RDKit (for the shipped census pickle).
"""
import gzip
import os
import pickle

from rdkit import RDConfig

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "crates", "core", "data", "sa_fragments.tsv.gz")

def main():
    src = os.path.join(RDConfig.RDContribDir, "SA_Score", "fpscores.pkl.gz")
    data = pickle.load(gzip.open(src))
    lines = []
    for row in data:
        score = float(row[0])
        keys = sorted(int(k) for k in row[1:])
        lines.append(f"{score:.4f}\t" + ",".join(str(k) for k in keys))
    with gzip.GzipFile(OUT, "wb", compresslevel=9, mtime=0) as f:
        f.write(("# score\tcomma-separated environment keys\n" + "\n".join(lines) + "\n").encode())
    print(len(lines), sum(len(r) - 1 for r in data))

if __name__ == "__main__":
    main()
