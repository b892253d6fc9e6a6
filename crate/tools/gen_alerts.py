#!/usr/bin/env python3
"""Regenerate the structural-alert pattern files under crates/core/data.

brenk.smarts and pains.smarts are dumped from the reference toolkit's
filter catalogs. qed_alerts.smarts holds the structural alerts used by the
QED ALERTS property (Bickerton et al., Nat. Chem. 2012).

File format: label<TAB>pattern[<TAB>pattern...]. An entry fires when any of
its patterns occurs. Entries written with recursive SMARTS built only from
alternatives of simple environments are rewritten here as several plain
patterns; everything else is written verbatim and patterns outside the
supported SMARTS subset are skipped (and counted) at load time.

Requires RDKit.
"""
import os

from rdkit import Chem
from rdkit.Chem import FilterCatalog as F
from rdkit.Chem import QED

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "crates", "core", "data")

ALKYL_ALKENE_ENDS = [("[CH2]", "[CH2]"), ("[CX4][CH]", "[CH][CX4]"), ("[CX4]C([CX4])", "C([CX4])[CX4]")]
ISOLATED_ALKENE = [f"{l}={r}" for l, _ in ALKYL_ALKENE_ENDS for _, r in ALKYL_ALKENE_ENDS]

def alkyne(tail):
    return [f"[CH]#C{tail}", f"CC#C{tail}"]

# Rewrites keyed by the RDKit SMARTS text (QED list) or by filter-catalog label.
QED_REWRITES = {
    "[$([CH]),$(CC)]#CC(=O)[#6]": alkyne("C(=O)[#6]"),
    "[$([CH]),$(CC)]#CC(=O)O[#6]": alkyne("C(=O)O[#6]"),
    "[$([CH]),$(CC)]#CS(=O)(=O)[#6]": alkyne("S(=O)(=O)[#6]"),
    "[$([CH2]),$([CH][CX4]),$(C([CX4])[CX4])]=[$([CH2]),$([CH][CX4]),$(C([CX4])[CX4])]": ISOLATED_ALKENE,
    "[$([N+R]),$([n+R]),$([N+]=C)][O-]": ["[N+;R][O-]", "[n+;R][O-]", "C=[N+][O-]"],
    "[cR2]1[cR2][cR2]([Nv3X3,Nv4X4])[cR2][cR2][cR2]1[cR2]2[cR2][cR2][cR2]([Nv3X3,Nv4X4])[cR2][cR2]2":
        ["[cR2]1[cR2][cR2]([N&X3&+0,N&X4&+1])[cR2][cR2][cR2]1[cR2]2[cR2][cR2][cR2]([N&X3&+0,N&X4&+1])[cR2][cR2]2"],
}
BRENK_REWRITES = {
    "isolated_alkene": ISOLATED_ALKENE,
    "Michael_acceptor_2": alkyne("C(=O)[C,c]"),
    "Michael_acceptor_3": alkyne("S(=O)(=O)[C,c]"),
    "Michael_acceptor_5": alkyne("C(=O)O[C,c]"),
    "benzidine": [
        "[cR2]1[cR2][cR2]([N&X3&+0,N&X4&+1])[cR2][cR2][cR2]1[cR2]2[cR2][cR2][cR2]([N&X3&+0,N&X4&+1])[cR2][cR2]2"
    ],
}

def dump_catalog(cat):
    params = F.FilterCatalogParams()
    params.AddCatalog(cat)
    catalog = F.FilterCatalog(params)
    out = []
    for i in range(catalog.GetNumEntries()):
        entry = catalog.GetEntryWithIdx(i)
        blob = entry.Serialize()
        desc = entry.GetDescription()
        # The serialized matcher stores the query molecule as a length-prefixed pickle.
        key = (" %d %s " % (len(desc), desc)).encode()
        j = blob.index(key) + len(key)
        k = blob.index(b" ", j)
        n = int(blob[j:k])
        query = Chem.Mol(blob[k + 1 : k + 1 + n])
        out.append((desc, Chem.MolToSmarts(query)))
    return out

def write(name, header, entries):
    with open(os.path.join(DATA, name), "w") as f:
        for line in header:
            f.write(f"# {line}\n")
        for label, patterns in entries:
            f.write(label + "\t" + "\t".join(patterns) + "\n")

def main():
    brenk = []
    for label, smarts in dump_catalog(F.FilterCatalogParams.FilterCatalogs.BRENK):
        alt = BRENK_REWRITES.get(label)
        brenk.append((label, alt if alt else [smarts]))
    write("brenk.smarts", [
        "Brenk et al., ChemMedChem 2008, 3, 435: unwanted-fragment filters.",
        "label<TAB>pattern[<TAB>pattern...]; an entry fires when any pattern occurs.",
    ], brenk)

    pains = dump_catalog(F.FilterCatalogParams.FilterCatalogs.PAINS)
    write("pains.smarts", [
        "Baell & Holloway, J. Med. Chem. 2010, 53, 2719: PAINS filters A, B and C.",
        "label<TAB>pattern; entries using recursive SMARTS or valence primitives are",
        "outside the supported subset and are skipped at load time.",
    ], [(label, [smarts]) for label, smarts in pains])

    qed = []
    for i, smarts in enumerate(QED.StructuralAlertSmarts):
        qed.append((f"qed_alert_{i + 1:03d}", QED_REWRITES.get(smarts, [smarts])))
    write("qed_alerts.smarts", [
        "Structural alerts of the QED ALERTS property (Bickerton et al., Nat. Chem. 2012, 4, 90).",
        "label<TAB>pattern[<TAB>pattern...]; an entry fires when any pattern occurs.",
    ], qed)
    print(len(brenk), len(pains), len(qed))

if __name__ == "__main__":
    main()
