#!/usr/bin/env python3
"""Regenerate the molecule corpus and its descriptor reference values.

crates/core/data/molecules.txt: one SMILES per line (# comments), drawn from
hand-picked drugs and reagents, small molecules (<= 8 heavy atoms) and a
deterministic sample of the NCI open database subset shipped with RDKit.
Every SMILES is written in RDKit canonical aromatic form.

crates/core/tests/data/reference_values.csv: descriptor values computed by
RDKit (an independent, established toolkit) for each corpus molecule, plus
one randomized alternative spelling of the same molecule.

Requires RDKit.
"""
import csv
import os
import random
import sys

from rdkit import Chem, RDConfig, rdBase
from rdkit.Chem import Crippen, Descriptors, QED, rdMolDescriptors

sys.path.append(os.path.join(RDConfig.RDContribDir, "SA_Score"))
import sascorer  # noqa: E402

rdBase.DisableLog("rdApp.*")
HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.join(HERE, "..")

REFERENCE_EXAMPLES = ["C(CS)O", "CCCC=O", "CCON=O", "C#C"]

NAMED = """
CC(=O)Oc1ccccc1C(=O)O aspirin
Cn1cnc2c1c(=O)n(C)c(=O)n2C caffeine
CC(C)Cc1ccc(cc1)C(C)C(=O)O ibuprofen
CC(=O)Nc1ccc(O)cc1 paracetamol
COc1ccc2cc(ccc2c1)C(C)C(=O)O naproxen
OC(=O)Cc1ccccc1Nc1c(Cl)cccc1Cl diclofenac
CN(C)C(=N)N=C(N)N metformin
CN1CCCC1c1cccnc1 nicotine
CN1CCC23C4Oc5c3c(CC1C2C=CC4O)ccc5O morphine
CN1CCC23C4Oc5c3c(CC1C2C=CC4O)ccc5OC codeine
CN1C(=O)CN=C(c2ccccc2)c2cc(Cl)ccc21 diazepam
CCN(CC)CC(=O)Nc1c(C)cccc1C lidocaine
CCN(CC)CCOC(=O)c1ccc(N)cc1 procaine
CCOC(=O)c1ccc(N)cc1 benzocaine
CC(C)(C)NCC(O)c1ccc(O)c(CO)c1 salbutamol
CC(C)NCC(O)COc1cccc2ccccc12 propranolol
CC(C)NCC(O)COc1ccc(CC(N)=O)cc1 atenolol
COCCc1ccc(OCC(O)CNC(C)C)cc1 metoprolol
CC(=O)CC(c1ccccc1)c1c(O)c2ccccc2oc1=O warfarin
Cn1c(=O)c2[nH]cnc2n(C)c1=O theophylline
Cc1cc(NS(=O)(=O)c2ccc(N)cc2)no1 sulfamethoxazole
COc1cc(Cc2cnc(N)nc2N)cc(OC)c1OC trimethoprim
CCN(CC)CCCC(C)Nc1ccnc2cc(Cl)ccc12 chloroquine
COc1ccc2nccc(C(O)C3CC4CCN3CC4C=C)c2c1 quinine
CC1(C)SC2C(NC(=O)Cc3ccccc3)C(=O)N2C1C(=O)O penicillin_g
CC1(C)SC2C(NC(=O)C(N)c3ccc(O)cc3)C(=O)N2C1C(=O)O amoxicillin
OC(=O)c1cn(C2CC2)c2cc(N3CCNCC3)c(F)cc2c1=O ciprofloxacin
CNCCC(Oc1ccc(cc1)C(F)(F)F)c1ccccc1 fluoxetine
CNC1CCC(c2ccc(Cl)c(Cl)c2)c2ccccc21 sertraline
OC1(CCN(CCCC(=O)c2ccc(F)cc2)CC1)c1ccc(Cl)cc1 haloperidol
COc1ccc2[nH]c(S(=O)Cc3ncc(C)c(OC)c3C)nc2c1 omeprazole
CNC(=C[N+](=O)[O-])NCCSCc1ccc(CN(C)C)o1 ranitidine
CN=C(NC#N)NCCSCc1nc[nH]c1C cimetidine
NS(=O)(=O)c1cc(C(=O)O)c(NCc2ccco2)cc1Cl furosemide
NS(=O)(=O)c1cc2c(cc1Cl)NCNS2(=O)=O hydrochlorothiazide
CC(CS)C(=O)N1CCCC1C(=O)O captopril
COc1ccc2c(c1)c(CC(=O)O)c(C)n2C(=O)c1ccc(Cl)cc1 indomethacin
CC(C(=O)O)c1cccc(c1)C(=O)c1ccccc1 ketoprofen
Cc1ccc(cc1)-c1cc(nn1-c1ccc(cc1)S(N)(=O)=O)C(F)(F)F celecoxib
CCCc1nn(C)c2c1nc([nH]c2=O)-c1cc(ccc1OCC)S(=O)(=O)N1CCN(C)CC1 sildenafil
NCCc1ccc(O)c(O)c1 dopamine
NCCc1c[nH]c2ccc(O)cc12 serotonin
CNCC(O)c1ccc(O)c(O)c1 adrenaline
NCCc1c[nH]cn1 histamine
OCC1OC(O)C(O)C(O)C1O glucose
CC(C)CCCC(C)C1CCC2C3CC=C4CC(O)CCC4(C)C3CCC12C cholesterol
CC12CCC3C(CCC4=CC(=O)CCC34C)C1CCC2O testosterone
CC12CCC3c4ccc(O)cc4CCC3C1CCC2O estradiol
O=[N+]([O-])OCC(CO[N+](=O)[O-])O[N+](=O)[O-] nitroglycerin
Cc1c(cc(cc1[N+](=O)[O-])[N+](=O)[O-])[N+](=O)[O-] trinitrotoluene
NC(N)=O urea
CC(=O)O acetic_acid
c1ccccc1 benzene
Cc1ccccc1 toluene
Oc1ccccc1 phenol
Nc1ccccc1 aniline
c1ccncc1 pyridine
c1cc[nH]c1 pyrrole
c1c[nH]cn1 imidazole
c1ccc2[nH]ccc2c1 indole
c1ccc2ccccc2c1 naphthalene
c1ccc2cc3ccccc3cc2c1 anthracene
C1C2CC3CC1CC(C2)C3 adamantane
C1CC2CCC1C2 norbornane
C12C3C4C1C5C2C3C45 cubane
C1CCC2(CC1)CCCC2 spirodecane
C1CCCCCCCCCCC1 cyclododecane
C1CO1 oxirane
C1CN1 aziridine
C[N+](=O)[O-] nitromethane
CC#N acetonitrile
CS(C)=O dimethyl_sulfoxide
c1ccsc1 thiophene
c1ccoc1 furan
OC(=O)CCC(=O)O succinic_acid
NCC(=O)O glycine
CC(N)C(=O)O alanine
NC(CCC(=O)O)C(=O)O glutamic_acid
NC(Cc1ccccc1)C(=O)O phenylalanine
NC(Cc1c[nH]c2ccccc12)C(=O)O tryptophan
NC(CS)C(=O)O cysteine
CSCCC(N)C(=O)O methionine
Nc1ncnc2[nH]cnc12 adenine
Cc1c[nH]c(=O)[nH]c1=O thymine
O=c1cc[nH]c(=O)[nH]1 uracil
Nc1ccn(C2CC(O)C(CO)O2)c(=O)n1 deoxycytidine
OC(=O)c1ccccc1O salicylic_acid
O=C(O)c1ccccc1 benzoic_acid
ClC(Cl)Cl chloroform
FC(F)(F)C(Cl)Br halothane
BrCCBr dibromoethane
ICC(=O)N iodoacetamide
CCOP(=S)(OCC)Oc1ccc(cc1)[N+](=O)[O-] parathion
COP(=O)(OC)OC=C(Cl)Cl dichlorvos
C[S+](C)C trimethylsulfonium
[NH4+] ammonium
CC(=O)[O-] acetate
[13CH4] methane_13c
OCC[N+](C)(C)C choline
C=CC(=O)OC methyl_acrylate
C=CC=C butadiene
O=C1C=CC(=O)C=C1 benzoquinone
CC(=O)OCC(=O)C1(O)CCC2C3CCC4=CC(=O)C=CC4(C)C3(F)C(O)CC21C fluoro_steroid
N#Cc1ccccc1 benzonitrile
CC(C)(C)c1ccc(O)cc1 tert_butylphenol
O=C(c1ccccc1)c1ccccc1 benzophenone
c1ccc(-c2ccccc2)cc1 biphenyl
CCCCCCCCCCCCCCCC(=O)O palmitic_acid
OCC(O)CO glycerol
"""

def canonical(smiles):
    m = Chem.MolFromSmiles(smiles)
    if m is None:
        raise SystemExit(f"cannot parse {smiles}")
    return Chem.MolToSmiles(m)

def keep_nci(m):
    allowed = {6, 7, 8, 9, 15, 16, 17, 35, 53}
    if len(Chem.GetMolFrags(m)) != 1:
        return False
    if not 5 <= m.GetNumHeavyAtoms() <= 35:
        return False
    for a in m.GetAtoms():
        if a.GetAtomicNum() not in allowed or a.GetNumRadicalElectrons() or a.GetIsotope():
            return False
    return True

def small_molecules():
    raw = """C O N CC CO CN C=O C=C C#N CCC CCO COC CC=O CC#C CC(C)C CC(C)O CC(=O)N CC(=O)C
    CCN OCCO NCCN C1CC1 C1CCC1 C1CCCC1 C1CCCCC1 c1ccccc1 c1ccoc1 c1cscn1 c1cnccn1 Cc1ccccc1
    Oc1ccccc1 OC=O NC=O CS CSC CSSC C=CC=O C#CC#C FC(F)F ClCCl BrC=C NN ON=O CN=C=O
    OCC(=O)O CC(C)(C)O C1CC1C1CC1 C1CC2CC1C2 CC1CCCCC1 O=C1CCCC1 C1COCCN1 c1ccncc1 c1cc[nH]n1
    N#CC#N NC(=O)N CS(=O)(=O)C OP(O)(O)=O C[N+](C)(C)C CC[O-] OO C1CCOC1 C=C1CC1 CC=CC
    C(=O)C=O""".split()
    return raw

def main():
    names = []
    for line in NAMED.strip().splitlines():
        smi, name = line.split()
        names.append((canonical(smi), name))
    small = [canonical(s) for s in small_molecules()]
    nci_path = os.path.join(RDConfig.RDDataDir, "NCI", "first_5K.smi")
    nci = []
    for line in open(nci_path):
        parts = line.split()
        if not parts:
            continue
        m = Chem.MolFromSmiles(parts[0])
        if m is not None and keep_nci(m):
            nci.append(Chem.MolToSmiles(m))
    rng = random.Random(20240401)
    nci_sample = rng.sample(nci, 110)

    seen = set()
    corpus = []
    def add(smi, note):
        if smi not in seen:
            seen.add(smi)
            corpus.append((smi, note))
    for s in REFERENCE_EXAMPLES:
        add(s, "worked example")
    for s, name in names:
        add(s, name)
    for s in small:
        add(s, "small")
    for s in nci_sample:
        add(s, "nci")

    with open(os.path.join(ROOT, "crates", "core", "data", "molecules.txt"), "w") as f:
        f.write("# Molecule corpus: worked examples, drugs and reagents, small molecules and\n")
        f.write("# a seeded sample of the NCI open database subset. One SMILES per line.\n")
        for smi, _ in corpus:
            f.write(smi + "\n")

    out_dir = os.path.join(ROOT, "crates", "core", "tests", "data")
    os.makedirs(out_dir, exist_ok=True)
    rng = random.Random(7)
    with open(os.path.join(out_dir, "reference_values.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["smiles", "alt_smiles", "mol_weight", "logp", "tpsa", "qed", "sa_score"])
        for smi, _ in corpus:
            m = Chem.MolFromSmiles(smi)
            alt = Chem.MolToSmiles(m, doRandom=True, canonical=False)
            for _ in range(5):
                if alt != smi:
                    break
                alt = Chem.MolToSmiles(m, doRandom=True, canonical=False)
            w.writerow([
                smi, alt,
                f"{Descriptors.MolWt(m):.4f}",
                f"{Crippen.MolLogP(m):.4f}",
                f"{rdMolDescriptors.CalcTPSA(m):.4f}",
                f"{QED.qed(m):.4f}",
                f"{sascorer.calculateScore(m):.4f}",
            ])
    print(len(corpus), "molecules")

if __name__ == "__main__":
    main()
