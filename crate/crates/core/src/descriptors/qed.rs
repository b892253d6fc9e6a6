//! Quantitative estimate of drug-likeness (Bickerton et al. 2012): a
//! weighted geometric mean of eight asymmetric double-sigmoid
//! desirabilities.

use serde::Serialize;

use crate::molkit::{BondOrder, Molecule};

use super::assets::{parse_f64, records, AssetError};
use super::counts::{qed_aromatic_rings, rotatable_bonds};
use super::{DescriptorEngine, DescriptorError};

const ASSET: &str = "qed_params.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum QedProperty {
    MW,
    ALOGP,
    HBA,
    HBD,
    PSA,
    ROTB,
    AROM,
    ALERTS,
}

impl QedProperty {
    pub const ALL: [QedProperty; 8] = [
        QedProperty::MW,
        QedProperty::ALOGP,
        QedProperty::HBA,
        QedProperty::HBD,
        QedProperty::PSA,
        QedProperty::ROTB,
        QedProperty::AROM,
        QedProperty::ALERTS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QedProperty::MW => "MW",
            QedProperty::ALOGP => "ALOGP",
            QedProperty::HBA => "HBA",
            QedProperty::HBD => "HBD",
            QedProperty::PSA => "PSA",
            QedProperty::ROTB => "ROTB",
            QedProperty::AROM => "AROM",
            QedProperty::ALERTS => "ALERTS",
        }
    }

    fn index(self) -> usize {
        QedProperty::ALL.iter().position(|&p| p == self).expect("listed")
    }
}

/// Coefficients of one asymmetric double sigmoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ads {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub dmax: f64,
}

impl Ads {
    /// Desirability normalised by `dmax`.
    pub fn eval(&self, x: f64) -> f64 {
        let exp1 = 1.0 + (-(x - self.c + self.d / 2.0) / self.e).exp();
        let exp2 = 1.0 + (-(x - self.c - self.d / 2.0) / self.f).exp();
        (self.a + self.b / exp1 * (1.0 - 1.0 / exp2)) / self.dmax
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QedParams {
    ads: [Ads; 8],
    weights: [f64; 8],
}

/// The eight raw QED inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QedProperties {
    pub mw: f64,
    pub alogp: f64,
    pub hba: usize,
    pub hbd: usize,
    pub psa: f64,
    pub rotb: usize,
    pub arom: usize,
    pub alerts: usize,
}

impl QedProperties {
    pub fn value(&self, p: QedProperty) -> f64 {
        match p {
            QedProperty::MW => self.mw,
            QedProperty::ALOGP => self.alogp,
            QedProperty::HBA => self.hba as f64,
            QedProperty::HBD => self.hbd as f64,
            QedProperty::PSA => self.psa,
            QedProperty::ROTB => self.rotb as f64,
            QedProperty::AROM => self.arom as f64,
            QedProperty::ALERTS => self.alerts as f64,
        }
    }
}

impl QedParams {
    pub fn parse(text: &str) -> Result<Self, AssetError> {
        let mut ads: [Option<Ads>; 8] = [None; 8];
        let mut weights = [0.0; 8];
        for record in records(ASSET, text, 9) {
            let (line, fields) = record?;
            let prop = QedProperty::ALL
                .into_iter()
                .find(|p| p.name() == fields[0])
                .ok_or_else(|| AssetError::malformed(ASSET, line, format!("unknown property {:?}", fields[0])))?;
            let v = fields[1..9]
                .iter()
                .map(|f| parse_f64(ASSET, line, f))
                .collect::<Result<Vec<f64>, _>>()?;
            if v[7] <= 0.0 {
                return Err(AssetError::malformed(ASSET, line, "weight must be positive"));
            }
            if v[6] <= 0.0 || v[4] == 0.0 || v[5] == 0.0 {
                return Err(AssetError::malformed(
                    ASSET,
                    line,
                    "dmax must be positive and e, f non-zero",
                ));
            }
            let i = prop.index();
            if ads[i].is_some() {
                return Err(AssetError::malformed(
                    ASSET,
                    line,
                    format!("duplicate property {}", prop.name()),
                ));
            }
            ads[i] = Some(Ads {
                a: v[0],
                b: v[1],
                c: v[2],
                d: v[3],
                e: v[4],
                f: v[5],
                dmax: v[6],
            });
            weights[i] = v[7];
        }
        let mut out = [Ads {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            e: 1.0,
            f: 1.0,
            dmax: 1.0,
        }; 8];
        for (i, p) in QedProperty::ALL.iter().enumerate() {
            out[i] = ads[i].ok_or_else(|| AssetError::invalid(ASSET, format!("missing property {}", p.name())))?;
        }
        Ok(QedParams { ads: out, weights })
    }

    pub fn ads(&self, p: QedProperty) -> &Ads {
        &self.ads[p.index()]
    }

    pub fn weight(&self, p: QedProperty) -> f64 {
        self.weights[p.index()]
    }

    /// Per-property desirabilities, each in (0, 1].
    pub fn desirabilities(&self, props: &QedProperties) -> [f64; 8] {
        QedProperty::ALL.map(|p| self.ads(p).eval(props.value(p)).clamp(f64::MIN_POSITIVE, 1.0))
    }

    pub fn score(&self, props: &QedProperties) -> f64 {
        let d = self.desirabilities(props);
        let total_weight: f64 = self.weights.iter().sum();
        let weighted: f64 = d.iter().zip(&self.weights).map(|(d, w)| w * d.ln()).sum();
        (weighted / total_weight).exp()
    }
}

/// Explicit valence of an aliphatic atom: bond orders plus hydrogens.
fn valence(m: &Molecule, a: usize) -> usize {
    m.bond_order_sum(a) + m.total_h(a)
}

fn aliphatic(m: &Molecule, a: usize, z: u8) -> bool {
    m.atom(a).atomic_number == z && !m.atom(a).aromatic
}

/// N bonded (single or aromatic) to an aliphatic C or S that carries a
/// double-bonded aliphatic O: amide- and sulfonamide-type nitrogens.
fn acyl_nitrogen(m: &Molecule, n: usize) -> bool {
    m.neighbors(n).iter().any(|&(x, b)| {
        matches!(m.bond(b).order, BondOrder::Single | BondOrder::Aromatic)
            && (aliphatic(m, x, 6) || aliphatic(m, x, 16))
            && m.neighbors(x)
                .iter()
                .any(|&(o, bo)| o != n && m.bond(bo).order == BondOrder::Double && aliphatic(m, o, 8))
    })
}

/// Hydrogen-bond acceptors as counted by QED: the sum over the acceptor
/// definitions of the atoms each one matches.
pub fn qed_hb_acceptors(m: &Molecule) -> usize {
    let m = m.with_implicit_hydrogens();
    let mut total = 0;
    for a in 0..m.atom_count() {
        let atom = m.atom(a);
        let (h, x, v, q) = (m.total_h(a), m.connectivity(a), valence(&m, a), atom.formal_charge);
        let defs = [
            // aromatic O and N without H, two connections
            atom.aromatic && atom.atomic_number == 8 && h == 0 && x == 2,
            atom.aromatic && atom.atomic_number == 7 && h == 0 && x == 2,
            // hydroxyl and ether O, carbonyl O, alkoxide
            aliphatic(&m, a, 8) && h == 1 && x == 2 && v == 2,
            aliphatic(&m, a, 8) && h == 0 && x == 2 && v == 2,
            aliphatic(&m, a, 8) && h == 0 && x == 1 && v == 2,
            aliphatic(&m, a, 8) && q == -1 && x == 1,
            // thioether, thiocarbonyl, thiolate
            aliphatic(&m, a, 16) && h == 0 && x == 2 && v == 2,
            aliphatic(&m, a, 16) && h == 0 && x == 1 && v == 2,
            aliphatic(&m, a, 16) && q == -1 && x == 1,
            // nitrile N and non-acyl trivalent amine N
            aliphatic(&m, a, 7) && h == 0 && x == 1 && v == 3,
            aliphatic(&m, a, 7) && q == 0 && x == 3 && v == 3 && !acyl_nitrogen(&m, a),
        ];
        total += defs.iter().filter(|&&d| d).count();
    }
    total
}

/// Hydrogen-bond donors as counted by QED: N–H (neutral trivalent or
/// cationic tetravalent), neutral O–H and S–H, and aromatic n–H.
pub fn qed_hb_donors(m: &Molecule) -> usize {
    let m = m.with_implicit_hydrogens();
    (0..m.atom_count())
        .filter(|&a| {
            let atom = m.atom(a);
            let (h, v, q) = (m.total_h(a), valence(&m, a), atom.formal_charge);
            (aliphatic(&m, a, 7) && h > 0 && v == 3)
                || (aliphatic(&m, a, 7) && h > 0 && q == 1 && v == 4)
                || (aliphatic(&m, a, 8) && h == 1 && q == 0)
                || (aliphatic(&m, a, 16) && h == 1 && q == 0)
                || (atom.aromatic && atom.atomic_number == 7 && h == 1 && q == 0)
        })
        .count()
}

pub(crate) fn properties(engine: &DescriptorEngine, m: &Molecule) -> Result<QedProperties, DescriptorError> {
    let m = m.with_implicit_hydrogens();
    Ok(QedProperties {
        mw: engine.mol_weight(&m)?,
        alogp: engine.crippen_logp(&m)?,
        hba: qed_hb_acceptors(&m),
        hbd: qed_hb_donors(&m),
        psa: engine.tpsa(&m).value,
        rotb: rotatable_bonds(&m),
        arom: qed_aromatic_rings(&m),
        alerts: engine.qed_alert_set().count_matching(&m),
    })
}
