//! Descriptor engine behind the ten tools: molecular weight, Crippen LogP,
//! TPSA, Lipinski counts, QED, SA score, BOILED-Egg classification and the
//! Brenk/PAINS alert filters.
//!
//! Every parameter table ships embedded in the library; [`DescriptorEngine::load`]
//! can read replacements from a data directory.

mod alerts;
mod assets;
mod counts;
mod crippen;
mod egg;
mod lipinski;
mod qed;
mod sa;
mod tpsa;
mod weight;

use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::molkit::Molecule;

pub use alerts::{AlertEntry, AlertPattern, AlertReport, AlertSet, SkippedPattern};
pub use assets::AssetError;
pub use counts::{aromatic_ring_count, qed_aromatic_rings, rotatable_bonds};
pub use crippen::{CrippenRule, CrippenTable};
pub use egg::{EggClass, EggModel, Ellipse};
pub use lipinski::{hb_acceptors, hb_donors, LipinskiReport};
pub use qed::{qed_hb_acceptors, qed_hb_donors, QedParams, QedProperties, QedProperty};
pub use sa::{SaBreakdown, SaParams};
pub use tpsa::{TpsaResult, TpsaRule, TpsaSource, TpsaTable};
pub use weight::{mol_weight, HYDROGEN_MASS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DescriptorError {
    #[error("no mass known for isotope {mass_number} of element {atomic_number}")]
    UnknownIsotope { atomic_number: u8, mass_number: u16 },
    #[error("atom {atom} ({symbol}) matches no Crippen atom type")]
    NoCrippenRule { atom: usize, symbol: String },
    #[error("the molecule has no atoms")]
    EmptyMolecule,
}

/// Every descriptor of one molecule, at full precision.
#[derive(Debug, Clone, Serialize)]
pub struct Descriptors {
    pub mol_weight: f64,
    pub logp: f64,
    pub tpsa: f64,
    /// Polar atoms that matched no TPSA environment (they contribute zero).
    pub tpsa_unmatched_atoms: Vec<usize>,
    pub qed: f64,
    pub sa_score: f64,
    pub egg: EggClass,
    pub lipinski: LipinskiReport,
    pub brenk: AlertReport,
    pub pains: AlertReport,
}

/// All parameter tables, immutable after loading.
#[derive(Debug)]
pub struct DescriptorEngine {
    crippen: CrippenTable,
    tpsa: TpsaTable,
    qed: QedParams,
    sa: SaParams,
    egg: EggModel,
    brenk: AlertSet,
    pains: AlertSet,
    qed_alerts: AlertSet,
}

impl DescriptorEngine {
    /// The engine built from the embedded assets, loaded once per process.
    pub fn embedded() -> &'static DescriptorEngine {
        Self::embedded_arc()
    }

    /// The same engine as [`DescriptorEngine::embedded`], as a shared handle.
    pub fn embedded_shared() -> Arc<DescriptorEngine> {
        Arc::clone(Self::embedded_arc())
    }

    fn embedded_arc() -> &'static Arc<DescriptorEngine> {
        static ENGINE: OnceLock<Arc<DescriptorEngine>> = OnceLock::new();
        ENGINE.get_or_init(|| Arc::new(DescriptorEngine::load(None).expect("embedded descriptor assets are valid")))
    }

    /// Load every table, preferring files found in `data_dir` over the
    /// embedded copies.
    pub fn load(data_dir: Option<&Path>) -> Result<Self, AssetError> {
        let text = |name, embedded| assets::read_text(data_dir, name, embedded);
        let brenk = AlertSet::parse("brenk", &text("brenk.smarts", assets::BRENK)?)?;
        let pains = AlertSet::parse("pains", &text("pains.smarts", assets::PAINS)?)?;
        let qed_alerts = match AlertSet::parse("qed-alerts", &text("qed_alerts.smarts", assets::QED_ALERTS)?) {
            Ok(set) => set,
            Err(e) => {
                tracing::warn!("qed-alerts unavailable ({e}); using the brenk set for the QED ALERTS property");
                brenk.clone()
            }
        };
        let sa_fragments = match data_dir.map(|d| d.join("sa_fragments.tsv.gz")).filter(|p| p.exists()) {
            Some(path) => std::fs::read(&path).map_err(|source| AssetError::Io { path, source })?,
            None => assets::SA_FRAGMENTS_GZ.to_vec(),
        };
        Ok(DescriptorEngine {
            crippen: CrippenTable::parse(&text("crippen.tsv", assets::CRIPPEN)?)?,
            tpsa: TpsaTable::parse(&text("tpsa.tsv", assets::TPSA)?)?,
            qed: QedParams::parse(&text("qed_params.tsv", assets::QED_PARAMS)?)?,
            sa: SaParams::parse(&text("sa_params.tsv", assets::SA_PARAMS)?, sa_fragments)?,
            egg: EggModel::parse(&text("egg.tsv", assets::EGG)?)?,
            brenk,
            pains,
            qed_alerts,
        })
    }

    pub fn crippen_table(&self) -> &CrippenTable {
        &self.crippen
    }

    pub fn tpsa_table(&self) -> &TpsaTable {
        &self.tpsa
    }

    pub fn qed_params(&self) -> &QedParams {
        &self.qed
    }

    pub fn sa_params(&self) -> &SaParams {
        &self.sa
    }

    pub fn egg_model(&self) -> &EggModel {
        &self.egg
    }

    pub fn brenk_set(&self) -> &AlertSet {
        &self.brenk
    }

    pub fn pains_set(&self) -> &AlertSet {
        &self.pains
    }

    pub fn qed_alert_set(&self) -> &AlertSet {
        &self.qed_alerts
    }

    pub fn mol_weight(&self, m: &Molecule) -> Result<f64, DescriptorError> {
        mol_weight(m)
    }

    pub fn crippen_logp(&self, m: &Molecule) -> Result<f64, DescriptorError> {
        self.crippen.logp(m)
    }

    pub fn tpsa(&self, m: &Molecule) -> TpsaResult {
        self.tpsa.compute(m)
    }

    pub fn qed_properties(&self, m: &Molecule) -> Result<QedProperties, DescriptorError> {
        qed::properties(self, m)
    }

    pub fn qed(&self, m: &Molecule) -> Result<f64, DescriptorError> {
        Ok(self.qed.score(&self.qed_properties(m)?))
    }

    pub fn sa_breakdown(&self, m: &Molecule) -> SaBreakdown {
        self.sa.breakdown(m)
    }

    pub fn sa_score(&self, m: &Molecule) -> f64 {
        self.sa.breakdown(m).score
    }

    pub fn boiled_egg(&self, m: &Molecule) -> Result<EggClass, DescriptorError> {
        let tpsa = self.tpsa(m).value;
        let wlogp = self.crippen_logp(m)?;
        Ok(self.egg.classify(tpsa, wlogp))
    }

    pub fn lipinski(&self, m: &Molecule) -> Result<LipinskiReport, DescriptorError> {
        Ok(LipinskiReport::evaluate(
            self.mol_weight(m)?,
            self.crippen_logp(m)?,
            hb_donors(m),
            hb_acceptors(m),
        ))
    }

    pub fn brenk(&self, m: &Molecule) -> AlertReport {
        self.brenk.filter(m)
    }

    pub fn pains(&self, m: &Molecule) -> AlertReport {
        self.pains.filter(m)
    }

    pub fn describe(&self, m: &Molecule) -> Result<Descriptors, DescriptorError> {
        if m.is_empty() {
            return Err(DescriptorError::EmptyMolecule);
        }
        let tpsa = self.tpsa(m);
        let logp = self.crippen_logp(m)?;
        let mol_weight = self.mol_weight(m)?;
        Ok(Descriptors {
            mol_weight,
            logp,
            egg: self.egg.classify(tpsa.value, logp),
            tpsa: tpsa.value,
            tpsa_unmatched_atoms: tpsa.unmatched_atoms,
            qed: self.qed(m)?,
            sa_score: self.sa_score(m),
            lipinski: LipinskiReport::evaluate(mol_weight, logp, hb_donors(m), hb_acceptors(m)),
            brenk: self.brenk(m),
            pains: self.pains(m),
        })
    }
}
