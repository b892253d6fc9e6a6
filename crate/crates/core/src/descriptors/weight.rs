//! Average molecular weight.

use crate::molkit::{Molecule, PeriodicTable};

use super::DescriptorError;

/// Mass used for every hydrogen, explicit or implicit (amu).
pub const HYDROGEN_MASS: f64 = 1.008;

/// Sum of atom masses (isotope mass when a mass number is given, otherwise
/// the standard atomic weight) plus 1.008 per implicit hydrogen.
pub fn mol_weight(m: &Molecule) -> Result<f64, DescriptorError> {
    let table = PeriodicTable::global();
    let mut total = 0.0;
    for atom in m.atoms() {
        let mass = match atom.isotope {
            Some(a) => table
                .isotope_mass(atom.atomic_number, a)
                .ok_or(DescriptorError::UnknownIsotope {
                    atomic_number: atom.atomic_number,
                    mass_number: a,
                })?,
            None if atom.is_hydrogen() => HYDROGEN_MASS,
            None => atom.element().standard_weight,
        };
        total += mass + HYDROGEN_MASS * atom.implicit_h as f64;
    }
    Ok(total)
}
