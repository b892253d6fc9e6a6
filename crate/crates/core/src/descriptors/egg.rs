//! BOILED-Egg classification (Daina & Zoete 2016): gastrointestinal
//! absorption inside the "white" ellipse and brain penetration inside the
//! "yolk" ellipse of the (TPSA, WLOGP) plane.

use serde::Serialize;

use super::assets::{parse_f64, records, AssetError};

const ASSET: &str = "egg.tsv";

/// An ellipse with semi-axes `rx` (along TPSA) and `ry` (along WLOGP)
/// before a rotation of `theta_deg` degrees about its centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ellipse {
    pub cx: f64,
    pub cy: f64,
    pub rx: f64,
    pub ry: f64,
    pub theta_deg: f64,
}

impl Ellipse {
    /// The point moved into the ellipse's axis-aligned frame.
    fn local(&self, x: f64, y: f64) -> (f64, f64) {
        let (s, c) = self.theta_deg.to_radians().sin_cos();
        let (dx, dy) = (x - self.cx, y - self.cy);
        (dx * c + dy * s, -dx * s + dy * c)
    }

    /// Value of the ellipse's quadratic form; ≤ 1 inside or on the boundary.
    pub fn level(&self, x: f64, y: f64) -> f64 {
        let (u, v) = self.local(x, y);
        (u / self.rx).powi(2) + (v / self.ry).powi(2)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.level(x, y) <= 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EggModel {
    pub white: Ellipse,
    pub yolk: Ellipse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EggClass {
    /// Inside the yolk: predicted blood–brain-barrier permeant.
    pub bbb: bool,
    /// Inside the white: predicted high gastrointestinal absorption.
    pub gi_high: bool,
}

impl EggModel {
    pub fn parse(text: &str) -> Result<Self, AssetError> {
        let mut white = None;
        let mut yolk = None;
        for record in records(ASSET, text, 6) {
            let (line, f) = record?;
            let v = f[1..6]
                .iter()
                .map(|x| parse_f64(ASSET, line, x))
                .collect::<Result<Vec<f64>, _>>()?;
            if v[2] <= 0.0 || v[3] <= 0.0 {
                return Err(AssetError::malformed(ASSET, line, "semi-axes must be positive"));
            }
            let e = Ellipse {
                cx: v[0],
                cy: v[1],
                rx: v[2],
                ry: v[3],
                theta_deg: v[4],
            };
            let slot = match f[0] {
                "white" => &mut white,
                "yolk" => &mut yolk,
                other => return Err(AssetError::malformed(ASSET, line, format!("unknown ellipse {other:?}"))),
            };
            if slot.replace(e).is_some() {
                return Err(AssetError::malformed(
                    ASSET,
                    line,
                    format!("duplicate ellipse {}", f[0]),
                ));
            }
        }
        Ok(EggModel {
            white: white.ok_or_else(|| AssetError::invalid(ASSET, "missing white ellipse"))?,
            yolk: yolk.ok_or_else(|| AssetError::invalid(ASSET, "missing yolk ellipse"))?,
        })
    }

    /// The two regions are tested independently.
    pub fn classify(&self, tpsa: f64, wlogp: f64) -> EggClass {
        EggClass {
            bbb: self.yolk.contains(tpsa, wlogp),
            gi_high: self.white.contains(tpsa, wlogp),
        }
    }
}
