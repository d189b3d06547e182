//! Moving `p` residents from parcel 2 to parcel 1 while swapping an equal,
//! empty area the other way, so both parcel areas are unchanged.

use crate::density::ParcelTable;
use crate::error::{Error, Result};
use crate::means::harmonic_mean;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryShift {
    pub p1: f64,
    pub a1: f64,
    pub p2: f64,
    pub a2: f64,
    /// Population of the whole region, including parcels not involved.
    pub p0: f64,
    /// Residents transferred from parcel 2 to parcel 1.
    pub p: f64,
}

impl BoundaryShift {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.p1, self.a1, self.p2, self.a2, self.p0, self.p]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::param("shift", "all inputs must be finite"));
        }
        if self.a1 <= 0.0 || self.a2 <= 0.0 {
            return Err(Error::param("a1/a2", "parcel areas must be positive"));
        }
        if self.p1 < 0.0 || self.p2 < 0.0 {
            return Err(Error::param(
                "p1/p2",
                "parcel populations must be non-negative",
            ));
        }
        if self.p0 <= 0.0 || self.p0 < self.p1 + self.p2 {
            return Err(Error::param(
                "p0",
                format!(
                    "must be positive and at least p1 + p2 = {}",
                    self.p1 + self.p2
                ),
            ));
        }
        if !(0.0..=self.p2).contains(&self.p) {
            return Err(Error::param(
                "p",
                format!(
                    "transfer must lie in [0, p2] = [0, {}], got {}",
                    self.p2, self.p
                ),
            ));
        }
        Ok(())
    }

    /// The region before and after the shift. Residents outside the two
    /// parcels sit in a third parcel whose area is arbitrary; its term
    /// cancels in the difference.
    pub fn tables(&self) -> Result<(ParcelTable, ParcelTable)> {
        self.validate()?;
        let rest = self.p0 - self.p1 - self.p2;
        let build = |p1: f64, p2: f64| {
            let mut pairs = vec![(p1, self.a1), (p2, self.a2)];
            if rest > 0.0 {
                pairs.push((rest, self.a1 + self.a2));
            }
            ParcelTable::from_pairs("shift", &pairs)
        };
        Ok((
            build(self.p1, self.p2)?,
            build(self.p1 + self.p, self.p2 - self.p)?,
        ))
    }
}

/// `PWD₂ − PWD₁ = (2p/P₀)(P₁/A₁ − P₂/A₂ + p/A_H)`, with `A_H` the harmonic
/// mean of the two areas.
pub fn boundary_shift_delta(shift: &BoundaryShift) -> Result<f64> {
    shift.validate()?;
    let harmonic = harmonic_mean(&[shift.a1, shift.a2])?;
    Ok(2.0 * shift.p / shift.p0 * (shift.p1 / shift.a1 - shift.p2 / shift.a2 + shift.p / harmonic))
}
