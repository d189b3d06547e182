//! Two equal parcels of area `A₀/2`; the inner one lies wholly inside an
//! urbanised area `A_U` of uniform density `D`, the outer one holds the rest
//! of the urban area plus empty land.

use crate::density::{pwd, ParcelTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthSnapshot {
    gross_area: f64,
    urban_area: f64,
    urban_population: f64,
}

impl GrowthSnapshot {
    /// `A₀/2 ≤ A_U ≤ A₀`; `A_U = A₀/2` is the limit in which the outer parcel
    /// is empty.
    pub fn new(gross_area: f64, urban_area: f64, urban_population: f64) -> Result<Self> {
        if !(gross_area > 0.0 && gross_area.is_finite()) {
            return Err(Error::param(
                "gross_area",
                format!("must be positive, got {gross_area}"),
            ));
        }
        if !(urban_area >= gross_area / 2.0 && urban_area <= gross_area) {
            return Err(Error::param(
                "urban_area",
                format!(
                    "must lie in [A0/2, A0] = [{}, {gross_area}], got {urban_area}",
                    gross_area / 2.0
                ),
            ));
        }
        if !(urban_population > 0.0 && urban_population.is_finite()) {
            return Err(Error::param(
                "urban_population",
                format!("must be positive, got {urban_population}"),
            ));
        }
        Ok(GrowthSnapshot {
            gross_area,
            urban_area,
            urban_population,
        })
    }

    pub fn gross_area(&self) -> f64 {
        self.gross_area
    }

    pub fn urban_area(&self) -> f64 {
        self.urban_area
    }

    pub fn urban_population(&self) -> f64 {
        self.urban_population
    }

    /// Uniform urban density `D = P_U / A_U`.
    pub fn density(&self) -> f64 {
        self.urban_population / self.urban_area
    }

    /// `A_U / A₀`.
    pub fn urban_fraction(&self) -> f64 {
        self.urban_area / self.gross_area
    }

    /// Inner and outer parcel populations.
    pub fn parcel_populations(&self) -> (f64, f64) {
        let inner = self.gross_area / (2.0 * self.urban_area) * self.urban_population;
        let outer = (self.urban_population - inner).max(0.0);
        (inner, outer)
    }

    /// The two-parcel table behind [`growth_pwd`].
    pub fn two_parcel_table(&self) -> ParcelTable {
        self.wedge_table(1)
    }

    /// Each of the two parcels split into `wedges` equal pieces of equal
    /// density.
    pub fn wedge_table(&self, wedges: usize) -> ParcelTable {
        let (inner, outer) = self.parcel_populations();
        let n = wedges.max(1) as f64;
        let area = self.gross_area / (2.0 * n);
        let mut pairs = Vec::with_capacity(2 * wedges.max(1));
        for _ in 0..wedges.max(1) {
            pairs.push((inner / n, area));
        }
        for _ in 0..wedges.max(1) {
            pairs.push((outer / n, area));
        }
        ParcelTable::from_pairs("growth", &pairs).expect("snapshot invariants give valid parcels")
    }
}

/// `PWD / D = 1/u + 2u − 2` for `u = A_U / A₀ ∈ [1/2, 1]`.
pub fn growth_pwd_ratio(u: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&u) {
        return Err(Error::param(
            "u",
            format!("urban fraction must lie in [0.5, 1], got {u}"),
        ));
    }
    Ok(u.recip() + 2.0 * u - 2.0)
}

/// `d/du (1/u + 2u − 2)`, zero only at `u = 1/√2`.
pub fn growth_pwd_ratio_slope(u: f64) -> f64 {
    2.0 - u.powi(-2)
}

/// PWD of the two-parcel table, computed directly from parcel populations.
pub fn growth_pwd(snapshot: &GrowthSnapshot) -> Result<f64> {
    pwd(&snapshot.two_parcel_table())
}

/// Signed fractional change in PWD from a snapshot at urban fraction `u1` to
/// one at `u2`, with the urban density multiplied by `density_growth`.
pub fn growth_decline(u1: f64, u2: f64, density_growth: f64) -> Result<f64> {
    if !(density_growth > 0.0 && density_growth.is_finite()) {
        return Err(Error::param(
            "density_growth",
            format!("must be positive, got {density_growth}"),
        ));
    }
    Ok(growth_pwd_ratio(u2)? * density_growth / growth_pwd_ratio(u1)? - 1.0)
}
