//! The corridor city: arterial roads on a square grid of spacing `L` km, each
//! flanked by a strip of width `W` km at density `D`, with ambient density `d`
//! everywhere else. Three parcel layouts are compared:
//!
//! * [`CorridorSubdivision::AlignedA`]: `L/2 × L/2` squares with corners on
//!   arterial intersections. Every parcel looks alike, so PWD equals OD.
//! * [`CorridorSubdivision::OffsetB`]: the same squares shifted by `L/4`, so
//!   they are centred on the arterials.
//! * [`CorridorSubdivision::TightC`]: each `L × L` block split into the
//!   L-shaped corridor parcel (I) and the square interior (II).
//!
//! The closed forms are written through the consolidation factor
//! `K = (D/d − 1)(W/L)(2 − W/L)`; [`corridor_tile_table`] builds the
//! representative parcels from their populations instead.

use crate::density::{pwd, ParcelTable};
use crate::error::{Error, Result};

use super::HA_PER_KM2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorridorCityParams {
    ambient_density: f64,
    corridor_density: f64,
    corridor_width_km: f64,
    grid_spacing_km: f64,
}

impl CorridorCityParams {
    /// `0 < d ≤ D`, `0 < W ≤ L/2`.
    pub fn new(d: f64, big_d: f64, w_km: f64, l_km: f64) -> Result<Self> {
        if ![d, big_d, w_km, l_km].iter().all(|x| x.is_finite()) {
            return Err(Error::param("corridor", "all parameters must be finite"));
        }
        if d <= 0.0 {
            return Err(Error::param(
                "d",
                format!("ambient density must be positive, got {d}"),
            ));
        }
        if big_d < d {
            return Err(Error::param(
                "D",
                format!("corridor density {big_d} must be at least ambient density {d}"),
            ));
        }
        if l_km <= 0.0 {
            return Err(Error::param(
                "L",
                format!("grid spacing must be positive, got {l_km}"),
            ));
        }
        if !(w_km > 0.0 && w_km <= l_km / 2.0) {
            return Err(Error::param(
                "W",
                format!(
                    "corridor width must lie in (0, L/2] = (0, {}], got {w_km}",
                    l_km / 2.0
                ),
            ));
        }
        Ok(CorridorCityParams {
            ambient_density: d,
            corridor_density: big_d,
            corridor_width_km: w_km,
            grid_spacing_km: l_km,
        })
    }

    /// Builds from the dimensionless ratios `D/d` and `W/L`.
    pub fn from_ratios(density_ratio: f64, width_ratio: f64, d: f64, l_km: f64) -> Result<Self> {
        CorridorCityParams::new(d, density_ratio * d, width_ratio * l_km, l_km)
    }

    /// `d`, persons per hectare.
    pub fn ambient_density(&self) -> f64 {
        self.ambient_density
    }

    /// `D`, persons per hectare.
    pub fn corridor_density(&self) -> f64 {
        self.corridor_density
    }

    /// `W`, km.
    pub fn corridor_width(&self) -> f64 {
        self.corridor_width_km
    }

    /// `L`, km.
    pub fn grid_spacing(&self) -> f64 {
        self.grid_spacing_km
    }

    pub fn density_ratio(&self) -> f64 {
        self.corridor_density / self.ambient_density
    }

    pub fn width_ratio(&self) -> f64 {
        self.corridor_width_km / self.grid_spacing_km
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorridorSubdivision {
    AlignedA,
    OffsetB,
    TightC,
}

impl CorridorSubdivision {
    pub const ALL: [CorridorSubdivision; 3] = [
        CorridorSubdivision::AlignedA,
        CorridorSubdivision::OffsetB,
        CorridorSubdivision::TightC,
    ];
}

/// `K = (D/d − 1)(W/L)(2 − W/L)`, the relative rise in OD due to the
/// corridors.
pub fn consolidation_factor(params: &CorridorCityParams) -> f64 {
    let x = params.width_ratio();
    (params.density_ratio() - 1.0) * x * (2.0 - x)
}

/// Closed-form PWD of the corridor city under each layout.
pub fn corridor_pwd(params: &CorridorCityParams, subdivision: CorridorSubdivision) -> f64 {
    let d = params.ambient_density;
    let k = consolidation_factor(params);
    match subdivision {
        CorridorSubdivision::AlignedA => d * (1.0 + k),
        CorridorSubdivision::OffsetB => d * (1.0 + k) + offset_excess(params),
        CorridorSubdivision::TightC => d + k / (1.0 + k) * params.corridor_density,
    }
}

/// `PWD_b − PWD_a = d/(1+K) · (D/d − 1)² (W/L)² (2(1 − W/L)² + (W/L)²)`.
pub fn offset_excess(params: &CorridorCityParams) -> f64 {
    let d = params.ambient_density;
    let k = consolidation_factor(params);
    let x = params.width_ratio();
    let r = params.density_ratio() - 1.0;
    d / (1.0 + k) * r * r * x * x * (2.0 * (1.0 - x).powi(2) + x * x)
}

/// Population of one aligned `L/2 × L/2` parcel: `25 d L² + 25 (D − d) W (2L − W)`.
pub fn aligned_parcel_population(params: &CorridorCityParams) -> f64 {
    let (d, big_d, w, l) = params.raw();
    25.0 * d * l * l + 25.0 * (big_d - d) * w * (2.0 * l - w)
}

/// Offset-layout parcel populations: interior block, arterial crossroad,
/// arterial transverse.
pub fn offset_parcel_populations(params: &CorridorCityParams) -> (f64, f64, f64) {
    let (d, big_d, w, l) = params.raw();
    let interior = 25.0 * d * l * l;
    let crossroad = 25.0 * d * l * l + 100.0 * (big_d - d) * w * (l - w);
    let transverse = 25.0 * d * l * l + 50.0 * (big_d - d) * w * l;
    (interior, crossroad, transverse)
}

/// Tight-layout populations of the L-shaped corridor parcel and the interior
/// square of one `L × L` block.
pub fn tight_parcel_populations(params: &CorridorCityParams) -> (f64, f64) {
    let (d, big_d, w, l) = params.raw();
    let corridor = HA_PER_KM2 * big_d * w * (2.0 * l - w);
    let interior = HA_PER_KM2 * d * (l - w).powi(2);
    (corridor, interior)
}

impl CorridorCityParams {
    fn raw(&self) -> (f64, f64, f64, f64) {
        (
            self.ambient_density,
            self.corridor_density,
            self.corridor_width_km,
            self.grid_spacing_km,
        )
    }
}

/// The representative parcels of one periodic tile, built from the
/// per-parcel population formulas: 2×2 squares for layouts a and b, one
/// `L × L` block for layout c. Areas in hectares.
pub fn corridor_tile_table(
    params: &CorridorCityParams,
    subdivision: CorridorSubdivision,
) -> ParcelTable {
    let (_, _, w, l) = params.raw();
    let quarter = HA_PER_KM2 * (l / 2.0).powi(2);
    let pairs = match subdivision {
        CorridorSubdivision::AlignedA => vec![(aligned_parcel_population(params), quarter); 4],
        CorridorSubdivision::OffsetB => {
            let (interior, crossroad, transverse) = offset_parcel_populations(params);
            vec![
                (interior, quarter),
                (crossroad, quarter),
                (transverse, quarter),
                (transverse, quarter),
            ]
        }
        CorridorSubdivision::TightC => {
            let (corridor, interior) = tight_parcel_populations(params);
            vec![
                (corridor, HA_PER_KM2 * w * (2.0 * l - w)),
                (interior, HA_PER_KM2 * (l - w).powi(2)),
            ]
        }
    };
    ParcelTable::from_pairs("corridor-tile", &pairs).expect("valid params give valid parcels")
}

/// PWD of [`corridor_tile_table`], the parcel-population route.
pub fn corridor_tile_pwd(params: &CorridorCityParams, subdivision: CorridorSubdivision) -> f64 {
    pwd(&corridor_tile_table(params, subdivision)).expect("tile population is positive")
}
