//! Synthetic cities in which PWD depends on where parcel boundaries fall.
//!
//! * [`growth`]: a two-parcel region whose urbanised core spreads outward at
//!   constant density while its PWD first falls and then recovers.
//! * [`perturb`]: the first-order change in PWD when a boundary between two
//!   parcels moves.
//! * [`corridor`]: a grid city with dense strips along arterial roads,
//!   parcelled three ways, in closed form.
//! * [`raster`]: the same grid city rasterised into uniform cells and
//!   aggregated back into parcels, as a check on [`corridor`].

pub mod corridor;
pub mod growth;
pub mod perturb;
pub mod raster;

pub use corridor::{
    consolidation_factor, corridor_pwd, corridor_tile_table, CorridorCityParams,
    CorridorSubdivision,
};
pub use growth::{growth_decline, growth_pwd, growth_pwd_ratio, GrowthSnapshot};
pub use perturb::{boundary_shift_delta, BoundaryShift};
pub use raster::corridor_pwd_raster;

/// Hectares per square kilometre.
pub const HA_PER_KM2: f64 = 100.0;
