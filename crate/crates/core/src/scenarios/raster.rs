//! Brute-force PWD of the corridor city: rasterise one periodic tile into
//! square cells of uniform density, assign each cell to a parcel by the
//! layout's geometry, then aggregate and run [`crate::density::pwd`].
//!
//! Cell edges are required to land on every density and parcel boundary, so
//! the aggregation is exact rather than an approximation.

use std::collections::BTreeMap;

use crate::density::{pwd, ParcelTable};
use crate::error::{Error, Result};

use super::corridor::{CorridorCityParams, CorridorSubdivision};
use super::HA_PER_KM2;

const DIVISIBILITY_TOL: f64 = 1e-9;

fn cells_in(length: f64, cell: f64, name: &'static str) -> Result<usize> {
    let ratio = length / cell;
    let rounded = ratio.round();
    if rounded < 1.0 || (ratio - rounded).abs() > DIVISIBILITY_TOL * ratio {
        return Err(Error::param(
            name,
            format!("cell size {cell} km does not divide {length} km"),
        ));
    }
    Ok(rounded as usize)
}

/// Distance from `x` to the nearest arterial at an integer multiple of `l`.
fn arterial_distance(x: f64, l: f64) -> f64 {
    (x - l * (x / l).round()).abs()
}

/// Rasterised PWD. `cell_km` must divide `W/2` and `L/2`; layout b puts
/// parcel edges at `L/4` off the arterials, so it also needs `L/4`.
pub fn corridor_pwd_raster(
    params: &CorridorCityParams,
    subdivision: CorridorSubdivision,
    cell_km: f64,
) -> Result<f64> {
    if !(cell_km > 0.0 && cell_km.is_finite()) {
        return Err(Error::param(
            "cell",
            format!("must be positive, got {cell_km}"),
        ));
    }
    let w = params.corridor_width();
    let l = params.grid_spacing();
    let half_width_cells = cells_in(w / 2.0, cell_km, "cell")?;
    let half_block_cells = cells_in(l / 2.0, cell_km, "cell")?;
    if subdivision == CorridorSubdivision::OffsetB {
        cells_in(l / 4.0, cell_km, "cell")?;
    }
    let n = 2 * half_block_cells;
    let cell_area_ha = HA_PER_KM2 * cell_km * cell_km;

    // Layout c is laid out on a block starting at -W/2 so that parcel I is
    // literally the L-shaped union of the two strips through its corner.
    let origin = match subdivision {
        CorridorSubdivision::TightC => -(half_width_cells as f64) * cell_km,
        _ => 0.0,
    };

    let mut parcels: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for i in 0..n {
        let x = origin + (i as f64 + 0.5) * cell_km;
        for j in 0..n {
            let y = origin + (j as f64 + 0.5) * cell_km;
            let in_corridor =
                arterial_distance(x, l) < w / 2.0 || arterial_distance(y, l) < w / 2.0;
            let density = if in_corridor {
                params.corridor_density()
            } else {
                params.ambient_density()
            };
            let key = match subdivision {
                CorridorSubdivision::AlignedA => (i / half_block_cells, j / half_block_cells),
                CorridorSubdivision::OffsetB => {
                    let shift = half_block_cells / 2;
                    (
                        ((i + shift) % n) / half_block_cells,
                        ((j + shift) % n) / half_block_cells,
                    )
                }
                CorridorSubdivision::TightC => {
                    let corridor_cells = 2 * half_width_cells;
                    let in_l_shape = i < corridor_cells || j < corridor_cells;
                    (usize::from(!in_l_shape), 0)
                }
            };
            let entry = parcels.entry(key).or_default();
            entry.0 += density * cell_area_ha;
            entry.1 += cell_area_ha;
        }
    }

    let pairs: Vec<(f64, f64)> = parcels.into_values().collect();
    let table = ParcelTable::from_pairs("corridor-raster", &pairs)?;
    pwd(&table)
}
