//! Overall density, population-weighted density and density-weighted
//! population over a table of parcels.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::means::population_variance;
use crate::REL_TOL;

/// One land unit. Area in hectares, population in persons.
#[derive(Debug, Clone, PartialEq)]
pub struct Parcel {
    id: String,
    area: f64,
    population: f64,
}

impl Parcel {
    pub fn new(id: impl Into<String>, population: f64, area: f64) -> Result<Self> {
        let id = id.into();
        if !(area > 0.0 && area.is_finite()) {
            return Err(Error::NonPositiveArea { id, area });
        }
        if !(population >= 0.0 && population.is_finite()) {
            return Err(Error::NegativePopulation { id, population });
        }
        Ok(Parcel {
            id,
            area,
            population,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn population(&self) -> f64 {
        self.population
    }

    /// Persons per hectare.
    pub fn density(&self) -> f64 {
        self.population / self.area
    }
}

/// A non-empty set of parcels with unique ids covering one region.
#[derive(Debug, Clone, PartialEq)]
pub struct ParcelTable {
    parcels: Vec<Parcel>,
    region_id: String,
    label: Option<String>,
}

impl ParcelTable {
    pub fn new(region_id: impl Into<String>, parcels: Vec<Parcel>) -> Result<Self> {
        let region_id = region_id.into();
        if parcels.is_empty() {
            return Err(Error::EmptyTable { region: region_id });
        }
        let mut seen = HashSet::with_capacity(parcels.len());
        for parcel in &parcels {
            if !seen.insert(parcel.id.as_str()) {
                return Err(Error::DuplicateId(parcel.id.clone()));
            }
        }
        Ok(ParcelTable {
            parcels,
            region_id,
            label: None,
        })
    }

    /// Builds a table from `(population, area)` pairs with ids `"1"`, `"2"`, ...
    pub fn from_pairs(region_id: impl Into<String>, pairs: &[(f64, f64)]) -> Result<Self> {
        let parcels = pairs
            .iter()
            .enumerate()
            .map(|(k, &(population, area))| Parcel::new((k + 1).to_string(), population, area))
            .collect::<Result<Vec<_>>>()?;
        ParcelTable::new(region_id, parcels)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn parcels(&self) -> &[Parcel] {
        &self.parcels
    }

    pub fn region_id(&self) -> &str {
        &self.region_id
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.parcels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parcels.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Parcel> {
        self.parcels.iter().find(|p| p.id == id)
    }

    /// P₀.
    pub fn total_population(&self) -> f64 {
        self.parcels.iter().map(|p| p.population).sum()
    }

    /// A₀.
    pub fn total_area(&self) -> f64 {
        self.parcels.iter().map(|p| p.area).sum()
    }

    /// Area of parcels with population > 0.
    pub fn populated_area(&self) -> f64 {
        self.parcels
            .iter()
            .filter(|p| p.population > 0.0)
            .fold(0.0, |acc, p| acc + p.area)
    }

    /// A_Z, the area of parcels with zero population.
    pub fn zero_population_area(&self) -> f64 {
        self.parcels
            .iter()
            .filter(|p| p.population == 0.0)
            .fold(0.0, |acc, p| acc + p.area)
    }
}

/// `P₀ / A₀`.
pub fn overall_density(table: &ParcelTable) -> f64 {
    table.total_population() / table.total_area()
}

/// `Σ (P_k/P₀)(P_k/A_k)`. Empty parcels carry zero weight and are skipped.
pub fn pwd(table: &ParcelTable) -> Result<f64> {
    let total = table.total_population();
    if total <= 0.0 {
        return Err(Error::EmptyRegion);
    }
    let weighted: f64 = table
        .parcels
        .iter()
        .filter(|p| p.population > 0.0)
        .map(|p| p.population * p.density())
        .sum();
    Ok(weighted / total)
}

/// `Σ P_k (P_k/A_k) / reference`, with the table's own overall density as the
/// default reference. A stipulated reference lets callers evaluate relative
/// densities that no actual subdivision of the table realises.
pub fn dwp(table: &ParcelTable, reference_density: Option<f64>) -> Result<f64> {
    if table.total_population() <= 0.0 {
        return Err(Error::EmptyRegion);
    }
    let reference = match reference_density {
        Some(r) if !(r > 0.0 && r.is_finite()) => return Err(Error::NonPositiveReference(r)),
        Some(r) => r,
        None => overall_density(table),
    };
    let weighted: f64 = table
        .parcels
        .iter()
        .filter(|p| p.population > 0.0)
        .map(|p| p.population * p.density())
        .sum();
    Ok(weighted / reference)
}

/// All three measures for one table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub od: f64,
    pub pwd: f64,
    pub dwp: f64,
    /// Density gradient index, `pwd / od`.
    pub dgi: f64,
    pub n_parcels: usize,
    pub populated_area: f64,
    pub zero_pop_area: f64,
}

pub fn density_report(table: &ParcelTable) -> Result<DensityReport> {
    let pwd = pwd(table)?;
    let dwp = dwp(table, None)?;
    let od = overall_density(table);
    Ok(DensityReport {
        od,
        pwd,
        dwp,
        dgi: pwd / od,
        n_parcels: table.len(),
        populated_area: table.populated_area(),
        zero_pop_area: table.zero_population_area(),
    })
}

/// Both sides of the equal-population lower bound on `1/OD − 1/PWD`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBound {
    /// `1/OD − 1/PWD`, hectares per person.
    pub lhs: f64,
    /// `N σ_A² / (2 A_max P₀)`, hectares per person.
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the reciprocal-gap bound for tables whose parcels all hold the
/// same positive population. `σ_A²` uses divisor `N`.
pub fn pwd_gap_bound(table: &ParcelTable) -> Result<GapBound> {
    let first = table.parcels[0].population;
    if first <= 0.0 || table.parcels.iter().any(|p| p.population != first) {
        return Err(Error::UnequalPopulations);
    }
    let areas: Vec<f64> = table.parcels.iter().map(Parcel::area).collect();
    let n = areas.len() as f64;
    let max_area = areas.iter().copied().fold(f64::MIN, f64::max);
    let total_population = table.total_population();

    let lhs = overall_density(table).recip() - pwd(table)?.recip();
    let rhs = n * population_variance(&areas) / (2.0 * max_area * total_population);
    Ok(GapBound {
        lhs,
        rhs,
        holds: lhs >= rhs - REL_TOL * rhs.abs(),
    })
}
