//! Proper subdivisions at the bookkeeping level.
//!
//! A fine table refines a coarse one when every fine parcel has exactly one
//! parent and each parent's area and population are the sums over its
//! children. Geometry never enters: PWD depends only on `(P_k, A_k)`, so the
//! two conservation sums stand in for the set-union condition.

use std::collections::{BTreeMap, HashMap};

use rand::distributions::{Distribution, Open01};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::density::{overall_density, pwd, Parcel, ParcelTable};
use crate::error::{Error, Result};
use crate::means::harmonic_mean;
use crate::{approx_eq_rel, CONSERVATION_TOL, REL_TOL};

/// A fine table, a coarse table and the fine → coarse parent relation.
#[derive(Debug, Clone)]
pub struct RefinementMap {
    fine: ParcelTable,
    coarse: ParcelTable,
    parent_of: BTreeMap<String, String>,
}

impl RefinementMap {
    /// Checks the structure of the mapping: every fine parcel appears exactly
    /// once and points at an existing coarse parcel. Conservation of area and
    /// population is left to [`validate_refinement`].
    pub fn new<I, F, C>(fine: ParcelTable, coarse: ParcelTable, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (F, C)>,
        F: Into<String>,
        C: Into<String>,
    {
        let mut parent_of = BTreeMap::new();
        for (f, c) in pairs {
            let (f, c) = (f.into(), c.into());
            if fine.get(&f).is_none() {
                return Err(Error::UnknownFineParcel(f));
            }
            if coarse.get(&c).is_none() {
                return Err(Error::UnknownParent { fine: f, coarse: c });
            }
            if parent_of.insert(f.clone(), c).is_some() {
                return Err(Error::DoublyMappedParcel(f));
            }
        }
        if let Some(p) = fine
            .parcels()
            .iter()
            .find(|p| !parent_of.contains_key(p.id()))
        {
            return Err(Error::UnmappedParcel(p.id().to_string()));
        }
        Ok(RefinementMap {
            fine,
            coarse,
            parent_of,
        })
    }

    /// Builds the coarse table by aggregation and pairs it with `fine`.
    pub fn by_coarsening(fine: ParcelTable, parent_of: &BTreeMap<String, String>) -> Result<Self> {
        let coarse = coarsen(&fine, parent_of)?;
        RefinementMap::new(fine, coarse, parent_of.clone())
    }

    /// A table refined by itself.
    pub fn identity(table: ParcelTable) -> Self {
        let parent_of = table
            .parcels()
            .iter()
            .map(|p| (p.id().to_string(), p.id().to_string()))
            .collect();
        RefinementMap {
            fine: table.clone(),
            coarse: table,
            parent_of,
        }
    }

    pub fn fine(&self) -> &ParcelTable {
        &self.fine
    }

    pub fn coarse(&self) -> &ParcelTable {
        &self.coarse
    }

    pub fn parent_of(&self, fine_id: &str) -> Option<&str> {
        self.parent_of.get(fine_id).map(String::as_str)
    }

    pub fn mapping(&self) -> &BTreeMap<String, String> {
        &self.parent_of
    }

    /// Chains `self` (coarse ← middle) with `finer` (middle ← fine).
    pub fn compose(&self, finer: &RefinementMap) -> Result<RefinementMap> {
        let pairs = finer
            .parent_of
            .iter()
            .map(|(f, mid)| {
                self.parent_of
                    .get(mid)
                    .map(|c| (f.clone(), c.clone()))
                    .ok_or_else(|| Error::UnmappedParcel(mid.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        RefinementMap::new(finer.fine.clone(), self.coarse.clone(), pairs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Area,
    Population,
}

/// A coarse parcel whose children do not add up.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub coarse_id: String,
    pub kind: ViolationKind,
    pub expected: f64,
    pub actual: f64,
}

impl Violation {
    pub fn magnitude(&self) -> f64 {
        (self.actual - self.expected).abs()
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            ViolationKind::Area => "area",
            ViolationKind::Population => "population",
        };
        write!(
            f,
            "coarse parcel {}: {} of children {} != {} (off by {})",
            self.coarse_id,
            kind,
            self.actual,
            self.expected,
            self.magnitude()
        )
    }
}

fn child_sums(map: &RefinementMap) -> HashMap<&str, (f64, f64)> {
    let mut sums: HashMap<&str, (f64, f64)> = HashMap::new();
    for child in map.fine.parcels() {
        let parent = map.parent_of[child.id()].as_str();
        let entry = sums.entry(parent).or_default();
        entry.0 += child.area();
        entry.1 += child.population();
    }
    sums
}

/// Lists every coarse parcel whose child area or child population sum differs
/// from its own beyond a relative `1e-9`.
pub fn validate_refinement(map: &RefinementMap) -> Vec<Violation> {
    let sums = child_sums(map);
    let mut violations = Vec::new();
    for parent in map.coarse.parcels() {
        let (area, population) = sums.get(parent.id()).copied().unwrap_or_default();
        if !approx_eq_rel(area, parent.area(), CONSERVATION_TOL) {
            violations.push(Violation {
                coarse_id: parent.id().to_string(),
                kind: ViolationKind::Area,
                expected: parent.area(),
                actual: area,
            });
        }
        if !approx_eq_rel(population, parent.population(), CONSERVATION_TOL) {
            violations.push(Violation {
                coarse_id: parent.id().to_string(),
                kind: ViolationKind::Population,
                expected: parent.population(),
                actual: population,
            });
        }
    }
    violations
}

/// Aggregates `fine` into one parcel per distinct parent id, in order of
/// first appearance.
pub fn coarsen(fine: &ParcelTable, parent_of: &BTreeMap<String, String>) -> Result<ParcelTable> {
    let mut order: Vec<&str> = Vec::new();
    let mut sums: HashMap<&str, (f64, f64)> = HashMap::new();
    for child in fine.parcels() {
        let parent = parent_of
            .get(child.id())
            .ok_or_else(|| Error::UnmappedParcel(child.id().to_string()))?;
        let entry = sums.entry(parent.as_str()).or_insert_with(|| {
            order.push(parent.as_str());
            (0.0, 0.0)
        });
        entry.0 += child.population();
        entry.1 += child.area();
    }
    let parcels = order
        .into_iter()
        .map(|id| {
            let (population, area) = sums[id];
            Parcel::new(id, population, area)
        })
        .collect::<Result<Vec<_>>>()?;
    ParcelTable::new(fine.region_id(), parcels)
}

/// Outcome of comparing PWD across a refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monotonicity {
    pub pwd_fine: f64,
    pub pwd_coarse: f64,
    /// `pwd_fine ≥ pwd_coarse` up to a relative `1e-12`.
    pub holds: bool,
    /// `|pwd_fine − pwd_coarse| ≤ 1e-12 · pwd_coarse`.
    pub equality: bool,
    /// Every child has its parent's density within a relative `1e-9`.
    pub densities_match: bool,
}

pub fn check_monotonicity(map: &RefinementMap) -> Result<Monotonicity> {
    let violations = validate_refinement(map);
    if !violations.is_empty() {
        return Err(Error::RefinementViolations {
            count: violations.len(),
        });
    }
    let pwd_fine = pwd(&map.fine)?;
    let pwd_coarse = pwd(&map.coarse)?;
    let densities_match = map.fine.parcels().iter().all(|child| {
        let parent = map
            .coarse
            .get(&map.parent_of[child.id()])
            .expect("parent checked at construction");
        approx_eq_rel(child.density(), parent.density(), CONSERVATION_TOL)
    });
    Ok(Monotonicity {
        pwd_fine,
        pwd_coarse,
        holds: pwd_fine >= pwd_coarse - REL_TOL * pwd_coarse,
        equality: (pwd_fine - pwd_coarse).abs() <= REL_TOL * pwd_coarse,
        densities_match,
    })
}

/// PWD of `N` parcels that each hold `P₀/N` persons: `P₀ / (N · A_H)`.
pub fn pwd_of_equal_population_subdivision(areas: &[f64], total_population: f64) -> Result<f64> {
    if !(total_population > 0.0 && total_population.is_finite()) {
        return Err(Error::EmptyRegion);
    }
    let harmonic = harmonic_mean(areas)?;
    Ok(total_population / (areas.len() as f64 * harmonic))
}

/// How a random refinement distributes each parent's population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopulationSplit {
    /// An independent simplex draw, so child densities differ.
    Independent,
    /// In proportion to child area, so every child keeps its parent's density.
    Proportional,
}

fn simplex_point<R: Rng + ?Sized>(rng: &mut R, parts: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..parts)
        .map(|_| {
            let u: f64 = Open01.sample(rng);
            -u.ln()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Splits each parcel of `coarse` into `1..=max_parts` children. Area shares
/// come from a uniform simplex point; draws that leave a child with no area
/// are redrawn.
pub fn random_refinement_with_rng<R: Rng + ?Sized>(
    coarse: &ParcelTable,
    max_parts: usize,
    split: PopulationSplit,
    rng: &mut R,
) -> Result<RefinementMap> {
    if max_parts == 0 {
        return Err(Error::param("max_parts", "must be at least 1"));
    }
    let mut children = Vec::new();
    let mut pairs = Vec::new();
    for parent in coarse.parcels() {
        let parts = rng.gen_range(1..=max_parts);
        let area_shares = loop {
            let shares = simplex_point(rng, parts);
            if shares.iter().all(|&s| s * parent.area() > 0.0) {
                break shares;
            }
        };
        let population_shares = match split {
            PopulationSplit::Independent => simplex_point(rng, parts),
            PopulationSplit::Proportional => area_shares.clone(),
        };
        for (k, (a, p)) in area_shares.iter().zip(&population_shares).enumerate() {
            let id = format!("{}.{}", parent.id(), k + 1);
            children.push(Parcel::new(
                id.clone(),
                p * parent.population(),
                a * parent.area(),
            )?);
            pairs.push((id, parent.id().to_string()));
        }
    }
    let fine = ParcelTable::new(coarse.region_id(), children)?;
    RefinementMap::new(fine, coarse.clone(), pairs)
}

/// Seeded variant of [`random_refinement_with_rng`]; the same seed always
/// yields the same refinement.
pub fn random_refinement(
    coarse: &ParcelTable,
    max_parts: usize,
    split: PopulationSplit,
    seed: u64,
) -> Result<RefinementMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_refinement_with_rng(coarse, max_parts, split, &mut rng)
}

/// OD of the fine and coarse tables of a valid refinement agree.
pub fn overall_density_preserved(map: &RefinementMap) -> bool {
    approx_eq_rel(
        overall_density(&map.fine),
        overall_density(&map.coarse),
        REL_TOL,
    )
}
