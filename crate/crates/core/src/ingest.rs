//! CSV readers for parcel tables and longitudinal series.
//!
//! Dialect: comma separated, UTF-8, `.` as the decimal point, a header row,
//! no thousands separators. Columns are matched by header name; unknown
//! columns are kept as strings alongside the parsed rows.
//!
//! Parcel files need `parcel_id,population,area_ha` and may add `parent_id`
//! (which makes the file the fine side of a refinement) and `region_id`.
//! Series files need `year,population,area_ha` and may add `pwd_reference`.
//! A series file that also has `parcel_id` holds one full parcel table per
//! year instead of a single totals row.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::density::{overall_density, pwd, Parcel, ParcelTable};
use crate::error::{Error, Result};
use crate::numfmt::sig17;
use crate::subdivision::RefinementMap;

const DEFAULT_REGION: &str = "region";

struct Columns {
    headers: Vec<String>,
}

impl Columns {
    fn new(headers: &StringRecord) -> Self {
        Columns {
            headers: headers.iter().map(str::to_string).collect(),
        }
    }

    fn optional(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn required(&self, name: &str) -> Result<usize> {
        self.optional(name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    fn extras(&self, known: &[Option<usize>]) -> Vec<usize> {
        (0..self.headers.len())
            .filter(|i| !known.contains(&Some(*i)))
            .collect()
    }
}

fn row_error(row: usize, message: impl Into<String>) -> Error {
    Error::Row {
        row,
        message: message.into(),
    }
}

fn field<'a>(record: &'a StringRecord, index: usize, name: &str, row: usize) -> Result<&'a str> {
    match record.get(index) {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err(row_error(row, format!("empty {name}"))),
    }
}

fn number(record: &StringRecord, index: usize, name: &str, row: usize) -> Result<f64> {
    let raw = field(record, index, name, row)?;
    match raw.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(row_error(
            row,
            format!("cannot parse {name} {raw:?} as a number"),
        )),
    }
}

fn optional_number(
    record: &StringRecord,
    index: Option<usize>,
    name: &str,
    row: usize,
) -> Result<Option<f64>> {
    match index.and_then(|i| record.get(i)) {
        None | Some("") => Ok(None),
        Some(_) => number(record, index.unwrap(), name, row).map(Some),
    }
}

fn parcel(id: &str, population: f64, area: f64, row: usize) -> Result<Parcel> {
    Parcel::new(id, population, area).map_err(|e| {
        let message = match e {
            Error::NonPositiveArea { area, .. } => format!("area_ha must be positive, got {area}"),
            Error::NegativePopulation { population, .. } => {
                format!("population must be non-negative, got {population}")
            }
            other => other.to_string(),
        };
        row_error(row, message)
    })
}

fn reader<R: Read>(source: R) -> csv::Reader<R> {
    ReaderBuilder::new()
        .has_headers(true)
        .trim(Trim::All)
        .from_reader(source)
}

fn line_of(record: &StringRecord, fallback: usize) -> usize {
    record
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback)
}

/// A parcel CSV as read: the table, the optional parent mapping, and any
/// columns the reader does not interpret.
#[derive(Debug, Clone)]
pub struct ParcelFile {
    pub table: ParcelTable,
    pub parent_of: Option<BTreeMap<String, String>>,
    pub extra_columns: Vec<String>,
    /// One entry per parcel, aligned with `extra_columns`.
    pub extra_values: Vec<Vec<String>>,
}

impl ParcelFile {
    /// Pairs this (fine) file with its coarse table.
    pub fn refinement_of(&self, coarse: ParcelTable) -> Result<RefinementMap> {
        let parent_of = self
            .parent_of
            .as_ref()
            .ok_or_else(|| Error::MissingColumn("parent_id".to_string()))?;
        RefinementMap::new(self.table.clone(), coarse, parent_of.clone())
    }
}

/// Reads a parcel CSV. Errors carry the 1-based line number of the offending
/// row (the header is line 1).
pub fn read_parcels<R: Read>(source: R) -> Result<ParcelFile> {
    let mut rdr = reader(source);
    let columns = Columns::new(rdr.headers()?);
    let id_col = columns.required("parcel_id")?;
    let pop_col = columns.required("population")?;
    let area_col = columns.required("area_ha")?;
    let parent_col = columns.optional("parent_id");
    let region_col = columns.optional("region_id");
    let extra_cols = columns.extras(&[
        Some(id_col),
        Some(pop_col),
        Some(area_col),
        parent_col,
        region_col,
    ]);

    let mut parcels = Vec::new();
    let mut parents = BTreeMap::new();
    let mut extra_values = Vec::new();
    let mut region: Option<String> = None;
    let mut seen = std::collections::HashSet::new();

    for (k, record) in rdr.records().enumerate() {
        let record = record?;
        let row = line_of(&record, k + 2);
        let id = field(&record, id_col, "parcel_id", row)?.to_string();
        if !seen.insert(id.clone()) {
            return Err(row_error(row, format!("duplicate parcel_id {id}")));
        }
        let population = number(&record, pop_col, "population", row)?;
        let area = number(&record, area_col, "area_ha", row)?;
        parcels.push(parcel(&id, population, area, row)?);

        if let Some(col) = parent_col {
            let parent = field(&record, col, "parent_id", row)?;
            parents.insert(id.clone(), parent.to_string());
        }
        if let Some(col) = region_col {
            let this = field(&record, col, "region_id", row)?;
            match &region {
                None => region = Some(this.to_string()),
                Some(r) if r != this => {
                    return Err(row_error(row, format!("region_id {this} differs from {r}")))
                }
                Some(_) => {}
            }
        }
        extra_values.push(
            extra_cols
                .iter()
                .map(|&i| record.get(i).unwrap_or_default().to_string())
                .collect(),
        );
    }

    let table = ParcelTable::new(
        region.unwrap_or_else(|| DEFAULT_REGION.to_string()),
        parcels,
    )?;
    Ok(ParcelFile {
        table,
        parent_of: parent_col.map(|_| parents),
        extra_columns: extra_cols
            .iter()
            .map(|&i| columns.headers[i].clone())
            .collect(),
        extra_values,
    })
}

/// Reads a fine parcel CSV with `parent_id` and a coarse parcel CSV into a
/// [`RefinementMap`].
pub fn read_refinement<F: Read, C: Read>(fine: F, coarse: C) -> Result<RefinementMap> {
    let fine = read_parcels(fine)?;
    let coarse = read_parcels(coarse)?;
    fine.refinement_of(coarse.table)
}

/// Writes `table` as a parcel CSV with 17 significant digits, so reading it
/// back reproduces every population and area exactly.
pub fn write_parcels<W: Write>(table: &ParcelTable, sink: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record(["parcel_id", "population", "area_ha", "region_id"])?;
    for p in table.parcels() {
        wtr.write_record([
            p.id().to_string(),
            sig17(p.population()),
            sig17(p.area()),
            table.region_id().to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesData {
    /// Only `P_U` and `A_U`; supports OD but not PWD.
    Totals {
        population: f64,
        area: f64,
    },
    Table(ParcelTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub year: i64,
    pub data: SeriesData,
    /// Published PWD carried along for display; never recomputed.
    pub pwd_reference: Option<f64>,
    /// Unrecognised columns from the first source row of this year.
    pub extra: BTreeMap<String, String>,
}

impl SeriesRow {
    pub fn overall_density(&self) -> f64 {
        match &self.data {
            SeriesData::Totals { population, area } => population / area,
            SeriesData::Table(t) => overall_density(t),
        }
    }

    /// PWD for full-table rows; `None` for totals-only rows or empty tables.
    pub fn pwd(&self) -> Option<f64> {
        match &self.data {
            SeriesData::Totals { .. } => None,
            SeriesData::Table(t) => pwd(t).ok(),
        }
    }

    pub fn extra_number(&self, column: &str) -> Option<f64> {
        self.extra.get(column).and_then(|s| s.parse().ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LongitudinalSeries {
    pub label: String,
    rows: Vec<SeriesRow>,
}

impl LongitudinalSeries {
    /// Years must be strictly increasing.
    pub fn new(label: impl Into<String>, rows: Vec<SeriesRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySeries);
        }
        for (k, pair) in rows.windows(2).enumerate() {
            if pair[1].year <= pair[0].year {
                return Err(Error::NonMonotoneYears {
                    row: k + 2,
                    year: pair[1].year,
                    previous: pair[0].year,
                });
            }
        }
        Ok(LongitudinalSeries {
            label: label.into(),
            rows,
        })
    }

    pub fn rows(&self) -> &[SeriesRow] {
        &self.rows
    }

    pub fn row(&self, year: i64) -> Option<&SeriesRow> {
        self.rows.iter().find(|r| r.year == year)
    }
}

struct PendingYear {
    year: i64,
    first_line: usize,
    parcels: Vec<Parcel>,
    pwd_reference: Option<f64>,
    extra: BTreeMap<String, String>,
}

/// Reads a series CSV. Rows of one year must be contiguous and years must
/// increase down the file.
pub fn read_series<R: Read>(source: R, label: impl Into<String>) -> Result<LongitudinalSeries> {
    let mut rdr = reader(source);
    let columns = Columns::new(rdr.headers()?);
    let year_col = columns.required("year")?;
    let pop_col = columns.required("population")?;
    let area_col = columns.required("area_ha")?;
    let ref_col = columns.optional("pwd_reference");
    let id_col = columns.optional("parcel_id");
    let extra_cols = columns.extras(&[
        Some(year_col),
        Some(pop_col),
        Some(area_col),
        ref_col,
        id_col,
    ]);

    let mut rows: Vec<SeriesRow> = Vec::new();
    let mut pending: Option<PendingYear> = None;
    let mut last_year: Option<i64> = None;

    let flush = |p: PendingYear, rows: &mut Vec<SeriesRow>| -> Result<()> {
        let table = ParcelTable::new(DEFAULT_REGION, p.parcels)
            .map_err(|e| row_error(p.first_line, e.to_string()))?
            .with_label(p.year.to_string());
        rows.push(SeriesRow {
            year: p.year,
            data: SeriesData::Table(table),
            pwd_reference: p.pwd_reference,
            extra: p.extra,
        });
        Ok(())
    };

    for (k, record) in rdr.records().enumerate() {
        let record = record?;
        let row = line_of(&record, k + 2);
        let raw_year = field(&record, year_col, "year", row)?;
        let year: i64 = raw_year
            .parse()
            .map_err(|_| row_error(row, format!("cannot parse year {raw_year:?}")))?;
        let population = number(&record, pop_col, "population", row)?;
        let area = number(&record, area_col, "area_ha", row)?;
        let pwd_reference = optional_number(&record, ref_col, "pwd_reference", row)?;
        let extra: BTreeMap<String, String> = extra_cols
            .iter()
            .map(|&i| {
                (
                    columns.headers[i].clone(),
                    record.get(i).unwrap_or_default().to_string(),
                )
            })
            .collect();

        let continues_year = pending.as_ref().is_some_and(|p| p.year == year);
        if !continues_year {
            if let Some(previous) = last_year {
                if year <= previous {
                    return Err(Error::NonMonotoneYears {
                        row,
                        year,
                        previous,
                    });
                }
            }
            last_year = Some(year);
        }

        match id_col {
            None => {
                parcel("totals", population, area, row)?;
                rows.push(SeriesRow {
                    year,
                    data: SeriesData::Totals { population, area },
                    pwd_reference,
                    extra,
                });
            }
            Some(col) => {
                let id = field(&record, col, "parcel_id", row)?;
                let p = parcel(id, population, area, row)?;
                if !continues_year {
                    if let Some(done) = pending.take() {
                        flush(done, &mut rows)?;
                    }
                    pending = Some(PendingYear {
                        year,
                        first_line: row,
                        parcels: Vec::new(),
                        pwd_reference,
                        extra,
                    });
                }
                let current = pending.as_mut().expect("pending year set above");
                if current.parcels.iter().any(|q| q.id() == id) {
                    return Err(row_error(
                        row,
                        format!("duplicate parcel_id {id} in {year}"),
                    ));
                }
                current.parcels.push(p);
            }
        }
    }
    if let Some(done) = pending.take() {
        flush(done, &mut rows)?;
    }
    LongitudinalSeries::new(label, rows)
}
