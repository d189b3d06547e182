//! Plot-ready data: corridor-city parameter sweeps, the growth curve and
//! year-on-year density tables. Everything is written as long-format CSV.

use std::io::Write;

use crate::error::{Error, Result};
use crate::ingest::LongitudinalSeries;
use crate::numfmt::{sig17, sig17_opt};
use crate::scenarios::corridor::{corridor_pwd, CorridorCityParams, CorridorSubdivision};
use crate::scenarios::growth::growth_pwd_ratio;

/// Grid spacing used by sweeps, km. The swept metrics do not depend on it.
pub const SWEEP_GRID_SPACING_KM: f64 = 1.6;

/// Default `W/L` axis: 100 nodes at 0.005 spacing, so 0.125 is a node.
pub const DEFAULT_WIDTH_RANGE: (f64, f64) = (0.005, 0.5);
/// Default `D/d` axis: 100 nodes at 0.2 spacing, so 13 is a node.
pub const DEFAULT_DENSITY_RANGE: (f64, f64) = (1.0, 20.8);
pub const DEFAULT_NODES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMetric {
    /// `(PWD_b − PWD_a) / PWD_a × 100`.
    PctDiffBVsA,
    /// `PWD_c / PWD_a`.
    RatioCOverA,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub values: Vec<f64>,
}

impl Axis {
    fn linspace(name: &'static str, (lo, hi): (f64, f64), n: usize) -> Self {
        let step = (hi - lo) / (n - 1) as f64;
        let values = (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
            .collect();
        Axis { name, values }
    }

    fn nearest(&self, v: f64) -> usize {
        self.values
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - v).abs().total_cmp(&(b.1 - v).abs()))
            .map(|(i, _)| i)
            .expect("axes are never empty")
    }
}

/// Metric values on a `W/L × D/d` grid; `cells[iy][ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub cells: Vec<Vec<f64>>,
    pub metric: SweepMetric,
}

impl SweepGrid {
    /// Value at the node nearest `(w_over_l, d_over_d)`.
    pub fn value_near(&self, w_over_l: f64, d_over_d: f64) -> (f64, f64, f64) {
        let ix = self.x_axis.nearest(w_over_l);
        let iy = self.y_axis.nearest(d_over_d);
        (
            self.x_axis.values[ix],
            self.y_axis.values[iy],
            self.cells[iy][ix],
        )
    }

    /// Header `w_over_l,d_over_d_ratio,value`; `D/d` outer, `W/L` inner.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(sink);
        wtr.write_record(["w_over_l", "d_over_d_ratio", "value"])?;
        for (iy, y) in self.y_axis.values.iter().enumerate() {
            for (ix, x) in self.x_axis.values.iter().enumerate() {
                wtr.write_record([sig17(*x), sig17(*y), sig17(self.cells[iy][ix])])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// One metric at one parameter point.
pub fn corridor_metric(
    metric: SweepMetric,
    w_over_l: f64,
    d_over_d: f64,
    d_base: f64,
    l_km: f64,
) -> Result<f64> {
    let params = CorridorCityParams::from_ratios(d_over_d, w_over_l, d_base, l_km)?;
    let a = corridor_pwd(&params, CorridorSubdivision::AlignedA);
    Ok(match metric {
        SweepMetric::PctDiffBVsA => {
            (corridor_pwd(&params, CorridorSubdivision::OffsetB) - a) / a * 100.0
        }
        SweepMetric::RatioCOverA => corridor_pwd(&params, CorridorSubdivision::TightC) / a,
    })
}

/// Sweeps with the grid spacing fixed at [`SWEEP_GRID_SPACING_KM`].
pub fn sweep_corridor(
    metric: SweepMetric,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
    d_base: f64,
) -> Result<SweepGrid> {
    sweep_corridor_with_spacing(
        metric,
        x_range,
        y_range,
        nx,
        ny,
        d_base,
        SWEEP_GRID_SPACING_KM,
    )
}

pub fn sweep_corridor_with_spacing(
    metric: SweepMetric,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
    d_base: f64,
    l_km: f64,
) -> Result<SweepGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::param("nx/ny", "need at least two nodes per axis"));
    }
    let (x_lo, x_hi) = x_range;
    if !(x_lo > 0.0 && x_lo < x_hi && x_hi <= 0.5) {
        return Err(Error::param(
            "x_range",
            format!("W/L range must satisfy 0 < lo < hi <= 0.5, got [{x_lo}, {x_hi}]"),
        ));
    }
    let (y_lo, y_hi) = y_range;
    if !(y_lo >= 1.0 && y_lo < y_hi && y_hi.is_finite()) {
        return Err(Error::param(
            "y_range",
            format!("D/d range must satisfy 1 <= lo < hi, got [{y_lo}, {y_hi}]"),
        ));
    }
    let x_axis = Axis::linspace("W_over_L", x_range, nx);
    let y_axis = Axis::linspace("D_over_d", y_range, ny);
    let cells = y_axis
        .values
        .iter()
        .map(|&y| {
            x_axis
                .values
                .iter()
                .map(|&x| corridor_metric(metric, x, y, d_base, l_km))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        x_axis,
        y_axis,
        cells,
        metric,
    })
}

/// `n` evenly spaced samples of `PWD/D` for `u = A_U/A₀` from 1/2 to 1,
/// both endpoints included.
pub fn growth_curve(n_points: usize) -> Result<Vec<(f64, f64)>> {
    if n_points < 2 {
        return Err(Error::param("n_points", "need at least two points"));
    }
    Axis::linspace("u", (0.5, 1.0), n_points)
        .values
        .into_iter()
        .map(|u| growth_pwd_ratio(u).map(|r| (u, r)))
        .collect()
}

/// Header `u,pwd_over_d`.
pub fn write_growth_curve<W: Write>(curve: &[(f64, f64)], sink: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record(["u", "pwd_over_d"])?;
    for (u, r) in curve {
        wtr.write_record([sig17(*u), sig17(*r)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// `(to − from) / from × 100`.
pub fn pct_change(from: f64, to: f64) -> f64 {
    (to - from) / from * 100.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub year: i64,
    pub od: f64,
    /// Computed PWD; only rows backed by a parcel table have one.
    pub pwd: Option<f64>,
    pub od_pct_change: Option<f64>,
    pub pwd_pct_change: Option<f64>,
    /// Published PWD carried from the input, not recomputed.
    pub pwd_reference: Option<f64>,
    pub pwd_reference_pct_change: Option<f64>,
}

fn change(prev: Option<f64>, this: Option<f64>) -> Option<f64> {
    Some(pct_change(prev?, this?))
}

/// OD, PWD and their changes from the previous row.
pub fn longitudinal_report(series: &LongitudinalSeries) -> Vec<ReportRow> {
    let mut out: Vec<ReportRow> = Vec::with_capacity(series.rows().len());
    for row in series.rows() {
        let od = row.overall_density();
        let pwd = row.pwd();
        let prev = out.last();
        out.push(ReportRow {
            year: row.year,
            od,
            pwd,
            od_pct_change: prev.map(|p| pct_change(p.od, od)),
            pwd_pct_change: prev.and_then(|p| change(p.pwd, pwd)),
            pwd_reference: row.pwd_reference,
            pwd_reference_pct_change: prev.and_then(|p| change(p.pwd_reference, row.pwd_reference)),
        });
    }
    out
}

/// Header `year,od,pwd,od_pct_change,pwd_pct_change` followed by the
/// reference columns; unavailable values are empty cells.
pub fn write_longitudinal_csv<W: Write>(rows: &[ReportRow], sink: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record([
        "year",
        "od",
        "pwd",
        "od_pct_change",
        "pwd_pct_change",
        "pwd_reference",
        "pwd_reference_pct_change",
    ])?;
    for r in rows {
        wtr.write_record([
            r.year.to_string(),
            sig17(r.od),
            sig17_opt(r.pwd),
            sig17_opt(r.od_pct_change),
            sig17_opt(r.pwd_pct_change),
            sig17_opt(r.pwd_reference),
            sig17_opt(r.pwd_reference_pct_change),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::read_series;

    #[test]
    fn spot_values_at_scenario_point() {
        let pct = corridor_metric(SweepMetric::PctDiffBVsA, 0.125, 13.0, 15.0, 1.6).unwrap();
        // exact rational evaluation: 13.693647540983607 / 57.1875 * 100
        assert!((pct - 23.945176027949476).abs() < 1e-3);
        assert_eq!(pct.round(), 24.0);
        let ratio = corridor_metric(SweepMetric::RatioCOverA, 0.125, 13.0, 15.0, 1.6).unwrap();
        assert!((ratio - 2.778).abs() < 1e-3);
    }

    #[test]
    fn uniform_edge_is_neutral() {
        for x in [0.01, 0.2, 0.5] {
            assert!(
                corridor_metric(SweepMetric::PctDiffBVsA, x, 1.0, 15.0, 1.6)
                    .unwrap()
                    .abs()
                    < 1e-12
            );
            assert!(
                (corridor_metric(SweepMetric::RatioCOverA, x, 1.0, 15.0, 1.6).unwrap() - 1.0).abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn default_grid_contains_scenario_node() {
        let g = sweep_corridor(
            SweepMetric::PctDiffBVsA,
            DEFAULT_WIDTH_RANGE,
            DEFAULT_DENSITY_RANGE,
            DEFAULT_NODES,
            DEFAULT_NODES,
            15.0,
        )
        .unwrap();
        let (x, y, v) = g.value_near(0.125, 13.0);
        assert!((x - 0.125).abs() < 1e-12);
        assert!((y - 13.0).abs() < 1e-12);
        assert_eq!(v.round(), 24.0);
        assert_eq!(g.cells.len(), 100);
        assert!(g.cells.iter().all(|row| row.len() == 100));
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        let m = SweepMetric::RatioCOverA;
        assert!(sweep_corridor(m, (0.0, 0.5), (1.0, 5.0), 3, 3, 15.0).is_err());
        assert!(sweep_corridor(m, (0.1, 0.6), (1.0, 5.0), 3, 3, 15.0).is_err());
        assert!(sweep_corridor(m, (0.1, 0.5), (0.5, 5.0), 3, 3, 15.0).is_err());
        assert!(sweep_corridor(m, (0.1, 0.5), (1.0, 5.0), 1, 3, 15.0).is_err());
    }

    #[test]
    fn sweep_is_independent_of_spacing_and_base_density() {
        for metric in [SweepMetric::PctDiffBVsA, SweepMetric::RatioCOverA] {
            let a = sweep_corridor_with_spacing(metric, (0.02, 0.5), (1.0, 20.0), 7, 9, 15.0, 1.6)
                .unwrap();
            let b = sweep_corridor_with_spacing(metric, (0.02, 0.5), (1.0, 20.0), 7, 9, 3.0, 0.4)
                .unwrap();
            for (ra, rb) in a.cells.iter().zip(&b.cells) {
                for (va, vb) in ra.iter().zip(rb) {
                    assert!((va - vb).abs() <= 1e-12 * va.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn sweep_csv_layout() {
        let g =
            sweep_corridor(SweepMetric::RatioCOverA, (0.1, 0.5), (1.0, 3.0), 2, 3, 15.0).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "w_over_l,d_over_d_ratio,value");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1].starts_with("0.10000000000000001,1.0000000000000000,"));
        assert!(lines[2].starts_with("0.50000000000000000,1.0000000000000000,"));
    }

    #[test]
    fn growth_curve_shape() {
        let curve = growth_curve(11).unwrap();
        assert_eq!(curve.first().unwrap(), &(0.5, 1.0));
        assert_eq!(curve.last().unwrap(), &(1.0, 1.0));
        assert!(growth_curve(1).is_err());

        let mut buf = Vec::new();
        write_growth_curve(&curve, &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("u,pwd_over_d\n"));
    }

    #[test]
    fn report_changes() {
        let csv = "year,population,area_ha,pwd_reference\n1981,100,10,17.2\n1991,110,10,15.4\n";
        let s = read_series(csv.as_bytes(), "t").unwrap();
        let rows = longitudinal_report(&s);
        assert_eq!(rows[0].od_pct_change, None);
        assert!((rows[1].od_pct_change.unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(rows[1].pwd, None);
        assert_eq!(rows[1].pwd_pct_change, None);
        assert!(
            (rows[1].pwd_reference_pct_change.unwrap() - (15.4 - 17.2) / 17.2 * 100.0).abs()
                < 1e-12
        );

        let mut buf = Vec::new();
        write_longitudinal_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines
            .next()
            .unwrap()
            .starts_with("year,od,pwd,od_pct_change,pwd_pct_change"));
        assert_eq!(
            lines.next().unwrap(),
            "1981,10.000000000000000,,,,17.199999999999999,"
        );
    }

    #[test]
    fn single_row_report_has_no_changes() {
        let csv = "year,population,area_ha\n2011,10,1\n";
        let rows = longitudinal_report(&read_series(csv.as_bytes(), "t").unwrap());
        assert_eq!(rows.len(), 1);
        assert!(rows[0].od_pct_change.is_none() && rows[0].pwd_pct_change.is_none());
    }
}
