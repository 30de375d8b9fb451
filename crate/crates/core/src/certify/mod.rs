//! Certified upper bounds for `A(w, q)` and the derived quantities on compact
//! regions of the `(w, q)` quadrant, with interval arithmetic and adaptive
//! bisection.
//!
//! Unbounded directions go through reciprocal charts `r = 1/q` and `v = 1/w`,
//! so every region is a rectangle with finite bounds. A region is tiled by the
//! initial mesh; cells whose bound exceeds the threshold are bisected until
//! they pass, a point value proves the threshold false, or the budget runs out.

pub mod dd;
pub mod formulas;
pub mod interval;
pub mod monotone;
pub mod real;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions;
use crate::error::{param, Error, Result};
use formulas::{mean_value, natural, Formula};
use interval::Interval;
use monotone::{a_by_factors, a_by_primitives, column, verify_monotone_claims, ClaimReport, Column, Flags};

pub use dd::DdInterval;
pub use real::{Dual, Real};

/// Default number of refinement evaluations per region.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Columns processed per parallel batch.
const BATCH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// `(w, q)`
    WQ,
    /// `(w, r = 1/q)`
    WR,
    /// `(v = 1/w, q)`
    VQ,
    /// `(v, r)`
    VR,
}

impl Chart {
    /// Chart coordinates to `(w, q)`; reciprocals of 0 are `+∞`.
    pub fn to_wq(self, x: f64, y: f64) -> (f64, f64) {
        let inv = |t: f64| if t == 0.0 { f64::INFINITY } else { 1.0 / t };
        match self {
            Chart::WQ => (x, y),
            Chart::WR => (x, inv(y)),
            Chart::VQ => (inv(x), y),
            Chart::VR => (inv(x), inv(y)),
        }
    }

    pub fn axis_names(self) -> [&'static str; 2] {
        match self {
            Chart::WQ => ["w", "q"],
            Chart::WR => ["w", "r"],
            Chart::VQ => ["v", "q"],
            Chart::VR => ["v", "r"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// `A(w, q)`
    A,
    /// `∂A(w, 1/r)/∂r`
    #[serde(rename = "dr_A")]
    DrA,
    /// `d²A(w, ∞)/dw²`
    #[serde(rename = "A_inf_dd")]
    AInfDd,
}

/// A rectangle in chart coordinates with its initial mesh and threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub name: String,
    pub chart: Chart,
    pub quantity: Quantity,
    pub x_bounds: [f64; 2],
    pub y_bounds: [f64; 2],
    pub steps: [f64; 2],
    pub threshold: f64,
    /// Re-evaluate failing cells with double-double intervals before bisecting.
    #[serde(default)]
    pub extended_precision: bool,
}

/// Names accepted by [`RegionSpec::preset`].
pub const PRESET_NAMES: [&str; 10] = ["R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "Ainf"];

impl RegionSpec {
    #[allow(clippy::too_many_arguments)]
    fn make(name: &str, chart: Chart, quantity: Quantity, x: [f64; 2], y: [f64; 2], steps: [f64; 2], threshold: f64) -> Self {
        RegionSpec {
            name: name.to_string(),
            chart,
            quantity,
            x_bounds: x,
            y_bounds: y,
            steps,
            threshold,
            extended_precision: false,
        }
    }

    /// The regions of the two master certificates with their initial meshes.
    ///
    /// `Ainf` is the concavity sweep of `A(w, ∞)` on `[1, 4]`; its threshold is
    /// 0 (concavity), not a tabulated bound.
    pub fn preset(name: &str) -> Result<RegionSpec> {
        use Chart::*;
        use Quantity::*;
        let spec = match name {
            "R1" => Self::make(name, WQ, A, [0.0, 6.0], [0.0, 1.0], [6e-2, 1e-1], 0.51),
            "R2" => Self::make(name, WR, A, [0.0, 1.0], [0.0, 1.0], [1e-2, 1e-2], 0.617),
            "R3" => Self::make(name, WR, DrA, [1.0, 4.0], [0.0, 1.0], [5e-3, 1e-3], -0.08),
            "R4" => Self::make(name, VQ, A, [0.0, (1.0f64 / 6.0).next_up()], [0.0, 1.0], [2e-2, 1e-1], 0.50),
            "R5" => Self::make(name, VR, A, [0.0, 0.25], [0.0, 1.0], [2e-3, 1e-2], 0.605),
            "R6" => Self::make(name, WQ, A, [0.0, 3.0], [0.0, 1.36], [3e-3, 1.36e-3], 0.498),
            "R7" => Self::make(name, WQ, A, [3.0, 5.0], [0.0, 1.3], [2e-3, 1.3e-3], 0.498),
            "R8" => RegionSpec {
                extended_precision: true,
                ..Self::make(name, WQ, A, [3.0, 5.0], [1.3, 1.36], [2e-4, 6e-6], 0.49996)
            },
            "R9" => Self::make(name, VQ, A, [0.0, 0.2f64.next_up()], [0.0, 1.36], [2e-3, 1.36e-2], 0.4992),
            "Ainf" => Self::make(name, WQ, AInfDd, [1.0, 4.0], [0.0, 0.0], [3e-3, 1.0], 0.0),
            _ => return Err(param(format!("unknown region {name:?}; expected one of {PRESET_NAMES:?}"))),
        };
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |b: [f64; 2]| b[0].is_finite() && b[1].is_finite() && b[0] <= b[1];
        if !finite(self.x_bounds) || !finite(self.y_bounds) {
            return Err(param("region bounds must be finite with lo <= hi"));
        }
        if self.x_bounds[0] < 0.0 || self.y_bounds[0] < 0.0 {
            return Err(param("chart coordinates are nonnegative"));
        }
        if !(self.steps[0] > 0.0 && self.steps[1] > 0.0) || !self.steps.iter().all(|s| s.is_finite()) {
            return Err(param("mesh steps must be positive"));
        }
        if !self.threshold.is_finite() {
            return Err(param("threshold must be finite"));
        }
        match (self.quantity, self.chart) {
            (Quantity::DrA, Chart::WR) | (Quantity::AInfDd, Chart::WQ) | (Quantity::A, _) => {}
            _ => return Err(param("dr_A needs the (w, r) chart and A_inf_dd the w axis")),
        }
        if self.quantity == Quantity::AInfDd && !(self.x_bounds[0] > 0.0) {
            return Err(param("A_inf_dd needs w > 0"));
        }
        if self.quantity == Quantity::DrA && !(self.x_bounds[0] > 0.0) {
            return Err(param("dr_A needs w > 0"));
        }
        Ok(())
    }

    pub fn formula(&self) -> Formula {
        match (self.quantity, self.chart) {
            (Quantity::A, Chart::WQ) => Formula::AWq,
            (Quantity::A, Chart::WR) => Formula::AWr,
            (Quantity::A, Chart::VQ) => Formula::AVq,
            (Quantity::A, Chart::VR) => Formula::AVr,
            (Quantity::DrA, _) => Formula::DrAWr,
            (Quantity::AInfDd, _) => Formula::AInfDd,
        }
    }

    /// Mesh edges along each axis; the last edge is the upper bound exactly.
    pub fn edges(&self) -> (Vec<f64>, Vec<f64>) {
        (edges(self.x_bounds, self.steps[0]), edges(self.y_bounds, self.steps[1]))
    }

    pub fn num_cells(&self) -> u64 {
        let (x, y) = self.edges();
        (x.len() as u64 - 1) * (y.len() as u64 - 1)
    }
}

fn edges(b: [f64; 2], step: f64) -> Vec<f64> {
    let n = (((b[1] - b[0]) / step) - 1e-6).ceil().max(1.0) as usize;
    let mut e: Vec<f64> = (0..n).map(|i| b[0] + i as f64 * step).collect();
    e.push(b[1]);
    e
}

/// A closed rectangle `[x0, x1] × [y0, y1]` in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Cell {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x0 <= x1 && y0 <= y1, "invalid cell");
        Cell { x0, x1, y0, y1 }
    }

    pub fn x(&self) -> Interval {
        Interval::new(self.x0, self.x1)
    }

    pub fn y(&self) -> Interval {
        Interval::new(self.y0, self.y1)
    }

    fn midpoint(&self) -> (f64, f64) {
        (self.x().mid(), self.y().mid())
    }

    /// Halves along the longer edge, lengths measured in units of `steps`.
    fn split(&self, steps: [f64; 2]) -> Option<(Cell, Cell)> {
        let (xm, ym) = self.midpoint();
        let rx = (self.x1 - self.x0) / steps[0];
        let ry = (self.y1 - self.y0) / steps[1];
        let split_x = |c: &Cell| (xm > c.x0 && xm < c.x1).then_some((Cell { x1: xm, ..*c }, Cell { x0: xm, ..*c }));
        let split_y = |c: &Cell| (ym > c.y0 && ym < c.y1).then_some((Cell { y1: ym, ..*c }, Cell { y0: ym, ..*c }));
        if rx >= ry {
            split_x(self).or_else(|| split_y(self))
        } else {
            split_y(self).or_else(|| split_x(self))
        }
    }
}

/// Per-cell evaluation for one region.
pub struct CellEvaluator {
    chart: Chart,
    quantity: Quantity,
    formula: Formula,
    flags: Flags,
}

impl CellEvaluator {
    pub fn new(chart: Chart, quantity: Quantity, flags: Flags) -> Self {
        let formula = RegionSpec {
            name: String::new(),
            chart,
            quantity,
            x_bounds: [0.0; 2],
            y_bounds: [0.0; 2],
            steps: [1.0; 2],
            threshold: 0.0,
            extended_precision: false,
        }
        .formula();
        CellEvaluator { chart, quantity, formula, flags }
    }

    pub fn column(&self, x: Interval) -> Column {
        column(self.chart, self.quantity, x, &self.flags)
    }

    /// The inexpensive strategy: monotone building blocks for `A`, the direct
    /// interval extension otherwise.
    pub fn cheap(&self, col: &Column, cell: &Cell) -> Interval {
        match self.quantity {
            Quantity::A => a_by_primitives(self.chart, col, cell, &self.flags),
            _ => natural::<Interval>(self.formula, cell.x(), cell.y()),
        }
    }

    /// Intersection of all `f64` strategies.
    pub fn tight(&self, col: &Column, cell: &Cell) -> Interval {
        let mut parts = vec![self.cheap(col, cell), mean_value::<Interval>(self.formula, cell.x(), cell.y())];
        if self.quantity == Quantity::A {
            if self.chart == Chart::WQ {
                parts.push(a_by_factors(cell.x(), cell.y(), &self.flags));
            }
            parts.push(natural::<Interval>(self.formula, cell.x(), cell.y()));
        }
        Interval::intersect_all(&parts)
    }

    /// Mean-value form in double-double.
    pub fn extended(&self, cell: &Cell) -> Interval {
        mean_value::<DdInterval>(self.formula, cell.x(), cell.y())
    }

    /// Enclosure of the quantity at the cell midpoint.
    pub fn at_midpoint(&self, cell: &Cell) -> Interval {
        let (x, y) = cell.midpoint();
        natural::<Interval>(self.formula, Interval::point(x), Interval::point(y))
    }
}

/// Enclosure of `A` over a cell, with the monotone claims checked on the cell.
pub fn interval_a(chart: Chart, cell: &Cell) -> Interval {
    let spec = RegionSpec {
        name: "cell".into(),
        chart,
        quantity: Quantity::A,
        x_bounds: [cell.x0, cell.x1],
        y_bounds: [cell.y0, cell.y1],
        steps: [1.0, 1.0],
        threshold: 0.0,
        extended_precision: false,
    };
    let (_, flags) = verify_monotone_claims(&spec);
    interval_a_with(chart, cell, &flags)
}

/// Enclosure of `A` over a cell using the given certified flags.
pub fn interval_a_with(chart: Chart, cell: &Cell, flags: &Flags) -> Interval {
    let ev = CellEvaluator::new(chart, Quantity::A, *flags);
    ev.tight(&ev.column(cell.x()), cell)
}

/// Enclosure of `∂A(w, 1/r)/∂r` over a `(w, r)` cell with `w > 0`.
pub fn bound_dr_a(cell: &Cell) -> Interval {
    let ev = CellEvaluator::new(Chart::WR, Quantity::DrA, Flags::none());
    ev.tight(&Column::None, cell)
}

/// Enclosure of `d²A(w, ∞)/dw²` over `[w0, w1]`, `w0 > 0`.
pub fn bound_ainf_dd(w0: f64, w1: f64) -> Interval {
    let ev = CellEvaluator::new(Chart::WQ, Quantity::AInfDd, Flags::none());
    ev.tight(&Column::None, &Cell::new(w0, w1, 0.0, 0.0))
}

/// One row of the optional per-cell dump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellRecord {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub lo: f64,
    pub hi: f64,
    /// 0 = initial mesh, 1 = refined, 2 = extended precision.
    pub stage: u8,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Refinement evaluations allowed after the initial sweep.
    pub budget: u64,
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
    /// Record wall time in certificates.
    pub record_time: bool,
    /// Multiplies the thresholds of the `A` regions in the master runs.
    pub threshold_scale: f64,
    /// Multiplies all initial mesh steps in the master runs.
    pub step_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budget: DEFAULT_BUDGET, threads: None, record_time: true, threshold_scale: 1.0, step_scale: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub region: String,
    pub chart: Chart,
    pub quantity: Quantity,
    pub x_bounds: [f64; 2],
    pub y_bounds: [f64; 2],
    pub steps: [f64; 2],
    /// Cells of the initial mesh.
    pub cells_total: u64,
    /// Initial cells that needed bisection.
    pub cells_refined: u64,
    /// Sub-cells evaluated during bisection.
    pub subcells_evaluated: u64,
    /// Cells settled by the double-double fallback.
    pub cells_extended: u64,
    /// Certified upper bound of the quantity over the region.
    pub sup_bound: f64,
    pub threshold: f64,
    pub pass: bool,
    /// First failing cell `[x0, x1, y0, y1]`, if any.
    pub witness: Option<[f64; 4]>,
    pub monotone_claims: Vec<ClaimReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

struct ColumnOutcome {
    max_hi: f64,
    pending: Vec<Cell>,
    definite_fail: Option<Cell>,
    extended: u64,
    records: Vec<CellRecord>,
}

fn sweep_column(ev: &CellEvaluator, spec: &RegionSpec, x0: f64, x1: f64, ys: &[f64], keep: bool) -> ColumnOutcome {
    let thr = spec.threshold;
    let col = ev.column(Interval::new(x0, x1));
    let mut out = ColumnOutcome { max_hi: f64::NEG_INFINITY, pending: Vec::new(), definite_fail: None, extended: 0, records: Vec::new() };
    for j in 0..ys.len() - 1 {
        let cell = Cell { x0, x1, y0: ys[j], y1: ys[j + 1] };
        let mut b = ev.cheap(&col, &cell);
        let mut stage = 0;
        if !(b.hi <= thr) {
            b = ev.tight(&col, &cell);
        }
        if !(b.hi <= thr) && spec.extended_precision {
            let e = ev.extended(&cell);
            if e.hi <= thr {
                b = Interval::intersect_all(&[b, e]);
                out.extended += 1;
                stage = 2;
            }
        }
        let pass = b.hi <= thr;
        if pass {
            out.max_hi = out.max_hi.max(b.hi);
        } else if out.definite_fail.is_none() && ev.at_midpoint(&cell).lo > thr {
            out.definite_fail = Some(cell);
        } else {
            out.pending.push(cell);
        }
        if keep {
            out.records.push(CellRecord { x0, x1, y0: cell.y0, y1: cell.y1, lo: b.lo, hi: b.hi, stage, pass });
        }
    }
    out
}

fn run_in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Certifies `sup quantity ≤ threshold` over the region.
pub fn verify_region(spec: &RegionSpec, opts: &VerifyOptions) -> Result<Certificate> {
    verify_region_with_dump(spec, opts, None)
}

/// As [`verify_region`], streaming every evaluated cell to `dump`.
pub fn verify_region_with_dump(spec: &RegionSpec, opts: &VerifyOptions, mut dump: Option<&mut dyn FnMut(&CellRecord)>) -> Result<Certificate> {
    spec.validate()?;
    let start = Instant::now();
    let (claims, flags) = verify_monotone_claims(spec);
    let ev = CellEvaluator::new(spec.chart, spec.quantity, flags);
    let (xs, ys) = spec.edges();
    let keep = dump.is_some();
    let thr = spec.threshold;

    let mut max_hi = f64::NEG_INFINITY;
    let mut pending: Vec<Cell> = Vec::new();
    let mut definite_fail: Option<Cell> = None;
    let mut extended = 0u64;
    let ncols = xs.len() - 1;
    let mut c0 = 0;
    while c0 < ncols {
        let c1 = (c0 + BATCH).min(ncols);
        let outcomes: Vec<ColumnOutcome> = run_in_pool(opts.threads, || {
            (c0..c1).into_par_iter().map(|i| sweep_column(&ev, spec, xs[i], xs[i + 1], &ys, keep)).collect()
        })?;
        for o in outcomes {
            max_hi = max_hi.max(o.max_hi);
            pending.extend(o.pending);
            extended += o.extended;
            if definite_fail.is_none() {
                definite_fail = o.definite_fail;
            }
            if let Some(d) = dump.as_mut() {
                for r in &o.records {
                    d(r);
                }
            }
        }
        c0 = c1;
    }

    let cells_refined = pending.len() as u64;
    let mut evaluated = 0u64;
    let mut witness = definite_fail;
    if witness.is_none() {
        'outer: for cell in &pending {
            let mut stack = vec![*cell];
            while let Some(c) = stack.pop() {
                let col = ev.column(c.x());
                let mut b = ev.tight(&col, &c);
                evaluated += 1;
                let mut stage = 1;
                if !(b.hi <= thr) && spec.extended_precision {
                    let e = ev.extended(&c);
                    if e.hi <= thr {
                        b = Interval::intersect_all(&[b, e]);
                        extended += 1;
                        stage = 2;
                    }
                }
                let pass = b.hi <= thr;
                if let Some(d) = dump.as_mut() {
                    d(&CellRecord { x0: c.x0, x1: c.x1, y0: c.y0, y1: c.y1, lo: b.lo, hi: b.hi, stage, pass });
                }
                if pass {
                    max_hi = max_hi.max(b.hi);
                    continue;
                }
                let split = if evaluated < opts.budget && !(ev.at_midpoint(&c).lo > thr) { c.split(spec.steps) } else { None };
                match split {
                    Some((a, b2)) => {
                        stack.push(b2);
                        stack.push(a);
                    }
                    None => {
                        witness = Some(c);
                        max_hi = max_hi.max(if b.is_nai() { f64::INFINITY } else { b.hi });
                        break 'outer;
                    }
                }
            }
        }
    } else if let Some(c) = witness {
        let b = ev.tight(&ev.column(c.x()), &c);
        max_hi = max_hi.max(if b.is_nai() { f64::INFINITY } else { b.hi });
    }

    let pass = witness.is_none() && max_hi <= thr;
    Ok(Certificate {
        region: spec.name.clone(),
        chart: spec.chart,
        quantity: spec.quantity,
        x_bounds: spec.x_bounds,
        y_bounds: spec.y_bounds,
        steps: spec.steps,
        cells_total: ((xs.len() - 1) * (ys.len() - 1)) as u64,
        cells_refined,
        subcells_evaluated: evaluated,
        cells_extended: extended,
        sup_bound: max_hi,
        threshold: thr,
        pass,
        witness: witness.map(|c| [c.x0, c.x1, c.y0, c.y1]),
        monotone_claims: claims,
        wall_time: opts.record_time.then(|| start.elapsed().as_secs_f64()),
    })
}

/// Result of the search for the maximum of `A(w, ∞)` on `[1, 4]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AInfMax {
    pub w_star: f64,
    pub value: f64,
    pub certified_concave: bool,
    /// Certified upper bound of `max A(w, ∞)` over `[1, 4]`.
    pub value_upper_bound: f64,
    /// Interval on which `dA(w, ∞)/dw` is certified to change sign.
    pub bracket: [f64; 2],
    pub concavity: Certificate,
}

fn a_inf_d1_interval(w: f64) -> Interval {
    let c = Interval::point;
    let x = c(w);
    let l = x.ln_1p();
    c(-0.5) * ((c(1.0) + x).recip() + c(3.0) / (x * (c(1.0) + x)) - c(3.0) * l / x.sqr())
}

fn a_inf_interval(w: Interval) -> Interval {
    let c = Interval::point;
    let l = w.ln_1p();
    let nat = c(2.0) - c(0.5) * (l + c(3.0) * l / w);
    // A(w, ∞) = (β + γ)/2 in the monotone building blocks
    let (beta, gamma) = monotone::beta_gamma(w, &Flags::all());
    let prim = (beta + gamma) * c(0.5);
    Interval::intersect_all(&[nat, prim])
}

/// Maximizes `A(w, ∞)` on `[1, 4]` after certifying its concavity there.
pub fn maximize_a_inf(opts: &VerifyOptions) -> Result<AInfMax> {
    let spec = RegionSpec::preset("Ainf")?;
    let concavity = verify_region(&spec, opts)?;
    if !concavity.pass {
        return Err(Error::Certification(format!(
            "concavity of A(w, inf) on [1, 4] not certified (bound {})",
            concavity.sup_bound
        )));
    }
    let (g, _) = conditions::golden_max(conditions::a_inf, 1.0, 4.0, 1e-9);
    // refine on the sign of the derivative
    let (mut lo, mut hi) = (g - 1e-6, g + 1e-6);
    if !(conditions::a_inf_d1(lo) > 0.0 && conditions::a_inf_d1(hi) < 0.0) {
        lo = 1.0;
        hi = 4.0;
    }
    while hi - lo > 1e-12 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if conditions::a_inf_d1(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let w_star = 0.5 * (lo + hi);
    let value = conditions::a_inf(w_star);

    // certified bracket: derivative enclosures of strict opposite signs
    let mut delta = 1e-10;
    let bracket = loop {
        let (a, b) = (w_star - delta, w_star + delta);
        if a_inf_d1_interval(a).lo > 0.0 && a_inf_d1_interval(b).hi < 0.0 {
            break [a, b];
        }
        delta *= 2.0;
        if delta > 1.0 {
            return Err(Error::Certification("could not bracket the maximizer of A(w, inf)".into()));
        }
    };
    let value_upper_bound = a_inf_interval(Interval::new(bracket[0], bracket[1])).hi;
    Ok(AInfMax { w_star, value, certified_concave: true, value_upper_bound, bracket, concavity })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MasterCertificate {
    pub name: String,
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_inf_max: Option<AInfMax>,
    /// Largest certified bound of `A` over all regions.
    pub overall_bound: f64,
    pub threshold: f64,
    pub pass: bool,
    /// First region that did not certify.
    pub failing: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl MasterCertificate {
    pub fn get(&self, region: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.region == region)
    }
}

fn scaled(name: &str, opts: &VerifyOptions) -> Result<RegionSpec> {
    let mut spec = RegionSpec::preset(name)?;
    if spec.quantity == Quantity::A {
        spec.threshold *= opts.threshold_scale;
    }
    spec.steps = [spec.steps[0] * opts.step_scale, spec.steps[1] * opts.step_scale];
    Ok(spec)
}

fn assemble(name: &str, certs: Vec<Certificate>, a_inf_max: Option<AInfMax>, threshold: f64, start: Instant, opts: &VerifyOptions) -> MasterCertificate {
    let overall_bound = certs.iter().filter(|c| c.quantity == Quantity::A).map(|c| c.sup_bound).fold(f64::NEG_INFINITY, f64::max);
    let failing = certs.iter().find(|c| !c.pass).map(|c| c.region.clone());
    let pass = failing.is_none() && overall_bound <= threshold;
    MasterCertificate {
        name: name.to_string(),
        certificates: certs,
        a_inf_max,
        overall_bound,
        threshold,
        pass,
        failing: if pass { None } else { failing.or_else(|| Some("overall".into())) },
        wall_time: opts.record_time.then(|| start.elapsed().as_secs_f64()),
    }
}

/// `sup_{q ≥ 0} sup_{w > 0} A(w, q) ≤ 0.63`.
///
/// Regions R1, R2, R4, R5 are bounded directly. On R3 (`w ∈ [1, 4]`, `q ≥ 1`)
/// `A` decreases in `r = 1/q`, so its maximum is `max A(w, ∞)`, which is
/// bounded through the concavity certificate and a certified bracket around
/// the maximizer.
pub fn verify_calc(opts: &VerifyOptions) -> Result<MasterCertificate> {
    let start = Instant::now();
    let mut certs = Vec::new();
    for name in ["R1", "R2", "R4", "R5", "R3"] {
        certs.push(verify_region(&scaled(name, opts)?, opts)?);
    }
    let max = match maximize_a_inf(opts) {
        Ok(m) => m,
        Err(Error::Certification(_)) => {
            let conc = verify_region(&RegionSpec::preset("Ainf")?, opts)?;
            certs.push(conc);
            return Ok(assemble("calc", certs, None, 0.63, start, opts));
        }
        Err(e) => return Err(e),
    };
    certs.push(max.concavity.clone());
    let thr = 0.6272 * opts.threshold_scale;
    certs.push(Certificate {
        region: "R3max".into(),
        chart: Chart::WR,
        quantity: Quantity::A,
        x_bounds: [1.0, 4.0],
        y_bounds: [0.0, 1.0],
        steps: [max.bracket[1] - max.bracket[0], 1.0],
        cells_total: 1,
        cells_refined: 0,
        subcells_evaluated: 0,
        cells_extended: 0,
        sup_bound: max.value_upper_bound,
        threshold: thr,
        pass: max.value_upper_bound <= thr,
        witness: None,
        monotone_claims: Vec::new(),
        wall_time: None,
    });
    Ok(assemble("calc", certs, Some(max), 0.63, start, opts))
}

/// `sup_{0 ≤ q ≤ 1.36} sup_{w > 0} A(w, q) ≤ 0.5` over R6–R9.
pub fn verify_calc_half(opts: &VerifyOptions) -> Result<MasterCertificate> {
    let start = Instant::now();
    let mut certs = Vec::new();
    for name in ["R6", "R7", "R8", "R9"] {
        certs.push(verify_region(&scaled(name, opts)?, opts)?);
    }
    Ok(assemble("calc_half", certs, None, 0.5, start, opts))
}
