//! Shared field/Kloosterman tables and the single-case pipeline.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use anyhow::Result;
use serde_json::{json, Value};

use hasse_core::cyclo::CycInt;
use hasse_core::dwork::{hasse_closed_full, hasse_closed_le1, nondegenerate};
use hasse_core::expsum::{FamilySpec, FamilySummer, KloTable};
use hasse_core::ff::{ExtensionField, FFElem};
use hasse_core::lfun::{
    coeffs_from_power_sums, functional_equation_check, newton_polygon, purity_deviation,
    symmetry_complete, vertex_coincidence, BreakVerdict, LPolyCoeffs,
};
use hasse_core::polygon::Polygon;
use hasse_core::polytope::{family_break_points, family_hodge_polygon};
use hasse_core::Budget;

use crate::digits::format_elem;

pub struct FieldCtx {
    pub ext: ExtensionField,
    pub table: KloTable,
}

/// Builds each (p, a, k) table once; optionally persists them in a cache dir.
pub struct Engine {
    budget: Budget,
    cache_dir: Option<PathBuf>,
    tables: Mutex<HashMap<(u32, u32, u32), Arc<FieldCtx>>>,
}

impl Engine {
    pub fn new(budget: Budget, cache_dir: Option<PathBuf>) -> Self {
        Engine {
            budget,
            cache_dir,
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn ctx(&self, p: u32, a: u32, k: u32) -> Result<Arc<FieldCtx>> {
        let mut tables = self.tables.lock().expect("table lock");
        if let Some(c) = tables.get(&(p, a, k)) {
            return Ok(c.clone());
        }
        let ext = ExtensionField::new(p, a, k, &self.budget)?;
        if let Some(dir) = &self.cache_dir {
            std::fs::create_dir_all(dir)?;
        }
        let table = KloTable::cached(&ext, self.cache_dir.as_deref(), &self.budget)?;
        let c = Arc::new(FieldCtx { ext, table });
        tables.insert((p, a, k), c.clone());
        Ok(c)
    }

    /// Drops every cached table of extension degree >= k_min.
    pub fn release_from(&self, k_min: u32) {
        self.tables
            .lock()
            .expect("table lock")
            .retain(|&(_, _, k), _| k < k_min);
    }

    /// S*_1..S*_kmax through the Kloosterman tables.
    pub fn power_sums(&self, spec: &FamilySpec, kmax: u32) -> Result<Vec<CycInt>> {
        (1..=kmax)
            .map(|k| {
                let c = self.ctx(spec.p(), spec.a(), k)?;
                Ok(FamilySummer::new(&c.ext, &c.table).sum(spec)?)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CaseOptions {
    pub kmax: Option<u32>,
    pub full_degree: bool,
}

/// Largest Hodge break point at or below d/2: enough for the direct side
/// when the rest comes from symmetry.
pub fn default_kmax(n: usize) -> u32 {
    let half = 1usize << n;
    family_break_points(n)
        .into_iter()
        .filter(|&b| b <= half)
        .max()
        .unwrap_or(1) as u32
}

impl CaseOptions {
    pub fn effective_kmax(&self, n: usize) -> u32 {
        let d = 1u32 << (n + 1);
        if self.full_degree {
            d
        } else {
            self.kmax.unwrap_or_else(|| default_kmax(n)).clamp(1, d)
        }
    }
}

#[derive(Clone, Debug)]
pub struct HasseReport {
    pub spec: FamilySpec,
    pub nondegenerate: bool,
    pub h_le1: FFElem,
    pub h_full: Option<FFElem>,
    pub kmax: u32,
    pub breakpoints: Vec<BreakVerdict>,
    /// Present only for non-degenerate input.
    pub np_eq_hp: Option<bool>,
    pub np: Option<Polygon>,
    /// The L-polynomial, complete when kmax reached the degree.
    pub lpoly: Option<LPolyCoeffs>,
    pub functional_equation: Option<std::result::Result<(), usize>>,
    pub purity_deviation: Option<f64>,
    pub ms: u128,
}

impl HasseReport {
    pub fn to_json(&self) -> Value {
        let field = self.spec.field();
        let bps: Vec<Value> = self
            .breakpoints
            .iter()
            .map(|b| {
                json!({
                    "index": b.index,
                    "ord_num": b.ord.map(|o| *o.numer()),
                    "ord_den": b.ord.map(|o| *o.denom()),
                    "hodge": b.hodge.to_string(),
                    "source": b.source.as_str(),
                })
            })
            .collect();
        let mut v = json!({
            "spec": {
                "p": self.spec.p(),
                "a": self.spec.a(),
                "n": self.spec.n(),
                "coeffs": self.spec.coeffs().iter().map(|c| format_elem(field, c)).collect::<Vec<_>>(),
            },
            "nondegenerate": self.nondegenerate,
            "h_le1": format_elem(field, &self.h_le1),
            "h_full": self.h_full.as_ref().map(|h| format_elem(field, h)),
            "kmax": self.kmax,
            "breakpoints": bps,
            "np_eq_hp": self.np_eq_hp,
            "ms": self.ms as u64,
        });
        if let Some(fe) = &self.functional_equation {
            v["functional_equation"] = match fe {
                Ok(()) => json!("ok"),
                Err(j) => json!({ "first_failure": j }),
            };
            v["purity_deviation"] = json!(self.purity_deviation);
        }
        v
    }

    pub fn is_ordinary(&self) -> bool {
        self.np_eq_hp == Some(true)
    }
}

/// nondegeneracy -> power sums -> coefficients -> symmetry completion ->
/// vertex coincidence, plus the closed-form Hasse values.
pub fn cmd_case(engine: &Engine, spec: &FamilySpec, opts: &CaseOptions) -> Result<HasseReport> {
    let start = Instant::now();
    let field = spec.field();
    let n = spec.n();
    let nondeg = nondegenerate(field, spec.coeffs())?;
    let h_le1 = hasse_closed_le1(field, spec.coeffs())?;
    let h_full = if matches!(n, 2 | 3) {
        Some(hasse_closed_full(field, spec.coeffs())?)
    } else {
        None
    };
    let kmax = opts.effective_kmax(n);
    let mut report = HasseReport {
        spec: spec.clone(),
        nondegenerate: nondeg,
        h_le1,
        h_full,
        kmax,
        breakpoints: Vec::new(),
        np_eq_hp: None,
        np: None,
        lpoly: None,
        functional_equation: None,
        purity_deviation: None,
        ms: 0,
    };
    if nondeg {
        let sums = engine.power_sums(spec, kmax)?;
        let lp = coeffs_from_power_sums(&sums, n, spec.p(), spec.a())?;
        let profile = if lp.is_complete() {
            report.functional_equation = Some(functional_equation_check(&lp));
            report.purity_deviation = purity_deviation(&lp);
            lp.profile()
        } else {
            symmetry_complete(&lp)
        };
        let coincidence = vertex_coincidence(&profile, &family_hodge_polygon(n))?;
        report.np = Some(newton_polygon(&profile)?);
        report.np_eq_hp = Some(coincidence.np_eq_hp);
        report.breakpoints = coincidence.points;
        report.lpoly = Some(lp);
    }
    report.ms = start.elapsed().as_millis();
    Ok(report)
}
