//! Exhaustive sweeps over (F_q^*)^(n+1).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use rayon::prelude::*;

use hasse_core::expsum::FamilySpec;
use hasse_core::ff::FField;
use hasse_core::polygon::Polygon;
use hasse_core::polytope::family_hodge_polygon;
use hasse_core::Rational;

use crate::engine::{cmd_case, CaseOptions, Engine, HasseReport};

pub struct SweepRecord {
    pub p: u32,
    pub a: u32,
    pub n: usize,
    pub reports: Vec<HasseReport>,
    pub ordinary: usize,
    pub non_ordinary: usize,
    pub degenerate: usize,
    /// Pointwise minimum of the observed Newton polygons: an empirical
    /// stand-in for the generic Newton polygon, never the exact one.
    pub empirical_gnp: Option<Polygon>,
}

impl SweepRecord {
    pub fn gnp_is_hodge(&self) -> Option<bool> {
        self.empirical_gnp
            .as_ref()
            .map(|g| g == &family_hodge_polygon(self.n))
    }

    pub fn nondegenerate(&self) -> impl Iterator<Item = &HasseReport> {
        self.reports.iter().filter(|r| r.nondegenerate)
    }
}

/// Every unit coefficient vector in lexicographic index order.
pub fn grid(p: u32, a: u32, n: usize) -> Result<Vec<FamilySpec>> {
    let field = FField::new(p, a)?;
    let q = field.order();
    let mut out = Vec::new();
    let mut idx = vec![1u64; n + 1];
    loop {
        let coeffs = idx.iter().map(|&i| field.from_index(i)).collect();
        out.push(FamilySpec::new(field.clone(), coeffs)?);
        let mut c = n + 1;
        loop {
            if c == 0 {
                return Ok(out);
            }
            c -= 1;
            if idx[c] + 1 < q {
                idx[c] += 1;
                break;
            }
            idx[c] = 1;
        }
    }
}

pub fn cmd_sweep(
    engine: &Engine,
    p: u32,
    a: u32,
    n: usize,
    opts: &CaseOptions,
    jobs: usize,
) -> Result<SweepRecord> {
    let q = (p as u128).pow(a);
    let size = (q - 1).pow(n as u32 + 1);
    if size > engine.budget().steps as u128 {
        bail!(
            "sweep of {size} vectors exceeds the step budget {}",
            engine.budget().steps
        );
    }
    let specs = grid(p, a, n)?;
    // tables are shared, so build them before fan-out
    for k in 1..=opts.effective_kmax(n) {
        engine.ctx(p, a, k)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    let reports: Vec<HasseReport> = pool.install(|| {
        specs
            .par_iter()
            .map(|s| cmd_case(engine, s, opts))
            .collect::<Result<_>>()
    })?;
    let ordinary = reports.iter().filter(|r| r.is_ordinary()).count();
    let degenerate = reports.iter().filter(|r| !r.nondegenerate).count();
    let non_ordinary = reports.len() - ordinary - degenerate;
    let empirical_gnp = pointwise_min(reports.iter().filter_map(|r| r.np.as_ref()))?;
    Ok(SweepRecord {
        p,
        a,
        n,
        reports,
        ordinary,
        non_ordinary,
        degenerate,
        empirical_gnp,
    })
}

/// Lower hull of the minimum ordinate at every vertex abscissa.
fn pointwise_min<'a>(polys: impl Iterator<Item = &'a Polygon>) -> Result<Option<Polygon>> {
    let polys: Vec<&Polygon> = polys.collect();
    if polys.is_empty() {
        return Ok(None);
    }
    let mut xs: Vec<Rational> = polys
        .iter()
        .flat_map(|p| p.vertices().iter().map(|v| v.0))
        .collect();
    xs.sort();
    xs.dedup();
    let pts: Vec<(Rational, Rational)> = xs
        .into_iter()
        .filter_map(|x| polys.iter().filter_map(|p| p.ordinate(x)).min().map(|y| (x, y)))
        .collect();
    Ok(Some(Polygon::lower_hull(&pts)?))
}

/// JSON lines, a one-row CSV summary and the polygons as vertex columns.
pub fn write_sweep(rec: &SweepRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let stem = format!("sweep_p{}_a{}_n{}", rec.p, rec.a, rec.n);
    let jsonl = dir.join(format!("{stem}.jsonl"));
    let mut w = std::io::BufWriter::new(fs::File::create(&jsonl)?);
    for r in &rec.reports {
        writeln!(w, "{}", r.to_json())?;
    }
    w.flush()?;
    let csv = dir.join(format!("{stem}.csv"));
    fs::write(
        &csv,
        format!(
            "p,a,n,size,ordinary,non_ordinary,degenerate,empirical_gnp_eq_hp\n{},{},{},{},{},{},{},{}\n",
            rec.p,
            rec.a,
            rec.n,
            rec.reports.len(),
            rec.ordinary,
            rec.non_ordinary,
            rec.degenerate,
            rec.gnp_is_hodge().map_or("".into(), |b| b.to_string()),
        ),
    )?;
    let mut out = vec![jsonl, csv];
    let hp = dir.join(format!("hp_n{}.txt", rec.n));
    fs::write(&hp, family_hodge_polygon(rec.n).to_columns())?;
    out.push(hp);
    if let Some(g) = &rec.empirical_gnp {
        let path = dir.join(format!("{stem}_gnp.txt"));
        fs::write(&path, g.to_columns())?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hasse_core::Budget;

    #[test]
    fn grid_is_exhaustive_and_ordered() {
        let g = grid(3, 2, 2).unwrap();
        assert_eq!(g.len(), 512);
        let f = FField::new(3, 2).unwrap();
        assert_eq!(f.index(&g[1].coeffs()[2]), 2);
        assert_eq!(f.index(&g[8].coeffs()[1]), 2);
    }

    #[test]
    fn p3_a1_is_all_degenerate() {
        let e = Engine::new(Budget::default(), None);
        let rec = cmd_sweep(&e, 3, 1, 2, &CaseOptions::default(), 2).unwrap();
        assert_eq!((rec.reports.len(), rec.degenerate, rec.ordinary), (8, 8, 0));
        assert!(rec.empirical_gnp.is_none());
    }

    #[test]
    fn writes_outputs() {
        let e = Engine::new(Budget::default(), None);
        let rec = cmd_sweep(&e, 5, 1, 1, &CaseOptions::default(), 2).unwrap();
        assert_eq!(rec.reports.len(), 16);
        assert_eq!(rec.ordinary + rec.non_ordinary + rec.degenerate, 16);
        let dir = std::env::temp_dir().join(format!("hasse_sweep_test_{}", std::process::id()));
        let files = write_sweep(&rec, &dir).unwrap();
        let lines = fs::read_to_string(&files[0]).unwrap();
        assert_eq!(lines.lines().count(), 16);
        fs::remove_dir_all(&dir).unwrap();
    }
}
