use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use hasse_cli::digits::{format_elem, parse_list};
use hasse_cli::{cmd_case, cmd_sweep, write_sweep, CaseOptions, Engine, Verifier};
use hasse_core::dwork::{hasse_closed_full, hasse_closed_le1};
use hasse_core::expsum::FamilySpec;
use hasse_core::ff::FField;
use hasse_core::polytope::{chain_polygon, family_hodge_polygon, Polytope};
use hasse_core::sing::{hasse_symbolic, singular_search};
use hasse_core::Budget;

#[derive(Parser)]
#[command(name = "hasse", version, about = "Newton polygons and Hasse polynomials of a toric exponential-sum family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Directory for persisted Kloosterman tables.
    #[arg(long, env = "DWORK_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Step budget for enumerations.
    #[arg(long)]
    budget_steps: Option<u64>,
    /// Output file (case) or directory (sweep, polygon).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn engine(&self) -> Engine {
        Engine::new(self.budget(), self.cache_dir.clone())
    }

    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(s) = self.budget_steps {
            b.steps = s;
        }
        b
    }
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    a: u32,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Clone, Copy)]
struct DepthArgs {
    /// Largest extension degree k for the power sums.
    #[arg(long)]
    kmax: Option<u32>,
    /// Compute all 2^(n+1) power sums instead of relying on symmetry.
    #[arg(long)]
    full_degree: bool,
}

impl DepthArgs {
    fn options(self) -> CaseOptions {
        CaseOptions {
            kmax: self.kmax,
            full_degree: self.full_degree,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline for one coefficient vector.
    Case {
        #[command(flatten)]
        field: FieldArgs,
        /// Comma list of base-p digit strings a_1..a_{n+1}, constant digit first.
        #[arg(long)]
        coeffs: String,
        #[command(flatten)]
        depth: DepthArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Every unit coefficient vector of one field.
    Sweep {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        depth: DepthArgs,
        #[arg(long, default_value_t = 4)]
        jobs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run verification targets: thm1.1 thm1.2 thm2.12 thm2.13 ex4.1 ex4.3
    /// ex4.4 symmetry purity oracle, or `all`.
    Verify {
        targets: Vec<String>,
        #[arg(long, default_value_t = 4)]
        jobs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Hodge polygon and chain polygon of Delta_n as vertex columns.
    Polygon {
        #[arg(long)]
        n: usize,
        /// Weight range of the chain polygon.
        #[arg(long)]
        kmax: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the closed-form Hasse polynomials, or dump h_le1 symbolically.
    Hasse {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long)]
        symbolic: bool,
    },
    /// Singular points of h_le1 over F_{p^k}.
    Sing {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[command(flatten)]
        common: Common,
    },
}

fn spec_from(field: &FieldArgs, coeffs: &str) -> Result<FamilySpec> {
    let f = FField::new(field.p, field.a)?;
    let c = parse_list(&f, coeffs)?;
    if c.len() != field.n + 1 {
        bail!("expected {} coefficients, got {}", field.n + 1, c.len());
    }
    Ok(FamilySpec::new(f, c)?)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Case { field, coeffs, depth, common } => {
            let spec = spec_from(&field, &coeffs)?;
            let report = cmd_case(&common.engine(), &spec, &depth.options())?;
            let text = report.to_json().to_string();
            match &common.out {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
        }
        Command::Sweep { field, depth, jobs, common } => {
            let rec = cmd_sweep(&common.engine(), field.p, field.a, field.n, &depth.options(), jobs)?;
            let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in write_sweep(&rec, &dir)? {
                eprintln!("wrote {}", path.display());
            }
            println!(
                "size {} ordinary {} non-ordinary {} degenerate {} empirical GNP = HP: {}",
                rec.reports.len(),
                rec.ordinary,
                rec.non_ordinary,
                rec.degenerate,
                rec.gnp_is_hodge().map_or("n/a".into(), |b| b.to_string())
            );
        }
        Command::Verify { targets, jobs, common } => {
            let v = Verifier::new(common.engine(), jobs);
            let targets = if targets.is_empty() || targets.iter().any(|t| t == "all") {
                ["thm2.12", "thm2.13", "thm1.1", "thm1.2", "oracle", "purity", "symmetry", "ex4.1", "ex4.3", "ex4.4"]
                    .map(String::from)
                    .to_vec()
            } else {
                targets
            };
            let mut ok = true;
            for t in &targets {
                let Some(checks) = v.target(t) else {
                    bail!("unknown verification target {t:?}");
                };
                for c in checks {
                    println!("{:<9} {}", t, c.line());
                    ok &= c.pass;
                }
            }
            return Ok(ok);
        }
        Command::Polygon { n, kmax, common } => {
            let hp = family_hodge_polygon(n);
            let k = kmax.unwrap_or(n as i64 + 1);
            let table = Polytope::family_delta(n).weight_counts(k, &common.budget())?;
            let chain = chain_polygon(&table);
            match &common.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    std::fs::write(dir.join(format!("hp_n{n}.txt")), hp.to_columns())?;
                    std::fs::write(dir.join(format!("chain_n{n}_k{k}.txt")), chain.to_columns())?;
                }
                None => {
                    println!("# HP(Delta_{n})\n{}", hp.to_columns());
                    println!("# P(Delta_{n}), weights <= {k}\n{}", chain.to_columns());
                }
            }
        }
        Command::Hasse { field, coeffs, symbolic } => {
            if symbolic {
                let h = hasse_symbolic(field.n, field.p)?;
                for (e, c) in h.terms() {
                    println!("{c} {}", e.iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
                }
            } else {
                let Some(coeffs) = coeffs else {
                    bail!("--coeffs is required unless --symbolic is given");
                };
                let spec = spec_from(&field, &coeffs)?;
                let f = spec.field();
                println!("h_le1 {}", format_elem(f, &hasse_closed_le1(f, spec.coeffs())?));
                if matches!(field.n, 2 | 3) {
                    println!("h_full {}", format_elem(f, &hasse_closed_full(f, spec.coeffs())?));
                }
            }
        }
        Command::Sing { p, n, k, common } => {
            let h = hasse_symbolic(n, p)?;
            let f = FField::new(p, k)?;
            for x in singular_search(&h, k, &common.budget())? {
                let s: Vec<String> = x.iter().map(|&i| format_elem(&f, &f.from_index(i))).collect();
                println!("[{}]", s.join(":"));
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
