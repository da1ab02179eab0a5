//! Command line front end: argument parsing, dispatch and output formatting.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyclodist_core::arith::{factorize, sieve, SievePack};
use cyclodist_core::cyclotomic::{
    construct_coeff_value, cyclo_coeff, cyclo_coeff_partition, cyclo_coeff_series, cyclo_poly, value_set,
};
use cyclodist_core::densities_natural::{
    coeff_density, coeff_density_odd, mean_coeff, mean_coeff_odd, mean_coeff_partition, mean_coeff_prime,
    moller_conjecture_scan,
};
use cyclodist_core::densities_prime::{
    artin_constant_cached, coeff_prime_density, ramanujan_prime_density, ramanujan_prime_mean_abs,
    ramanujan_prime_moment, s_small_density, shifted_prime_kfree_density, ExponentClass, ValuationConstraint,
};
use cyclodist_core::density::{Basis, DensityTable};
use cyclodist_core::empirics::{
    primitive_roots, scan_integers, symmetric_functions_mod_p, Bound, EmpiricalReport, IntStatistic, PrimeScan,
    Statistic,
};
use cyclodist_core::ramanujan::{natural_density_of_ramanujan, natural_moment, ramanujan_sum, ramanujan_sum_direct};
use cyclodist_core::report::{self, fmt6, ReproduceOptions, TableArtifact};
use cyclodist_core::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "cyclodist", version, about = "Ramanujan sums, cyclotomic coefficients and their value distributions")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Markdown, global = true)]
    pub format: Format,
    /// Directory for the prime list cache; falls back to CYCLODIST_CACHE.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for prime scans.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffMethod {
    Recurrence,
    Series,
    Partition,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeanMethod {
    #[value(alias = "vier")]
    Divisor,
    Partition,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeanVariant {
    All,
    Odd,
    Prime,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatName {
    Mu,
    S2,
    S,
    #[value(name = "S-power")]
    PowerSum,
    C,
    A,
    Kfree,
    Conj1,
    /// c_n(m) over integers n.
    RamaN,
    /// a_n(k) over integers n.
    CoeffN,
}

#[derive(Args, Debug, Clone)]
#[group(required = false, multiple = false)]
pub struct BoundArgs {
    /// Scan the first N primes.
    #[arg(long)]
    pub nprimes: Option<usize>,
    /// Scan primes up to x (integers up to x for integer statistics).
    #[arg(long)]
    pub x: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient a_n(k) of X^k in the n-th cyclotomic polynomial.
    Coeff {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = CoeffMethod::Recurrence)]
        method: CoeffMethod,
    },
    /// All coefficients of the n-th cyclotomic polynomial.
    Poly {
        #[arg(long)]
        n: u64,
    },
    /// Values taken by a_n(k) over all n, even n and odd n.
    Valueset {
        #[arg(long)]
        k: u64,
    },
    /// Ramanujan sum c_n(m), or its distribution over n with --density.
    Rama {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: u64,
        /// Use the exponential-sum oracle.
        #[arg(long)]
        direct: bool,
        #[arg(long)]
        density: bool,
    },
    /// e_k, zeta(2) times the mean of a_n(k).
    Mean {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = MeanMethod::Divisor)]
        method: MeanMethod,
        #[arg(long, value_enum, default_value_t = MeanVariant::All)]
        variant: MeanVariant,
    },
    /// Sign and range check of e_k - e_{k+1} for k up to kmax.
    Moller {
        #[arg(long, default_value_t = 35)]
        kmax: u64,
    },
    /// Value densities over the naturals or over shifted primes.
    Density {
        #[command(subcommand)]
        which: DensityKind,
    },
    /// Moments of Ramanujan sums.
    Moment {
        #[command(subcommand)]
        which: MomentKind,
    },
    /// Averages over shifted primes.
    Avg {
        #[command(subcommand)]
        which: AvgKind,
    },
    /// Distribution of s_k(p) mod p for k <= 4.
    SDensity {
        #[arg(long)]
        k: u32,
    },
    /// Conditional distribution of a_{p-1}(k), as multiples of A.
    ADensity {
        #[arg(long)]
        k: u64,
    },
    /// Artin constant and related Euler products.
    Constants {
        #[arg(long, default_value_t = 1e-8)]
        precision: f64,
        /// Also evaluate the density of primes p with p - r free of k-th powers.
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<i64>,
        #[arg(long, default_value_t = 2)]
        power: u32,
    },
    /// Deterministic scan over primes or integers.
    Empirical {
        #[arg(long, value_enum)]
        stat: StatName,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[command(flatten)]
        bound: BoundArgs,
        /// Valuation conditions on p - 1, e.g. nu2=2,nu3>=1,sqf.
        #[arg(long)]
        cond: Option<String>,
        /// Fold v and -v together.
        #[arg(long)]
        abs: bool,
    },
    /// Brute-force checks from primitive roots.
    Oracle {
        #[command(subcommand)]
        which: OracleKind,
    },
    /// Witness n with a_n(k) = v.
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        v: i64,
    },
    /// One reproduced table; `tableN` is shorthand for `table --id N`.
    Table {
        #[arg(long)]
        id: u32,
        #[arg(long)]
        kmax: Option<u64>,
        /// Include the 10^6-prime scans.
        #[arg(long)]
        full: bool,
        /// Write the output here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every table plus a manifest of golden comparisons.
    ReproduceAll {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        full: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum DensityKind {
    Natural {
        #[arg(long)]
        k: u64,
        /// Restrict to odd n.
        #[arg(long)]
        odd: bool,
    },
    Prime {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        signed: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum MomentKind {
    Natural {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        order: u32,
    },
    Prime {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        z: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum AvgKind {
    Prime {
        #[arg(long)]
        k: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleKind {
    Sym {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        kmax: usize,
    },
    Roots {
        #[arg(long)]
        p: u64,
    },
}

/// A rectangular result that renders in every format.
struct Grid {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Grid {
    fn new(headers: &[&'static str]) -> Self {
        Grid { headers: headers.to_vec(), rows: Vec::new() }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Markdown => {
                let mut s = format!("| {} |\n|{}\n", self.headers.join(" | "), "---|".repeat(self.headers.len()));
                for r in &self.rows {
                    s.push_str(&format!("| {} |\n", r.join(" | ")));
                }
                s
            }
            Format::Csv => {
                let mut s = format!("{}\n", self.headers.join(","));
                for r in &self.rows {
                    s.push_str(&format!("{}\n", r.join(",")));
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: serde_json::Map<String, Value> =
                            self.headers.iter().zip(r).map(|(h, c)| (h.to_string(), Value::String(c.clone()))).collect();
                        Value::Object(obj)
                    })
                    .collect();
                pretty(&Value::Array(rows))
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize"))
}

fn density_output(d: &DensityTable, format: Format) -> String {
    if format == Format::Json {
        return pretty(&d.to_json());
    }
    let mut g = Grid::new(&["value", "coeff", "basis", "density", "numeric"]);
    for (v, c) in d.entries() {
        g.row(vec![v.to_string(), c.to_string(), d.basis.label().into(), d.basis.render(c), fmt6(d.numeric(*v))]);
    }
    let mass = d.mass();
    let zero = if mass.is_zero() { "1".to_string() } else { format!("1-{}", d.basis.render(&mass)) };
    g.row(vec!["0".into(), "-".into(), "ONE".into(), zero, fmt6(d.zero_numeric())]);
    let mut s = g.render(format);
    if d.conditional && format == Format::Markdown {
        s.push_str("\n_conditional_\n");
    }
    s
}

fn report_output(r: &EmpiricalReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&r.to_json()),
        Format::Csv => r.to_csv(),
        Format::Markdown => {
            let mut g = Grid::new(&["value", "count", "frequency"]);
            for (&v, &c) in &r.counts {
                g.row(vec![v.to_string(), c.to_string(), fmt6(r.frequency_f64(v))]);
            }
            let cond = r.condition.as_deref().map(|c| format!(", condition {c}")).unwrap_or_default();
            let mut head = format!("{} over {}{cond}: {} of {}\n", r.statistic, r.bound, r.total, r.population);
            if r.statistic.starts_with("conjecture1") || r.statistic == "mu_pminus1" {
                let s = r.signed_sum();
                head.push_str(&format!("signed sum {s}, |sum|/population {}\n", fmt6(s.unsigned_abs() as f64 / r.population.max(1) as f64)));
            }
            format!("{head}\n{}", g.render(format))
        }
    }
}

fn artifact_output(t: &TableArtifact, format: Format) -> String {
    match format {
        Format::Markdown => t.to_markdown(),
        Format::Csv => t.to_csv(),
        Format::Json => pretty(&t.to_json()),
    }
}

fn scalar(format: Format, fields: Value, key: &str) -> String {
    match format {
        Format::Json => pretty(&fields),
        _ => match &fields[key] {
            Value::String(s) => format!("{s}\n"),
            v => format!("{v}\n"),
        },
    }
}

/// Parses `nu2=2,nu3>=1,sqf`.
pub fn parse_condition(s: &str) -> Result<ValuationConstraint, Error> {
    let mut pairs = Vec::new();
    let mut sqf = false;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "sqf" {
            sqf = true;
            continue;
        }
        let rest = part.strip_prefix("nu").ok_or_else(|| Error::domain(format!("bad condition {part:?}")))?;
        let (p, op, e) = ["<=", ">=", "="]
            .iter()
            .find_map(|op| rest.split_once(op).map(|(p, e)| (p, *op, e)))
            .ok_or_else(|| Error::domain(format!("bad condition {part:?}")))?;
        let p: u64 = p.parse().map_err(|_| Error::domain(format!("bad prime in {part:?}")))?;
        let e: u32 = e.parse().map_err(|_| Error::domain(format!("bad exponent in {part:?}")))?;
        let class = match op {
            "<=" => ExponentClass::AtMost(e),
            ">=" => ExponentClass::AtLeast(e),
            _ => ExponentClass::Exact(e),
        };
        pairs.push((p, class));
    }
    ValuationConstraint::new(pairs, sqf)
}

fn need<T>(x: Option<T>, name: &str) -> Result<T, Error> {
    x.ok_or_else(|| Error::domain(format!("--{name} is required for this statistic")))
}

fn sieve_for(limit: u64) -> Result<SievePack, Error> {
    SievePack::new(limit.max(2))
}

fn empirical(
    cli: &Cli,
    stat: StatName,
    k: Option<u64>,
    r: Option<i64>,
    bound: &BoundArgs,
    cond: Option<&str>,
    abs: bool,
) -> Result<String, Error> {
    let cond = cond.map(parse_condition).transpose()?;
    let int_stat = match stat {
        StatName::RamaN => Some(IntStatistic::Ramanujan(need(k, "k")?)),
        StatName::CoeffN => Some(IntStatistic::Coeff(need(k, "k")?)),
        _ => None,
    };
    if let Some(is) = int_stat {
        if cond.is_some() || bound.nprimes.is_some() {
            return Err(Error::domain("integer statistics take --x and no condition"));
        }
        let x = need(bound.x, "x")?;
        let rep = scan_integers(x, is, &sieve_for(x)?)?;
        return Ok(report_output(&if abs { rep.fold_abs() } else { rep }, cli.format));
    }
    let statistic = match stat {
        StatName::Mu => Statistic::MuPMinus1,
        StatName::S2 => Statistic::SkModP(2),
        StatName::S => Statistic::SkModP(need(k, "k")?),
        StatName::PowerSum => Statistic::PowerSumModP(need(k, "k")?),
        StatName::C => Statistic::CPMinus1(need(k, "k")?),
        StatName::A => Statistic::APMinus1(need(k, "k")?),
        StatName::Kfree => Statistic::KfreeShift { r: need(r, "r")?, k: k.unwrap_or(2) as u32 },
        StatName::Conj1 => Statistic::Conjecture1(need(cond.clone(), "cond")?),
        StatName::RamaN | StatName::CoeffN => unreachable!("handled above"),
    };
    let bound = match (bound.nprimes, bound.x) {
        (Some(n), None) => Bound::FirstPrimes(n),
        (None, Some(x)) => Bound::UpTo(x),
        (None, None) => Bound::FirstPrimes(10_000),
        (Some(_), Some(_)) => return Err(Error::domain("--nprimes and --x are mutually exclusive")),
    };
    let condition = if matches!(statistic, Statistic::Conjecture1(_)) { None } else { cond };
    let scan = PrimeScan { bound, statistic, condition, threads: cli.threads };
    let rep = scan.run(&sieve_for(scan.sieve_limit())?)?;
    Ok(report_output(&if abs { rep.fold_abs() } else { rep }, cli.format))
}

fn table(id: u32, kmax: Option<u64>, full: bool, threads: Option<usize>) -> Result<TableArtifact, Error> {
    let scan_sieve = || SievePack::for_prime_count(report::FULL_PRIMES);
    let with_scan = |f: &dyn Fn(Option<&report::ScanContext>) -> Result<TableArtifact, Error>| {
        if full {
            let s = scan_sieve()?;
            f(Some(&report::ScanContext { sieve: &s, nprimes: report::FULL_PRIMES, threads }))
        } else {
            f(None)
        }
    };
    match id {
        1 => {
            let scales = report::table1_scales(full);
            let s = SievePack::for_prime_count(*scales.iter().max().unwrap())?;
            report::table1(&scales, &s, threads)
        }
        2 => report::table2(kmax.unwrap_or(30)),
        3 => report::table3(kmax.unwrap_or(20)),
        4 => report::table4(kmax.unwrap_or(16)),
        5 => report::table5(kmax.unwrap_or(report::T5_KMAX)),
        6 => with_scan(&|c| report::table6(c)),
        7 => with_scan(&|c| report::table7(c)),
        8 => with_scan(&|c| report::table8(c)),
        9 => with_scan(&|c| report::table9(c)),
        10 => report::table10(kmax.unwrap_or(10)),
        11 => {
            let k = kmax.unwrap_or(61);
            report::table11(k, k.min(report::table11_kmax_v(full)))
        }
        _ => Err(Error::domain(format!("no table {id}; tables are numbered 1 to 11"))),
    }
}

fn dispatch(cli: &Cli) -> Result<String, Error> {
    let f = cli.format;
    Ok(match &cli.command {
        Command::Coeff { n, k, method } => {
            let fac = factorize(*n, None)?;
            let v = match method {
                CoeffMethod::Recurrence => cyclo_coeff(&fac, *k)?,
                CoeffMethod::Series => cyclo_coeff_series(&fac, *k)?,
                CoeffMethod::Partition => cyclo_coeff_partition(&fac, *k)?,
            };
            scalar(f, json!({"n": n, "k": k, "value": v}), "value")
        }
        Command::Poly { n } => {
            let p = cyclo_poly(*n)?;
            match f {
                Format::Json => pretty(&json!({"n": n, "coefficients": p})),
                Format::Csv => {
                    let mut g = Grid::new(&["degree", "coeff"]);
                    for (i, c) in p.iter().enumerate() {
                        g.row(vec![i.to_string(), c.to_string()]);
                    }
                    g.render(f)
                }
                Format::Markdown => {
                    let cs: Vec<String> = p.iter().map(i64::to_string).collect();
                    format!("{}\n", cs.join(" "))
                }
            }
        }
        Command::Valueset { k } => {
            let r = value_set(*k)?;
            let set = |s: &std::collections::BTreeSet<i64>| s.iter().copied().collect::<Vec<_>>();
            let js = json!({
                "k": k, "B": r.height(), "full_set": set(&r.full_set), "even_set": set(&r.even_set),
                "odd_set": set(&r.odd_set), "odd_only": set(&r.odd_only()),
            });
            match f {
                Format::Json => pretty(&js),
                _ => {
                    let mut g = Grid::new(&["field", "value"]);
                    for key in ["B", "full_set", "even_set", "odd_set", "odd_only"] {
                        g.row(vec![key.into(), js[key].to_string().replace(',', " ")]);
                    }
                    g.render(f)
                }
            }
        }
        Command::Rama { n, m, direct, density } => {
            if *density {
                density_output(&natural_density_of_ramanujan(&factorize(*m, None)?), f)
            } else {
                let n = need(*n, "n")?;
                let v = if *direct {
                    ramanujan_sum_direct(n, *m)? as i128
                } else {
                    ramanujan_sum(&factorize(n, None)?, *m as u128)
                };
                scalar(f, json!({"n": n, "m": m, "value": v as i64}), "value")
            }
        }
        Command::Mean { k, method, variant } => {
            let (value, bracket) = match (variant, method) {
                (MeanVariant::All, MeanMethod::Divisor) => {
                    let e = mean_coeff(*k)?;
                    (e.value, e.bracket)
                }
                (MeanVariant::All, MeanMethod::Partition) => {
                    let e = mean_coeff_partition(*k)?;
                    (e.value, e.bracket)
                }
                (MeanVariant::Odd, _) => (mean_coeff_odd(*k)?, None),
                (MeanVariant::Prime, _) => (mean_coeff_prime(*k)?, None),
            };
            let js = json!({
                "k": k, "e": value.to_string(), "numeric": fmt6(value.to_f64()),
                "bracket": bracket.map(|b| b.to_string()),
            });
            scalar(f, js, "e")
        }
        Command::Moller { kmax } => {
            let rows = moller_conjecture_scan(*kmax)?;
            let mut g = Grid::new(&["k", "e_k", "numeric", "e_k >= e_{k+1}", "0 <= e_k <= 1/2"]);
            for r in rows {
                let sign = r.sign_ok.map_or("-".to_string(), |b| b.to_string());
                g.row(vec![r.k.to_string(), r.e.to_string(), fmt6(r.e.to_f64()), sign, r.range_ok.to_string()]);
            }
            g.render(f)
        }
        Command::Density { which } => match which {
            DensityKind::Natural { k, odd } => {
                density_output(&if *odd { coeff_density_odd(*k)? } else { coeff_density(*k)? }, f)
            }
            DensityKind::Prime { k, signed } => {
                density_output(&ramanujan_prime_density(&factorize(*k, None)?, *signed), f)
            }
        },
        Command::Moment { which } => match which {
            MomentKind::Natural { m, order } => {
                let v = natural_moment(&factorize(*m, None)?, *order);
                let js = json!({"m": m, "order": order, "coeff": v.to_string(), "basis": "SIX_OVER_PI2",
                    "numeric": fmt6(v.to_f64() * Basis::SixOverPi2.numeric())});
                scalar(f, js, "coeff")
            }
            MomentKind::Prime { k, z } => {
                let m = ramanujan_prime_moment(&factorize(*k, None)?, *z)?;
                let exact = m.coefficient.as_ref().map(|c| Basis::Artin.render(c));
                let js = json!({"k": k, "z": z, "exact": exact, "numeric": fmt6(m.numeric)});
                scalar(f, js, if exact.is_some() { "exact" } else { "numeric" })
            }
        },
        Command::Avg { which: AvgKind::Prime { k } } => {
            let m = ramanujan_prime_mean_abs(&factorize(*k, None)?);
            let js = json!({"k": k, "exact": Basis::Artin.render(&m), "numeric": fmt6(m.to_f64() * Basis::Artin.numeric())});
            scalar(f, js, "exact")
        }
        Command::SDensity { k } => density_output(&s_small_density(*k)?, f),
        Command::ADensity { k } => {
            let (d, mean) = coeff_prime_density(*k)?;
            let mut s = density_output(&d, f);
            if f != Format::Json {
                s.push_str(&format!("\naverage: {} ({})\n", Basis::Artin.render(&mean), fmt6(mean.to_f64() * Basis::Artin.numeric())));
            } else {
                s = pretty(&json!({"density": d.to_json(), "average": mean.to_string()}));
            }
            s
        }
        Command::Constants { precision, shift, power } => {
            let cache = sieve::resolve_cache_dir(cli.cache_dir.as_deref());
            let a = artin_constant_cached(*precision, cache.as_deref())?;
            let mut g = Grid::new(&["constant", "value", "truncation_prime", "tail_bound"]);
            g.row(vec!["A".into(), format!("{:.10}", a.value), a.truncation_prime.to_string(), format!("{:.3e}", a.tail_bound)]);
            if let Some(r) = shift {
                let c = shifted_prime_kfree_density(*r, *power)?;
                g.row(vec![
                    format!("kfree(r={r},k={power})"),
                    format!("{:.10}", c.value),
                    c.truncation_prime.to_string(),
                    format!("{:.3e}", c.tail_bound),
                ]);
            }
            g.render(f)
        }
        Command::Empirical { stat, k, r, bound, cond, abs } => empirical(cli, *stat, *k, *r, bound, cond.as_deref(), *abs)?,
        Command::Oracle { which } => match which {
            OracleKind::Sym { p, kmax } => {
                let (s, big) = symmetric_functions_mod_p(*p, *kmax)?;
                let mut g = Grid::new(&["k", "s_k", "S_k"]);
                for i in 0..*kmax {
                    g.row(vec![(i + 1).to_string(), s[i].to_string(), big[i].to_string()]);
                }
                g.render(f)
            }
            OracleKind::Roots { p } => {
                let r = primitive_roots(*p)?;
                match f {
                    Format::Json => pretty(&json!({"p": p, "roots": r})),
                    _ => format!("{}\n", r.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
                }
            }
        },
        Command::Construct { v } => {
            let (n, k) = construct_coeff_value(*v)?;
            let js = json!({"v": v, "n": n.value().to_string(), "k": k});
            match f {
                Format::Json => pretty(&js),
                _ => format!("a_{}({k}) = {v}\n", n.value()),
            }
        }
        Command::Table { id, kmax, full, out } => {
            let t = table(*id, *kmax, *full, cli.threads)?;
            let text = artifact_output(&t, f);
            match out {
                Some(path) => {
                    std::fs::write(path, text)?;
                    String::new()
                }
                None => text,
            }
        }
        Command::ReproduceAll { out, full } => {
            let m = report::reproduce_all(out, ReproduceOptions { full: *full, threads: cli.threads })?;
            let mut g = Grid::new(&["table", "provenance", "rows", "status"]);
            for e in &m.entries {
                let status = if e.mismatches.is_empty() { "pass".to_string() } else { format!("FAIL ({})", e.mismatches.len()) };
                g.row(vec![e.id.clone(), e.provenance.into(), e.rows.to_string(), status]);
            }
            let text = g.render(f);
            if !m.all_pass() {
                return Err(Error::internal(format!("golden mismatches, see {}\n{text}", Path::new(out).join("manifest.json").display())));
            }
            text
        }
    })
}

/// Rewrites `tableN ...` to `table --id N ...`.
fn expand_aliases(argv: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len() + 2);
    for (i, a) in argv.into_iter().enumerate() {
        let id = a.strip_prefix("table").filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()));
        match id {
            Some(id) if i > 0 => {
                let id = id.to_string();
                out.extend(["table".to_string(), "--id".to_string(), id]);
            }
            _ => out.push(a),
        }
    }
    out
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => 2,
        Error::Resource(_) | Error::Io(_) => 3,
        Error::Internal(_) => 4,
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run_with(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(expand_aliases(argv)) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(_) => 3,
        },
        Err(e) => {
            let kind = match &e {
                Error::Domain(_) => "domain",
                Error::Resource(_) => "resource",
                Error::Io(_) => "io",
                Error::Internal(_) => "internal",
            };
            let _ = writeln!(err, "error[{kind}]: {e}");
            exit_code(&e)
        }
    }
}
