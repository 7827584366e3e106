//! Command-line front end. [`run`] is the whole program minus process exit.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{
    bound_amd, bound_cx, bound_cx_chain, bound_np, bound_pcfew, bound_qp, bound_rational,
    bound_rational_composed, tau_ratio, verify_poly, verify_report, BoundValue,
};
use crate::circuit::circuit_expand;
use crate::error::{Error, Result};
use crate::newton::{
    count_roots_in_disk_with, count_roots_qp, count_roots_zp, distinct_valuation_count, newton_polygon,
    valuation_profile, Multiplicity,
};
use crate::padic::{digits, Prime};
use crate::poly::{parse_poly, sturm_count, DegreeCap, Interval, SparsePoly};
use crate::rational::{fmt_rational, parse_rational, q, Q};
use crate::search::{
    family, load_or_enumerate, poly_to_key, random_circuit, sigma_upper_search, CircuitBounds, EnumCaps,
    FamilySpec, SigmaBounds, CACHE_DIR_ENV,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sigmatau", version, about = "p-adic root counting and additive-complexity bounds")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Prime p.
    #[arg(short = 'p', long = "prime", global = true, default_value_t = 2)]
    pub prime: u64,
    /// Disk radius r (rational, e.g. 1/2).
    #[arg(long, global = true, default_value = "1")]
    pub radius: String,
    #[arg(long, global = true, default_value_t = DegreeCap::DEFAULT.0)]
    pub degree_cap: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Catalog cache directory.
    #[arg(long, global = true, env = CACHE_DIR_ENV, default_value = ".sigmatau-cache")]
    pub cache_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton polygon and root valuations.
    Newton {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Root valuation multiset over C_p.
    Valuations {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Roots in the closed disk ord_p(x - 1) >= r.
    DiskCount {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Count with multiplicity.
        #[arg(long)]
        multiplicities: bool,
    },
    /// Distinct roots in Z_p.
    ZpCount {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Distinct roots in Q_p.
    QpCount {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Exact tau from the enumeration catalog.
    Tau {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
    /// Smallest gate count found within the search bounds.
    SigmaUpper {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 2)]
        s_max: usize,
        #[arg(long, default_value_t = 3)]
        max_exp: u64,
        #[arg(long, default_value_t = 8)]
        max_const: i64,
    },
    /// Enumerate and cache all programs up to a length.
    Enumerate {
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
    /// Generate a named family member.
    Family {
        #[arg(value_enum)]
        kind: FamilyKind,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        j: Option<u32>,
        /// Also count roots and compare with the bounds.
        #[arg(long)]
        analyze: bool,
    },
    /// Check every bound on a corpus of random circuits.
    Verify {
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 6)]
        max_exp: u64,
        #[arg(long, default_value_t = 100)]
        max_const: i64,
        #[arg(long, default_value_t = 64)]
        max_degree: u64,
    },
    /// p-adic digits of a rational.
    Digits {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(short = 'n', long, default_value_t = 10)]
        n: usize,
    },
    /// Evaluate the bound formulas.
    Bounds {
        #[arg(long, default_value_t = 1)]
        s: u64,
        /// Term counts for the multivariate bounds, comma separated.
        #[arg(long, value_delimiter = ',')]
        m: Vec<u64>,
        /// Variable counts for the multivariate Q_p^* bound, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        /// Index sets for the polydisk bound, e.g. "1;1,2".
        #[arg(long)]
        sets: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FamilyKind {
    Extremal,
    CyclotomicShift,
    Logistic,
    ShubSmale,
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const CAP: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::DegreeCap { .. } => exit::CAP,
        Error::Internal(_) => exit::INTERNAL,
        _ => exit::USAGE,
    }
}

struct Ctx<'a> {
    g: &'a Global,
    p: Prime,
    r: Q,
    cap: DegreeCap,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn poly(&self, s: &str) -> Result<SparsePoly> {
        let f = parse_poly(s, self.cap)?;
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(f)
    }

    fn json(&self) -> bool {
        self.g.format == Format::Json
    }

    /// JSON mode prints `v`; text mode prints `text`.
    fn emit(&mut self, v: Value, text: impl FnOnce() -> String) -> Result<()> {
        if self.json() {
            writeln!(self.out, "{}", serde_json::to_string(&v)?)?;
        } else {
            let t = text();
            write!(self.out, "{t}")?;
            if !t.ends_with('\n') {
                writeln!(self.out)?;
            }
        }
        Ok(())
    }
}

fn bv(v: &BoundValue) -> Value {
    serde_json::to_value(v).expect("bound values serialize")
}

/// Parses `args` and runs the command, writing to `out` and `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            code_for(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    let mut cx = Ctx {
        g,
        p: Prime::new(g.prime)?,
        r: parse_rational(&g.radius)?,
        cap: DegreeCap(g.degree_cap),
        out,
    };
    match &cli.cmd {
        Command::Newton { poly } => cmd_newton(&mut cx, poly),
        Command::Valuations { poly } => {
            let f = cx.poly(poly)?;
            let prof = valuation_profile(&f, cx.p)?;
            let n = distinct_valuation_count(&f, cx.p)?;
            let v = json!({"poly": f, "p": cx.p, "profile": prof, "distinct": n});
            cx.emit(v, || format!("profile {prof}\ndistinct {n}"))?;
            Ok(exit::OK)
        }
        Command::DiskCount { poly, multiplicities } => {
            let f = cx.poly(poly)?;
            let mode = if *multiplicities {
                Multiplicity::Counted
            } else {
                Multiplicity::Distinct
            };
            let n = count_roots_in_disk_with(&f, cx.p, &cx.r, mode)?;
            let v = json!({"poly": f, "p": cx.p, "r": fmt_rational(&cx.r), "multiplicities": multiplicities, "count": n});
            cx.emit(v, || n.to_string())?;
            Ok(exit::OK)
        }
        Command::ZpCount { poly } => {
            let f = cx.poly(poly)?;
            let n = count_roots_zp(&f, cx.p)?;
            cx.emit(json!({"poly": f, "p": cx.p, "count": n}), || n.to_string())?;
            Ok(exit::OK)
        }
        Command::QpCount { poly } => {
            let f = cx.poly(poly)?;
            let n = count_roots_qp(&f, cx.p)?;
            cx.emit(json!({"poly": f, "p": cx.p, "count": n}), || n.to_string())?;
            Ok(exit::OK)
        }
        Command::Tau { poly, max_len } => cmd_tau(&mut cx, poly, *max_len),
        Command::SigmaUpper {
            poly,
            s_max,
            max_exp,
            max_const,
        } => {
            let f = cx.poly(poly)?;
            let b = SigmaBounds {
                s_max: *s_max,
                max_exp: *max_exp,
                max_const: *max_const,
            };
            let hit = sigma_upper_search(&f, &b);
            let v = json!({
                "poly": f,
                "bounds": b,
                "sigma_upper": hit.as_ref().map(|h| h.0),
                "circuit": hit.as_ref().map(|h| &h.1),
            });
            cx.emit(v, || match &hit {
                Some((s, c)) => format!("sigma <= {s}\n{}", c.to_json()),
                None => format!("no presentation with s <= {s_max} within the bounds"),
            })?;
            Ok(exit::OK)
        }
        Command::Enumerate { max_len } => {
            let (cat, outcome) = load_or_enumerate(&g.cache_dir, *max_len, EnumCaps::default())?;
            let counts: Vec<usize> = (0..=*max_len).map(|t| cat.count_at(t)).collect();
            let v = json!({"max_len": max_len, "entries": cat.len(), "per_length": counts, "prunes": cat.prunes, "cache": outcome});
            cx.emit(v, || {
                let mut s = format!("{} entries up to length {max_len}\n", cat.len());
                for (t, c) in counts.iter().enumerate() {
                    s.push_str(&format!("  tau {t}: {c}\n"));
                }
                s.push_str(&format!("cache: {}", serde_json::to_string(&outcome).expect("serializes")));
                s
            })?;
            Ok(exit::OK)
        }
        Command::Family { kind, s, d, j, analyze } => cmd_family(&mut cx, *kind, *s, *d, *j, *analyze),
        Command::Verify {
            s,
            count,
            max_exp,
            max_const,
            max_degree,
        } => {
            let b = CircuitBounds {
                max_exp: *max_exp,
                max_const: *max_const,
                max_degree: *max_degree,
            };
            cmd_verify(&mut cx, *s, *count, b)
        }
        Command::Digits { x, n } => {
            let v = parse_rational(x)?;
            let ds = digits(&v, cx.p, *n)?;
            let j = json!({"x": fmt_rational(&v), "p": cx.p, "n": n, "negative": ds.negative, "digits": ds.digits, "fractional": ds.fractional});
            cx.emit(j, || ds.to_string())?;
            Ok(exit::OK)
        }
        Command::Bounds { s, m, n, sets } => cmd_bounds(&mut cx, *s, m, n, sets.as_deref()),
    }
}

fn cmd_newton(cx: &mut Ctx, poly: &str) -> Result<i32> {
    let f = cx.poly(poly)?;
    let hull = newton_polygon(&f, cx.p)?;
    let prof = valuation_profile(&f, cx.p)?;
    let edges: Vec<Value> = hull
        .edges()
        .iter()
        .map(|e| json!({"slope": fmt_rational(&e.slope), "length": e.length}))
        .collect();
    let v = json!({"poly": f, "p": cx.p, "vertices": hull, "edges": edges, "profile": prof});
    cx.emit(v, || {
        let mut s = format!("vertices {hull}\n");
        for e in hull.edges() {
            s.push_str(&format!("edge slope {} length {}\n", fmt_rational(&e.slope), e.length));
        }
        s.push_str(&format!("profile {prof}"));
        s
    })?;
    Ok(exit::OK)
}

fn cmd_tau(cx: &mut Ctx, poly: &str, max_len: usize) -> Result<i32> {
    let f = cx.poly(poly)?;
    let (cat, outcome) = load_or_enumerate(&cx.g.cache_dir, max_len, EnumCaps::default())?;
    let tau = cat.tau(&f);
    let wit = cat.witness(&f);
    let v = json!({"poly": f, "max_len": max_len, "tau": tau, "witness": wit, "cache": outcome});
    cx.emit(v, || match (&tau, &wit) {
        (Some(t), Some(w)) => format!("tau {t}\nwitness {}", w.to_json()),
        _ if poly_to_key(&f).is_none() => "not an integer polynomial; no program computes it".into(),
        _ => format!("tau > {max_len}"),
    })?;
    Ok(exit::OK)
}

fn family_spec(cx: &Ctx, kind: FamilyKind, s: Option<u32>, d: Option<u64>, j: Option<u32>) -> Result<FamilySpec> {
    let need = |v: Option<u64>, name: &str| v.ok_or_else(|| Error::invalid(format!("--{name} is required")));
    Ok(match kind {
        FamilyKind::Extremal => FamilySpec::Extremal {
            p: cx.p,
            s: need(s.map(u64::from), "s")? as u32,
        },
        FamilyKind::CyclotomicShift => FamilySpec::CyclotomicShift { d: need(d, "d")? },
        FamilyKind::Logistic => FamilySpec::Logistic {
            j: need(j.map(u64::from), "j")? as u32,
        },
        FamilyKind::ShubSmale => FamilySpec::ShubSmale {
            j: need(j.map(u64::from), "j")? as u32,
        },
    })
}

fn cmd_family(cx: &mut Ctx, kind: FamilyKind, s: Option<u32>, d: Option<u64>, j: Option<u32>, analyze: bool) -> Result<i32> {
    let spec = family_spec(cx, kind, s, d, j)?;
    let m = family(spec, cx.cap)?;
    let mut v = json!({
        "spec": spec,
        "poly": m.poly,
        "slp_length": m.slp.as_ref().map(|s| s.len()),
        "circuit_gates": m.circuit.as_ref().map(|c| c.s),
    });
    let mut text = format!("{}\n{}\n", spec, m.poly);
    if let Some(slp) = &m.slp {
        text.push_str(&format!("constructive program length {}\n", slp.len()));
    }
    if let Some(c) = &m.circuit {
        text.push_str(&format!("circuit with {} gates\n", c.s));
    }
    let mut code = exit::OK;
    if analyze {
        let f = &m.poly;
        let profile = valuation_profile(f, cx.p)?;
        let distinct = distinct_valuation_count(f, cx.p)?;
        v["profile"] = serde_json::to_value(&profile)?;
        v["distinct_valuations"] = json!(distinct);
        text.push_str(&format!("profile {profile}\ndistinct valuations {distinct}\n"));
        if let Some(c) = &m.circuit {
            let rep = verify_report(c, cx.p, &cx.r, cx.cap)?;
            if !rep.all_pass() {
                code = exit::INTERNAL;
            }
            text.push_str(&rep.to_text());
            v["report"] = serde_json::to_value(&rep)?;
        }
        if kind == FamilyKind::Logistic {
            let closed = sturm_count(f, &Interval::closed(q(0), q(1))?)?;
            let open = sturm_count(f, &Interval::open(q(0), q(1))?)?;
            v["sturm"] = json!({"closed_0_1": closed, "open_0_1": open});
            text.push_str(&format!("real roots in [0,1]: {closed}\nreal roots in (0,1): {open}\n"));
        }
        if let Some(slp) = &m.slp {
            if !slp.is_empty() {
                let tr = tau_ratio(f, slp.len() as u64, true)?;
                text.push_str(&format!(
                    "integral roots {} with tau <= {}; implied exponent {}\n",
                    tr.integral_roots,
                    tr.tau,
                    tr.implied_exponent
                        .map_or("undefined".into(), |e| format!("{e:.6} (lower bound)"))
                ));
                v["tau_ratio"] = serde_json::to_value(&tr)?;
            }
        }
    }
    cx.emit(v, || text)?;
    Ok(code)
}

fn cmd_verify(cx: &mut Ctx, s: usize, count: u64, b: CircuitBounds) -> Result<i32> {
    let mut violations = 0u64;
    let mut skipped = 0u64;
    for i in 0..count {
        let seed = cx.g.seed.wrapping_add(i);
        let c = random_circuit(s, seed, b);
        let f = match circuit_expand(&c, cx.cap) {
            Ok(f) => f,
            Err(Error::DegreeCap { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if f.is_zero() {
            skipped += 1;
            continue;
        }
        let rep = verify_poly(&f, s as u64, cx.p, &cx.r, &format!("seed-{seed}"))?;
        violations += rep.violations().len() as u64;
        let v = json!({"seed": seed, "circuit": c, "report": rep});
        cx.emit(v, || rep.to_text())?;
    }
    let summary = json!({"summary": {"count": count, "skipped": skipped, "violations": violations}});
    cx.emit(summary, || format!("{count} circuits, {skipped} skipped, {violations} violations"))?;
    Ok(if violations == 0 { exit::OK } else { exit::INTERNAL })
}

fn parse_sets(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(|set| {
            set.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|e| Error::invalid(format!("index set {set:?}: {e}"))))
                .collect()
        })
        .collect()
}

fn cmd_bounds(cx: &mut Ctx, s: u64, m: &[u64], n: &[u64], sets: Option<&str>) -> Result<i32> {
    let p = cx.p;
    let r = cx.r.clone();
    let mut rows: Vec<(&str, BoundValue)> = vec![
        ("distinct valuations", BoundValue::Exact { value: bound_np(s) }),
        ("Q_p roots", bound_qp(p, s)),
        ("rational roots", bound_rational(s)),
        ("rational roots (p=2)", bound_rational_composed(s)),
        ("disk roots", bound_cx(p, s, &r)?),
        ("disk roots (chain)", bound_cx_chain(p, s, &r)?),
    ];
    if !m.is_empty() && !n.is_empty() {
        rows.push(("Q_p^* system roots", bound_amd(p, m, n)?));
    }
    if let Some(sets) = sets {
        let sets = parse_sets(sets)?;
        let rs = vec![r.clone(); m.len()];
        rows.push(("polydisk system roots", bound_pcfew(p, m, &sets, &rs)?));
    }
    let v = json!({
        "s": s, "p": p, "r": fmt_rational(&r),
        "bounds": rows.iter().map(|(k, b)| json!({"label": k, "value": bv(b)})).collect::<Vec<_>>(),
    });
    cx.emit(v, || {
        rows.iter()
            .map(|(k, b)| format!("{k:<24} {b}\n"))
            .collect::<String>()
    })?;
    Ok(exit::OK)
}
