//! The `mgn` command line.
//!
//! Exit codes: 0 success, 1 engine disagreement, 2 usage or precondition
//! error, 3 a proven identity failed. Conjecture residuals never change the
//! exit code.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::denom::{
    bundled_fixture, check_iz_fixture, check_lemma20, check_proposition17, compute_d, compute_script_d, parse_fixture,
    DenominatorReport,
};
use crate::error::{Error, Result};
use crate::exact::{format_fraction, format_rational, MultiIndex, Rational};
use crate::identities::{run_suite, Identity, IdentityReport};
use crate::moduli::{is_stable, psi_exponent_multisets};
use crate::npoint::NPointEngine;
use crate::virasoro::{
    build_generating_function, commutator_residual, kdv_residual, random_probe, substitution_check, virasoro_residuals,
};
use crate::volume::{parse_exponents, CorrelatorKey, CorrelatorTable, Provenance, VolumeEngine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREEMENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IDENTITY_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mgn", version, about = "Exact ψ/κ intersection numbers on moduli spaces of stable curves")]
pub struct Cli {
    /// Correlator cache file, read before and rewritten after the command.
    #[arg(long, global = true, env = "MGN_CACHE")]
    pub cache: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a single correlator.
    #[command(subcommand)]
    Compute(ComputeCommand),
    /// Check identities, Virasoro constraints or engine agreement.
    Verify(VerifyArgs),
    /// Denominator invariants D_{g,n} and script-D_g.
    Denom(DenomArgs),
    /// Dump the truncated generating function G(s,t) or exp(G).
    Series(SeriesArgs),
}

#[derive(Subcommand, Debug)]
pub enum ComputeCommand {
    /// <τ_{d_1}…τ_{d_n}>_g, checked against the n-point engine.
    Psi {
        #[arg(long)]
        genus: u32,
        /// comma-separated exponents, e.g. 2,3
        #[arg(long)]
        d: String,
    },
    /// <κ(b) τ_{d_1}…τ_{d_n}>_g
    Kappa {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value = "")]
        d: String,
        /// κ multi-index as index:mult pairs, e.g. 1:2,2:1
        #[arg(long)]
        b: MultiIndex,
        /// also evaluate the κ→ψ reduction and compare
        #[arg(long)]
        oracle: bool,
    },
    /// <κ(b)>_g on M̄_g, g ≥ 2
    PureKappa {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        b: MultiIndex,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// thm7 thm8 prop9 thm10 prop11 thm12 conj13 all (or thm7.1 …),
    /// virasoro, commutator, substitution, kdv, engines
    pub target: String,
    /// keep only grid points of this genus
    #[arg(long)]
    pub genus: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub gmax: u32,
    #[arg(long, default_value_t = 4)]
    pub nmax: u32,
    #[arg(long, default_value_t = 1)]
    pub bmax: u32,
    /// Virasoro index or range, e.g. 1 or -1..2
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub probes: usize,
}

#[derive(Args, Debug)]
pub struct DenomArgs {
    #[arg(long)]
    pub genus: u32,
    #[command(flatten)]
    pub mode: DenomMode,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct DenomMode {
    /// D_{g,n}
    #[arg(long)]
    pub n: Option<usize>,
    /// script-D_g, cross-checked against D_{g,3g-3}
    #[arg(long)]
    pub script_d: bool,
    /// prime orders of D_{g,3} for p ≤ g+1
    #[arg(long)]
    pub lemma20: bool,
    /// divisibility D_{g,n} | D_{g,n+1} up to this n
    #[arg(long, value_name = "NMAX")]
    pub prop17: Option<usize>,
    /// automorphism group orders to test against script-D_g
    #[arg(long, value_name = "FILE")]
    pub fixture: Option<PathBuf>,
    /// the bundled automorphism group orders for this genus
    #[arg(long)]
    pub iz: bool,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[arg(long)]
    pub gmax: u32,
    #[arg(long)]
    pub nmax: u32,
    #[arg(long, default_value_t = 0)]
    pub bmax: u32,
    /// exp(G) instead of G
    #[arg(long)]
    pub exp: bool,
}

/// Exit code for an engine error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Disagreement { .. } | Error::Inconsistent(_) => EXIT_DISAGREEMENT,
        Error::InvalidArgument(_) | Error::Unstable { .. } | Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_DISAGREEMENT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "mgn: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command, returning its exit code. Errors that are not
/// identity failures come back as `Err`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Error::invalid("--workers must be positive"));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| Error::invalid(e.to_string()))?;
    let table = Arc::new(CorrelatorTable::new());
    if let Some(path) = &cli.cache {
        table.load_if_present(path)?;
    }
    let engines = Engines { volume: VolumeEngine::with_table(table.clone()), npoint: NPointEngine::new() };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(cli, &engines, &mut buf));
    if let (Some(path), Ok(_)) = (&cli.cache, &result) {
        table.save(path)?;
    }
    out.write_all(&buf)?;
    result
}

struct Engines {
    volume: VolumeEngine,
    npoint: NPointEngine,
}

fn dispatch(cli: &Cli, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    match &cli.command {
        Command::Compute(c) => compute(c, cli.format, eng, out),
        Command::Verify(v) => verify(v, cli.format, eng, out),
        Command::Denom(d) => denom(d, cli.format, eng, out),
        Command::Series(s) => series(s, cli.format, eng, out),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}

fn join_d(d: &[u32]) -> String {
    d.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn compute(c: &ComputeCommand, format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    let (g, d, b, value) = match c {
        ComputeCommand::Psi { genus, d } => {
            let d = parse_exponents(d)?;
            if d.is_empty() {
                return Err(Error::invalid("--d needs at least one exponent"));
            }
            let value = eng.volume.psi_correlator_wk(*genus, &d)?;
            let other = eng.npoint.psi_correlator(*genus, &d);
            let key = CorrelatorKey::psi_only(*genus, &d);
            if key.is_admissible() {
                eng.volume.table().record(&key, &other, Provenance::NPoint)?;
            }
            (*genus, d, MultiIndex::empty(), value)
        }
        ComputeCommand::Kappa { genus, d, b, oracle } => {
            let d = parse_exponents(d)?;
            if d.is_empty() && *genus <= 1 {
                return Err(Error::Unstable { genus: *genus, points: 0 });
            }
            let value = eng.volume.correlator(*genus, &d, b)?;
            if *oracle {
                let other = eng.volume.kappa_reduction_oracle(*genus, &d, b)?;
                let key = CorrelatorKey::new(*genus, &d, b.clone());
                if key.is_admissible() {
                    eng.volume.table().record(&key, &other, Provenance::KappaOracle)?;
                }
            }
            (*genus, d, b.clone(), value)
        }
        ComputeCommand::PureKappa { genus, b } => (*genus, Vec::new(), b.clone(), eng.volume.pure_kappa_volume(*genus, b)?),
    };
    match format {
        Format::Plain => writeln!(out, "{}", format_rational(&value))?,
        Format::Json => writeln!(
            out,
            "{}",
            json!({ "g": g, "d": d, "b": b.to_string(), "value": format_fraction(&value) })
        )?,
        Format::Csv => {
            writeln!(out, "g,d,b,value")?;
            writeln!(out, "{}", csv_row(&[g.to_string(), join_d(&d), b.to_string(), format_fraction(&value)]))?;
        }
    }
    Ok(EXIT_OK)
}

fn parse_k_range(text: Option<&str>, default: (i32, i32)) -> Result<Vec<i32>> {
    let Some(text) = text else { return Ok((default.0..=default.1).collect()) };
    let bad = || Error::invalid(format!("bad --k {text:?}; expected an integer or a range like -1..2"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse::<i32>().map_err(|_| bad())?, b.trim().parse::<i32>().map_err(|_| bad())?),
        None => {
            let k = text.trim().parse::<i32>().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo < -1 || hi < lo {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn status(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn verify(v: &VerifyArgs, format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    match v.target.as_str() {
        "virasoro" => verify_virasoro(v, format, eng, out),
        "commutator" => verify_commutator(v, format, out),
        "substitution" => verify_substitution(v, format, eng, out),
        "kdv" => verify_kdv(v, format, eng, out),
        "engines" => verify_engines(v, format, eng, out),
        name => match Identity::parse_family(name) {
            Some(ids) => verify_identities(v, &ids, format, eng, out),
            None => Err(Error::invalid(format!("unknown verify target {name:?}"))),
        },
    }
}

fn identity_row(r: &IdentityReport) -> Vec<String> {
    vec![
        r.identity.name().to_string(),
        r.genus.to_string(),
        join_d(&r.d),
        r.b.to_string(),
        r.k.map(|k| k.to_string()).unwrap_or_default(),
        format_fraction(&r.lhs),
        format_fraction(&r.rhs),
        format_fraction(&r.residual),
        status(r.holds()).to_string(),
    ]
}

fn verify_identities(v: &VerifyArgs, ids: &[Identity], format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    let reports: Vec<IdentityReport> = run_suite(&eng.volume, ids, v.gmax, v.nmax as usize, v.bmax)?
        .into_iter()
        .filter(|r| v.genus.is_none_or(|g| r.genus == g))
        .collect();
    if format == Format::Csv {
        writeln!(out, "identity,g,d,b,k,lhs,rhs,residual,status")?;
    }
    for r in &reports {
        match format {
            Format::Plain => {
                let k = match r.k {
                    Some(k) if r.identity == Identity::Theorem12 => format!(" M={k}"),
                    Some(k) => format!(" k={k}"),
                    None => String::new(),
                };
                let b = if r.b.is_empty() { String::new() } else { format!(" b={}", r.b) };
                writeln!(
                    out,
                    "{:<5}  {:<6}  g={} d=[{}]{b}{k}  lhs={} rhs={}",
                    status(r.holds()),
                    r.identity.name(),
                    r.genus,
                    join_d(&r.d),
                    format_rational(&r.lhs),
                    format_rational(&r.rhs)
                )?;
            }
            Format::Json => writeln!(out, "{}", r.to_json())?,
            Format::Csv => writeln!(out, "{}", csv_row(&identity_row(r)))?,
        }
    }
    let failed_proven = reports.iter().filter(|r| !r.holds() && r.identity.is_proven()).count();
    let failed_conj = reports.iter().filter(|r| !r.holds() && !r.identity.is_proven()).count();
    match format {
        Format::Plain => writeln!(
            out,
            "{} checked, {failed_proven} proven identities failed, {failed_conj} conjecture residuals nonzero",
            reports.len()
        )?,
        Format::Json => writeln!(
            out,
            "{}",
            json!({ "summary": { "checked": reports.len(), "failed_proven": failed_proven, "nonzero_conjecture": failed_conj } })
        )?,
        Format::Csv => {}
    }
    Ok(if failed_proven > 0 { EXIT_IDENTITY_FAILED } else { EXIT_OK })
}

fn verify_virasoro(v: &VerifyArgs, format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    let ks = parse_k_range(v.k.as_deref(), (-1, 3))?;
    let reports = virasoro_residuals(&eng.volume, &ks, v.gmax, v.nmax, v.bmax)?;
    if format == Format::Csv {
        writeln!(out, "k,admitted,nonzero,status")?;
    }
    for r in &reports {
        match format {
            Format::Plain => {
                writeln!(out, "V_{:<2}  admitted={}  nonzero={}  {}", r.k, r.admitted(), r.nonzero().len(), status(r.holds()))?;
                for (m, c) in r.nonzero().iter().take(5) {
                    writeln!(out, "      [{m}] = {}", format_rational(c))?;
                }
            }
            Format::Json => writeln!(out, "{}", r.to_json())?,
            Format::Csv => writeln!(
                out,
                "{}",
                csv_row(&[r.k.to_string(), r.admitted().to_string(), r.nonzero().len().to_string(), status(r.holds()).into()])
            )?,
        }
    }
    Ok(if reports.iter().all(|r| r.holds()) { EXIT_OK } else { EXIT_IDENTITY_FAILED })
}

fn verify_commutator(v: &VerifyArgs, format: Format, out: &mut Vec<u8>) -> Result<i32> {
    let ks = parse_k_range(v.k.as_deref(), (-1, 3))?;
    let probes: Vec<_> =
        (0..v.probes).map(|i| random_probe(v.seed.wrapping_add(i as u64), 6, 6, 12, i % 2 == 1)).collect();
    if format == Format::Csv {
        writeln!(out, "n,m,probes,status")?;
    }
    let mut all = true;
    for &n in &ks {
        for &m in ks.iter().filter(|&&m| m < n) {
            let mut holds = true;
            for p in &probes {
                holds &= commutator_residual(n, m, p)?.is_zero();
            }
            all &= holds;
            match format {
                Format::Plain => writeln!(out, "[V_{n}, V_{m}] = {}·V_{}  probes={}  {}", n - m, n + m, probes.len(), status(holds))?,
                Format::Json => writeln!(out, "{}", json!({ "n": n, "m": m, "probes": probes.len(), "seed": v.seed, "status": status(holds) }))?,
                Format::Csv => writeln!(out, "{n},{m},{},{}", probes.len(), status(holds))?,
            }
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_IDENTITY_FAILED })
}

fn verify_substitution(v: &VerifyArgs, format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    let r = substitution_check(&eng.volume, &eng.npoint, v.gmax, v.nmax, v.bmax)?;
    let nonzero = r.residual.len();
    match format {
        Format::Plain => {
            writeln!(out, "substitution  gmax={} nmax={} bmax={}  compared={}  nonzero={}  {}", v.gmax, v.nmax, v.bmax, r.compared(), nonzero, status(r.holds()))?;
            for (m, c) in r.residual.sorted_terms().iter().take(5) {
                writeln!(out, "      [{m}] = {}", format_rational(c))?;
            }
        }
        Format::Json => writeln!(
            out,
            "{}",
            json!({ "check": "substitution", "gmax": v.gmax, "nmax": v.nmax, "bmax": v.bmax, "compared": r.compared(), "nonzero": r.residual.to_json(), "status": status(r.holds()) })
        )?,
        Format::Csv => {
            writeln!(out, "check,gmax,nmax,bmax,compared,nonzero,status")?;
            writeln!(out, "substitution,{},{},{},{},{nonzero},{}", v.gmax, v.nmax, v.bmax, r.compared(), status(r.holds()))?;
        }
    }
    Ok(if r.holds() { EXIT_OK } else { EXIT_IDENTITY_FAILED })
}

fn verify_kdv(v: &VerifyArgs, format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    let r = kdv_residual(&eng.volume, v.gmax, v.nmax)?;
    let c = r.constant.as_ref().map(format_fraction);
    let state = match &r.constant {
        None => "uncalibrated",
        Some(_) => status(r.holds()),
    };
    match format {
        Format::Plain => writeln!(
            out,
            "kdv  gmax={} nmax={}  c={}  nonzero={}  {state}",
            v.gmax,
            v.nmax,
            c.clone().unwrap_or_else(|| "-".into()),
            r.residual.len()
        )?,
        Format::Json => writeln!(
            out,
            "{}",
            json!({ "check": "kdv", "gmax": v.gmax, "nmax": v.nmax, "constant": c, "nonzero": r.residual.to_json(), "status": state })
        )?,
        Format::Csv => {
            writeln!(out, "check,gmax,nmax,constant,nonzero,status")?;
            writeln!(out, "kdv,{},{},{},{},{state}", v.gmax, v.nmax, c.unwrap_or_default(), r.residual.len())?;
        }
    }
    Ok(if r.constant.is_some() && !r.holds() { EXIT_IDENTITY_FAILED } else { EXIT_OK })
}

/// All pure ψ numbers with `g ≤ gmax`, `n ≤ nmax` from the n-point engine,
/// its second formula and the τ/κ recursion. Disagreement is an error.
fn verify_engines(v: &VerifyArgs, format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    let mut count = 0usize;
    for g in 0..=v.gmax {
        for n in 1..=v.nmax as usize {
            if !is_stable(g, n) {
                continue;
            }
            for d in psi_exponent_multisets(g, n) {
                let a = eng.npoint.psi_correlator(g, &d);
                let c = eng.volume.psi_correlator_wk(g, &d)?;
                let key = CorrelatorKey::psi_only(g, &d);
                if a != c {
                    return Err(disagreement(&key, &c, "recursion", &a, "n-point"));
                }
                if n >= 2 {
                    let b = eng.npoint.psi_correlator_theorem3(g, &d)?;
                    if b != a {
                        return Err(disagreement(&key, &a, "n-point", &b, "exp-sum n-point"));
                    }
                }
                eng.volume.table().record(&key, &a, Provenance::NPoint)?;
                count += 1;
            }
        }
    }
    match format {
        Format::Plain => writeln!(out, "engines  gmax={} nmax={}  {count} correlators agree", v.gmax, v.nmax)?,
        Format::Json => writeln!(out, "{}", json!({ "check": "engines", "gmax": v.gmax, "nmax": v.nmax, "agree": count }))?,
        Format::Csv => {
            writeln!(out, "check,gmax,nmax,agree")?;
            writeln!(out, "engines,{},{},{count}", v.gmax, v.nmax)?;
        }
    }
    Ok(EXIT_OK)
}

fn disagreement(key: &CorrelatorKey, a: &Rational, a_by: &str, b: &Rational, b_by: &str) -> Error {
    Error::Disagreement {
        key: key.to_string(),
        stored: format_fraction(a),
        stored_by: a_by.into(),
        computed: format_fraction(b),
        computed_by: b_by.into(),
    }
}

fn denom_report(r: &DenominatorReport, format: Format, out: &mut Vec<u8>) -> Result<()> {
    let name = match r.kind {
        crate::denom::DenominatorKind::Psi { points } => format!("D_{{{},{points}}}", r.genus),
        crate::denom::DenominatorKind::Kappa => format!("script-D_{}", r.genus),
    };
    match format {
        Format::Plain => {
            write!(out, "{name} = {} = {}  ({} correlators)", r.value, r.factorization_string(), r.correlators)?;
            if r.cross_check == Some(true) {
                write!(out, "  equals D_{{{},{}}}", r.genus, 3 * r.genus - 3)?;
            }
            writeln!(out)?;
        }
        Format::Json => writeln!(out, "{}", r.to_json())?,
        Format::Csv => {
            writeln!(out, "invariant,value,factorization,correlators,cross_check")?;
            let cross = r.cross_check.map(|b| b.to_string()).unwrap_or_default();
            writeln!(out, "{}", csv_row(&[name, r.value.to_string(), r.factorization_string(), r.correlators.to_string(), cross]))?;
        }
    }
    Ok(())
}

fn denom(a: &DenomArgs, format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    let g = a.genus;
    let m = &a.mode;
    if let Some(n) = m.n {
        denom_report(&compute_d(&eng.npoint, g, n)?, format, out)?;
        return Ok(EXIT_OK);
    }
    if m.script_d {
        denom_report(&compute_script_d(&eng.volume, &eng.npoint, g)?, format, out)?;
        return Ok(EXIT_OK);
    }
    let rows: Vec<(String, Value, bool)> = if m.lemma20 {
        check_lemma20(&eng.npoint, g)?
            .into_iter()
            .map(|v| {
                (format!("ord_{}(D_{{{g},3}}) = {} >= 2", v.prime, v.order), json!({ "prime": v.prime, "order": v.order }), v.holds)
            })
            .collect()
    } else if let Some(nmax) = m.prop17 {
        check_proposition17(&eng.volume, &eng.npoint, g, nmax)?
            .into_iter()
            .map(|v| {
                let j = json!({ "statement": v.statement, "divisor": v.divisor.to_string(), "multiple": v.multiple.to_string() });
                (format!("{}  ({} | {})", v.statement, v.divisor, v.multiple), j, v.holds)
            })
            .collect()
    } else {
        let orders = match &m.fixture {
            Some(path) => parse_fixture(&std::fs::read_to_string(path)?)?,
            None => bundled_fixture(g).ok_or_else(|| Error::invalid(format!("no bundled fixture for genus {g}")))?,
        };
        check_iz_fixture(&eng.volume, &eng.npoint, g, &orders)?
            .into_iter()
            .map(|v| (format!("{} | script-D_{g}", v.order), json!({ "order": v.order }), v.divides))
            .collect()
    };
    if format == Format::Csv {
        writeln!(out, "check,status")?;
    }
    for (text, j, holds) in &rows {
        match format {
            Format::Plain => writeln!(out, "{:<5}  {text}", status(*holds))?,
            Format::Json => {
                let mut j = j.clone();
                j["status"] = json!(status(*holds));
                writeln!(out, "{j}")?;
            }
            Format::Csv => writeln!(out, "{}", csv_row(&[text.clone(), status(*holds).into()]))?,
        }
    }
    Ok(if rows.iter().all(|r| r.2) { EXIT_OK } else { EXIT_IDENTITY_FAILED })
}

fn series(a: &SeriesArgs, format: Format, eng: &Engines, out: &mut Vec<u8>) -> Result<i32> {
    let g = build_generating_function(&eng.volume, a.gmax, a.nmax, a.bmax)?;
    let s = if a.exp { g.exp()? } else { g };
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({ "series": if a.exp { "exp(G)" } else { "G" }, "gmax": a.gmax, "nmax": a.nmax, "bmax": a.bmax, "coefficients": s.to_json() })
        )?,
        Format::Plain => {
            for (m, c) in s.sorted_terms() {
                writeln!(out, "{m}  {}", format_rational(&c))?;
            }
        }
        Format::Csv => {
            writeln!(out, "monomial,coefficient")?;
            for (m, c) in s.sorted_terms() {
                writeln!(out, "{},{}", csv_field(&m.to_string()), format_fraction(&c))?;
            }
        }
    }
    Ok(EXIT_OK)
}
