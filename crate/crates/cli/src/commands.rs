use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use entrolab::horseshoe::{check_certificate_with, horseshoe_bound, search_lower_bounds, HorseshoeCert, HorseshoeMap, SearchBudget};
use entrolab::interval_maps::{
    entropy_via_variation_capped, realize_computable, PwlMap, QuadMap, VariationStatus, DEFAULT_NODE_CAP,
};
use entrolab::logistic::{
    entropy_at, CenterCache, LogisticError, SandwichBudget, SandwichResult, DEFAULT_BITS, PERIOD_CAP,
};
use entrolab::symbolic::{kappa_decode, kappa_encode, kappa_modulus, parse_word, Sft};
use entrolab::{RatInterval, Rational};
use serde_json::{json, Value};

use crate::format::{bound_json, bound_line, decimal, sample_json, sample_line};
use crate::{Cli, Command, EntropyCommand, Format, Method, RunArgs, SftCommand};

pub enum CliError {
    Usage(String),
    Budget,
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget => 3,
            CliError::Failed(_) => 1,
        }
    }

    pub fn message(&self) -> Option<String> {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => Some(m.clone()),
            CliError::Budget => Some("budget exceeded before reaching the requested width".into()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Settings shared by all commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub bits: Option<u32>,
    pub budget: Option<Duration>,
    pub cache_path: Option<PathBuf>,
    pub node_cap: usize,
    pub format: Format,
}

impl RunConfig {
    fn from_args(args: RunArgs) -> Self {
        let env = std::env::var_os("ENTROLAB_CACHE").filter(|v| !v.is_empty());
        RunConfig {
            bits: args.bits,
            budget: args.budget_seconds.map(Duration::from_secs_f64),
            cache_path: env.map(PathBuf::from).or(args.cache_path),
            node_cap: args.node_cap.unwrap_or(DEFAULT_NODE_CAP),
            format: args.format,
        }
    }

    fn cache(&self) -> Result<CenterCache> {
        match &self.cache_path {
            Some(p) => CenterCache::open(p).map_err(|e| CliError::Usage(e.to_string())),
            None => Ok(CenterCache::in_memory()),
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = RunConfig::from_args(cli.config);
    match cli.command {
        Command::Entropy(EntropyCommand::Logistic { r, eps, max_period }) => logistic(&cfg, r, eps, max_period),
        Command::Entropy(EntropyCommand::Pwl { file, method, max_n }) => pwl(&cfg, &file, method, max_n),
        Command::Realize { h, out } => realize(&cfg, h, &out),
        Command::Sft(cmd) => sft(&cfg, cmd),
        Command::Check { file, cert } => check(&cfg, &file, &cert),
        Command::Centers { max_period } => centers(&cfg, max_period),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{v}")?;
    Ok(())
}

fn logistic_error(e: LogisticError) -> CliError {
    match e {
        LogisticError::InvalidArgument(m) => CliError::Usage(m),
        LogisticError::Cache(e) => CliError::Usage(e.to_string()),
        other => CliError::Failed(other.to_string()),
    }
}

fn logistic(cfg: &RunConfig, r: Rational, eps: Rational, max_period: Option<u32>) -> Result<()> {
    let max_period = max_period.unwrap_or(PERIOD_CAP);
    if max_period > PERIOD_CAP {
        return Err(CliError::Usage(format!("--max-period must be at most {PERIOD_CAP}")));
    }
    let budget = SandwichBudget {
        max_period,
        time_limit: cfg.budget,
        bits: cfg.bits.unwrap_or(DEFAULT_BITS),
        ..SandwichBudget::default()
    };
    let mut cache = cfg.cache()?;
    let start = Instant::now();
    let (res, status) = match entropy_at(&RatInterval::point(r.clone()), &eps, &budget, &mut cache) {
        Ok(res) => (res, Ok(())),
        Err(LogisticError::BudgetExceeded(res)) => (*res, Err(CliError::Budget)),
        Err(e) => return Err(logistic_error(e)),
    };
    report_sandwich(cfg, &r, &eps, &res, status.is_ok())?;
    eprintln!("time\t{:.3}s", start.elapsed().as_secs_f64());
    status
}

fn report_sandwich(cfg: &RunConfig, r: &Rational, eps: &Rational, res: &SandwichResult, ok: bool) -> Result<()> {
    let periods: Vec<String> = res.periods.iter().map(u32::to_string).collect();
    match cfg.format {
        Format::Tsv => {
            let mut out = io::stdout().lock();
            writeln!(out, "{}", bound_line(&res.bound))?;
            writeln!(out, "{}", sample_line(&res.below))?;
            writeln!(out, "{}", sample_line(&res.above))?;
            writeln!(out, "periods\t{}", periods.join(","))?;
            if !ok {
                writeln!(out, "BUDGET_EXCEEDED")?;
            }
            Ok(())
        }
        Format::Json => emit(&json!({
            "r": r.to_string(),
            "eps": eps.to_string(),
            "bound": bound_json(&res.bound),
            "below": sample_json(&res.below),
            "above": sample_json(&res.above),
            "periods": res.periods,
            "status": if ok { "OK" } else { "BUDGET_EXCEEDED" },
        })),
    }
}

enum MapFile {
    Pwl(PwlMap),
    Quad(QuadMap),
}

fn load_map(path: &Path) -> Result<MapFile> {
    let text = read(path)?;
    match PwlMap::from_json(&text) {
        Ok(f) => Ok(MapFile::Pwl(f)),
        Err(pwl_err) => match serde_json::from_str::<QuadMap>(&text) {
            Ok(q) => Ok(MapFile::Quad(q)),
            Err(_) => Err(CliError::Usage(format!("{}: {pwl_err}", path.display()))),
        },
    }
}

fn pwl(cfg: &RunConfig, file: &Path, method: Method, max_n: Option<u32>) -> Result<()> {
    let map = load_map(file)?;
    match (method, map) {
        (Method::Horseshoe, MapFile::Pwl(f)) => stream_horseshoes(cfg, &f, max_n.unwrap_or(12)),
        (Method::Horseshoe, MapFile::Quad(q)) => stream_horseshoes(cfg, &q, max_n.unwrap_or(8)),
        (Method::Variation, MapFile::Quad(_)) => {
            Err(CliError::Usage("the variation method needs a piecewise-linear map".into()))
        }
        (Method::Variation, MapFile::Pwl(f)) => {
            let n = max_n.unwrap_or(8);
            let bits = cfg.bits.unwrap_or(32);
            let v = entropy_via_variation_capped(&f, n, bits, cfg.node_cap)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            let status = match v.status {
                VariationStatus::Certified => "CERTIFIED",
                VariationStatus::Estimate => "ESTIMATE",
            };
            match cfg.format {
                Format::Tsv => {
                    let iterate = v.iterate.map(|n| format!("\t{n}")).unwrap_or_default();
                    println!("{}\t{status}{iterate}", bound_line(&v.bound));
                    Ok(())
                }
                Format::Json => emit(&json!({
                    "bound": bound_json(&v.bound),
                    "status": status,
                    "iterate": v.iterate,
                })),
            }
        }
    }
}

fn stream_horseshoes<M: HorseshoeMap>(cfg: &RunConfig, f: &M, max_n: u32) -> Result<()> {
    let mut budget = SearchBudget::with_max_n(max_n);
    budget.node_cap = cfg.node_cap;
    if let Some(b) = cfg.bits {
        budget.bits = b;
    }
    let start = Instant::now();
    let mut out = io::stdout().lock();
    for rec in search_lower_bounds(f, budget) {
        match cfg.format {
            Format::Tsv => writeln!(out, "{rec}")?,
            Format::Json => {
                let cert: Value = serde_json::from_str(&rec.cert.to_json()).expect("certificate json");
                let line = json!({
                    "p": rec.cert.p(),
                    "n": rec.cert.n(),
                    "lo": rec.bound.lo().to_string(),
                    "hi": rec.bound.hi().to_string(),
                    "certificate": cert,
                });
                writeln!(out, "{line}")?;
            }
        }
        out.flush()?;
        if cfg.budget.is_some_and(|t| start.elapsed() > t) {
            return Err(CliError::Budget);
        }
    }
    Ok(())
}

fn check(cfg: &RunConfig, file: &Path, cert_path: &Path) -> Result<()> {
    let map = load_map(file)?;
    let cert = HorseshoeCert::from_json(&read(cert_path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", cert_path.display())))?;
    let bits = cfg.bits.unwrap_or(64);
    let valid = match &map {
        MapFile::Pwl(f) => check_certificate_with(f, &cert, bits),
        MapFile::Quad(q) => check_certificate_with(q, &cert, bits),
    };
    let bound = horseshoe_bound(cert.p(), cert.n(), 32);
    match cfg.format {
        Format::Tsv => {
            if valid {
                println!("VALID\t{}\t{}\t{}\t{}", cert.p(), cert.n(), decimal(bound.lo(), false), decimal(bound.hi(), true));
            } else {
                println!("INVALID");
            }
        }
        Format::Json => emit(&json!({
            "valid": valid,
            "p": cert.p(),
            "n": cert.n(),
            "lo": valid.then(|| bound.lo().to_string()),
            "hi": valid.then(|| bound.hi().to_string()),
        }))?,
    }
    if valid {
        Ok(())
    } else {
        Err(CliError::Failed("certificate rejected".into()))
    }
}

fn realize(cfg: &RunConfig, h: Rational, out: &Path) -> Result<()> {
    let bits = cfg.bits.unwrap_or(24);
    let f = realize_computable(&RatInterval::point(h), bits).map_err(|e| CliError::Usage(e.to_string()))?;
    let v = entropy_via_variation_capped(&f, 1, bits, cfg.node_cap).map_err(|e| CliError::Failed(e.to_string()))?;
    let slope = f.slope_detect().unwrap_or_else(Rational::one);
    fs::write(out, f.to_json() + "\n").map_err(|e| CliError::Failed(format!("{}: {e}", out.display())))?;
    match cfg.format {
        Format::Tsv => {
            println!("slope\t{slope}");
            println!("{}", bound_line(&v.bound));
            Ok(())
        }
        Format::Json => emit(&json!({
            "slope": slope.to_string(),
            "bound": bound_json(&v.bound),
            "out": out.display().to_string(),
        })),
    }
}

fn load_sft(path: &Path) -> Result<Sft> {
    Sft::from_json(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn sft(cfg: &RunConfig, cmd: SftCommand) -> Result<()> {
    match cmd {
        SftCommand::Entropy { file, eps } => {
            let z = load_sft(&file)?;
            let b = z.entropy(&eps).map_err(|e| CliError::Usage(e.to_string()))?;
            match cfg.format {
                Format::Tsv => {
                    println!("{}", bound_line(&b));
                    Ok(())
                }
                Format::Json => emit(&json!({ "bound": bound_json(&b) })),
            }
        }
        SftCommand::Mixing { file } => {
            let m = load_sft(&file)?.check_mixing();
            match cfg.format {
                Format::Tsv => {
                    println!("{m}");
                    Ok(())
                }
                Format::Json => emit(&json!({ "mixing": m.to_string() })),
            }
        }
        SftCommand::Count { file, n } => {
            let c = load_sft(&file)?.count_words(n);
            match cfg.format {
                Format::Tsv => {
                    println!("{n}\t{c}");
                    Ok(())
                }
                Format::Json => emit(&json!({ "n": n, "count": c.to_string() })),
            }
        }
        SftCommand::Kappa { file, encode, decode, modulus } => {
            let z = load_sft(&file)?;
            let usage = |e: entrolab::symbolic::SftError| CliError::Usage(e.to_string());
            let (op, result) = if let Some(w) = encode {
                let w = z.parse_word(&w).map_err(usage)?;
                let b = kappa_encode(&z, &w).map_err(usage)?;
                ("encode", b.iter().map(|d| char::from(b'0' + d)).collect::<String>())
            } else if let Some(b) = decode {
                let bits: Vec<u8> = parse_word(&b, 2)
                    .map_err(usage)?
                    .into_iter()
                    .map(|d| d as u8)
                    .collect();
                let w = kappa_decode(&z, &bits).map_err(usage)?;
                ("decode", z.format_word(&w))
            } else if let Some(m) = modulus {
                ("modulus", kappa_modulus(&z, m).map_err(usage)?.to_string())
            } else {
                return Err(CliError::Usage("one of --encode, --decode, --modulus is required".into()));
            };
            match cfg.format {
                Format::Tsv => {
                    println!("{result}");
                    Ok(())
                }
                Format::Json => emit(&json!({ "op": op, "result": result })),
            }
        }
    }
}

fn centers(cfg: &RunConfig, max_period: u32) -> Result<()> {
    if max_period > PERIOD_CAP {
        return Err(CliError::Usage(format!("--max-period must be at most {PERIOD_CAP}")));
    }
    let mut cache = cfg.cache()?;
    cache.ensure(max_period).map_err(logistic_error)?;
    for (p, cell) in cache.unresolved() {
        eprintln!("unresolved\t{p}\t{cell}");
    }
    let list = cache.centers_up_to(max_period);
    match cfg.format {
        Format::Tsv => {
            let mut out = io::stdout().lock();
            for c in list {
                let (r, h) = (c.r_enc(), c.entropy());
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    c.period(),
                    decimal(r.lo(), false),
                    decimal(r.hi(), true),
                    decimal(h.lo(), false),
                    decimal(h.hi(), true)
                )?;
            }
            Ok(())
        }
        Format::Json => emit(&serde_json::to_value(&list).expect("centers serialize")),
    }
}
