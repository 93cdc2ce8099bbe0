//! Subcommand execution: each one fronts a library scan, renders CSV, and
//! (for the long scans) drives the checkpointed block loop.

use std::fs;
use std::path::{Path, PathBuf};

use ellstat_core::census::{self, CensusTotals};
use ellstat_core::constants;
use ellstat_core::ecfp::local_invariants;
use ellstat_core::modmath::{prime_count, DEFAULT_SEGMENT_SPAN};
use ellstat_core::splitting::{self, ScanConfig, SplitAccumulator};
use ellstat_core::twins::{self, TwinHistogram, TwinScanConfig};
use ellstat_core::Curve;

use crate::checkpoint::{self, CHECKPOINT_VERSION};
use crate::output::{format_f64_5, format_ratio, header, li2};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub curve_spec: String,
    pub curve: Curve,
    pub xmax: u64,
    pub seed: u64,
    pub threads: usize,
    pub block_size: u64,
    pub serre_m: Option<u64>,
    pub d: Option<u64>,
    pub n: Option<u64>,
    pub k: u32,
    pub include_small: bool,
    pub oracle: bool,
    pub out: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.xmax < 5 {
            return Err(CliError::Usage("xmax must be at least 5".into()));
        }
        if self.threads == 0 {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        if self.block_size < 1024 {
            return Err(CliError::Usage("block size must be at least 1024".into()));
        }
        if self.block_size > DEFAULT_SEGMENT_SPAN && self.block_size % DEFAULT_SEGMENT_SPAN != 0 {
            return Err(CliError::Usage(format!(
                "block size above {DEFAULT_SEGMENT_SPAN} must be a multiple of the sieve segment"
            )));
        }
        Ok(())
    }

    fn config_fields(&self, subcommand: &str) -> Vec<(&'static str, String)> {
        let mut f = vec![
            ("curve", self.curve_spec.clone()),
            ("xmax", self.xmax.to_string()),
            ("seed", self.seed.to_string()),
            ("block", self.block_size.to_string()),
            ("include_small", self.include_small.to_string()),
        ];
        if let Some(m) = self.serre_m {
            f.push(("serre_m", m.to_string()));
        }
        match subcommand {
            "twins" => f.push(("k", self.k.to_string())),
            "twin-n" => f.push(("n", self.n.unwrap_or(0).to_string())),
            _ => {}
        }
        f
    }

    /// Stable scan fingerprint; exposed so tests can fabricate
    /// interrupted-run checkpoints the binary will accept.
    pub fn fingerprint(&self, subcommand: &str) -> String {
        let mut parts: Vec<String> = vec![subcommand.to_string()];
        parts.extend(self.config_fields(subcommand).iter().map(|(k, v)| format!("{k}={v}")));
        parts.push(format!("cpv={CHECKPOINT_VERSION}"));
        checkpoint::fingerprint(&parts)
    }
}

/// Write the finished output in one shot (stdout when no path given); a
/// failed run leaves no partial file behind.
fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(CliError::from),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Run a checkpointed block scan: `resume` loads any compatible checkpoint,
/// every merged block is persisted back when a checkpoint path is given.
fn checkpointed<A, FScan>(
    cfg: &RunConfig,
    subcommand: &str,
    scan: FScan,
) -> Result<A, CliError>
where
    A: serde::Serialize + serde::de::DeserializeOwned,
    FScan: FnOnce(u64, Option<A>, &mut dyn FnMut(u64, &A)) -> Result<A, ellstat_core::ScanError>,
{
    let fp = cfg.fingerprint(subcommand);
    let (start_block, initial) = match &cfg.checkpoint {
        Some(path) => match checkpoint::load::<A>(path, &fp)? {
            Some(cp) => (cp.last_completed_block + 1, Some(cp.accumulator)),
            None => (0, None),
        },
        None => (0, None),
    };
    let cp_path = cfg.checkpoint.clone();
    let mut save_err: Option<CliError> = None;
    let acc = scan(start_block, initial, &mut |idx, acc| {
        if let Some(path) = &cp_path {
            if let Err(e) = checkpoint::save_state(path, &fp, idx, acc) {
                save_err.get_or_insert(e);
            }
        }
    })?;
    match save_err {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

pub fn run_invariants(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let mut body = header("invariants", &cfg.config_fields("invariants"));
    body.push_str("p,status,a,n,d1,d2,supersingular\n");
    let mut rows = Vec::new();
    if cfg.include_small {
        for p in [2u64, 3] {
            rows.push(local_invariants(&cfg.curve, p, cfg.seed).map_err(ellstat_core::ScanError::from)?);
        }
    }
    for p in ellstat_core::PrimeRange::new(5, cfg.xmax).iter() {
        rows.push(local_invariants(&cfg.curve, p, cfg.seed).map_err(ellstat_core::ScanError::from)?);
    }
    for inv in rows {
        let status = if inv.is_good() { "good" } else { "bad" };
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            inv.p, status, inv.a, inv.n, inv.d1, inv.d2, inv.supersingular
        ));
    }
    emit(&cfg.out, &body)
}

fn split_scan_config(cfg: &RunConfig) -> ScanConfig {
    ScanConfig {
        seed: cfg.seed,
        serre_m: cfg.serre_m,
        threads: cfg.threads,
        block_span: cfg.block_size,
        include_small_primes: cfg.include_small,
    }
}

fn run_split_scan(cfg: &RunConfig, subcommand: &str) -> Result<SplitAccumulator, CliError> {
    let scan_cfg = split_scan_config(cfg);
    checkpointed(cfg, subcommand, |start, initial, on_block| {
        splitting::scan_with_progress(&cfg.curve, cfg.xmax, &scan_cfg, start, initial, on_block)
    })
}

pub fn run_split(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let acc = run_split_scan(cfg, "split")?;
    let pi = prime_count(cfg.xmax);
    let mut body = header("split", &cfg.config_fields("split"));
    if let Some(d) = cfg.d {
        body.push_str(&format!("# pi_split(d={d}) = {}\n", acc.pi_split(d)));
    }
    body.push_str("X,pi,S,ratio\n");
    body.push_str(&format!(
        "{},{},{},{}\n",
        cfg.xmax,
        pi,
        acc.s_sum,
        format_ratio(acc.s_sum, pi)
    ));
    emit(&cfg.out, &body)
}

pub fn run_outside(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let acc = run_split_scan(cfg, "outside")?;
    let mut body = header("outside", &cfg.config_fields("outside"));
    if acc.outside.iter().any(|o| o.p < 100) {
        body.push_str("# note: rows with p < 100 are small-prime artifacts of the definition\n");
    }
    body.push_str("p,d1,galois_order,class\n");
    for o in &acc.outside {
        let order = o.galois_order.map(|g| g.to_string()).unwrap_or_default();
        let class = match o.class {
            splitting::OutsideClass::Outside => "outside",
            splitting::OutsideClass::Weak => "weak",
        };
        body.push_str(&format!("{},{},{},{}\n", o.p, o.d1, order, class));
    }
    emit(&cfg.out, &body)
}

fn twin_scan_config(cfg: &RunConfig) -> TwinScanConfig {
    TwinScanConfig {
        seed: cfg.seed,
        threads: cfg.threads,
        block_span: cfg.block_size,
        include_small_primes: cfg.include_small,
    }
}

pub fn run_twins(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let scan_cfg = twin_scan_config(cfg);
    let h: TwinHistogram = checkpointed(cfg, "twins", |start, initial, on_block| {
        twins::twin_scan_with_progress(&cfg.curve, cfg.xmax, &scan_cfg, start, initial, on_block)
    })?;
    let rep = twins::report(&h, cfg.k.max(1))?;
    let mut body = header("twins", &cfg.config_fields("twins"));
    body.push_str("X,S_prime,ratio_li2,jX\n");
    let ratio = rep.s_prime as f64 / li2(cfg.xmax as f64);
    body.push_str(&format!(
        "{},{},{},{}\n",
        cfg.xmax,
        rep.s_prime,
        format_f64_5(ratio),
        rep.j_values
    ));
    emit(&cfg.out, &body)?;
    // multiplicity census goes to a sibling file (or stdout section)
    let mut census_body = header("twins-census", &cfg.config_fields("twins"));
    census_body.push_str("k,count\n");
    for (k, count) in &rep.multiplicity_census {
        census_body.push_str(&format!("{k},{count}\n"));
    }
    match &cfg.out {
        Some(path) => {
            let census_path = sibling_with_suffix(path, ".census.csv");
            fs::write(census_path, census_body)?;
        }
        None => print!("{census_body}"),
    }
    Ok(())
}

fn sibling_with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}{suffix}"))
}

pub fn run_twin_n(cfg: &RunConfig) -> Result<(), CliError> {
    let n = cfg.n.ok_or_else(|| CliError::Usage("twin-n requires --n".into()))?;
    if n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let (m, (lo, hi), primes) = twins::twin_multiplicity(&cfg.curve, n, cfg.seed)?;
    let mut body = header("twin-n", &cfg.config_fields("twin-n"));
    body.push_str("n,M,window_lo,window_hi,primes\n");
    let list = primes.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
    body.push_str(&format!("{n},{m},{lo},{hi},{list}\n"));
    emit(&cfg.out, &body)
}

pub fn run_census(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let totals: CensusTotals = checkpointed(cfg, "census", |start, initial, on_block| {
        census::census_averages_with_progress(
            cfg.xmax,
            cfg.threads,
            cfg.block_size,
            start,
            initial,
            on_block,
        )
    })?;
    if cfg.oracle {
        crate::oracle::check_census_against_brute_force(cfg.xmax.min(250))?;
    }
    let c = constants::linnik_constant(1e-9)
        .map_err(|e| CliError::Io(e.to_string()))?
        .value_f64();
    let expected = c * cfg.xmax as f64 / 4.0;
    let mut body = header("census", &cfg.config_fields("census"));
    body.push_str("X,sum_all,sum_small,sum_large,ratio_cX4\n");
    body.push_str(&format!(
        "{},{},{},{},{}\n",
        cfg.xmax,
        totals.sum_all,
        totals.sum_small,
        totals.sum_large,
        format_f64_5(totals.sum_all as f64 / expected)
    ));
    emit(&cfg.out, &body)
}

pub fn run_constants(cfg: &RunConfig) -> Result<(), CliError> {
    let tol = 1e-9;
    let mut body = header("constants", &cfg.config_fields("constants"));
    body.push_str("name,rational,value,tail_bound\n");
    let c0 = constants::c0(tol).map_err(|e| CliError::Io(e.to_string()))?;
    body.push_str(&format!(
        "c0,,{},{:.1e}\n",
        c0.value.to_string_digits(10),
        c0.tail_bound
    ));
    let linnik = constants::linnik_constant(tol).map_err(|e| CliError::Io(e.to_string()))?;
    body.push_str(&format!(
        "linnik,,{},{:.1e}\n",
        linnik.value.to_string_digits(10),
        linnik.tail_bound
    ));
    if let Some(m) = cfg.serre_m {
        let (cp, c) = constants::serre_constant(m, tol).map_err(|e| CliError::Io(e.to_string()))?;
        body.push_str(&format!(
            "c_prime,{}/{},{},0\n",
            cp.numer(),
            cp.denom(),
            constants::Dec::from_ratio(&cp).to_string_digits(10)
        ));
        body.push_str(&format!(
            "c,,{},{:.1e}\n",
            c.value.to_string_digits(10),
            c.tail_bound
        ));
    }
    emit(&cfg.out, &body)
}

pub fn run_oracle(cfg: &RunConfig) -> Result<(), CliError> {
    crate::oracle::run_all(cfg.xmax)
}
