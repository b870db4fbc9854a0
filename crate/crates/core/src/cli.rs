//! Command-line front end and the per-curve report.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, PrimePair};
use crate::curve::{intstr, Invariants, RationalPoint, Sign, TwinCurve};
use crate::descent::{self, Certificate, DescentSummary, PredictedDims};
use crate::localdata::{self, LocalData};
use crate::localsolve::{self, Family, LocalPlace, QuarticSpace, SpaceVerdicts};
use crate::rank1::{self, System};

/// Environment variable read when `--jobs` is absent.
pub const JOBS_ENV: &str = "TWIN_DESCENT_JOBS";

/// Good primes listed alongside the bad ones in a report.
const SPOT_CHECK_LIMIT: u64 = 13;

/// Everything computed for one curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub p: u64,
    pub q: u64,
    pub sigma: Sign,
    pub invariants: Invariants,
    #[serde(with = "intstr")]
    pub conductor: BigInt,
    pub local_data: Vec<LocalData>,
    pub spaces: Vec<SpaceVerdicts>,
    pub selmer_phi: Vec<i128>,
    pub selmer_phihat: Vec<i128>,
    pub dim_selmer_phi: u32,
    pub dim_selmer_phihat: u32,
    pub dim_selmer2: u32,
    pub rank_sha_bound: u32,
    pub predicted: PredictedDims,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_point: Option<RationalPoint>,
    /// Computed dimensions match the closed forms and `N = 32pq`.
    pub conformant: bool,
}

impl Report {
    pub fn certificate_label(&self) -> &'static str {
        self.certificate.label()
    }
}

/// Local rows at the bad primes and the good primes up to a small limit.
pub fn local_rows(e: &TwinCurve) -> Vec<LocalData> {
    let mut primes: Vec<u64> = arith::primes_up_to(SPOT_CHECK_LIMIT);
    primes.extend([e.p(), e.q()]);
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_iter()
        .map(|ell| localdata::local_data(e, ell).expect("types I0, In and III only"))
        .collect()
}

pub fn build_report(e: &TwinCurve) -> Report {
    let summary: DescentSummary = descent::descend(e);
    let predicted = descent::predicted_dims(e.p(), e.sigma).expect("p is an odd prime");
    let conductor = localdata::conductor(e).expect("types I0, In and III only");
    let expected_conductor = BigInt::from(32u64) * e.p() * e.q();
    let conformant = summary.dims() == predicted && conductor == expected_conductor;
    Report {
        p: e.p(),
        q: e.q(),
        sigma: e.sigma,
        invariants: e.invariants(),
        conductor,
        local_data: local_rows(e),
        spaces: summary.spaces.clone(),
        selmer_phi: summary.selmer_phi.elements.clone(),
        selmer_phihat: summary.selmer_phihat.elements.clone(),
        dim_selmer_phi: summary.selmer_phi.dim,
        dim_selmer_phihat: summary.selmer_phihat.dim,
        dim_selmer2: summary.dim_selmer2,
        rank_sha_bound: summary.rank_sha_bound,
        predicted,
        witness_point: summary.certificate.witness_point().cloned(),
        certificate: summary.certificate,
        conformant,
    }
}

/// Reports for every twin pair with `q <= limit`, in ascending order,
/// computed on `jobs` threads (rayon's default when `None`).
pub fn scan_reports(limit: u64, sigma: Sign, jobs: Option<usize>) -> Vec<Report> {
    let pairs = arith::twin_prime_pairs(limit);
    let run = || {
        pairs
            .par_iter()
            .map(|&pair| build_report(&TwinCurve::new(pair, sigma)))
            .collect::<Vec<_>>()
    };
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    }
}

fn set_string(set: &[i128]) -> String {
    let items: Vec<String> = set.iter().map(i128::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn certificate_line(cert: &Certificate) -> String {
    match cert {
        Certificate::RankZero { torsion, sha2_dim } => format!(
            "RankZero: rank 0, dim Sha[2] = {sha2_dim}, E(Q) = {} of order {}",
            serde_json::to_value(torsion.structure).unwrap().as_str().unwrap_or("?"),
            torsion.structure.order()
        ),
        Certificate::RankOne(c) => format!(
            "RankOne: point {} of infinite order, from q = {} and primary solution {}",
            c.point, c.witness, c.primary
        ),
        Certificate::BoundOnly { bound } => {
            format!("BoundOnly: rank + dim Sha[2] = {bound}, split not resolved")
        }
    }
}

/// The human-readable table printed by `analyze`.
pub fn render_report(r: &Report) -> String {
    let e = TwinCurve::from_p(r.p, r.sigma).expect("report of a valid pair");
    let mut out = String::new();
    let inv = &r.invariants;
    let _ = writeln!(out, "E: {e}    (p, q) = ({}, {}), sigma = {}", r.p, r.q, r.sigma);
    let _ = writeln!(
        out,
        "b2 = {}  b4 = {}  b6 = {}  b8 = {}",
        inv.b2, inv.b4, inv.b6, inv.b8
    );
    let _ = writeln!(out, "c4 = {}  c6 = {}  disc = {}  j = {}", inv.c4, inv.c6, inv.disc, inv.j);
    let _ = writeln!(out, "conductor = {}", r.conductor);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:>6}  {:<23} {:<8} {:>2} {:>2} {:>2}", "ell", "reduction", "kodaira", "f", "c", "m");
    for row in &r.local_data {
        let _ = writeln!(
            out,
            "{:>6}  {:<23} {:<8} {:>2} {:>2} {:>2}",
            row.ell,
            format!("{:?}", row.reduction),
            row.kodaira.to_string(),
            row.f,
            row.c,
            row.m
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<7} {:>8}  {:<4} {:<4} {:<4} {:<4} selmer", "family", "d1", "inf", "2", "p", "q");
    for sv in &r.spaces {
        let v = &sv.verdicts;
        let _ = writeln!(
            out,
            "{:<7} {:>8}  {:<4} {:<4} {:<4} {:<4} {}",
            sv.family.to_string(),
            sv.d1,
            yes_no(v.inf),
            yes_no(v.two),
            yes_no(v.p),
            yes_no(v.q),
            yes_no(v.all())
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "S^(phi)  = {}  dim {}", set_string(&r.selmer_phi), r.dim_selmer_phi);
    let _ = writeln!(out, "S^(phi^) = {}  dim {}", set_string(&r.selmer_phihat), r.dim_selmer_phihat);
    let _ = writeln!(out, "dim S^(2) = {}", r.dim_selmer2);
    let _ = writeln!(out, "rank + dim Sha[2] = {}", r.rank_sha_bound);
    let _ = writeln!(out, "certificate: {}", certificate_line(&r.certificate));
    let p = &r.predicted;
    let _ = writeln!(
        out,
        "conformance: {} (predicted dims {}, {}, {}, bound {})",
        if r.conformant { "ok" } else { "MISMATCH" },
        p.dim_phi,
        p.dim_phihat,
        p.dim_selmer2,
        p.bound
    );
    out
}

/// One summary row of a scan, per residue class of `p mod 8`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub residue: u64,
    pub pairs: usize,
    pub conformant: usize,
    pub rank_zero: usize,
    pub rank_one: usize,
    pub bound_only: usize,
}

pub fn scan_summary(reports: &[Report]) -> Vec<ScanRow> {
    [1u64, 3, 5, 7]
        .into_iter()
        .map(|residue| {
            let mut row = ScanRow { residue, ..ScanRow::default() };
            for r in reports.iter().filter(|r| r.p % 8 == residue) {
                row.pairs += 1;
                row.conformant += usize::from(r.conformant);
                match r.certificate {
                    Certificate::RankZero { .. } => row.rank_zero += 1,
                    Certificate::RankOne(_) => row.rank_one += 1,
                    Certificate::BoundOnly { .. } => row.bound_only += 1,
                }
            }
            row
        })
        .collect()
}

pub fn render_summary(rows: &[ScanRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>7} {:>6} {:>11} {:>9} {:>8} {:>10}",
        "p mod 8", "pairs", "conformant", "RankZero", "RankOne", "BoundOnly"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>7} {:>6} {:>11} {:>9} {:>8} {:>10}",
            r.residue, r.pairs, r.conformant, r.rank_zero, r.rank_one, r.bound_only
        );
    }
    let total: usize = rows.iter().map(|r| r.pairs).sum();
    let ok: usize = rows.iter().map(|r| r.conformant).sum();
    let _ = writeln!(out, "{ok}/{total} conformant");
    out
}

#[derive(Debug, Parser)]
#[command(name = "twin-descent", version, about = "2-isogeny descent on y^2 = x(x + sp)(x + sq) for twin primes q = p + 2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Curve sign: +1 or -1.
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    pub sigma: Sign,
    /// Emit JSON instead of tables.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full pipeline for one twin pair (p, p + 2).
    Analyze {
        p: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Every twin pair with p + 2 <= LIMIT, checked against the closed forms.
    Scan {
        limit: u64,
        #[command(flatten)]
        common: Common,
        /// Worker threads; falls back to TWIN_DESCENT_JOBS.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Local solvability of one homogeneous space at one place.
    Local {
        /// C or Cprime.
        #[arg(long)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        d1: i128,
        #[arg(long)]
        p: u64,
        /// inf or a prime.
        #[arg(long)]
        place: String,
        #[command(flatten)]
        common: Common,
    },
    /// The rank-one criterion, primary solutions and a point search.
    Rank1 {
        p: u64,
        #[command(flatten)]
        common: Common,
        /// Bound for the primary-solution and point searches.
        #[arg(long)]
        bound: Option<u64>,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_pair(p: u64) -> Result<PrimePair, String> {
    PrimePair::new(p).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serializes")
}

pub fn cmd_analyze(p: u64, common: &Common) -> ExitCode {
    let pair = match parse_pair(p) {
        Ok(pair) => pair,
        Err(e) => return fail(e),
    };
    let report = build_report(&TwinCurve::new(pair, common.sigma));
    if common.json {
        println!("{}", to_json(&report));
    } else {
        print!("{}", render_report(&report));
    }
    if report.conformant {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn jobs_from_env() -> Option<usize> {
    std::env::var(JOBS_ENV).ok()?.trim().parse().ok()
}

pub fn cmd_scan(limit: u64, common: &Common, jobs: Option<usize>) -> ExitCode {
    if limit < 5 {
        return fail(format!("limit must be at least 5, got {limit}"));
    }
    let reports = scan_reports(limit, common.sigma, jobs.or_else(jobs_from_env));
    for r in &reports {
        if common.json {
            println!("{}", to_json(r));
        } else {
            println!(
                "({}, {})  sigma {}  dims ({}, {}, {})  bound {}  {:<9}  {}",
                r.p,
                r.q,
                r.sigma,
                r.dim_selmer_phi,
                r.dim_selmer_phihat,
                r.dim_selmer2,
                r.rank_sha_bound,
                r.certificate_label(),
                if r.conformant { "ok" } else { "MISMATCH" }
            );
        }
    }
    let rows = scan_summary(&reports);
    if common.json {
        println!("{}", to_json(&serde_json::json!({ "summary": rows })));
    } else {
        print!("{}", render_summary(&rows));
    }
    if reports.iter().all(|r| r.conformant) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn parse_place(s: &str) -> Result<LocalPlace, String> {
    match s.trim() {
        "inf" | "infinity" | "oo" => Ok(LocalPlace::Infinity),
        other => {
            let ell: u64 = other.parse().map_err(|_| format!("bad place {other:?}"))?;
            if arith::is_prime(ell) {
                Ok(LocalPlace::Prime(ell))
            } else {
                Err(format!("{ell} is not prime"))
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct LocalOutput {
    family: Family,
    d1: i128,
    place: String,
    solvable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

pub fn cmd_local(family: Family, d1: i128, p: u64, place: &str, common: &Common) -> ExitCode {
    let pair = match parse_pair(p) {
        Ok(pair) => pair,
        Err(e) => return fail(e),
    };
    let space = match QuarticSpace::new(TwinCurve::new(pair, common.sigma), family, d1) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let place = match parse_place(place) {
        Ok(pl) => pl,
        Err(e) => return fail(e),
    };
    let (solvable, witness) = match place {
        LocalPlace::Infinity => {
            let pt = localsolve::real_point(&space);
            (pt.is_some(), pt.map(|(x, y)| format!("real point ({x:.6}, {y:.6})")))
        }
        LocalPlace::Prime(ell) => match localsolve::find_local_point(&space.quartic(), ell) {
            Ok(found) => (
                found.is_some(),
                found.map(|w| {
                    let chart = match w.chart {
                        localsolve::Chart::Affine => "x",
                        localsolve::Chart::Reciprocal => "1/x",
                    };
                    format!("{chart} = {} mod {ell}^{} ({:?})", w.x0, w.precision, w.reason)
                }),
            ),
            Err(e) => return fail(e),
        },
    };
    let out = LocalOutput {
        family,
        d1,
        place: place.to_string(),
        solvable,
        witness,
    };
    if common.json {
        println!("{}", to_json(&out));
    } else {
        println!("{space}");
        let verdict = if solvable { "solvable" } else { "unsolvable" };
        match &out.witness {
            Some(w) => println!("at {}: {verdict}, {w}", out.place),
            None => println!("at {}: {verdict}", out.place),
        }
    }
    ExitCode::SUCCESS
}

#[derive(Debug, Serialize)]
struct Rank1Output {
    p: u64,
    q: u64,
    sigma: Sign,
    applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<rank1::RankOneCertificate>,
    primary_i: Option<rank1::PrimarySolution>,
    primary_ii: Option<rank1::PrimarySolution>,
    points: Vec<RationalPoint>,
}

pub fn cmd_rank1(p: u64, common: &Common, bound: Option<u64>) -> ExitCode {
    let pair = match parse_pair(p) {
        Ok(pair) => pair,
        Err(e) => return fail(e),
    };
    let e = TwinCurve::new(pair, common.sigma);
    let primary_bound = bound.unwrap_or(rank1::DEFAULT_PRIMARY_BOUND);
    let point_bound = bound.unwrap_or(rank1::DEFAULT_POINT_BOUND);
    let certificate = rank1::rank_one_certificate(&e);
    let out = Rank1Output {
        p: e.p(),
        q: e.q(),
        sigma: e.sigma,
        applicable: e.sigma == Sign::Plus && e.p() % 8 == 3,
        certificate,
        primary_i: rank1::primary_solution(e.p(), e.q(), System::I, primary_bound),
        primary_ii: rank1::primary_solution(e.p(), e.q(), System::II, primary_bound),
        points: rank1::point_search(&e, point_bound),
    };
    if common.json {
        println!("{}", to_json(&out));
        return ExitCode::SUCCESS;
    }
    println!("E: {e}");
    match (&out.certificate, out.applicable) {
        (Some(c), _) => {
            println!("witness: {} = {}", e.q(), c.witness);
            println!("primary solution (I): {}", c.primary);
            println!("point of infinite order: {}", c.point);
            println!("rank E(Q) = 1, Sha[2] = 0");
        }
        (None, true) => println!("no two-squares witness for q = {}", e.q()),
        (None, false) => println!("criterion needs sigma = +1 and p = 3 (mod 8)"),
    }
    let show = |sys: &str, s: &Option<rank1::PrimarySolution>| match s {
        Some(s) => println!("search (system {sys}, Y <= {primary_bound}): {s}"),
        None => println!("search (system {sys}, Y <= {primary_bound}): none"),
    };
    show("I", &out.primary_i);
    show("II", &out.primary_ii);
    println!("points with height <= {point_bound}: {}", out.points.len());
    for pt in &out.points {
        println!("  {pt}");
    }
    ExitCode::SUCCESS
}

pub fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Analyze { p, common } => cmd_analyze(p, &common),
        Command::Scan { limit, common, jobs } => cmd_scan(limit, &common, jobs),
        Command::Local { family, d1, p, place, common } => cmd_local(family, d1, p, &place, &common),
        Command::Rank1 { p, common, bound } => cmd_rank1(p, &common, bound),
    }
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    run(Cli::parse())
}
