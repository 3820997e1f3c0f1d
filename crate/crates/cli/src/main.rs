//! stabcert: exact certificates for the Lipschitz-like property of LCP and
//! AVI solution maps relative to a polyhedral parameter set.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use stabcert::avi::Necessity;
use stabcert::lcp::{self, SolutionPiece, SolutionSet};
use stabcert::linalg::{fmt_rational, fmt_vector, RMatrix};
use stabcert::report::{self, CertificateFile, ProblemFile, Request};
use stabcert::Error;

const EXIT_TRUE: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_FALSE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "stabcert",
    version,
    about = "Certify the Lipschitz-like (Aubin) property of LCP/AVI solution maps relative to a polyhedral set",
    after_help = "EXIT CODES:\n\
                  \n  0  completed, verdict true\
                  \n  1  input error (malformed file, dimension mismatch, failed precondition)\
                  \n  2  internal invariant failure\
                  \n  3  completed, verdict false or inconclusive\
                  \n\nENVIRONMENT:\n\
                  \n  STABCERT_THREADS  caps the number of worker threads\
                  \n\nEXAMPLES:\n\
                  \n  stabcert check-lcp fixtures/example46_origin.json\
                  \n  stabcert check-avi fixtures/example46_Q.json --out cert.json\
                  \n  stabcert solve fixtures/example46_q21.json\
                  \n  stabcert modulus fixtures/identity_interior.json --starts 128 --seed 7"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Problem file (JSON)
    file: PathBuf,
    /// Modulus multi-start count (overrides the file)
    #[arg(long)]
    starts: Option<usize>,
    /// Modulus tolerance on the ratio (overrides the file)
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for all sampling (overrides the file)
    #[arg(long)]
    seed: Option<u64>,
    /// Add the sampling cross-check block
    #[arg(long)]
    oracle: bool,
    /// Only print the certificate, no summary
    #[arg(long)]
    quiet: bool,
    /// Where to write the certificate JSON; `-` for stdout
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum Command {
    /// All solutions of the LCP at q_bar
    Solve(Common),
    /// The index combination (I1, I2, I3) of (q_bar, x_bar)
    Classify(Common),
    /// The cone pos(E, -M) and the Q0 status of M
    Domain(Common),
    /// Certificate relative to dom S
    CheckLcp(Common),
    /// Certificate relative to q_set (the "domain" sentinel uses the lcp route)
    CheckAvi(Common),
    /// Graphical modulus estimate relative to dom S
    Modulus(Common),
    /// Certificate with the sampling cross-check
    Oracle(Common),
    /// Write the shipped fixtures into a directory
    Fixtures {
        /// Target directory
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("STABCERT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = matches!(e.downcast_ref::<Error>(), Some(Error::Internal(_)));
            ExitCode::from(if internal { EXIT_INTERNAL } else { EXIT_INPUT })
        }
    }
}

fn load(c: &Common) -> Result<ProblemFile> {
    let text = fs::read_to_string(&c.file).with_context(|| format!("reading {}", c.file.display()))?;
    let mut p = ProblemFile::from_json(&text)?;
    if let Some(s) = c.starts {
        p.options.starts = s;
    }
    if let Some(t) = c.tol {
        p.options.tol = t;
    }
    if let Some(s) = c.seed {
        p.options.seed = s;
        if let Some(plan) = p.options.oracle.as_mut() {
            plan.seed = s;
        }
    }
    Ok(p)
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Solve(c) => solve(&c),
        Command::Classify(c) => classify(&c),
        Command::Domain(c) => domain(&c),
        Command::CheckLcp(c) => check(&c, Request::Lcp, c.oracle),
        Command::CheckAvi(c) => check(&c, Request::Avi, c.oracle),
        Command::Oracle(c) => check(&c, Request::Avi, true),
        Command::Modulus(c) => modulus(&c),
        Command::Fixtures { out } => fixtures(&out),
    }
}

fn lcp_matrix(p: &ProblemFile) -> Result<RMatrix> {
    let v = p.validate()?;
    if v.c.is_some() {
        bail!(Error::Dimension("this command needs an lcp problem".into()));
    }
    Ok(v.m)
}

fn print_solutions(s: &SolutionSet) {
    let count = s.pieces.len();
    println!("{count} solution piece{}", if count == 1 { "" } else { "s" });
    for piece in &s.pieces {
        match piece {
            SolutionPiece::Point(x) => println!("  x = {}", fmt_vector(x)),
            SolutionPiece::Polyhedron(p) => {
                println!("  polyhedron:");
                for i in 0..p.a_le.rows() {
                    println!("    {} . x <= {}", fmt_vector(p.a_le.row(i)), fmt_rational(&p.b_le[i]));
                }
                for i in 0..p.a_eq.rows() {
                    println!("    {} . x  = {}", fmt_vector(p.a_eq.row(i)), fmt_rational(&p.b_eq[i]));
                }
            }
        }
    }
}

fn solve(c: &Common) -> Result<u8> {
    let p = load(c)?;
    let m = lcp_matrix(&p)?;
    let s = lcp::solve_lcp(&m, &p.q_bar)?;
    if !c.quiet {
        println!("S(q) at q = {}", fmt_vector(&p.q_bar));
    }
    print_solutions(&s);
    Ok(EXIT_TRUE)
}

fn classify(c: &Common) -> Result<u8> {
    let p = load(c)?;
    let v = p.validate()?;
    let combo = lcp::classify(&v.m, &v.q_bar, v.x_bar()?)?;
    println!("{combo}");
    Ok(EXIT_TRUE)
}

fn domain(c: &Common) -> Result<u8> {
    let p = load(c)?;
    let m = lcp_matrix(&p)?;
    let cone = lcp::domain_cone(&m);
    let q0 = lcp::is_q0(&m, p.options.q0_samples, p.options.seed)?;
    println!("pos(E, -M):");
    for a in cone.inequalities() {
        println!("  {} . q <= 0", fmt_vector(a));
    }
    for a in cone.equalities() {
        println!("  {} . q  = 0", fmt_vector(a));
    }
    println!("  rays: {}", cone.rays().iter().map(|r| fmt_vector(r)).collect::<Vec<_>>().join(" "));
    if !cone.lineality().is_empty() {
        println!("  lines: {}", cone.lineality().iter().map(|r| fmt_vector(r)).collect::<Vec<_>>().join(" "));
    }
    println!("Q0: {}", serde_json::to_string(&q0)?);
    Ok(EXIT_TRUE)
}

fn emit(c: &Common, cert: &CertificateFile) -> Result<()> {
    let json = cert.to_json();
    if c.out == "-" {
        println!("{json}");
    } else {
        fs::write(&c.out, json + "\n").with_context(|| format!("writing {}", c.out))?;
    }
    Ok(())
}

fn summary(cert: &CertificateFile) {
    let verdict = match cert.verdict {
        Some(true) => "Lipschitz-like: yes",
        Some(false) => "Lipschitz-like: no",
        None => "Lipschitz-like: inconclusive",
    };
    let kind = match cert.necessity {
        Necessity::SufficientAndNecessary => "necessary and sufficient",
        Necessity::SufficientOnly => "sufficient only",
    };
    println!("{verdict} ({kind} test, {:?} route)", cert.route);
    if let Some(l) = &cert.lcp {
        println!("combination: {}", l.combination);
        println!("branches checked: {}", l.branches.len());
    }
    if let Some(a) = &cert.avi {
        println!("face pairs checked: {}, cq: {}, condition: {}", a.pairs_checked, a.cq_holds, a.condition_holds);
    }
    if let Some(w) = &cert.witness {
        println!("witness: {}", fmt_vector(w));
    }
    if let Some(m) = cert.modulus {
        println!("modulus: {m}");
    }
    if let Some(o) = &cert.oracle {
        println!(
            "oracle: brute force {}, kappa by refinement {:?}, {}, isc {}",
            if o.solutions_agree { "agrees" } else { "DISAGREES" },
            o.refinement.kappas,
            if o.refinement.divergent { "divergent" } else { "stable" },
            o.isc
        );
    }
    println!("time: {} ms", cert.timing_ms);
}

fn certify(c: &Common, request: Request, oracle: bool) -> Result<CertificateFile> {
    let p = load(c)?;
    let start = Instant::now();
    let mut cert = report::certify(&p, request, oracle)?;
    cert.timing_ms = start.elapsed().as_millis() as u64;
    Ok(cert)
}

fn exit_for(verdict: Option<bool>) -> u8 {
    if verdict == Some(true) {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn check(c: &Common, request: Request, oracle: bool) -> Result<u8> {
    let cert = certify(c, request, oracle)?;
    if !c.quiet {
        summary(&cert);
    }
    emit(c, &cert)?;
    Ok(exit_for(cert.verdict))
}

fn modulus(c: &Common) -> Result<u8> {
    let cert = certify(c, Request::Lcp, c.oracle)?;
    if cert.verdict != Some(true) {
        eprintln!("{}", Error::NotCertified("false"));
        emit(c, &cert)?;
        return Ok(EXIT_FALSE);
    }
    if !c.quiet {
        if let Some(diag) = cert.lcp.as_ref().and_then(|l| l.modulus_diagnostics.as_ref()) {
            for cm in &diag.per_combination {
                println!("  {}: {}", cm.combination, cm.value);
            }
        }
        println!("modulus: {}", cert.modulus.unwrap_or(f64::NAN));
    }
    emit(c, &cert)?;
    Ok(EXIT_TRUE)
}

fn fixtures(dir: &Path) -> Result<u8> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, p) in stabcert::fixtures::builtin() {
        let path = dir.join(name);
        fs::write(&path, p.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(EXIT_TRUE)
}
