use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use scv::form::FormSpec;
use scv::poincare::{cusp_coeff_detailed, qplus_coeff_detailed, PoincareSpec, SumControl};
use scv::qalg::{cache, eta_power, AnySeries};
use scv::shiftconv::{dhat, dhat_nu, l_series, ConvolutionRequest};
use scv::specialfun::{kloosterman, KloostermanQuery};
use scv::verify::verify_example;
use scv::{Error, Result};

#[derive(Parser)]
#[command(name = "scv", version, about = "Shifted convolution values and mock modular partners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the exact coefficients of eta(S tau)^P to an SCV1 file.
    Eta {
        #[arg(long)]
        power: u32,
        #[arg(long, default_value_t = 1)]
        scale: u32,
        #[arg(long)]
        nmax: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the Kloosterman sum K(m, n, c).
    Kloosterman {
        #[arg(short, allow_hyphen_values = true)]
        m: i64,
        #[arg(short, allow_hyphen_values = true)]
        n: i64,
        #[arg(short)]
        c: i64,
    },
    /// Fourier coefficients of P(m, k, N) or of Q+(-m, k, N).
    Poincare {
        kind: PoincareKind,
        #[arg(short)]
        m: u64,
        #[arg(short)]
        k: u32,
        #[arg(short = 'N')]
        level: u64,
        #[arg(short)]
        n: u64,
        #[arg(long)]
        cmax: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// One value of the symmetrized shifted convolution series.
    Dhat {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        h: u64,
        #[arg(long, default_value_t = 0)]
        nu: u32,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        terms: usize,
    },
    /// Coefficients h = 1..hmax of the generating function of the values.
    Lseries {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        nu: u32,
        #[arg(long)]
        hmax: u64,
        #[arg(long, default_value_t = 1_000_000)]
        terms: usize,
        #[arg(long, conflicts_with = "tsv")]
        json: bool,
        #[arg(long)]
        tsv: bool,
    },
    /// Run one of the three worked examples end to end.
    Verify {
        example: Example,
        #[arg(long, default_value_t = 1_000_000)]
        terms: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Pair {
    /// eta:POWER:SCALE, poincare:M:K:N or file:PATH[:K[:N]]
    #[arg(long)]
    f1: FormSpec,
    #[arg(long)]
    f2: FormSpec,
}

#[derive(Clone, Copy, ValueEnum)]
enum PoincareKind {
    Cusp,
    Qplus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Example1,
    Example2,
    Example3,
}

enum Outcome {
    Pass,
    Fail,
}

fn tables(pair: &Pair, terms: usize, hmax: u64) -> Result<(scv::form::CoefficientTable, scv::form::CoefficientTable)> {
    let f1 = pair.f1.table(terms + hmax as usize)?;
    let f2 = pair.f2.table(terms + hmax as usize)?;
    Ok((f1, f2))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Eta {
            power,
            scale,
            nmax,
            out,
        } => {
            let series = eta_power(power, scale, nmax)?;
            cache::save(&out, &AnySeries::Exact(series))?;
            println!("wrote eta:{power}:{scale} to q^{nmax} in {}", out.display());
            Ok(Outcome::Pass)
        }
        Command::Kloosterman { m, n, c } => {
            if c < 1 {
                return Err(Error::InvalidInput(format!("modulus must be positive, got {c}")));
            }
            println!("{}", kloosterman(KloostermanQuery::new(m, n, c)));
            Ok(Outcome::Pass)
        }
        Command::Poincare {
            kind,
            m,
            k,
            level,
            n,
            cmax,
            tol,
        } => {
            let mut control = SumControl::default();
            if let Some(c) = cmax {
                control = control.with_c_max(c);
            }
            if let Some(t) = tol {
                control = control.with_tol(t);
            }
            let spec = PoincareSpec::with_control(m, k, level, control)?;
            let v = match kind {
                PoincareKind::Cusp => cusp_coeff_detailed(&spec, n)?,
                PoincareKind::Qplus => qplus_coeff_detailed(&spec, n)?,
            };
            println!(
                "{:.12e}\ttail {:.3e}\tc_used {}\tconverged {}",
                v.value, v.tail_estimate, v.c_used, v.converged
            );
            Ok(if v.converged { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Dhat { pair, h, nu, s, terms } => {
            let (f1, f2) = tables(&pair, terms, h)?;
            let mut req = ConvolutionRequest::new(h, terms).with_nu(nu);
            if let Some(s) = s {
                req = req.with_s(s);
            }
            let v = if nu == 0 { dhat(&f1, &f2, &req)? } else { dhat_nu(&f1, &f2, &req)? };
            println!(
                "{:.8}\ttail {:.3e}\tterms {}\tconverged {}",
                v.value, v.tail_estimate, v.terms_used, v.converged
            );
            Ok(Outcome::Pass)
        }
        Command::Lseries {
            pair,
            nu,
            hmax,
            terms,
            json,
            tsv,
        } => {
            let (f1, f2) = tables(&pair, terms, hmax)?;
            let ls = l_series(&f1, &f2, nu, hmax, terms, &SumControl::default())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&ls.values).expect("values serialize"));
            } else if tsv {
                println!("h\tvalue\ttail");
                for v in &ls.values {
                    println!("{}\t{:.10e}\t{:.3e}", v.h, v.value, v.tail_estimate);
                }
            } else {
                println!("{}", ls.series);
            }
            Ok(Outcome::Pass)
        }
        Command::Verify {
            example,
            terms,
            tol,
            json,
        } => {
            let which = match example {
                Example::Example1 => 1,
                Example::Example2 => 2,
                Example::Example3 => 3,
            };
            let control = tol.map_or_else(SumControl::default, |t| SumControl::default().with_tol(t));
            let report = verify_example(which, &control, terms)?;
            if json {
                println!("{}", report.to_json());
            } else {
                print_report(&report);
            }
            Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn print_report(r: &scv::verify::Report) {
    println!("example {}: {} = {}", r.example, r.identity.lhs, r.identity.rhs);
    for (label, c) in r.identity.basis.iter().zip(&r.identity.coefficients) {
        println!("  {label}: {c:.10e}");
    }
    println!("{:>4} {:>18} {:>18} {:>12} {:>12}", "h", "lhs", "rhs", "residual", "tolerance");
    for p in &r.per_h {
        println!(
            "{:>4} {:>18.8} {:>18.8} {:>12.3e} {:>12.3e}",
            p.h, p.lhs, p.rhs, p.residual, p.tolerance
        );
    }
    if let Some(rows) = &r.details.t_table {
        for t in rows {
            println!("T({}) = {:.6} ~ {}", t.h, t.numeric, t.exact);
        }
    }
    for c in &r.details.checks {
        println!("[{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    println!("{}", if r.pass { "PASS" } else { "FAIL" });
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            // bad arguments are input errors, which exit with 1 rather than clap's 2
            return if usage_error { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
