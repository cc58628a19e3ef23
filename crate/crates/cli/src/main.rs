//! `logp`: command-line front end for the `logp` library.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logp::family::{check_family, denominator_exponent, euler_factor, family_eval, reconstruct};
use logp::iwasawa::{omega_poly, omega_vh_sharp, omega_vh_three_case, reduce_mod_omega};
use logp::json::{self, parse_scalar_spec};
use logp::operators::{d_cw, delta, phi_h, psi};
use logp::sample::{integral_measure, unit_ball_series};
use logp::solver::solve_scalar;
use logp::{constants, Error, SolveOptions, ToyCrystal};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "logp", version, about = "Exact p-adic power series of logarithmic order")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the main result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Growth constants c1..c4, c_phi and c(h).
    Constants {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        h: u32,
    },
    /// v_h and v_h' of a series.
    Val {
        #[arg(long)]
        p: Option<u32>,
        /// Retag the input with this order.
        #[arg(long)]
        h: Option<u32>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 12)]
        nu_max: u32,
    },
    /// Apply phi_H, psi, (1+X)d/dX or Delta_j.
    Op {
        #[arg(long, value_enum)]
        kind: OpKind,
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Solve (1 - lambda phi_H) G = F.
    Solve {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        h: u32,
        /// Scalar as "v:V,u:U[,N:N]".
        #[arg(long)]
        lambda: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 25)]
        prec: i64,
        /// Truncation degree; the input is padded or cut to it.
        #[arg(long)]
        deg: Option<usize>,
        #[arg(long, default_value_t = 0)]
        extra_terms: u32,
    },
    /// The polynomial omega_n^[j] and its v_h.
    Omega {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        j: i64,
        #[arg(long, default_value_t = 1)]
        h: u32,
        #[arg(long, default_value_t = 40)]
        prec: u32,
    },
    /// Remainder modulo Omega_n^[l,l'].
    Reduce {
        /// Window as "l:l'".
        #[arg(long)]
        window: String,
        #[arg(long)]
        n: u32,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 40)]
        prec: u32,
    },
    /// Families of values at roots of unity.
    Points {
        #[command(subcommand)]
        action: PointsAction,
    },
    /// Euler factor and denominator exponent.
    Euler {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        ap: String,
        #[arg(long)]
        j: i64,
        #[arg(long, default_value_t = 0)]
        ordphi: u32,
        /// Also report the denominator exponent for this order.
        #[arg(long)]
        h: Option<u32>,
        #[arg(long, default_value_t = 0)]
        nzeta: u32,
        #[arg(long, default_value_t = 30)]
        prec: u32,
    },
    /// Generate seeded test data (seed from LOGP_SEED, default 0).
    Gen {
        #[command(subcommand)]
        what: GenKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OpKind {
    Phi,
    Psi,
    Dcw,
    Delta,
}

#[derive(Subcommand)]
enum PointsAction {
    /// Evaluate a family from a measure and a rank-one crystal.
    Eval(EvalArgs),
    /// Check conditions (i)-(iii).
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        h: u32,
    },
    /// Interpolate a family back to a polynomial modulo Omega.
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        h: u32,
        #[arg(long, default_value_t = 60)]
        prec: u32,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value = "e")]
    label: String,
    #[arg(long)]
    window: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    h: u32,
    #[arg(long, default_value_t = 20)]
    target: i64,
    #[arg(long, default_value_t = 60)]
    prec: u32,
}

#[derive(Subcommand)]
enum GenKind {
    /// A polynomial in the unit ball of H_h.
    Series {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        deg: usize,
        #[arg(long, default_value_t = 30)]
        prec: u32,
    },
    /// An integral measure on (Z/p^n)^x.
    Measure {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 30)]
        prec: u32,
    },
}

enum Failure {
    Lib(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Lib(e) => match e {
                Error::InvalidInput(_)
                | Error::PrimeMismatch(..)
                | Error::InvalidAutomorphism(_)
                | Error::OrderTooSmall { .. }
                | Error::SlopeTooLarge { .. } => 2,
                Error::Unsolvable(_) | Error::InconsistentFamily(_) | Error::NotInImage(_) | Error::DivisionByZero => 3,
                Error::PrecisionExhausted(_) | Error::IndeterminateCase { .. } => 4,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_json(path: &Path) -> std::result::Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(json::parse(&text)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Input(format!("cannot write output: {e}"))),
            _ => Ok(()),
        },
    }
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), Failure> {
    let bad = || Failure::Input(format!("window must look like \"l:l'\", got \"{s}\""));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let l = a.trim().parse().map_err(|_| bad())?;
    let l2 = b.trim().parse().map_err(|_| bad())?;
    if l > l2 {
        return Err(bad());
    }
    Ok((l, l2))
}

fn check_prime(expected: Option<u32>, got: u32) -> Outcome {
    match expected {
        Some(p) if p != got => Err(Error::PrimeMismatch(p, got).into()),
        _ => Ok(()),
    }
}

fn validate_prime(p: u32) -> Outcome {
    let is_prime = p >= 3 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if is_prime {
        Ok(())
    } else {
        Err(Failure::Input(format!("p must be an odd prime, got {p}")))
    }
}

fn seed() -> std::result::Result<u64, Failure> {
    match std::env::var("LOGP_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Input(format!("LOGP_SEED must be an integer, got \"{s}\""))),
        Err(_) => Ok(0),
    }
}

fn real_row(name: &str, x: f64, floor: i64) -> String {
    format!("{name:<6} {x:>16.10}  floor {floor}")
}

fn run(cli: Cli) -> Outcome {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match cli.command {
        Command::Constants { p, h } => {
            validate_prime(p)?;
            let k = constants(p, h);
            if fmt(Format::Table) == Format::Json {
                return emit(&cli.out, &json::emit(&json::constants_to_json(&k)));
            }
            let rows = [
                format!("p      {p}"),
                format!("h      {h}"),
                real_row("c1", k.c1, logp::constants::floor_down(k.c1)),
                real_row("c2", k.c2, logp::constants::floor_down(k.c2)),
                real_row("c3", k.c3, logp::constants::floor_down(k.c3)),
                real_row("c4", k.c4, logp::constants::floor_down(k.c4)),
                real_row("c_phi", k.c_phi, logp::constants::floor_down(k.c_phi)),
                real_row("c(h)", k.c_h_real, k.c_h),
            ];
            emit(&cli.out, &rows.join("\n"))
        }
        Command::Val { p, h, input, nu_max } => {
            let f = json::series_from_json(&read_json(&input)?)?;
            check_prime(p, f.prime())?;
            let f = match h {
                Some(h) => f.retag(h),
                None => f,
            };
            let v = f.v_h();
            let vp = f.v_h_prime(nu_max)?;
            if fmt(Format::Table) == Format::Json {
                let out = json!({
                    "v_h": {"value": v.value.to_string(), "certainty": format!("{:?}", v.certainty)},
                    "v_h_prime": {
                        "value": vp.value.to_string(),
                        "beyond": vp.beyond_lower_bound.to_string(),
                        "stable": vp.stable,
                        "certainty": format!("{:?}", vp.certainty),
                    },
                });
                return emit(&cli.out, &json::emit(&out));
            }
            let lines = [
                format!("{}", v.value),
                format!("certainty {:?}", v.certainty),
                format!("v_h' {} (nu_max {nu_max}, stable {}, {:?})", vp.value, vp.stable, vp.certainty),
            ];
            emit(&cli.out, &lines.join("\n"))
        }
        Command::Op { kind, j, input } => {
            let f = json::series_from_json(&read_json(&input)?)?;
            let out = match kind {
                OpKind::Phi => json::series_to_json(&phi_h(&f)),
                OpKind::Psi => json::series_to_json(&psi(&f)?),
                OpKind::Dcw => json::series_to_json(&d_cw(&f, j)),
                OpKind::Delta => json::scalar_to_json(&delta(&f, j)?),
            };
            emit(&cli.out, &json::emit(&out))
        }
        Command::Solve { p, h, lambda, input, prec, deg, extra_terms } => {
            validate_prime(p)?;
            let f = json::series_from_json(&read_json(&input)?)?;
            check_prime(Some(p), f.prime())?;
            let f = match deg {
                Some(d) if d < f.degree() => f.truncate(d),
                Some(d) if f.is_polynomial() => f.extend_zeros(d)?,
                Some(d) if d > f.degree() => {
                    return Err(Failure::Input(format!("cannot extend a series with a nonzero tail to degree {d}")))
                }
                _ => f,
            };
            let work = (prec.max(1) as u32).saturating_mul(2).max(40);
            let lam = parse_scalar_spec(p, &lambda, work)?;
            let (g, cert) = solve_scalar(&f.retag(h), &lam, h, SolveOptions { prec, extra_terms })?;
            let out = json!({
                "solution": json::series_to_json(&g),
                "certificate": json::certificate_to_json(&cert),
            });
            if fmt(Format::Json) == Format::Table {
                let lines = [
                    format!("case          {:?}", cert.case),
                    format!("n_max         {}", cert.n_max),
                    format!("denom_bound   {}", cert.denom_bound),
                    format!("residual_prec {}", cert.residual_prec),
                    format!("v_h           {} ({:?})", cert.measured_vh.value, cert.measured_vh.certainty),
                ];
                return emit(&cli.out, &lines.join("\n"));
            }
            emit(&cli.out, &json::emit(&out))
        }
        Command::Omega { p, n, j, h, prec } => {
            validate_prime(p)?;
            let w = omega_poly(p, n, j, prec);
            let brute = w.as_series(h).v_h().value;
            let stated = omega_vh_three_case(p, n, j, h);
            let sharp = omega_vh_sharp(p, n, j, h);
            if fmt(Format::Json) == Format::Table {
                let lines = [
                    format!("degree     {}", w.coeffs.len() - 1),
                    format!("v_h        {brute}"),
                    format!("three-case {stated}"),
                    format!("sharp      {sharp}"),
                ];
                return emit(&cli.out, &lines.join("\n"));
            }
            let out = json!({
                "p": p,
                "n": n,
                "j": j,
                "coeffs": w.coeffs.iter().map(json::scalar_to_json).collect::<Vec<_>>(),
                "v_h": {"h": h, "value": brute.to_string(), "three_case": stated.to_string(), "sharp": sharp.to_string()},
            });
            emit(&cli.out, &json::emit(&out))
        }
        Command::Reduce { window, n, input, prec } => {
            let (l, l2) = parse_window(&window)?;
            let f = json::series_from_json(&read_json(&input)?)?;
            let r = reduce_mod_omega(&f, n, l, l2, prec)?;
            emit(&cli.out, &json::emit(&json::series_to_json(&r)))
        }
        Command::Points { action } => match action {
            PointsAction::Eval(a) => {
                let (l, l2) = parse_window(&a.window)?;
                let mu = json::measure_from_json(&read_json(&a.input)?)?;
                let lam = parse_scalar_spec(mu.prime(), &a.lambda, a.prec)?;
                let fam = family_eval(&ToyCrystal::new(a.label, lam), &mu, (l, l2), a.n, a.h, a.target)?;
                emit(&cli.out, &json::emit(&json::family_to_json(&fam)))
            }
            PointsAction::Check { input, h } => {
                let fam = json::family_from_json(&read_json(&input)?)?;
                let rep = check_family(&fam, h);
                let delta = rep.cond_ii.map_or(Value::Null, |d| json!(d));
                let code = if rep.passed() { Ok(()) } else { Err(Error::InconsistentFamily(rep.failures.join("; "))) };
                let text = if fmt(Format::Table) == Format::Json {
                    json::emit(&json!({
                        "cond_i": rep.cond_i,
                        "cond_ii": delta,
                        "cond_iii": rep.cond_iii,
                        "failures": rep.failures,
                    }))
                } else {
                    let pf = |b: bool| if b { "pass" } else { "fail" };
                    let d = rep.cond_ii.map_or("none".to_string(), |d| d.to_string());
                    format!("(i)   {}\n(ii)  delta = {d}\n(iii) {}", pf(rep.cond_i), pf(rep.cond_iii))
                };
                emit(&cli.out, &text)?;
                Ok(code?)
            }
            PointsAction::Reconstruct { input, h, prec } => {
                let fam = json::family_from_json(&read_json(&input)?)?;
                let g = reconstruct(&fam, h, prec)?;
                emit(&cli.out, &json::emit(&json::series_to_json(&g)))
            }
        },
        Command::Euler { p, ap, j, ordphi, h, nzeta, prec } => {
            validate_prime(p)?;
            let a = parse_scalar_spec(p, &ap, prec)?;
            let e = euler_factor(&a, j, ordphi)?;
            let den = h.map(|h| denominator_exponent(j, h, nzeta, p));
            if fmt(Format::Table) == Format::Json {
                let out = json!({"euler_factor": json::scalar_to_json(&e), "denominator_exponent": den});
                return emit(&cli.out, &json::emit(&out));
            }
            let mut text = format!("E_p = {e}\nord  = {}", e.ord());
            if let Some(d) = den {
                text.push_str(&format!("\ndenominator exponent = {d}"));
            }
            emit(&cli.out, &text)
        }
        Command::Gen { what } => {
            let seed = seed()?;
            eprintln!("seed {seed}");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = match what {
                GenKind::Series { p, h, deg, prec } => {
                    validate_prime(p)?;
                    json::series_to_json(&unit_ball_series(&mut rng, p, h, deg, prec))
                }
                GenKind::Measure { p, n, prec } => {
                    validate_prime(p)?;
                    if n == 0 {
                        return Err(Failure::Input("measures live at level n >= 1".into()));
                    }
                    json::measure_to_json(&integral_measure(&mut rng, p, n, prec))
                }
            };
            emit(&cli.out, &json::emit(&out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
