//! `sst` command line. Exit codes: 0 success, 1 violation found, 2 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_complex::Complex64;

use crate::catalog::{catalog, catalog_names};
use crate::error::{Error, Result};
use crate::geography::{count_b_and_bound, geography_report, GeographyReport};
use crate::io::{read_manifold, serialize_manifold};
use crate::lattice::{validate_model, CohClass};
use crate::model::FourManifoldModel;
use crate::surgery::{blowup, fiber_sum, knot_surgery, log_transform};
use crate::swcurve::{cusp_scaling_fit, discriminant_roots, weierstrass_data, CuspQuantity, PairingTag};
use crate::swseries::{sst_check, twisted_series};
use crate::zdw::{laurent_spectrum, regularity_verdict, VerdictStatus, ZdwInput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

type Model = FourManifoldModel<BigInt>;

#[derive(Parser, Debug)]
#[command(name = "sst", version, about = "Superconformal simple type checks for 4-manifold models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Built-in example manifolds.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Validate models and run the SST check. Sources are paths or `catalog:NAME`.
    Check {
        #[arg(required = true)]
        files: Vec<String>,
        /// Treat simple-type failures as errors.
        #[arg(long)]
        strict: bool,
    },
    /// Surgery operations; the result is written as JSON.
    #[command(subcommand)]
    Surgery(SurgeryCmd),
    /// Basic-class counts and the Noether-type bound over a corpus.
    Geography {
        files: Vec<String>,
        /// Write the scatter dataset here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The Seiberg-Witten curve family.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Donaldson-Witten partition function near the cusp.
    #[command(subcommand)]
    Zdw(ZdwCmd),
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    List,
    Show {
        name: String,
        /// Print the JSON document instead of a summary.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
pub struct Output {
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SurgeryCmd {
    Blowup {
        file: String,
        #[command(flatten)]
        out: Output,
    },
    Fibersum {
        first: String,
        second: String,
        /// Torus class in the first model, comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        t1: String,
        #[arg(long, allow_hyphen_values = true)]
        t2: String,
        /// First Betti number of the result.
        #[arg(long, default_value_t = 0)]
        b1: u32,
        #[command(flatten)]
        out: Output,
    },
    Knot {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Symmetric Alexander coefficients `a_-d,...,a_d` (trefoil: 1,-1,1).
        #[arg(long, allow_hyphen_values = true)]
        alexander: String,
        #[command(flatten)]
        out: Output,
    },
    Logt {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    /// Discriminant roots at mass `m`.
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Weierstrass data at `(u, m)`.
    Fiber {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Log-log exponent of a cusp quantity.
    Scaling {
        /// period, g2_at_cusp_roots, delta_prime or delta_u
        #[arg(long)]
        quantity: String,
        #[arg(long, default_value = "1e-3,1e-4,1e-5,1e-6")]
        radii: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ZdwCmd {
    /// Laurent coefficients at `m = 3/2` and the regularity verdict.
    Laurent {
        file: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        p: String,
        /// Observable coordinates; entries `re` or `re:im` (default 0).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long, default_value_t = crate::zdw::DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long, default_value_t = crate::zdw::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = crate::zdw::DEFAULT_NMAX)]
        nmax: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Input(format!("`{s}` is not a number")))
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse_f64(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        _ => Err(Error::Input(format!("`{s}`: expected RE or RE,IM"))),
    }
}

fn parse_class(s: &str) -> Result<CohClass<BigInt>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Input(format!("`{t}` is not an integer")))
        })
        .collect::<Result<Vec<_>>>()
        .map(CohClass::new)
}

fn parse_observable(s: &str) -> Result<Vec<Complex64>> {
    s.split(',')
        .map(|t| match t.split_once(':') {
            Some((re, im)) => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
            None => Ok(Complex64::new(parse_f64(t)?, 0.0)),
        })
        .collect()
}

/// A path, or `catalog:NAME`.
pub fn load(source: &str) -> Result<Model> {
    match source.strip_prefix("catalog:") {
        Some(name) => catalog(name),
        None => read_manifold(std::path::Path::new(source)),
    }
}

fn emit(out: &mut dyn Write, target: &Output, m: &Model) -> Result<()> {
    let text = serialize_manifold(m);
    match &target.output {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.15e} {:+.15e}i", z.re, z.im)
}

fn summary(out: &mut dyn Write, m: &Model) -> Result<()> {
    writeln!(out, "name:       {}", m.name)?;
    writeln!(out, "b1, b2+, b2-: {}, {}, {}", m.b1, m.b2plus, m.b2minus)?;
    writeln!(out, "chi_h, c1^2: {}, {}", m.chi_h(), m.c1sq())?;
    let rows: Vec<String> = m
        .lattice
        .gram()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    writeln!(out, "lattice:    [{}]", rows.join(", "))?;
    writeln!(out, "lift:       {}", m.lift.upsilon)?;
    writeln!(out, "classes:")?;
    for (x, sw) in &m.basic_classes {
        writeln!(out, "  {x} -> {sw}")?;
    }
    writeln!(out, "twisted series: {}", twisted_series(m)?)?;
    for p in &m.provenance {
        writeln!(out, "note: {p}")?;
    }
    Ok(())
}

fn run_command(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Catalog(CatalogCmd::List) => {
            for n in catalog_names() {
                writeln!(out, "{n}")?;
            }
            writeln!(out, "# also: E(n) n>=2, E(n)#k, Y(n) n>=4, synthetic-nonSST(even n>=4)")?;
            Ok(EXIT_OK)
        }
        Command::Catalog(CatalogCmd::Show { name, json }) => {
            let m = catalog::<BigInt>(&name)?;
            if json {
                out.write_all(serialize_manifold(&m).as_bytes())?;
            } else {
                summary(out, &m)?;
            }
            Ok(EXIT_OK)
        }
        Command::Check { files, strict } => {
            let mut code = EXIT_OK;
            for f in files {
                let m = match load(&f) {
                    Ok(m) => m,
                    Err(Error::Validation(rep)) => {
                        writeln!(out, "{f}: INVALID\n{rep}")?;
                        code = code.max(EXIT_VIOLATION);
                        continue;
                    }
                    Err(e) => {
                        writeln!(err, "{f}: {e}")?;
                        code = EXIT_INPUT;
                        continue;
                    }
                };
                let rep = validate_model(&m, strict);
                for w in rep.warnings() {
                    writeln!(out, "{}: warning [{:?}] {}", m.name, w.check, w.message)?;
                }
                if !rep.is_ok() {
                    writeln!(out, "{rep}")?;
                    code = code.max(EXIT_VIOLATION);
                    continue;
                }
                let v = sst_check(&m)?;
                let g = count_b_and_bound(&m)?;
                writeln!(
                    out,
                    "{}: sst={} required={} actual={}{} B={} bound={}",
                    m.name,
                    v.is_sst,
                    v.required_order,
                    v.actual_order,
                    if v.probabilistic { " (probabilistic)" } else { "" },
                    g.b,
                    g.bound_satisfied && g.corollary_satisfied
                )?;
                if !v.is_sst || g.is_violation() {
                    code = code.max(EXIT_VIOLATION);
                }
            }
            Ok(code)
        }
        Command::Surgery(s) => {
            match s {
                SurgeryCmd::Blowup { file, out: o } => emit(out, &o, &blowup(&load(&file)?)?)?,
                SurgeryCmd::Fibersum {
                    first,
                    second,
                    t1,
                    t2,
                    b1,
                    out: o,
                } => {
                    let r = fiber_sum(&load(&first)?, &parse_class(&t1)?, &load(&second)?, &parse_class(&t2)?, b1)?;
                    emit(out, &o, &r)?
                }
                SurgeryCmd::Knot {
                    file,
                    t,
                    alexander,
                    out: o,
                } => {
                    let a = parse_class(&alexander)?.0;
                    emit(out, &o, &knot_surgery(&load(&file)?, &parse_class(&t)?, &a)?)?
                }
                SurgeryCmd::Logt { file, t, p, out: o } => {
                    emit(out, &o, &log_transform(&load(&file)?, &parse_class(&t)?, p)?)?
                }
            }
            Ok(EXIT_OK)
        }
        Command::Geography { files, csv } => {
            let mut models = Vec::new();
            let mut failures = Vec::new();
            for f in &files {
                match load(f) {
                    Ok(m) => models.push(m),
                    Err(e) => failures.push((f.clone(), e.to_string())),
                }
            }
            let mut rep: GeographyReport = geography_report(&models);
            let input_failed = !failures.is_empty();
            rep.failures.extend(failures);
            out.write_all(rep.to_table().as_bytes())?;
            if let Some(p) = csv {
                std::fs::write(p, rep.to_csv())?;
            }
            let violation = rep.records.iter().any(|r| r.is_violation());
            Ok(if violation {
                EXIT_VIOLATION
            } else if input_failed || !rep.failures.is_empty() {
                EXIT_INPUT
            } else {
                EXIT_OK
            })
        }
        Command::Curve(CurveCmd::Roots { m }) => {
            let m = parse_complex(&m)?;
            let set = discriminant_roots(m);
            writeln!(out, "m = {}", fmt_c(m))?;
            for (i, r) in set.roots.iter().enumerate() {
                let label = match set.pairing_tag {
                    PairingTag::Cusp { plus, .. } if plus == i => "u+",
                    PairingTag::Cusp { minus, .. } if minus == i => "u-",
                    PairingTag::Cusp { .. } => "u3",
                    _ => "u",
                };
                writeln!(out, "{label:<3} {}", fmt_c(r.u))?;
            }
            if set.pairing_tag == PairingTag::TripleDegenerate {
                writeln!(out, "# triple root")?;
            }
            Ok(EXIT_OK)
        }
        Command::Curve(CurveCmd::Fiber { u, m }) => {
            let d = weierstrass_data(parse_complex(&u)?, parse_complex(&m)?);
            writeln!(out, "g2      {}", fmt_c(d.g2))?;
            writeln!(out, "g3      {}", fmt_c(d.g3))?;
            writeln!(out, "delta   {}", fmt_c(d.delta))?;
            writeln!(out, "delta'  {}", fmt_c(d.delta_prime))?;
            match d.period_sq {
                Some(p) => writeln!(out, "varpi^2 {}", fmt_c(p))?,
                None => writeln!(out, "varpi^2 undefined (g3 = 0)")?,
            }
            match d.t {
                Some(t) => writeln!(out, "T       {}", fmt_c(t))?,
                None => writeln!(out, "T       undefined")?,
            }
            Ok(EXIT_OK)
        }
        Command::Curve(CurveCmd::Scaling { quantity, radii }) => {
            let q: CuspQuantity = quantity.parse()?;
            let radii = radii.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
            let fit = cusp_scaling_fit::<f64>(q, &radii)?;
            writeln!(out, "{:>12} {:>24}", "z", "|q|")?;
            for (z, v) in &fit.samples {
                writeln!(out, "{z:>12.3e} {v:>24.15e}")?;
            }
            writeln!(out, "slope {:.6} intercept {:.6} residual {:.3e}", fit.slope, fit.intercept, fit.residual)?;
            Ok(EXIT_OK)
        }
        Command::Zdw(ZdwCmd::Laurent {
            file,
            p,
            s,
            radius,
            samples,
            nmax,
            csv,
        }) => {
            let m = load(&file)?;
            let s = match s {
                Some(s) => parse_observable(&s)?,
                None => vec![Complex64::new(0.0, 0.0); m.rank()],
            };
            let input = ZdwInput::new(m, parse_complex(&p)?, s);
            let rep = laurent_spectrum(&input, radius, samples, nmax)?;
            let mut code = EXIT_OK;
            let mut csv_text = String::new();
            for sp in &rep.branches {
                out.write_all(sp.to_table().as_bytes())?;
                writeln!(
                    out,
                    "# inverse residual {:.2e}, single-valuedness {:.2e}, odd-power ratio {:.2e}",
                    sp.inverse_residual, sp.single_valuedness, sp.half_integer_ratio
                )?;
                let v = regularity_verdict(sp, &input.model)?;
                writeln!(out, "{}", serde_json::to_string(&v).expect("json"))?;
                if v.status == VerdictStatus::Inconclusive {
                    writeln!(err, "warning: inconclusive spectrum on branch {:?}", v.branch)?;
                }
                if !v.consistent_with_bound || v.consistent_with_sst == Some(false) {
                    code = EXIT_VIOLATION;
                }
                if csv_text.is_empty() {
                    csv_text = sp.to_csv();
                } else {
                    csv_text.push_str(sp.to_csv().split_once('\n').map_or("", |x| x.1));
                }
            }
            if let Some(path) = csv {
                std::fs::write(path, csv_text)?;
            }
            Ok(code)
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<A, T>(args: A, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    A: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    match run_command(cli.command, out, err) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Validation(_) => EXIT_VIOLATION,
                _ => EXIT_INPUT,
            }
        }
    }
}
