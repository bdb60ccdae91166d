//! Command-line front end.
//!
//! Exit codes: 0 success, 1 identity failure, 2 precision shortfall,
//! 3 internal inconsistency, 64 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::catalog::ArraySource;
use crate::central::{self, Shift};
use crate::error::Error;
use crate::fps::{Rational, RationalFunction, Series};
use crate::riordan::RiordanArray;
use crate::suite::{self, FuzzConfig, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY: i32 = 1;
pub const EXIT_PRECISION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "riordan-central",
    version,
    about = "Exact Riordan arrays, their shifted central triangles, and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the first rows of the array's triangle
    Triangle {
        #[command(flatten)]
        array: ArrayArgs,
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print a shifted central triangle a(2n+s, n+k+s)
    Central {
        #[command(flatten)]
        array: ArrayArgs,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print A-sequence coefficients (of the central triangle when a shift is given)
    Aseq {
        #[command(flatten)]
        array: ArrayArgs,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print Z-sequence coefficients (of the central triangle when a shift is given)
    Zseq {
        #[command(flatten)]
        array: ArrayArgs,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print production matrix rows (of the central triangle when a shift is given)
    Prodmat {
        #[command(flatten)]
        array: ArrayArgs,
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the identity suite on one array
    Verify {
        #[command(flatten)]
        array: ArrayArgs,
        #[arg(long, default_value_t = 4)]
        shift_max: usize,
        #[arg(long, default_value_t = 8)]
        rows: usize,
    },
    /// Run the identity suite on random polynomial arrays
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        max_coeff: i64,
        #[arg(long, default_value_t = 16)]
        order: usize,
        #[arg(long, default_value_t = 4)]
        shift_max: usize,
    },
}

#[derive(Args, Debug)]
struct ArrayArgs {
    /// Catalog array name
    #[arg(long, conflicts_with_all = ["g", "f"], required_unless_present_all = ["g", "f"])]
    array: Option<String>,
    /// First component as "p0,p1,...[/q0,q1,...]"
    #[arg(long, requires = "f", allow_hyphen_values = true)]
    g: Option<String>,
    /// f in the multiplier x f, same grammar as --g
    #[arg(long, requires = "g", allow_hyphen_values = true)]
    f: Option<String>,
    /// Series truncation order
    #[arg(long, default_value_t = 24)]
    order: usize,
}

#[derive(Args, Debug)]
struct ShiftArgs {
    /// Canonical shift s >= 0
    #[arg(long, allow_negative_numbers = true, conflicts_with = "label")]
    shift: Option<i64>,
    /// Label r of c(A;r); same as --shift r-1
    #[arg(long = "paper-label", allow_negative_numbers = true)]
    label: Option<i64>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Include provenance in JSON output
    #[arg(long)]
    meta: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

/// Failure of a command, mapped to its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Kernel(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Kernel(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precision { .. } => EXIT_PRECISION,
        Error::Normalization(_) | Error::Lookup(_) | Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Kernel(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

impl ArrayArgs {
    fn source(&self) -> std::result::Result<ArraySource, Failure> {
        if let Some(name) = &self.array {
            return Ok(ArraySource::named(name)?);
        }
        let (g, f) = match (&self.g, &self.f) {
            (Some(g), Some(f)) => (g, f),
            _ => return Err(Failure::Usage("give --array or both --g and --f".into())),
        };
        let g: RationalFunction = g.parse()?;
        let f: RationalFunction = f.parse()?;
        Ok(ArraySource::rational(g, f)?)
    }
}

impl ShiftArgs {
    /// The requested shift, echoing the label mapping to `err` when
    /// `--paper-label` was used.
    fn resolve(&self, err: &mut dyn Write) -> std::result::Result<Option<Shift>, Failure> {
        if let Some(r) = self.label {
            let r = usize::try_from(r)
                .map_err(|_| Failure::Usage(format!("label r must be at least 1, got {r}")))?;
            let s = Shift::from_label(r)?;
            let _ = writeln!(err, "label r={r} -> s={}", s.value());
            return Ok(Some(s));
        }
        match self.shift {
            Some(s) => Ok(Some(Shift::try_from(s)?)),
            None => Ok(None),
        }
    }
}

fn cell(c: &Rational) -> String {
    c.to_string()
}

fn render(
    out: &mut dyn Write,
    output: &OutputArgs,
    label: &str,
    shift: Option<Shift>,
    rows: &[Vec<Rational>],
    meta: Value,
) -> std::io::Result<()> {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(cell).collect()).collect();
    match output.format {
        Format::Table => {
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
            for r in &cells {
                let r: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
                writeln!(out, "{}", r.join(" "))?;
            }
        }
        Format::Csv => {
            for r in &cells {
                writeln!(out, "{}", r.join(","))?;
            }
        }
        Format::Json => {
            let doc = json!({
                "array": label,
                "shift": shift.map(Shift::value),
                "rows": cells,
                "meta": if output.meta { meta } else { json!({}) },
            });
            writeln!(out, "{doc}")?;
        }
    }
    Ok(())
}

fn meta(command: &str, source: &ArraySource, order: usize, shift: Option<Shift>) -> Value {
    let mut m = json!({
        "command": command,
        "order": order,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if let Some(e) = source.catalog_entry() {
        m["description"] = json!(e.description);
    }
    if let Some(s) = shift {
        m["label_r"] = json!(s.label());
    }
    m
}

fn series_row(s: &Series, n: usize) -> std::result::Result<Vec<Vec<Rational>>, Failure> {
    if s.order() < n {
        return Err(Error::Precision {
            required: n,
            available: s.order(),
        }
        .into());
    }
    Ok(vec![s.coeffs()[..n].to_vec()])
}

fn with_shift(
    source: &ArraySource,
    order: usize,
    s: Option<Shift>,
    need: usize,
) -> std::result::Result<(RiordanArray, Option<RiordanArray>), Failure> {
    let extra = s.map_or(0, Shift::value);
    let a = source.at_order(order.max(need + extra))?;
    let c = match s {
        Some(s) => Some(central::central_array(&a, s)?.combined),
        None => None,
    };
    Ok((a, c))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let io =
        |e: std::io::Error| Failure::Kernel(Error::Inconsistency(format!("write failed: {e}")));
    match command {
        Command::Triangle {
            array,
            rows,
            output,
        } => {
            let source = array.source()?;
            let a = source.at_order(array.order)?;
            let tri = a.triangle(rows)?;
            let m = meta("triangle", &source, a.order(), None);
            render(out, &output, &source.label(), None, tri.rows(), m).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Central {
            array,
            shift,
            rows,
            output,
        } => {
            let source = array.source()?;
            let s = shift.resolve(err)?.unwrap_or(Shift::CENTRAL);
            let a = source.at_order(array.order.max(2 * rows + s.value()))?;
            let direct = central::central_direct(&a, s, rows)?;
            let factored = central::central_array(&a, s)?.combined.triangle(rows)?;
            if let Some((n, k)) = factored.first_mismatch(&direct) {
                return Err(Error::IdentityViolation(format!(
                    "factorization and direct extraction differ at ({n},{k})"
                ))
                .into());
            }
            let _ = writeln!(err, "s={} is c(A;{})", s.value(), s.label());
            let m = meta("central", &source, a.order(), Some(s));
            render(out, &output, &source.label(), Some(s), direct.rows(), m).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Aseq {
            array,
            shift,
            rows,
            output,
        } => {
            let source = array.source()?;
            let s = shift.resolve(err)?;
            let (a, _) = with_shift(&source, array.order, s, rows)?;
            let seq = match s {
                Some(s) => central::a_of_central(&a, s)?,
                None => a.a_sequence(),
            };
            let m = meta("aseq", &source, a.order(), s);
            render(
                out,
                &output,
                &source.label(),
                s,
                &series_row(&seq, rows)?,
                m,
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Zseq {
            array,
            shift,
            rows,
            output,
        } => {
            let source = array.source()?;
            let s = shift.resolve(err)?;
            let (a, c) = with_shift(&source, array.order, s, rows + 1)?;
            // A zero Z-series (identity-like arrays) has no closed form to assert.
            let seq = match (s, c) {
                (Some(s), Some(c)) if c.z_sequence().coeffs().iter().any(|z| !z.is_zero()) => {
                    central::z_of_central(&a, s)?
                }
                (_, Some(c)) => c.z_sequence(),
                _ => a.z_sequence(),
            };
            let m = meta("zseq", &source, a.order(), s);
            render(
                out,
                &output,
                &source.label(),
                s,
                &series_row(&seq, rows)?,
                m,
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Prodmat {
            array,
            shift,
            rows,
            output,
        } => {
            let source = array.source()?;
            let s = shift.resolve(err)?;
            let (a, c) = with_shift(&source, array.order, s, rows + 1)?;
            let p = c.as_ref().unwrap_or(&a).production_matrix(rows)?;
            let m = meta("prodmat", &source, a.order(), s);
            render(out, &output, &source.label(), s, p.rows(), m).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            array,
            shift_max,
            rows,
        } => {
            let source = array.source()?;
            if rows < 2 {
                return Err(Failure::Usage("verify needs --rows of at least 2".into()));
            }
            let report = suite::run_suite(&source, SuiteConfig { rows, shift_max });
            write!(out, "{report}").map_err(io)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_IDENTITY
            })
        }
        Command::Fuzz {
            seed,
            trials,
            max_coeff,
            order,
            shift_max,
        } => {
            if trials == 0 {
                return Err(Failure::Usage("--trials must be at least 1".into()));
            }
            if max_coeff < 0 {
                return Err(Failure::Usage("--max-coeff must be non-negative".into()));
            }
            let report = suite::fuzz(FuzzConfig {
                seed,
                trials,
                max_coeff,
                order,
                shift_max,
            });
            write!(out, "{report}").map_err(io)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_IDENTITY
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("riordan-central").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn delannoy_csv() {
        let (code, out, _) = call(&[
            "triangle", "--array", "delannoy", "--rows", "6", "--format", "csv",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 6);
        assert_eq!(out.lines().last(), Some("1,9,25,25,9,1"));
    }

    #[test]
    fn pascal_table() {
        let (code, out, _) = call(&["triangle", "--array", "pascal", "--rows", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1\n1 1\n1 2 1\n");
    }

    #[test]
    fn literal_matches_catalog() {
        let lit = call(&[
            "central", "--g", "1/1,-1", "--f", "1,1/1,-1", "--format", "csv",
        ]);
        let cat = call(&["central", "--array", "delannoy", "--format", "csv"]);
        assert_eq!(lit.0, 0);
        assert_eq!(lit.1, cat.1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            call(&["central", "--array", "pascal", "--shift", "-1"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["triangle", "--g", "2", "--f", "1"]).0, EXIT_USAGE);
        assert_eq!(
            call(&["triangle", "--g", "1/0,1", "--f", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["triangle", "--array", "nope"]).0, EXIT_USAGE);
        assert_eq!(call(&["triangle"]).0, EXIT_USAGE);
        assert_eq!(call(&["fuzz", "--trials", "0"]).0, EXIT_USAGE);
        assert_eq!(
            call(&["central", "--array", "pascal", "--paper-label", "0"]).0,
            EXIT_USAGE
        );
        let (code, _, err) = call(&["triangle", "--array", "pascal", "--rows", "30"]);
        assert_eq!(code, EXIT_PRECISION);
        assert!(err.contains("order 30 required"), "{err}");
        assert_eq!(call(&["--help"]).0, EXIT_OK);
        assert_eq!(call(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn label_alias() {
        let by_label = call(&[
            "central",
            "--array",
            "delannoy",
            "--paper-label",
            "2",
            "--rows",
            "5",
        ]);
        let by_shift = call(&[
            "central", "--array", "delannoy", "--shift", "1", "--rows", "5",
        ]);
        assert_eq!(by_label.1, by_shift.1);
        assert!(by_label.2.contains("r=2 -> s=1"));
        assert!(by_shift.2.contains("s=1 is c(A;2)"));
    }
}
