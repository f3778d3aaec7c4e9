//! Command-line front end. Every table is CSV with a header row; `--out`
//! writes atomically, otherwise the table goes to stdout.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::pow;

use crate::enumerate::{enumerate_counts, MAX_ENUMERATION_M};
use crate::error::{Error, Result};
use crate::feq::{closed_form_coefficient, solve_exact, solve_jet, write_exact_csv, write_jet_csv, Solver};
use crate::limits::{f_coeff, g_coeff, omega, phi, write_moments_csv, write_sequences_csv, LawKind};
use crate::modular::{solve_jets, MAX_SLOTS};
use crate::moments::{convergence_reports, MomentReport};
use crate::number::{parse_rational, BigRational, RadicalConstant};
use crate::orbits::{orbit_series_exact, subexp_ratio_table, write_orbit_csv, write_ratio_csv};
use crate::series::{DeltaJet, LaurentQPoly, XSeries};
use crate::symmetry::{Subgroup, SymmetryClass};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CHECK: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "staircase", version, about = "Perimeter and area statistics of staircase polygons")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Brute-force counts by class, half-perimeter and area.
    Enumerate {
        /// Largest half-perimeter.
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Class series from the functional equations.
    Series {
        #[arg(long, value_parser = parse_class, default_value = "full")]
        class: SymmetryClass,
        /// Truncation order in x.
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Jet order in δ = q - 1 (jet mode).
        #[arg(long, default_value_t = 2)]
        jet: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-size area moments against the limit law.
    Moments(MomentArgs),
    /// Limit-law moments, or the auxiliary sequences when no law is given.
    Limits {
        #[arg(long, value_parser = parse_law)]
        law: Option<LawKind>,
        /// Largest moment order.
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        digits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit counts under a subgroup, or ratio tables with --alpha.
    Orbits {
        #[arg(long, value_parser = parse_subgroup, default_value = "d4")]
        subgroup: Subgroup,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Exponent for the m^α r_m / p_m table.
        #[arg(long, value_parser = parse_rational_arg)]
        alpha: Option<BigRational>,
        /// Half-perimeters for the ratio table; default 2..=order.
        #[arg(long, value_delimiter = ',')]
        m: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moment table plus one `m value` data file per k, next to --out.
    Compare(MomentArgs),
    /// Oracle and identity checks.
    Selftest {
        #[arg(long, default_value_t = 12)]
        max_m: usize,
    },
}

#[derive(Args, Debug)]
pub struct MomentArgs {
    #[arg(long, value_parser = parse_class, default_value = "full")]
    pub class: SymmetryClass,
    /// Perimeter indices (half- or quarter-perimeter, per class).
    #[arg(long, value_delimiter = ',', default_values_t = [16, 64, 256])]
    pub m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 15)]
    pub digits: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Jet,
}

fn parse_class(s: &str) -> std::result::Result<SymmetryClass, String> {
    SymmetryClass::from_str(s).map_err(|e| e.to_string())
}

fn parse_subgroup(s: &str) -> std::result::Result<Subgroup, String> {
    Subgroup::from_str(s).map_err(|e| e.to_string())
}

fn parse_law(s: &str) -> std::result::Result<LawKind, String> {
    LawKind::from_str(s).map_err(|e| e.to_string())
}

fn parse_rational_arg(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Parses `argv` and runs the command; returns the exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(config.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::OutOfRange(_) | Error::Parse(_) | Error::UnsupportedClass { .. } | Error::EmptyClass { .. } => {
                    EXIT_USAGE
                }
                _ => EXIT_CHECK,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Enumerate { order, out } => {
            let table = enumerate_counts(order)?;
            emit(out.as_deref(), |w| table.write_csv(w))?;
        }
        Command::Series { class, order, mode, jet, out } => match mode {
            Mode::Exact => {
                let s = solve_exact(class, order)?;
                emit(out.as_deref(), |w| write_exact_csv(w, &[(class, &s)]))?;
            }
            Mode::Jet => {
                let s = jet_series(class, order, jet)?;
                emit(out.as_deref(), |w| write_jet_csv(w, &[(class, &s)]))?;
            }
        },
        Command::Moments(a) => {
            let reports = convergence_reports(a.class, &a.k, &a.m)?;
            emit(a.out.as_deref(), |w| MomentReport::write_csv(&reports, w, a.digits))?;
        }
        Command::Limits { law, k, digits, out } => match law {
            Some(law) => emit(out.as_deref(), |w| write_moments_csv(w, law, k, digits))?,
            None => emit(out.as_deref(), |w| write_sequences_csv(w, k, digits))?,
        },
        Command::Orbits { subgroup, order, alpha, m, out } => match alpha {
            Some(alpha) => {
                let ms = if m.is_empty() { (2..=order).collect() } else { m };
                let rows = subexp_ratio_table(subgroup, &alpha, &ms)?;
                emit(out.as_deref(), |w| write_ratio_csv(w, subgroup, &alpha, &rows))?;
            }
            None => {
                let s = orbit_series_exact(subgroup, order)?;
                emit(out.as_deref(), |w| write_orbit_csv(w, subgroup, &s))?;
            }
        },
        Command::Compare(a) => {
            let reports = convergence_reports(a.class, &a.k, &a.m)?;
            emit(a.out.as_deref(), |w| MomentReport::write_csv(&reports, w, a.digits))?;
            let base = a.out.clone().unwrap_or_else(|| PathBuf::from("compare.csv"));
            for r in &reports {
                let path = plot_path(&base, r.class, r.k);
                write_atomic(&path, |w| r.write_plot_data(w, a.digits))?;
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Selftest { max_m } => {
            let results = selftest(max_m)?;
            let mut failed = 0;
            for (name, outcome) in &results {
                match outcome {
                    Ok(()) => println!("PASS {name}"),
                    Err(why) => {
                        failed += 1;
                        println!("FAIL {name}: {why}");
                    }
                }
            }
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK });
        }
    }
    Ok(EXIT_OK)
}

/// Jet series through the multi-modular solver when the slots fit, else big integers.
pub fn jet_series(class: SymmetryClass, order: usize, k: usize) -> Result<XSeries<DeltaJet>> {
    if k < MAX_SLOTS {
        solve_jets(&[(class, order)], k)?.remove(0).to_xseries()
    } else {
        solve_jet(class, order, k)
    }
}

fn plot_path(base: &Path, class: SymmetryClass, k: usize) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("compare");
    base.with_file_name(format!("{stem}_{}_k{k}.dat", class.name()))
}

fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, body),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    {
        let mut w = io::BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

type Check = (&'static str, std::result::Result<(), String>);

/// Runs the oracle and identity suites up to half-perimeter `max_m`.
pub fn selftest(max_m: usize) -> Result<Vec<Check>> {
    if !(4..=MAX_ENUMERATION_M).contains(&max_m) {
        return Err(Error::OutOfRange(format!("--max-m {max_m} outside 4..={MAX_ENUMERATION_M}")));
    }
    Ok(vec![
        ("oracle equivalence", check_oracle(max_m)),
        ("closed forms", check_closed_forms(max_m.max(30))),
        ("picard iteration", check_picard(max_m)),
        ("dominant balance", check_dominant_balance(20)),
        ("cross-ring jets", check_cross_ring(max_m, 4)),
        ("multi-modular jets", check_modular(max_m.max(24), 3)),
    ])
}

fn check_oracle(max_m: usize) -> std::result::Result<(), String> {
    let table = enumerate_counts(max_m).map_err(|e| e.to_string())?;
    for class in SymmetryClass::ALL {
        let s = solve_exact(class, max_m).map_err(|e| e.to_string())?;
        for m in 2..=max_m {
            let solved: Vec<(usize, BigInt)> = s.coeffs()[m]
                .terms()
                .map(|(n, c)| (n as usize, c.clone()))
                .collect();
            let counted: Vec<(usize, BigInt)> = table
                .area_distribution(class, m)
                .into_iter()
                .map(|(n, c)| (n, BigInt::from(c)))
                .collect();
            if solved != counted {
                return Err(format!("{class} differs at m = {m}"));
            }
        }
    }
    Ok(())
}

fn check_closed_forms(max_m: usize) -> std::result::Result<(), String> {
    let full = solve_exact(SymmetryClass::Full, max_m).map_err(|e| e.to_string())?;
    for m in 2..=max_m {
        let want = closed_form_coefficient(SymmetryClass::Full, m, None).map_err(|e| e.to_string())?;
        if full.coeffs()[m].at_one() != want {
            return Err(format!("full at q = 1, m = {m}"));
        }
    }
    for class in [SymmetryClass::Rect, SymmetryClass::Square] {
        let s = solve_exact(class, max_m).map_err(|e| e.to_string())?;
        for m in 2..=max_m {
            let max_area = m * m / 4;
            for n in 0..=max_area {
                let want = closed_form_coefficient(class, m, Some(n)).map_err(|e| e.to_string())?;
                if s.coeffs()[m].coeff(n as i64) != want {
                    return Err(format!("{class} at m = {m}, n = {n}"));
                }
            }
        }
    }
    Ok(())
}

fn check_picard(max_m: usize) -> std::result::Result<(), String> {
    let n = max_m.min(12);
    let mut solver = Solver::<LaurentQPoly>::new(());
    for class in SymmetryClass::ALL {
        let iterates = solver.picard_iterates(class, n).map_err(|e| e.to_string())?;
        let online = solver.series(class, n).map_err(|e| e.to_string())?.truncate(n);
        if iterates.last() != Some(&online) {
            return Err(format!("{class}: fixed point differs from the online solution"));
        }
    }
    Ok(())
}

fn check_dominant_balance(k_max: usize) -> std::result::Result<(), String> {
    for k in 1..=k_max {
        let two = BigRational::from_integer(BigInt::from(2));
        if f_coeff(k) != phi(k) / pow(two, 2 * k + 1) {
            return Err(format!("f at k = {k}"));
        }
        if g_coeff(k) != RadicalConstant::new(omega(k), -(3 * k as i64 + 1), 0) {
            return Err(format!("g at k = {k}"));
        }
    }
    Ok(())
}

fn check_cross_ring(max_m: usize, k: usize) -> std::result::Result<(), String> {
    for class in SymmetryClass::ALL {
        let exact = solve_exact(class, max_m).map_err(|e| e.to_string())?;
        let jets = solve_jet(class, max_m, k).map_err(|e| e.to_string())?;
        if exact.to_jets(k) != jets {
            return Err(format!("{class}"));
        }
    }
    Ok(())
}

fn check_modular(n: usize, k: usize) -> std::result::Result<(), String> {
    let requests: Vec<_> = SymmetryClass::ALL.iter().map(|&c| (c, n)).collect();
    let modular = solve_jets(&requests, k).map_err(|e| e.to_string())?;
    for (class, m) in requests.iter().zip(&modular) {
        let big = solve_jet(class.0, n, k).map_err(|e| e.to_string())?;
        let via_crt = m.to_xseries().map_err(|e| e.to_string())?;
        if big != via_crt || via_crt.coeffs().iter().any(|j| j.order() != k) {
            return Err(format!("{}", class.0));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors() {
        assert_eq!(run(["staircase", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["staircase", "series", "--class", "hexagon"]), EXIT_USAGE);
        assert_eq!(run(["staircase", "enumerate", "--order", "99"]), EXIT_USAGE);
    }

    #[test]
    fn square_series_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("sq.csv");
        let args = ["staircase", "series", "--class", "square", "--order", "8", "--mode", "exact", "--out"];
        let argv: Vec<OsString> = args.iter().map(OsString::from).chain([out.clone().into_os_string()]).collect();
        assert_eq!(run(argv.clone()), EXIT_OK);
        let text = fs::read_to_string(&out).unwrap();
        assert_eq!(text, "class,m,n,coefficient\nsquare,2,1,1\nsquare,4,4,1\nsquare,6,9,1\nsquare,8,16,1\n");
        assert_eq!(run(argv), EXIT_OK);
        assert_eq!(fs::read_to_string(&out).unwrap(), text);
    }

    #[test]
    fn selftest_passes() {
        assert!(selftest(8).unwrap().iter().all(|(_, r)| r.is_ok()));
    }
}
