mod point;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use witset_core::invariants::{basic_invariants, degree_table, sym_ambient_row, InvariantBasis, TableFamily};
use witset_core::jacobian::{
    chevalley_jacobian, d3_locus_check, factorization_check, factorization_check_f64, format_jacobian,
    minor_factorization_check,
};
use witset_core::parallel::Schedule;
use witset_core::polyalg::{read_poly, AnyPoly, QPoly};
use witset_core::rootsys::{arrangement_flats, build_root_system, enumerate_flats, generate_group, Family, RootSystem, DEFAULT_GROUP_CAP};
use witset_core::scalar::{format_rational, Rational, Scalar};
use witset_core::witness::{
    ci_check, conjecture_probe, highcodim_check, min_on_sphere, special_point_on_curve, sphere_vs_witness_property,
    thma_check, thmb_construct, witness_minimum, Classification, MultistartParams, Verdict, NEG_TOL,
};
use witset_core::Error;

use point::parse_point;

/// Rows printed by `degrees --all`, one per family of the table.
const TABLE_ROWS: [&str; 15] =
    ["A3", "A4", "B3", "B4", "D4", "D5", "E6", "E7", "E8", "F4", "G2", "H3", "H4", "I2(5)", "I2(6)"];

#[derive(Parser)]
#[command(name = "witset", version, about = "Witness sets for nonnegativity of reflection-invariant forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Sym, B, D, I2 or Custom (table-only families are accepted by `degrees`).
    #[arg(long)]
    family: String,
    /// Rank n, or m for I2.
    #[arg(long, alias = "param")]
    rank: Option<u32>,
    /// Custom root system: one positive root per line.
    #[arg(long)]
    roots: Option<PathBuf>,
    /// Custom basic invariant, repeatable, in polynomial file format.
    #[arg(long = "invariant")]
    invariants: Vec<PathBuf>,
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    starts_per_dim: usize,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    grad_tol: f64,
    /// Run the multistart loops on one thread.
    #[arg(long)]
    sequential: bool,
}

impl SearchArgs {
    fn params(&self) -> MultistartParams {
        let schedule = if self.sequential { Schedule::Sequential } else { Schedule::Parallel };
        MultistartParams {
            starts_per_dim: self.starts_per_dim,
            max_iter: self.max_iter,
            grad_tol: self.grad_tol,
            seed: self.seed,
            schedule,
            ..MultistartParams::default()
        }
    }

    fn header(&self) -> String {
        let p = self.params();
        format!(
            "seed: {}\nstarts_per_dim: {}\nmax_iter: {}\ngrad_tol: {:e}\narmijo: {:e}\nschedule: {:?}\nneg_tol: {:e}\n",
            p.seed, p.starts_per_dim, p.max_iter, p.grad_tol, p.armijo, p.schedule, NEG_TOL
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Degrees of basic invariants, 2dn and the construction bound.
    Degrees {
        #[arg(long, required_unless_present = "all")]
        family: Option<String>,
        #[arg(long, alias = "param")]
        rank: Option<u32>,
        /// Print the standard listing of all families.
        #[arg(long, conflicts_with = "family")]
        all: bool,
    },
    /// Order of the reflection group by breadth-first closure.
    GroupOrder {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Factors the Jacobian determinant of the invariants over the roots.
    JacobianCheck {
        #[command(flatten)]
        group: GroupArgs,
        /// Also print the Jacobian matrix.
        #[arg(long)]
        show_matrix: bool,
    },
    /// Samples the rank-deficiency equivalence of leading Jacobian columns.
    MinorCheck {
        #[command(flatten)]
        group: GroupArgs,
        /// Number of leading columns; all j when omitted.
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks the rank-2 locus of the D3 Jacobian.
    D3Locus,
    /// Tests an invariant form on the root hyperplanes, or at one point.
    Check {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        poly: PathBuf,
        /// Evaluate at this point instead, e.g. "1/√5,2/√5".
        #[arg(long)]
        at: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Minimizes a form on the unit sphere or on the root hyperplanes.
    Minimize {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        on_witness: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Lists flats of the given codimension.
    Flats {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        codim: usize,
    },
    /// Builds an invariant form nonnegative on the hyperplanes but negative at y.
    Counterexample {
        #[command(flatten)]
        group: GroupArgs,
        /// General direction, e.g. "1/√5,2/√5".
        #[arg(long)]
        y: String,
        /// Output file for the form; defaults to counterexample.poly.
        #[arg(long, default_value = "counterexample.poly")]
        out: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Finds a point on a root hyperplane sharing the first n-1 invariants with y.
    SpecialPoint {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        y: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Tests F = A(g) + g_(j+1) B(g) on the minors variety of (g_1..g_(j+1)).
    CiCheck {
        /// Generator g_i, repeatable, in order.
        #[arg(long = "g", required = true)]
        g: Vec<PathBuf>,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Tests F in R[η_1..η_j], linear in η_j, on flats of codimension n-j+1.
    HighcodimCheck {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Compares sphere and flat verdicts on random forms of degree below 2 d_j.
    ConjectureProbe {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Sphere minimum versus hyperplane minimum on random invariant forms.
    PropertySuite {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
}

/// A finished report and its exit code.
struct Report {
    text: String,
    code: u8,
}

impl Report {
    fn ok(text: String) -> Report {
        Report { text, code: 0 }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::FactorizationFailed { .. }
        | Error::LocusMismatch(_)
        | Error::ConstructionFailed(_)
        | Error::SearchFailed(_) => 3,
        _ => 2,
    }
}

fn verdict_code(v: &Verdict) -> u8 {
    match v.classification {
        Classification::Negative => 1,
        Classification::HypothesisViolated => 2,
        Classification::NonnegativeWithinTol | Classification::ExactNonnegative => 0,
    }
}

fn read_file(path: &Path) -> witset_core::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_exact(path: &Path) -> witset_core::Result<QPoly> {
    match read_poly(&read_file(path)?)? {
        AnyPoly::Exact(p) => Ok(p),
        AnyPoly::Float(_) => Err(Error::DomainMismatch { left: "exact", right: "float" }),
    }
}

fn root_system(g: &GroupArgs) -> witset_core::Result<RootSystem> {
    let family: Family = g.family.parse()?;
    if family == Family::Custom {
        let path = g.roots.as_ref().ok_or_else(|| Error::DegenerateInput("Custom needs --roots".into()))?;
        return RootSystem::from_text(&read_file(path)?);
    }
    let rank = g.rank.ok_or_else(|| Error::DegenerateInput(format!("family {family} needs --rank")))?;
    build_root_system(family, rank as usize)
}

fn basis(g: &GroupArgs) -> witset_core::Result<InvariantBasis> {
    let rs = root_system(g)?;
    if rs.family() == Family::Custom {
        let etas = g.invariants.iter().map(|p| read_exact(p)).collect::<witset_core::Result<Vec<_>>>()?;
        return InvariantBasis::custom(rs, etas);
    }
    basic_invariants(&rs)
}

fn group_line(basis: &InvariantBasis) -> String {
    let degs: Vec<String> = basis.degrees().iter().map(u32::to_string).collect();
    format!("group: {}\ndegrees: {}\n", basis.root_system().label(), degs.join(" "))
}

fn degrees(family: Option<&str>, rank: Option<u32>, all: bool) -> witset_core::Result<Report> {
    let mut out = String::new();
    if all {
        for label in TABLE_ROWS {
            let _ = writeln!(out, "{label}: {}", degree_table(label.parse()?)?);
        }
        return Ok(Report::ok(out));
    }
    let family = family.unwrap_or_default();
    match family.to_ascii_lowercase().as_str() {
        "sym" | "s" => {
            let n = rank.ok_or_else(|| Error::DegenerateInput("Sym needs --rank".into()))?;
            let _ = writeln!(out, "{}", sym_ambient_row(n)?);
        }
        _ => {
            let fam = TableFamily::parse(family, rank)?;
            let _ = writeln!(out, "{}", degree_table(fam)?);
            if let TableFamily::A(n) = fam {
                let row = sym_ambient_row(n + 1)?;
                let _ = writeln!(out, "ambient {}: {row}", row.label);
            }
        }
    }
    Ok(Report::ok(out))
}

fn check(group: &GroupArgs, poly: &Path, at: Option<&str>, search: &SearchArgs) -> witset_core::Result<Report> {
    let b = basis(group)?;
    let f = read_poly(&read_file(poly)?)?;
    let mut out = search.header() + &group_line(&b);
    if let Some(at) = at {
        return evaluate_at(&f, at, out);
    }
    let v = thma_check(&b, &f, &search.params())?;
    out += &v.to_string();
    Ok(Report { text: out, code: verdict_code(&v) })
}

/// `F(y)` for `y = c·√t`: exact when `F` is exact and of even degree.
fn evaluate_at(f: &AnyPoly, at: &str, mut out: String) -> witset_core::Result<Report> {
    let y = parse_point(at)?;
    if y.coeffs.len() != f.nvars() {
        return Err(Error::ShapeError(format!("point has {} coordinates, form has {} variables", y.coeffs.len(), f.nvars())));
    }
    let _ = writeln!(out, "point: {}", y.describe());
    let exact = match (f, f.homogeneous_degree()) {
        (AnyPoly::Exact(p), Some(d)) if d % 2 == 0 => {
            let t = Rational::from_i64(y.radicand as i64);
            Some(p.evaluate(&y.coeffs).mul(&Scalar::pow(&t, d / 2)))
        }
        (AnyPoly::Exact(p), _) if y.radicand == 1 => Some(p.evaluate(&y.coeffs)),
        _ => None,
    };
    let negative = match &exact {
        Some(v) => {
            let _ = writeln!(out, "value: {}", format_rational(v));
            let _ = writeln!(out, "value_f64: {:.12e}", v.to_f64());
            v.signum_i() < 0
        }
        None => {
            let v = f.to_f64().evaluate(&y.to_f64());
            let _ = writeln!(out, "value_f64: {v:.12e}");
            v < -NEG_TOL
        }
    };
    let _ = writeln!(out, "sign: {}", if negative { "negative" } else { "nonnegative" });
    Ok(Report { text: out, code: u8::from(negative) })
}

fn minimize(group: &GroupArgs, poly: &Path, on_witness: bool, search: &SearchArgs) -> witset_core::Result<Report> {
    let rs = root_system(group)?;
    let f = read_poly(&read_file(poly)?)?;
    let mut out = search.header();
    let _ = writeln!(out, "group: {}", rs.label());
    if on_witness {
        let v = witness_minimum(&rs, &f, &search.params())?;
        out += "set: root hyperplanes\n";
        out += &v.to_string();
        return Ok(Report { text: out, code: verdict_code(&v) });
    }
    let m = min_on_sphere(&f.to_f64(), &search.params())?;
    let pt: Vec<String> = m.point.iter().map(|v| format!("{v:.12e}")).collect();
    let _ = writeln!(out, "set: unit sphere\nmin_value: {:.12e}\nargmin: {}", m.value, pt.join(" "));
    let _ = writeln!(out, "local_minima: {}", m.local.len());
    Ok(Report { text: out, code: u8::from(m.value < -NEG_TOL) })
}

fn flats(group: &GroupArgs, codim: usize) -> witset_core::Result<Report> {
    let rs = root_system(group)?;
    let list = match rs.family() {
        Family::Sym | Family::B => enumerate_flats(rs.family(), rs.dim(), codim)?,
        _ => arrangement_flats(&rs, codim)?,
    };
    let mut out = format!("group: {}\ncodim: {codim}\nflats: {}\n", rs.label(), list.len());
    for f in &list {
        let _ = writeln!(out, "dim {}: {}", f.dim(), f.describe());
    }
    Ok(Report::ok(out))
}

fn counterexample(group: &GroupArgs, y: &str, out_path: &Path, search: &SearchArgs) -> witset_core::Result<Report> {
    let b = basis(group)?;
    // The construction only uses the direction of y.
    let dir = parse_point(y)?;
    let bundle = thmb_construct(&b, &dir.coeffs, &search.params())?;
    fs::write(out_path, bundle.phi_bar_text()).map_err(|e| Error::Parse(format!("{}: {e}", out_path.display())))?;
    let mut out = search.header() + &group_line(&b);
    let _ = writeln!(out, "direction: {}", dir.describe());
    out += &bundle.to_string();
    let _ = writeln!(out, "written: {}", out_path.display());
    Ok(Report::ok(out))
}

fn minor_check(group: &GroupArgs, j: Option<usize>, samples: usize, seed: u64) -> witset_core::Result<Report> {
    let b = basis(group)?;
    let mut out = format!("seed: {seed}\nsamples: {samples}\n") + &group_line(&b);
    let js: Vec<usize> = match j {
        Some(j) => vec![j],
        None => (1..=b.rank()).collect(),
    };
    let mut failed = false;
    for j in js {
        let r = minor_factorization_check(&b, j, samples, seed, Schedule::Parallel)?;
        failed |= !r.equivalence_failures.is_empty();
        out += &r.to_string();
    }
    Ok(Report { text: out, code: u8::from(failed) })
}

fn run(cli: Cli) -> witset_core::Result<Report> {
    match cli.command {
        Command::Degrees { family, rank, all } => degrees(family.as_deref(), rank, all),
        Command::GroupOrder { group } => {
            let b = basis(&group)?;
            let order = generate_group(b.root_system(), DEFAULT_GROUP_CAP)?.order();
            let prod: u64 = b.degrees().iter().map(|&d| u64::from(d)).product();
            Ok(Report::ok(format!("{}order: {order}\nproduct_of_degrees: {prod}\n", group_line(&b))))
        }
        Command::JacobianCheck { group, show_matrix } => {
            let b = basis(&group)?;
            let mut out = group_line(&b);
            if show_matrix {
                out += &format_jacobian(&chevalley_jacobian(&b));
            }
            if b.root_system().is_exact() {
                out += &factorization_check(&b)?.to_string();
            } else {
                out += &factorization_check_f64(&b)?.to_string();
            }
            Ok(Report::ok(out))
        }
        Command::MinorCheck { group, j, samples, seed } => minor_check(&group, j, samples, seed),
        Command::D3Locus => Ok(Report::ok(d3_locus_check()?.to_string())),
        Command::Check { group, poly, at, search } => check(&group, &poly, at.as_deref(), &search),
        Command::Minimize { group, poly, on_witness, search } => minimize(&group, &poly, on_witness, &search),
        Command::Flats { group, codim } => flats(&group, codim),
        Command::Counterexample { group, y, out, search } => counterexample(&group, &y, &out, &search),
        Command::SpecialPoint { group, y, search } => {
            let b = basis(&group)?;
            let p = special_point_on_curve(&b, &parse_point(&y)?.to_f64(), &search.params())?;
            Ok(Report::ok(search.header() + &group_line(&b) + &p.to_string()))
        }
        Command::CiCheck { g, j, poly, search } => {
            let gens = g.iter().map(|p| read_exact(p)).collect::<witset_core::Result<Vec<_>>>()?;
            let v = ci_check(&gens, j, &read_exact(&poly)?, &search.params())?;
            Ok(Report { code: verdict_code(&v), text: search.header() + &v.to_string() })
        }
        Command::HighcodimCheck { group, poly, j, search } => {
            let b = basis(&group)?;
            let v = highcodim_check(&b, &read_exact(&poly)?, j, &search.params())?;
            Ok(Report { code: verdict_code(&v), text: search.header() + &group_line(&b) + &v.to_string() })
        }
        Command::ConjectureProbe { group, j, degree, trials, search } => {
            let b = basis(&group)?;
            let r = conjecture_probe(&b, j, degree, trials, &search.params())?;
            Ok(Report::ok(search.header() + &r.to_string()))
        }
        Command::PropertySuite { group, degree, trials, search } => {
            let b = basis(&group)?;
            let r = sphere_vs_witness_property(&b, degree, trials, &search.params())?;
            Ok(Report { code: if r.passed() { 0 } else { 3 }, text: search.header() + &r.to_string() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
