//! Command-line front end: admissibility checks, tabulation, the
//! gamma-series derivation, deleted-quadric K-theory, and formula
//! verification. `--json` switches every subcommand to a single JSON
//! document with a `format_version` field.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use sumsq::admissibility::{
    admissibility_table, check_direct, check_shifted, minimal_admissible_n, Triple, Verdict,
};
use sumsq::formula::{ConsistencyReport, SosFormula};
use sumsq::gamma::{divisibility_constraints, inverse_series, ConstraintRecord};
use sumsq::grothendieck::{deleted_quadric_k0, ideal_equals, IdealLattice, RingPresentation};
use sumsq::poly::TruncatedIntPoly;

const FORMAT_VERSION: u32 = 1;
const CHAR2_NOTE: &str =
    "note: the divisibility conditions assume characteristic != 2; over characteristic 2, formulas of type [r,s,1] always exist";

const MAX_RS: u64 = 10_000;
const MAX_N: u64 = 20_000;
const MAX_GAMMA_S: u64 = 1024;
const MAX_TABLE: u64 = 256;
const MAX_RING_N: usize = 200;

#[derive(Parser)]
#[command(name = "sumsq", version, about = "Exact checks for sums-of-squares formulas of type [r,s,n]")]
struct Cli {
    /// Emit one JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide both divisibility conditions for a triple [r, s, n]
    Check { r: u64, s: u64, n: u64 },
    /// Least n >= max(r, s) passing the condition
    #[command(name = "minimal-n")]
    MinimalN { r: u64, s: u64 },
    /// Table of minimal admissible n over a rectangle of (r, s)
    Table {
        #[arg(long)]
        rmax: u64,
        #[arg(long)]
        smax: u64,
    },
    /// Inverse gamma-series coefficients in R_c and the constraint records
    Gamma { r: u64, s: u64, n: u64 },
    /// Grothendieck-ring computations for deleted quadrics
    #[command(subcommand)]
    Ring(RingCommand),
    /// Verify a formula document by exact polynomial expansion
    Verify {
        file: PathBuf,
        /// Also restate the characteristic-2 caveat
        #[arg(long = "char2-note")]
        char2_note: bool,
    },
}

#[derive(Subcommand)]
enum RingCommand {
    /// Additive invariants and relations of K0 of P^n minus a split quadric
    #[command(name = "deleted-quadric")]
    DeletedQuadric { n: usize },
    /// Check the two generator descriptions of the kernel ideal at order 2k
    #[command(name = "ideal-check")]
    IdealCheck { k: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { r, s, n } => cmd_check(r, s, n, cli.json),
        Command::MinimalN { r, s } => cmd_minimal_n(r, s, cli.json),
        Command::Table { rmax, smax } => cmd_table(rmax, smax, cli.json),
        Command::Gamma { r, s, n } => cmd_gamma(r, s, n, cli.json),
        Command::Ring(RingCommand::DeletedQuadric { n }) => cmd_deleted_quadric(n, cli.json),
        Command::Ring(RingCommand::IdealCheck { k }) => cmd_ideal_check(k, cli.json),
        Command::Verify { file, char2_note } => cmd_verify(&file, char2_note, cli.json),
    }
}

fn parse_triple(r: u64, s: u64, n: u64, max_s: u64) -> Result<Triple, String> {
    if r > MAX_RS || s > max_s {
        return Err(format!("r is limited to {MAX_RS} and s to {max_s} here"));
    }
    if n > MAX_N {
        return Err(format!("n is limited to {MAX_N}"));
    }
    Triple::new(r, s, n).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CheckOutput {
    format_version: u32,
    command: &'static str,
    triple: Triple,
    modulus_exponent: u64,
    admissible: bool,
    direct: Verdict,
    shifted: Verdict,
    assumes_characteristic_not_two: bool,
}

fn cmd_check(r: u64, s: u64, n: u64, json: bool) -> Result<ExitCode, String> {
    let triple = parse_triple(r, s, n, MAX_RS)?;
    let direct = check_direct(&triple);
    let shifted = check_shifted(&triple);
    let admissible = direct.passes && shifted.passes;
    if json {
        print_json(&CheckOutput {
            format_version: FORMAT_VERSION,
            command: "check",
            triple,
            modulus_exponent: triple.modulus_exponent(),
            admissible,
            direct,
            shifted,
            assumes_characteristic_not_two: true,
        });
    } else {
        println!(
            "[{r},{s},{n}]  c = {}  range {}",
            triple.modulus_exponent(),
            match triple.constraint_range() {
                Some((lo, hi)) => format!("{lo} <= i <= {hi}"),
                None => "empty".to_string(),
            }
        );
        if triple.constraint_range().is_none() {
            println!("no constraints (vacuous)");
        } else {
            print_verdict("C(n,i)", &direct);
            print_verdict("C(r+i-1,i)", &shifted);
        }
        println!(
            "verdict: {}",
            if admissible { "ADMISSIBLE (necessary condition passes)" } else { "FORBIDDEN" }
        );
        println!("{CHAR2_NOTE}");
    }
    Ok(exit_flag(admissible))
}

fn print_verdict(label: &str, verdict: &Verdict) {
    println!("condition on {label}:");
    for c in &verdict.constraints {
        let val = match c.valuation {
            Some(v) => v.to_string(),
            None => "inf".to_string(),
        };
        println!(
            "  i={:>3}  need 2^{:<3} | {:<12} v2 = {:>3}  {}",
            c.i,
            c.required_exponent,
            c.binomial.to_string(),
            val,
            if c.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    println!("  => {}", if verdict.passes { "passes" } else { "fails" });
}

#[derive(Serialize)]
struct MinimalNOutput {
    format_version: u32,
    command: &'static str,
    r: u64,
    s: u64,
    minimal_n: u64,
}

fn cmd_minimal_n(r: u64, s: u64, json: bool) -> Result<ExitCode, String> {
    if r == 0 || s == 0 || r > MAX_RS || s > MAX_RS {
        return Err(format!("r and s must lie in 1..={MAX_RS}"));
    }
    let minimal = minimal_admissible_n(r, s).map_err(|e| e.to_string())?;
    if json {
        print_json(&MinimalNOutput {
            format_version: FORMAT_VERSION,
            command: "minimal-n",
            r,
            s,
            minimal_n: minimal,
        });
    } else {
        println!("minimal admissible n for r={r}, s={s}: {minimal}");
        println!("{CHAR2_NOTE}");
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TableOutput {
    format_version: u32,
    command: &'static str,
    r_max: u64,
    s_max: u64,
    /// rows indexed by r, columns by s
    rows: Vec<Vec<u64>>,
}

fn cmd_table(rmax: u64, smax: u64, json: bool) -> Result<ExitCode, String> {
    if rmax == 0 || smax == 0 || rmax > MAX_TABLE || smax > MAX_TABLE {
        return Err(format!("table bounds must lie in 1..={MAX_TABLE}"));
    }
    let rows = admissibility_table(rmax, smax).map_err(|e| e.to_string())?;
    if json {
        print_json(&TableOutput {
            format_version: FORMAT_VERSION,
            command: "table",
            r_max: rmax,
            s_max: smax,
            rows,
        });
    } else {
        let width = rows
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max(smax.to_string().len());
        print!("r\\s ");
        for s in 1..=smax {
            print!("{s:>width$} ");
        }
        println!();
        for (idx, row) in rows.iter().enumerate() {
            print!("{:>3} ", idx + 1);
            for v in row {
                print!("{v:>width$} ");
            }
            println!();
        }
        println!("{CHAR2_NOTE}");
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SeriesCoefficient {
    i: u64,
    unit: String,
    nu: String,
}

#[derive(Serialize)]
struct GammaOutput {
    format_version: u32,
    command: &'static str,
    triple: Triple,
    modulus_exponent: u64,
    series: Vec<SeriesCoefficient>,
    constraints: Vec<ConstraintRecord>,
    obstructed: bool,
    assumes_characteristic_not_two: bool,
}

fn cmd_gamma(r: u64, s: u64, n: u64, json: bool) -> Result<ExitCode, String> {
    let triple = parse_triple(r, s, n, MAX_GAMMA_S)?;
    let c = triple.modulus_exponent();
    let cu32 = u32::try_from(c).expect("bounded above by MAX_GAMMA_S");
    let series = inverse_series(r, c, cu32).map_err(|e| e.to_string())?;
    let records = divisibility_constraints(r, s, n);
    let obstructed = records.iter().any(|rec| !rec.satisfied);
    if json {
        print_json(&GammaOutput {
            format_version: FORMAT_VERSION,
            command: "gamma",
            triple,
            modulus_exponent: c,
            series: series
                .iter()
                .enumerate()
                .map(|(i, coeff)| SeriesCoefficient {
                    i: i as u64,
                    unit: coeff.unit_part().to_string(),
                    nu: coeff.nu_part().to_string(),
                })
                .collect(),
            constraints: records,
            obstructed,
            assumes_characteristic_not_two: true,
        });
    } else {
        println!("ring R_c = Z[nu]/(2^{c} nu, nu^2 = -2nu)");
        println!("coefficients of (1 + t*nu)^-{r} up to t^{c}:");
        for (i, coeff) in series.iter().enumerate() {
            println!("  t^{i}: {coeff}");
        }
        if records.is_empty() {
            println!("no constrained indices (vacuous range)");
        } else {
            println!("constraints (coefficient must vanish in R_{c}):");
            for rec in &records {
                println!(
                    "  i={:>3}  v2(2^(i-1) C(r+i-1,i)) = {:>3}  needs >= {}  {}",
                    rec.i,
                    rec.coefficient_valuation,
                    rec.modulus_exponent,
                    if rec.satisfied { "ok" } else { "VIOLATED" }
                );
            }
        }
        println!(
            "verdict: {}",
            if obstructed { "FORBIDDEN" } else { "no obstruction" }
        );
        println!("{CHAR2_NOTE}");
    }
    Ok(exit_flag(!obstructed))
}

#[derive(Serialize)]
struct DeletedQuadricOutput {
    format_version: u32,
    command: &'static str,
    n: usize,
    group: String,
    free_rank: usize,
    torsion: Vec<String>,
    torsion_exponent: u64,
    t_squared: String,
    two_t: String,
    relation_t_squared_equals_two_t: bool,
}

fn cmd_deleted_quadric(n: usize, json: bool) -> Result<ExitCode, String> {
    if n == 0 || n > MAX_RING_N {
        return Err(format!("n must lie in 1..={MAX_RING_N}"));
    }
    let pres: RingPresentation = deleted_quadric_k0(n).map_err(|e| e.to_string())?;
    if json {
        print_json(&DeletedQuadricOutput {
            format_version: FORMAT_VERSION,
            command: "ring-deleted-quadric",
            n,
            group: pres.group_string(),
            free_rank: pres.free_rank(),
            torsion: pres.torsion_factors().iter().map(BigInt::to_string).collect(),
            torsion_exponent: pres.torsion_exponent(),
            t_squared: pres.t_squared().to_string(),
            two_t: pres.two_t().to_string(),
            relation_t_squared_equals_two_t: pres.relation_t_squared_equals_two_t(),
        });
    } else {
        println!("K0(DQ_{n}) additive group: {}", pres.group_string());
        if pres.relation_t_squared_equals_two_t() {
            println!("{}, relation t² = 2t (both reduce to {})", pres.group_string(), pres.t_squared());
        } else {
            println!(
                "{}, t² reduces to {} while 2t reduces to {}",
                pres.group_string(),
                pres.t_squared(),
                pres.two_t()
            );
        }
        println!(
            "torsion generator: class of t, annihilated by 2^{}",
            pres.torsion_exponent()
        );
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct IdealCheckOutput {
    format_version: u32,
    command: &'static str,
    k: usize,
    order: usize,
    equal: bool,
}

fn cmd_ideal_check(k: usize, json: bool) -> Result<ExitCode, String> {
    if k == 0 || 2 * k > MAX_RING_N {
        return Err(format!("k must lie in 1..={}", MAX_RING_N / 2));
    }
    let order = 2 * k;
    let quadric = TruncatedIntPoly::from_coeffs(order, [0i64, 2, -1]);
    let lhs = IdealLattice::from_generators(
        &[quadric.clone(), TruncatedIntPoly::monomial(order, k + 1)],
        order,
    )
    .map_err(|e| e.to_string())?;
    let mut scaled_t = vec![BigInt::from(0); order + 1];
    scaled_t[1] = BigInt::from(1) << k;
    let rhs = IdealLattice::from_generators(
        &[quadric, TruncatedIntPoly::from_coeffs(order, scaled_t)],
        order,
    )
    .map_err(|e| e.to_string())?;
    let equal = ideal_equals(&lhs, &rhs).map_err(|e| e.to_string())?;
    if json {
        print_json(&IdealCheckOutput {
            format_version: FORMAT_VERSION,
            command: "ring-ideal-check",
            k,
            order,
            equal,
        });
    } else {
        println!(
            "order {order}: ideal(2t - t², t^{}) {} ideal(2t - t², 2^{k} t)",
            k + 1,
            if equal { "=" } else { "!=" }
        );
    }
    Ok(exit_flag(equal))
}

#[derive(Serialize)]
struct VerifyOutput {
    format_version: u32,
    command: &'static str,
    file: String,
    r: usize,
    s: usize,
    n: usize,
    field: String,
    verified: bool,
    orthogonality: bool,
    consistency: &'static str,
}

fn cmd_verify(file: &PathBuf, char2_note: bool, json: bool) -> Result<ExitCode, String> {
    let formula = SosFormula::from_path(file).map_err(|e| e.to_string())?;
    let verified = formula.verify();
    let orthogonality = formula.orthogonality_check();
    let report = formula.admissibility_consistency();
    let consistency = match &report {
        ConsistencyReport::NotVerified => "not-verified",
        ConsistencyReport::Char2Exempt => "char2-exempt",
        ConsistencyReport::Consistent(_) => "consistent",
        ConsistencyReport::Inconsistent(_) => "inconsistent",
    };
    if json {
        print_json(&VerifyOutput {
            format_version: FORMAT_VERSION,
            command: "verify",
            file: file.display().to_string(),
            r: formula.r(),
            s: formula.s(),
            n: formula.n(),
            field: formula.field().to_string(),
            verified,
            orthogonality,
            consistency,
        });
    } else {
        println!(
            "[{},{},{}] over {}",
            formula.r(),
            formula.s(),
            formula.n(),
            formula.field()
        );
        println!("identity:      {}", if verified { "verified" } else { "FAILED" });
        println!("orthogonality: {}", if orthogonality { "verified" } else { "failed" });
        println!("admissibility cross-check: {consistency}");
        if char2_note {
            println!("{CHAR2_NOTE}");
        }
    }
    Ok(exit_flag(verified && !report.is_fatal()))
}

fn exit_flag(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("output structs serialize")
    );
}
