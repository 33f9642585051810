//! Command-line entry point tying the library together: diagram evaluation,
//! moduli assembly, local-model reports, and index computations.
//!
//! Every subcommand is deterministic given its flags. Exit codes are stable
//! for scripting: 0 success, 1 usage error, 2 input parse error, 3 violated
//! invariant. The only environment influence is `RAYON_NUM_THREADS`, which
//! caps worker threads without changing any output.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::curvecount::{moduli_from_json, wall_event_from_json, CountError, ModuliSet};
use crate::diagram::{parse_diagram, DiagramError, FramedDiagram};
use crate::geometry::{
    boundary_sigma_intersections, chain_intersections, convergence_check, framing_balance,
    linking_number, projected_writhe, GeometryError, LocalModelFamily, ModelChart, SignedCount,
    Window,
};
use crate::index::{
    dbar_index, dbar_index_numeric, BoundaryType, IndexError, NumericParams, WeightPair,
};
use crate::laurent::{conifold_substitute, LaurentError};
use crate::skein::{evaluate_s3, SkeinError};

#[derive(Parser)]
#[command(
    name = "skein",
    version,
    about = "Framed link evaluation and skein-valued curve counting",
    after_help = "RAYON_NUM_THREADS caps worker threads; nothing else is read \
                  from the environment."
)]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a link diagram in the skein of S3.
    Homfly {
        /// Diagram text: `PD[X[1,5,2,4], ...]` or `BR[n, [i1, i2, ...]]`.
        diagram: String,
        /// Correct every component to framing zero before evaluating.
        #[arg(long)]
        zero_framed: bool,
    },
    /// Assemble the skein-valued count recorded in a moduli JSON file.
    Count {
        /// Path to the moduli JSON file.
        moduli: PathBuf,
        /// Apply the wall move in this event JSON file before assembling.
        #[arg(long)]
        wall: Option<PathBuf>,
        /// Print the total invariant with the S3 skein factor collapsed out.
        #[arg(long = "collapse-s3", conflicts_with_all = ["conifold", "reduce_by"])]
        collapse_s3: bool,
        /// Substitute Q = a^2, merging class variables into the framing
        /// variable of the first brane.
        #[arg(long, conflicts_with = "reduce_by")]
        conifold: bool,
        /// Divide the partition function by the one assembled from this
        /// closed-moduli JSON file.
        #[arg(long = "reduce-by")]
        reduce_by: Option<PathBuf>,
    },
    /// Report signed chain intersections for a local model family.
    Localmodel {
        /// Family to evaluate.
        family: Family,
        /// Deformation parameter t; repeat the flag to sample several values.
        #[arg(long = "t", allow_negative_numbers = true)]
        t: Vec<f64>,
        /// Wall offset s for the tangency family.
        #[arg(long = "s", allow_negative_numbers = true)]
        s: Option<f64>,
        /// Branch sign for the tangency family: + or -.
        #[arg(long, value_parser = parse_branch)]
        branch: Option<i8>,
        /// Neck parameter rho for the nodal families; repeatable.
        #[arg(long = "rho")]
        rho: Vec<f64>,
        /// Verify the family's documented invariant; violations exit with
        /// code 3.
        #[arg(long)]
        check: bool,
    },
    /// Fredholm index of the weighted dbar operator on a cylinder or strip.
    Index {
        /// End weights, written delta_minus delta_plus.
        #[arg(long, num_args = 2, allow_negative_numbers = true,
              value_names = ["DELTA_MINUS", "DELTA_PLUS"])]
        weights: Vec<f64>,
        /// Underlying one-manifold of the operator.
        #[arg(long = "type", value_enum)]
        boundary: Boundary,
        /// Also run the spectral discretization and print its count.
        #[arg(long)]
        numeric: bool,
        /// Fourier mode bound for --numeric; derived from the weights when
        /// omitted.
        #[arg(long)]
        modes: Option<i64>,
        /// Half-length of the truncated cylinder for --numeric.
        #[arg(long, default_value_t = 10.0)]
        length: f64,
        /// Number of grid cells for --numeric.
        #[arg(long, default_value_t = 2000)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    ThroughGamma,
    Tangency,
    HyperbolicPair,
    HyperbolicNodal,
    EllipticCylinder,
    EllipticNodal,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::ThroughGamma => "through-gamma",
            Family::Tangency => "tangency",
            Family::HyperbolicPair => "hyperbolic-pair",
            Family::HyperbolicNodal => "hyperbolic-nodal",
            Family::EllipticCylinder => "elliptic-cylinder",
            Family::EllipticNodal => "elliptic-nodal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Boundary {
    Cylinder,
    Strip,
}

fn parse_branch(text: &str) -> Result<i8, String> {
    match text {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        other => Err(format!("branch must be + or -, got {other}")),
    }
}

/// A classified failure carrying the process exit code.
#[derive(Debug)]
enum Failure {
    /// Flag or parameter outside its documented domain: exit 1.
    Usage(String),
    /// Malformed input text or file: exit 2.
    Parse(String),
    /// A computation contradicted a documented invariant: exit 3.
    Invariant(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Invariant(m) => f.write_str(m),
        }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Failure {
        Failure::Parse(e.to_string())
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Failure {
        Failure::Parse(e.to_string())
    }
}

impl From<LaurentError> for Failure {
    fn from(e: LaurentError) -> Failure {
        Failure::Parse(e.to_string())
    }
}

impl From<SkeinError> for Failure {
    fn from(e: SkeinError) -> Failure {
        Failure::Invariant(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Failure {
        match e {
            GeometryError::BadParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Invariant(e.to_string()),
        }
    }
}

impl From<IndexError> for Failure {
    fn from(e: IndexError) -> Failure {
        match e {
            IndexError::OnWall(_) | IndexError::BadParameter(_) => Failure::Usage(e.to_string()),
            IndexError::Inconclusive { .. } => Failure::Invariant(e.to_string()),
        }
    }
}

/// Runs the CLI against the process arguments and returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(output) => {
            println!("{output}");
            0
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.code()
        }
    }
}

fn execute(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Homfly {
            diagram,
            zero_framed,
        } => cmd_homfly(&diagram, zero_framed, cli.json),
        Command::Count {
            moduli,
            wall,
            collapse_s3,
            conifold,
            reduce_by,
        } => cmd_count(
            &moduli,
            wall.as_deref(),
            collapse_s3,
            conifold,
            reduce_by.as_deref(),
            cli.json,
        ),
        Command::Localmodel {
            family,
            t,
            s,
            branch,
            rho,
            check,
        } => cmd_localmodel(family, &t, s, branch, &rho, check),
        Command::Index {
            weights,
            boundary,
            numeric,
            modes,
            length,
            grid,
        } => cmd_index(&weights, boundary, numeric, modes, length, grid, cli.json),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn zero_framed_diagram(d: &FramedDiagram) -> Result<FramedDiagram, Failure> {
    let mut out = d.clone();
    for comp in 0..d.components().len() {
        let framing = out.framing(comp);
        let delta = i32::try_from(-framing)
            .map_err(|_| Failure::Usage(format!("framing {framing} out of correction range")))?;
        out = out.with_correction(comp, delta)?;
    }
    Ok(out)
}

fn cmd_homfly(text: &str, zero_framed: bool, as_json: bool) -> Result<String, Failure> {
    let mut diagram = parse_diagram(text)?;
    if zero_framed {
        diagram = zero_framed_diagram(&diagram)?;
    }
    let value = evaluate_s3(&diagram)?;
    let rendered = value.to_string();
    if as_json {
        Ok(json!({ "value": rendered }).to_string())
    } else {
        Ok(rendered)
    }
}

fn cmd_count(
    moduli_path: &Path,
    wall: Option<&Path>,
    collapse_s3: bool,
    conifold: bool,
    reduce_by: Option<&Path>,
    as_json: bool,
) -> Result<String, Failure> {
    let mut moduli: ModuliSet = moduli_from_json(&read_file(moduli_path)?)?;
    if let Some(event_path) = wall {
        let event = wall_event_from_json(&read_file(event_path)?)?;
        moduli = moduli.apply_wall_event(&event)?;
    }
    let rendered = if collapse_s3 {
        moduli.assemble_total()?.collapse_s3_factor()?.to_string()
    } else if conifold {
        let series = moduli.partition_function()?;
        let a_var = moduli.branes().a_var(0);
        conifold_substitute(&series, &a_var)?.to_string()
    } else if let Some(closed_path) = reduce_by {
        let closed: ModuliSet = moduli_from_json(&read_file(closed_path)?)?;
        let num = moduli.partition_function()?;
        let den = closed.partition_function()?;
        crate::curvecount::reduced_invariant(&num, &den)?.to_string()
    } else {
        moduli.partition_function()?.to_string()
    };
    if as_json {
        Ok(json!({ "value": rendered }).to_string())
    } else {
        Ok(rendered)
    }
}

fn count_json(count: &SignedCount) -> serde_json::Value {
    serde_json::to_value(count).expect("signed counts always serialize")
}

/// Rejects flags that the selected family does not consume, so a typo cannot
/// silently fall back to a default.
fn reject_unused(
    family: Family,
    t: &[f64],
    s: Option<f64>,
    branch: Option<i8>,
    rho: &[f64],
) -> Result<(), Failure> {
    let uses_t = matches!(
        family,
        Family::ThroughGamma | Family::HyperbolicPair | Family::EllipticCylinder
    );
    let uses_s = family == Family::Tangency;
    let uses_rho = matches!(family, Family::HyperbolicNodal | Family::EllipticNodal);
    let complain = |flag: &str| {
        Err(Failure::Usage(format!(
            "--{flag} does not apply to the {} family",
            family.name()
        )))
    };
    if !t.is_empty() && !uses_t {
        return complain("t");
    }
    if s.is_some() && !uses_s {
        return complain("s");
    }
    if branch.is_some() && !uses_s {
        return complain("branch");
    }
    if !rho.is_empty() && !uses_rho {
        return complain("rho");
    }
    Ok(())
}

fn cmd_localmodel(
    family: Family,
    t: &[f64],
    s: Option<f64>,
    branch: Option<i8>,
    rho: &[f64],
    check: bool,
) -> Result<String, Failure> {
    reject_unused(family, t, s, branch, rho)?;
    let mut reports = Vec::new();
    match family {
        Family::ThroughGamma => {
            let ts = if t.is_empty() {
                vec![-1.0, 1.0]
            } else {
                t.to_vec()
            };
            let mut linkings = Vec::new();
            for &tv in &ts {
                let fam = LocalModelFamily::through_gamma(tv);
                let window = Window::standard(&fam);
                let chain = chain_intersections(&fam, ModelChart::Gamma, &window)?;
                let sigma = boundary_sigma_intersections(&fam, ModelChart::Gamma, &window)?;
                let linking = linking_number(&fam, ModelChart::Gamma, &window)?;
                linkings.push(linking);
                reports.push(json!({
                    "param": tv,
                    "chain": count_json(&chain),
                    "sigma": count_json(&sigma),
                    "linking": linking,
                }));
            }
            if check && linkings.windows(2).any(|w| w[0] != w[1]) {
                return Err(Failure::Invariant(format!(
                    "linking number is not constant across the wall: {linkings:?}"
                )));
            }
        }
        Family::Tangency => {
            let sv = s.unwrap_or(1.0);
            let bv = branch.unwrap_or(1);
            let fam = LocalModelFamily::tangency(sv, bv)?;
            let window = Window::standard(&fam);
            let chain = chain_intersections(&fam, ModelChart::Standard, &window)?;
            let writhe = projected_writhe(&fam)?;
            reports.push(json!({
                "param": sv,
                "branch": bv,
                "chain": count_json(&chain),
                "writhe": writhe,
            }));
            if check && !framing_balance(bv, sv.abs())? {
                return Err(Failure::Invariant(format!(
                    "writhe plus chain contribution changes across the wall at |s| = {}",
                    sv.abs()
                )));
            }
        }
        Family::HyperbolicPair | Family::EllipticCylinder => {
            let default_t = if family == Family::HyperbolicPair {
                0.0
            } else {
                0.5
            };
            let ts = if t.is_empty() {
                vec![default_t]
            } else {
                t.to_vec()
            };
            for &tv in &ts {
                let fam = match family {
                    Family::HyperbolicPair => LocalModelFamily::hyperbolic_pair(tv),
                    _ => LocalModelFamily::elliptic_cylinder(tv),
                };
                let window = Window::standard(&fam);
                let chain = chain_intersections(&fam, ModelChart::Standard, &window)?;
                if check {
                    let expect = match family {
                        Family::HyperbolicPair => 0,
                        _ if tv > 0.0 => -1,
                        _ => 1,
                    };
                    if chain.total != expect {
                        return Err(Failure::Invariant(format!(
                            "chain count {} at t = {tv}, expected {expect}",
                            chain.total
                        )));
                    }
                }
                reports.push(json!({ "param": tv, "chain": count_json(&chain) }));
            }
        }
        Family::HyperbolicNodal | Family::EllipticNodal => {
            let rhos = if rho.is_empty() {
                vec![3.0]
            } else {
                rho.to_vec()
            };
            let mut sups = Vec::new();
            for &rv in &rhos {
                let (fam, smooth) = match family {
                    Family::HyperbolicNodal => (
                        LocalModelFamily::hyperbolic_nodal(rv)?,
                        LocalModelFamily::hyperbolic_pair(0.0),
                    ),
                    _ => (
                        LocalModelFamily::elliptic_nodal(rv)?,
                        LocalModelFamily::elliptic_cylinder(0.0),
                    ),
                };
                let window = Window::standard(&fam);
                let chain = chain_intersections(&fam, ModelChart::Standard, &window)?;
                let conv = convergence_check(&smooth, &fam, 1.0)?;
                let mut report = json!({
                    "param": rv,
                    "chain": count_json(&chain),
                    "convergence": { "sup_distance": conv.sup_distance },
                });
                if let Some(radius) = conv.boundary_radius {
                    report["convergence"]["boundary_radius"] = json!(radius);
                    if check {
                        let expect = std::f64::consts::SQRT_2 * (-rv).exp();
                        if (radius - expect).abs() > 1e-12 {
                            return Err(Failure::Invariant(format!(
                                "boundary radius {radius} differs from sqrt(2)*e^-rho = {expect}"
                            )));
                        }
                    }
                }
                sups.push((rv, conv.sup_distance));
                reports.push(report);
            }
            if check && family == Family::HyperbolicNodal {
                sups.sort_by(|a, b| a.0.total_cmp(&b.0));
                if sups.len() == 1 {
                    let (rv, sup) = sups[0];
                    if sup > (2.0 - 2.0 * rv).exp() {
                        return Err(Failure::Invariant(format!(
                            "sup distance {sup} exceeds the e^(2 - 2 rho) envelope at rho = {rv}"
                        )));
                    }
                } else {
                    for pair in sups.windows(2) {
                        let rate = (pair[1].1 / pair[0].1).ln() / (pair[1].0 - pair[0].0);
                        if (rate + 2.0).abs() > 0.1 {
                            return Err(Failure::Invariant(format!(
                                "sup distance decays at rate {rate:.4}, expected -2 per unit rho"
                            )));
                        }
                    }
                }
            }
        }
    }
    let out = json!({ "family": family.name(), "reports": reports });
    Ok(serde_json::to_string_pretty(&out).expect("reports always serialize"))
}

fn cmd_index(
    weights: &[f64],
    boundary: Boundary,
    numeric: bool,
    modes: Option<i64>,
    length: f64,
    grid: usize,
    as_json: bool,
) -> Result<String, Failure> {
    let [dm, dp] = weights else {
        return Err(Failure::Usage(
            "--weights takes exactly two values".to_string(),
        ));
    };
    let boundary = match boundary {
        Boundary::Cylinder => BoundaryType::Cylinder,
        Boundary::Strip => BoundaryType::Strip,
    };
    let pair = WeightPair::new(*dm, *dp, boundary).map_err(Failure::from)?;
    let index = dbar_index(&pair)?;
    let numeric_value = if numeric {
        let params = NumericParams {
            modes,
            length,
            grid,
        };
        Some(dbar_index_numeric(&pair, &params)?)
    } else {
        None
    };
    if as_json {
        let mut out = json!({ "index": index });
        if let Some(n) = numeric_value {
            out["numeric"] = json!(n);
        }
        Ok(out.to_string())
    } else {
        let mut lines = vec![format!("index = {index}")];
        if let Some(n) = numeric_value {
            lines.push(format!("numeric = {n}"));
        }
        Ok(lines.join("\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String, Failure> {
        let mut full = vec!["skein"];
        full.extend_from_slice(args);
        execute(Cli::try_parse_from(full).expect("fixture arguments parse"))
    }

    #[test]
    fn homfly_matches_the_documented_fixtures() {
        assert_eq!(run_args(&["homfly", "PD[]"]).unwrap(), "1");
        assert_eq!(
            run_args(&["homfly", "BR[1, []]"]).unwrap(),
            "a*z^-1 - a^-1*z^-1"
        );
        assert_eq!(
            run_args(&["homfly", "BR[2, [1,1,1]]"]).unwrap(),
            "a^2*z - z + 2*a^2*z^-1 - 3*z^-1 + a^-2*z^-1"
        );
    }

    #[test]
    fn zero_framing_divides_by_the_writhe_power() {
        let framed = run_args(&["homfly", "BR[2, [1,1,1]]"]).unwrap();
        let unframed = run_args(&["homfly", "BR[2, [1,1,1]]", "--zero-framed"]).unwrap();
        assert_eq!(
            unframed,
            "a^-1*z - a^-3*z + 2*a^-1*z^-1 - 3*a^-3*z^-1 + a^-5*z^-1"
        );
        assert_ne!(framed, unframed);
    }

    #[test]
    fn homfly_json_wraps_the_value() {
        let out = run_args(&["homfly", "PD[]", "--json"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], "1");
    }

    #[test]
    fn parse_failures_carry_the_parse_exit_code() {
        let err = run_args(&["homfly", "PD[X[1,2,3]]"]).unwrap_err();
        assert_eq!(err.code(), 2);
    }

    #[test]
    fn index_prints_both_values_on_request() {
        let out = run_args(&["index", "--weights", "-1", "-1", "--type", "cylinder"]).unwrap();
        assert_eq!(out, "index = 1");
        let out = run_args(&[
            "index",
            "--weights",
            "-1",
            "-1",
            "--type",
            "cylinder",
            "--numeric",
        ])
        .unwrap();
        assert_eq!(out, "index = 1\nnumeric = 1");
    }

    #[test]
    fn index_wall_weights_are_usage_errors() {
        let err = run_args(&["index", "--weights", "0", "1", "--type", "cylinder"]).unwrap_err();
        assert_eq!(err.code(), 1);
    }

    #[test]
    fn localmodel_through_gamma_reports_constant_linking() {
        let out = run_args(&[
            "localmodel",
            "through-gamma",
            "--t",
            "-1",
            "--t",
            "1",
            "--check",
        ])
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["family"], "through-gamma");
        let reports = v["reports"].as_array().unwrap();
        assert_eq!(reports.len(), 2);
        for report in reports {
            assert_eq!(report["linking"], 1);
        }
    }

    #[test]
    fn localmodel_rejects_flags_from_other_families() {
        let err = run_args(&["localmodel", "tangency", "--t", "1"]).unwrap_err();
        assert_eq!(err.code(), 1);
        let err = run_args(&["localmodel", "through-gamma", "--rho", "3"]).unwrap_err();
        assert_eq!(err.code(), 1);
    }

    #[test]
    fn localmodel_invariant_violations_exit_three() {
        let err = run_args(&["localmodel", "elliptic-cylinder", "--t", "0"]).unwrap_err();
        assert_eq!(err.code(), 3);
    }
}
