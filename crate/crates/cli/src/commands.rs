//! Parameter sets and handlers, one per subcommand.

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use powerbound::admissible::{
    admissibility_report, feasible_to_csv, lambda_feasibility_scan, power_constraints, sinclair_scan, threshold,
    threshold_consistency, FeasibilityGrid, RayClass, SinclairConfig, ThresholdKind,
};
use powerbound::l1multiplier::{diff_study_at, growth_study_at};
use powerbound::matrix::{esterle_instance, esterle_verify, power_diagnostics, ritt_constant, RittGrid};
use powerbound::seqdiag::{
    diff_bound_terms, limsup_scan, log_spaced, projection_bound_terms, ProjectionPart, SequenceKind,
};
use powerbound::series::{self, fixed_point_invert, lagrange_invert};
use powerbound::volterra::{
    build_kernel, semigroup_curve_refined, semigroup_norm_curve, symbol_limit_study, KernelKind, SymbolKind, XiGrid,
};
use powerbound::{ExactSeries, FloatSeries, FunctionSpec, NormKind, Operator};

use crate::config::{require, FamilyArgs, MatrixArgs, Params};
use crate::output::Report;
use crate::CliError;

pub fn family_spec(f: &FamilyArgs) -> Result<FunctionSpec, CliError> {
    let name = require(&f.family, "family")?;
    let n = || require(&f.n, "n");
    let s = || require(&f.s, "s");
    let a = || require(&f.a, "a");
    let spec = match name.as_str() {
        "zexp" => FunctionSpec::ZExp,
        "zpow" => FunctionSpec::ZPow { n: n()? },
        "zpowplus" => FunctionSpec::ZPowPlus { n: n()? },
        "powdiff" => FunctionSpec::PowDiff {
            n: n()?,
            m: require(&f.m, "m")?,
        },
        "expdiff" => FunctionSpec::ExpDiff { s: s()? },
        "expsin" => FunctionSpec::ExpSin { s: s()? },
        "onepow" => FunctionSpec::OnePow { n: n()? },
        "zexpm" => FunctionSpec::ZExpM { m: require(&f.m, "m")? },
        "identity" => FunctionSpec::Identity,
        "exp" => FunctionSpec::Exp { a: a()? },
        "invpow" => FunctionSpec::InvPow { n: n()? },
        "sin" => FunctionSpec::Sin,
        "oneminusexp" => FunctionSpec::OneMinusExp { a: a()? },
        other => return Err(CliError::Param(format!("unknown family `{other}`"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn norm_kind(s: &Option<String>) -> Result<NormKind, CliError> {
    match s {
        None => Ok(NormKind::default()),
        Some(s) => s.parse().map_err(|e: powerbound::Error| CliError::Param(e.to_string())),
    }
}

fn load_matrix(m: &MatrixArgs) -> Result<Operator, CliError> {
    let op = match (&m.matrix, &m.diag) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Param(format!("cannot read matrix {}: {e}", path.display())))?;
            if path.extension().is_some_and(|e| e == "json") {
                // accept a bare matrix or a volterra-kernel report holding one
                let mut v: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| CliError::Param(format!("{} is not valid JSON: {e}", path.display())))?;
                for key in ["result", "matrix"] {
                    if let Some(inner) = v.get(key) {
                        v = inner.clone();
                    }
                }
                Operator::from_json(&v.to_string())?
            } else {
                Operator::from_csv(&text)?
            }
        }
        (None, Some(d)) if !d.is_empty() => Operator::diag(d),
        _ => return Err(CliError::Param("give --matrix or --diag".into())),
    };
    Ok(op.with_norm(norm_kind(&m.norm)?))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct InvertArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Truncation order.
    #[arg(long)]
    pub order: Option<usize>,
    /// Exact rational arithmetic.
    #[serde(default)]
    #[arg(long)]
    pub exact: bool,
}

impl Params for InvertArgs {
    const DEFAULTS: &'static str = r#"{"order": 20}"#;
}

pub fn invert(p: &InvertArgs) -> Result<Report, CliError> {
    let spec = family_spec(&p.family)?;
    let order = require(&p.order, "order")?;
    let csv = if p.exact {
        let f: ExactSeries = spec.taylor(order)?;
        series::to_csv(&lagrange_invert(&f, order)?)
    } else {
        let f: FloatSeries = spec.taylor(order)?;
        series::to_csv(&lagrange_invert(&f, order)?)
    };
    Ok(Report::csv(csv))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct FixedPointArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Denominator `h`: exp (with --h-a) or invpow (with --h-n).
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub h_n: Option<u32>,
    #[arg(long)]
    pub h_a: Option<f64>,
    #[arg(long)]
    pub order: Option<usize>,
    /// Convergence tolerance of the floating iteration.
    #[arg(long)]
    pub tol: Option<f64>,
    #[serde(default)]
    #[arg(long)]
    pub exact: bool,
}

impl Params for FixedPointArgs {
    const DEFAULTS: &'static str = r#"{"order": 20, "tol": 1e-14}"#;
}

pub fn fixed_point(p: &FixedPointArgs) -> Result<Report, CliError> {
    let f = family_spec(&p.family)?;
    let h = match require(&p.h, "h")?.as_str() {
        "exp" => FunctionSpec::Exp {
            a: require(&p.h_a, "h_a")?,
        },
        "invpow" => FunctionSpec::InvPow {
            n: require(&p.h_n, "h_n")?,
        },
        other => return Err(CliError::Param(format!("unsupported h `{other}`: use exp or invpow"))),
    };
    h.validate()?;
    let order = require(&p.order, "order")?;
    let tol = require(&p.tol, "tol")?;
    let csv = if p.exact {
        series::to_csv(&fixed_point_invert::<powerbound::Rational>(&f, &h, order, tol)?)
    } else {
        series::to_csv(&fixed_point_invert::<f64>(&f, &h, order, tol)?)
    };
    Ok(Report::csv(csv))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct AdmissibleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub order: Option<usize>,
}

impl Params for AdmissibleArgs {
    const DEFAULTS: &'static str = r#"{"order": 10000}"#;
}

pub fn admissible(p: &AdmissibleArgs) -> Result<Report, CliError> {
    let r = admissibility_report(&family_spec(&p.family)?, require(&p.order, "order")?)?;
    Ok(Report::json(serde_json::to_value(r).expect("reports serialize")))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ThresholdArgs {
    /// esterle_n, esterle2, power_m, expdiff, sinclair_sin or gorin.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
}

impl Params for ThresholdArgs {}

pub fn threshold_cmd(p: &ThresholdArgs) -> Result<Report, CliError> {
    let kind = match require(&p.kind, "kind")?.as_str() {
        "esterle_n" => ThresholdKind::EsterleN { n: require(&p.n, "n")? },
        "esterle2" => ThresholdKind::Esterle2 {
            n: require(&p.n, "n")?,
            m: require(&p.m, "m")?,
        },
        "power_m" => ThresholdKind::PowerM { m: require(&p.m, "m")? },
        "expdiff" => ThresholdKind::ExpDiff { s: require(&p.s, "s")? },
        "sinclair_sin" => ThresholdKind::SinclairSin { s: require(&p.s, "s")? },
        "gorin" => ThresholdKind::Gorin { c: require(&p.c, "c")? },
        other => return Err(CliError::Param(format!("unknown threshold kind `{other}`"))),
    };
    Ok(Report::json(json!({
        "kind": kind,
        "value": threshold(kind)?,
        "consistency_residual": threshold_consistency(kind)?,
    })))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SinclairArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub theta_count: Option<usize>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_count: Option<usize>,
    #[arg(long)]
    pub margin: Option<f64>,
}

impl Params for SinclairArgs {
    const DEFAULTS: &'static str = r#"{"theta_count": 720, "t_max": 50.0, "t_count": 4096, "margin": 1e-9}"#;
}

pub fn sinclair(p: &SinclairArgs) -> Result<Report, CliError> {
    let cfg = SinclairConfig {
        theta_count: require(&p.theta_count, "theta_count")?,
        t_max: require(&p.t_max, "t_max")?,
        t_count: require(&p.t_count, "t_count")?,
        margin: require(&p.margin, "margin")?,
    };
    let scan = sinclair_scan(&family_spec(&p.family)?, &cfg)?;
    let mut r = Report::csv(scan.to_csv()).note("xi", scan.xi).note("f_xi", scan.f_xi);
    for class in [
        RayClass::Cond1,
        RayClass::Cond2,
        RayClass::BoundaryEqual,
        RayClass::Violation,
    ] {
        r = r.note(&format!("count_{class}"), scan.count(class));
    }
    Ok(r)
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GorinArgs {
    /// Constraints are `|1 - λ^{base^k}| <= b` for `k = 0..=k_max`.
    #[arg(long)]
    pub base: Option<u64>,
    #[arg(long)]
    pub k_max: Option<u32>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub radii: Option<usize>,
    #[arg(long)]
    pub angles: Option<usize>,
    /// Half-width of the annulus around the unit circle.
    #[arg(long)]
    pub eps: Option<f64>,
}

impl Params for GorinArgs {
    const DEFAULTS: &'static str = r#"{"base": 2, "k_max": 20, "b": 0.99, "radii": 513, "angles": 28672, "eps": 1e-3}"#;
}

pub fn gorin(p: &GorinArgs) -> Result<Report, CliError> {
    let grid = FeasibilityGrid {
        radii: require(&p.radii, "radii")?,
        angles: require(&p.angles, "angles")?,
        eps: require(&p.eps, "eps")?,
    };
    let cons = power_constraints(
        require(&p.base, "base")?,
        require(&p.k_max, "k_max")?,
        require(&p.b, "b")?,
    )?;
    let pts = lambda_feasibility_scan(&cons, &grid)?;
    Ok(Report::csv(feasible_to_csv(&pts))
        .note("feasible_points", pts.len())
        .note("angular_step", grid.angular_step())
        .note("radial_step", grid.radial_step()))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct EsterleArgs {
    /// Power in the hypothesis `‖T^{n+1} - T^n‖ <= n^n/(n+1)^{n+1}`.
    #[arg(long)]
    pub n: Option<u32>,
    /// Dimension of the random instance (ignored with --matrix).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Random instance scale, as a fraction of the threshold.
    #[arg(long)]
    pub fraction: Option<f64>,
    /// Matrix file holding `T = I + N`, `N` strictly upper triangular.
    #[arg(long)]
    pub matrix: Option<std::path::PathBuf>,
    #[arg(long)]
    pub norm: Option<String>,
}

impl Params for EsterleArgs {
    const DEFAULTS: &'static str = r#"{"n": 1, "dim": 6, "fraction": 0.9, "norm": "2"}"#;
}

pub fn esterle(p: &EsterleArgs, seed: u64) -> Result<Report, CliError> {
    let n = require(&p.n, "n")?;
    let kind = norm_kind(&p.norm)?;
    let t = match &p.matrix {
        Some(_) => load_matrix(&MatrixArgs {
            matrix: p.matrix.clone(),
            diag: None,
            norm: p.norm.clone(),
        })?,
        None => esterle_instance(
            require(&p.dim, "dim")?,
            n,
            seed,
            require(&p.fraction, "fraction")?,
            kind,
        )?,
    };
    let r = esterle_verify(&t, n)?;
    Ok(Report::json(json!({ "report": r, "falsified": r.falsified() })))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct PowerDiagArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub matrix: MatrixArgs,
    #[arg(long)]
    pub n_max: Option<usize>,
}

impl Params for PowerDiagArgs {
    const DEFAULTS: &'static str = r#"{"n_max": 100}"#;
}

pub fn power_diag(p: &PowerDiagArgs) -> Result<Report, CliError> {
    let d = power_diagnostics(&load_matrix(&p.matrix)?, require(&p.n_max, "n_max")?)?;
    let partial = d.norms.truncated || d.diffs.truncated;
    Ok(Report::csv(d.to_csv())
        .partial(partial)
        .note("max_norm", d.norms.running_max)
        .note("max_n_diff", d.diffs.running_max))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct RittArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub matrix: MatrixArgs,
    #[arg(long)]
    pub radii: Option<usize>,
    #[arg(long)]
    pub angles: Option<usize>,
    /// Smallest `|λ| - 1` on the grid.
    #[arg(long)]
    pub min_gap: Option<f64>,
    #[arg(long)]
    pub max_gap: Option<f64>,
}

impl Params for RittArgs {
    const DEFAULTS: &'static str = r#"{"radii": 64, "angles": 256, "min_gap": 1e-6, "max_gap": 1.0}"#;
}

pub fn ritt(p: &RittArgs) -> Result<Report, CliError> {
    let grid = RittGrid {
        radii: require(&p.radii, "radii")?,
        angles: require(&p.angles, "angles")?,
        min_gap: require(&p.min_gap, "min_gap")?,
        max_gap: require(&p.max_gap, "max_gap")?,
    };
    let r = ritt_constant(&load_matrix(&p.matrix)?, &grid)?;
    Ok(Report::json(serde_json::to_value(r).expect("reports serialize")))
}

fn symbol_kind(name: &Option<String>, alpha: Option<f64>) -> Result<SymbolKind, CliError> {
    let k = match require(name, "symbol")?.as_str() {
        "m_alpha" => SymbolKind::MAlpha {
            alpha: require(&alpha, "alpha")?,
        },
        "h_composite" => SymbolKind::HComposite,
        "real_axis_test" => SymbolKind::RealAxisTest,
        other => return Err(CliError::Param(format!("unknown symbol `{other}`"))),
    };
    k.validate()?;
    Ok(k)
}

fn kernel_kind(name: &Option<String>, alpha: Option<f64>) -> Result<KernelKind, CliError> {
    Ok(match require(name, "kernel")?.as_str() {
        "j_alpha" => KernelKind::JAlpha {
            alpha: require(&alpha, "alpha")?,
        },
        "l_alpha" => KernelKind::LAlpha {
            alpha: require(&alpha, "alpha")?,
        },
        "a_composite" => KernelKind::AComposite,
        other => return Err(CliError::Param(format!("unknown kernel `{other}`"))),
    })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct VolterraLimitArgs {
    /// m_alpha, h_composite or real_axis_test.
    #[arg(long)]
    pub symbol: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Times, comma separated and increasing.
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long)]
    pub xi_points: Option<usize>,
    /// Upper end of the ξ grid; default `min(e^{1.2 t}, 1e16)`.
    #[arg(long)]
    pub xi_max: Option<f64>,
    /// Drop the 1e16 cap on the ξ grid.
    #[serde(default)]
    #[arg(long)]
    pub uncapped: bool,
    #[arg(long)]
    pub refine_iterations: Option<usize>,
}

impl Params for VolterraLimitArgs {
    const DEFAULTS: &'static str = r#"{"t": [1.0, 10.0, 100.0], "xi_points": 4096, "refine_iterations": 60}"#;
}

pub fn volterra_limit(p: &VolterraLimitArgs) -> Result<Report, CliError> {
    let kind = symbol_kind(&p.symbol, p.alpha)?;
    let grid = XiGrid {
        points: require(&p.xi_points, "xi_points")?,
        xi_max: if p.uncapped { Some(f64::INFINITY) } else { p.xi_max },
        refine_iterations: require(&p.refine_iterations, "refine_iterations")?,
    };
    let study = symbol_limit_study(kind, &require(&p.t, "t")?, &grid)?;
    let boundary = study.rows.iter().any(|r| r.boundary);
    Ok(Report::csv(study.to_csv())
        .note("limit_constant", kind.limit_constant())
        .note("boundary_hit", boundary))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct KernelArgs {
    /// j_alpha, l_alpha or a_composite.
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
}

impl Params for KernelArgs {
    const DEFAULTS: &'static str = r#"{"grid": 64}"#;
}

pub fn volterra_kernel(p: &KernelArgs) -> Result<Report, CliError> {
    let k = build_kernel(kernel_kind(&p.kernel, p.alpha)?, require(&p.grid, "grid")?)?;
    let matrix: serde_json::Value = serde_json::from_str(&k.matrix.to_json()).expect("matrix JSON is valid");
    Ok(Report::json(json!({
        "kind": k.kind,
        "grid_size": k.grid_size,
        "h": k.h,
        "nodes": k.nodes(),
        "matrix": matrix,
    })))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SemigroupArgs {
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long)]
    pub norm: Option<String>,
    /// Also report the change from the half-size mesh.
    #[serde(default)]
    #[arg(long)]
    pub refine: bool,
}

impl Params for SemigroupArgs {
    const DEFAULTS: &'static str =
        r#"{"kernel": "a_composite", "grid": 512, "t": [50.0, 100.0, 200.0, 500.0], "norm": "2"}"#;
}

pub fn semigroup(p: &SemigroupArgs) -> Result<Report, CliError> {
    let kind = kernel_kind(&p.kernel, p.alpha)?;
    let grid = require(&p.grid, "grid")?;
    let ts = require(&p.t, "t")?;
    let norm = norm_kind(&p.norm)?;
    if p.refine {
        let (curve, deltas) = semigroup_curve_refined(kind, grid, &ts, norm)?;
        let mut csv = String::from("t,value,delta_from_half_grid\n");
        for ((t, v), d) in curve.points.iter().zip(&deltas) {
            csv.push_str(&format!("{t:?},{v:?},{d:?}\n"));
        }
        return Ok(Report::csv(csv).note("max_value", curve.running_max));
    }
    let curve = semigroup_norm_curve(&build_kernel(kind, grid)?.matrix, &ts, norm)?;
    Ok(Report::csv(curve.to_csv("t", "value")).note("max_value", curve.running_max))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GrowthArgs {
    /// Values of n, comma separated and increasing.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    /// Absolute tolerance of each norm.
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Params for GrowthArgs {
    const DEFAULTS: &'static str = r#"{"n": [4, 16, 64, 256, 1024], "tol": 1e-8}"#;
}

/// Same shape as [`GrowthArgs`], different defaults.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct DiffArgs {
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    /// Tolerance of `n ‖D(n)‖_1`.
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Params for DiffArgs {
    const DEFAULTS: &'static str = r#"{"n": [64, 128, 256, 512, 1024], "tol": 1e-8}"#;
}

pub fn l1_growth(p: &GrowthArgs) -> Result<Report, CliError> {
    let g = growth_study_at(&require(&p.n, "n")?, require(&p.tol, "tol")?)?;
    let spread = if g.slopes.len() >= 2 {
        Some(g.slope_spread())
    } else {
        None
    };
    Ok(Report::csv(g.to_csv())
        .note("fit_a", g.fit_a)
        .note("fit_b", g.fit_b)
        .note("slope_spread", spread))
}

pub fn l1_diff(p: &DiffArgs) -> Result<Report, CliError> {
    let s = diff_study_at(&require(&p.n, "n")?, require(&p.tol, "tol")?)?;
    Ok(Report::csv(s.to_csv("n", "n_times_l1_norm")).note("max", s.running_max))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct DiffBoundArgs {
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Number of log-spaced sample points.
    #[arg(long)]
    pub count: Option<usize>,
    /// Emit every term `(n, k, term)` instead of the sums.
    #[serde(default)]
    #[arg(long)]
    pub terms: bool,
}

impl Params for DiffBoundArgs {
    const DEFAULTS: &'static str = r#"{"n_min": 10000, "n_max": 100000, "count": 512}"#;
}

pub fn seq_diff(p: &DiffBoundArgs) -> Result<Report, CliError> {
    let (lo, hi) = (require(&p.n_min, "n_min")?, require(&p.n_max, "n_max")?);
    if lo < 1 || hi < lo {
        return Err(CliError::Param("need 1 <= n_min <= n_max".into()));
    }
    let ns = log_spaced(lo, hi, require(&p.count, "count")?);
    if p.terms {
        let mut csv = String::from("n,k,term\n");
        for &n in &ns {
            for (k, t) in diff_bound_terms(n)? {
                csv.push_str(&format!("{n},{k},{t:?}\n"));
            }
        }
        return Ok(Report::csv(csv));
    }
    let s = limsup_scan(SequenceKind::DiffBound, &ns)?;
    Ok(Report::csv(s.to_csv("n", "diff_bound"))
        .note("running_max", s.running_max)
        .note("tail_max", s.tail_max))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ProjBoundArgs {
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Emit every term `(n, k, part, term)` instead of the sums.
    #[serde(default)]
    #[arg(long)]
    pub terms: bool,
}

impl Params for ProjBoundArgs {
    const DEFAULTS: &'static str = r#"{"n_max": 12}"#;
}

pub fn seq_proj(p: &ProjBoundArgs) -> Result<Report, CliError> {
    let n_max = require(&p.n_max, "n_max")?;
    let ns: Vec<u64> = (1..=n_max).collect();
    if p.terms {
        let mut csv = String::from("n,k,part,term\n");
        for &n in &ns {
            for (k, part, t) in projection_bound_terms(n)? {
                let part = match part {
                    ProjectionPart::Head => "head",
                    ProjectionPart::Tail => "tail",
                };
                csv.push_str(&format!("{n},{k},{part},{t:?}\n"));
            }
        }
        return Ok(Report::csv(csv));
    }
    let s = limsup_scan(SequenceKind::ProjectionBound, &ns)?;
    Ok(Report::csv(s.to_csv("n", "projection_bound")).note("running_max", s.running_max))
}
