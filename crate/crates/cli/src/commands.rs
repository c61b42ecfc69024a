//! One function per subcommand. Each returns a [`Report`]; printing and exit
//! codes are left to `main`.

use std::path::Path;

use anyhow::{bail, Context as _};
use serde::de::DeserializeOwned;
use trl_core::bounds::ExactRoot;
use trl_core::ellipsoids::{bm_distance_euclidean, contact_points, ellipsoid_decomposition, john, loewner, Side};
use trl_core::operators::{nuclear_norm, operator_norm};
use trl_core::radius::{
    ntp_gap, rho_report, search_construction, tau_infty_bounds, tau_k_with, TauMethod, TauResult,
};
use trl_core::scalar::format_rat;
use trl_core::tensor_norms::{entangled_witness, injective_norm, projective_norm, InjectiveResult, ProjectiveResult, Tensor, TensorSpec};
use trl_core::{Error, LinearOperator, NormedSpace, Settings};

use crate::report::{Report, Row};

/// Shared options from the global flags.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub settings: Settings,
    pub kmax: usize,
}

impl Ctx {
    pub fn new(settings: Settings, kmax: usize) -> Ctx {
        Ctx { settings, kmax }
    }

    pub fn seed(&self) -> u64 {
        self.settings.seed
    }
}

impl Default for Ctx {
    fn default() -> Ctx {
        Ctx::new(Settings::default(), 4)
    }
}

/// Raw input bytes: inline JSON when the argument starts with `{`,
/// otherwise a file path.
pub fn read_input(arg: &str) -> anyhow::Result<Vec<u8>> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.as_bytes().to_vec());
    }
    std::fs::read(Path::new(arg)).with_context(|| format!("reading {arg}"))
}

pub fn parse<T: DeserializeOwned>(bytes: &[u8]) -> anyhow::Result<T> {
    Ok(serde_json::from_slice(bytes)?)
}

fn load_tensor(bytes: &[u8]) -> anyhow::Result<Tensor> {
    let spec: TensorSpec = parse(bytes)?;
    Ok(Tensor::try_from(spec)?)
}

pub fn exact_str(e: Option<&trl_core::Rat>) -> Option<String> {
    e.map(format_rat)
}

pub fn injective_row(name: &str, r: &InjectiveResult) -> Row {
    let mut row = Row::value(name, r.value, r.certified)
        .with_exact_str(exact_str(r.exact.as_ref()))
        .with_source(format!("{:?}", r.method).to_lowercase());
    if let Some(u) = r.upper {
        row.lower = Some(r.value);
        row.upper = Some(u);
    }
    row
}

pub fn projective_row(name: &str, r: &ProjectiveResult) -> Row {
    let mut row = Row::value(name, r.value, r.certified)
        .with_exact_str(exact_str(r.exact.as_ref()))
        .with_source(format!("{:?}", r.method).to_lowercase());
    row.lower = Some(r.lower);
    row.upper = Some(r.upper);
    row
}

pub fn tau_row(r: &TauResult) -> Row {
    let mut row = Row::value(format!("tau_{}", r.k), r.value, r.certified)
        .with_exact(r.exact.as_ref())
        .with_source(serde_json::to_value(r.path).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
        .with_witness(format!("details.tau_{}", r.k));
    if !r.certified && r.lower_bound {
        row.lower = Some(r.value);
    }
    row
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Injective,
    Projective,
    Hs,
    Operator,
    Nuclear,
}

pub fn cmd_norm(ctx: &Ctx, command: &str, kind: NormKind, tensor: Option<&str>, op: Option<&str>) -> anyhow::Result<Report> {
    let s = &ctx.settings;
    match (kind, tensor, op) {
        (NormKind::Operator | NormKind::Nuclear, _, Some(arg)) => {
            let bytes = read_input(arg)?;
            let t: LinearOperator = parse(&bytes)?;
            let mut rep = Report::new(command, &[&bytes], ctx.seed());
            if kind == NormKind::Operator {
                let r = operator_norm(&t, s)?;
                rep.push(injective_row("operator", &r).with_witness("details.operator"));
                rep.detail("operator", &r);
            } else {
                let r = nuclear_norm(&t, s)?;
                rep.push(projective_row("nuclear", &r.result).with_witness("details.nuclear"));
                rep.detail("nuclear", &r);
            }
            Ok(rep)
        }
        (NormKind::Operator | NormKind::Nuclear, _, None) => bail!(Error::InvalidInput("this norm needs --op".into())),
        (_, Some(arg), None) => {
            let bytes = read_input(arg)?;
            let z = load_tensor(&bytes)?;
            let mut rep = Report::new(command, &[&bytes], ctx.seed());
            match kind {
                NormKind::Injective => {
                    let r = injective_norm(&z, s)?;
                    rep.push(injective_row("injective", &r).with_witness("details.injective"));
                    rep.detail("injective", &r);
                }
                NormKind::Projective => {
                    let r = projective_norm(&z, s)?;
                    rep.push(projective_row("projective", &r).with_witness("details.projective"));
                    rep.detail("projective", &r);
                }
                _ => rep.push(Row::value("hs", trl_core::tensor_norms::hs_norm(&z), true)),
            }
            Ok(rep)
        }
        _ => bail!(Error::InvalidInput("pass exactly one of --tensor and --op".into())),
    }
}

pub fn parse_tau_method(s: &str) -> anyhow::Result<TauMethod> {
    Ok(match s {
        "auto" => TauMethod::Auto,
        "parallelotope" => TauMethod::Parallelotope,
        "vertex" | "vertex-enumeration" => TauMethod::VertexEnumeration,
        "heuristic" => TauMethod::Heuristic,
        other => bail!(Error::InvalidInput(format!("unknown tau method `{other}`"))),
    })
}

pub fn cmd_tau(ctx: &Ctx, command: &str, op: &str, k: Option<usize>, method: TauMethod) -> anyhow::Result<Report> {
    let bytes = read_input(op)?;
    let t: LinearOperator = parse(&bytes)?;
    let mut rep = Report::new(command, &[&bytes], ctx.seed());
    match k {
        Some(k) => {
            let r = tau_k_with(&t, k, &ctx.settings, method)?;
            rep.push(tau_row(&r));
            rep.detail(format!("tau_{k}"), &r);
        }
        None => {
            let r = tau_infty_bounds(&t, ctx.kmax, &ctx.settings)?;
            for tau in &r.taus {
                rep.push(tau_row(tau));
                rep.detail(format!("tau_{}", tau.k), tau);
            }
            rep.push(Row::interval("tau_infty", &r.interval).with_witness("details.factorizations"));
            let mut nuc = Row::value("nuclear", r.nuclear_lower, true);
            nuc.lower = Some(r.nuclear_lower);
            nuc.upper = Some(r.nuclear_upper);
            rep.push(nuc);
            rep.detail("factorizations", &r.factorizations);
        }
    }
    Ok(rep)
}

pub fn cmd_rho(ctx: &Ctx, command: &str, space: &str) -> anyhow::Result<Report> {
    let bytes = read_input(space)?;
    let x: NormedSpace = parse(&bytes)?;
    let mut rep = Report::new(command, &[&bytes], ctx.seed());
    let r = rho_report(&x, ctx.kmax, &ctx.settings)?;
    for rk in &r.rho_k {
        let mut row = tau_row(rk);
        row.name = format!("rho_{}", rk.k);
        row.witness = Some(format!("details.rho_{}", rk.k));
        rep.push(row);
        rep.detail(format!("rho_{}", rk.k), rk);
    }
    rep.push(Row::interval("rho_infty", &r.interval));
    Ok(rep)
}

pub fn cmd_ntp(ctx: &Ctx, command: &str, op: &str) -> anyhow::Result<Report> {
    let bytes = read_input(op)?;
    let t: LinearOperator = parse(&bytes)?;
    let mut rep = Report::new(command, &[&bytes], ctx.seed());
    match ntp_gap(&t, ctx.kmax, &ctx.settings) {
        Ok(r) => {
            rep.push(Row::interval("tau_infty", &r.interval));
            let mut nuc = Row::value("nuclear", r.nuclear_lower, true);
            nuc.lower = Some(r.nuclear_lower);
            nuc.upper = Some(r.nuclear_upper);
            rep.push(nuc);
            let (name, value) = if r.euclidean {
                ("euclidean_side", r.interval.width())
            } else {
                ("gap", r.nuclear_lower - r.tau_upper.value)
            };
            rep.push(Row::value(name, value, r.interval.certified && (r.euclidean || r.gap_certified)));
            rep.detail("ntp", &r);
        }
        Err(Error::NotCertifiable { nuclear, tau_upper }) => {
            // No certificate is a legitimate answer, not a failure.
            rep.push(Row::value("tau_upper", tau_upper, true));
            rep.push(Row::value("nuclear", nuclear, true));
            rep.push(Row::value("gap", nuclear - tau_upper, false).with_source("not certified"));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(rep)
}

pub fn cmd_entangle(ctx: &Ctx, command: &str, n: usize, k: usize, trials: usize) -> anyhow::Result<Report> {
    let key = format!("n={n},k={k},trials={trials}");
    let mut rep = Report::new(command, &[key.as_bytes()], ctx.seed());
    let w = entangled_witness(n, k, trials, ctx.seed())?;
    let mut row = Row::value(format!("rho_{k} lower"), w.ratio_bound, true)
        .with_source(w.source.clone())
        .with_witness("details.witness");
    row.lower = Some(w.ratio_bound);
    rep.push(row);
    rep.push(Row::value("hs", w.hs, true));
    let mut eps = Row::value("injective", w.eps_lower, false);
    eps.lower = Some(w.eps_lower);
    eps.upper = Some(w.eps_upper);
    rep.push(eps);
    rep.detail("witness", &w);
    Ok(rep)
}

pub fn cmd_construct(ctx: &Ctx, command: &str, space: &str, trials: usize) -> anyhow::Result<Report> {
    let bytes = read_input(space)?;
    let x: NormedSpace = parse(&bytes)?;
    let mut rep = Report::new(command, &[&bytes], ctx.seed());
    match search_construction(&x, trials, ctx.seed(), &ctx.settings)? {
        Some(c) => {
            rep.push(Row::bound("tau_upper", &c.factorization.bound).with_witness("details.construction"));
            rep.push(Row::value("nuclear", c.nuclear, true));
            rep.push(Row::value("gap", c.nuclear - c.factorization.bound.value, c.gap_certified));
            rep.detail("construction", &c);
        }
        None => rep.push(Row::value("pairs_found", 0.0, false).with_source("no pair with |x+y|^2+|x-y|^2 < 4")),
    }
    Ok(rep)
}

pub fn parse_side(s: &str) -> anyhow::Result<Vec<Side>> {
    Ok(match s {
        "john" => vec![Side::John],
        "loewner" => vec![Side::Loewner],
        "both" => vec![Side::John, Side::Loewner],
        other => bail!(Error::InvalidInput(format!("unknown side `{other}`"))),
    })
}

pub fn cmd_ellipsoid(ctx: &Ctx, command: &str, space: &str, sides: &[Side]) -> anyhow::Result<Report> {
    let bytes = read_input(space)?;
    let x: NormedSpace = parse(&bytes)?;
    let mut rep = Report::new(command, &[&bytes], ctx.seed());
    for &side in sides {
        let name = match side {
            Side::John => "john",
            Side::Loewner => "loewner",
        };
        let e = match side {
            Side::John => john(&x)?,
            Side::Loewner => loewner(&x)?,
        };
        let contacts = contact_points(&x, &e, side)?;
        let dec = ellipsoid_decomposition(&contacts, &e)?;
        rep.push(Row::value(format!("{name} log_det"), e.log_det(), true).with_witness(format!("details.{name}")));
        rep.push(Row::value(format!("{name} contacts"), contacts.len() as f64, true));
        rep.push(Row::value(format!("{name} weight_sum"), dec.weight_sum(), dec.residual <= 1e-8));
        rep.detail(
            name,
            serde_json::json!({ "matrix": e.rows(), "contacts": contacts, "weights": dec.weights, "residual": dec.residual }),
        );
    }
    Ok(rep)
}

pub fn cmd_bm(ctx: &Ctx, command: &str, space: &str) -> anyhow::Result<Report> {
    let bytes = read_input(space)?;
    let x: NormedSpace = parse(&bytes)?;
    let mut rep = Report::new(command, &[&bytes], ctx.seed());
    let d = bm_distance_euclidean(&x)?;
    rep.push(Row::interval("distance", &d.interval));
    rep.detail("distance", &d);
    Ok(rep)
}

/// Compare against `radicand^(1/index)`: exactly when an exact root is
/// known, otherwise through `value^index` within `1e-12`.
pub fn matches_root(value: f64, exact: Option<&ExactRoot>, golden: &ExactRoot) -> bool {
    if let Some(e) = exact {
        // a^(1/i) = b^(1/j) iff a^j = b^i for nonnegative radicands.
        let lhs = num_traits::pow(e.radicand.clone(), golden.index as usize);
        let rhs = num_traits::pow(golden.radicand.clone(), e.index as usize);
        return lhs == rhs;
    }
    let target = trl_core::scalar::rat_to_f64(&golden.radicand);
    (value.powi(golden.index as i32) - target).abs() <= 1e-12 * target.abs().max(1.0)
}
