//! Named regression suites with golden values.

use anyhow::bail;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use trl_core::bounds::ExactRoot;
use trl_core::ellipsoids::{bm_distance_euclidean, contact_points, ellipsoid_decomposition, john, loewner, Side};
use trl_core::operators::nuclear_norm;
use trl_core::radius::{ntp_gap, rho_report, tau_infty_bounds, tau_k, tau_k_with, two_point_construction, TauMethod};
use trl_core::scalar::{rat, rat_int, Rat};
use trl_core::{Error, LinearOperator, NormedSpace};

use crate::commands::{matches_root, projective_row, tau_row, Ctx};
use crate::report::{Report, Row};

pub const SUITES: &[&str] = &["hadamard", "triangle", "frobenius", "ellipsoids", "closed-forms", "ntp-gaps", "entangle"];

pub fn resolve(name: &str) -> Option<&'static str> {
    SUITES.iter().find(|s| **s == name).copied()
}

pub fn run(name: &str, ctx: &Ctx) -> anyhow::Result<Report> {
    if name == "all" {
        let mut all = Report::new("reproduce all", &[], ctx.seed());
        for suite in SUITES {
            let rep = run(suite, ctx)?;
            for mut row in rep.results {
                row.name = format!("{suite}/{}", row.name);
                all.push(row);
            }
            all.detail(*suite, rep.details);
        }
        return Ok(all);
    }
    let Some(suite) = resolve(name) else {
        bail!(Error::InvalidInput(format!("unknown suite `{name}`")));
    };
    let mut rep = Report::new(format!("reproduce {suite}"), &[suite.as_bytes()], ctx.seed());
    match suite {
        "hadamard" => hadamard(ctx, &mut rep)?,
        "triangle" => triangle(ctx, &mut rep)?,
        "frobenius" => frobenius(ctx, &mut rep)?,
        "ellipsoids" => ellipsoids(&mut rep)?,
        "closed-forms" => closed_forms(ctx, &mut rep)?,
        "ntp-gaps" => ntp_gaps(ctx, &mut rep)?,
        "entangle" => entangle(ctx, &mut rep)?,
        _ => unreachable!(),
    }
    Ok(rep)
}

fn root(radicand: Rat, index: u32) -> ExactRoot {
    ExactRoot::new(radicand, index)
}

fn golden(row: Row, g: &ExactRoot, exact: Option<&ExactRoot>) -> Row {
    let pass = row.certified && row.value.is_some_and(|v| matches_root(v, exact, g));
    row.check(g.to_string(), pass)
}

pub fn hadamard_op() -> LinearOperator {
    let h = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(-1, 2)]];
    LinearOperator::new(h, NormedSpace::linf(2), NormedSpace::l1(2)).expect("square matrix")
}

fn hadamard(ctx: &Ctx, rep: &mut Report) -> anyhow::Result<()> {
    let h = hadamard_op();
    let r = tau_infty_bounds(&h, 4, &ctx.settings)?;
    let sqrt2 = root(rat_int(2), 2);
    for tau in &r.taus {
        let row = tau_row(tau);
        let row = match tau.k {
            1 => golden(row, &root(rat_int(1), 1), tau.exact.as_ref()),
            2 => golden(row, &sqrt2, tau.exact.as_ref()),
            3 => {
                let pass = tau.certified && tau.value < 2f64.sqrt() - 1e-6;
                row.check("< sqrt(2) - 1e-6", pass)
            }
            _ => golden(row, &root(rat_int(4), 4), tau.exact.as_ref()),
        };
        rep.push(row);
        rep.detail(format!("tau_{}", tau.k), tau);
    }
    let nuc = nuclear_norm(&h, &ctx.settings)?;
    let exact = nuc.result.exact.clone().map(|e| root(e, 1));
    rep.push(golden(projective_row("nuclear", &nuc.result), &root(rat_int(2), 1), exact.as_ref()));
    rep.detail("nuclear", &nuc);

    let i = &r.interval;
    let pass = i.certified
        && matches_root(i.lower.value, i.lower.exact.as_ref(), &sqrt2)
        && matches_root(i.upper.value, i.upper.exact.as_ref(), &sqrt2);
    rep.push(Row::interval("tau_infty", i).check("[sqrt(2), sqrt(2)]", pass));
    rep.detail("factorizations", &r.factorizations);
    Ok(())
}

pub fn triangle_ops() -> [LinearOperator; 3] {
    let l1 = NormedSpace::l1(2);
    let s = vec![vec![rat_int(1), rat(1, 3)], vec![rat(1, 3), rat_int(1)]];
    let t = vec![vec![rat(1, 2), rat_int(0)], vec![rat_int(0), rat_int(1)]];
    let s = LinearOperator::new(s, l1.clone(), l1.clone()).expect("2x2");
    let t = LinearOperator::new(t, l1.clone(), l1).expect("2x2");
    let st = s.add(&t).expect("same shape");
    [s, t, st]
}

fn triangle(ctx: &Ctx, rep: &mut Report) -> anyhow::Result<()> {
    let ops = triangle_ops();
    let names = ["S", "T", "S+T"];
    let goldens = [root(rat_int(2), 2), root(rat(9, 8), 2), root(rat(155, 24), 2)];
    let mut values = Vec::new();
    let mut certified = true;
    for ((op, name), g) in ops.iter().zip(names).zip(&goldens) {
        let r = tau_k_with(op, 2, &ctx.settings, TauMethod::VertexEnumeration)?;
        let mut row = tau_row(&r);
        row.name = format!("tau_2({name})");
        row.witness = Some(format!("details.{name}"));
        rep.push(golden(row, g, r.exact.as_ref()));
        rep.detail(name, &r);
        values.push(r.value);
        certified &= r.certified;
    }
    let excess = values[2] - values[0] - values[1];
    rep.push(Row::value("tau_2(S+T) - tau_2(S) - tau_2(T)", excess, certified).check("> 0", certified && excess > 1e-9));
    Ok(())
}

fn frobenius_norm(t: &LinearOperator) -> f64 {
    t.matrix_f64().iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Seeded Gaussian operator on `ℓ₂ⁿ`.
pub fn random_euclidean_op(n: usize, seed: u64, stream: u64) -> LinearOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let m: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
    LinearOperator::from_f64(&m, NormedSpace::l2(n), NormedSpace::l2(n)).expect("finite entries")
}

fn frobenius(ctx: &Ctx, rep: &mut Report) -> anyhow::Result<()> {
    for n in [2usize, 3] {
        let mut worst = 0.0f64;
        let mut devs = Vec::new();
        for i in 0..20u64 {
            let t = random_euclidean_op(n, ctx.seed(), 100 * n as u64 + i);
            let r = tau_k(&t, 2, &ctx.settings)?;
            let d = (r.value - frobenius_norm(&t)).abs();
            worst = worst.max(d);
            devs.push(serde_json::json!({ "tau_2": r.value, "frobenius": frobenius_norm(&t), "path": r.path }));
        }
        rep.push(Row::value(format!("max |tau_2 - frobenius| l_2^{n}"), worst, false).check("<= 1e-4", worst <= 1e-4));
        rep.detail(format!("random_l2_{n}"), devs);
    }
    let diags: [Vec<Rat>; 2] = [vec![rat(3, 2), rat(-1, 2)], vec![rat_int(1), rat_int(2), rat(-3, 4)]];
    for d in diags {
        let n = d.len();
        let m = (0..n)
            .map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { rat_int(0) }).collect())
            .collect();
        let t = LinearOperator::new(m, NormedSpace::l2(n), NormedSpace::l2(n))?;
        let r = tau_k(&t, 2, &ctx.settings)?;
        let dev = (r.value - frobenius_norm(&t)).abs();
        rep.push(Row::value(format!("|tau_2 - frobenius| diagonal l_2^{n}"), dev, false).check("<= 1e-9", dev <= 1e-9));
    }
    Ok(())
}

fn lp_grid() -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            out.push((n, p));
        }
    }
    out
}

fn p_name(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

fn cube(n: usize) -> NormedSpace {
    // Half the sign vectors; the ball is symmetric.
    let verts = (0..1usize << (n - 1))
        .map(|m| (0..n).map(|i| rat_int(if i > 0 && m >> (i - 1) & 1 == 1 { -1 } else { 1 })).collect())
        .collect();
    NormedSpace::poly_v(n, verts).expect("cube")
}

fn cross(n: usize) -> NormedSpace {
    let verts = (0..n).map(|i| (0..n).map(|j| rat_int((i == j) as i64)).collect()).collect();
    NormedSpace::poly_v(n, verts).expect("cross-polytope")
}

fn max_entry_error(m: &[Vec<f64>], scale: f64) -> f64 {
    let mut worst = 0.0f64;
    for (i, r) in m.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            let want = if i == j { scale } else { 0.0 };
            worst = worst.max((v - want).abs());
        }
    }
    worst
}

fn ellipsoids(rep: &mut Report) -> anyhow::Result<()> {
    // {x : xᵀMx <= 1}: the unit disc has M = I, the √2 disc M = I/2.
    for (label, x) in [("l_inf^2", NormedSpace::linf(2)), ("square polytope", cube(2))] {
        let j = max_entry_error(&john(&x)?.rows(), 1.0);
        rep.push(Row::value(format!("john({label}) entry error"), j, true).check("<= 1e-6", j <= 1e-6));
        let l = max_entry_error(&loewner(&x)?.rows(), 0.5);
        rep.push(Row::value(format!("loewner({label}) entry error"), l, true).check("<= 1e-6", l <= 1e-6));
    }
    for (n, p) in lp_grid() {
        let want = (n as f64).powf((0.5 - 1.0 / p).abs());
        let mut spaces = vec![(format!("l_{}^{n}", p_name(p)), NormedSpace::lp(n, p)?)];
        if p == 1.0 {
            spaces.push((format!("cross-polytope^{n}"), cross(n)));
        } else if p.is_infinite() {
            spaces.push((format!("cube^{n}"), cube(n)));
        }
        for (label, x) in spaces {
            let d = bm_distance_euclidean(&x)?;
            let err = (d.interval.lower.value - want).abs().max((d.interval.upper.value - want).abs());
            rep.push(
                Row::interval(format!("d({label}, l_2^{n})"), &d.interval)
                    .check(format!("{want:.10}"), d.interval.certified && err <= 1e-6),
            );
            for (side, e) in [(Side::John, john(&x)?), (Side::Loewner, loewner(&x)?)] {
                let contacts = contact_points(&x, &e, side)?;
                let dec = ellipsoid_decomposition(&contacts, &e)?;
                let sum = dec.weight_sum();
                let name = format!("{} weights {label}", if side == Side::John { "john" } else { "loewner" });
                rep.push(Row::value(name, sum, dec.residual <= 1e-8).check(format!("{n}"), (sum - n as f64).abs() <= 1e-8));
            }
        }
    }
    Ok(())
}

/// `1 - |1/2 - 1/p|` as `(num, den)` for the grid exponents.
fn rho_exponent(p: f64) -> (usize, u32) {
    match p {
        1.0 => (1, 2),
        2.0 => (1, 1),
        4.0 => (3, 4),
        _ => (1, 2),
    }
}

fn closed_forms(ctx: &Ctx, rep: &mut Report) -> anyhow::Result<()> {
    let mut check = |label: String, x: NormedSpace, n: usize, (a, b): (usize, u32)| -> anyhow::Result<()> {
        let g = root(num_traits::pow(rat_int(n as i64), a), b);
        let r = rho_report(&x, ctx.kmax, &ctx.settings)?;
        let i = &r.interval;
        let pass = i.certified
            && matches_root(i.lower.value, i.lower.exact.as_ref(), &g)
            && matches_root(i.upper.value, i.upper.exact.as_ref(), &g);
        rep.push(Row::interval(format!("rho({label})"), i).check(g.to_string(), pass));
        Ok(())
    };
    for (n, p) in lp_grid() {
        check(format!("l_{}^{n}", p_name(p)), NormedSpace::lp(n, p)?, n, rho_exponent(p))?;
    }
    for n in 1..=4 {
        check(format!("euclidean^{n}"), NormedSpace::ellipsoid(identity(n))?, n, (1, 1))?;
    }
    for (n, p) in lp_grid() {
        let (a, b) = rho_exponent(p);
        check(format!("S_{}^{n}", p_name(p)), NormedSpace::schatten(n, p)?, n, (a + b as usize, b))?;
    }
    // The polyhedral path must agree with the closed form on the square.
    check("cross-polytope^2".into(), cross(2), 2, (1, 2))?;
    Ok(())
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect()
}

fn ntp_gaps(ctx: &Ctx, rep: &mut Report) -> anyhow::Result<()> {
    let sqrt2 = root(rat_int(2), 2);
    let h = ntp_gap(&hadamard_op(), ctx.kmax, &ctx.settings)?;
    let row = Row::bound("H tau_upper", &h.tau_upper);
    let pass = h.gap_certified && matches_root(h.tau_upper.value, h.tau_upper.exact.as_ref(), &sqrt2);
    rep.push(row.check("sqrt(2) < 2", pass));
    rep.push(Row::value("H nuclear", h.nuclear_lower, true).check("2", (h.nuclear_lower - 2.0).abs() <= 1e-12));
    rep.detail("hadamard", &h);

    let codomains = [NormedSpace::linf(2), NormedSpace::l1(2), NormedSpace::l1(3), NormedSpace::linf(3), NormedSpace::lp(2, 4.0)?];
    for (i, y) in codomains.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed());
        rng.set_stream(1000 + i as u64);
        let n = 2 + i % 2;
        let m: Vec<Vec<f64>> = (0..y.dim()).map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
        let t = LinearOperator::from_f64(&m, NormedSpace::l2(n), y)?;
        let r = ntp_gap(&t, ctx.kmax, &ctx.settings)?;
        let nuc = 0.5 * (r.nuclear_lower + r.nuclear_upper);
        let dev = (r.interval.lower.value - nuc).abs().max((r.interval.upper.value - nuc).abs());
        let row = Row::interval(format!("euclidean domain #{i}"), &r.interval);
        rep.push(row.check("collapse to nuclear within 1e-6", r.euclidean && dev <= 1e-6));
        rep.detail(format!("euclidean_{i}"), &r);
    }

    let x = vec![rat_int(1), rat_int(0)];
    let y = vec![rat_int(0), rat_int(1)];
    let c = two_point_construction(&NormedSpace::linf(2), &x, &y, &ctx.settings)?;
    let b = &c.factorization.bound;
    let pass = c.gap_certified && matches_root(b.value, b.exact.as_ref(), &sqrt2);
    rep.push(Row::bound("l_inf^2 construction tau_upper", b).check("sqrt(2) < 2", pass));
    rep.detail("construction", &c);
    Ok(())
}

fn entangle(ctx: &Ctx, rep: &mut Report) -> anyhow::Result<()> {
    for k in 2..=4usize {
        let w = trl_core::tensor_norms::entangled_witness(2, k, 10_000, ctx.seed())?;
        let cap = 2f64.powf(1.0 - 1.0 / k as f64);
        let pass = w.ratio_bound >= 2f64.sqrt() - 1e-8 && w.ratio_bound <= cap + 1e-8;
        let mut row = Row::value(format!("rho_{k}(l_2^2) lower"), w.ratio_bound, true).with_source(w.source.clone());
        row.lower = Some(w.ratio_bound);
        rep.push(row.check(format!("[sqrt(2), {cap:.8}]"), pass));
        rep.detail(format!("k{k}"), &w);
    }
    Ok(())
}
