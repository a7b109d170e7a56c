//! The built-in acceptance suite: twelve seeded, exact checks of the solver, the
//! prime integrals, the scalar closed forms and the Galois bounds. Every case draws
//! from `Sampler::stream(seed, &[criterion, config, case])`, so reports depend on
//! the seed only.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::equations::{
    solve_scalar_closed_form, solve_scalar_exp, EquationKind, EquationSpec, EquationType,
    QuadricVariant,
};
use crate::error::Result;
use crate::galois::{
    check_right_compatibility, enumerate_monomial_constants, order_two_counterexample,
    scalar_galois_bound, torsion_units, GaloisBound, DEFAULT_CAP,
};
use crate::json;
use crate::padic_matrix::PMatrix;
use crate::padic_ring::{make_context, RingContext};
use crate::sampling::Sampler;

pub const PRIMES: [u64; 4] = [3, 5, 7, 13];
pub const PRECISION: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("suite report serializes")
    }
}

fn ring(p: u64, m: usize) -> Arc<RingContext> {
    make_context(p, m, PRECISION, None).expect("suite parameters are valid")
}

/// (kind, n) for n in 1..=max_n, dropping shapes the form cannot take.
fn shapes(max_n: usize) -> Vec<(EquationKind, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push((EquationKind::Gl, n));
        out.push((EquationKind::Sl, n));
        for v in QuadricVariant::ALL {
            if v.fits(n) {
                out.push((EquationKind::So(v), n));
            }
        }
    }
    out
}

/// Every valid (kind, n, p, m) with n <= max_n.
fn configs(max_n: usize, ms: &[usize]) -> Vec<EquationType> {
    let mut out = Vec::new();
    for &p in &PRIMES {
        for &m in ms {
            let r = ring(p, m);
            for (kind, n) in shapes(max_n) {
                if let Ok(t) = EquationType::new(&r, kind, n) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// alpha in the delta-Lie algebra of the type.
fn sample_alpha(s: &mut Sampler, t: &EquationType, subring: bool) -> PMatrix {
    let (r, n) = (t.ring(), t.n());
    match t.kind() {
        EquationKind::Gl if subring => s.subring_matrix(r, n),
        EquationKind::Gl => s.alpha_gl(r, n),
        EquationKind::Sl => s.alpha_sl(r, n, subring),
        EquationKind::So(_) => s.alpha_so(t.q().unwrap(), subring),
    }
}

/// u0 in the group of the type (GL_n, SL_n or SO(q)).
fn sample_group(s: &mut Sampler, t: &EquationType, subring: bool) -> PMatrix {
    let (r, n) = (t.ring(), t.n());
    match (t.kind(), subring) {
        (EquationKind::Gl, false) => s.gl(r, n),
        (EquationKind::Gl, true) => s.gl_subring(r, n),
        (EquationKind::Sl, false) => s.sl(r, n),
        (EquationKind::Sl, true) => s.sl_subring(r, n),
        (EquationKind::So(_), false) => s.so(t.q().unwrap()),
        (EquationKind::So(_), true) => s.so_subring(t.q().unwrap()),
    }
}

fn label(t: &EquationType) -> String {
    format!(
        "{} n={} p={} m={}",
        t.kind(),
        t.n(),
        t.ring().p(),
        t.ring().degree()
    )
}

/// Outcome of one case: Ok(()) or a description of the failure.
type Case = std::result::Result<(), String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Case {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn run_case(f: impl FnOnce() -> Result<Case>) -> Case {
    f().unwrap_or_else(|e| Err(format!("error: {e}")))
}

fn summarize(id: u32, title: &'static str, outcomes: Vec<Case>) -> CriterionResult {
    let cases = outcomes.len();
    let failures: Vec<String> = outcomes.into_iter().filter_map(|c| c.err()).collect();
    let detail = match failures.first() {
        None => format!("{cases}/{cases} cases pass"),
        Some(first) => format!(
            "{}/{cases} cases fail; first: {first}",
            failures.len()
        ),
    };
    CriterionResult {
        id,
        title,
        passed: failures.is_empty() && cases > 0,
        cases,
        detail,
    }
}

/// Cases of `per_config` runs over each configuration, in parallel, in order.
fn over_configs<F>(types: &[EquationType], per_config: usize, f: F) -> Vec<Case>
where
    F: Fn(usize, &EquationType, usize) -> Case + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..types.len())
        .flat_map(|c| (0..per_config).map(move |k| (c, k)))
        .collect();
    jobs.par_iter().map(|&(c, k)| f(c, &types[c], k)).collect()
}

fn criterion_solver(seed: u64) -> CriterionResult {
    let types = configs(4, &[1, 2]);
    let out = over_configs(&types, 20, |c, t, k| {
        run_case(|| {
            let mut s = Sampler::stream(seed, &[1, c as u64, k as u64]);
            let spec = EquationSpec::new(t.clone(), sample_alpha(&mut s, t, false))?;
            let u0 = s.gl(t.ring(), t.n());
            let rep = spec.solve(&u0)?;
            Ok(check(
                rep.residual_valuation.at_least(PRECISION) && rep.solution.congruent(&u0, 1),
                || format!("{} case {k}: residual valuation {}", label(t), rep.residual_valuation),
            ))
        })
    });
    summarize(1, "solver correctness: residual vanishes mod p^N, u = u0 mod p", out)
}

fn criterion_uniqueness(seed: u64) -> CriterionResult {
    let types = configs(4, &[1, 2]);
    let out: Vec<Case> = (0..50usize)
        .into_par_iter()
        .map(|k| {
            let c = (k * 7) % types.len();
            let t = &types[c];
            run_case(|| {
                let mut s = Sampler::stream(seed, &[2, c as u64, k as u64]);
                let spec = EquationSpec::new(t.clone(), sample_alpha(&mut s, t, false))?;
                let u0 = s.gl(t.ring(), t.n());
                let shifted = &u0 + &s.matrix(t.ring(), t.n()).mul_p();
                let a = spec.solve(&u0)?.solution;
                let b = spec.solve(&shifted)?.solution;
                Ok(check(a.truncate(PRECISION - 1) == b.truncate(PRECISION - 1), || {
                    format!("{} case {k}: solutions differ", label(t))
                }))
            })
        })
        .collect();
    summarize(2, "uniqueness: u0 + p R gives the same solution", out)
}

fn criterion_convergence(seed: u64) -> CriterionResult {
    let types = configs(4, &[1, 2]);
    let out: Vec<Case> = (0..10usize)
        .into_par_iter()
        .map(|k| {
            let c = (k * 11 + 3) % types.len();
            let t = &types[c];
            run_case(|| {
                let mut s = Sampler::stream(seed, &[3, c as u64, k as u64]);
                let spec = EquationSpec::new(t.clone(), sample_alpha(&mut s, t, false))?;
                let traj = spec.trajectory(&s.gl(t.ring(), t.n()))?;
                let last = traj.last().unwrap();
                let bad = (0..PRECISION as usize).find(|&i| !traj[i].congruent(last, i as u32 + 1));
                Ok(check(bad.is_none(), || {
                    format!("{} case {k}: iterate {} is off", label(t), bad.unwrap())
                }))
            })
        })
        .collect();
    summarize(3, "convergence: iterate k agrees with the solution mod p^(k+1)", out)
}

/// Solutions with alpha in the delta-Lie algebra and u0 in the group, for the
/// preservation and prime-integral criteria.
fn preserving_cases(
    seed: u64,
    tag: u64,
    shapes: &[(EquationKind, usize)],
    count: usize,
) -> Vec<Result<(EquationSpec, PMatrix)>> {
    let mut types = Vec::new();
    for &(kind, n) in shapes {
        for &p in &PRIMES {
            for m in [1, 2] {
                if let Ok(t) = EquationType::new(&ring(p, m), kind, n) {
                    types.push(t);
                }
            }
        }
    }
    (0..count)
        .into_par_iter()
        .map(|k| {
            let c = k % types.len();
            let t = &types[c];
            let mut s = Sampler::stream(seed, &[tag, c as u64, k as u64]);
            let spec = EquationSpec::new(t.clone(), sample_alpha(&mut s, t, false))?;
            let u = spec.solve(&sample_group(&mut s, t, false))?.solution;
            Ok((spec, u))
        })
        .collect()
}

fn criterion_sl(cases: &[Result<(EquationSpec, PMatrix)>]) -> CriterionResult {
    let out = cases
        .iter()
        .enumerate()
        .map(|(k, c)| match c {
            Err(e) => Err(format!("case {k}: error: {e}")),
            Ok((spec, u)) => {
                let d = u.det();
                check(d.is_one() && d.known_prec() == PRECISION, || {
                    format!("{} case {k}: det u = {}", label(spec.equation_type()), d.expansion())
                })
            }
        })
        .collect();
    summarize(4, "SL preservation: det u = 1 at precision N", out)
}

fn criterion_so(cases: &[Vec<Result<(EquationSpec, PMatrix)>>]) -> CriterionResult {
    let out = cases
        .iter()
        .flatten()
        .enumerate()
        .map(|(k, c)| match c {
            Err(e) => Err(format!("case {k}: error: {e}")),
            Ok((spec, u)) => {
                let q = spec.equation_type().q().unwrap();
                check(&(&u.transpose() * q) * u == *q, || {
                    format!("{} case {k}: u^t q u != q", label(spec.equation_type()))
                })
            }
        })
        .collect();
    summarize(5, "SO preservation: u^t q u = q for all three forms", out)
}

fn criterion_integrals<'a>(
    cases: impl Iterator<Item = &'a Result<(EquationSpec, PMatrix)>>,
) -> CriterionResult {
    let out = cases
        .enumerate()
        .map(|(k, c)| match c {
            Err(e) => Err(format!("case {k}: error: {e}")),
            Ok((spec, u)) => run_case(|| {
                let ints = spec.prime_integrals(u)?;
                Ok(check(
                    !ints.is_empty()
                        && ints.iter().all(|i| {
                            i.vanishes() && i.delta.iter().all(|d| d.known_prec() == PRECISION - 1)
                        }),
                    || format!("{} case {k}: integral not constant", label(spec.equation_type())),
                ))
            }),
        })
        .collect();
    summarize(6, "prime integrals: delta(det u) = 0 and delta(u^t q u) = 0", out)
}

fn criterion_form_identity(seed: u64) -> CriterionResult {
    let mut types = Vec::new();
    for v in QuadricVariant::ALL {
        for n in [2, 3, 4] {
            if v.fits(n) {
                for &p in &PRIMES {
                    for m in [1, 2] {
                        types.push((v, EquationType::new(&ring(p, m), EquationKind::So(v), n).unwrap()));
                    }
                }
            }
        }
    }
    let out: Vec<Case> = QuadricVariant::ALL
        .iter()
        .flat_map(|&v| (0..100usize).map(move |k| (v, k)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(v, k)| {
            let pool: Vec<&EquationType> = types.iter().filter(|(w, _)| *w == v).map(|(_, t)| t).collect();
            let t = pool[k % pool.len()];
            run_case(|| {
                let mut s = Sampler::stream(seed, &[7, v as u64, k as u64]);
                let x = s.gl(t.ring(), t.n());
                let q = t.q().unwrap();
                let big = t.twisted_power(&x)?;
                let lhs = &(&big.transpose() * q) * &big;
                let rhs = (&(&x.transpose() * q) * &x).pow_p_entrywise();
                Ok(check(lhs == rhs, || format!("{} case {k}: identity fails", label(t))))
            })
        })
        .collect();
    summarize(7, "SO structural identity: Phi(x)^t q Phi(x) = (x^t q x)^(p)", out)
}

fn criterion_scalar(seed: u64) -> CriterionResult {
    let tol = PRECISION - 2;
    let out: Vec<Case> = (0..50usize)
        .into_par_iter()
        .map(|k| {
            let r = ring(PRIMES[k % 4], 1 + (k / 4) % 2);
            run_case(|| {
                let mut s = Sampler::stream(seed, &[8, 0, k as u64]);
                let zeta = s.constant_unit(&r);
                let eps = s.one_plus_p(&r);
                let beta = eps.log_p()?.div_p()?;
                let t = EquationType::new(&r, EquationKind::Gl, 1)?;
                let alpha = PMatrix::diagonal(&r, &[(&eps - &r.one()).div_p()?]);
                let u0 = PMatrix::diagonal(&r, std::slice::from_ref(&zeta));
                let solved = EquationSpec::new(t, alpha)?.solve(&u0)?.solution.get(0, 0).clone();
                let closed = solve_scalar_closed_form(&zeta, &eps, PRECISION)?;
                let series = solve_scalar_exp(&zeta, &beta)?;
                let psi = series.psi()?;
                Ok(check(
                    solved.congruent(&closed, tol)
                        && solved.congruent(&series, tol)
                        && psi.congruent(&beta, tol),
                    || format!("p={} m={} case {k}: the three forms disagree", r.p(), r.degree()),
                ))
            })
        })
        .collect();
    summarize(8, "scalar cross-check: iteration, product and exponential forms agree", out)
}

fn criterion_rationality(seed: u64) -> CriterionResult {
    let shapes = [
        (EquationKind::Gl, 2),
        (EquationKind::Sl, 2),
        (EquationKind::Gl, 3),
        (EquationKind::So(QuadricVariant::Sp), 2),
        (EquationKind::So(QuadricVariant::SoEven), 2),
        (EquationKind::So(QuadricVariant::SoOdd), 3),
        (EquationKind::Sl, 3),
    ];
    let out: Vec<Case> = (0..20usize)
        .into_par_iter()
        .map(|k| {
            let (kind, n) = shapes[k % shapes.len()];
            let mut p = PRIMES[k % 4];
            if kind == EquationKind::Sl && (n as u64).is_multiple_of(p) {
                p = 5;
            }
            run_case(|| {
                let t = EquationType::new(&ring(p, 2), kind, n)?;
                let mut s = Sampler::stream(seed, &[9, 0, k as u64]);
                let spec = EquationSpec::new(t.clone(), sample_alpha(&mut s, &t, true))?;
                let u = spec.solve(&sample_group(&mut s, &t, true))?.solution;
                Ok(check(u.frobenius_entrywise() == u, || {
                    format!("{} case {k}: phi(u) != u", label(&t))
                }))
            })
        })
        .collect();
    summarize(9, "rationality: subring inputs give a phi-fixed solution", out)
}

fn criterion_galois(seed: u64) -> CriterionResult {
    let mut types = Vec::new();
    for &p in &PRIMES {
        let r = ring(p, 1);
        for (kind, n) in shapes(3) {
            if let Ok(t) = EquationType::new(&r, kind, n) {
                types.push(t);
            }
        }
    }
    let mut out: Vec<Case> = types
        .par_iter()
        .enumerate()
        .map(|(c, t)| {
            run_case(|| {
                let mut s = Sampler::stream(seed, &[10, c as u64, 0]);
                let spec = EquationSpec::new(t.clone(), sample_alpha(&mut s, t, false))?;
                let u = spec.solve(&sample_group(&mut s, t, false))?.solution;
                let d = t.ring().p() - 1;
                let consts = enumerate_monomial_constants(t.ring(), t.n(), d, DEFAULT_CAP)?;
                let bound = GaloisBound::new(t, &u)?;
                // constancy() rejects non-members, so Ok(holds) certifies both claims
                let member_ok = |v: &PMatrix| bound.constancy(v).map(|c| c.holds()).unwrap_or(false);
                if let Some(i) = consts.par_iter().position_first(|v| !member_ok(v)) {
                    return Ok(Err(format!("{}: monomial constant #{i} fails", label(t))));
                }
                for j in 0..3 {
                    let v = bound.member_from(&s.gl(t.ring(), t.n()))?;
                    if !member_ok(&v) {
                        return Ok(Err(format!("{}: constructed member {j} fails", label(t))));
                    }
                }
                let compat = check_right_compatibility(t, 20, &mut s)?;
                Ok(check(compat.holds, || format!("{}: right compatibility fails", label(t))))
            })
        })
        .collect();
    for &p in &PRIMES {
        for m in [1, 2] {
            out.push(run_case(|| {
                let r = ring(p, m);
                let t = EquationType::new(&r, EquationKind::Gl, 1)?;
                let mut s = Sampler::stream(seed, &[10, 1000 + p, m as u64]);
                let spec = EquationSpec::new(t.clone(), s.alpha_gl(&r, 1))?;
                let u = spec.solve(&PMatrix::diagonal(&r, &[s.unit(&r)]))?.solution;
                let d = r.residue_field_size() as u64 - 1;
                let bound = scalar_galois_bound(&t, &u, d)?;
                let constant = bound
                    .iter()
                    .map(|c| c.is_constant())
                    .collect::<Result<Vec<bool>>>()?;
                Ok(check(
                    constant.iter().all(|&b| b) && bound == torsion_units(&r, d)?,
                    || format!("scalar p={p} m={m}: bound is not the constant torsion"),
                ))
            }));
        }
    }
    summarize(10, "Galois bounds: monomial constants in G_u, integrals constant on G_u, scalar bound constant", out)
}

fn criterion_example() -> CriterionResult {
    let mut out = Vec::new();
    for p in [7u64, 13] {
        let r = ring(p, 1);
        for z in crate::galois::cube_roots_of_unity(&r) {
            let z = z.coords()[0] % p;
            out.push(run_case(|| {
                let rep = order_two_counterexample(p, PRECISION, Some(z))?;
                Ok(check(rep.passed() && rep.order == Some(2), || {
                    let failed: Vec<&str> = rep
                        .notes
                        .iter()
                        .filter(|n| !n.passed)
                        .map(|n| n.name.as_str())
                        .collect();
                    format!("p={p} zeta={z}: {}", failed.join("; "))
                }))
            }));
        }
    }
    summarize(11, "order-two example: c in G_u, not monomial, c^2 = 1", out)
}

/// Criteria 1 to 11.
pub fn run_checks(seed: u64) -> Vec<CriterionResult> {
    let sl = preserving_cases(seed, 4, &[(EquationKind::Sl, 2), (EquationKind::Sl, 3)], 50);
    let so: Vec<Vec<_>> = QuadricVariant::ALL
        .iter()
        .map(|&v| {
            let shapes: Vec<_> = [2, 3, 4]
                .into_iter()
                .filter(|&n| v.fits(n))
                .map(|n| (EquationKind::So(v), n))
                .collect();
            preserving_cases(seed, 50 + v as u64, &shapes, 50)
        })
        .collect();
    vec![
        criterion_solver(seed),
        criterion_uniqueness(seed),
        criterion_convergence(seed),
        criterion_sl(&sl),
        criterion_so(&so),
        criterion_integrals(sl.iter().chain(so.iter().flatten())),
        criterion_form_identity(seed),
        criterion_scalar(seed),
        criterion_rationality(seed),
        criterion_galois(seed),
        criterion_example(),
    ]
}

/// All twelve criteria; the last reruns 1 to 11 and compares serialized bytes.
pub fn run_all(seed: u64) -> SuiteReport {
    let first = run_checks(seed);
    let bytes = |c: &[CriterionResult]| json::to_string(&json!(c));
    let a = bytes(&first);
    let b = bytes(&run_checks(seed));
    let mut criteria = first;
    criteria.push(CriterionResult {
        id: 12,
        title: "determinism: a rerun with the same seed is byte-identical",
        passed: a == b,
        cases: 1,
        detail: if a == b {
            format!("{} bytes identical", a.len())
        } else {
            "rerun differs".into()
        },
    });
    SuiteReport {
        seed,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

