use std::time::Instant;

use num_integer::Integer;
use serde::Serialize;

use dp6a2::arithmetic::{delta, theta_bruteforce, theta_closed, tau_p, EtaTuple, FactoredInteger};
use dp6a2::density::{density_report, f1, f2};
use dp6a2::surface::{count_fp, direct_count, phi, PlanePoint};
use dp6a2::torsor::{canonicalize, pi_map, section, torsor_count, zero_coordinate_count};
use dp6a2::CanonicalTorsorPoint;

use crate::report::{Check, RunReport};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Bijection,
    Fp,
    Density,
    Bounds,
}

/// Runs one invariant suite. The report fails if any check fails; each
/// failed check carries its first counterexample.
pub fn cmd_verify(suite: Suite, quad_tol: f64) -> Result<(RunReport, Vec<Check>)> {
    let mut report = RunReport::new("verify").param("suite", suite);
    if suite == Suite::Density {
        report = report.param("quad_tol", quad_tol);
    }
    let t0 = Instant::now();
    let checks = match suite {
        Suite::Identities => identities()?,
        Suite::Bijection => bijection()?,
        Suite::Fp => fp()?,
        Suite::Density => density(quad_tol)?,
        Suite::Bounds => bounds()?,
    };
    report.timings.insert("total".into(), t0.elapsed().as_secs_f64());
    report.passed = checks.iter().all(|c| c.passed);
    report.results = serde_json::json!({ "checks": checks });
    Ok((report, checks))
}

fn identities() -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let n = 24u64;
    let mut bad = None;
    'outer: for e1 in 1..=n {
        for e2 in 1..=n {
            for e3 in 1..=n {
                for e4 in 1..=n {
                    let eta = EtaTuple([e1, e2, e3, e4]);
                    if theta_closed(eta) != theta_bruteforce(eta) {
                        bad = Some(format!("eta = {:?}", eta.0));
                        break 'outer;
                    }
                }
            }
        }
    }
    out.push(Check::from_search(
        "theta closed form equals Mobius sum",
        format!("all eta with entries <= {n}"),
        bad,
    ));

    let primes = dp6a2::intmath::primes_up_to(1000);
    let mut bad = None;
    for &p in &primes {
        let lf = dp6a2::arithmetic::LocalFactor::new(p)?;
        let m1 = num_rational::BigRational::new((p - 1).into(), p.into());
        let poly = num_rational::BigRational::new((p * p + 4 * p + 1).into(), (p * p).into());
        let tau = tau_p(p)?;
        if m1.pow(4) * lf.dp_exact(0) != tau || m1.pow(4) * poly != tau {
            bad = Some(format!("p = {p}"));
            break;
        }
    }
    out.push(Check::from_search(
        "tau_p = (1 - 1/p)^4 D_p(1/3) = (1 - 1/p)^4 (1 + 4/p + 1/p^2)",
        format!("exact, {} primes up to 1000", primes.len()),
        bad,
    ));

    let mut bad = None;
    let mut pairs = 0;
    for m in 2..=60u64 {
        for k in 0..40u64 {
            let n = 15_000 + k;
            if m.gcd(&n) != 1 || m * n > 1_000_000 {
                continue;
            }
            pairs += 1;
            let lhs = delta(&FactoredInteger::new(m * n));
            let rhs = delta(&FactoredInteger::new(m)) * delta(&FactoredInteger::new(n));
            if (lhs - rhs).abs() > 1e-12 * lhs.abs().max(rhs.abs()) {
                bad = Some(format!("m = {m}, n = {n}: {lhs} vs {rhs}"));
                break;
            }
        }
    }
    out.push(Check::from_search(
        "Delta(mn) = Delta(m) Delta(n) for coprime m, n",
        format!("{pairs} pairs, relative tolerance 1e-12"),
        bad,
    ));
    Ok(out)
}

/// Valid primitive triples with `max(|a|, b, |c|) <= n`.
pub(crate) fn plane_points(n: i64) -> impl Iterator<Item = PlanePoint> {
    (1..=n).flat_map(move |b| {
        (-n..=n).flat_map(move |a| (-n..=n).filter_map(move |c| PlanePoint::new(a, b, c).ok()))
    })
}

fn bijection() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (mut tested, mut bad_round, mut bad_inv, mut bad_idem) = (0, None, None, None);
    for p in plane_points(30) {
        // points with a zero coordinate are not in the image of the torsor
        if p.a == 0 || p.c == 0 || p.w() == 0 {
            continue;
        }
        let target = phi(&p)?;
        tested += 1;
        let t = section(&p)?;
        let c = canonicalize(&t)?;
        let image = pi_map(c.point())?;
        if bad_round.is_none() && image != target && image != target.involution() {
            bad_round = Some(format!("{p:?}"));
        }
        if bad_inv.is_none() && !CanonicalTorsorPoint::satisfies_invariants(c.point()) {
            bad_inv = Some(format!("{p:?} -> {:?}", c.point()));
        }
        if bad_idem.is_none() && canonicalize(c.point())? != c {
            bad_idem = Some(format!("{p:?}"));
        }
    }
    let range = format!("{tested} triples with max(|a|, b, |c|) <= 30");
    out.push(Check::from_search("pi(canonicalize(section(p))) = phi(p)", range.clone(), bad_round));
    out.push(Check::from_search("canonical representatives are canonical", range.clone(), bad_inv));
    out.push(Check::from_search("canonicalize is idempotent", range, bad_idem));

    let mut bad = None;
    for b in [1, 10, 100, 1000] {
        let direct = direct_count(b)?.total;
        let via_torsor = 2 * torsor_count(b)? + zero_coordinate_count(b)?.total();
        if direct != via_torsor {
            bad = Some(format!("B = {b}: {direct} vs {via_torsor}"));
            break;
        }
    }
    out.push(Check::from_search(
        "N_U(B) = 2 T(B) + N_zero(B)",
        "B in {1, 10, 100, 1000}",
        bad,
    ));
    Ok(out)
}

fn fp() -> Result<Vec<Check>> {
    let mut bad = None;
    for p in [2, 3, 5, 7, 11, 13] {
        let n = count_fp(p)?;
        if n != (p + 1) * (p + 1) {
            bad = Some(format!("p = {p}: {n}"));
            break;
        }
    }
    Ok(vec![Check::from_search(
        "#S(F_p) = (p + 1)^2",
        "p in {2, 3, 5, 7, 11, 13}",
        bad,
    )])
}

fn density(quad_tol: f64) -> Result<Vec<Check>> {
    let r = density_report(quad_tol)?;
    let halving = (r.tau_inf_3d - r.tau_inf_3d_refined).abs() / r.tau_inf_3d;
    let symmetric = (r.tau_inf_3d - r.tau_inf_3d_symmetric).abs() / r.tau_inf_3d;
    Ok(vec![
        Check::new(
            "three-dimensional and planar routes agree",
            r.routes_agree(),
            format!(
                "{:.10} vs {:.10}, relative difference {:.2e} (tolerance {:.0e})",
                r.tau_inf_3d, r.tau_inf_2d, r.relative_difference, r.agreement_tolerance
            ),
        ),
        Check::new(
            "invariant under halving the tolerance",
            halving < 1e-4,
            format!("relative change {halving:.2e}"),
        ),
        Check::new(
            "both forms of the region agree",
            symmetric < r.agreement_tolerance,
            format!("relative difference {symmetric:.2e}"),
        ),
    ])
}

/// The `u`, `v` grid used for the pointwise bounds on `F1`.
pub(crate) fn f1_grid() -> impl Iterator<Item = (f64, f64)> {
    (1..=100).flat_map(|i| (0..100).map(move |j| (i as f64 / 100.0, j as f64 / 99.0 * 1.3)))
}

fn first_violation(bound: impl Fn(f64) -> f64) -> Option<String> {
    f1_grid()
        .map(|(u, v)| (u, v, f1(u, v)))
        .find(|&(u, _, f)| f > bound(u) + 1e-12)
        .map(|(u, v, f)| format!("F1({u}, {v}) = {f:.6} > {:.6}", bound(u)))
}

fn bounds() -> Result<Vec<Check>> {
    let grid = "100 x 100 grid, u in (0, 1], v in [0, 1.3]";
    let mut out = vec![
        Check::from_search("F1(u, v) <= 2/sqrt(u)", grid, first_violation(|u| 2.0 / u.sqrt())),
        Check::from_search(
            "F1(u, v) <= 2 sqrt(2/u)",
            grid,
            first_violation(|u| 2.0 * (2.0 / u).sqrt()),
        ),
    ];
    let mut bad = None;
    for i in 1..=100 {
        let u = i as f64 / 100.0;
        let v = f2(u)?;
        if v > 4.0 / u.sqrt() {
            bad = Some(format!("F2({u}) = {v:.6}"));
            break;
        }
    }
    out.push(Check::from_search("F2(u) <= 4/sqrt(u)", "u = k/100, k = 1..100", bad));
    Ok(out)
}
