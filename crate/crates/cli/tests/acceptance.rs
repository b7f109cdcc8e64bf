//! Acceptance criteria, one line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slicereg::geocheck::{check_condition, check_injectivity_slice, Condition, SampleGrid, DEFAULT_SEPARATION};
use slicereg::maps::{alexander_op, caratheodory_extremal, koebe, q_times_derivative};
use slicereg::quat::{embed_slice, Quaternion, UnitImaginary};
use slicereg::series::{
    bullet_compose, bullet_inverse, representation_formula, slice_derivative, Side, TruncatedSeries,
};
use slicereg::verify::{
    area_complement, build_subordinate, coefficient_bounds, rogosinski, verify_envelope, CoefficientKind,
    EnvelopeKind, LaurentTail, DEFAULT_TOL,
};

const RADII: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction, norm uniform in `[0, radius)`.
fn ball(rng: &mut ChaCha8Rng, radius: f64) -> Quaternion {
    loop {
        let q = Quaternion::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if q.norm() > 1e-3 {
            return q.scale(radius * rng.gen_range(0.0..1.0) / q.norm());
        }
    }
}

fn cube(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_unit(rng: &mut ChaCha8Rng) -> UnitImaginary {
    loop {
        let (x, y, z) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if let Ok(u) = UnitImaginary::normalized(x, y, z) {
            if x * x + y * y + z * z > 1e-2 {
                return u;
            }
        }
    }
}

/// Coefficients `c_n 2^-n` with `c_n` in the unit cube and no constant term.
fn decaying(rng: &mut ChaCha8Rng, degree: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(degree, |n| if n == 0 { Quaternion::ZERO } else { cube(rng).scale(0.5f64.powi(n as i32)) })
}

fn normalized(rng: &mut ChaCha8Rng, degree: usize, radius: f64) -> TruncatedSeries {
    TruncatedSeries::from_fn(degree, |n| match n {
        0 => Quaternion::ZERO,
        1 => Quaternion::ONE,
        _ => ball(rng, radius),
    })
}

/// Independent real reversion: `[z^n] h = (1/n) [w^(n-1)] (w / g(w))^n`,
/// applied to `g / a_1` and rescaled by `a_1^-n`.
fn lagrange_reversion(a: &[f64]) -> Vec<f64> {
    let deg = a.len() - 1;
    let c: Vec<f64> = (0..deg).map(|k| a[k + 1] / a[1]).collect();
    let mut phi = vec![0.0; deg];
    phi[0] = 1.0;
    for n in 1..deg {
        phi[n] = -(1..=n).map(|k| c[k] * phi[n - k]).sum::<f64>();
    }
    let mul = |x: &[f64], y: &[f64]| {
        let mut out = vec![0.0; deg];
        for i in 0..deg {
            for j in 0..deg - i {
                out[i + j] += x[i] * y[j];
            }
        }
        out
    };
    let mut h = vec![0.0; deg + 1];
    let mut power = phi.clone();
    for n in 1..=deg {
        h[n] = power[n - 1] / n as f64 / a[1].powi(n as i32);
        power = mul(&power, &phi);
    }
    h
}

fn timed(limit: Duration, run: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let within = elapsed < limit;
    Outcome::new(
        out.passed && within,
        format!("{}; {:.3} s (limit {} s)", out.detail, elapsed.as_secs_f64(), limit.as_secs_f64()),
    )
}

fn c01_non_associativity() -> Outcome {
    timed(Duration::from_secs(1), || {
        let (a, b, c) = (Quaternion::I, Quaternion::J, Quaternion::K);
        let f = TruncatedSeries::monomial(2, c, 6);
        let g = TruncatedSeries::monomial(1, a, 6);
        let w = TruncatedSeries::monomial(2, b, 6);
        let left = bullet_compose(&bullet_compose(&f, &g).unwrap(), &w).unwrap();
        let right = bullet_compose(&f, &bullet_compose(&g, &w).unwrap()).unwrap();
        let want_left = TruncatedSeries::monomial(4, b * b * a * a * c, 6);
        let want_right = TruncatedSeries::monomial(4, b * a * b * a * c, 6);
        Outcome::new(
            left == want_left && right == want_right && left != right,
            format!("(f⦁g)⦁w = q^4 {:?}, f⦁(g⦁w) = q^4 {:?}", left.coeff(4).to_array(), right.coeff(4).to_array()),
        )
    })
}

fn c02_real_associativity() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut rng = rng(2);
        let mut worst = 0.0_f64;
        for _ in 0..100 {
            let f = TruncatedSeries::from_fn(16, |_| cube(&mut rng));
            let g = decaying(&mut rng, 16);
            let w = TruncatedSeries::from_fn(16, |n| {
                if n == 0 { Quaternion::ZERO } else { Quaternion::real(rng.gen_range(-1.0..1.0) * 0.5f64.powi(n as i32)) }
            });
            let lhs = bullet_compose(&bullet_compose(&f, &g).unwrap(), &w).unwrap();
            let rhs = bullet_compose(&f, &bullet_compose(&g, &w).unwrap()).unwrap();
            worst = worst.max(lhs.max_coeff_distance(&rhs));
        }
        Outcome::new(worst < 1e-10, format!("100 cases, max coefficient gap {worst:.3e} (< 1e-10)"))
    })
}

fn c03_compositional_inverse() -> Outcome {
    let mut rng = rng(3);
    let id = TruncatedSeries::identity(24);
    let (mut right_res, mut left_res) = (0.0_f64, 0.0_f64);
    for _ in 0..50 {
        let a1 = loop {
            let q = cube(&mut rng);
            if q.norm() > 1e-3 {
                break q.scale(rng.gen_range(0.5..2.0) / q.norm());
            }
        };
        let g = TruncatedSeries::from_fn(24, |n| match n {
            0 => Quaternion::ZERO,
            1 => a1,
            _ => ball(&mut rng, 0.25 * 0.5f64.powi(n as i32 - 1)),
        });
        let r = bullet_inverse(&g, Side::Right).unwrap();
        let l = bullet_inverse(&g, Side::Left).unwrap();
        right_res = right_res.max(bullet_compose(&g, &r).unwrap().max_coeff_distance(&id));
        left_res = left_res.max(bullet_compose(&l, &g).unwrap().max_coeff_distance(&id));
    }
    let mut oracle_gap = 0.0_f64;
    for _ in 0..50 {
        let mut a = vec![0.0, rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }];
        a.extend((2..=24).map(|n| rng.gen_range(-0.25..0.25) * 0.5f64.powi(n - 1)));
        let g = TruncatedSeries::from_real(&a).unwrap();
        let oracle = lagrange_reversion(&a);
        for side in [Side::Left, Side::Right] {
            let h = bullet_inverse(&g, side).unwrap();
            for (n, &o) in oracle.iter().enumerate() {
                oracle_gap = oracle_gap.max((h.coeff(n) - Quaternion::real(o)).norm());
            }
        }
    }
    Outcome::new(
        right_res < 1e-9 && left_res < 1e-9 && oracle_gap < 1e-9,
        format!(
            "50 cases, g⦁g_r^-1 residual {right_res:.3e}, g_l^-1⦁g residual {left_res:.3e}, Lagrange gap {oracle_gap:.3e} (< 1e-9)"
        ),
    )
}

fn c04_koebe_triple() -> Outcome {
    let k512 = koebe(512);
    let k128 = koebe(128);
    let dk128 = slice_derivative(&k128);
    let (mut growth, mut growth_abs) = (f64::NEG_INFINITY, 0.0_f64);
    let (mut dist, mut dist_abs) = (f64::NEG_INFINITY, 0.0_f64);
    for r in RADII {
        let q = Quaternion::real(-r);
        let g = k512.evaluate(q).norm() - r / (1.0 + r).powi(2);
        let d = dk128.evaluate(q).norm() - (1.0 - r) / (1.0 + r).powi(3);
        growth = growth.max(g);
        growth_abs = growth_abs.max(g.abs());
        dist = dist.max(d);
        dist_abs = dist_abs.max(d.abs());
    }
    let grid = SampleGrid::new(RADII.to_vec(), 64, 8, 1).unwrap();
    let envelope = verify_envelope(&k512, EnvelopeKind::Growth, &grid).unwrap();
    // Koebe meets both growth envelopes, at -r and at +r.
    let w = envelope.witness;
    let contact = envelope.extremal && w.x.abs() < 1e-12 && w.y == 0.0 && w.z == 0.0;
    let bieberbach = coefficient_bounds(&k128, CoefficientKind::Bieberbach, DEFAULT_TOL).unwrap();
    let passed = growth < 1e-8 && dist < 1e-6 && bieberbach.passed && bieberbach.tightness == 0.0 && contact;
    Outcome::new(
        passed,
        format!(
            "growth max(|K(-r)| - r/(1+r)^2) = {growth:.3e} (|.| {growth_abs:.3e}, degree 512, < 1e-8); \
             distortion max(|K'(-r)| - (1-r)/(1+r)^3) = {dist:.3e} (|.| {dist_abs:.3e}, degree 128, < 1e-6); \
             growth report extremal at {:?}; Bieberbach tightness {} for n <= 128",
            envelope.witness.to_array(),
            bieberbach.tightness
        ),
    )
}

fn c05_caratheodory() -> Outcome {
    let f = caratheodory_extremal(0.0, UnitImaginary::I, 128);
    let df = slice_derivative(&f);
    let (mut worst, mut worst_abs) = (f64::NEG_INFINITY, 0.0_f64);
    for r in RADII {
        let d = df.evaluate(Quaternion::real(-r)).w - (1.0 - r) / (1.0 + r);
        worst = worst.max(d);
        worst_abs = worst_abs.max(d.abs());
    }
    Outcome::new(
        worst < 1e-6,
        format!("max(Re f'(-r) - (1-r)/(1+r)) = {worst:.3e} over r <= 0.9 (|.| {worst_abs:.3e}, < 1e-6)"),
    )
}

fn c06_area() -> Outcome {
    let tails = [
        vec![Quaternion::ZERO, Quaternion::real(0.5)],
        vec![Quaternion::ZERO, Quaternion::I.scale(0.5), Quaternion::J.scale(0.25)],
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (t, coeffs) in tails.into_iter().enumerate() {
        let out = timed(Duration::from_secs(5), || {
            let tail = LaurentTail::new(coeffs).unwrap();
            let cmp = area_complement(&tail, UnitImaginary::I, 4096).unwrap();
            Outcome::new(
                cmp.relative_error < 0.01,
                format!(
                    "tail {}: formula {:.6}, oracle {:.6}, relative error {:.2e}",
                    t + 1,
                    cmp.formula_value,
                    cmp.oracle_value,
                    cmp.relative_error
                ),
            )
        });
        passed &= out.passed;
        parts.push(out.detail);
    }
    Outcome::new(passed, format!("{} (< 1 %)", parts.join("; ")))
}

fn c07_rogosinski() -> Outcome {
    let mut rng = rng(7);
    let grid = SampleGrid::default();
    let mut failures = 0;
    let mut min_tight = f64::INFINITY;
    for _ in 0..100 {
        let g = TruncatedSeries::from_fn(32, |n| if n == 0 { Quaternion::ZERO } else { ball(&mut rng, 1.0) });
        let c = rng.gen_range(0.0..1.0f64).max(1e-6);
        let w = TruncatedSeries::monomial(1, Quaternion::real(c), 32);
        let f = build_subordinate(&g, &w, &grid, DEFAULT_TOL).unwrap().series;
        let rep = rogosinski(&f, &g, DEFAULT_TOL).unwrap();
        failures += usize::from(!rep.passed);
        min_tight = min_tight.min(rep.tightness);
    }
    let g = TruncatedSeries::from_fn(32, |n| if n == 0 { Quaternion::ZERO } else { ball(&mut rng, 1.0) });
    let f = build_subordinate(&g, &TruncatedSeries::identity(32), &grid, DEFAULT_TOL).unwrap().series;
    let eq = rogosinski(&f, &g, DEFAULT_TOL).unwrap();
    Outcome::new(
        failures == 0 && eq.passed && eq.tightness.abs() < 1e-12,
        format!(
            "100 pairs, {failures} failing, smallest slack {min_tight:.3e}; c = 1 slack {:.1e} (< 1e-12)",
            eq.tightness
        ),
    )
}

fn c08_representation_formula() -> Outcome {
    let mut rng = rng(8);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let f = TruncatedSeries::from_fn(16, |_| cube(&mut rng));
        for _ in 0..10 {
            let (i, j) = (random_unit(&mut rng), random_unit(&mut rng));
            let (x, y) = (rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
            let plus = f.evaluate(embed_slice(x, y, j));
            let minus = f.evaluate(embed_slice(x, -y, j));
            let direct = f.evaluate(embed_slice(x, y, i));
            worst = worst.max((representation_formula(plus, minus, i, j) - direct).norm());
        }
    }
    Outcome::new(worst < 1e-9, format!("200 evaluations, max gap {worst:.3e} (< 1e-9)"))
}

fn c09_slice_independence() -> Outcome {
    let grid = SampleGrid::default();
    let rep = check_condition(&koebe(64), Condition::SliceStarlike, &grid, DEFAULT_TOL).unwrap();
    let margins: Vec<f64> = rep.slice_margins.iter().filter_map(|s| s.worst_margin).collect();
    let lo = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Outcome::new(
        margins.len() == 8 && hi - lo < 1e-10,
        format!("{} slices, margins in [{lo:.12}, {hi:.12}], spread {:.3e} (< 1e-10)", margins.len(), hi - lo),
    )
}

fn c10_alexander() -> Outcome {
    let mut rng = rng(10);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let f = normalized(&mut rng, 32, 1.0);
        worst = worst.max(q_times_derivative(&alexander_op(&f).unwrap()).max_coeff_distance(&f));
    }
    let a = alexander_op(&koebe(64)).unwrap();
    let ones = (1..=64).all(|n| a.coeff(n) == Quaternion::ONE) && a.coeff(0) == Quaternion::ZERO;
    Outcome::new(
        worst < 1e-12 && ones,
        format!("50 cases, max gap {worst:.3e} (< 1e-12); A(Koebe) coefficients all 1: {ones}"),
    )
}

fn c11_negative_control() -> Outcome {
    let f = TruncatedSeries::new(vec![Quaternion::ZERO, Quaternion::J, Quaternion::ONE]).unwrap();
    let grid = SampleGrid::default();
    let on_j = check_injectivity_slice(&f, UnitImaginary::J, &grid, DEFAULT_SEPARATION).unwrap();
    let on_i = check_injectivity_slice(&f, UnitImaginary::I, &grid, DEFAULT_SEPARATION).unwrap();
    let pair = on_j.witness_pair;
    let genuine = pair.is_some_and(|[p, q]| (p - q).norm() > DEFAULT_SEPARATION && (f.evaluate(p) - f.evaluate(q)).norm() < 1e-12);
    Outcome::new(
        !on_j.passed && genuine && on_i.passed,
        format!(
            "slice J fails with pair {:?}; slice i passes with margin {:.3e}",
            pair.map(|[p, q]| [p.to_array(), q.to_array()]),
            on_i.worst_margin
        ),
    )
}

fn run_pipeline(bin: &Path, dir: &Path) -> Vec<(String, Vec<u8>)> {
    std::fs::create_dir_all(dir).unwrap();
    let run = |args: &[&str]| {
        let status = Command::new(bin).args(args).current_dir(dir).env_remove("SLICEREG_SEED").status().unwrap();
        status.code().unwrap()
    };
    assert_eq!(run(&["series", "make", "koebe", "--degree", "128", "--out", "koebe128.json"]), 0);
    std::fs::create_dir_all(dir.join("reports")).unwrap();
    assert_eq!(run(&["verify", "growth", "--series", "koebe128.json", "--seed", "99", "--out", "reports/growth.json"]), 0);
    assert_eq!(run(&["verify", "distortion", "--series", "koebe128.json", "--seed", "99", "--out", "reports/distortion.json"]), 0);
    assert_eq!(run(&["verify", "integral-mean", "--series", "koebe128.json", "--r", "0.5", "--out", "reports/mean.json"]), 0);
    assert_eq!(run(&["report", "reports", "--out", "table"]), 0);
    ["reports/growth.json", "reports/distortion.json", "reports/mean.json", "table/summary.csv", "table/margins.dat"]
        .iter()
        .map(|name| (name.to_string(), std::fs::read(dir.join(name)).unwrap()))
        .collect()
}

fn c12_determinism() -> Outcome {
    let bin = Path::new(env!("CARGO_BIN_EXE_slicereg"));
    let tmp = tempfile::tempdir().unwrap();
    let a = run_pipeline(bin, &tmp.path().join("run1"));
    let b = run_pipeline(bin, &tmp.path().join("run2"));
    let differing: Vec<&str> = a.iter().zip(&b).filter(|(x, y)| x.1 != y.1).map(|(x, _)| x.0.as_str()).collect();
    Outcome::new(
        differing.is_empty(),
        format!("{} artifacts compared, differing: {differing:?}", a.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("non-associativity witness", c01_non_associativity),
        ("real-coefficient associativity", c02_real_associativity),
        ("compositional inverse", c03_compositional_inverse),
        ("Koebe extremality triple", c04_koebe_triple),
        ("Caratheodory extremal", c05_caratheodory),
        ("area oracle", c06_area),
        ("Rogosinski", c07_rogosinski),
        ("representation formula", c08_representation_formula),
        ("slice independence", c09_slice_independence),
        ("Alexander duality", c10_alexander),
        ("negative control q^2 + qJ", c11_negative_control),
        ("pipeline determinism", c12_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    println!("\nacceptance criteria");
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                Outcome::new(false, format!("panicked: {}", msg.unwrap_or_default()))
            });
        failed += usize::from(!outcome.passed);
        println!("[{}] {:02} {name}: {}", if outcome.passed { "PASS" } else { "FAIL" }, i + 1, outcome.detail);
    }
    println!("{} of {} criteria passed\n", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
