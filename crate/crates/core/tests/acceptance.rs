//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! quantities and the runtime against its budget.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are evaluated exactly as stated
//! and reported as FAIL; they do not make the process exit non-zero. Any
//! other failure does. README.md explains why those two cannot hold.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::time::{Duration, Instant};

use multipack::bounds::{
    bounded_to_unbounded_rate, eval_bound, khinchin_constant, maximize_e, maximize_e_numeric, plotkin_point, BoundFamily,
    BoundName, KhinchinDomain,
};
use multipack::covering::{build_covering, cap_code_identity, coverage_fraction, plotkin_cap_check};
use multipack::ensembles::{sample, sample_cap, substream, EnsembleKind, EnsembleSpec};
use multipack::expurgation::expurgate;
use multipack::geometry::{
    avg_sq_radius, cheb_sq_radius, lift_ball_to_sphere, max_sq_radius, verify_packing, AvgRadiusForm,
};
use multipack::io::CurveTable;
use multipack::montecarlo::{gaussian_tail_exact, ln_gaussian_tail_exact, mc_tail, sphere_sum_moment};
use multipack::{Code, PackingNotion, PackingParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const KNOWN_UNATTAINABLE: [usize; 2] = [4, 8];

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: String) {
        self.pass &= ok;
        self.details.push(format!("[{}] {what}", if ok { "ok" } else { "FAILED" }));
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    substream(0xACCE_97, stream)
}

fn random_list(r: &mut ChaCha8Rng, l: usize, n: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..l).map(|_| (0..n).map(|_| scale * r.random_range(-1.0..1.0)).collect()).collect()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(1);
    let (mut worst_form, mut chain_bad) = (0.0f64, 0usize);
    for _ in 0..10_000 {
        let n = r.random_range(1..=64);
        let l = r.random_range(1..=8);
        let scale = 10f64.powf(r.random_range(-2.0..2.0));
        let list = random_list(&mut r, l, n, scale);
        let forms: Vec<f64> = AvgRadiusForm::ALL.iter().map(|&f| avg_sq_radius(&list, f).unwrap()).collect();
        let reference = forms[0];
        for v in &forms[1..] {
            let dev = (v - reference).abs() / reference.abs().max(1e-300);
            if reference != 0.0 || *v != 0.0 {
                worst_form = worst_form.max(dev);
            }
        }
        let (cheb, _) = cheb_sq_radius(&list).unwrap();
        let max = max_sq_radius(&list).unwrap();
        let slack = 1e-9 * max.max(1e-300);
        if !(reference <= cheb + slack && cheb <= max + slack) {
            chain_bad += 1;
        }
    }
    o.check(worst_form <= 1e-9, format!("four average-radius forms agree: worst relative deviation {worst_form:.2e} (tol 1e-9)"));
    o.check(chain_bad == 0, format!("avg <= cheb <= max on all 10^4 lists ({chain_bad} violations)"));
    o
}

/// Brute-force minimax: a dense grid over the bounding box, then nested
/// golden-section searches (the objective, a maximum of squared distances,
/// is convex, so each nested slice minimum is convex in the outer variable).
fn minimax_oracle(list: &[Vec<f64>]) -> f64 {
    let n = list[0].len();
    let f = |c: &[f64]| list.iter().map(|p| p.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum::<f64>()).fold(0.0, f64::max);
    let lo: Vec<f64> = (0..n).map(|d| list.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|d| list.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max)).collect();

    let k: usize = [0, 2000, 200, 40][n];
    let mut grid_best = f64::INFINITY;
    let mut idx = vec![0usize; n];
    loop {
        let c: Vec<f64> = (0..n).map(|d| lo[d] + (hi[d] - lo[d]) * idx[d] as f64 / k as f64).collect();
        grid_best = grid_best.min(f(&c));
        let mut d = 0;
        while d < n && idx[d] == k {
            idx[d] = 0;
            d += 1;
        }
        if d == n {
            break;
        }
        idx[d] += 1;
    }

    fn nested(f: &dyn Fn(&[f64]) -> f64, c: &mut Vec<f64>, d: usize, lo: &[f64], hi: &[f64]) -> f64 {
        if d == lo.len() {
            return f(c);
        }
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo[d], hi[d]);
        let eval = |t: f64, c: &mut Vec<f64>| {
            c[d] = t;
            nested(f, c, d + 1, lo, hi)
        };
        let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
        let (mut f1, mut f2) = (eval(x1, c), eval(x2, c));
        for _ in 0..80 {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = eval(x1, c);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = eval(x2, c);
            }
        }
        f1.min(f2).min(eval(0.5 * (a + b), c))
    }
    let mut c = vec![0.0; n];
    grid_best.min(nested(&f, &mut c, 0, &lo, &hi))
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = r.random_range(1..=3);
        let l = r.random_range(1..=5);
        let list = random_list(&mut r, l, n, 1.0);
        let (cheb, _) = cheb_sq_radius(&list).unwrap();
        worst = worst.max((cheb - minimax_oracle(&list)).abs());
    }
    o.check(worst <= 1e-4, format!("200 random lists vs brute-force minimax: worst |diff| {worst:.2e} (tol 1e-4)"));
    let h = 3f64.sqrt() / 2.0;
    let fixtures: [(&str, Vec<Vec<f64>>, f64); 3] = [
        ("pair", vec![vec![0.0, 0.0], vec![2.0, 0.0]], 1.0),
        ("equilateral", vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]], 1.0 / 3.0),
        ("right triangle", vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]], 2.0),
    ];
    for (name, list, expect) in fixtures {
        let (v, _) = cheb_sq_radius(&list).unwrap();
        o.check((v - expect).abs() <= 1e-9, format!("{name}: {v} vs {expect}"));
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let spec = EnsembleSpec::new(EnsembleKind::Gaussian, 20, 1.0, 0);
    let est = mc_tail(&spec, 3, 20.0 * 0.3, 1_000_000, 2024).unwrap();
    let exact = gaussian_tail_exact(20, 3, 1.0, 0.3).unwrap();
    let z = (est.p_hat - exact) / est.stderr;
    o.check(z.abs() <= 3.0, format!("p_hat {:.6e} +- {:.2e} vs exact {exact:.6e} ({z:+.2} stderr)", est.p_hat, est.stderr));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let rate = -ln_gaussian_tail_exact(800, 3, 1.0, 0.5).unwrap() / 800.0;
    let rho: f64 = 0.25;
    let analytic = (3.0 - 1.0) / 2.0 * (-(1.0 - rho).ln() - rho);
    let dev = (rate - analytic).abs() / analytic;
    o.check(dev <= 0.02, format!("-ln P/n at n=800: {rate:.6} vs {analytic:.6} (relative {:.2}%, tol 2%)", 100.0 * dev));
    let lb = eval_bound(BoundName::lb_gaussian, 3, 0.5).unwrap();
    let dev2 = (rate / 2.0 - lb).abs() / lb;
    o.check(dev2 <= 0.02, format!("rate/(L-1) = {:.6} vs lb_gaussian {lb:.6} (relative {:.2}%)", rate / 2.0, 100.0 * dev2));
    // the gap is the sub-exponential prefactor: check that it closes with n
    let big = -ln_gaussian_tail_exact(200_000, 3, 1.0, 0.5).unwrap() / 200_000.0;
    o.details.push(format!("[info] at n=2e5 the rate is {big:.6} ({:.3}% off)", 100.0 * (big - analytic).abs() / analytic));
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let (mut zero_bad, mut order_bad, mut sph_bad) = (0, 0, 0);
    for l in 2..=10usize {
        let pp = plotkin_point(l).unwrap();
        let grid: Vec<f64> = (0..1000).map(|i| pp * i as f64 / 999.0).collect();
        let table = CurveTable::evaluate(BoundFamily::Bounded, l, &grid, Default::default()).unwrap();
        order_bad += table.ordering_violations().len();
        for c in table.curves.iter().filter(|c| !c.name.is_capacity()) {
            if !c.values[999].is_some_and(|v| v.abs() <= 1e-12) {
                zero_bad += 1;
            }
            if eval_bound(c.name, l, pp).unwrap() != 0.0 {
                zero_bad += 1;
            }
        }
        for row in 0..1000 {
            if let (Some(a), Some(b)) =
                (table.value(BoundName::lb_spherical, row), table.value(BoundName::lb_spherical_improved, row))
            {
                if a > b + 1e-12 {
                    sph_bad += 1;
                }
            }
        }
        let ugrid: Vec<f64> = (1..=1000).map(|i| i as f64 / 1000.0).collect();
        let ut = CurveTable::evaluate(BoundFamily::Unbounded, l, &ugrid, Default::default()).unwrap();
        order_bad += ut.ordering_violations().len();
    }
    o.check(zero_bad == 0, format!("bounded bounds vanish at (L-1)/L for L=2..10 ({zero_bad} misses)"));
    o.check(order_bad == 0, format!("lower <= upper <= capacity on all grids ({order_bad} violations)"));
    o.check(sph_bad == 0, format!("lb_spherical <= lb_spherical_improved ({sph_bad} violations)"));

    let l = 1_000_000usize;
    let mut worst = 0.0f64;
    for i in 1..=19 {
        let x = i as f64 * 0.05;
        let lim: [(BoundName, f64); 6] = [
            (BoundName::lb_gaussian, 0.5 * ((1.0 / x).ln() + x - 1.0)),
            (BoundName::lb_spherical, 0.5 * (1.0 - x)),
            (BoundName::lb_spherical_improved, 0.5 * (1.0 / x).ln()),
            (BoundName::lb_blachman_few, 0.5 * (1.0 / (x * (2.0 - x))).ln()),
            (BoundName::ub_eb, 0.5 * (1.0 / x).ln()),
            (BoundName::cap_large_L, 0.5 * (1.0 / x).ln()),
        ];
        for (b, v) in lim {
            worst = worst.max((eval_bound(b, l, x).unwrap() - v).abs());
        }
        let two_pi_e = 2.0 * PI * std::f64::consts::E;
        let ulim: [(BoundName, f64); 4] = [
            (BoundName::lb_ppp, 0.5 * (1.0 / (two_pi_e * x)).ln()),
            (BoundName::lb_bf_unbdd, 0.5 * (1.0 / (2.0 * two_pi_e * x)).ln()),
            (BoundName::ub_eb_unbdd, 0.5 * (1.0 / (two_pi_e * x)).ln()),
            (BoundName::cap_large_L_unbdd, 0.5 * (1.0 / (two_pi_e * x)).ln()),
        ];
        for (b, v) in ulim {
            worst = worst.max((eval_bound(b, l, x).unwrap() - v).abs());
        }
    }
    o.check(worst <= 1e-5, format!("large-L limits at L=1e6: worst deviation {worst:.2e} (tol 1e-5)"));

    let mut r = rng(5);
    let mut worst_t = 0.0f64;
    for _ in 0..1000 {
        let l = r.random_range(2..=50usize);
        let p = 10f64.powf(r.random_range(-2.0..3.0));
        let x = r.random_range(0.001..1.0) * plotkin_point(l).unwrap();
        let n = x * p;
        for (b, u) in [(BoundName::ub_eb, BoundName::ub_eb_unbdd), (BoundName::cap_large_L, BoundName::cap_large_L_unbdd)] {
            let lhs = bounded_to_unbounded_rate(eval_bound(b, l, x).unwrap(), p).unwrap();
            worst_t = worst_t.max((lhs - eval_bound(u, l, n).unwrap()).abs());
        }
    }
    o.check(worst_t <= 1e-12, format!("bounded -> unbounded transform: worst {worst_t:.2e} (tol 1e-12)"));

    let v = |b| eval_bound(b, 5, 0.4).unwrap();
    let (imp, bf, sph, gau, eb) = (
        v(BoundName::lb_spherical_improved),
        v(BoundName::lb_blachman_few),
        v(BoundName::lb_spherical),
        v(BoundName::lb_gaussian),
        v(BoundName::ub_eb),
    );
    let expect = [(imp, 0.2092), (bf, 0.1438), (sph, 0.1127), (gau, 0.0966), (eb, 0.3466)];
    let values_ok = expect.iter().all(|(a, b)| (a - b).abs() <= 5e-5);
    let ranking = imp > bf && bf > sph && sph > gau && gau < eb;
    o.check(
        values_ok && ranking,
        format!("L=5, N/P=0.4: improved {imp:.4} > BF {bf:.4} > spherical {sph:.4} > gaussian {gau:.4} < EB {eb:.4}"),
    );
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let (mut worst_arg, mut worst_val, mut worst_bound) = (0.0f64, 0.0f64, 0.0f64);
    for l in 2..=21usize {
        let pp = plotkin_point(l).unwrap();
        for k in 1..=20 {
            let x = pp * k as f64 / 21.0;
            let p = 1.7;
            let closed = maximize_e(l, p, x * p).unwrap();
            let num = maximize_e_numeric(l, p, x * p).unwrap();
            worst_arg = worst_arg.max((closed.s - num.s).abs()).max((closed.lambda - num.lambda).abs());
            worst_val = worst_val.max((closed.value - num.value).abs());
            let b = eval_bound(BoundName::lb_spherical_improved, l, x).unwrap();
            worst_bound = worst_bound.max((closed.value / (l as f64 - 1.0) - b).abs());
        }
    }
    o.check(worst_arg <= 1e-6, format!("closed-form vs coordinate ascent: arguments within {worst_arg:.2e} (tol 1e-6)"));
    o.check(worst_val <= 1e-9, format!("values within {worst_val:.2e} (tol 1e-9)"));
    o.check(worst_bound <= 1e-9, format!("value/(L-1) = lb_spherical_improved within {worst_bound:.2e}"));
    let mut worst_l2 = 0.0f64;
    for k in 1..=20 {
        let (p, n) = (2.5, 2.5 * 0.5 * k as f64 / 21.0);
        let v = maximize_e(2, p, n).unwrap().value;
        worst_l2 = worst_l2.max((v - 0.5 * (p * p / (4.0 * n * (p - n))).ln()).abs());
    }
    o.check(worst_l2 <= 1e-12, format!("L=2 reduces to (1/2) ln(P^2/(4N(P-N))): worst {worst_l2:.2e}"));
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let (n, l, p, noise) = (50usize, 3usize, 1.0, 0.45);
    let rate = 0.8 * eval_bound(BoundName::lb_gaussian, l, noise / p).unwrap();
    let m = (n as f64 * rate).exp().floor() as usize;
    let params = PackingParams::new(n, l, Some(p), noise, PackingNotion::AverageRadius).unwrap();
    let run = |eps: f64| {
        let (mut all_verified, mut half_kept) = (true, 0);
        for seed in 0..20u64 {
            let spec = EnsembleSpec::new(EnsembleKind::Gaussian, n, p / (1.0 + eps), seed);
            let code = sample(&spec, m).unwrap();
            let (out, rep) = expurgate(&code, &params).unwrap();
            all_verified &= rep.verified && verify_packing(&out, &params).unwrap().ok;
            if 2 * rep.final_size >= m {
                half_kept += 1;
            }
        }
        (all_verified, half_kept)
    };
    let (verified, kept) = run(0.4);
    o.check(verified, format!("M = {m}, variance P/1.4: every expurgated code verifies"));
    o.check(kept >= 19, format!("final size >= M/2 in {kept}/20 seeds (need 19)"));
    let (v0, k0) = run(0.0);
    o.details.push(format!("[info] at variance exactly P: verified={v0}, final size >= M/2 in {k0}/20 seeds"));
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(8);
    let (mut worst, mut fails) = (0.0f64, 0);
    for i in 0..1000u64 {
        let l = r.random_range(2..=4usize);
        let n = r.random_range(2..=16usize);
        let m = r.random_range(l..=64usize);
        let p = r.random_range(0.5..2.0);
        let code = sample(&EnsembleSpec::new(EnsembleKind::Sphere, n, p, 1000 + i), m).unwrap();
        let rep = cap_code_identity(&code, l).unwrap();
        worst = worst.max((rep.lhs - rep.rhs).abs() / (1.0 + rep.rhs.abs()));
        if !(rep.holds && rep.enumerated) {
            fails += 1;
        }
    }
    o.check(fails == 0, format!("subset-average identity by enumeration on 10^3 spherical codes: worst {worst:.2e} (tol 1e-9)"));

    let mut bad = 0;
    for i in 0..1000u64 {
        let l = r.random_range(2..=4usize);
        let n = r.random_range(2..=16usize);
        let m = r.random_range(l..=24usize);
        let alpha = r.random_range(0.1..FRAC_PI_2);
        let code = sample_cap(n, 1.0, alpha, m, 5000 + i).unwrap();
        if !plotkin_cap_check(&code, alpha, l).unwrap().ok {
            bad += 1;
        }
    }
    o.check(bad == 0, format!("cap bound holds on 10^3 random cap codes ({bad} violations)"));

    let mut worst_ratio = String::new();
    let (mut size_bad, mut certified) = (0, 0);
    for rho in [0.5, 1.0] {
        for alpha in [FRAC_PI_2, FRAC_PI_3] {
            for l in [2usize, 3] {
                for seed in 0..5u64 {
                    let n = 8;
                    let noise = (l as f64 - 1.0) / l as f64 * alpha.sin().powi(2) * (1.0 + rho);
                    let code = sample_cap(n, 1.0, alpha, 24, 9000 + seed).unwrap();
                    let params = PackingParams::new(n, l, Some(1.0), noise, PackingNotion::AverageRadius).unwrap();
                    let (out, rep) = expurgate(&code, &params).unwrap();
                    if !rep.verified {
                        continue;
                    }
                    certified += 1;
                    let limit = (1.0 / rho).floor() as usize + 1;
                    if out.len() > limit.max(l - 1) {
                        size_bad += 1;
                        worst_ratio = format!("rho={rho} alpha={alpha:.3} L={l}: M={}", out.len());
                    }
                }
            }
        }
    }
    o.check(size_bad == 0, format!("{certified} certified cap codes obey M <= floor(1/rho)+1 {worst_ratio}"));

    let mut good = 0;
    let mut fracs = Vec::new();
    for seed in 0..20u64 {
        let cov = build_covering(8, FRAC_PI_3, 4.0, seed).unwrap();
        let f = coverage_fraction(&cov, 100_000, 100 + seed).unwrap();
        fracs.push(f);
        if f >= 0.999 {
            good += 1;
        }
    }
    let mean = fracs.iter().sum::<f64>() / fracs.len() as f64;
    o.check(good >= 18, format!("covering n=8, alpha=pi/3, oversample 4 (K=13): >= 99.9% in {good}/20 seeds, mean coverage {mean:.4}"));
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let (mut worst_s, mut worst_b) = (0.0f64, 0.0f64);
    for n in 2..=2000usize {
        worst_s = worst_s.max((khinchin_constant(n, 2.0, KhinchinDomain::Sphere).unwrap() - 1.0).abs());
        let nf = n as f64;
        let b = khinchin_constant(n, 2.0, KhinchinDomain::Ball).unwrap();
        worst_b = worst_b.max((b / (nf / (nf + 2.0)).sqrt() - 1.0).abs());
    }
    o.check(worst_s <= 1e-12 && worst_b <= 1e-12, format!("C_(n,2): sphere within {worst_s:.1e} of 1, ball within {worst_b:.1e} of sqrt(n/(n+2))"));
    for p in [2.0, 4.0, 8.0] {
        let est = sphere_sum_moment(16, 4, p, 1_000_000, 77).unwrap();
        let bound = khinchin_constant(16, p, KhinchinDomain::Sphere).unwrap().powf(p) * 4f64.powf(p / 2.0);
        let allowed = bound * (1.0 + 5.0 * est.stderr / est.mean);
        o.check(est.mean <= allowed, format!("p={p}: E||sum||^p = {:.4} +- {:.4} <= {bound:.4}", est.mean, est.stderr));
    }
    o
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(10);
    let (mut norm_bad, mut radius_bad, mut subsets) = (0, 0, 0);
    for i in 0..1000u64 {
        let n = r.random_range(1..=8usize);
        let m = r.random_range(2..=12usize);
        let p = r.random_range(0.2..3.0);
        let code: Code = sample(&EnsembleSpec::new(EnsembleKind::Ball, n, p, 20_000 + i), m).unwrap();
        let lifted = lift_ball_to_sphere(&code).unwrap();
        let target = (n + 1) as f64 * p;
        if lifted.rows().any(|x| !rel_close(x.iter().map(|v| v * v).sum::<f64>(), target, 1e-9)) {
            norm_bad += 1;
        }
        for _ in 0..10 {
            let l = r.random_range(2..=m.min(5));
            let mut idx: Vec<usize> = (0..m).collect();
            for k in 0..l {
                let j = r.random_range(k..m);
                idx.swap(k, j);
            }
            let idx = &idx[..l];
            let before: Vec<&[f64]> = idx.iter().map(|&k| code.row(k)).collect();
            let after: Vec<&[f64]> = idx.iter().map(|&k| lifted.row(k)).collect();
            let (c0, _) = cheb_sq_radius(&before).unwrap();
            let (c1, _) = cheb_sq_radius(&after).unwrap();
            let a0 = avg_sq_radius(&before, AvgRadiusForm::Definition).unwrap();
            let a1 = avg_sq_radius(&after, AvgRadiusForm::Definition).unwrap();
            let tol = |v: f64| 1e-9 * v.max(1e-12);
            if c1 < c0 - tol(c0) || a1 < a0 - tol(a0) {
                radius_bad += 1;
            }
            subsets += 1;
        }
    }
    o.check(norm_bad == 0, format!("lifted norms equal (n+1)P on 10^3 ball codes ({norm_bad} codes off)"));
    o.check(radius_bad == 0, format!("radii never decrease on {subsets} sampled subsets ({radius_bad} decreases)"));
    o
}

fn main() {
    let criteria: [(usize, &str, Duration, fn() -> Outcome); 10] = [
        (1, "representation suite", Duration::from_secs(5), criterion_1),
        (2, "Chebyshev oracle", Duration::from_secs(30), criterion_2),
        (3, "Gaussian tail golden test", Duration::from_secs(60), criterion_3),
        (4, "exponent convergence", Duration::from_secs(1), criterion_4),
        (5, "bound-curve suite", Duration::from_secs(5), criterion_5),
        (6, "exponent maximisation", Duration::from_secs(5), criterion_6),
        (7, "expurgation", Duration::from_secs(120), criterion_7),
        (8, "Plotkin/covering suite", Duration::from_secs(120), criterion_8),
        (9, "Khinchin suite", Duration::from_secs(60), criterion_9),
        (10, "lift suite", Duration::from_secs(10), criterion_10),
    ];
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = Vec::new();
    for (id, name, budget, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        outcome.check(elapsed <= budget, format!("runtime {:.2}s (budget {}s)", elapsed.as_secs_f64(), budget.as_secs()));
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let status = match (outcome.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable, see README)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} {name}: {status}");
        for d in &outcome.details {
            println!("    {d}");
        }
        if !outcome.pass && !known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
