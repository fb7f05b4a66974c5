//! Deterministic sampling of points, polynomial fields and component
//! arrays. Everything is driven by a caller-supplied seed so check
//! reports are reproducible byte for byte.

use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{self, Expr};
use crate::tensor::{Chart, Mat, Symmetry, TensorField, T3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in the box, in a fixed order for a fixed seed.
pub fn sample_points(bounds: &[(f64, f64)], count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| bounds.iter().map(|(lo, hi)| r.gen_range(*lo..=*hi)).collect())
        .collect()
}

/// Random polynomial of total degree <= 2 with coefficients in
/// `[-amp, amp]`.
pub fn random_poly(chart: &Chart, r: &mut ChaCha8Rng, amp: f64) -> Expr {
    let n = chart.dim();
    let mut e = expr::cnum(r.gen_range(-amp..=amp));
    for i in 0..n {
        let xi = expr::var(&chart.coords()[i], i);
        e = expr::add(e, expr::mul(expr::cnum(r.gen_range(-amp..=amp)), xi.clone()));
        for j in i..n {
            let xj = expr::var(&chart.coords()[j], j);
            e = expr::add(
                e,
                expr::mul(expr::cnum(r.gen_range(-amp..=amp)), expr::mul(xi.clone(), xj)),
            );
        }
    }
    e
}

/// Symmetric (0,2) polynomial field kept non-degenerate on the unit box
/// by diagonal dominance: `g = I +` small symmetric quadratics.
pub fn random_metric(chart: &Rc<Chart>, r: &mut ChaCha8Rng) -> TensorField {
    let n = chart.dim();
    let amp = 0.4 / n as f64;
    let mut comps = vec![expr::cnum(0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let mut e = random_poly(chart, r, amp);
            if i == j {
                e = expr::add(expr::cnum(1.0), e);
            }
            comps[i * n + j] = e.clone();
            comps[j * n + i] = e;
        }
    }
    TensorField::symbolic(chart.clone(), 2, 0, comps, Some(Symmetry::Symmetric)).expect("shape")
}

/// Skew (0,2) polynomial field.
pub fn random_two_form(chart: &Rc<Chart>, r: &mut ChaCha8Rng) -> TensorField {
    let n = chart.dim();
    let amp = 0.4 / n as f64;
    let mut comps = vec![expr::cnum(0.0); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let e = random_poly(chart, r, amp);
            comps[i * n + j] = e.clone();
            comps[j * n + i] = expr::neg(e);
        }
    }
    TensorField::symbolic(chart.clone(), 2, 0, comps, Some(Symmetry::Skew)).expect("shape")
}

/// Rank-3 array skew in the first two slots.
pub fn random_skew12(n: usize, r: &mut ChaCha8Rng, amp: f64) -> T3 {
    let mut t = T3::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let v = r.gen_range(-amp..=amp);
                t.set(i, j, k, v);
                t.set(j, i, k, -v);
            }
        }
    }
    t
}

/// Rank-3 array symmetric in the last two slots (a prescribed
/// covariant derivative of a symmetric tensor).
pub fn random_sym23(n: usize, r: &mut ChaCha8Rng, amp: f64) -> T3 {
    let mut t = T3::zeros(n);
    for m in 0..n {
        for i in 0..n {
            for j in i..n {
                let v = r.gen_range(-amp..=amp);
                t.set(m, i, j, v);
                t.set(m, j, i, v);
            }
        }
    }
    t
}

/// Totally skew rank-3 array.
pub fn random_totally_skew(n: usize, r: &mut ChaCha8Rng, amp: f64) -> T3 {
    let mut t = T3::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let v = r.gen_range(-amp..=amp);
                t.set(i, j, k, v);
                t.set(j, k, i, v);
                t.set(k, i, j, v);
                t.set(j, i, k, -v);
                t.set(i, k, j, -v);
                t.set(k, j, i, -v);
            }
        }
    }
    t
}

/// Unconstrained rank-3 array (an arbitrary connection).
pub fn random_t3(n: usize, r: &mut ChaCha8Rng, amp: f64) -> T3 {
    T3::from_fn(n, |_, _, _| r.gen_range(-amp..=amp))
}

/// Unconstrained matrix.
pub fn random_mat(n: usize, r: &mut ChaCha8Rng, amp: f64) -> Mat {
    Mat::from_fn(n, |_, _| r.gen_range(-amp..=amp))
}
