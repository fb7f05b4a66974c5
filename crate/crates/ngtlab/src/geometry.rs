//! Connections determined by torsion and metric derivative, induced
//! derivatives of the skew part, the Nijenhuis tensor, and the
//! existence construction for totally skew torsion preserving both
//! `g` and `F`.
//!
//! All rank-3 results indexed by vector arguments use the layout
//! `(X, Y, Z) = (i, j, k)`; connection coefficient arrays use
//! `gamma.get(k, i, j) = Gamma^k_{ij}` with the differentiation index
//! first.

use crate::tensor::ops::{
    covariant_derivative_02, covariant_derivative_11, lower_12, raise_last, torsion_of,
};
use crate::tensor::{Mat, PointFrame, T3};
use crate::{Error, Result};

/// Levi-Civita coefficients
/// `Gamma^k_{ij} = (1/2) g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})`.
pub fn levi_civita(fr: &PointFrame) -> T3 {
    let n = fr.n;
    T3::from_fn(n, |k, i, j| {
        let mut v = 0.0;
        for l in 0..n {
            v += 0.5
                * fr.g_inv.get(k, l)
                * (fr.dg.get(i, j, l) + fr.dg.get(j, i, l) - fr.dg.get(l, i, j));
        }
        v
    })
}

/// Lowered coefficients `Gamma_{ijk} = g(nabla_i d_j, d_k)` in layout
/// `(i, j, k)`.
pub fn lower_connection(gamma: &T3, g: &Mat) -> T3 {
    lower_12(gamma, g)
}

/// `(nabla_m g)_{ij}` for the given connection, layout `(m, i, j)`.
pub fn nabla_g(gamma: &T3, fr: &PointFrame) -> T3 {
    covariant_derivative_02(gamma, &fr.g, &fr.dg)
}

/// `(nabla_m F)_{ij}` for the given connection, layout `(m, i, j)`.
pub fn nabla_f(gamma: &T3, fr: &PointFrame) -> T3 {
    covariant_derivative_02(gamma, &fr.f2, &fr.df2)
}

/// `(nabla_m A)^i_j` for the given connection, layout `(m, i, j)`.
pub fn nabla_a(gamma: &T3, fr: &PointFrame) -> T3 {
    covariant_derivative_11(gamma, &fr.a, &fr.da)
}

/// Lowered torsion `T_{ijk} = g(T(d_i, d_j), d_k)` of a connection.
pub fn lowered_torsion(gamma: &T3, fr: &PointFrame) -> T3 {
    lower_12(&torsion_of(gamma), &fr.g)
}

/// The unique connection with prescribed lowered torsion `t` and
/// prescribed metric derivative `ng = nabla g`:
///
/// `g(nabla_X Y, Z) = g(nabla^g_X Y, Z)
///    + (1/2)[T(X,Y,Z) + T(Z,X,Y) - T(Y,Z,X)]
///    - (1/2)[(nabla_X g)(Y,Z) + (nabla_Y g)(Z,X) - (nabla_Z g)(Y,X)]`.
///
/// `t` must be skew in its first two slots and `ng` symmetric in its
/// last two.
pub fn connection_from_data(t: &T3, ng: &T3, fr: &PointFrame) -> T3 {
    let n = fr.n;
    let lc_low = lower_connection(&levi_civita(fr), &fr.g);
    let low = T3::from_fn(n, |i, j, k| {
        lc_low.get(i, j, k)
            + 0.5 * (t.get(i, j, k) + t.get(k, i, j) - t.get(j, k, i))
            - 0.5 * (ng.get(i, j, k) + ng.get(j, k, i) - ng.get(k, j, i))
    });
    raise_last(&low, &fr.g_inv)
}

/// Metric connection (`nabla g = 0`) with prescribed lowered torsion:
/// `g(nabla_X Y, Z) = g(nabla^g_X Y, Z) + (1/2)[T(X,Y,Z) + T(Z,X,Y) - T(Y,Z,X)]`.
pub fn metric_connection(t: &T3, fr: &PointFrame) -> T3 {
    connection_from_data(t, &T3::zeros(fr.n), fr)
}

/// Metric connection with totally skew lowered torsion:
/// `g(nabla_X Y, Z) = g(nabla^g_X Y, Z) + (1/2) T(X,Y,Z)`.
pub fn skew_metric_connection(t: &T3, fr: &PointFrame) -> T3 {
    let n = fr.n;
    let lc_low = lower_connection(&levi_civita(fr), &fr.g);
    let low = T3::from_fn(n, |i, j, k| lc_low.get(i, j, k) + 0.5 * t.get(i, j, k));
    raise_last(&low, &fr.g_inv)
}

/// `nabla F` of the connection determined by `(t, ng)`, computed from
/// the data alone:
///
/// `(nabla_X F)(Y,Z) = (nabla^g_X F)(Y,Z)
///    + (1/2)[T(X,Y,AZ) + T(Z,X,AY)]
///    + (1/2)[T(AZ,X,Y) + T(AZ,Y,X) + T(X,AY,Z) + T(Z,AY,X)]
///    + (1/2)[(nabla_X g)(AY,Z) - (nabla_X g)(Y,AZ) - (nabla_Y g)(AZ,X)]
///    + (1/2)[(nabla_Z g)(AY,X) + (nabla_{AZ} g)(Y,X) - (nabla_{AY} g)(Z,X)]`.
pub fn predicted_nabla_f(t: &T3, ng: &T3, fr: &PointFrame) -> T3 {
    let n = fr.n;
    let a = &fr.a;
    let lcnf = nabla_f(&levi_civita(fr), fr);
    let ta1 = t.apply_endo(0, a);
    let ta2 = t.apply_endo(1, a);
    let ta3 = t.apply_endo(2, a);
    let ng_dir = ng.apply_endo(0, a);
    let ng_arg1 = ng.apply_endo(1, a);
    let ng_arg2 = ng.apply_endo(2, a);
    T3::from_fn(n, |i, j, k| {
        lcnf.get(i, j, k)
            + 0.5 * (ta3.get(i, j, k) + ta3.get(k, i, j))
            + 0.5
                * (ta1.get(k, i, j) + ta1.get(k, j, i) + ta2.get(i, j, k) + ta2.get(k, j, i))
            + 0.5 * (ng_arg1.get(i, j, k) - ng_arg2.get(i, j, k) - ng_arg1.get(j, k, i))
            + 0.5 * (ng_arg1.get(k, j, i) + ng_dir.get(k, j, i) - ng_dir.get(j, k, i))
    })
}

/// Residual of the identity relating `dF`, torsion and `nabla F` that
/// holds for every linear connection:
///
/// `dF(X,Y,Z) = -T(X,Y,AZ) - T(Y,Z,AX) - T(Z,X,AY)
///    + (nabla_X F)(Y,Z) + (nabla_Y F)(Z,X) + (nabla_Z F)(X,Y)`.
pub fn universal_df_residual(gamma: &T3, fr: &PointFrame) -> f64 {
    let n = fr.n;
    let t = lowered_torsion(gamma, fr);
    let nf = nabla_f(gamma, fr);
    let ta3 = t.apply_endo(2, &fr.a);
    let df = fr.df();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = df.get(i, j, k)
                    + ta3.get(i, j, k)
                    + ta3.get(j, k, i)
                    + ta3.get(k, i, j)
                    - nf.get(i, j, k)
                    - nf.get(j, k, i)
                    - nf.get(k, i, j);
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

/// For a metric connection with lowered torsion `t`, residual of
///
/// `(nabla^g_X F)(Y,Z) = -(1/2)[T(X,Y,AZ) + T(Z,X,AY)]
///    - (1/2)[T(AZ,X,Y) + T(AZ,Y,X) + T(X,AY,Z) + T(Z,AY,X)]`.
pub fn metric_nabla_f_residual(t: &T3, fr: &PointFrame) -> f64 {
    let n = fr.n;
    let a = &fr.a;
    let lcnf = nabla_f(&levi_civita(fr), fr);
    let ta1 = t.apply_endo(0, a);
    let ta2 = t.apply_endo(1, a);
    let ta3 = t.apply_endo(2, a);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = lcnf.get(i, j, k)
                    + 0.5 * (ta3.get(i, j, k) + ta3.get(k, i, j))
                    + 0.5
                        * (ta1.get(k, i, j) + ta1.get(k, j, i) + ta2.get(i, j, k)
                            + ta2.get(k, j, i));
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

/// For a metric connection with lowered torsion `t`, residual of
/// `dF(X,Y,Z) = -T(X,Y,AZ) - T(Y,Z,AX) - T(Z,X,AY)`.
pub fn metric_df_residual(t: &T3, fr: &PointFrame) -> f64 {
    let n = fr.n;
    let ta3 = t.apply_endo(2, &fr.a);
    let df = fr.df();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = df.get(i, j, k) + ta3.get(i, j, k) + ta3.get(j, k, i) + ta3.get(k, i, j);
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

/// Nijenhuis tensor of `A` in coordinates, layout `(k, i, j)`:
/// `N^k_{ij} = A^p_i d_p A^k_j - A^p_j d_p A^k_i + A^k_p d_j A^p_i - A^k_p d_i A^p_j`.
pub fn nijenhuis_up(fr: &PointFrame) -> T3 {
    let n = fr.n;
    T3::from_fn(n, |k, i, j| {
        let mut v = 0.0;
        for p in 0..n {
            v += fr.a.get(p, i) * fr.da.get(p, k, j) - fr.a.get(p, j) * fr.da.get(p, k, i)
                + fr.a.get(k, p) * (fr.da.get(j, p, i) - fr.da.get(i, p, j));
        }
        v
    })
}

/// Lowered Nijenhuis tensor `N(X,Y,Z) = g(N(X,Y), Z)`, layout `(i, j, k)`.
pub fn nijenhuis_low(fr: &PointFrame) -> T3 {
    lower_12(&nijenhuis_up(fr), &fr.g)
}

/// Lowered Nijenhuis tensor expressed through an arbitrary connection:
///
/// `N(X,Y) = (nabla_{AX} A)Y - (nabla_{AY} A)X - A(nabla_X A)Y + A(nabla_Y A)X
///    - T(AX,AY) - A^2 T(X,Y) + A T(AX,Y) + A T(X,AY)`.
pub fn nijenhuis_from_connection(gamma: &T3, fr: &PointFrame) -> T3 {
    nijenhuis_rhs(&nabla_a(gamma, fr), &torsion_of(gamma), fr)
}

/// The right-hand side of the connection expression for the Nijenhuis
/// tensor, evaluated from a given `nabla A` array (layout `(m, i, j)` =
/// `(direction, upper, lower)`) and torsion `t_up` (layout `(k, i, j)`).
/// Lowered result.
pub fn nijenhuis_rhs(na: &T3, tup: &T3, fr: &PointFrame) -> T3 {
    let n = fr.n;
    let a = &fr.a;
    let a2 = a.matmul(a);
    let up = T3::from_fn(n, |k, i, j| {
        let mut v = 0.0;
        for p in 0..n {
            v += a.get(p, i) * na.get(p, k, j) - a.get(p, j) * na.get(p, k, i)
                - a.get(k, p) * (na.get(i, p, j) - na.get(j, p, i))
                - a2.get(k, p) * tup.get(p, i, j);
            for q in 0..n {
                v += -a.get(p, i) * a.get(q, j) * tup.get(k, p, q)
                    + a.get(k, p) * a.get(q, i) * tup.get(p, q, j)
                    + a.get(k, p) * a.get(q, j) * tup.get(p, i, q);
            }
        }
        v
    });
    lower_12(&up, &fr.g)
}

/// Lowered Nijenhuis tensor of a connection with `nabla A = 0`, from
/// its lowered torsion alone:
/// `N(X,Y,Z) = -T(AX,AY,Z) - T(X,Y,A^2 Z) - T(AX,Y,AZ) - T(X,AY,AZ)`.
pub fn nijenhuis_parallel_a(t: &T3, fr: &PointFrame) -> T3 {
    let n = fr.n;
    let a = &fr.a;
    let a2 = a.matmul(a);
    let t12 = t.apply_endo(0, a).apply_endo(1, a);
    let t3a2 = t.apply_endo(2, &a2);
    let t13 = t.apply_endo(0, a).apply_endo(2, a);
    let t23 = t.apply_endo(1, a).apply_endo(2, a);
    T3::from_fn(n, |i, j, k| {
        -t12.get(i, j, k) - t3a2.get(i, j, k) - t13.get(i, j, k) - t23.get(i, j, k)
    })
}

/// Residual of the existence condition for a metric connection with
/// totally skew torsion preserving `F`:
/// `N(X,Y,AZ) + N(X,Z,AY) = dF(X,Y,A^2 Z) + dF(X,Z,A^2 Y)`.
pub fn skew_existence_residual(fr: &PointFrame) -> f64 {
    let n = fr.n;
    let a2 = fr.a.matmul(&fr.a);
    let nj = nijenhuis_low(fr).apply_endo(2, &fr.a);
    let dfa2 = fr.df().apply_endo(2, &a2);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = nj.get(i, j, k) + nj.get(i, k, j) - dfa2.get(i, j, k) - dfa2.get(i, k, j);
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

/// Output of the skew-torsion construction at a point.
#[derive(Debug, Clone)]
pub struct SkewTorsionOutcome {
    /// Residual of the existence condition (`skew_existence_residual`).
    pub condition_residual: f64,
    /// Candidate lowered torsion solving `T(AX,Y,Z) = 2 (nabla^g_X F)(Y,Z) - dF(X,Y,Z)`.
    pub torsion: T3,
    /// The connection `gamma^k_{ij}` built from the candidate torsion.
    pub gamma: T3,
    /// Total skew-symmetry defect of the candidate torsion.
    pub skew_residual: f64,
    /// `max |nabla g|` for the built connection.
    pub nabla_g_residual: f64,
    /// `max |nabla F|` for the built connection.
    pub nabla_f_residual: f64,
}

/// Constructs the unique candidate for a metric connection with
/// totally skew torsion preserving `F`, by solving
/// `T(AX,Y,Z) = 2 (nabla^g_X F)(Y,Z) - dF(X,Y,Z)` for `T`.
///
/// Requires invertible `A`; degenerate `A` (e.g. contact-type
/// structures) is rejected so the structure-specific constructions can
/// be used instead. When the existence condition fails the candidate
/// is still returned and the residuals report how badly it fails to be
/// skew and metric.
pub fn skew_torsion_connection(fr: &PointFrame) -> Result<SkewTorsionOutcome> {
    let n = fr.n;
    let a_inv = fr.a.invert().map_err(|_| Error::DegenerateEndomorphism)?;
    let lcnf = nabla_f(&levi_civita(fr), fr);
    let df = fr.df();
    let s = T3::from_fn(n, |i, j, k| 2.0 * lcnf.get(i, j, k) - df.get(i, j, k));
    // T_{mjk} with A^m_i T_{mjk} = S_{ijk}.
    let torsion = T3::from_fn(n, |m, j, k| (0..n).map(|i| a_inv.get(i, m) * s.get(i, j, k)).sum());
    let gamma = skew_metric_connection(&torsion, fr);
    let outcome = SkewTorsionOutcome {
        condition_residual: skew_existence_residual(fr),
        skew_residual: torsion.total_skew_residual(),
        nabla_g_residual: nabla_g(&gamma, fr).max_abs(),
        nabla_f_residual: nabla_f(&gamma, fr).max_abs(),
        torsion,
        gamma,
    };
    Ok(outcome)
}

/// The connection `g(nabla_X Y, Z) = (1/2)[X G(Y,Z) + Y G(Z,X) - Z G(Y,X)]
/// = g(nabla^g_X Y, Z) + (1/2) dF(X,Y,Z)`, which has `nabla g = 0` and
/// totally skew torsion `T = dF`.
pub fn eisenhart_connection(fr: &PointFrame) -> T3 {
    skew_metric_connection(&fr.df(), fr)
}

/// Residual of the Nijenhuis expression through the Levi-Civita
/// derivative of `F`:
/// `N(X,Y,Z) = (nabla^g_{AX} F)(Y,Z) - (nabla^g_{AY} F)(X,Z)
///    + (nabla^g_X F)(Y,AZ) - (nabla^g_Y F)(X,AZ)`.
pub fn nijenhuis_via_lc_f_residual(fr: &PointFrame) -> f64 {
    let n = fr.n;
    let lcnf = nabla_f(&levi_civita(fr), fr);
    let nf_a0 = lcnf.apply_endo(0, &fr.a);
    let nf_a2 = lcnf.apply_endo(2, &fr.a);
    let nj = nijenhuis_low(fr);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = nj.get(i, j, k)
                    - (nf_a0.get(i, j, k) - nf_a0.get(j, i, k) + nf_a2.get(i, j, k)
                        - nf_a2.get(j, i, k));
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::tensor::{Chart, GeneralizedMetric, SkewPart, Symmetry, TensorField};
    use std::rc::Rc;

    fn random_frame(dim: usize, seed: u64) -> PointFrame {
        let chart = Rc::new(Chart::standard(dim));
        let mut r = sampling::rng(seed);
        let g = sampling::random_metric(&chart, &mut r);
        let f = sampling::random_two_form(&chart, &mut r);
        let gm = GeneralizedMetric::new(g, SkewPart::TwoForm(f)).unwrap();
        let p: Vec<f64> = (0..dim).map(|_| 0.3 - 0.1 * dim as f64 + 0.17 * (seed % 5) as f64).collect();
        PointFrame::build(&gm, None, None, &p).unwrap()
    }

    fn flat_kahler_frame() -> PointFrame {
        let chart = Rc::new(Chart::standard(4));
        let mut g = vec![0.0; 16];
        for i in 0..4 {
            g[i * 4 + 1 * i] = 1.0;
        }
        let g = TensorField::constant(chart.clone(), 2, 0, g, Some(Symmetry::Symmetric)).unwrap();
        let mut f = vec![0.0; 16];
        f[0 * 4 + 1] = 1.0;
        f[1 * 4 + 0] = -1.0;
        f[2 * 4 + 3] = 1.0;
        f[3 * 4 + 2] = -1.0;
        let f = TensorField::constant(chart.clone(), 2, 0, f, Some(Symmetry::Skew)).unwrap();
        let gm = GeneralizedMetric::new(g, SkewPart::TwoForm(f)).unwrap();
        PointFrame::build(&gm, None, None, &[0.1, -0.2, 0.3, 0.4]).unwrap()
    }

    #[test]
    fn levi_civita_hand_check() {
        // g = diag(1 + x1^2, 1) on R^2: Gamma^1_{11} = x1 / (1 + x1^2).
        let chart = Rc::new(Chart::standard(2));
        let g = TensorField::symbolic(
            chart.clone(),
            2,
            0,
            vec![
                chart.parse_expr("1 + x1^2").unwrap(),
                crate::expr::cnum(0.0),
                crate::expr::cnum(0.0),
                crate::expr::cnum(1.0),
            ],
            Some(Symmetry::Symmetric),
        )
        .unwrap();
        let f = TensorField::constant(chart.clone(), 2, 0, vec![0.0; 4], Some(Symmetry::Skew)).unwrap();
        let gm = GeneralizedMetric::new(g, SkewPart::TwoForm(f)).unwrap();
        let fr = PointFrame::build(&gm, None, None, &[0.5, 0.0]).unwrap();
        let lc = levi_civita(&fr);
        assert!((lc.get(0, 0, 0) - 0.5 / 1.25).abs() < 1e-14);
        assert!(lc.get(1, 0, 0).abs() < 1e-14);
    }

    #[test]
    fn levi_civita_is_metric_and_torsion_free() {
        for seed in 0..5u64 {
            let fr = random_frame(3, seed);
            let lc = levi_civita(&fr);
            assert!(nabla_g(&lc, &fr).max_abs() < 1e-11);
            assert!(torsion_of(&lc).max_abs() < 1e-11);
        }
    }

    #[test]
    fn connection_from_data_round_trips_torsion_and_nabla_g() {
        for seed in 0..10u64 {
            let fr = random_frame(4, seed);
            let mut r = sampling::rng(1000 + seed);
            let t = sampling::random_skew12(4, &mut r, 0.7);
            let ng = sampling::random_sym23(4, &mut r, 0.7);
            let gamma = connection_from_data(&t, &ng, &fr);
            assert!(lowered_torsion(&gamma, &fr).sub(&t).max_abs() < 1e-10);
            assert!(nabla_g(&gamma, &fr).sub(&ng).max_abs() < 1e-10);
        }
    }

    #[test]
    fn predicted_nabla_f_matches_direct_computation() {
        for seed in 0..10u64 {
            let fr = random_frame(3, seed);
            let mut r = sampling::rng(2000 + seed);
            let t = sampling::random_skew12(3, &mut r, 0.6);
            let ng = sampling::random_sym23(3, &mut r, 0.6);
            let gamma = connection_from_data(&t, &ng, &fr);
            let direct = nabla_f(&gamma, &fr);
            let predicted = predicted_nabla_f(&t, &ng, &fr);
            assert!(direct.sub(&predicted).max_abs() < 1e-10);
        }
    }

    #[test]
    fn universal_df_identity_for_arbitrary_connection() {
        for seed in 0..10u64 {
            let fr = random_frame(4, seed);
            let mut r = sampling::rng(3000 + seed);
            let gamma = sampling::random_t3(4, &mut r, 1.0);
            assert!(universal_df_residual(&gamma, &fr) < 1e-10);
        }
    }

    #[test]
    fn metric_connection_identities() {
        for seed in 0..6u64 {
            let fr = random_frame(3, seed);
            let mut r = sampling::rng(4000 + seed);
            let t = sampling::random_skew12(3, &mut r, 0.6);
            let gamma = metric_connection(&t, &fr);
            assert!(nabla_g(&gamma, &fr).max_abs() < 1e-11);
            // The compatibility residual is exactly |nabla F| of the
            // metric connection with this torsion: it vanishes iff the
            // connection preserves F as well.
            let nf_norm = nabla_f(&gamma, &fr).max_abs();
            assert!((metric_nabla_f_residual(&t, &fr) - nf_norm).abs() < 1e-10);
            // dF identity for metric connections follows from the two above.
            let nf = nabla_f(&gamma, &fr);
            let cyc_nf = {
                let n = 3;
                let mut worst: f64 = 0.0;
                let ta3 = t.apply_endo(2, &fr.a);
                let df = fr.df();
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let r = df.get(i, j, k)
                                + ta3.get(i, j, k)
                                + ta3.get(j, k, i)
                                + ta3.get(k, i, j)
                                - nf.get(i, j, k)
                                - nf.get(j, k, i)
                                - nf.get(k, i, j);
                            worst = worst.max(r.abs());
                        }
                    }
                }
                worst
            };
            assert!(cyc_nf < 1e-10);
        }
    }

    #[test]
    fn nijenhuis_vanishes_for_constant_endomorphism() {
        let fr = flat_kahler_frame();
        assert!(nijenhuis_up(&fr).max_abs() < 1e-14);
    }

    #[test]
    fn nijenhuis_from_connection_matches_coordinate_form() {
        for seed in 0..8u64 {
            let fr = random_frame(3, seed);
            let mut r = sampling::rng(5000 + seed);
            let gamma = sampling::random_t3(3, &mut r, 0.8);
            let via_conn = nijenhuis_from_connection(&gamma, &fr);
            let direct = nijenhuis_low(&fr);
            assert!(via_conn.sub(&direct).max_abs() < 1e-10);
        }
    }

    #[test]
    fn skew_torsion_on_flat_kahler_is_zero() {
        let fr = flat_kahler_frame();
        let out = skew_torsion_connection(&fr).unwrap();
        assert!(out.condition_residual < 1e-13);
        assert!(out.torsion.max_abs() < 1e-13);
        assert!(out.skew_residual < 1e-13);
        assert!(out.nabla_g_residual < 1e-13);
        assert!(out.nabla_f_residual < 1e-13);
    }

    #[test]
    fn skew_torsion_rejects_degenerate_endomorphism() {
        let chart = Rc::new(Chart::standard(2));
        let g = TensorField::constant(chart.clone(), 2, 0, vec![1.0, 0.0, 0.0, 1.0], Some(Symmetry::Symmetric)).unwrap();
        let f = TensorField::constant(chart.clone(), 2, 0, vec![0.0; 4], Some(Symmetry::Skew)).unwrap();
        let gm = GeneralizedMetric::new(g, SkewPart::TwoForm(f)).unwrap();
        let fr = PointFrame::build(&gm, None, None, &[0.0, 0.0]).unwrap();
        assert!(matches!(skew_torsion_connection(&fr), Err(Error::DegenerateEndomorphism)));
    }

    #[test]
    fn eisenhart_torsion_is_df_and_nijenhuis_expression_holds() {
        for seed in 0..6u64 {
            let fr = random_frame(3, seed);
            let gamma = eisenhart_connection(&fr);
            assert!(lowered_torsion(&gamma, &fr).sub(&fr.df()).max_abs() < 1e-10);
            assert!(nabla_g(&gamma, &fr).max_abs() < 1e-11);
            assert!(nijenhuis_via_lc_f_residual(&fr) < 1e-10);
        }
    }

    #[test]
    fn eisenhart_matches_its_explicit_koszul_form() {
        // g(nabla_X Y, Z) = (1/2)[X G(Y,Z) + Y G(Z,X) - Z G(Y,X)].
        for seed in 0..4u64 {
            let fr = random_frame(3, seed);
            let low = lower_connection(&eisenhart_connection(&fr), &fr.g);
            let n = fr.n;
            let dgf = |m: usize, i: usize, j: usize| fr.dg.get(m, i, j) + fr.df2.get(m, i, j);
            let mut worst: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let rhs = 0.5 * (dgf(i, j, k) + dgf(j, k, i) - dgf(k, j, i));
                        worst = worst.max((low.get(i, j, k) - rhs).abs());
                    }
                }
            }
            assert!(worst < 1e-10);
        }
    }

    #[test]
    fn parallel_a_torsion_form_of_nijenhuis_matches_on_flat_kahler() {
        // With nabla A = 0 the Nijenhuis tensor is a pure torsion
        // expression; exercised with the Levi-Civita connection of the
        // flat Kaehler frame where everything vanishes identically.
        let fr = flat_kahler_frame();
        let out = skew_torsion_connection(&fr).unwrap();
        let via_t = nijenhuis_parallel_a(&out.torsion, &fr);
        assert!(via_t.sub(&nijenhuis_low(&fr)).max_abs() < 1e-13);
    }
}
