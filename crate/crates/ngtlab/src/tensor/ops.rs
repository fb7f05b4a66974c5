//! Primitive differential operators on evaluated component arrays.
//!
//! Index convention, fixed once and used everywhere:
//! `(nabla_X Y)^k = X^i d_i Y^k + Gamma^k_{ij} X^i Y^j`, so the
//! connection array is `gamma.get(k, i, j) = Gamma^k_{ij}` with the
//! differentiation direction in the first lower slot, and the torsion
//! is `T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji}`.
//!
//! Exterior derivatives use the cyclic-sum normalization without
//! factorial factors.

use crate::error::{Error, Result};
use crate::expr;
use crate::tensor::{GeneralizedMetric, Mat, SkewPart, Symmetry, TensorField, T3};

/// Splits a (0,2) field into symmetric and skew parts:
/// `g = (G + G^t)/2`, `F = (G - G^t)/2`.
///
/// Symbolic inputs produce symbolic outputs; the derived parts
/// reproduce `G = g + F` exactly componentwise.
pub fn decompose(g_field: &TensorField, probes: &[Vec<f64>]) -> Result<GeneralizedMetric> {
    if g_field.valence() != (2, 0) {
        return Err(Error::Shape("decompose expects a (0,2) field".into()));
    }
    let chart = g_field.chart().clone();
    let n = chart.dim();
    let (sym, skew) = if g_field.is_symbolic() {
        // Rebuild from component expressions so the halves stay symbolic.
        let ev_exprs: Vec<expr::Expr> = g_field.component_exprs().expect("symbolic field");
        let half = expr::cnum(0.5);
        let mut s = Vec::with_capacity(n * n);
        let mut k = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let a = ev_exprs[i * n + j].clone();
                let b = ev_exprs[j * n + i].clone();
                s.push(expr::mul(half.clone(), expr::add(a.clone(), b.clone())));
                k.push(expr::mul(half.clone(), expr::sub(a, b)));
            }
        }
        (
            TensorField::symbolic(chart.clone(), 2, 0, s, Some(Symmetry::Symmetric))?,
            TensorField::symbolic(chart.clone(), 2, 0, k, Some(Symmetry::Skew))?,
        )
    } else {
        return Err(Error::Shape(
            "decompose currently expects an expression-backed field".into(),
        ));
    };
    let gm = GeneralizedMetric::new(sym, SkewPart::TwoForm(skew))?;
    // Reject a degenerate symmetric part early.
    for p in probes {
        crate::tensor::PointFrame::build(&gm, None, None, p)?;
    }
    Ok(gm)
}

/// Endomorphism of `F(X,Y) = g(AX,Y)`: `A = -g^{-1} F` for skew `F`.
pub fn recover_a(g_inv: &Mat, f2: &Mat) -> Mat {
    g_inv.matmul(f2).scale(-1.0)
}

/// `dF_{ijk} = d_i F_{jk} + d_j F_{ki} + d_k F_{ij}` from the partials
/// array `df2.get(m, i, j) = d_m F_{ij}`.
pub fn exterior_derivative2(df2: &T3) -> T3 {
    let n = df2.dim();
    T3::from_fn(n, |i, j, k| df2.get(i, j, k) + df2.get(j, k, i) + df2.get(k, i, j))
}

/// `(d eta)_{ij} = d_i eta_j - d_j eta_i` from `deta.get(m, j) = d_m eta_j`.
pub fn exterior_derivative1(deta: &Mat) -> Mat {
    let n = deta.dim();
    Mat::from_fn(n, |i, j| deta.get(i, j) - deta.get(j, i))
}

/// Covariant derivative of a (0,2) tensor:
/// `(nabla_m S)_{ij} = d_m S_{ij} - Gamma^p_{mi} S_{pj} - Gamma^p_{mj} S_{ip}`.
/// Result layout: `(m, i, j)`.
pub fn covariant_derivative_02(gamma: &T3, s: &Mat, ds: &T3) -> T3 {
    let n = gamma.dim();
    T3::from_fn(n, |m, i, j| {
        let mut v = ds.get(m, i, j);
        for p in 0..n {
            v -= gamma.get(p, m, i) * s.get(p, j);
            v -= gamma.get(p, m, j) * s.get(i, p);
        }
        v
    })
}

/// Covariant derivative of a (1,1) tensor:
/// `(nabla_m A)^i_j = d_m A^i_j + Gamma^i_{mp} A^p_j - Gamma^p_{mj} A^i_p`.
pub fn covariant_derivative_11(gamma: &T3, a: &Mat, da: &T3) -> T3 {
    let n = gamma.dim();
    T3::from_fn(n, |m, i, j| {
        let mut v = da.get(m, i, j);
        for p in 0..n {
            v += gamma.get(i, m, p) * a.get(p, j);
            v -= gamma.get(p, m, j) * a.get(i, p);
        }
        v
    })
}

/// Covariant derivative of a (0,1) tensor:
/// `(nabla_m eta)_j = d_m eta_j - Gamma^p_{mj} eta_p`.
pub fn covariant_derivative_01(gamma: &T3, eta: &[f64], deta: &Mat) -> Mat {
    let n = gamma.dim();
    Mat::from_fn(n, |m, j| {
        let mut v = deta.get(m, j);
        for p in 0..n {
            v -= gamma.get(p, m, j) * eta[p];
        }
        v
    })
}

/// Covariant derivative of a (1,0) tensor:
/// `(nabla_m xi)^k = d_m xi^k + Gamma^k_{mp} xi^p`.
pub fn covariant_derivative_10(gamma: &T3, xi: &[f64], dxi: &Mat) -> Mat {
    let n = gamma.dim();
    Mat::from_fn(n, |m, k| {
        let mut v = dxi.get(m, k);
        for p in 0..n {
            v += gamma.get(k, m, p) * xi[p];
        }
        v
    })
}

/// Torsion of a connection: `T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji}`,
/// returned in layout `(k, i, j)`.
pub fn torsion_of(gamma: &T3) -> T3 {
    let n = gamma.dim();
    T3::from_fn(n, |k, i, j| gamma.get(k, i, j) - gamma.get(k, j, i))
}

/// Lowers the contravariant index of a (1,2) array `t.get(k, i, j)`
/// with `g`, producing `T_{ijk} = g_{km} T^m_{ij}` in layout `(i, j, k)`.
pub fn lower_torsion(t_up: &T3, g: &Mat) -> T3 {
    let n = t_up.dim();
    T3::from_fn(n, |i, j, k| (0..n).map(|m| g.get(k, m) * t_up.get(m, i, j)).sum())
}

/// Raises the last index of a lowered connection/torsion array
/// `low.get(i, j, k)` (= `g(slot_k)`) into layout `(k, i, j)`.
pub fn raise_last(low: &T3, g_inv: &Mat) -> T3 {
    let n = low.dim();
    T3::from_fn(n, |k, i, j| (0..n).map(|m| g_inv.get(k, m) * low.get(i, j, m)).sum())
}

/// Lowers a (1,2) array in layout `(k, i, j)` by contracting `k` with
/// `g`, same as [`lower_torsion`].
pub fn lower_12(t_up: &T3, g: &Mat) -> T3 {
    lower_torsion(t_up, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{Chart, PointFrame};
    use std::rc::Rc;

    #[test]
    fn exterior_derivative_of_constant_two_form_vanishes() {
        let df2 = T3::zeros(3);
        assert_eq!(exterior_derivative2(&df2).max_abs(), 0.0);
    }

    #[test]
    fn exterior_derivative_cyclic_sum_hand_check() {
        // F_12 = x3 on R^3: dF_123 = d3 F_12 = 1 and cyclic sum gives 1.
        let mut df2 = T3::zeros(3);
        df2.set(2, 0, 1, 1.0);
        df2.set(2, 1, 0, -1.0);
        let df = exterior_derivative2(&df2);
        assert_eq!(df.get(0, 1, 2), 1.0);
        assert_eq!(df.total_skew_residual(), 0.0);
    }

    #[test]
    fn exterior_derivative_one_form_hand_check() {
        // eta_1 = -x2 on R^3: d eta_{12} = d1 eta_2 - d2 eta_1 = 1.
        let mut deta = Mat::zeros(3);
        deta.set(1, 0, -1.0);
        let de = exterior_derivative1(&deta);
        assert_eq!(de.get(0, 1), 1.0);
        assert_eq!(de.get(1, 0), -1.0);
    }

    #[test]
    fn zero_connection_constant_tensor_has_zero_derivative() {
        let gamma = T3::zeros(2);
        let s = Mat::identity(2);
        let ds = T3::zeros(2);
        assert_eq!(covariant_derivative_02(&gamma, &s, &ds).max_abs(), 0.0);
    }

    #[test]
    fn symmetric_connection_has_zero_torsion() {
        let gamma = T3::from_fn(3, |k, i, j| (k + 1) as f64 * ((i * j) as f64 + 0.5 * (i + j) as f64));
        assert_eq!(torsion_of(&gamma).max_abs(), 0.0);
    }

    #[test]
    fn raise_lower_round_trip() {
        let chart = Rc::new(Chart::standard(3));
        let g = TensorField::symbolic(
            chart.clone(),
            2,
            0,
            vec![
                chart.parse_expr("2 + x1^2").unwrap(),
                expr::cnum(0.1),
                expr::cnum(0.0),
                expr::cnum(0.1),
                chart.parse_expr("1 + x2^2").unwrap(),
                expr::cnum(0.0),
                expr::cnum(0.0),
                expr::cnum(0.0),
                expr::cnum(3.0),
            ],
            Some(Symmetry::Symmetric),
        )
        .unwrap();
        let f = TensorField::constant(
            chart.clone(),
            2,
            0,
            vec![0.0, 0.3, 0.0, -0.3, 0.0, 0.0, 0.0, 0.0, 0.0],
            Some(Symmetry::Skew),
        )
        .unwrap();
        let gm = GeneralizedMetric::new(g, SkewPart::TwoForm(f)).unwrap();
        let fr = PointFrame::build(&gm, None, None, &[0.4, -0.2, 0.9]).unwrap();
        let low = T3::from_fn(3, |i, j, k| (i as f64) - 0.5 * (j as f64) + 0.25 * (k as f64) * (i as f64));
        let up = raise_last(&low, &fr.g_inv);
        let back = lower_torsion(&up, &fr.g);
        assert!(back.sub(&low).max_abs() < 1e-11);
    }

    #[test]
    fn decompose_identity_and_constant_case() {
        let chart = Rc::new(Chart::standard(2));
        let g_comps = vec![
            expr::cnum(1.0),
            expr::cnum(1.0),
            expr::cnum(-1.0),
            expr::cnum(1.0),
        ];
        let big_g = TensorField::symbolic(chart.clone(), 2, 0, g_comps, None).unwrap();
        let gm = decompose(&big_g, &[vec![0.0, 0.0]]).unwrap();
        let fr = PointFrame::build(&gm, None, None, &[0.3, 0.7]).unwrap();
        assert!(fr.g.sub(&Mat::identity(2)).max_abs() < 1e-15);
        assert!((fr.f2.get(0, 1) - 1.0).abs() < 1e-15);
        assert!((fr.f2.get(1, 0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn decompose_rejects_singular_symmetric_part() {
        let chart = Rc::new(Chart::standard(2));
        // G = [[0, 1], [-1, 0]]: symmetric part vanishes.
        let big_g = TensorField::symbolic(
            chart.clone(),
            2,
            0,
            vec![expr::cnum(0.0), expr::cnum(1.0), expr::cnum(-1.0), expr::cnum(0.0)],
            None,
        )
        .unwrap();
        assert!(decompose(&big_g, &[vec![0.0, 0.0]]).is_err());
    }
}
