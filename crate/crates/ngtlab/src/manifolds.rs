//! Builtin manifolds: concrete charts with a generalized metric and,
//! for the odd-dimensional examples, the contact pair `(eta, xi)`.

use std::rc::Rc;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr;
use crate::jet::Jet;
use crate::tensor::{
    Chart, GeneralizedMetric, PointFrame, SkewPart, Symmetry, TensorField,
};

/// A named example: chart, generalized metric, optional contact pair.
pub struct Manifold {
    pub name: String,
    pub description: String,
    /// Suite the example is intended for: "hermitian", "para-hermitian",
    /// "contact", "paracontact" or "generic".
    pub suite_hint: String,
    pub metric: GeneralizedMetric,
    pub eta: Option<TensorField>,
    pub xi: Option<TensorField>,
}

impl std::fmt::Debug for Manifold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Manifold")
            .field("name", &self.name)
            .field("dim", &self.chart().dim())
            .field("suite_hint", &self.suite_hint)
            .finish_non_exhaustive()
    }
}

impl Manifold {
    pub fn chart(&self) -> &Rc<Chart> {
        &self.metric.chart
    }

    pub fn frame(&self, p: &[f64]) -> Result<PointFrame> {
        PointFrame::build(&self.metric, self.eta.as_ref(), self.xi.as_ref(), p)
    }
}

pub const BUILTIN_NAMES: [&str; 8] = [
    "flat-kahler-4",
    "s6-nearly-kahler",
    "nk-times-line",
    "contact-r3",
    "deformed-hermitian-r4",
    "almost-kahler-r4",
    "flat-para-kahler-4",
    "para-product-line",
];

pub fn builtin(name: &str) -> Result<Manifold> {
    match name {
        "flat-kahler-4" => Ok(flat_kahler_4()),
        "s6-nearly-kahler" => Ok(s6_nearly_kahler()),
        "nk-times-line" => Ok(nk_times_line()),
        "contact-r3" => Ok(contact_r3()),
        "deformed-hermitian-r4" => Ok(deformed_hermitian_r4()),
        "almost-kahler-r4" => Ok(almost_kahler_r4()),
        "flat-para-kahler-4" => Ok(flat_para_kahler_4()),
        "para-product-line" => Ok(para_product_line()),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

fn constant_endo(chart: &Rc<Chart>, a_cols: &[&[f64]]) -> TensorField {
    // a_cols[j] is the image A(e_j); components A^i_j.
    let n = chart.dim();
    let mut comps = vec![0.0; n * n];
    for (j, col) in a_cols.iter().enumerate() {
        for i in 0..n {
            comps[i * n + j] = col[i];
        }
    }
    TensorField::constant(chart.clone(), 1, 1, comps, None).expect("shape")
}

/// `R^4` with the flat metric and the constant parallel complex
/// structure: Kaehler, everything vanishes.
pub fn flat_kahler_4() -> Manifold {
    let chart = Rc::new(Chart::standard(4));
    let g = TensorField::constant(
        chart.clone(),
        2,
        0,
        identity_comps(4),
        Some(Symmetry::Symmetric),
    )
    .unwrap();
    // A e1 = e2, A e2 = -e1, A e3 = e4, A e4 = -e3.
    let a = constant_endo(
        &chart,
        &[
            &[0.0, 1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, -1.0, 0.0],
        ],
    );
    Manifold {
        name: "flat-kahler-4".to_string(),
        description: "flat Kaehler R^4: parallel complex structure, all residuals vanish".to_string(),
        suite_hint: "hermitian".to_string(),
        metric: GeneralizedMetric::new(g, SkewPart::Endomorphism(a)).unwrap(),
        eta: None,
        xi: None,
    }
}

/// `R^4` with neutral metric and a constant parallel product structure.
pub fn flat_para_kahler_4() -> Manifold {
    let chart = Rc::new(Chart::standard(4));
    let g = TensorField::constant(
        chart.clone(),
        2,
        0,
        diag_comps(&[1.0, -1.0, 1.0, -1.0]),
        Some(Symmetry::Symmetric),
    )
    .unwrap();
    // A swaps e1 <-> e2 and e3 <-> e4: A^2 = id, g(AX,AY) = -g(X,Y).
    let a = constant_endo(
        &chart,
        &[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ],
    );
    Manifold {
        name: "flat-para-kahler-4".to_string(),
        description: "flat para-Kaehler R^4: parallel product structure on a neutral metric".to_string(),
        suite_hint: "para-hermitian".to_string(),
        metric: GeneralizedMetric::new(g, SkewPart::Endomorphism(a)).unwrap(),
        eta: None,
        xi: None,
    }
}

// Multiplication triples of the 7-dimensional cross product
// (0-based): e_i x e_j = e_k cyclically for each triple.
const CROSS_TRIPLES: [(usize, usize, usize); 7] = [
    (0, 1, 2),
    (0, 3, 4),
    (0, 6, 5),
    (1, 3, 5),
    (1, 4, 6),
    (2, 3, 6),
    (2, 5, 4),
];

/// Round metric and cross-product almost complex structure of the
/// six-sphere in the stereographic chart `u in R^6`,
/// `p = (2u, 1 - |u|^2 ... ) / (1 + |u|^2)` into the unit sphere of
/// the imaginary octonions' 7-space. Components via first-order jets,
/// so derivatives are exact.
fn s6_g_a(u: &[Jet]) -> (Vec<Jet>, Vec<Jet>) {
    let dim = u[0].dim();
    let zero = || Jet::constant(0.0, dim);
    let mut d = Jet::constant(1.0, dim);
    for ui in u.iter().take(6) {
        d = d + ui * ui;
    }
    let d2 = &d * &d;
    let inv_d = d.recip();
    let inv_d2 = d2.recip();

    // g_ij = (4 / d^2) delta_ij
    let mut g = vec![zero(); 36];
    for i in 0..6 {
        g[i * 6 + i] = 4.0 * &inv_d2;
    }

    // Embedding p and its Jacobian J (7 x 6).
    let mut p = Vec::with_capacity(7);
    for ui in u.iter().take(6) {
        p.push(2.0 * ui * &inv_d);
    }
    p.push(2.0 * &inv_d + (-1.0) * Jet::constant(1.0, dim));
    let mut jac = vec![vec![zero(); 6]; 7];
    for (a, row) in jac.iter_mut().enumerate().take(6) {
        for (i, cell) in row.iter_mut().enumerate() {
            let mut v = (-4.0) * &u[a] * &u[i] * &inv_d2;
            if a == i {
                v = v + 2.0 * &inv_d;
            }
            *cell = v;
        }
    }
    for i in 0..6 {
        jac[6][i] = (-4.0) * &u[i] * &inv_d2;
    }

    // Cross-product matrix C v = p x v.
    let mut cp = vec![vec![zero(); 7]; 7];
    for &(i, j, k) in &CROSS_TRIPLES {
        for (b, c, a) in [(i, j, k), (j, k, i), (k, i, j)] {
            cp[a][c] = &cp[a][c] + &p[b];
            cp[a][b] = &cp[a][b] - &p[c];
        }
    }

    // A = (d^2/4) J^t C J: pull the sphere structure back through the
    // conformal chart (J^t J = (4/d^2) I).
    let mut cj = vec![vec![zero(); 6]; 7];
    for a in 0..7 {
        for j in 0..6 {
            let mut v = zero();
            for r in 0..7 {
                v = v + &cp[a][r] * &jac[r][j];
            }
            cj[a][j] = v;
        }
    }
    let quarter_d2 = 0.25 * &d2;
    let mut a_comp = vec![zero(); 36];
    for i in 0..6 {
        for j in 0..6 {
            let mut v = zero();
            for r in 0..7 {
                v = v + &jac[r][i] * &cj[r][j];
            }
            a_comp[i * 6 + j] = &quarter_d2 * &v;
        }
    }
    (g, a_comp)
}

/// The six-sphere with its round metric and nearly Kaehler cross
/// product structure, in a stereographic chart.
pub fn s6_nearly_kahler() -> Manifold {
    let chart = Rc::new(Chart::standard(6));
    let g = TensorField::analytic(
        chart.clone(),
        2,
        0,
        Arc::new(|u: &[Jet]| s6_g_a(u).0),
        Some(Symmetry::Symmetric),
    );
    let a = TensorField::analytic(chart.clone(), 1, 1, Arc::new(|u: &[Jet]| s6_g_a(u).1), None);
    Manifold {
        name: "s6-nearly-kahler".to_string(),
        description: "round S^6 with the octonionic cross-product structure (stereographic chart)".to_string(),
        suite_hint: "hermitian".to_string(),
        metric: GeneralizedMetric::new(g, SkewPart::Endomorphism(a)).unwrap(),
        eta: None,
        xi: None,
    }
}

/// Product of nearly Kaehler `S^6` with a line: the almost contact
/// structure `(g + dt^2, A + 0, eta = dt, xi = d/dt)`.
pub fn nk_times_line() -> Manifold {
    let chart = Rc::new(
        Chart::new(vec![
            "x1".into(),
            "x2".into(),
            "x3".into(),
            "x4".into(),
            "x5".into(),
            "x6".into(),
            "t".into(),
        ])
        .unwrap(),
    );
    let g = TensorField::analytic(
        chart.clone(),
        2,
        0,
        Arc::new(|j: &[Jet]| {
            let dim = j[0].dim();
            let (g6, _) = s6_g_a(&j[..6]);
            let mut g = vec![Jet::constant(0.0, dim); 49];
            for i in 0..6 {
                for k in 0..6 {
                    g[i * 7 + k] = g6[i * 6 + k].clone();
                }
            }
            g[6 * 7 + 6] = Jet::constant(1.0, dim);
            g
        }),
        Some(Symmetry::Symmetric),
    );
    let a = TensorField::analytic(
        chart.clone(),
        1,
        1,
        Arc::new(|j: &[Jet]| {
            let dim = j[0].dim();
            let (_, a6) = s6_g_a(&j[..6]);
            let mut a = vec![Jet::constant(0.0, dim); 49];
            for i in 0..6 {
                for k in 0..6 {
                    a[i * 7 + k] = a6[i * 6 + k].clone();
                }
            }
            a
        }),
        None,
    );
    let eta = TensorField::constant(
        chart.clone(),
        1,
        0,
        vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        None,
    )
    .unwrap();
    let xi = TensorField::constant(
        chart.clone(),
        0,
        1,
        vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        None,
    )
    .unwrap();
    Manifold {
        name: "nk-times-line".to_string(),
        description: "nearly Kaehler S^6 x R with eta = dt: almost contact with skew NGT torsion".to_string(),
        suite_hint: "contact".to_string(),
        metric: GeneralizedMetric::new(g, SkewPart::Endomorphism(a)).unwrap(),
        eta: Some(eta),
        xi: Some(xi),
    }
}

/// The standard contact metric structure on `R^3` with
/// `eta = (dz - x2 dx1)/2` and the associated metric: a contact
/// structure that carries no metric connection with skew torsion
/// preserving the structure.
pub fn contact_r3() -> Manifold {
    let chart = Rc::new(Chart::standard(3));
    let e = |s: &str| chart.parse_expr(s).unwrap();
    let g = TensorField::symbolic(
        chart.clone(),
        2,
        0,
        vec![
            e("(x2^2 + 1)/4"),
            expr::cnum(0.0),
            e("-x2/4"),
            expr::cnum(0.0),
            expr::cnum(0.25),
            expr::cnum(0.0),
            e("-x2/4"),
            expr::cnum(0.0),
            expr::cnum(0.25),
        ],
        Some(Symmetry::Symmetric),
    )
    .unwrap();
    // A e1 = e2, A e2 = -e1 - x2 e3, A e3 = 0.
    let a = TensorField::symbolic(
        chart.clone(),
        1,
        1,
        vec![
            expr::cnum(0.0),
            expr::cnum(-1.0),
            expr::cnum(0.0),
            expr::cnum(1.0),
            expr::cnum(0.0),
            expr::cnum(0.0),
            expr::cnum(0.0),
            e("-x2"),
            expr::cnum(0.0),
        ],
        None,
    )
    .unwrap();
    let eta = TensorField::symbolic(
        chart.clone(),
        1,
        0,
        vec![e("-x2/2"), expr::cnum(0.0), expr::cnum(0.5)],
        None,
    )
    .unwrap();
    let xi = TensorField::constant(chart.clone(), 0, 1, vec![0.0, 0.0, 2.0], None).unwrap();
    Manifold {
        name: "contact-r3".to_string(),
        description: "standard contact metric R^3 (Darboux form): rejected by the skew-torsion NGT condition".to_string(),
        suite_hint: "contact".to_string(),
        metric: GeneralizedMetric::new(g, SkewPart::Endomorphism(a)).unwrap(),
        eta: Some(eta),
        xi: Some(xi),
    }
}

/// Flat `R^4` with a rotating orthogonal complex structure
/// `A = R(x1) J0 R(x1)^{-1}` (rotation in the (2,4)-plane): almost
/// Hermitian with `dF != 0` and `N != 0`.
pub fn deformed_hermitian_r4() -> Manifold {
    let chart = Rc::new(Chart::standard(4));
    let e = |s: &str| chart.parse_expr(s).unwrap();
    let g = TensorField::constant(
        chart.clone(),
        2,
        0,
        identity_comps(4),
        Some(Symmetry::Symmetric),
    )
    .unwrap();
    // Columns: A e1 = c e2 + s e4, A e2 = -c e1 + s e3,
    //          A e3 = -s e2 + c e4, A e4 = -s e1 - c e3,
    // with c = cos(x1), s = sin(x1).
    let z = expr::cnum(0.0);
    let a = TensorField::symbolic(
        chart.clone(),
        1,
        1,
        vec![
            z.clone(), e("-cos(x1)"), z.clone(), e("-sin(x1)"),
            e("cos(x1)"), z.clone(), e("-sin(x1)"), z.clone(),
            z.clone(), e("sin(x1)"), z.clone(), e("-cos(x1)"),
            e("sin(x1)"), z.clone(), e("cos(x1)"), z,
        ],
        None,
    )
    .unwrap();
    Manifold {
        name: "deformed-hermitian-r4".to_string(),
        description: "flat R^4 with a coordinate-rotating complex structure: fails the nearly Kaehler and skew-torsion conditions".to_string(),
        suite_hint: "hermitian".to_string(),
        metric: GeneralizedMetric::new(g, SkewPart::Endomorphism(a)).unwrap(),
        eta: None,
        xi: None,
    }
}

/// Almost Kaehler, non-Kaehler `R^4`: the standard symplectic form
/// (closed) paired with a non-integrable compatible structure.
/// `g = diag(e^{x3}, e^{-x3}, 1, 1)`, `A e1 = e^{x3} e2`,
/// `A e2 = -e^{-x3} e1`, `A e3 = e4`, `A e4 = -e3`.
pub fn almost_kahler_r4() -> Manifold {
    let chart = Rc::new(Chart::standard(4));
    let e = |s: &str| chart.parse_expr(s).unwrap();
    let g = TensorField::symbolic(
        chart.clone(),
        2,
        0,
        vec![
            e("exp(x3)"), expr::cnum(0.0), expr::cnum(0.0), expr::cnum(0.0),
            expr::cnum(0.0), e("exp(-x3)"), expr::cnum(0.0), expr::cnum(0.0),
            expr::cnum(0.0), expr::cnum(0.0), expr::cnum(1.0), expr::cnum(0.0),
            expr::cnum(0.0), expr::cnum(0.0), expr::cnum(0.0), expr::cnum(1.0),
        ],
        Some(Symmetry::Symmetric),
    )
    .unwrap();
    let z = expr::cnum(0.0);
    let a = TensorField::symbolic(
        chart.clone(),
        1,
        1,
        vec![
            z.clone(), e("-exp(-x3)"), z.clone(), z.clone(),
            e("exp(x3)"), z.clone(), z.clone(), z.clone(),
            z.clone(), z.clone(), z.clone(), e("-1"),
            z.clone(), z.clone(), e("1"), z,
        ],
        None,
    )
    .unwrap();
    Manifold {
        name: "almost-kahler-r4".to_string(),
        description: "almost Kaehler R^4: closed fundamental form, non-vanishing Nijenhuis tensor".to_string(),
        suite_hint: "hermitian".to_string(),
        metric: GeneralizedMetric::new(g, SkewPart::Endomorphism(a)).unwrap(),
        eta: None,
        xi: None,
    }
}

/// Flat para-Kaehler plane times a line with `eta = dt`: the
/// paracontact example where every structure tensor is parallel.
pub fn para_product_line() -> Manifold {
    let chart = Rc::new(Chart::new(vec!["x1".into(), "x2".into(), "t".into()]).unwrap());
    let g = TensorField::constant(
        chart.clone(),
        2,
        0,
        diag_comps(&[1.0, -1.0, 1.0]),
        Some(Symmetry::Symmetric),
    )
    .unwrap();
    // A e1 = e2, A e2 = e1, A xi = 0.
    let a = constant_endo(
        &chart,
        &[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]],
    );
    let eta = TensorField::constant(chart.clone(), 1, 0, vec![0.0, 0.0, 1.0], None).unwrap();
    let xi = TensorField::constant(chart.clone(), 0, 1, vec![0.0, 0.0, 1.0], None).unwrap();
    Manifold {
        name: "para-product-line".to_string(),
        description: "flat para-Kaehler R^2 x R line: parallel almost paracontact structure".to_string(),
        suite_hint: "paracontact".to_string(),
        metric: GeneralizedMetric::new(g, SkewPart::Endomorphism(a)).unwrap(),
        eta: Some(eta),
        xi: Some(xi),
    }
}

fn identity_comps(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    v
}

fn diag_comps(d: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = d[i];
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;
    use crate::sampling;
    use crate::tensor::Mat;

    fn points(m: &Manifold, count: usize, seed: u64) -> Vec<Vec<f64>> {
        sampling::sample_points(&m.chart().sample_box(), count, seed)
    }

    #[test]
    fn all_builtins_resolve_and_evaluate() {
        for name in BUILTIN_NAMES {
            let m = builtin(name).unwrap();
            assert_eq!(m.name, name);
            for p in points(&m, 3, 7) {
                m.frame(&p).unwrap();
            }
        }
        assert!(matches!(builtin("nope"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn s6_structure_invariants() {
        let m = s6_nearly_kahler();
        for p in points(&m, 10, 11) {
            let fr = m.frame(&p).unwrap();
            // A^2 = -I
            let a2 = fr.a.matmul(&fr.a);
            assert!(a2.add(&Mat::identity(6)).max_abs() < 1e-12);
            // Compatibility g(AX, AY) = g(X, Y).
            let mut worst: f64 = 0.0;
            for i in 0..6 {
                for j in 0..6 {
                    let mut v = -fr.g.get(i, j);
                    for r in 0..6 {
                        for s in 0..6 {
                            v += fr.a.get(r, i) * fr.a.get(s, j) * fr.g.get(r, s);
                        }
                    }
                    worst = worst.max(v.abs());
                }
            }
            assert!(worst < 1e-12);
            // F skew.
            assert!(fr.f2.add(&fr.f2.transpose()).max_abs() < 1e-12);
        }
    }

    #[test]
    fn s6_is_nearly_kahler_but_not_kahler() {
        let m = s6_nearly_kahler();
        for p in points(&m, 5, 13) {
            let fr = m.frame(&p).unwrap();
            let lc = geometry::levi_civita(&fr);
            let na = geometry::nabla_a(&lc, &fr);
            // (nabla^g_X A) X = 0: symmetric part in (direction, argument).
            let mut sym: f64 = 0.0;
            let mut total: f64 = 0.0;
            for mdir in 0..6 {
                for k in 0..6 {
                    for j in 0..6 {
                        sym = sym.max((na.get(mdir, k, j) + na.get(j, k, mdir)).abs());
                        total = total.max(na.get(mdir, k, j).abs());
                    }
                }
            }
            assert!(sym < 1e-10, "nearly Kaehler defect {sym}");
            assert!(total > 1e-3, "S^6 must not be Kaehler");
        }
    }

    #[test]
    fn contact_r3_satisfies_contact_identities() {
        let m = contact_r3();
        for p in points(&m, 10, 17) {
            let fr = m.frame(&p).unwrap();
            let eta = fr.eta.as_ref().unwrap();
            let xi = fr.xi.as_ref().unwrap();
            // eta(xi) = 1
            let pairing: f64 = eta.iter().zip(xi).map(|(a, b)| a * b).sum();
            assert!((pairing - 1.0).abs() < 1e-12);
            // A xi = 0 and eta o A = 0
            for i in 0..3 {
                let axi: f64 = (0..3).map(|j| fr.a.get(i, j) * xi[j]).sum();
                assert!(axi.abs() < 1e-12);
                let etaa: f64 = (0..3).map(|j| eta[j] * fr.a.get(j, i)).sum();
                assert!(etaa.abs() < 1e-12);
            }
            // A^2 = -I + eta (x) xi
            for i in 0..3 {
                for j in 0..3 {
                    let a2: f64 = (0..3).map(|k| fr.a.get(i, k) * fr.a.get(k, j)).sum();
                    let expect = -((i == j) as i32 as f64) + xi[i] * eta[j];
                    assert!((a2 - expect).abs() < 1e-12);
                }
            }
            // g(AX, AY) = g(X,Y) - eta(X) eta(Y)
            for i in 0..3 {
                for j in 0..3 {
                    let mut v = -fr.g.get(i, j) + eta[i] * eta[j];
                    for r in 0..3 {
                        for s in 0..3 {
                            v += fr.a.get(r, i) * fr.a.get(s, j) * fr.g.get(r, s);
                        }
                    }
                    assert!(v.abs() < 1e-12);
                }
            }
            // d eta = 2 F restricted? At least: d eta(X, xi) = 0.
            let de = fr.deta_form().unwrap();
            for i in 0..3 {
                let v: f64 = (0..3).map(|j| de.get(i, j) * xi[j]).sum();
                assert!(v.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn para_product_line_structure() {
        let m = para_product_line();
        let fr = m.frame(&[0.4, -0.7, 0.2]).unwrap();
        let eta = fr.eta.as_ref().unwrap();
        let xi = fr.xi.as_ref().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let a2: f64 = (0..3).map(|k| fr.a.get(i, k) * fr.a.get(k, j)).sum();
                let expect = ((i == j) as i32 as f64) - xi[i] * eta[j];
                assert!((a2 - expect).abs() < 1e-14);
                let mut v = fr.g.get(i, j) - eta[i] * eta[j];
                for r in 0..3 {
                    for s in 0..3 {
                        v += fr.a.get(r, i) * fr.a.get(s, j) * fr.g.get(r, s);
                    }
                }
                assert!(v.abs() < 1e-14);
            }
        }
        assert!(fr.df().max_abs() < 1e-14);
    }

    #[test]
    fn almost_kahler_r4_closed_form_nonzero_nijenhuis() {
        let m = almost_kahler_r4();
        for p in points(&m, 5, 19) {
            let fr = m.frame(&p).unwrap();
            // F is the constant symplectic form, hence closed.
            assert!((fr.f2.get(0, 1) - 1.0).abs() < 1e-12);
            assert!((fr.f2.get(2, 3) - 1.0).abs() < 1e-12);
            assert!(fr.df().max_abs() < 1e-12);
            let a2 = fr.a.matmul(&fr.a);
            assert!(a2.add(&Mat::identity(4)).max_abs() < 1e-12);
            assert!(geometry::nijenhuis_up(&fr).max_abs() > 0.5);
        }
    }

    #[test]
    fn deformed_hermitian_r4_has_df_and_nijenhuis() {
        let m = deformed_hermitian_r4();
        let fr = m.frame(&[0.3, 0.1, -0.2, 0.5]).unwrap();
        let a2 = fr.a.matmul(&fr.a);
        assert!(a2.add(&Mat::identity(4)).max_abs() < 1e-12);
        assert!(fr.df().max_abs() > 0.1);
        assert!(geometry::nijenhuis_up(&fr).max_abs() > 0.1);
    }

    #[test]
    fn nk_times_line_contact_invariants() {
        let m = nk_times_line();
        for p in points(&m, 4, 23) {
            let fr = m.frame(&p).unwrap();
            let eta = fr.eta.as_ref().unwrap();
            let xi = fr.xi.as_ref().unwrap();
            let pairing: f64 = eta.iter().zip(xi).map(|(a, b)| a * b).sum();
            assert!((pairing - 1.0).abs() < 1e-12);
            for i in 0..7 {
                for j in 0..7 {
                    let a2: f64 = (0..7).map(|k| fr.a.get(i, k) * fr.a.get(k, j)).sum();
                    let expect = -((i == j) as i32 as f64) + xi[i] * eta[j];
                    assert!((a2 - expect).abs() < 1e-11);
                }
            }
        }
    }
}
