//! Charts, points, tensor fields and the pointwise evaluation frame.
//!
//! A [`TensorField`] holds per-component scalar fields with one of three
//! derivative backends: exact symbolic (expression ASTs), exact analytic
//! (jet-valued closures), or central finite differences. All geometric
//! computation happens on a [`PointFrame`], the component arrays and
//! first partials of every field evaluated at a single point.

pub mod linalg;
pub mod ops;

use std::rc::Rc;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::jet::{self, Jet};

pub use linalg::{Mat, T3};

/// A coordinate patch: dimension, ordered coordinate names, optional
/// box domain per coordinate.
#[derive(Debug, Clone)]
pub struct Chart {
    coords: Vec<String>,
    domain: Option<Vec<(f64, f64)>>,
}

impl Chart {
    pub fn new(coords: Vec<String>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Shape("chart dimension must be at least 1".into()));
        }
        for (i, a) in coords.iter().enumerate() {
            if coords[i + 1..].contains(a) {
                return Err(Error::Shape(format!("duplicate coordinate name `{a}`")));
            }
        }
        Ok(Chart { coords, domain: None })
    }

    /// Chart with coordinates `x1..xn`.
    pub fn standard(n: usize) -> Self {
        Chart::new((1..=n).map(|i| format!("x{i}")).collect()).expect("n >= 1")
    }

    pub fn with_domain(mut self, bounds: Vec<(f64, f64)>) -> Self {
        assert_eq!(bounds.len(), self.dim());
        self.domain = Some(bounds);
        self
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    /// Sampling box: the declared domain, or `[-1, 1]^n`.
    pub fn sample_box(&self) -> Vec<(f64, f64)> {
        self.domain.clone().unwrap_or_else(|| vec![(-1.0, 1.0); self.dim()])
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && match &self.domain {
                None => true,
                Some(b) => p.iter().zip(b).all(|(x, (lo, hi))| *x >= *lo && *x <= *hi),
            }
    }

    pub fn parse_expr(&self, text: &str) -> Result<Expr> {
        Ok(expr::parse(text, &self.coords)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
}

pub type AnalyticFn = Arc<dyn Fn(&[Jet]) -> Vec<Jet> + Send + Sync>;
pub type PlainFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
enum Backend {
    Symbolic {
        comps: Vec<Expr>,
        /// derivs[c][m] = d comp_c / d x_m
        derivs: Vec<Vec<Expr>>,
    },
    Analytic(AnalyticFn),
    FiniteDiff { f: PlainFn, step: f64 },
}

/// A rank-typed field of components over a chart.
#[derive(Clone)]
pub struct TensorField {
    chart: Rc<Chart>,
    cov: usize,
    con: usize,
    symmetry: Option<Symmetry>,
    backend: Backend,
}

/// Component values plus first partials at a point.
/// `partials[m * len + c]` is the `m`-th partial of component `c`.
pub struct FieldEval {
    pub comps: Vec<f64>,
    pub partials: Vec<f64>,
}

impl TensorField {
    pub fn symbolic(
        chart: Rc<Chart>,
        cov: usize,
        con: usize,
        comps: Vec<Expr>,
        symmetry: Option<Symmetry>,
    ) -> Result<Self> {
        let n = chart.dim();
        let expected = n.pow((cov + con) as u32);
        if comps.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} components for valence ({cov},{con}) in dimension {n}, got {}",
                comps.len()
            )));
        }
        let derivs = comps
            .iter()
            .map(|e| (0..n).map(|m| e.differentiate(m)).collect())
            .collect();
        Ok(TensorField { chart, cov, con, symmetry, backend: Backend::Symbolic { comps, derivs } })
    }

    pub fn analytic(
        chart: Rc<Chart>,
        cov: usize,
        con: usize,
        f: AnalyticFn,
        symmetry: Option<Symmetry>,
    ) -> Self {
        TensorField { chart, cov, con, symmetry, backend: Backend::Analytic(f) }
    }

    pub fn finite_diff(
        chart: Rc<Chart>,
        cov: usize,
        con: usize,
        f: PlainFn,
        step: f64,
        symmetry: Option<Symmetry>,
    ) -> Self {
        TensorField { chart, cov, con, symmetry, backend: Backend::FiniteDiff { f, step } }
    }

    /// Constant-component field.
    pub fn constant(chart: Rc<Chart>, cov: usize, con: usize, comps: Vec<f64>, symmetry: Option<Symmetry>) -> Result<Self> {
        let exprs = comps.into_iter().map(expr::cnum).collect();
        TensorField::symbolic(chart, cov, con, exprs, symmetry)
    }

    pub fn chart(&self) -> &Rc<Chart> {
        &self.chart
    }

    pub fn valence(&self) -> (usize, usize) {
        (self.cov, self.con)
    }

    pub fn symmetry(&self) -> Option<Symmetry> {
        self.symmetry
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.backend, Backend::Symbolic { .. })
    }

    /// Component ASTs for symbolic fields.
    pub fn component_exprs(&self) -> Option<Vec<Expr>> {
        match &self.backend {
            Backend::Symbolic { comps, .. } => Some(comps.clone()),
            _ => None,
        }
    }

    pub fn is_finite_diff(&self) -> bool {
        matches!(self.backend, Backend::FiniteDiff { .. })
    }

    pub fn len(&self) -> usize {
        self.chart.dim().pow((self.cov + self.con) as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval(&self, p: &[f64]) -> Result<FieldEval> {
        let n = self.chart.dim();
        if p.len() != n {
            return Err(Error::Shape(format!("point has {} coordinates, chart has {n}", p.len())));
        }
        let len = self.len();
        match &self.backend {
            Backend::Symbolic { comps, derivs } => {
                let mut out = FieldEval { comps: Vec::with_capacity(len), partials: vec![0.0; n * len] };
                for e in comps {
                    out.comps.push(e.evaluate(p)?);
                }
                for (c, ds) in derivs.iter().enumerate() {
                    for (m, d) in ds.iter().enumerate() {
                        out.partials[m * len + c] = d.evaluate(p)?;
                    }
                }
                Ok(out)
            }
            Backend::Analytic(f) => {
                let jets = f(&jet::seed(p));
                if jets.len() != len {
                    return Err(Error::Shape(format!(
                        "analytic backend returned {} components, expected {len}",
                        jets.len()
                    )));
                }
                let mut out = FieldEval { comps: Vec::with_capacity(len), partials: vec![0.0; n * len] };
                for (c, j) in jets.iter().enumerate() {
                    if !j.val.is_finite() {
                        return Err(Error::Eval(crate::expr::EvalError {
                            node: format!("analytic component {c}"),
                            message: "non-finite value".into(),
                        }));
                    }
                    out.comps.push(j.val);
                    for m in 0..n {
                        out.partials[m * len + c] = j.grad[m];
                    }
                }
                Ok(out)
            }
            Backend::FiniteDiff { f, step } => {
                let comps = f(p);
                if comps.len() != len {
                    return Err(Error::Shape("finite-difference backend component count mismatch".into()));
                }
                let mut partials = vec![0.0; n * len];
                for m in 0..n {
                    let h = step * p[m].abs().max(1.0);
                    let mut hi = p.to_vec();
                    let mut lo = p.to_vec();
                    hi[m] += h;
                    lo[m] -= h;
                    let vh = f(&hi);
                    let vl = f(&lo);
                    for c in 0..len {
                        partials[m * len + c] = (vh[c] - vl[c]) / (2.0 * h);
                    }
                }
                Ok(FieldEval { comps, partials })
            }
        }
    }

    /// Checks the declared rank-2 symmetry of evaluated components.
    pub fn symmetry_residual(&self, comps: &[f64]) -> f64 {
        let n = self.chart.dim();
        let Some(sym) = self.symmetry else { return 0.0 };
        if self.cov + self.con != 2 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (comps[i * n + j], comps[j * n + i]);
                worst = worst.max(match sym {
                    Symmetry::Symmetric => (a - b).abs(),
                    Symmetry::Skew => (a + b).abs(),
                });
            }
        }
        worst
    }
}

/// The skew data of a generalized metric: either the two-form `F` or
/// the endomorphism `A`; the other is derived through `g`.
#[derive(Clone)]
pub enum SkewPart {
    TwoForm(TensorField),
    Endomorphism(TensorField),
}

/// The pair `(g, F)` with `G = g + F` and the derived endomorphism `A`
/// satisfying `F(X,Y) = g(AX,Y)`.
#[derive(Clone)]
pub struct GeneralizedMetric {
    pub chart: Rc<Chart>,
    pub g: TensorField,
    pub skew: SkewPart,
}

impl GeneralizedMetric {
    pub fn new(g: TensorField, skew: SkewPart) -> Result<Self> {
        let chart = g.chart().clone();
        if g.valence() != (2, 0) {
            return Err(Error::Shape("g must have valence (0,2)".into()));
        }
        match &skew {
            SkewPart::TwoForm(f) if f.valence() != (2, 0) => {
                return Err(Error::Shape("F must have valence (0,2)".into()))
            }
            SkewPart::Endomorphism(a) if a.valence() != (1, 1) => {
                return Err(Error::Shape("A must have valence (1,1)".into()))
            }
            _ => {}
        }
        Ok(GeneralizedMetric { chart, g, skew })
    }

    /// Whether every backing field is symbolic or analytic (exact
    /// derivatives), as opposed to finite differences.
    pub fn is_exact(&self) -> bool {
        let skew_fd = match &self.skew {
            SkewPart::TwoForm(f) => f.is_finite_diff(),
            SkewPart::Endomorphism(a) => a.is_finite_diff(),
        };
        !self.g.is_finite_diff() && !skew_fd
    }
}

/// Evaluated component arrays and first partials at a point.
///
/// Derivative-direction-first layout throughout: `dg.get(m, i, j)` is
/// the `m`-th partial of `g_ij`, `da.get(m, i, j)` of `A^i_j`.
#[derive(Debug, Clone)]
pub struct PointFrame {
    pub n: usize,
    pub point: Vec<f64>,
    pub g: Mat,
    pub g_inv: Mat,
    pub dg: T3,
    pub f2: Mat,
    pub df2: T3,
    pub a: Mat,
    pub da: T3,
    pub eta: Option<Vec<f64>>,
    pub deta: Option<Mat>,
    pub xi: Option<Vec<f64>>,
    pub dxi: Option<Mat>,
}

fn rank2_from_eval(n: usize, ev: &FieldEval) -> (Mat, T3) {
    let len = n * n;
    let m = Mat::from_fn(n, |i, j| ev.comps[i * n + j]);
    let d = T3::from_fn(n, |p, i, j| ev.partials[p * len + i * n + j]);
    (m, d)
}

impl PointFrame {
    pub fn build(
        metric: &GeneralizedMetric,
        eta: Option<&TensorField>,
        xi: Option<&TensorField>,
        p: &[f64],
    ) -> Result<Self> {
        let n = metric.chart.dim();
        let g_ev = metric.g.eval(p)?;
        let (g, dg) = rank2_from_eval(n, &g_ev);
        let g_inv = g.invert().map_err(|e| match e {
            Error::SingularMetric { detail } => Error::SingularMetric {
                detail: format!("symmetric part g is degenerate at {p:?}: {detail}"),
            },
            other => other,
        })?;

        let (f2, df2, a, da) = match &metric.skew {
            SkewPart::TwoForm(f_field) => {
                let f_ev = f_field.eval(p)?;
                let (f2, df2) = rank2_from_eval(n, &f_ev);
                // F(X,Y) = g(AX,Y) reads F = A^t g, so A = -g^-1 F
                // for skew F.
                let a = g_inv.matmul(&f2).scale(-1.0);
                // dA = -[d(g^-1) F + g^-1 dF], with d(g^-1) = -g^-1 dg g^-1
                let da = T3::from_fn(n, |m, i, j| {
                    let mut v = 0.0;
                    for k in 0..n {
                        let mut dginv_ik = 0.0;
                        for r in 0..n {
                            for s in 0..n {
                                dginv_ik -= g_inv.get(i, r) * dg.get(m, r, s) * g_inv.get(s, k);
                            }
                        }
                        v += dginv_ik * f2.get(k, j) + g_inv.get(i, k) * df2.get(m, k, j);
                    }
                    -v
                });
                (f2, df2, a, da)
            }
            SkewPart::Endomorphism(a_field) => {
                let a_ev = a_field.eval(p)?;
                let (a, da) = rank2_from_eval(n, &a_ev);
                // F_ij = g(A e_i, e_j) = A^k_i g_kj
                let f2 = Mat::from_fn(n, |i, j| (0..n).map(|k| a.get(k, i) * g.get(k, j)).sum());
                let df2 = T3::from_fn(n, |m, i, j| {
                    (0..n)
                        .map(|k| da.get(m, k, i) * g.get(k, j) + a.get(k, i) * dg.get(m, k, j))
                        .sum()
                });
                (f2, df2, a, da)
            }
        };

        let (eta_v, deta) = match eta {
            Some(field) => {
                let ev = field.eval(p)?;
                let d = Mat::from_fn(n, |m, j| ev.partials[m * n + j]);
                (Some(ev.comps), Some(d))
            }
            None => (None, None),
        };
        let (xi_v, dxi) = match xi {
            Some(field) => {
                let ev = field.eval(p)?;
                let d = Mat::from_fn(n, |m, k| ev.partials[m * n + k]);
                (Some(ev.comps), Some(d))
            }
            None => (None, None),
        };

        Ok(PointFrame {
            n,
            point: p.to_vec(),
            g,
            g_inv,
            dg,
            f2,
            df2,
            a,
            da,
            eta: eta_v,
            deta,
            xi: xi_v,
            dxi,
        })
    }

    /// Exterior derivative of `F`: `dF_{ijk} = d_i F_{jk} + d_j F_{ki} + d_k F_{ij}`.
    pub fn df(&self) -> T3 {
        ops::exterior_derivative2(&self.df2)
    }

    /// Exterior derivative of `eta` if present.
    pub fn deta_form(&self) -> Option<Mat> {
        self.deta.as_ref().map(ops::exterior_derivative1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_rejects_duplicate_names() {
        assert!(Chart::new(vec!["x".into(), "x".into()]).is_err());
    }

    #[test]
    fn symbolic_field_partials_match_expressions() {
        let chart = Rc::new(Chart::standard(2));
        // g = [[1 + x1^2, 0], [0, 1]]
        let comps = vec![
            chart.parse_expr("1 + x1^2").unwrap(),
            expr::cnum(0.0),
            expr::cnum(0.0),
            expr::cnum(1.0),
        ];
        let g = TensorField::symbolic(chart, 2, 0, comps, Some(Symmetry::Symmetric)).unwrap();
        let ev = g.eval(&[0.5, 0.0]).unwrap();
        assert!((ev.comps[0] - 1.25).abs() < 1e-15);
        // d_0 g_00 = 2 x1 = 1.0
        assert!((ev.partials[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frame_derives_a_from_two_form() {
        let chart = Rc::new(Chart::standard(2));
        let g = TensorField::constant(chart.clone(), 2, 0, vec![1.0, 0.0, 0.0, 1.0], Some(Symmetry::Symmetric)).unwrap();
        let f = TensorField::constant(chart.clone(), 2, 0, vec![0.0, 1.0, -1.0, 0.0], Some(Symmetry::Skew)).unwrap();
        let gm = GeneralizedMetric::new(g, SkewPart::TwoForm(f)).unwrap();
        let fr = PointFrame::build(&gm, None, None, &[0.0, 0.0]).unwrap();
        // g = I, F_12 = 1 => g(A e1, e2) = 1, so A e1 = e2.
        assert!((fr.a.get(1, 0) - 1.0).abs() < 1e-15);
        assert!((fr.a.get(0, 1) + 1.0).abs() < 1e-15);
        // A^2 = -I
        let a2 = fr.a.matmul(&fr.a);
        assert!(a2.add(&Mat::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn finite_diff_backend_approximates_derivative() {
        let chart = Rc::new(Chart::standard(1));
        let f: PlainFn = Arc::new(|p: &[f64]| vec![p[0] * p[0]]);
        let field = TensorField::finite_diff(chart, 0, 1, f, 1e-6, None);
        let ev = field.eval(&[1.5]).unwrap();
        assert!((ev.partials[0] - 3.0).abs() < 1e-8);
    }
}
