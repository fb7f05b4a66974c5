//! First-order jets (value plus gradient) for exact derivative
//! evaluation of closure-backed fields.
//!
//! A `Jet` carries a value and its gradient with respect to the chart
//! coordinates. Arithmetic propagates derivatives by the usual
//! forward-mode rules, so component functions written against `Jet`
//! yield machine-precision first partials in a single evaluation.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub val: f64,
    pub grad: Vec<f64>,
}

impl Jet {
    pub fn constant(val: f64, dim: usize) -> Self {
        Jet { val, grad: vec![0.0; dim] }
    }

    /// The seed for coordinate `index`: value `val`, unit gradient.
    pub fn variable(val: f64, index: usize, dim: usize) -> Self {
        let mut grad = vec![0.0; dim];
        grad[index] = 1.0;
        Jet { val, grad }
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn sqrt(&self) -> Jet {
        let r = self.val.sqrt();
        let scale = 0.5 / r;
        Jet { val: r, grad: self.grad.iter().map(|d| d * scale).collect() }
    }

    pub fn powi(&self, n: i32) -> Jet {
        let scale = n as f64 * self.val.powi(n - 1);
        Jet {
            val: self.val.powi(n),
            grad: self.grad.iter().map(|d| d * scale).collect(),
        }
    }

    pub fn recip(&self) -> Jet {
        let inv = 1.0 / self.val;
        let scale = -inv * inv;
        Jet { val: inv, grad: self.grad.iter().map(|d| d * scale).collect() }
    }
}

/// Seeds a full coordinate tuple as jet variables.
pub fn seed(point: &[f64]) -> Vec<Jet> {
    let n = point.len();
    point
        .iter()
        .enumerate()
        .map(|(i, &x)| Jet::variable(x, i, n))
        .collect()
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet {
            val: self.val + rhs.val,
            grad: self.grad.iter().zip(&rhs.grad).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet {
            val: self.val - rhs.val,
            grad: self.grad.iter().zip(&rhs.grad).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        Jet {
            val: self.val * rhs.val,
            grad: self
                .grad
                .iter()
                .zip(&rhs.grad)
                .map(|(a, b)| a * rhs.val + self.val * b)
                .collect(),
        }
    }
}

impl Div for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        let inv = 1.0 / rhs.val;
        Jet {
            val: self.val * inv,
            grad: self
                .grad
                .iter()
                .zip(&rhs.grad)
                .map(|(a, b)| (a - self.val * inv * b) * inv)
                .collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { val: -self.val, grad: self.grad.iter().map(|d| -d).collect() }
    }
}

macro_rules! owned_ops {
    ($($trait:ident, $m:ident);*) => {$(
        impl $trait for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { (&self).$m(&rhs) }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet { (&self).$m(rhs) }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add, add; Sub, sub; Mul, mul; Div, div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        Jet { val: self.val * rhs, grad: self.grad.iter().map(|d| d * rhs).collect() }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        (&self) * rhs
    }
}

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        rhs * self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &rhs * self
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut out = self.clone();
        out.val += rhs;
        out
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        (&self) + rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_rule() {
        // f(x, y) = x^2 / (1 + y), df/dx = 2x/(1+y), df/dy = -x^2/(1+y)^2
        let p = seed(&[3.0, 1.0]);
        let f = p[0].powi(2) / (&p[1] + 1.0);
        assert!((f.val - 4.5).abs() < 1e-15);
        assert!((f.grad[0] - 3.0).abs() < 1e-15);
        assert!((f.grad[1] + 2.25).abs() < 1e-15);
    }

    #[test]
    fn sqrt_and_recip() {
        let p = seed(&[4.0]);
        let s = p[0].sqrt();
        assert!((s.val - 2.0).abs() < 1e-15);
        assert!((s.grad[0] - 0.25).abs() < 1e-15);
        let r = p[0].recip();
        assert!((r.grad[0] + 1.0 / 16.0).abs() < 1e-15);
    }
}
