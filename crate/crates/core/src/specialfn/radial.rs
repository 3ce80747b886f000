//! Radial basis families on `[0, R]`: mapped Legendre polynomials (spanning
//! all polynomials up to degree N, with far better conditioning of the
//! r^2-weighted Gram than monomials) and Slater-type orbitals
//! `r^k exp(-eta r)`.

use thiserror::Error;

use super::legendre::legendre_with_derivative;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialKind {
    /// Legendre polynomials mapped affinely from `[-1, 1]` onto `[0, R]`.
    Polynomial,
    /// `chi_k(r) = r^k exp(-eta r)`.
    Slater { eta: f64 },
}

/// A family of `N + 1` radial functions on `[0, R]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFamily {
    pub kind: RadialKind,
    pub max_degree: u32,
    pub interval_end: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum RadialError {
    #[error("radial argument {r} outside [0, {end}]")]
    OutOfRange { r: f64, end: f64 },
    #[error("radial index {n} exceeds max degree {max}")]
    IndexOutOfRange { n: u32, max: u32 },
}

impl RadialFamily {
    pub fn polynomial(max_degree: u32, interval_end: f64) -> Self {
        RadialFamily {
            kind: RadialKind::Polynomial,
            max_degree,
            interval_end,
        }
    }

    pub fn slater(max_degree: u32, eta: f64, interval_end: f64) -> Self {
        RadialFamily {
            kind: RadialKind::Slater { eta },
            max_degree,
            interval_end,
        }
    }

    pub fn len(&self) -> usize {
        self.max_degree as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(chi_n(r), chi_n'(r))`.
    pub fn eval(&self, n: u32, r: f64) -> Result<(f64, f64), RadialError> {
        if n > self.max_degree {
            return Err(RadialError::IndexOutOfRange {
                n,
                max: self.max_degree,
            });
        }
        let end = self.interval_end;
        if !(0.0..=end * (1.0 + 1e-12)).contains(&r) {
            return Err(RadialError::OutOfRange { r, end });
        }
        Ok(self.eval_unchecked(n, r))
    }

    pub(crate) fn eval_unchecked(&self, n: u32, r: f64) -> (f64, f64) {
        match self.kind {
            RadialKind::Polynomial => {
                let x = 2.0 * r / self.interval_end - 1.0;
                let (p, dp) = legendre_with_derivative(n as usize, x);
                (p, dp * 2.0 / self.interval_end)
            }
            RadialKind::Slater { eta } => {
                let e = (-eta * r).exp();
                if n == 0 {
                    (e, -eta * e)
                } else {
                    let rn = r.powi(n as i32 - 1);
                    (rn * r * e, rn * e * (n as f64 - eta * r))
                }
            }
        }
    }

    /// Values and derivatives of every family member at each node:
    /// `values[n][i] = chi_n(r_i)`.
    pub fn tabulate(&self, nodes: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut vals = vec![vec![0.0; nodes.len()]; self.len()];
        let mut ders = vec![vec![0.0; nodes.len()]; self.len()];
        for (i, &r) in nodes.iter().enumerate() {
            for n in 0..self.len() {
                let (v, d) = self.eval_unchecked(n as u32, r);
                vals[n][i] = v;
                ders[n][i] = d;
            }
        }
        (vals, ders)
    }

    /// Coefficients reproducing the constant function 1 exactly, if the
    /// family spans constants (the polynomial family does through chi_0).
    pub fn constant_representation(&self) -> Option<Vec<f64>> {
        match self.kind {
            RadialKind::Polynomial => {
                let mut c = vec![0.0; self.len()];
                c[0] = 1.0;
                Some(c)
            }
            RadialKind::Slater { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_n0_is_one() {
        let fam = RadialFamily::polynomial(4, 2.0);
        for &r in &[0.0, 0.3, 1.0, 2.0] {
            let (v, d) = fam.eval(0, r).unwrap();
            assert_eq!(v, 1.0);
            assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn polynomial_n1_at_end() {
        let fam = RadialFamily::polynomial(4, 1.5);
        let (v, d) = fam.eval(1, 1.5).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!((d - 2.0 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn slater_values() {
        let fam = RadialFamily::slater(3, 1.0, 2.0);
        let (v, d) = fam.eval(0, 1.0).unwrap();
        let e = (-1.0f64).exp();
        assert!((v - e).abs() < 1e-16);
        assert!((d + e).abs() < 1e-16);
        let (v1, d1) = fam.eval(2, 0.5).unwrap();
        let e5: f64 = (-0.5f64).exp();
        assert!((v1 - 0.25 * e5).abs() < 1e-16);
        assert!((d1 - (2.0 * 0.5 - 0.25) * e5).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_rejected() {
        let fam = RadialFamily::polynomial(2, 1.0);
        assert!(fam.eval(0, 1.5).is_err());
        assert!(fam.eval(3, 0.5).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for fam in [
            RadialFamily::polynomial(6, 1.3),
            RadialFamily::slater(4, 2.0, 1.3),
        ] {
            for n in 0..fam.len() as u32 {
                for &r in &[0.2, 0.7, 1.1] {
                    let (_, d) = fam.eval(n, r).unwrap();
                    let (vp, _) = fam.eval(n, r + h).unwrap();
                    let (vm, _) = fam.eval(n, r - h).unwrap();
                    assert!(((vp - vm) / (2.0 * h) - d).abs() < 1e-6 * (1.0 + d.abs()));
                }
            }
        }
    }

    #[test]
    fn polynomial_spans_constants() {
        let fam = RadialFamily::polynomial(5, 1.0);
        let c = fam.constant_representation().unwrap();
        for &r in &[0.0, 0.4, 0.9] {
            let mut acc = 0.0;
            for (n, &cn) in c.iter().enumerate() {
                acc += cn * fam.eval(n as u32, r).unwrap().0;
            }
            assert!((acc - 1.0).abs() < 1e-15);
        }
        assert!(RadialFamily::slater(5, 1.0, 1.0)
            .constant_representation()
            .is_none());
    }
}
