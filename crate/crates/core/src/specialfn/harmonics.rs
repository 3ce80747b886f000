//! Complex orthonormal spherical harmonics with the Condon-Shortley phase.
//!
//! Values are produced through fully normalized associated Legendre
//! functions so that degrees up to a few hundred stay in range.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HarmonicsError {
    #[error("invalid angular index: |m| = {m} exceeds l = {l}")]
    InvalidIndex { l: u32, m: i32 },
}

/// Flat index of `(l, m)` in the `l`-major layout used for harmonic tables:
/// `l^2 + (m + l)`.
#[inline]
pub fn lm_index(l: u32, m: i32) -> usize {
    (l as usize) * (l as usize) + (m + l as i32) as usize
}

/// Number of `(l, m)` pairs with `l <= lmax`.
#[inline]
pub fn lm_count(lmax: u32) -> usize {
    ((lmax + 1) * (lmax + 1)) as usize
}

/// Fully normalized associated Legendre functions
/// `Pbar_l^m(cos t) = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(cos t)`
/// for all `0 <= m <= l <= lmax`, including the Condon-Shortley phase.
/// Output is indexed by `l*(l+1)/2 + m`.
fn normalized_assoc_legendre(lmax: u32, cos_t: f64, sin_t: f64, out: &mut Vec<f64>) {
    let size = ((lmax as usize + 1) * (lmax as usize + 2)) / 2;
    out.clear();
    out.resize(size, 0.0);
    let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
    out[0] = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
    if lmax == 0 {
        return;
    }
    // diagonal: Pbar_m^m = -sqrt((2m+1)/(2m)) sin(t) Pbar_{m-1}^{m-1}
    for m in 1..=lmax as usize {
        let mf = m as f64;
        out[idx(m, m)] =
            -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_t * out[idx(m - 1, m - 1)];
    }
    // first superdiagonal: Pbar_{m+1}^m = sqrt(2m+3) cos(t) Pbar_m^m
    for m in 0..lmax as usize {
        let mf = m as f64;
        out[idx(m + 1, m)] = (2.0 * mf + 3.0).sqrt() * cos_t * out[idx(m, m)];
    }
    // upward in l
    for m in 0..=lmax as usize {
        for l in (m + 2)..=lmax as usize {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf)
                / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                .sqrt();
            out[idx(l, m)] = a * (cos_t * out[idx(l - 1, m)] - b * out[idx(l - 2, m)]);
        }
    }
}

/// Single spherical harmonic `Y_lm(theta, phi)`.
pub fn sph_harm(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64, HarmonicsError> {
    if m.unsigned_abs() > l {
        return Err(HarmonicsError::InvalidIndex { l, m });
    }
    let mut tab = Vec::new();
    normalized_assoc_legendre(l, theta.cos(), theta.sin(), &mut tab);
    let ma = m.unsigned_abs() as usize;
    let p = tab[(l as usize) * (l as usize + 1) / 2 + ma];
    let phase = Complex64::new(0.0, ma as f64 * phi).exp();
    let val = p * phase;
    if m >= 0 {
        Ok(val)
    } else {
        // Y_{l,-m} = (-1)^m conj(Y_{l,m})
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * val.conj())
    }
}

/// All `Y_lm(theta, phi)` for `l <= lmax` in `lm_index` layout.
pub fn sph_harm_row(lmax: u32, theta: f64, phi: f64, out: &mut Vec<Complex64>) {
    let mut tab = Vec::new();
    normalized_assoc_legendre(lmax, theta.cos(), theta.sin(), &mut tab);
    out.clear();
    out.resize(lm_count(lmax), Complex64::new(0.0, 0.0));
    // e^{i m phi} for m = 0..lmax
    let mut phases = Vec::with_capacity(lmax as usize + 1);
    let step = Complex64::new(0.0, phi).exp();
    let mut cur = Complex64::new(1.0, 0.0);
    for _ in 0..=lmax {
        phases.push(cur);
        cur *= step;
    }
    for l in 0..=lmax as usize {
        for m in 0..=l {
            let p = tab[l * (l + 1) / 2 + m];
            let v = p * phases[m];
            out[lm_index(l as u32, m as i32)] = v;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[lm_index(l as u32, -(m as i32))] = sign * v.conj();
            }
        }
    }
}

/// Same as [`sph_harm_row`] for a unit direction vector.
pub fn sph_harm_row_dir(lmax: u32, dir: [f64; 3], out: &mut Vec<Complex64>) {
    let (theta, phi) = dir_to_angles(dir);
    sph_harm_row(lmax, theta, phi, out)
}

/// Spherical angles of a (not necessarily normalized) direction.
pub fn dir_to_angles(dir: [f64; 3]) -> (f64, f64) {
    let r = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    if r == 0.0 {
        return (0.0, 0.0);
    }
    let theta = (dir[2] / r).clamp(-1.0, 1.0).acos();
    let phi = dir[1].atan2(dir[0]);
    (theta, phi)
}

/// `d/dtheta Y_lm` via the ladder identity
/// `dY_lm/dtheta = m cot(theta) Y_lm + sqrt((l-m)(l+m+1)) e^{-i phi} Y_{l,m+1}`.
/// Requires `0 < theta < pi`.
pub fn sph_harm_dtheta(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64, HarmonicsError> {
    if m.unsigned_abs() > l {
        return Err(HarmonicsError::InvalidIndex { l, m });
    }
    let y = sph_harm(l, m, theta, phi)?;
    let cot = theta.cos() / theta.sin();
    let mut d = Complex64::new(m as f64 * cot, 0.0) * y;
    if m < l as i32 {
        let c = ((l as f64 - m as f64) * (l as f64 + m as f64 + 1.0)).sqrt();
        let y_up = sph_harm(l, m + 1, theta, phi)?;
        d += c * Complex64::new(0.0, -phi).exp() * y_up;
    }
    Ok(d)
}

/// Product angular quadrature on the unit sphere: Gauss-Legendre in
/// `cos(theta)` with `n_theta` points and a uniform trapezoid in `phi` with
/// `n_phi` points. Exact for spherical harmonics with `l <= 2 n_theta - 1`
/// (and all `|m| < n_phi`). Returns `(theta_i, phi_j, w_ij)` flattened with
/// `phi` fastest.
pub struct AngularGrid {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// weight per (theta, phi) pair: `w_theta * 2 pi / n_phi`
    pub theta_weights: Vec<f64>,
    pub phi_weight: f64,
}

impl AngularGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (ct, wt) = super::legendre::gauss_legendre(n_theta, -1.0, 1.0);
        let thetas: Vec<f64> = ct.iter().map(|&c| c.acos()).collect();
        let phis: Vec<f64> = (0..n_phi)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64)
            .collect();
        AngularGrid {
            thetas,
            phis,
            theta_weights: wt,
            phi_weight: 2.0 * std::f64::consts::PI / n_phi as f64,
        }
    }

    /// Grid sized to integrate products of harmonics up to degree `2*lmax + 1`.
    pub fn for_degree(lmax: u32) -> Self {
        AngularGrid::new(lmax as usize + 2, 2 * lmax as usize + 3)
    }

    /// Quadrature of `f(theta, phi)` over the unit sphere.
    pub fn integrate<F: FnMut(f64, f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &t) in self.thetas.iter().enumerate() {
            let mut row = Complex64::new(0.0, 0.0);
            for &p in &self.phis {
                row += f(t, p);
            }
            acc += self.theta_weights[i] * row;
        }
        acc * self.phi_weight
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y00_is_constant() {
        let v = sph_harm(0, 0, 1.1, 2.2).unwrap();
        let expect = 0.5 / std::f64::consts::PI.sqrt();
        assert!((v.re - expect).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn y10_closed_form() {
        for &(t, p) in &[(0.3, 0.0), (1.2, 2.0), (2.8, -1.0)] {
            let v = sph_harm(1, 0, t, p).unwrap();
            let expect = (3.0 / (4.0 * std::f64::consts::PI)).sqrt() * t.cos();
            assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn y11_closed_form() {
        // Y_11 = -sqrt(3/8pi) sin(t) e^{i phi}
        let (t, p) = (0.9, 0.7);
        let v = sph_harm(1, 1, t, p).unwrap();
        let mag = -(3.0 / (8.0 * std::f64::consts::PI)).sqrt() * t.sin();
        let expect = mag * Complex64::new(0.0, p).exp();
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn invalid_index_rejected() {
        assert!(sph_harm(1, 2, 0.0, 0.0).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        for l in 0..6u32 {
            for m in 0..=l as i32 {
                let a = sph_harm(l, m, 0.8, 1.3).unwrap();
                let b = sph_harm(l, -m, 0.8, 1.3).unwrap();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((b - sign * a.conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn parity_under_inversion() {
        // Y_lm(-n) = (-1)^l Y_lm(n)
        let (t, p) = (0.62, 2.41);
        let (ti, pi) = (std::f64::consts::PI - t, p + std::f64::consts::PI);
        for l in 0..8u32 {
            for m in -(l as i32)..=(l as i32) {
                let a = sph_harm(l, m, t, p).unwrap();
                let b = sph_harm(l, m, ti, pi).unwrap();
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!((b - sign * a).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn orthonormality_up_to_l12() {
        // quadrature oracle: exact for products of degree <= 2*12+1
        let grid = AngularGrid::for_degree(12);
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        for (i, &t) in grid.thetas.iter().enumerate() {
            for &p in &grid.phis {
                let mut row = Vec::new();
                sph_harm_row(12, t, p, &mut row);
                let w = grid.theta_weights[i] * grid.phi_weight;
                for v in row.iter_mut() {
                    *v *= w.sqrt(); // fold weights symmetrically
                }
                let _ = i;
                rows.push(row);
            }
        }
        // check a selection of pairs including the diagonal
        let pairs = [
            ((0, 0), (0, 0)),
            ((3, 2), (3, 2)),
            ((12, -7), (12, -7)),
            ((5, 1), (5, -1)),
            ((7, 3), (5, 3)),
            ((12, 0), (10, 0)),
            ((9, -4), (9, -4)),
        ];
        for &((l1, m1), (l2, m2)) in &pairs {
            let i1 = lm_index(l1, m1);
            let i2 = lm_index(l2, m2);
            let mut acc = Complex64::new(0.0, 0.0);
            for row in &rows {
                acc += row[i1].conj() * row[i2];
            }
            let expect = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
            assert!(
                (acc - expect).norm() < 1e-10,
                "<Y{l1}{m1}|Y{l2}{m2}> = {acc}"
            );
        }
    }

    #[test]
    fn y32_norm_via_quadrature() {
        let grid = AngularGrid::for_degree(3);
        let v = grid.integrate(|t, p| {
            let y = sph_harm(3, 2, t, p).unwrap();
            y.conj() * y
        });
        assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-13);
    }

    #[test]
    fn dtheta_matches_finite_differences() {
        let h = 1e-6;
        for &(l, m) in &[(1u32, 0i32), (2, 1), (3, -2), (5, 4), (6, 0)] {
            for &(t, p) in &[(0.7, 0.3), (1.9, -1.2), (2.4, 2.9)] {
                let d = sph_harm_dtheta(l, m, t, p).unwrap();
                let up = sph_harm(l, m, t + h, p).unwrap();
                let dn = sph_harm(l, m, t - h, p).unwrap();
                let fd = (up - dn) / (2.0 * h);
                assert!(
                    (d - fd).norm() < 1e-7 * (1.0 + d.norm()),
                    "l={l} m={m}: {d} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn large_degree_stays_finite() {
        let mut row = Vec::new();
        sph_harm_row(200, 1.0, 0.5, &mut row);
        assert!(row.iter().all(|v| v.re.is_finite() && v.im.is_finite()));
        // |Y_lm| <= sqrt((2l+1)/(4pi))
        let bound = (401.0 / (4.0 * std::f64::consts::PI)).sqrt();
        assert!(row.iter().all(|v| v.norm() <= bound * 1.0001));
    }
}
