//! Periodic potentials: Fourier-space representation, pointwise evaluation
//! by Ewald splitting, per-sphere angular-radial expansions and the Hartree
//! potential of a given density.
//!
//! A potential is the sum of two parts:
//!   * a "Coulomb family" part `-sum_j Z_j phi_P(r - R_j)` where `phi_P` is
//!     the periodized `1/r` with neutralizing background; its Fourier
//!     coefficients are known in closed form for every wavevector;
//!   * a smooth tail given by explicit Fourier coefficients on the dual
//!     lattice (user-supplied files, Hartree potentials), truncated at the
//!     cutoff `K_pot`.

use std::collections::HashMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::cmat::{C64, C_ZERO};
use crate::geometry::{AtomicSite, UnitCell, Wavevector};
use crate::specialfn::{
    lm_count, lm_index, sph_bessel_upto, sph_harm_row, sph_harm_row_dir, AngularGrid,
};

/// Fourier coefficients on the dual lattice, keyed by the integer triple.
/// Coefficients are taken against the normalized plane waves `e_k`, i.e.
/// `V(r) = |Omega|^(-1/2) sum_k c_k exp(i k.r)`.
pub type FourierTable = HashMap<[i32; 3], C64>;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("potential evaluated at a nuclear singularity (site {0})")]
    AtSingularity(usize),
    #[error("fourier table violates conjugate symmetry at {0:?} (defect {1:.3e})")]
    NonHermitianTable([i32; 3], f64),
    #[error("angular quadrature under-resolved for L_pot = {l_pot} (defect {defect:.3e})")]
    QuadratureUnderResolved { l_pot: u32, defect: f64 },
    #[error("radial node {0} outside the sphere (0, {1}]")]
    BadRadialNode(f64, f64),
}

/// Periodic potential specification.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    pub cell: UnitCell,
    /// Sites carrying the singular `-Z/|r - R_j|` parts. Charges may be
    /// zero when the potential is given purely by Fourier coefficients.
    pub sites: Vec<AtomicSite>,
    /// Scale applied to the Coulomb family part (1 = physical).
    pub coulomb_scale: f64,
    /// Smooth extra part (Hartree, file input) as Fourier coefficients.
    pub table: FourierTable,
    /// Cutoff index for the tabulated part.
    pub k_pot: u32,
}

impl PotentialSpec {
    /// The periodized Coulomb family
    /// `V(r) = -(4 pi / |Omega|) sum_j Z_j sum_{k != 0} e^{i k.(r - R_j)} / |k|^2`.
    pub fn periodized_coulomb(cell: UnitCell, sites: &[AtomicSite], k_pot: u32) -> Self {
        PotentialSpec {
            cell,
            sites: sites.to_vec(),
            coulomb_scale: 1.0,
            table: FourierTable::new(),
            k_pot,
        }
    }

    /// Potential given purely by explicit Fourier coefficients; `sites`
    /// still describe the sphere geometry but carry no singular part.
    pub fn from_fourier_table(
        cell: UnitCell,
        sites: &[AtomicSite],
        table: FourierTable,
        k_pot: u32,
    ) -> Result<Self, PotentialError> {
        validate_conjugate_symmetry(&table)?;
        Ok(PotentialSpec {
            cell,
            sites: sites.to_vec(),
            coulomb_scale: 0.0,
            table,
            k_pot,
        })
    }

    /// Replaces the smooth table part (used by the SCF loop to swap in a
    /// new Hartree potential on top of the fixed external part).
    pub fn with_table(&self, table: FourierTable) -> Result<Self, PotentialError> {
        validate_conjugate_symmetry(&table)?;
        let mut out = self.clone();
        out.table = table;
        Ok(out)
    }

    /// Total Fourier coefficient `\hat V_k` against normalized plane waves.
    /// The Coulomb part is evaluated in closed form for any `k != 0`:
    /// `-(4 pi / sqrt(|Omega|)) |k|^{-2} sum_j Z_j e^{-i k . R_j}`.
    pub fn fourier_coefficient(&self, n: [i32; 3]) -> C64 {
        let mut v = self.table.get(&n).copied().unwrap_or(C_ZERO);
        if self.coulomb_scale != 0.0 && n != [0, 0, 0] {
            let w = Wavevector::new(n);
            let k = w.k(&self.cell);
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            let mut phase_sum = C_ZERO;
            for s in &self.sites {
                let dot = k[0] * s.center[0] + k[1] * s.center[1] + k[2] * s.center[2];
                phase_sum += s.charge * Complex64::new(0.0, -dot).exp();
            }
            v += -self.coulomb_scale * 4.0 * std::f64::consts::PI
                / self.cell.volume().sqrt()
                / k2
                * phase_sum;
        }
        v
    }

    /// Materialized coefficient map up to `|n| <= k_cut`.
    pub fn fourier_map(&self, k_cut: u32) -> FourierTable {
        let mut out = FourierTable::new();
        for w in crate::geometry::reciprocal_vectors(&self.cell, k_cut) {
            let c = self.fourier_coefficient(w.n);
            if c != C_ZERO {
                out.insert(w.n, c);
            }
        }
        out
    }

    /// Pointwise value by Ewald splitting of the Coulomb part plus the
    /// directly summed smooth tail.
    pub fn evaluate(&self, point: [f64; 3]) -> Result<f64, PotentialError> {
        let ewald = EwaldSums::new(&self.cell);
        self.evaluate_with(&ewald, point)
    }

    /// Same as [`PotentialSpec::evaluate`] with precomputed Ewald sums
    /// (reuse this across many points).
    pub fn evaluate_with(
        &self,
        ewald: &EwaldSums,
        point: [f64; 3],
    ) -> Result<f64, PotentialError> {
        let mut v = 0.0;
        if self.coulomb_scale != 0.0 {
            for (j, s) in self.sites.iter().enumerate() {
                let d = [
                    point[0] - s.center[0],
                    point[1] - s.center[1],
                    point[2] - s.center[2],
                ];
                let phi = ewald
                    .periodic_green(d)
                    .map_err(|_| PotentialError::AtSingularity(j))?;
                v -= self.coulomb_scale * s.charge * phi;
            }
        }
        v += self.table_value(point);
        Ok(v)
    }

    /// Smooth remainder near site `j`: total potential plus `Z_j/|r - R_j|`
    /// (image and background contributions stay, the bare singularity is
    /// removed without cancellation).
    pub fn smooth_remainder_at(
        &self,
        ewald: &EwaldSums,
        site_index: usize,
        point: [f64; 3],
    ) -> Result<f64, PotentialError> {
        let mut v = self.table_value(point);
        if self.coulomb_scale != 0.0 {
            for (j, s) in self.sites.iter().enumerate() {
                let d = [
                    point[0] - s.center[0],
                    point[1] - s.center[1],
                    point[2] - s.center[2],
                ];
                let phi = if j == site_index {
                    ewald.periodic_green_regularized(d)
                } else {
                    ewald
                        .periodic_green(d)
                        .map_err(|_| PotentialError::AtSingularity(j))?
                };
                v -= self.coulomb_scale * s.charge * phi;
            }
        }
        Ok(v)
    }

    fn table_value(&self, point: [f64; 3]) -> f64 {
        if self.table.is_empty() {
            return 0.0;
        }
        let s = self.cell.dual_spacing();
        let norm = 1.0 / self.cell.volume().sqrt();
        let mut acc = C_ZERO;
        for (&n, &c) in &self.table {
            let dot = s * (n[0] as f64 * point[0] + n[1] as f64 * point[1] + n[2] as f64 * point[2]);
            acc += c * Complex64::new(0.0, dot).exp();
        }
        (acc * norm).re
    }
}

fn validate_conjugate_symmetry(table: &FourierTable) -> Result<(), PotentialError> {
    for (&n, &c) in table {
        let neg = [-n[0], -n[1], -n[2]];
        let cn = table.get(&neg).copied().unwrap_or(C_ZERO);
        let defect = (cn - c.conj()).norm();
        if defect > 1e-10 * (1.0 + c.norm()) {
            return Err(PotentialError::NonHermitianTable(n, defect));
        }
    }
    Ok(())
}

/// Hartree potential of a density given by Fourier coefficients:
/// `\hat V_H(k) = 4 pi \hat rho(k) / |k|^2`, with the `k = 0` mode dropped
/// (neutralizing background convention).
pub fn hartree_fourier(cell: &UnitCell, density: &FourierTable) -> FourierTable {
    let s = cell.dual_spacing();
    let mut out = FourierTable::new();
    for (&n, &rho) in density {
        if n == [0, 0, 0] {
            continue;
        }
        let k2 = s * s * ((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as f64);
        out.insert(n, 4.0 * std::f64::consts::PI * rho / k2);
    }
    out
}

/// Precomputed pieces of the Ewald splitting for the periodized `1/r`
/// with neutralizing background:
/// `phi_P(s) = sum_n erfc(a|s + nD|)/|s + nD|
///           + (4 pi/|Omega|) sum_{k != 0} e^{-k^2/(4 a^2)} cos(k.s)/k^2
///           - pi/(a^2 |Omega|)`.
pub struct EwaldSums {
    cell: UnitCell,
    alpha: f64,
    /// reciprocal modes: (k vector, damped prefactor `4pi e^{-k^2/4a^2} / (|Omega| k^2)`)
    recips: Vec<([f64; 3], f64)>,
    background: f64,
}

impl EwaldSums {
    pub fn new(cell: &UnitCell) -> Self {
        // splitting parameter 5/D; reciprocal cutoff where the Gaussian
        // damping drops below 1e-14
        let alpha = 5.0 / cell.edge();
        let kmax_phys = 2.0 * alpha * (14.0 * std::f64::consts::LN_10).sqrt();
        let nmax = (kmax_phys / cell.dual_spacing()).ceil() as i32;
        let s = cell.dual_spacing();
        let vol = cell.volume();
        let mut recips = Vec::new();
        for n1 in -nmax..=nmax {
            for n2 in -nmax..=nmax {
                for n3 in -nmax..=nmax {
                    if (n1, n2, n3) == (0, 0, 0) {
                        continue;
                    }
                    let k = [s * n1 as f64, s * n2 as f64, s * n3 as f64];
                    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                    if k2 > kmax_phys * kmax_phys {
                        continue;
                    }
                    let pref = 4.0 * std::f64::consts::PI * (-k2 / (4.0 * alpha * alpha)).exp()
                        / (vol * k2);
                    recips.push((k, pref));
                }
            }
        }
        let background = std::f64::consts::PI / (alpha * alpha * vol);
        EwaldSums {
            cell: *cell,
            alpha,
            recips,
            background,
        }
    }

    /// `phi_P(s)`; errs at the singularity.
    pub fn periodic_green(&self, s: [f64; 3]) -> Result<f64, ()> {
        let d = self.cell.edge();
        let near = 1e-10 * d;
        let mut real_sum = 0.0;
        for n1 in -1..=1 {
            for n2 in -1..=1 {
                for n3 in -1..=1 {
                    let x = s[0] + d * n1 as f64;
                    let y = s[1] + d * n2 as f64;
                    let z = s[2] + d * n3 as f64;
                    let r = (x * x + y * y + z * z).sqrt();
                    if r < near {
                        return Err(());
                    }
                    real_sum += libm::erfc(self.alpha * r) / r;
                }
            }
        }
        Ok(real_sum + self.recip_sum(s) - self.background)
    }

    /// `phi_P(s) - 1/|s|`, evaluated without cancellation: the primary-image
    /// erfc term is replaced by `-erf(a|s|)/|s|`, which extends smoothly to
    /// `-2a/sqrt(pi)` at the origin.
    pub fn periodic_green_regularized(&self, s: [f64; 3]) -> f64 {
        let d = self.cell.edge();
        let mut real_sum = 0.0;
        for n1 in -1..=1 {
            for n2 in -1..=1 {
                for n3 in -1..=1 {
                    let x = s[0] + d * n1 as f64;
                    let y = s[1] + d * n2 as f64;
                    let z = s[2] + d * n3 as f64;
                    let r = (x * x + y * y + z * z).sqrt();
                    if (n1, n2, n3) == (0, 0, 0) {
                        real_sum += if r < 1e-8 {
                            -2.0 * self.alpha / std::f64::consts::PI.sqrt()
                        } else {
                            -libm::erf(self.alpha * r) / r
                        };
                    } else {
                        real_sum += libm::erfc(self.alpha * r) / r;
                    }
                }
            }
        }
        real_sum + self.recip_sum(s) - self.background
    }

    fn recip_sum(&self, s: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for (k, pref) in &self.recips {
            let dot = k[0] * s[0] + k[1] * s[1] + k[2] * s[2];
            acc += pref * dot.cos();
        }
        acc
    }
}

/// Angular-radial expansion of the potential inside one sphere:
/// `V(R_j + s) = -Z/|s| + sum_lm w_lm(|s|) Y_lm(s/|s|)` with the smooth part
/// tabulated at the radial nodes.
#[derive(Debug, Clone)]
pub struct SphereExpansion {
    pub site_index: usize,
    pub singular_charge: f64,
    pub l_pot: u32,
    pub radius: f64,
    pub nodes: Vec<f64>,
    /// `smooth[lm_index][node]`
    pub smooth: Vec<Vec<C64>>,
}

impl SphereExpansion {
    /// Full `v_lm(r)` including the analytic singular channel
    /// `v_00 = -Z sqrt(4 pi)/r + w_00`.
    pub fn v_lm_at_node(&self, lm: usize, node: usize) -> C64 {
        let mut v = self.smooth[lm][node];
        if lm == 0 {
            v += -self.singular_charge * (4.0 * std::f64::consts::PI).sqrt() / self.nodes[node];
        }
        v
    }

    /// Reconstructs the potential at an interior point of the sphere from
    /// the singular part plus the interpolated smooth table.
    pub fn potential_at(&self, r: f64, theta: f64, phi: f64) -> f64 {
        let mut row = Vec::new();
        sph_harm_row(self.l_pot, theta, phi, &mut row);
        let mut acc = C_ZERO;
        for lm in 0..lm_count(self.l_pot) {
            acc += barycentric_interp(&self.nodes, &self.smooth[lm], r) * row[lm];
        }
        acc.re - self.singular_charge / r
    }

    /// Root-mean-square magnitude of the smooth coefficients in one `l`
    /// channel (diagnostic for the decay of the expansion).
    pub fn channel_norm(&self, l: u32) -> f64 {
        let mut acc = 0.0;
        let mut cnt = 0usize;
        for m in -(l as i32)..=(l as i32) {
            for v in &self.smooth[lm_index(l, m)] {
                acc += v.norm_sqr();
                cnt += 1;
            }
        }
        (acc / cnt as f64).sqrt()
    }
}

fn barycentric_interp(nodes: &[f64], values: &[C64], x: f64) -> C64 {
    // second-form barycentric Lagrange interpolation
    let n = nodes.len();
    let mut w = vec![1.0f64; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                w[i] /= nodes[i] - nodes[j];
            }
        }
    }
    let mut num = C_ZERO;
    let mut den = 0.0;
    for i in 0..n {
        let dx = x - nodes[i];
        if dx.abs() < 1e-14 {
            return values[i];
        }
        let c = w[i] / dx;
        num += values[i] * c;
        den += c;
    }
    num / den
}

/// Builds the sphere expansion of a potential around `site_index`.
///
/// The smooth remainder (total potential plus the site's own `-Z/|s|`) is
/// sampled by Ewald evaluation on an angular quadrature grid at each radial
/// node and projected onto spherical harmonics; the tabulated Fourier tail
/// is projected analytically through the plane-wave expansion in spherical
/// Bessel functions.
pub fn sphere_expansion(
    spec: &PotentialSpec,
    site_index: usize,
    l_pot: u32,
    radial_nodes: &[f64],
) -> Result<SphereExpansion, PotentialError> {
    let site = spec.sites[site_index];
    for &r in radial_nodes {
        if !(r > 0.0 && r <= site.radius * (1.0 + 1e-12)) {
            return Err(PotentialError::BadRadialNode(r, site.radius));
        }
    }
    let grid = AngularGrid::for_degree(l_pot);
    check_grid_resolution(&grid, l_pot)?;

    let n_lm = lm_count(l_pot);
    let n_nodes = radial_nodes.len();
    let mut smooth = vec![vec![C_ZERO; n_nodes]; n_lm];

    // Part 1: Coulomb-family remainder by pointwise Ewald + angular quadrature.
    if spec.coulomb_scale != 0.0 {
        let ewald = EwaldSums::new(&spec.cell);
        // harmonic rows per angular point
        let mut rows: Vec<Vec<C64>> = Vec::new();
        let mut wts: Vec<f64> = Vec::new();
        let mut dirs: Vec<[f64; 3]> = Vec::new();
        for (i, &t) in grid.thetas.iter().enumerate() {
            for &p in &grid.phis {
                let mut row = Vec::new();
                sph_harm_row(l_pot, t, p, &mut row);
                rows.push(row);
                wts.push(grid.theta_weights[i] * grid.phi_weight);
                dirs.push([t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]);
            }
        }
        let cols: Vec<Vec<C64>> = crate::par::map_indexed(n_nodes, |ir| {
            let r = radial_nodes[ir];
            let mut col = vec![C_ZERO; n_lm];
            for (a, dir) in dirs.iter().enumerate() {
                let point = [
                    site.center[0] + r * dir[0],
                    site.center[1] + r * dir[1],
                    site.center[2] + r * dir[2],
                ];
                // only the Coulomb part here; the table is handled analytically
                let mut w = 0.0;
                for (j, s) in spec.sites.iter().enumerate() {
                    let d = [
                        point[0] - s.center[0],
                        point[1] - s.center[1],
                        point[2] - s.center[2],
                    ];
                    let phi = if j == site_index {
                        ewald.periodic_green_regularized(d)
                    } else {
                        ewald.periodic_green(d).expect("quadrature point hit a foreign nucleus")
                    };
                    w -= spec.coulomb_scale * s.charge * phi;
                }
                for lm in 0..n_lm {
                    col[lm] += wts[a] * w * rows[a][lm].conj();
                }
            }
            col
        });
        for (ir, col) in cols.iter().enumerate() {
            for lm in 0..n_lm {
                smooth[lm][ir] += col[lm];
            }
        }
    }

    // Part 2: analytic projection of the tabulated tail through
    // e^{i k.s} = 4 pi sum_lm i^l j_l(k |s|) conj(Y_lm(k̂)) Y_lm(ŝ).
    if !spec.table.is_empty() {
        let norm = 1.0 / spec.cell.volume().sqrt();
        let dual = spec.cell.dual_spacing();
        // group modes by |n|^2 shell so Bessel tables are shared
        let mut shells: HashMap<i64, Vec<([i32; 3], C64)>> = HashMap::new();
        for (&n, &c) in &spec.table {
            let n2 = (n[0] as i64).pow(2) + (n[1] as i64).pow(2) + (n[2] as i64).pow(2);
            shells.entry(n2).or_default().push((n, c));
        }
        let il: Vec<C64> = (0..=l_pot)
            .map(|l| Complex64::new(0.0, 1.0).powi(l as i32))
            .collect();
        let mut yrow = Vec::new();
        for (&n2, modes) in &shells {
            if n2 == 0 {
                // constant mode: contributes only to (0,0)
                for (_, c) in modes {
                    let v = c * norm * 2.0 * std::f64::consts::PI.sqrt();
                    for ir in 0..n_nodes {
                        smooth[0][ir] += v;
                    }
                }
                continue;
            }
            let k_norm = dual * (n2 as f64).sqrt();
            // accumulated angular loading per (l, m)
            let mut loading = vec![C_ZERO; n_lm];
            for &(n, c) in modes {
                let k = [
                    dual * n[0] as f64,
                    dual * n[1] as f64,
                    dual * n[2] as f64,
                ];
                let dot = k[0] * site.center[0] + k[1] * site.center[1] + k[2] * site.center[2];
                let phase = Complex64::new(0.0, dot).exp();
                sph_harm_row_dir(l_pot, [k[0], k[1], k[2]], &mut yrow);
                for lm in 0..n_lm {
                    loading[lm] += c * phase * yrow[lm].conj();
                }
            }
            for (ir, &r) in radial_nodes.iter().enumerate() {
                let jl = sph_bessel_upto(l_pot as usize, k_norm * r);
                for l in 0..=l_pot {
                    let f = 4.0 * std::f64::consts::PI * norm * il[l as usize] * jl[l as usize];
                    for m in -(l as i32)..=(l as i32) {
                        let lm = lm_index(l, m);
                        smooth[lm][ir] += f * loading[lm];
                    }
                }
            }
        }
    }

    Ok(SphereExpansion {
        site_index,
        singular_charge: spec.coulomb_scale * site.charge,
        l_pot,
        radius: site.radius,
        nodes: radial_nodes.to_vec(),
        smooth,
    })
}

/// Orthonormality self-test of the angular rule at the highest resolved
/// degree; guards against under-resolved quadrature.
fn check_grid_resolution(grid: &AngularGrid, l_pot: u32) -> Result<(), PotentialError> {
    let mut defect = 0.0f64;
    for &(l, m, l2, m2) in &[
        (l_pot, 0i32, l_pot, 0i32),
        (l_pot, l_pot as i32, l_pot, l_pot as i32),
        (l_pot, 0, 0, 0),
    ] {
        let v = grid.integrate(|t, p| {
            crate::specialfn::sph_harm(l, m, t, p).unwrap().conj()
                * crate::specialfn::sph_harm(l2, m2, t, p).unwrap()
        });
        let expect = if (l, m) == (l2, m2) { 1.0 } else { 0.0 };
        defect = defect.max((v - expect).norm());
    }
    if defect > 1e-10 {
        return Err(PotentialError::QuadratureUnderResolved { l_pot, defect });
    }
    Ok(())
}
