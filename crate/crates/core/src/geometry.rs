//! Periodic cell, dual lattice and atomic-sphere decomposition.
//!
//! The computational domain is a cubic cell `[-D/2, D/2]^3` that is split
//! into a set of non-overlapping atomic spheres and the interstitial region
//! between them. Plane waves live on the dual lattice `(2*pi/D) Z^3`.

use thiserror::Error;

/// Cubic periodic unit cell with edge length `D` (bohr).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCell {
    edge: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("cell edge length must be positive, got {0}")]
    NonPositiveEdge(f64),
    #[error("site {0}: sphere radius must be positive")]
    NonPositiveRadius(usize),
    #[error("site {0}: nuclear charge must be positive")]
    NonPositiveCharge(usize),
    #[error("spheres of sites {0} and {1} overlap")]
    OverlappingSpheres(usize, usize),
    #[error("sphere of site {0} is not strictly inside the cell")]
    SphereOutsideCell(usize),
}

impl UnitCell {
    pub fn new(edge: f64) -> Result<Self, GeometryError> {
        if !(edge > 0.0) {
            return Err(GeometryError::NonPositiveEdge(edge));
        }
        Ok(UnitCell { edge })
    }

    /// Edge length `D` in bohr.
    pub fn edge(&self) -> f64 {
        self.edge
    }

    /// Cell volume `D^3`.
    pub fn volume(&self) -> f64 {
        self.edge * self.edge * self.edge
    }

    /// Reciprocal lattice spacing `2*pi/D`.
    pub fn dual_spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.edge
    }
}

/// Atomic sphere: center, radius and nuclear charge (atomic units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicSite {
    pub center: [f64; 3],
    pub radius: f64,
    pub charge: f64,
}

impl AtomicSite {
    pub fn new(center: [f64; 3], radius: f64, charge: f64) -> Self {
        AtomicSite {
            center,
            radius,
            charge,
        }
    }

    pub fn sphere_volume(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.radius.powi(3)
    }
}

/// Dual-lattice vector `k = (2*pi/D) * n` stored by its integer triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wavevector {
    pub n: [i32; 3],
}

impl Wavevector {
    pub fn new(n: [i32; 3]) -> Self {
        Wavevector { n }
    }

    pub fn zero() -> Self {
        Wavevector { n: [0, 0, 0] }
    }

    pub fn is_zero(&self) -> bool {
        self.n == [0, 0, 0]
    }

    /// Squared integer norm `n1^2 + n2^2 + n3^2`.
    pub fn n_norm2(&self) -> i64 {
        let [a, b, c] = self.n;
        (a as i64) * (a as i64) + (b as i64) * (b as i64) + (c as i64) * (c as i64)
    }

    /// Cartesian reciprocal vector in bohr^-1.
    pub fn k(&self, cell: &UnitCell) -> [f64; 3] {
        let s = cell.dual_spacing();
        [
            s * self.n[0] as f64,
            s * self.n[1] as f64,
            s * self.n[2] as f64,
        ]
    }

    /// `|k|` in bohr^-1, computed from the integer triple.
    pub fn k_norm(&self, cell: &UnitCell) -> f64 {
        cell.dual_spacing() * (self.n_norm2() as f64).sqrt()
    }

    pub fn negated(&self) -> Self {
        Wavevector {
            n: [-self.n[0], -self.n[1], -self.n[2]],
        }
    }
}

/// All dual-lattice vectors with `|k| <= 2*pi*K/D`, i.e. `|n| <= K`,
/// sorted by `(|n|^2, n1, n2, n3)` so that matrix layouts are reproducible.
pub fn reciprocal_vectors(_cell: &UnitCell, k_cut: u32) -> Vec<Wavevector> {
    assert!(k_cut >= 1, "plane-wave cutoff K must be >= 1");
    let kmax = k_cut as i32;
    let limit = (k_cut as i64) * (k_cut as i64);
    let mut out = Vec::new();
    for n1 in -kmax..=kmax {
        for n2 in -kmax..=kmax {
            for n3 in -kmax..=kmax {
                let w = Wavevector::new([n1, n2, n3]);
                if w.n_norm2() <= limit {
                    out.push(w);
                }
            }
        }
    }
    out.sort_by_key(|w| (w.n_norm2(), w.n[0], w.n[1], w.n[2]));
    out
}

/// Checks that every sphere lies strictly inside the cell and that spheres
/// are pairwise disjoint. Strictness uses a tolerance of `1e-12 * D` to
/// avoid floating-point boundary flapping.
pub fn validate_sites(cell: &UnitCell, sites: &[AtomicSite]) -> Result<(), GeometryError> {
    let tol = 1e-12 * cell.edge();
    let half = cell.edge() / 2.0;
    for (i, s) in sites.iter().enumerate() {
        if !(s.radius > 0.0) {
            return Err(GeometryError::NonPositiveRadius(i));
        }
        if !(s.charge > 0.0) {
            return Err(GeometryError::NonPositiveCharge(i));
        }
        for d in 0..3 {
            if s.center[d].abs() + s.radius >= half - tol {
                return Err(GeometryError::SphereOutsideCell(i));
            }
        }
    }
    for i in 0..sites.len() {
        for j in (i + 1)..sites.len() {
            let a = sites[i];
            let b = sites[j];
            let dist2: f64 = (0..3)
                .map(|d| (a.center[d] - b.center[d]).powi(2))
                .sum();
            let rsum = a.radius + b.radius;
            if dist2.sqrt() <= rsum + tol {
                return Err(GeometryError::OverlappingSpheres(i, j));
            }
        }
    }
    Ok(())
}

/// Volume of the interstitial region `|Omega_out| = D^3 - sum_j 4/3 pi R_j^3`.
pub fn interstitial_volume(cell: &UnitCell, sites: &[AtomicSite]) -> f64 {
    cell.volume() - sites.iter().map(|s| s.sphere_volume()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cell10() -> UnitCell {
        UnitCell::new(10.0).unwrap()
    }

    /// Brute-force shell count, kept independent of `reciprocal_vectors`.
    fn count_lattice_ball(k: i64) -> usize {
        let mut c = 0usize;
        for a in -k..=k {
            for b in -k..=k {
                for d in -k..=k {
                    if a * a + b * b + d * d <= k * k {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn k1_gives_seven_vectors() {
        let v = reciprocal_vectors(&cell10(), 1);
        assert_eq!(v.len(), 7);
        assert!(v[0].is_zero());
        // +/- 2*pi/10 along each axis
        let s = 2.0 * std::f64::consts::PI / 10.0;
        for w in &v[1..] {
            assert!((w.k_norm(&cell10()) - s).abs() < 1e-14);
        }
    }

    #[test]
    fn k4_count_matches_brute_force() {
        let v = reciprocal_vectors(&cell10(), 4);
        assert_eq!(v.len(), count_lattice_ball(4));
        assert_eq!(v.len(), 257);
    }

    #[test]
    #[should_panic]
    fn k0_rejected() {
        let _ = reciprocal_vectors(&cell10(), 0);
    }

    #[test]
    fn always_contains_zero() {
        for k in 1..6 {
            let v = reciprocal_vectors(&cell10(), k);
            assert!(v.iter().any(|w| w.is_zero()));
            assert!(v[0].is_zero(), "zero vector sorts first");
        }
    }

    #[test]
    fn closed_under_negation() {
        let v = reciprocal_vectors(&cell10(), 5);
        let set: std::collections::HashSet<_> = v.iter().cloned().collect();
        for w in &v {
            assert!(set.contains(&w.negated()));
        }
    }

    #[test]
    fn validate_single_site_ok() {
        let sites = [AtomicSite::new([0.0, 0.0, 0.0], 1.0, 1.0)];
        assert!(validate_sites(&cell10(), &sites).is_ok());
    }

    #[test]
    fn validate_overlap_detected() {
        let sites = [
            AtomicSite::new([-1.0, 0.0, 0.0], 1.5, 1.0),
            AtomicSite::new([1.0, 0.0, 0.0], 1.5, 1.0),
        ];
        assert_eq!(
            validate_sites(&cell10(), &sites),
            Err(GeometryError::OverlappingSpheres(0, 1))
        );
    }

    #[test]
    fn validate_outside_detected() {
        let sites = [AtomicSite::new([4.5, 0.0, 0.0], 1.0, 1.0)];
        assert_eq!(
            validate_sites(&cell10(), &sites),
            Err(GeometryError::SphereOutsideCell(0))
        );
    }

    #[test]
    fn interstitial_volume_values() {
        let c = cell10();
        assert_eq!(interstitial_volume(&c, &[]), 1000.0);
        let one = [AtomicSite::new([0.0; 3], 1.0, 1.0)];
        let expect = 1000.0 - 4.0 / 3.0 * std::f64::consts::PI;
        assert!((interstitial_volume(&c, &one) - expect).abs() < 1e-12);
        let two = [
            AtomicSite::new([-2.0, 0.0, 0.0], 1.0, 1.0),
            AtomicSite::new([2.0, 0.0, 0.0], 1.0, 1.0),
        ];
        let expect2 = 1000.0 - 8.0 / 3.0 * std::f64::consts::PI;
        assert!((interstitial_volume(&c, &two) - expect2).abs() < 1e-12);
    }

    #[test]
    fn interstitial_volume_monte_carlo_cross_check() {
        // Independent Monte-Carlo estimate of |Omega_out| for one sphere.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let c = cell10();
        let sites = [AtomicSite::new([0.0; 3], 1.0, 1.0)];
        let n = 400_000;
        let mut outside = 0usize;
        for _ in 0..n {
            let p: [f64; 3] = [
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            ];
            let r2: f64 = p.iter().map(|x| x * x).sum();
            if r2 > 1.0 {
                outside += 1;
            }
        }
        let mc = c.volume() * outside as f64 / n as f64;
        let exact = interstitial_volume(&c, &sites);
        // 3-sigma window for the binomial estimate
        let p = exact / c.volume();
        let sigma = c.volume() * (p * (1.0 - p) / n as f64).sqrt();
        assert!(
            (mc - exact).abs() < 3.5 * sigma,
            "MC {mc} vs exact {exact} (sigma {sigma})"
        );
    }

    #[test]
    fn volume_partition_is_exact() {
        let c = cell10();
        let sites = [
            AtomicSite::new([-2.0, 0.0, 0.0], 0.8, 1.0),
            AtomicSite::new([2.0, 1.0, 0.0], 1.3, 2.0),
        ];
        let total =
            interstitial_volume(&c, &sites) + sites.iter().map(|s| s.sphere_volume()).sum::<f64>();
        assert!((total - c.volume()).abs() <= 1e-12 * c.volume());
    }

    proptest! {
        #[test]
        fn count_monotone_in_k(k in 1u32..9) {
            let c = cell10();
            let a = reciprocal_vectors(&c, k).len();
            let b = reciprocal_vectors(&c, k + 1).len();
            prop_assert!(b >= a);
        }

        #[test]
        fn sorted_deterministically(k in 1u32..6) {
            let c = cell10();
            let v = reciprocal_vectors(&c, k);
            for w in v.windows(2) {
                let ka = (w[0].n_norm2(), w[0].n);
                let kb = (w[1].n_norm2(), w[1].n);
                prop_assert!(ka < kb);
            }
        }
    }
}
