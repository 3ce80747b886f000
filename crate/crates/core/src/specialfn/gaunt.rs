//! Gaunt coefficients through the Wigner 3j closed form, with a lookup
//! table for the index ranges needed by sphere-interior potential matrix
//! elements.

use std::collections::HashMap;
use std::sync::OnceLock;

/// log(n!) table, grown large enough for all angular momenta in play.
fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(600);
        v.push(0.0);
        for i in 1..600usize {
            v.push(v[i - 1] + (i as f64).ln());
        }
        v
    });
    t[n]
}

fn triangle_ok(l1: i64, l2: i64, l3: i64) -> bool {
    l3 >= (l1 - l2).abs() && l3 <= l1 + l2
}

/// Wigner 3j symbol `(l1 l2 l3; m1 m2 m3)` by the Racah sum with
/// log-factorials. Adequate to ~1e-12 relative for the moderate angular
/// momenta used here.
pub fn wigner_3j(l1: u32, l2: u32, l3: u32, m1: i32, m2: i32, m3: i32) -> f64 {
    let (l1, l2, l3) = (l1 as i64, l2 as i64, l3 as i64);
    let (m1, m2, m3) = (m1 as i64, m2 as i64, m3 as i64);
    if m1 + m2 + m3 != 0 || !triangle_ok(l1, l2, l3) {
        return 0.0;
    }
    if m1.abs() > l1 || m2.abs() > l2 || m3.abs() > l3 {
        return 0.0;
    }
    let lf = |x: i64| ln_factorial(x as usize);
    // triangle coefficient
    let ln_delta = 0.5
        * (lf(l1 + l2 - l3) + lf(l1 - l2 + l3) + lf(-l1 + l2 + l3) - lf(l1 + l2 + l3 + 1));
    let ln_pref = 0.5
        * (lf(l1 + m1) + lf(l1 - m1) + lf(l2 + m2) + lf(l2 - m2) + lf(l3 + m3) + lf(l3 - m3));
    let t_min = 0.max(l2 - l3 - m1).max(l1 - l3 + m2);
    let t_max = (l1 + l2 - l3).min(l1 - m1).min(l2 + m2);
    let mut sum = 0.0f64;
    for t in t_min..=t_max {
        let ln_den = lf(t)
            + lf(l3 - l2 + m1 + t)
            + lf(l3 - l1 - m2 + t)
            + lf(l1 + l2 - l3 - t)
            + lf(l1 - m1 - t)
            + lf(l2 + m2 - t);
        let term = (ln_delta + ln_pref - ln_den).exp();
        sum += if t % 2 == 0 { term } else { -term };
    }
    let phase = if (l1 - l2 - m3) % 2 == 0 { 1.0 } else { -1.0 };
    phase * sum
}

/// Gaunt coefficient
/// `G = integral over S^2 of conj(Y_{l,m}) Y_{l2,m2} Y_{l3,m3}`.
///
/// Nonzero only when `m = m2 + m3`, the triangle rule holds and
/// `l + l2 + l3` is even; real-valued in this convention.
pub fn gaunt(l: u32, m: i32, l2: u32, m2: i32, l3: u32, m3: i32) -> f64 {
    if m != m2 + m3 {
        return 0.0;
    }
    if !triangle_ok(l as i64, l2 as i64, l3 as i64) {
        return 0.0;
    }
    if (l + l2 + l3) % 2 != 0 {
        return 0.0;
    }
    let pref = (((2 * l + 1) * (2 * l2 + 1) * (2 * l3 + 1)) as f64
        / (4.0 * std::f64::consts::PI))
        .sqrt();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    sign * pref
        * wigner_3j(l, l2, l3, 0, 0, 0)
        * wigner_3j(l, l2, l3, -m, m2, m3)
}

/// Precomputed nonzero Gaunt couplings for the sphere potential term:
/// for a row index `(l, m)` and column index `(l2, m2)` the table lists all
/// `(l3, G(l,m; l2,m2; l3, m-m2))` with `l3 <= l3_max`, `G != 0`.
pub struct GauntTable {
    l_basis: u32,
    entries: HashMap<(u32, i32, u32, i32), Vec<(u32, f64)>>,
}

impl GauntTable {
    pub fn new(l_basis: u32, l3_max: u32) -> Self {
        let mut entries = HashMap::new();
        for l in 0..=l_basis {
            for m in -(l as i32)..=(l as i32) {
                for l2 in 0..=l_basis {
                    for m2 in -(l2 as i32)..=(l2 as i32) {
                        let m3 = m - m2;
                        let mut list = Vec::new();
                        for l3 in 0..=l3_max {
                            if m3.unsigned_abs() > l3 {
                                continue;
                            }
                            let g = gaunt(l, m, l2, m2, l3, m3);
                            if g != 0.0 {
                                list.push((l3, g));
                            }
                        }
                        if !list.is_empty() {
                            entries.insert((l, m, l2, m2), list);
                        }
                    }
                }
            }
        }
        let table = GauntTable { l_basis, entries };
        table.validate();
        table
    }

    /// All `(l3, G)` couplings for the pair of basis indices; `m3 = m - m2`.
    pub fn couplings(&self, l: u32, m: i32, l2: u32, m2: i32) -> &[(u32, f64)] {
        debug_assert!(l <= self.l_basis && l2 <= self.l_basis);
        self.entries
            .get(&(l, m, l2, m2))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Startup self-check of the closed form against angular quadrature for
    /// small angular momenta.
    fn validate(&self) {
        use super::harmonics::{sph_harm, AngularGrid};
        let lv = self.l_basis.min(2);
        let grid = AngularGrid::for_degree(3 * (lv + 1));
        for &((l, m, l2, m2), ref list) in self.entries.iter().filter(|&(&(l, _, l2, _), _)| {
            l <= lv && l2 <= lv
        }) {
            for &(l3, g) in list.iter().filter(|&&(l3, _)| l3 <= 2 * lv) {
                let m3 = m - m2;
                let q = grid.integrate(|t, p| {
                    sph_harm(l, m, t, p).unwrap().conj()
                        * sph_harm(l2, m2, t, p).unwrap()
                        * sph_harm(l3, m3, t, p).unwrap()
                });
                assert!(
                    (q.re - g).abs() < 1e-10 && q.im.abs() < 1e-10,
                    "Gaunt table self-check failed at ({l},{m};{l2},{m2};{l3},{m3}): \
                     table {g} vs quadrature {q}"
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::harmonics::{sph_harm, AngularGrid};

    #[test]
    fn all_constant_indices() {
        let g = gaunt(0, 0, 0, 0, 0, 0);
        assert!((g - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn parity_selection_rule() {
        assert_eq!(gaunt(1, 0, 0, 0, 0, 0), 0.0);
        assert_eq!(gaunt(2, 0, 1, 0, 0, 0), 0.0);
        assert_eq!(gaunt(3, 1, 1, 1, 1, 0), 0.0);
    }

    #[test]
    fn m_selection_rule() {
        assert_eq!(gaunt(2, 1, 1, 0, 1, 0), 0.0);
    }

    #[test]
    fn frozen_value_l2_l1_l1() {
        // brute-force angular quadrature gives 1/sqrt(5 pi)
        let g = gaunt(2, 0, 1, 0, 1, 0);
        let expect = 1.0 / (5.0 * std::f64::consts::PI).sqrt();
        assert!((g - expect).abs() < 1e-13, "{g} vs {expect}");
        assert!((g - 0.25231).abs() < 1e-5);
    }

    #[test]
    fn matches_quadrature_up_to_l6() {
        let grid = AngularGrid::for_degree(10);
        // spot grid over valid index combinations with all l <= 6
        for l in 0..=6u32 {
            for l2 in 0..=6u32 {
                for l3 in 0..=6u32 {
                    for m2 in -(l2 as i32)..=(l2 as i32) {
                        for m3 in [-(l3 as i32), 0, l3 as i32] {
                            let m = m2 + m3;
                            if m.unsigned_abs() > l {
                                continue;
                            }
                            let g = gaunt(l, m, l2, m2, l3, m3);
                            let q = grid.integrate(|t, p| {
                                sph_harm(l, m, t, p).unwrap().conj()
                                    * sph_harm(l2, m2, t, p).unwrap()
                                    * sph_harm(l3, m3, t, p).unwrap()
                            });
                            assert!(
                                (q.re - g).abs() < 1e-10 && q.im.abs() < 1e-10,
                                "({l},{m};{l2},{m2};{l3},{m3}): {g} vs {q}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn table_agrees_with_direct_evaluation() {
        let table = GauntTable::new(2, 4);
        for &(l, m, l2, m2) in &[(2u32, 1i32, 1u32, -1i32), (1, 0, 1, 0), (2, 2, 2, 0)] {
            let list = table.couplings(l, m, l2, m2);
            for &(l3, g) in list {
                assert_eq!(g, gaunt(l, m, l2, m2, l3, m - m2));
            }
        }
    }

    #[test]
    fn wigner_3j_known_values() {
        // (1 1 0; 0 0 0) = -1/sqrt(3)
        assert!((wigner_3j(1, 1, 0, 0, 0, 0) + 1.0 / 3f64.sqrt()).abs() < 1e-14);
        // (2 2 2; 0 0 0) = -sqrt(2/35)
        assert!((wigner_3j(2, 2, 2, 0, 0, 0) + (2.0f64 / 35.0).sqrt()).abs() < 1e-13);
        // (1 1 2; 1 -1 0) = 1/sqrt(30)
        assert!((wigner_3j(1, 1, 2, 1, -1, 0) - 1.0 / 30f64.sqrt()).abs() < 1e-14);
    }
}
