//! Spherical Bessel functions of the first kind.
//!
//! Upward recurrence is unstable below the turning point `x < l`, so values
//! there come from Miller-style downward recurrence normalized against
//! `j_0`; tiny arguments use the ascending series.

/// `j_l(x)` for all `l = 0..=lmax` at once.
pub fn sph_bessel_upto(lmax: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0, "argument must be nonnegative");
    let mut j = vec![0.0f64; lmax + 1];
    if x == 0.0 {
        j[0] = 1.0;
        return j;
    }
    if x < 1e-3 {
        // ascending series, two terms are plenty at this size
        let mut xl = 1.0f64; // x^l
        let mut dfact = 1.0f64; // (2l+1)!!
        for (l, jl) in j.iter_mut().enumerate() {
            let lf = l as f64;
            *jl = xl / dfact * (1.0 - x * x / (2.0 * (2.0 * lf + 3.0)));
            xl *= x;
            if xl < 1e-290 {
                xl = 0.0;
            }
            dfact *= 2.0 * lf + 3.0;
        }
        return j;
    }
    let j0 = x.sin() / x;
    j[0] = j0;
    if lmax == 0 {
        return j;
    }
    let j1 = x.sin() / (x * x) - x.cos() / x;
    j[1] = j1;
    // upward recurrence is stable only while l < x
    let l_up = (x.floor() as usize).min(lmax);
    for l in 1..l_up {
        j[l + 1] = (2.0 * l as f64 + 1.0) / x * j[l] - j[l - 1];
    }
    if l_up >= lmax {
        return j;
    }
    // downward (Miller) for the remaining orders
    let start = lmax + 16 + (x as usize);
    let mut fp = 0.0f64; // f_{k+1}
    let mut fc = 1e-280f64; // f_k
    let mut tail = vec![0.0f64; lmax + 1];
    for k in (0..=start).rev() {
        let fm = (2.0 * k as f64 + 3.0) / x * fc - fp;
        if k <= lmax {
            tail[k] = fm;
        }
        fp = fc;
        fc = fm;
        // rescale to avoid overflow
        if fc.abs() > 1e250 {
            let s = 1e-250;
            fp *= s;
            fc *= s;
            for t in tail.iter_mut() {
                *t *= s;
            }
        }
    }
    let scale = j0 / tail[0];
    for l in (l_up.max(1))..=lmax {
        j[l] = tail[l] * scale;
    }
    j
}

/// `(j_l(x), d j_l/dx)`. The derivative uses
/// `j_l' = j_{l-1} - (l+1)/x j_l` for `x > 0`.
pub fn sph_bessel(l: usize, x: f64) -> (f64, f64) {
    if x == 0.0 {
        let v = if l == 0 { 1.0 } else { 0.0 };
        let d = if l == 1 { 1.0 / 3.0 } else { 0.0 };
        return (v, d);
    }
    let j = sph_bessel_upto(l.max(1), x);
    let d = if l == 0 {
        -j[1]
    } else {
        j[l - 1] - (l as f64 + 1.0) / x * j[l]
    };
    (j[l], d)
}

/// `j_l(x)` and derivatives for all `l <= lmax`.
pub fn sph_bessel_upto_with_deriv(lmax: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    if x == 0.0 {
        let mut v = vec![0.0; lmax + 1];
        let mut d = vec![0.0; lmax + 1];
        v[0] = 1.0;
        if lmax >= 1 {
            d[1] = 1.0 / 3.0;
        }
        return (v, d);
    }
    let j = sph_bessel_upto(lmax + 1, x);
    let mut d = vec![0.0f64; lmax + 1];
    d[0] = -j[1];
    for l in 1..=lmax {
        d[l] = j[l - 1] - (l as f64 + 1.0) / x * j[l];
    }
    let mut v = j;
    v.truncate(lmax + 1);
    (v, d)
}
