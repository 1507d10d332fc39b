//! Scan-and-bisect root finding for scalar functions of one variable.

use serde::Serialize;

pub const DEFAULT_RESOLUTION: usize = 4096;
/// Grid values at most this large in magnitude count as exact roots.
pub const GRID_ZERO_BAND: f64 = 1e-12;
/// A local extremum of `|g|` this close to zero is reported as a tangent root.
pub const TANGENT_BAND: f64 = 1e-8;
/// Shrink applied to open interval endpoints before scanning.
pub const ENDPOINT_SHRINK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRoot {
    pub t: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub tangent: bool,
}

/// Bisection on a bracket with `fa`, `fb` of opposite signs, run until the
/// bracket cannot shrink further in floating point.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let (fa, fb) = (f(a).abs(), f(b).abs());
    if fa <= fb {
        a
    } else {
        b
    }
}

/// Central-difference derivative.
fn derivative<F: Fn(f64) -> f64>(f: &F, t: f64, h: f64) -> f64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// Locates a stationary point of `f` inside `[a, b]` by bisecting on the
/// sign of a central-difference derivative. Returns `None` if the
/// derivative does not change sign across the bracket.
pub fn refine_extremum<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Option<f64> {
    let h = (1e-5f64).min(0.25 * (b - a).abs());
    let d = |t: f64| derivative(f, t, h);
    let (da, db) = (d(a), d(b));
    if da == 0.0 {
        return Some(a);
    }
    if db == 0.0 {
        return Some(b);
    }
    if (da < 0.0) == (db < 0.0) {
        return None;
    }
    Some(bisect(&d, a, b))
}

/// Scans `g` on a uniform grid over `[lo, hi]` (`resolution` cells) and
/// refines every bracket. Periodic scans treat `hi` as `lo` and examine the
/// wrap-around cell.
pub fn scan<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64, resolution: usize, periodic: bool) -> Vec<ScanRoot> {
    let n = resolution.max(2);
    let step = (hi - lo) / n as f64;
    let count = if periodic { n } else { n + 1 };
    let ts: Vec<f64> = (0..count)
        .map(|i| if !periodic && i == n { hi } else { lo + i as f64 * step })
        .collect();
    let vals: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    let cells = if periodic { count } else { count - 1 };
    // cell i spans [ts[i], ts[i+1]] (wrapping to lo + period for the last periodic cell)
    let right = |i: usize| -> (f64, f64) {
        if i + 1 < count {
            (ts[i + 1], vals[i + 1])
        } else {
            (hi, vals[0])
        }
    };

    let zero = |v: f64| v.abs() <= GRID_ZERO_BAND;
    let mut roots = Vec::new();

    for i in 0..count {
        if zero(vals[i]) {
            let a = if i > 0 { ts[i - 1] } else if periodic { hi - step } else { ts[i] };
            let b = if i + 1 < count { ts[i + 1] } else if periodic { hi } else { ts[i] };
            roots.push(ScanRoot {
                t: ts[i],
                residual: vals[i],
                bracket: (a, b),
                tangent: false,
            });
        }
    }

    for i in 0..cells {
        let (a, fa) = (ts[i], vals[i]);
        let (b, fb) = right(i);
        if zero(fa) || zero(fb) || !fa.is_finite() || !fb.is_finite() {
            continue;
        }
        if (fa < 0.0) != (fb < 0.0) {
            let t = bisect(g, a, b);
            let t_out = if periodic && t >= hi { t - (hi - lo) } else { t };
            roots.push(ScanRoot {
                t: t_out,
                residual: g(t),
                bracket: (a, b),
                tangent: false,
            });
        }
    }

    // tangent roots: local minima of |g| without a nearby sign change
    let idx = |i: isize| -> Option<usize> {
        if periodic {
            Some(i.rem_euclid(count as isize) as usize)
        } else if i >= 0 && (i as usize) < count {
            Some(i as usize)
        } else {
            None
        }
    };
    let param = |i: isize| lo + i as f64 * step;
    for i in 0..count as isize {
        let (Some(ip), Some(ic), Some(inx)) = (idx(i - 1), idx(i), idx(i + 1)) else {
            continue;
        };
        let (fp, fc, fnx) = (vals[ip], vals[ic], vals[inx]);
        if zero(fp) || zero(fc) || zero(fnx) {
            continue;
        }
        let same_sign = (fp < 0.0) == (fc < 0.0) && (fc < 0.0) == (fnx < 0.0);
        if !same_sign || !(fc.abs() < fp.abs() && fc.abs() <= fnx.abs()) {
            continue;
        }
        let (a, b) = if periodic {
            (param(i - 1), param(i + 1))
        } else {
            (ts[ip], ts[inx])
        };
        let Some(t) = refine_extremum(g, a, b) else {
            continue;
        };
        let r = g(t);
        if r.abs() <= TANGENT_BAND {
            let t_out = if periodic { lo + (t - lo).rem_euclid(hi - lo) } else { t };
            roots.push(ScanRoot {
                t: t_out,
                residual: r,
                bracket: (a, b),
                tangent: true,
            });
        }
    }

    roots.sort_by(|x, y| x.t.total_cmp(&y.t));
    roots
}

/// Global extrema of `g` over `[lo, hi]`: grid search refined by
/// derivative bisection. Returns `((argmin, min), (argmax, max))`.
pub fn extrema<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64, resolution: usize) -> ((f64, f64), (f64, f64)) {
    let n = resolution.max(2);
    let step = (hi - lo) / n as f64;
    let ts: Vec<f64> = (0..=n).map(|i| if i == n { hi } else { lo + i as f64 * step }).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    let pick = |better: &dyn Fn(f64, f64) -> bool| {
        let mut k = 0;
        for i in 1..=n {
            if better(vals[i], vals[k]) {
                k = i;
            }
        }
        let a = ts[k.saturating_sub(1)];
        let b = ts[(k + 1).min(n)];
        let t = if k > 0 && k < n {
            refine_extremum(g, a, b).unwrap_or(ts[k])
        } else {
            ts[k]
        };
        (t, g(t))
    };
    let min = pick(&|x, y| x < y);
    let max = pick(&|x, y| x > y);
    (min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn finds_simple_roots() {
        let r = scan(&|t: f64| t.cos(), 0.0, 2.0 * PI, 100, false);
        assert_eq!(r.len(), 2);
        assert!((r[0].t - PI / 2.0).abs() < 1e-14);
        assert!((r[1].t - 1.5 * PI).abs() < 1e-14);
        assert!(r.iter().all(|x| x.residual.abs() <= 1e-10 && !x.tangent));
    }

    #[test]
    fn periodic_grid_zero_not_duplicated() {
        let r = scan(&|t: f64| t.sin(), 0.0, 2.0 * PI, 64, true);
        let ts: Vec<f64> = r.iter().map(|x| x.t).collect();
        assert_eq!(ts.len(), 2, "{ts:?}");
        assert_eq!(ts[0], 0.0);
        assert!((ts[1] - PI).abs() < 1e-12);
    }

    #[test]
    fn periodic_wrap_cell() {
        // root just below 2π lies in the wrap-around cell
        let r = scan(&|t: f64| (t - 0.01).sin(), 0.0, 2.0 * PI, 10, true);
        assert_eq!(r.len(), 2);
        assert!((r[0].t - 0.01).abs() < 1e-12);
    }

    #[test]
    fn tangent_root() {
        let g = |t: f64| (t - 0.3137).powi(2);
        let r = scan(&g, -1.0, 1.0, 50, false);
        assert_eq!(r.len(), 1);
        assert!(r[0].tangent);
        assert!((r[0].t - 0.3137).abs() < 1e-6);
    }

    #[test]
    fn near_miss_is_not_tangent() {
        let g = |t: f64| (t - 0.3).powi(2) + 1e-4;
        assert!(scan(&g, -1.0, 1.0, 50, false).is_empty());
    }

    #[test]
    fn extrema_of_parabola() {
        let ((tmin, fmin), (tmax, fmax)) = extrema(&|t: f64| -(t - 0.4).powi(2), -1.0, 1.0, 64);
        assert!((tmax - 0.4).abs() < 1e-9);
        assert!(fmax.abs() < 1e-15);
        assert_eq!(tmin, -1.0);
        assert!((fmin + 1.96).abs() < 1e-12);
    }
}
