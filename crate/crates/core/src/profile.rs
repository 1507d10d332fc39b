//! Generating curves `t ↦ (f(t), h(t))` of surfaces of revolution.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::spline::CubicSpline;

/// Length of the parameter window attached to invariant-family profiles
/// whose admissible interval is unbounded on a side.
pub const INVARIANT_WINDOW: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileJet {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
}

impl ProfileJet {
    pub fn speed(&self) -> f64 {
        self.df.hypot(self.dh)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Cylinder { radius: f64 },
    Torus { r: f64, big_r: f64 },
    Cone { a: f64, b: f64 },
    Catenoid,
    Cycloid { a: f64 },
    Hyperboloid,
    /// `f = (a + c e^{−m s + b}) / m`, arclength, height anchored at `s_ref`.
    Invariant { a: f64, b: f64, c: f64, m: f64, s_ref: f64 },
    Table { f: CubicSpline, h: CubicSpline },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    name: String,
    kind: ProfileKind,
    domain: (f64, f64),
    /// Whether each endpoint is excluded (the profile meets the axis or
    /// degenerates there).
    open_ends: (bool, bool),
    periodic: bool,
    arclength: bool,
}

impl ProfileCurve {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn open_ends(&self) -> (bool, bool) {
        self.open_ends
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn is_arclength(&self) -> bool {
        self.arclength
    }

    /// Restricts the parameter interval (kept inside the natural domain).
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        let (a, b) = self.domain;
        if !(lo < hi) || lo < a || hi > b {
            return Err(GeomError::BadParameters(format!(
                "domain [{lo}, {hi}] is not inside [{a}, {b}]"
            )));
        }
        self.open_ends = (self.open_ends.0 && lo == a, self.open_ends.1 && hi == b);
        self.periodic = self.periodic && lo == a && hi == b;
        self.domain = (lo, hi);
        Ok(self)
    }

    /// Scan interval: open ends pulled inward by `shrink`.
    pub fn scan_interval(&self, shrink: f64) -> (f64, f64) {
        let (mut lo, mut hi) = self.domain;
        if self.open_ends.0 {
            lo += shrink;
        }
        if self.open_ends.1 {
            hi -= shrink;
        }
        (lo, hi)
    }

    pub fn jet(&self, t: f64) -> ProfileJet {
        match &self.kind {
            ProfileKind::Cylinder { radius } => ProfileJet {
                f: *radius,
                df: 0.0,
                d2f: 0.0,
                h: t,
                dh: 1.0,
                d2h: 0.0,
            },
            ProfileKind::Torus { r, big_r } => {
                let (s, c) = (t / r).sin_cos();
                ProfileJet {
                    f: big_r + r * c,
                    df: -s,
                    d2f: -c / r,
                    h: r * s,
                    dh: c,
                    d2h: -s / r,
                }
            }
            ProfileKind::Cone { a, b } => ProfileJet {
                f: a * t,
                df: *a,
                d2f: 0.0,
                h: b * t,
                dh: *b,
                d2h: 0.0,
            },
            ProfileKind::Catenoid => ProfileJet {
                f: t.cosh(),
                df: t.sinh(),
                d2f: t.cosh(),
                h: t,
                dh: 1.0,
                d2h: 0.0,
            },
            ProfileKind::Cycloid { a } => {
                let (s, c) = t.sin_cos();
                ProfileJet {
                    f: a * (1.0 - c),
                    df: a * s,
                    d2f: a * c,
                    h: a * (t - s),
                    dh: a * (1.0 - c),
                    d2h: a * s,
                }
            }
            ProfileKind::Hyperboloid => ProfileJet {
                f: t.cosh(),
                df: t.sinh(),
                d2f: t.cosh(),
                h: t.sinh(),
                dh: t.cosh(),
                d2h: t.sinh(),
            },
            ProfileKind::Invariant { a, b, c, m, s_ref } => invariant_jet(*a, *b, *c, *m, *s_ref, t),
            ProfileKind::Table { f, h } => {
                let (f0, f1, f2) = f.eval(t);
                let (h0, h1, h2) = h.eval(t);
                ProfileJet {
                    f: f0,
                    df: f1,
                    d2f: f2,
                    h: h0,
                    dh: h1,
                    d2h: h2,
                }
            }
        }
    }

    /// Signed geodesic curvature of the parallel through `t`, traversed in
    /// increasing rotation angle.
    pub fn parallel_curvature(&self, t: f64) -> f64 {
        let j = self.jet(t);
        if self.arclength {
            j.df / j.f
        } else {
            j.df / (j.f * j.speed())
        }
    }

    /// Gauss curvature of the surface of revolution along the parallel `t`.
    pub fn gauss_curvature(&self, t: f64) -> f64 {
        let j = self.jet(t);
        if self.arclength {
            -j.d2f / j.f
        } else {
            let s2 = j.df * j.df + j.dh * j.dh;
            j.dh * (j.df * j.d2h - j.d2f * j.dh) / (j.f * s2 * s2)
        }
    }

    pub fn cylinder(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GeomError::NonpositiveInput("radius"));
        }
        Ok(Self {
            name: "cylinder".into(),
            kind: ProfileKind::Cylinder { radius },
            domain: (-5.0, 5.0),
            open_ends: (false, false),
            periodic: false,
            arclength: true,
        })
    }

    pub fn torus(r: f64, big_r: f64) -> Result<Self> {
        if !(r > 0.0 && r < big_r && big_r.is_finite()) {
            return Err(GeomError::BadTorusParameters { r, big_r });
        }
        Ok(Self {
            name: "torus".into(),
            kind: ProfileKind::Torus { r, big_r },
            domain: (0.0, 2.0 * PI * r),
            open_ends: (false, false),
            periodic: true,
            arclength: true,
        })
    }

    /// Cone `(a t, b t)` with `a² + b² = 1` on `(0, t_max]`.
    pub fn cone(a: f64, b: f64, t_max: f64) -> Result<Self> {
        if !(a > 0.0) || ((a * a + b * b) - 1.0).abs() > 1e-12 {
            return Err(GeomError::BadParameters(
                "cone needs a > 0 and a² + b² = 1".into(),
            ));
        }
        if !(t_max > 0.0) {
            return Err(GeomError::NonpositiveInput("t_max"));
        }
        Ok(Self {
            name: "cone".into(),
            kind: ProfileKind::Cone { a, b },
            domain: (0.0, t_max),
            open_ends: (true, false),
            periodic: false,
            arclength: true,
        })
    }

    pub fn catenoid() -> Self {
        Self {
            name: "catenoid".into(),
            kind: ProfileKind::Catenoid,
            domain: (-5.0, 5.0),
            open_ends: (false, false),
            periodic: false,
            arclength: false,
        }
    }

    pub fn cycloid(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(GeomError::NonpositiveInput("a"));
        }
        Ok(Self {
            name: "cycloid".into(),
            kind: ProfileKind::Cycloid { a },
            domain: (0.0, 2.0 * PI),
            open_ends: (true, true),
            periodic: false,
            arclength: false,
        })
    }

    pub fn hyperboloid() -> Self {
        Self {
            name: "hyperboloid".into(),
            kind: ProfileKind::Hyperboloid,
            domain: (-5.0, 5.0),
            open_ends: (false, false),
            periodic: false,
            arclength: false,
        }
    }

    /// Bugle surface `f = e^{−μ s}` (the unit cylinder when `μ = 0`).
    pub fn bugle(mu: f64) -> Result<Self> {
        if mu == 0.0 {
            return Self::cylinder(1.0);
        }
        let mut p = gmf_invariant_profile(0.0, 0.0, mu, mu)?;
        p.name = "bugle".into();
        Ok(p)
    }

    /// Profile interpolated from samples `(t, f, h)` by natural cubic splines.
    pub fn table(ts: &[f64], fs: &[f64], hs: &[f64]) -> Result<Self> {
        if let Some((&t, _)) = ts.iter().zip(fs).find(|(_, &f)| !(f > 0.0)) {
            return Err(GeomError::AxisContact { t });
        }
        let f = CubicSpline::natural(ts, fs)?;
        let h = CubicSpline::natural(ts, hs)?;
        let domain = f.domain();
        Ok(Self {
            name: "profile-table".into(),
            kind: ProfileKind::Table { f, h },
            domain,
            open_ends: (false, false),
            periodic: false,
            arclength: false,
        })
    }
}

fn invariant_jet(a: f64, b: f64, c: f64, m: f64, s_ref: f64, s: f64) -> ProfileJet {
    let e = (-m * s + b).exp();
    let w = c * e;
    let height = |s: f64| {
        if c == 0.0 {
            s
        } else {
            let w = c * (-m * s + b).exp();
            let q = (1.0 - w * w).max(0.0).sqrt();
            (q.atanh() - q) / m
        }
    };
    let q = (1.0 - w * w).max(0.0).sqrt();
    ProfileJet {
        f: (a + w) / m,
        df: -w,
        d2f: m * w,
        h: if c == 0.0 { s - s_ref } else { height(s) - height(s_ref) },
        dh: q,
        d2h: if q > 0.0 { m * w * w / q } else { f64::INFINITY },
    }
}

/// Admissible interval of the invariant family: `f > 0` and `f'² ≤ 1`.
fn invariant_domain(a: f64, b: f64, c: f64, m: f64) -> Result<(f64, f64, bool, bool)> {
    if c == 0.0 {
        return if a / m > 0.0 {
            Ok((-0.5 * INVARIANT_WINDOW, 0.5 * INVARIANT_WINDOW, false, false))
        } else {
            Err(GeomError::EmptyDomain)
        };
    }
    // admissible E = e^{−ms+b} interval (e_lo, e_hi]; ends flagged open when f → 0
    let mut e_lo = 0.0f64;
    let mut e_hi = 1.0 / c.abs();
    let (mut lo_open, mut hi_open) = (true, false);
    if m > 0.0 {
        if c < 0.0 {
            let cut = a / c.abs();
            if cut <= e_hi {
                e_hi = cut;
                hi_open = true;
            }
        } else if a + c * e_hi <= 0.0 {
            return Err(GeomError::EmptyDomain);
        }
    } else {
        if c > 0.0 {
            return Err(GeomError::EmptyDomain);
        }
        let cut = a / c.abs();
        if cut >= e_lo {
            e_lo = cut;
            lo_open = true;
        }
    }
    if !(e_lo < e_hi) {
        return Err(GeomError::EmptyDomain);
    }
    let to_s = |e: f64| (b - e.ln()) / m;
    // s decreases with E when m > 0
    let (mut s_lo, mut s_hi, mut open_lo, mut open_hi) = if m > 0.0 {
        (to_s(e_hi), to_s(e_lo), hi_open, lo_open)
    } else {
        (to_s(e_lo), to_s(e_hi), lo_open, hi_open)
    };
    if !s_lo.is_finite() && !s_hi.is_finite() {
        return Err(GeomError::EmptyDomain);
    }
    if !s_hi.is_finite() {
        s_hi = s_lo + INVARIANT_WINDOW;
        open_hi = false;
    }
    if !s_lo.is_finite() {
        s_lo = s_hi - INVARIANT_WINDOW;
        open_lo = false;
    }
    Ok((s_lo, s_hi, open_lo, open_hi))
}

/// Profile of the rotationally invariant Gaussian-field family
/// `f(s) = (a + c e^{−m s + b}) / m`, arclength-parametrized, on the
/// parameter interval where `f > 0` and `f'² ≤ 1`.
pub fn gmf_invariant_profile(a: f64, b: f64, c: f64, m: f64) -> Result<ProfileCurve> {
    if m == 0.0 || ![a, b, c, m].iter().all(|x| x.is_finite()) {
        return Err(GeomError::BadParameters("invariant family needs finite parameters and m != 0".into()));
    }
    if a < 0.0 {
        return Err(GeomError::BadParameters("invariant family needs a >= 0".into()));
    }
    let (lo, hi, open_lo, open_hi) = invariant_domain(a, b, c, m)?;
    Ok(ProfileCurve {
        name: "invariant".into(),
        kind: ProfileKind::Invariant {
            a,
            b,
            c,
            m,
            s_ref: lo,
        },
        domain: (lo, hi),
        open_ends: (open_lo, open_hi),
        periodic: false,
        arclength: true,
    })
}

/// Catalog lookup by name with named parameters.
pub fn named_profile(name: &str, params: &[(&str, f64)]) -> Result<ProfileCurve> {
    let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
    let need = |key: &str| {
        get(key).ok_or_else(|| GeomError::BadParameters(format!("{name} needs parameter `{key}`")))
    };
    match name {
        "catenoid" => Ok(ProfileCurve::catenoid()),
        "hyperboloid" => Ok(ProfileCurve::hyperboloid()),
        "cylinder" => ProfileCurve::cylinder(get("radius").unwrap_or(1.0)),
        "cycloid" => ProfileCurve::cycloid(need("a")?),
        "cone" => ProfileCurve::cone(need("a")?, need("b")?, get("t_max").unwrap_or(50.0)),
        "torus" => ProfileCurve::torus(need("r")?, need("R")?),
        "bugle" => ProfileCurve::bugle(need("mu")?),
        other => Err(GeomError::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_arclength_flags() {
        let arc = [
            named_profile("torus", &[("r", 1.0), ("R", 2.0)]).unwrap(),
            named_profile("cone", &[("a", 0.6), ("b", 0.8)]).unwrap(),
            named_profile("bugle", &[("mu", 0.5)]).unwrap(),
            named_profile("cylinder", &[]).unwrap(),
        ];
        assert!(arc.iter().all(|p| p.is_arclength()));
        let non = [
            named_profile("catenoid", &[]).unwrap(),
            named_profile("cycloid", &[("a", 1.0)]).unwrap(),
            named_profile("hyperboloid", &[]).unwrap(),
        ];
        assert!(non.iter().all(|p| !p.is_arclength()));
    }

    #[test]
    fn catalog_errors() {
        assert_eq!(
            named_profile("pseudosphere", &[]),
            Err(GeomError::UnknownName("pseudosphere".into()))
        );
        assert!(matches!(
            named_profile("cone", &[("a", 0.6), ("b", 0.6)]),
            Err(GeomError::BadParameters(_))
        ));
        assert!(matches!(
            named_profile("torus", &[("r", 2.0), ("R", 1.0)]),
            Err(GeomError::BadTorusParameters { .. })
        ));
    }

    #[test]
    fn cone_and_cycloid_values() {
        let cone = ProfileCurve::cone(0.6, 0.8, 50.0).unwrap();
        assert_eq!(cone.jet(3.0).f, 0.6 * 3.0);
        assert!((cone.parallel_curvature(2.0) - 0.5).abs() < 1e-15);
        let cyc = ProfileCurve::cycloid(1.0).unwrap();
        assert_eq!(cyc.domain(), (0.0, 2.0 * PI));
        assert!((cyc.jet(1.0).f - (1.0 - 1f64.cos())).abs() < 1e-15);
    }

    #[test]
    fn catenoid_curvature_at_golden_parameter() {
        let cat = ProfileCurve::catenoid();
        let t = (1.0 + 2f64.sqrt()).ln();
        assert!((cat.parallel_curvature(t) - 0.5).abs() < 1e-15);
        // K = −1/cosh⁴
        assert!((cat.gauss_curvature(0.7) + 1.0 / 0.7f64.cosh().powi(4)).abs() < 1e-14);
    }

    #[test]
    fn arclength_profiles_have_unit_speed() {
        let ps = [
            ProfileCurve::torus(0.7, 2.3).unwrap(),
            ProfileCurve::cone(0.6, 0.8, 10.0).unwrap(),
            ProfileCurve::bugle(0.8).unwrap(),
            gmf_invariant_profile(1.0, 0.3, -0.4, 1.5).unwrap(),
        ];
        for p in &ps {
            let (lo, hi) = p.scan_interval(1e-6);
            for k in 0..=20 {
                let t = lo + (hi - lo) * k as f64 / 20.0;
                assert!((p.jet(t).speed() - 1.0).abs() <= 1e-8, "{} at {t}", p.name());
            }
        }
    }

    #[test]
    fn bugle_has_constant_negative_curvature() {
        for mu in [0.5, -1.3] {
            let p = ProfileCurve::bugle(mu).unwrap();
            let (lo, hi) = p.domain();
            for k in 0..=10 {
                let t = lo + (hi - lo) * k as f64 / 10.0;
                assert!((p.gauss_curvature(t) + mu * mu).abs() < 1e-12);
                assert!((p.jet(t).f - (-mu * t).exp()).abs() <= 1e-12 * p.jet(t).f);
            }
        }
    }

    #[test]
    fn invariant_domains() {
        let p = gmf_invariant_profile(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.domain(), (1.0, 1.0 + INVARIANT_WINDOW));
        let cyl = gmf_invariant_profile(2.0, 0.0, 0.0, 4.0).unwrap();
        assert_eq!(cyl.jet(1.3).f, 0.5);
        assert_eq!(cyl.gauss_curvature(0.2), 0.0);
        assert_eq!(gmf_invariant_profile(0.0, 0.0, 0.0, 1.0), Err(GeomError::EmptyDomain));
        assert_eq!(gmf_invariant_profile(1.0, 0.0, 1.0, -1.0), Err(GeomError::EmptyDomain));
        // m < 0 with c < 0: f = (a + cE)/m > 0 needs E > a/|c|
        let p = gmf_invariant_profile(0.5, 0.0, -1.0, -1.0).unwrap();
        let (lo, hi) = p.scan_interval(1e-9);
        for t in [lo, 0.5 * (lo + hi), hi] {
            let j = p.jet(t);
            assert!(j.f > 0.0 && j.df * j.df <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn table_profile_tracks_samples() {
        let ts: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 * 0.01).collect();
        let fs: Vec<f64> = ts.iter().map(|t| t.cosh()).collect();
        let p = ProfileCurve::table(&ts, &fs, &ts).unwrap();
        let want = ProfileCurve::catenoid().parallel_curvature(0.3);
        assert!((p.parallel_curvature(0.3) - want).abs() < 1e-6);
        assert!(matches!(
            ProfileCurve::table(&[0.0, 1.0, 2.0, 3.0], &[1.0, 0.0, 1.0, 1.0], &[0.0; 4]),
            Err(GeomError::AxisContact { t }) if t == 1.0
        ));
    }
}
