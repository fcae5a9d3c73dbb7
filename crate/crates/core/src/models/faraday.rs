use std::fmt;

use num_complex::Complex64 as C64;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::ModelError;
use crate::charfun::{find_roots, CharFunError, CharacteristicFunction, NewtonOptions, Provenance};

const I: C64 = C64::new(0.0, 1.0);

/// Liquid layer depth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Depth {
    /// Depth in cm.
    Finite(f64),
    Infinite,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(l) => write!(f, "{l}"),
            Depth::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Depth::Finite(l) => s.serialize_f64(*l),
            Depth::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Depth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(l) => Ok(Depth::Finite(l)),
            Repr::Word(w)
                if w.eq_ignore_ascii_case("infinite") || w.eq_ignore_ascii_case("inf") =>
            {
                Ok(Depth::Infinite)
            }
            Repr::Word(w) => Err(de::Error::custom(format!(
                "depth must be a number or \"infinite\", got {w:?}"
            ))),
        }
    }
}

/// Viscous capillary-gravity waves on a liquid layer, cgs units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaradayParams {
    /// Density (g/cm³).
    pub rho: f64,
    /// Kinematic viscosity (cm²/s).
    pub nu: f64,
    /// Surface tension (g/s²).
    #[serde(alias = "T")]
    pub tension: f64,
    /// Steady gravity (cm/s²).
    pub g0: f64,
    /// Wavenumber (1/cm).
    pub alpha: f64,
    pub depth: Depth,
}

impl FaradayParams {
    /// ρ = 0.95 g/cm³, ν = 0.1 cm²/s, T = 70 g/s², g₀ = 1000 cm/s², α = 5 cm⁻¹.
    pub fn reference(depth: Depth) -> Self {
        FaradayParams {
            rho: 0.95,
            nu: 0.1,
            tension: 70.0,
            g0: 1000.0,
            alpha: 5.0,
            depth,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let mut checks = vec![
            ("rho", self.rho),
            ("nu", self.nu),
            ("tension", self.tension),
            ("g0", self.g0),
            ("alpha", self.alpha),
        ];
        if let Depth::Finite(l) = self.depth {
            checks.push(("depth", l));
        }
        for (name, value) in checks {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ModelError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    /// `τ = Tα² + ρg₀`.
    pub fn tau(&self) -> f64 {
        self.tension * self.alpha.powi(2) + self.rho * self.g0
    }

    /// Inviscid surface-wave frequency `√(g₀α + Tα³/ρ)`.
    pub fn inviscid_frequency(&self) -> f64 {
        (self.g0 * self.alpha + self.tension * self.alpha.powi(3) / self.rho).sqrt()
    }

    /// Seed for the surface mode with positive frequency:
    /// `−2να² + i√(g₀α + Tα³/ρ)`.
    pub fn surface_seed(&self) -> C64 {
        C64::new(
            -2.0 * self.nu * self.alpha.powi(2),
            self.inviscid_frequency(),
        )
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        FaradayParams { alpha, ..*self }
    }

    pub fn with_depth(&self, depth: Depth) -> Self {
        FaradayParams { depth, ..*self }
    }
}

/// The characteristic function for either depth.
pub fn faraday_charfun(p: &FaradayParams) -> Result<Box<dyn CharacteristicFunction>, ModelError> {
    p.validate()?;
    Ok(match p.depth {
        Depth::Finite(l) => Box::new(FaradayFinite::new(*p, l)?),
        Depth::Infinite => Box::new(FaradayInfinite::new(*p)?),
    })
}

fn surface_pair(cf: &dyn CharacteristicFunction, p: &FaradayParams) -> Result<C64, CharFunError> {
    let found = find_roots(cf, &[p.surface_seed()], 1, &NewtonOptions::default())?;
    let s = found.roots[0];
    if s.im <= 0.0 {
        return Err(CharFunError::SeedExhausted {
            found: 0,
            wanted: 1,
        });
    }
    Ok(s)
}

/// Infinite depth:
/// `f(σ) = (σ + 2να²)²/α − 4α²ν^{3/2}√(σ + να²) + Tα²/ρ + g₀`,
/// principal square root.
#[derive(Clone, Debug)]
pub struct FaradayInfinite {
    p: FaradayParams,
    surface: C64,
}

impl FaradayInfinite {
    pub fn new(p: FaradayParams) -> Result<Self, ModelError> {
        p.validate()?;
        let mut cf = FaradayInfinite {
            p,
            surface: C64::new(0.0, 0.0),
        };
        cf.surface = surface_pair(&cf, &p)?;
        Ok(cf)
    }

    fn root_arg(&self, sigma: C64) -> Result<C64, CharFunError> {
        let w = sigma + self.p.nu * self.p.alpha.powi(2);
        if w.re < 0.0 && w.im.abs() <= 1e-14 * w.norm() {
            return Err(CharFunError::BranchCut { sigma });
        }
        Ok(w.sqrt())
    }

    /// Upper surface mode.
    pub fn surface_mode(&self) -> C64 {
        self.surface
    }
}

impl CharacteristicFunction for FaradayInfinite {
    fn value(&self, sigma: C64) -> Result<C64, CharFunError> {
        let FaradayParams {
            rho,
            nu,
            tension,
            g0,
            alpha,
            ..
        } = self.p;
        let a2 = alpha * alpha;
        let r = self.root_arg(sigma)?;
        Ok(
            (sigma + 2.0 * nu * a2).powi(2) / alpha - 4.0 * a2 * nu.powf(1.5) * r
                + tension * a2 / rho
                + g0,
        )
    }

    fn derivative(&self, sigma: C64) -> Result<C64, CharFunError> {
        let FaradayParams { nu, alpha, .. } = self.p;
        let a2 = alpha * alpha;
        let r = self.root_arg(sigma)?;
        Ok(2.0 * (sigma + 2.0 * nu * a2) / alpha - 2.0 * a2 * nu.powf(1.5) / r)
    }

    /// Only the surface pair; the rest of the spectrum is continuous.
    fn eigenvalues(&self, count: usize) -> Result<Vec<C64>, CharFunError> {
        if count > 2 {
            return Err(CharFunError::NotEnumerable(Provenance::FaradayInfinite));
        }
        Ok([self.surface, self.surface.conj()][..count].to_vec())
    }

    fn spectrum_size(&self) -> Option<usize> {
        Some(2)
    }

    fn provenance(&self) -> Provenance {
        Provenance::FaradayInfinite
    }
}

/// `(sin x, cos x)·e^{−|Im x|}`.
fn scaled_trig(x: C64) -> (C64, C64) {
    let (a, y) = (x.re, x.im);
    let e = (-2.0 * y.abs()).exp();
    let ch = 0.5 * (1.0 + e);
    let sh = 0.5 * (1.0 - e) * y.signum();
    let (s, c) = a.sin_cos();
    (C64::new(s * ch, c * sh), C64::new(c * ch, -s * sh))
}

/// Terms of `H`, `H₁` and their σ-derivatives, all multiplied by the common
/// factor `e^{−αL − |Im βL|}` so that nothing overflows.
#[derive(Clone, Copy, Debug)]
struct Parts {
    beta: C64,
    h0: C64,
    dh0: C64,
    w: C64,
    dw: C64,
}

/// Finite depth `L`: `f(σ) = H₀(σ)/(ρH₁(σ)) + g₀ = H(σ)/(ρH₁(σ))` with
///
/// `H = d₀ + αd_s sinh(αL) sin(βL) + βd_c cosh(αL) cos(βL) + τd_τ(α cosh(αL) sin(βL) − β sinh(αL) cos(βL))`
///
/// and `β = i√(σ/ν + α²)`. `H` is odd in `β`, so `f` does not depend on the
/// branch of the square root.
#[derive(Clone, Debug)]
pub struct FaradayFinite {
    p: FaradayParams,
    depth: f64,
    surface: C64,
}

impl FaradayFinite {
    pub fn new(p: FaradayParams, depth: f64) -> Result<Self, ModelError> {
        let p = p.with_depth(Depth::Finite(depth));
        p.validate()?;
        let mut cf = FaradayFinite {
            p,
            depth,
            surface: C64::new(0.0, 0.0),
        };
        cf.surface = surface_pair(&cf, &p)?;
        Ok(cf)
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    /// Upper surface mode.
    pub fn surface_mode(&self) -> C64 {
        self.surface
    }

    fn parts(&self, sigma: C64) -> Result<Parts, CharFunError> {
        let FaradayParams {
            rho,
            nu,
            tension,
            alpha,
            ..
        } = self.p;
        let l = self.depth;
        let a2 = alpha * alpha;
        let q = sigma / nu + a2;
        if q.norm() <= 1e-14 * a2 {
            return Err(CharFunError::BranchCut { sigma });
        }
        let beta = I * q.sqrt();
        let dbeta = -1.0 / (2.0 * nu * beta);
        let bl = beta * l;
        let (sn, cs) = scaled_trig(bl);
        let dsn = l * dbeta * cs;
        let dcs = -l * dbeta * sn;
        let e2 = (-2.0 * alpha * l).exp();
        let sh = 0.5 * (1.0 - e2);
        let ch = 0.5 * (1.0 + e2);
        let scale = (-alpha * l - bl.im.abs()).exp();

        let d0 = -4.0 * a2 * beta * nu * (2.0 * a2 * nu + sigma);
        let dd0 = -4.0 * a2 * nu * (dbeta * (2.0 * a2 * nu + sigma) + beta);
        let dc = sigma * sigma + 4.0 * a2 * nu * sigma + 8.0 * a2 * a2 * nu * nu;
        let ddc = 2.0 * sigma + 4.0 * a2 * nu;
        let ds = -dc - 4.0 * a2 * nu * sigma;
        let dds = -ddc - 4.0 * a2 * nu;
        let dt = -alpha / rho;

        let w = dt * (alpha * ch * sn - beta * sh * cs);
        let dw = dt * (alpha * ch * dsn - dbeta * sh * cs - beta * sh * dcs);
        let ta = tension * a2;
        let h0 = d0 * scale + alpha * ds * sh * sn + beta * dc * ch * cs + ta * w;
        let dh0 = dd0 * scale
            + alpha * sh * (dds * sn + ds * dsn)
            + ch * (dbeta * dc * cs + beta * ddc * cs + beta * dc * dcs)
            + ta * dw;
        Ok(Parts {
            beta,
            h0,
            dh0,
            w,
            dw,
        })
    }

    fn full(&self, pt: &Parts) -> (C64, C64) {
        let rg = self.p.rho * self.p.g0;
        (pt.h0 + rg * pt.w, pt.dh0 + rg * pt.dw)
    }

    /// `H(σ)/β` up to a positive factor: entire in σ and real on the real
    /// axis.
    fn reduced(&self, sigma: C64) -> Result<C64, CharFunError> {
        let pt = self.parts(sigma)?;
        Ok(self.full(&pt).0 / pt.beta)
    }

    /// Real roots on `σ = −ν(α² + b²)`, `b > 0`, and on `σ ∈ (−να², 0)`, in
    /// descending order, stopping once `count` have been found.
    fn viscous_roots(&self, count: usize) -> Result<Vec<C64>, CharFunError> {
        let FaradayParams { nu, alpha, .. } = self.p;
        let a2 = alpha * alpha;
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return Ok(out);
        }
        let g = |s: f64| -> Result<f64, CharFunError> { Ok(self.reduced(C64::new(s, 0.0))?.re) };

        // σ = ν(t² − α²), t ∈ (0, α): slow modes between the branch point and 0.
        let n_t = 64;
        let ts: Vec<f64> = (0..=n_t)
            .map(|k| alpha * (1e-6 + (1.0 - 2e-6) * k as f64 / n_t as f64))
            .collect();
        let mut upper = Vec::new();
        for w in ts.windows(2).rev() {
            let (s1, s0) = (nu * (w[1] * w[1] - a2), nu * (w[0] * w[0] - a2));
            let (g1, g0) = (g(s1)?, g(s0)?);
            if g1 * g0 < 0.0 {
                upper.push(illinois(&g, s0, s1, g0, g1)?);
            }
        }
        out.extend(
            upper
                .into_iter()
                .filter(|s| s.abs() > 1e-6 * nu * a2)
                .map(|s| C64::new(s, 0.0)),
        );

        // σ = −ν(α² + b²), b > 0: the shear modes.
        let step = std::f64::consts::PI / (16.0 * self.depth);
        let max_steps = 16 * (count + 64) * 4;
        let sig = |b: f64| -nu * (a2 + b * b);
        let mut b0 = 1e-3 * step;
        let mut g0 = g(sig(b0))?;
        for _ in 0..max_steps {
            if out.len() >= count {
                break;
            }
            let b1 = b0 + step;
            let g1 = g(sig(b1))?;
            if g0 * g1 < 0.0 {
                let gb = |b: f64| g(sig(b));
                let b = illinois(&gb, b0, b1, g0, g1)?;
                out.push(C64::new(sig(b), 0.0));
            }
            b0 = b1;
            g0 = g1;
        }
        if out.len() < count {
            return Err(CharFunError::SeedExhausted {
                found: out.len(),
                wanted: count,
            });
        }
        out.truncate(count);
        Ok(out)
    }
}

/// Illinois false position on a sign-changing bracket, to full precision.
fn illinois<F>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64, CharFunError>
where
    F: Fn(f64) -> Result<f64, CharFunError>,
{
    let mut side = 0i8;
    for _ in 0..200 {
        if fa == 0.0 {
            return Ok(a);
        }
        if fb == 0.0 {
            return Ok(b);
        }
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() <= 4.0 * f64::EPSILON * c.abs().max(f64::MIN_POSITIVE)
            || c <= a.min(b)
            || c >= a.max(b)
        {
            return Ok(c.clamp(a.min(b), a.max(b)));
        }
        let fc = f(c)?;
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            side = 0;
        } else {
            fa *= if side == 1 { 0.5 } else { 1.0 };
            side = 1;
        }
        b = c;
        fb = fc;
    }
    Ok(b)
}

impl CharacteristicFunction for FaradayFinite {
    fn value(&self, sigma: C64) -> Result<C64, CharFunError> {
        let pt = self.parts(sigma)?;
        if pt.w.norm() == 0.0 {
            return Err(CharFunError::AtPole { sigma });
        }
        Ok(pt.h0 / (self.p.rho * pt.w) + self.p.g0)
    }

    fn derivative(&self, sigma: C64) -> Result<C64, CharFunError> {
        let pt = self.parts(sigma)?;
        if pt.w.norm() == 0.0 {
            return Err(CharFunError::AtPole { sigma });
        }
        Ok((pt.dh0 * pt.w - pt.h0 * pt.dw) / (self.p.rho * pt.w * pt.w))
    }

    /// `f′ = H′/(ρH₁)` where `H = 0`.
    fn derivative_at_root(&self, sigma: C64) -> Result<C64, CharFunError> {
        let pt = self.parts(sigma)?;
        if pt.w.norm() == 0.0 {
            return Err(CharFunError::AtPole { sigma });
        }
        Ok(self.full(&pt).1 / (self.p.rho * pt.w))
    }

    /// Surface pair first (upper, then its conjugate), then real viscous
    /// modes by descending real part.
    fn eigenvalues(&self, count: usize) -> Result<Vec<C64>, CharFunError> {
        let mut out = vec![self.surface, self.surface.conj()];
        out.truncate(count);
        if count > 2 {
            out.extend(self.viscous_roots(count - 2)?);
        }
        Ok(out)
    }

    fn spectrum_size(&self) -> Option<usize> {
        None
    }

    fn provenance(&self) -> Provenance {
        Provenance::FaradayFinite
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(l: f64) -> FaradayFinite {
        FaradayFinite::new(FaradayParams::reference(Depth::Finite(l)), l).unwrap()
    }

    fn fd<F: Fn(C64) -> C64>(f: F, s: C64) -> C64 {
        let h = 1e-5 * (1.0 + s.norm());
        (f(s + h) - f(s - h)) / (2.0 * h)
    }

    #[test]
    fn surface_mode_for_unit_depth() {
        let s = finite(1.0).surface_mode();
        assert!((s - C64::new(-4.484006, 118.694864)).norm() < 1e-5);
    }

    #[test]
    fn infinite_surface_mode() {
        let cf = FaradayInfinite::new(FaradayParams::reference(Depth::Infinite)).unwrap();
        let s = cf.surface_mode();
        assert!(s.re < 0.0);
        let w = FaradayParams::reference(Depth::Infinite).inviscid_frequency();
        assert!((s.im - w).abs() < 0.2 * w);
        assert!((s - C64::new(-4.482603, 118.701293)).norm() < 1e-5);
    }

    #[test]
    fn derivatives_match_differences() {
        let cf = finite(2.0);
        let inf = FaradayInfinite::new(FaradayParams::reference(Depth::Infinite)).unwrap();
        for s in [
            C64::new(-3.0, 40.0),
            C64::new(1.0, -200.0),
            C64::new(-30.0, 5.0),
        ] {
            let want = fd(|z| cf.value(z).unwrap(), s);
            assert!((cf.derivative(s).unwrap() - want).norm() <= 1e-6 * want.norm());
            let want = fd(|z| inf.value(z).unwrap(), s);
            assert!((inf.derivative(s).unwrap() - want).norm() <= 1e-6 * want.norm());
        }
    }

    #[test]
    fn even_in_beta() {
        // Flipping the branch of β leaves H/H₁ unchanged, so f agrees just
        // above and below the cut.
        let cf = finite(1.0);
        let s = -10.0;
        let a = cf.value(C64::new(s, 1e-12)).unwrap();
        let b = cf.value(C64::new(s, -1e-12)).unwrap();
        assert!((a - b).norm() <= 1e-8 * a.norm());
    }

    #[test]
    fn viscous_roots_are_real_negative_and_zeros() {
        let cf = finite(1.0);
        let ev = cf.eigenvalues(42).unwrap();
        assert_eq!(ev.len(), 42);
        for s in &ev[2..] {
            assert!(s.re < 0.0 && s.im == 0.0);
            let pt = cf.parts(*s).unwrap();
            let (h, dh) = cf.full(&pt);
            assert!(h.norm() <= 1e-9 * dh.norm() * (1.0 + s.norm()));
        }
        for w in ev[2..].windows(2) {
            assert!(w[0].re > w[1].re);
        }
        assert!((ev[2].re + 3.9377).abs() < 1e-3);
    }

    #[test]
    fn large_depth_converges_to_infinite_depth() {
        let inf = FaradayInfinite::new(FaradayParams::reference(Depth::Infinite)).unwrap();
        let deep = finite(4.0);
        for s in [C64::new(-3.0, 40.0), C64::new(-50.0, 300.0)] {
            let a = inf.value(s).unwrap();
            assert!((deep.value(s).unwrap() - a).norm() <= 1e-10 * a.norm());
        }
    }

    #[test]
    fn depth_serde() {
        let d: Depth = serde_json::from_str("\"infinite\"").unwrap();
        assert_eq!(d, Depth::Infinite);
        let d: Depth = serde_json::from_str("2.5").unwrap();
        assert_eq!(d, Depth::Finite(2.5));
        assert!(serde_json::from_str::<Depth>("\"shallow\"").is_err());
    }
}
