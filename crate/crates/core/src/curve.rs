//! The genus-zero spectral curve `x^2 y^3 - x y + 1 = 0` and its rational
//! parametrization `x(z) = z^3/(1+z)`, `y(z) = -(1+z)/z^2`.
//!
//! The Newton polygon of the curve has no interior lattice point, so the
//! curve has genus zero and the parametrization is global.

use num_bigint::BigInt;
use num_complex::Complex64;
use prodloop_algebra::{frac, rat, BigRational, MultiPoly, RationalFunc};

use crate::quadrature::integrate;
use crate::CoreError;

/// A point of the z-sphere or x-sphere.
#[derive(Clone, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(BigRational),
    Infinity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ramification {
    pub z: SpherePoint,
    pub x: SpherePoint,
    /// Order of vanishing of `dx` at the point.
    pub order: u32,
}

#[derive(Clone, Debug)]
pub struct CurveData {
    pub x_of_z: RationalFunc,
    pub y_of_z: RationalFunc,
    pub sigma_of_z: RationalFunc,
    pub xprime_of_z: RationalFunc,
    pub ramification: Vec<Ramification>,
    /// Preimage of `x = infinity` on the physical sheet, where `y ~ 1/x`.
    pub physical_sheet: BigRational,
}

fn parse1(s: &str) -> RationalFunc {
    RationalFunc::parse(s, 1).expect("valid curve expression")
}

/// `P(x, y) = x^2 y^3 - x y + 1` in variables `(x, y) = (z1, z2)`.
pub fn curve_polynomial() -> RationalFunc {
    RationalFunc::parse("z1^2 z2^3 - z1 z2 + 1", 2).expect("valid polynomial")
}

pub fn build_curve() -> CurveData {
    let x = parse1("z^3/(1+z)");
    let y = parse1("-(1+z)/z^2");
    let one = RationalFunc::one(1);
    let three = RationalFunc::from_int(1, 3);
    let sigma = &(&one - &(&(&three * &x) * &(&y * &y))) / &x;
    let xp = x.diff(0).expect("single variable");
    CurveData {
        x_of_z: x,
        y_of_z: y,
        sigma_of_z: sigma,
        xprime_of_z: xp,
        ramification: vec![
            Ramification { z: SpherePoint::Finite(rat(0)), x: SpherePoint::Finite(rat(0)), order: 2 },
            Ramification { z: SpherePoint::Finite(frac(-3, 2)), x: SpherePoint::Finite(frac(27, 4)), order: 1 },
            Ramification { z: SpherePoint::Infinity, x: SpherePoint::Infinity, order: 1 },
        ],
        physical_sheet: rat(-1),
    }
}

/// `w_{0,1}(z) = y(z) x'(z) = -(2z+3)/(1+z)`.
pub fn w01() -> RationalFunc {
    parse1("-(2z+3)/(1+z)")
}

/// Fuss-Catalan number `C_p[D] = binom(D p, p) / ((D-1) p + 1)`.
pub fn fuss_catalan(p: u64, d: u64) -> BigInt {
    assert!(d >= 2, "Fuss-Catalan order must be at least 2");
    let mut b = BigInt::from(1u32);
    // binom(D p, p) by the multiplicative formula
    for i in 0..p {
        b = b * BigInt::from(d * p - i) / BigInt::from(i + 1);
    }
    b / BigInt::from((d - 1) * p + 1)
}

pub fn x_numeric(z: Complex64) -> Complex64 {
    z * z * z / (1.0 + z)
}

pub fn y_numeric(z: Complex64) -> Complex64 {
    -(1.0 + z) / (z * z)
}

/// The two non-trivial deck transformations, principal square root.
/// Branch 1 behaves like `exp(-2 i pi / 3) z` near the origin.
pub fn deck_eval(branch: u8, z: Complex64) -> Result<Complex64, CoreError> {
    if (z + 1.0).norm() < 1e-300 {
        return Err(CoreError::Domain("deck transformations have a pole at z = -1".into()));
    }
    let root = z * ((z - 3.0) * (1.0 + z)).sqrt();
    let s = match branch {
        1 => z * z + z + root,
        2 => z * z + z - root,
        _ => return Err(CoreError::Domain(format!("deck branch must be 1 or 2, got {branch}"))),
    };
    Ok(-0.5 * s / (1.0 + z))
}

/// Limiting eigenvalue density of `S_2`, supported on `(0, 27/4]`.
pub fn density_rho01(x: f64) -> f64 {
    if !(x > 0.0 && x < 6.75) {
        return 0.0;
    }
    let s = (81.0 - 12.0 * x).sqrt() + 9.0;
    let c = 2f64.powf(2.0 / 3.0) * 3f64.cbrt();
    let v = s.powf(2.0 / 3.0) / (c * x.powf(4.0 / 3.0)) + c / (s * x).powf(2.0 / 3.0) - 2.0 / x;
    v.max(0.0).sqrt() / (2.0 * std::f64::consts::PI)
}

/// Roots of `x^2 w^3 - x w + 1` by Durand-Kerner iteration.
pub fn cubic_roots(x: f64) -> [Complex64; 3] {
    // monic form: w^3 - w / x + 1 / x^2
    let a1 = -1.0 / x;
    let a0 = 1.0 / (x * x);
    let p = |w: Complex64| w * w * w + a1 * w + a0;
    let seed = Complex64::new(0.4, 0.9);
    let scale = (1.0 / x.abs()).sqrt().max(1.0);
    let mut r = [seed * scale, seed * seed * scale, seed * seed * seed * scale];
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..3 {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    den *= r[i] - r[j];
                }
            }
            let step = p(r[i]) / den;
            r[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    r
}

/// Independent density evaluation: `|Im W_{0,1}(x)| / pi` from the cubic.
pub fn density_from_cubic(x: f64) -> f64 {
    if !(x > 0.0 && x < 6.75) {
        return 0.0;
    }
    let im = cubic_roots(x).iter().map(|w| w.im.abs()).fold(0.0, f64::max);
    im / std::f64::consts::PI
}

/// `G(u) = (K+(-27u/4) - K-(-27u/4)) / sqrt(-3u)` with
/// `K±(s) = (sqrt(1+s) ± sqrt(s))^(1/3)`, the generating function of `C_p[3]`.
pub fn w01_explicit_check(u: Complex64) -> Result<Complex64, CoreError> {
    if u.im == 0.0 && u.re >= 4.0 / 27.0 {
        return Err(CoreError::Domain(format!("u = {u} lies on the branch cut [4/27, inf)")));
    }
    if u.norm() < 1e-14 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let s = -27.0 * u / 4.0;
    let a = (1.0 + s).sqrt();
    let b = s.sqrt();
    let kp = (a + b).powf(1.0 / 3.0);
    let km = (a - b).powf(1.0 / 3.0);
    Ok((kp - km) / (-3.0 * u).sqrt())
}

/// `int_0^{27/4} x^k rho(x) dx`, with `x = t^3` to tame the origin.
pub fn density_moment(k: u32) -> f64 {
    let tmax = 6.75f64.cbrt();
    integrate(|t| {
        let x = t * t * t;
        x.powi(k as i32) * density_rho01(x) * 3.0 * t * t
    }, 0.0, tmax, 1e-13)
}

/// Mass of `rho` on `[a, b]`.
pub fn density_mass(a: f64, b: f64) -> f64 {
    let (a, b) = (a.max(0.0), b.min(6.75));
    if b <= a {
        return 0.0;
    }
    let (ta, tb) = (a.cbrt(), b.cbrt());
    integrate(|t| density_rho01(t * t * t) * 3.0 * t * t, ta, tb, 1e-13)
}

pub fn xprime_factored() -> MultiPoly {
    parse1("z^2 (2z+3)").num().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_parametrization() {
        let c = build_curve();
        assert_eq!(c.x_of_z.evaluate(&[frac(-3, 2)]).unwrap(), frac(27, 4));
        assert_eq!(c.x_of_z.evaluate(&[rat(3)]).unwrap(), frac(27, 4));
        assert_eq!(c.y_of_z.evaluate(&[frac(-3, 2)]).unwrap(), frac(2, 9));
        assert!(c.xprime_of_z.equals(&parse1("(2z^3+3z^2)/(1+z)^2")));
        assert_eq!(c.xprime_of_z.num(), &xprime_factored());
    }

    #[test]
    fn fuss_catalan_values() {
        assert_eq!(fuss_catalan(2, 3), BigInt::from(3));
        assert_eq!(fuss_catalan(4, 3), BigInt::from(55));
        assert_eq!(fuss_catalan(3, 2), BigInt::from(5));
        assert_eq!(fuss_catalan(0, 3), BigInt::from(1));
    }

    #[test]
    fn density_edges() {
        assert_eq!(density_rho01(6.75), 0.0);
        assert_eq!(density_rho01(7.0), 0.0);
        assert_eq!(density_rho01(-1.0), 0.0);
        assert!(density_rho01(1.0) > 0.0);
    }

    #[test]
    fn explicit_g_at_origin() {
        assert_eq!(w01_explicit_check(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        assert!(w01_explicit_check(Complex64::new(1.0, 0.0)).is_err());
    }
}
