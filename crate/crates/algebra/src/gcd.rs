//! Polynomial gcd by recursive content removal and primitive remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::poly::MultiPoly;

/// Greatest common divisor over the integers: integer content gcd times the
/// primitive gcd, normalized to a positive leading coefficient.
///
/// `gcd(6z, 4z^2) = 2z`. Rational coefficients are handled through their
/// rational content (gcd of numerators over lcm of denominators).
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    assert_eq!(a.nvars(), b.nvars(), "gcd operands use different variable sets");
    if a.is_zero() && b.is_zero() {
        return MultiPoly::zero(a.nvars());
    }
    let c = if a.is_zero() {
        b.content()
    } else if b.is_zero() {
        a.content()
    } else {
        rational_gcd(&a.content(), &b.content())
    };
    gcd_primitive(a, b).scale(&c)
}

fn rational_gcd(x: &BigRational, y: &BigRational) -> BigRational {
    let n: BigInt = x.numer().gcd(y.numer());
    let d: BigInt = x.denom().lcm(y.denom());
    BigRational::new(n, d)
}

/// Primitive gcd (integer content discarded), positive leading coefficient.
pub fn gcd_primitive(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars();
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(n);
    }
    if a == b {
        return a.primitive_part();
    }
    // trial division catches the common case of one argument dividing the other
    let (pa, pb) = (a.primitive_part(), b.primitive_part());
    if pa.len() <= pb.len() && pb.div_exact(&pa).is_some() {
        return pa;
    }
    if pb.len() < pa.len() && pa.div_exact(&pb).is_some() {
        return pb;
    }
    let v = (0..n)
        .rev()
        .find(|&v| a.uses_var(v) || b.uses_var(v))
        .expect("non-constant polynomial uses a variable");
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 {
        return gcd_primitive(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd_primitive(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let g_content = gcd_primitive(&ca, &cb);
    let mut r0 = a.div_exact(&ca).expect("content divides polynomial").primitive_part();
    let mut r1 = b.div_exact(&cb).expect("content divides polynomial").primitive_part();
    if (0..n).any(|u| u != v && (r0.uses_var(u) || r1.uses_var(u))) && coprime_by_evaluation(&r0, &r1, v) {
        return g_content;
    }
    if r0.degree_in(v) < r1.degree_in(v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    loop {
        let r = pseudo_remainder(&r0, &r1, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            r1 = MultiPoly::one(n);
            break;
        }
        r0 = r1;
        r1 = primitive_in(&r, v);
    }
    (&g_content * &primitive_in(&r1, v)).primitive_part()
}

/// Sufficient test that `a` and `b` share no factor of positive degree in `v`:
/// specialize the other variables at points where both leading coefficients
/// survive and check that the univariate images are coprime. Any common factor
/// would keep its degree in `v` under such a specialization.
fn coprime_by_evaluation(a: &MultiPoly, b: &MultiPoly, v: usize) -> bool {
    const POINTS: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    let n = a.nvars();
    let lca = a.coefficients_in(v).pop().expect("nonzero");
    let lcb = b.coefficients_in(v).pop().expect("nonzero");
    for attempt in 0..3 {
        let pts: Vec<BigRational> = (0..n)
            .map(|u| BigRational::from_integer(BigInt::from(POINTS[(u + 3 * attempt) % POINTS.len()] + attempt as i64)))
            .collect();
        let mut full = pts.clone();
        full[v] = BigRational::from_integer(BigInt::from(0));
        if lca.evaluate(&full) == full[v] || lcb.evaluate(&full) == full[v] {
            continue;
        }
        let (mut ia, mut ib) = (a.clone(), b.clone());
        for (u, p) in pts.iter().enumerate() {
            if u != v {
                ia = ia.partial_eval(u, p);
                ib = ib.partial_eval(u, p);
            }
        }
        return gcd_primitive(&ia, &ib).is_constant();
    }
    false
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = MultiPoly::zero(p.nvars());
    for c in coeffs {
        g = gcd_primitive(&g, &c);
        if g.is_constant() {
            return MultiPoly::one(p.nvars());
        }
    }
    g
}

fn primitive_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides polynomial").primitive_part()
}

/// `lc(b)^(deg a - deg b + 1) * a mod b` with respect to `v`.
pub fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let n = a.nvars();
    let db = b.degree_in(v) as usize;
    let bc = b.coefficients_in(v);
    let lcb = bc[db].clone();
    let mut r = a.coefficients_in(v);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<MultiPoly> = r.iter().map(|c| c * &lcb).collect();
        for (k, c) in bc.iter().enumerate() {
            if !c.is_zero() {
                next[k + shift] = &next[k + shift] - &(c * &lcr);
            }
        }
        while next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        debug_assert!(next.len() <= dr);
        r = next;
    }
    let r = MultiPoly::from_coefficients_in(n, v, &r);
    if r.is_zero() {
        return r;
    }
    // keep coefficient growth in check
    let c = r.content();
    r.scale(&c.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn shared_linear_factor() {
        let a = MultiPoly::univariate(&[-1, 0, 1]);
        let b = MultiPoly::univariate(&[-1, 1]);
        assert_eq!(poly_gcd(&a, &b), b);
    }

    #[test]
    fn content_and_variable() {
        let a = MultiPoly::univariate(&[0, 6]);
        let b = MultiPoly::univariate(&[0, 0, 4]);
        assert_eq!(poly_gcd(&a, &b), MultiPoly::univariate(&[0, 2]));
    }

    #[test]
    fn bivariate_common_factor() {
        let d = &z(2, 0) - &z(2, 1);
        let a = &d.pow(2) * &(&z(2, 0) + &MultiPoly::one(2));
        let b = &d * &z(2, 1);
        let g = poly_gcd(&a, &b);
        assert_eq!(g, d);
        assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
    }

    #[test]
    fn coprime_inputs() {
        let a = &z(2, 0).pow(2) + &z(2, 1);
        let b = &z(2, 0) + &MultiPoly::from_int(2, 3);
        assert!(poly_gcd(&a, &b).is_one());
    }

    #[test]
    fn rational_coefficients() {
        let a = MultiPoly::univariate(&[1, 1]).scale(&BigRational::new(1.into(), 2.into()));
        let b = MultiPoly::univariate(&[1, 1]).scale(&rat(3));
        assert_eq!(poly_gcd(&a, &b), a);
    }
}
