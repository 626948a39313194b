//! Text layout of resolvents: expanded numerator over a factored denominator.

use prodloop_core::algebra::{rat, BigRational, MultiPoly, RationalFunc};
use prodloop_core::solver::Entry;

fn name(n: usize, v: usize) -> String {
    MultiPoly::default_var_name(n, v)
}

fn power(base: String, e: u32) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// Writes `den` as `c * prod z_i^a (2 z_i + 3)^b` when it splits that way.
fn split_denominator(den: &MultiPoly) -> Option<(BigRational, Vec<(usize, u32, u32)>)> {
    let n = den.nvars();
    let mut d = den.clone();
    let mut exps = Vec::new();
    for i in 0..n {
        let z = MultiPoly::var(n, i);
        let t = &z.scale(&rat(2)) + &MultiPoly::from_int(n, 3);
        let mut a = 0;
        while let Some(q) = d.div_exact(&z) {
            d = q;
            a += 1;
        }
        let mut b = 0;
        while let Some(q) = d.div_exact(&t) {
            d = q;
            b += 1;
        }
        exps.push((i, a, b));
    }
    d.as_constant().map(|c| (c, exps))
}

pub fn rational(w: &RationalFunc) -> String {
    let n = w.nvars();
    let Some((c, exps)) = split_denominator(w.den()) else {
        return w.to_string();
    };
    let num = w.num().scale(&c.recip());
    let mut parts = Vec::new();
    for (i, a, b) in exps {
        let v = name(n, i);
        if a > 0 {
            parts.push(power(v.clone(), a));
        }
        if b > 0 {
            parts.push(power(format!("(2*{v} + 3)"), b));
        }
    }
    let num = num.render(|v| name(n, v));
    if parts.is_empty() {
        return num;
    }
    format!("({num})/({})", parts.join(" "))
}

pub fn entry(e: &Entry) -> String {
    let args: Vec<String> = (0..e.n).map(|v| name(e.n, v)).collect();
    format!("w_{{{},{}}}({}) = {}", e.g, e.n, args.join(","), rational(&e.w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_layout() {
        let w = RationalFunc::parse("(z^4+7z^3+21z^2+24z+9)/(z^2 (2z+3)^4)", 1).unwrap();
        let s = rational(&w);
        assert!(s.ends_with("/(z^2 (2*z + 3)^4)"), "{s}");
        let w03 = RationalFunc::parse("24/((2z1+3)^2 (2z2+3)^2 (2z3+3)^2)", 3).unwrap();
        assert_eq!(rational(&w03), "(24)/((2*z1 + 3)^2 (2*z2 + 3)^2 (2*z3 + 3)^2)");
    }

    #[test]
    fn other_denominators_fall_back() {
        let w = RationalFunc::parse("1/(z1-z2)^2", 2).unwrap();
        assert_eq!(rational(&w), w.to_string());
    }
}
