//! Closed forms used as golden references, in the text syntax accepted by
//! [`RationalFunc::parse`].

use prodloop_algebra::RationalFunc;

pub const W01: &str = "-(2z+3)/(1+z)";

pub const TILDE_W02: &str =
    "(z2^2 z1^2 + 2(z2 z1^2 + z2^2 z1) + z1^2 + z2^2 + 4 z2 z1)/(z2 z1^2 + z2^2 z1 + z1^2 + z2^2 + z2 z1)^2";

pub const W02: &str = "1/(z1-z2)^2";

pub const W11: &str = "(z^4+7z^3+21z^2+24z+9)/(z^2 (2z+3)^4)";

pub const W21: &str = "(9z^9+153z^8+1284z^7+4227z^6+7626z^5+9246z^4+8280z^3+5220z^2+1971z+324)/(z^3 (2z+3)^10)";

pub const W03: &str = "24/((2z1+3)^2 (2z2+3)^2 (2z3+3)^2)";

/// Numerator of `w_{1,2}`; 49 terms, symmetric, degree 12.
pub const W12_POL: &str = "\
    128 z2^6 z1^6 + 1280 z2^5 z1^6 + 6144 z2^4 z1^6 + 12288 z2^3 z1^6 + 12480 z2^2 z1^6 + 6912 \
    z2 z1^6 + 1728 z1^6 + 1280 z2^6 z1^5 + 12800 z2^5 z1^5 + 55680 z2^4 z1^5 + 108672 z2^3 z1^5 \
    + 111168 z2^2 z1^5 + 62208 z2 z1^5 + 15552 z1^5 + 6144 z2^6 z1^4 + 55680 z2^5 z1^4 + 215352 \
    z2^4 z1^4 + 405000 z2^3 z1^4 + 414234 z2^2 z1^4 + 233280 z2 z1^4 + 58320 z1^4 + 12288 z2^6 \
    z1^3 + 108672 z2^5 z1^3 + 405000 z2^4 z1^3 + 768312 z2^3 z1^3 + 809838 z2^2 z1^3 + 466560 \
    z2 z1^3 + 116640 z1^3 + 12480 z2^6 z1^2 + 111168 z2^5 z1^2 + 414234 z2^4 z1^2 + 809838 z2^3 \
    z1^2 + 888165 z2^2 z1^2 + 524880 z2 z1^2 + 131220 z1^2 + 6912 z2^6 z1 + 62208 z2^5 z1 + \
    233280 z2^4 z1 + 466560 z2^3 z1 + 524880 z2^2 z1 + 314928 z2 z1 + 78732 z1 + 1728 z2^6 + \
    15552 z2^5 + 58320 z2^4 + 116640 z2^3 + 131220 z2^2 + 78732 z2 + 19683\
";

pub const W12_DEN: &str = "z1^2 (2z1+3)^6 z2^2 (2z2+3)^6";

/// The golden `w_{g,n}` (shifted form for `(0,2)`) as a rational function.
pub fn golden_w(g: u32, n: usize) -> Option<RationalFunc> {
    let src = match (g, n) {
        (0, 1) => W01.to_string(),
        (0, 2) => W02.to_string(),
        (1, 1) => W11.to_string(),
        (2, 1) => W21.to_string(),
        (0, 3) => W03.to_string(),
        (1, 2) => format!("({W12_POL})/({W12_DEN})"),
        _ => return None,
    };
    Some(RationalFunc::parse(&src, n).expect("golden expression parses"))
}

pub fn golden_tilde_w02() -> RationalFunc {
    RationalFunc::parse(TILDE_W02, 2).expect("golden expression parses")
}

/// Upper triangle of the planar two-point table `c^[0]_{i,j}`, rows `i = 1..7`, `j = i..7`.
pub const TWO_POINT_TABLE: [&[u64]; 7] = [
    &[3, 20, 126, 792, 5005, 31824, 203490],
    &[150, 1008, 6600, 42900, 278460, 1808800],
    &[7056, 47520, 315315, 2079168, 13674528],
    &[326700, 2202200, 14702688, 97675200],
    &[15030015, 101359440, 678978300],
    &[689244192, 4649339520],
    &[31549089600],
];
