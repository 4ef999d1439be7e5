#![allow(dead_code)]

use bscroll_core::Vec3L;

/// Composite 5-point Gauss–Legendre quadrature.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * h;
            (0..5).map(|k| W[k] * f(mid + 0.5 * h * X[k])).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// Closed-form tanh frame with `H = 1`.
pub fn tanh_abc(s: f64) -> [Vec3L; 3] {
    let (ch, sh) = ((2.0 * s).cosh(), (2.0 * s).sinh());
    [
        Vec3L::new(ch, 1.0, -sh),
        Vec3L::new(ch / 2.0, -0.5, -sh / 2.0),
        Vec3L::new(sh, 0.0, -ch),
    ]
}

/// The displayed tanh B-scroll, `½(sinh2s + t cosh2s, 2s − t, −1 − cosh2s − t sinh2s)`.
pub fn tanh_f_l(s: f64, t: f64) -> Vec3L {
    let (ch, sh) = ((2.0 * s).cosh(), (2.0 * s).sinh());
    Vec3L::new(sh + t * ch, 2.0 * s - t, -1.0 - ch - t * sh) * 0.5
}

/// The displayed tanh Nil₃ surface,
/// `½(sinh2s + t cosh2s, 2s − t, −½ − st cosh2s + (−s + t/2) sinh2s)`.
pub fn tanh_f_nil(s: f64, t: f64) -> Vec3L {
    let (ch, sh) = ((2.0 * s).cosh(), (2.0 * s).sinh());
    Vec3L::new(sh + t * ch, 2.0 * s - t, -0.5 - s * t * ch + (-s + t / 2.0) * sh) * 0.5
}

pub fn s_plus() -> f64 {
    0.25 * (5.0 + 2.0 * 6f64.sqrt()).ln()
}

pub fn s_minus() -> f64 {
    0.25 * (5.0 - 2.0 * 6f64.sqrt()).ln()
}

pub fn close(a: &Vec3L, b: &Vec3L, tol: f64) -> bool {
    (*a - *b).max_abs() <= tol
}

/// Generators from the worked examples, with the range each is studied on.
pub const GENERATORS: [(&str, (f64, f64)); 3] = [
    ("tanh(s)", (-1.0, 1.0)),
    ("s + s^3", (-1.0, 1.0)),
    ("cot(exp(s)/2)", (-1.0, 1.0)),
];
