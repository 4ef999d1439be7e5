//! Lorentz–Minkowski 3-space with signature (−,+,+), paracomplex numbers,
//! stereographic projections of de Sitter 2-space, and O(2,1).

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Distance from a projection pole below which π and π_L refuse to evaluate.
pub const PROJ_EPS: f64 = 1e-10;

/// Entrywise tolerance for `mᵀ η m = η`.
pub const LORENTZ_TOL: f64 = 1e-12;

/// Scalars a [`Vec3L`] can carry: plain reals or jets.
pub trait Component:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
}

impl<T> Component for T where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T> + Mul<f64, Output = T>
{
}

/// A vector of L³. Index 0 is the timelike direction.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3L<T = f64>(pub [T; 3]);

/// Jet-valued vector: every component carries its s-derivatives.
pub type JetVec = Vec3L<Jet>;

impl<T: fmt::Debug> fmt::Debug for Vec3L<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Vec3L").field(&self.0).finish()
    }
}

impl<T> Index<usize> for Vec3L<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl Vec3L<f64> {
    pub const E1: Vec3L = Vec3L([1.0, 0.0, 0.0]);
    pub const E2: Vec3L = Vec3L([0.0, 1.0, 0.0]);
    pub const E3: Vec3L = Vec3L([0.0, 0.0, 1.0]);
    pub const ZERO: Vec3L = Vec3L([0.0, 0.0, 0.0]);

    pub fn new(x1: f64, x2: f64, x3: f64) -> Vec3L {
        Vec3L([x1, x2, x3])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Euclidean norm of the coordinates (not the Lorentzian length).
    pub fn coord_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

impl<T: Component> Vec3L<T> {
    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Vec3L<U> {
        Vec3L([f(&self.0[0]), f(&self.0[1]), f(&self.0[2])])
    }

    /// ⟨u,v⟩ = −u₁v₁ + u₂v₂ + u₃v₃.
    pub fn mdot(&self, v: &Self) -> T {
        let [a0, a1, a2] = self.0.clone();
        let [b0, b1, b2] = v.0.clone();
        a1 * b1 + a2 * b2 - a0 * b0
    }

    /// Lorentzian cross product, characterised by ⟨u×v, w⟩ = det(u, v, w).
    pub fn mcross(&self, v: &Self) -> Self {
        let [a0, a1, a2] = self.0.clone();
        let [b0, b1, b2] = v.0.clone();
        let e0 = a1.clone() * b2.clone() - a2.clone() * b1.clone();
        let e1 = a2 * b0.clone() - a0.clone() * b2;
        let e2 = a0 * b1 - a1 * b0;
        Vec3L([-e0, e1, e2])
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|x| x.clone() * k)
    }

    pub fn scale_by(&self, k: &T) -> Self {
        self.map(|x| x.clone() * k.clone())
    }
}

/// Determinant of the matrix with columns `u, v, w`.
pub fn det<T: Component>(u: &Vec3L<T>, v: &Vec3L<T>, w: &Vec3L<T>) -> T {
    u.mcross(v).mdot(w)
}

impl<T: Component> Add for Vec3L<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = rhs.0;
        Vec3L([a0 + b0, a1 + b1, a2 + b2])
    }
}

impl<T: Component> Sub for Vec3L<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = rhs.0;
        Vec3L([a0 - b0, a1 - b1, a2 - b2])
    }
}

impl<T: Component> Neg for Vec3L<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let [a0, a1, a2] = self.0;
        Vec3L([-a0, -a1, -a2])
    }
}

impl<T: Component> Mul<f64> for Vec3L<T> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl Vec3L<Jet> {
    pub fn value(&self) -> Vec3L {
        self.map(|j| j.value())
    }

    /// Component-wise d/ds.
    pub fn differentiate(&self) -> JetVec {
        Vec3L([
            self.0[0].differentiate(),
            self.0[1].differentiate(),
            self.0[2].differentiate(),
        ])
    }

    /// Value of the `k`-th derivative.
    pub fn derivative(&self, k: usize) -> Vec3L {
        self.map(|j| j.derivative(k))
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn from_values(base: f64, v: Vec3L, order: usize) -> JetVec {
        v.map(|x| Jet::constant(base, *x, order))
    }
}

// ---- paracomplex numbers ---------------------------------------------------

/// z = re + j·im with j² = +1.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ParaComplex {
    pub re: f64,
    pub im: f64,
}

impl ParaComplex {
    pub const J: ParaComplex = ParaComplex { re: 0.0, im: 1.0 };

    pub fn new(re: f64, im: f64) -> ParaComplex {
        ParaComplex { re, im }
    }

    pub fn conj(self) -> ParaComplex {
        ParaComplex::new(self.re, -self.im)
    }

    /// |z|² = z z̄ = re² − im², possibly negative.
    pub fn sqmod(self) -> f64 {
        self.re * self.re - self.im * self.im
    }

    /// Multiplication by the unit j.
    pub fn mul_j(self) -> ParaComplex {
        ParaComplex::new(self.im, self.re)
    }
}

impl Add for ParaComplex {
    type Output = ParaComplex;
    fn add(self, w: ParaComplex) -> ParaComplex {
        ParaComplex::new(self.re + w.re, self.im + w.im)
    }
}

impl Sub for ParaComplex {
    type Output = ParaComplex;
    fn sub(self, w: ParaComplex) -> ParaComplex {
        ParaComplex::new(self.re - w.re, self.im - w.im)
    }
}

impl Mul for ParaComplex {
    type Output = ParaComplex;
    fn mul(self, w: ParaComplex) -> ParaComplex {
        ParaComplex::new(self.re * w.re + self.im * w.im, self.re * w.im + self.im * w.re)
    }
}

impl Mul<f64> for ParaComplex {
    type Output = ParaComplex;
    fn mul(self, k: f64) -> ParaComplex {
        ParaComplex::new(self.re * k, self.im * k)
    }
}

impl Neg for ParaComplex {
    type Output = ParaComplex;
    fn neg(self) -> ParaComplex {
        ParaComplex::new(-self.re, -self.im)
    }
}

// ---- stereographic projections ----------------------------------------------

const DESITTER_TOL: f64 = 1e-9;

fn check_desitter(p: &Vec3L) -> Result<()> {
    let residual = p.mdot(p) - 1.0;
    if residual.abs() > DESITTER_TOL * (1.0 + p.coord_norm().powi(2)) {
        return Err(Error::NotOnDeSitter { residual });
    }
    Ok(())
}

/// π(x) = x₁/(1+x₃) + j x₂/(1+x₃).
pub fn stereo_pi(p: &Vec3L) -> Result<ParaComplex> {
    check_desitter(p)?;
    let d = 1.0 + p[2];
    if d.abs() <= PROJ_EPS {
        return Err(Error::Pole {
            sign: '+',
            denom: d.abs(),
        });
    }
    Ok(ParaComplex::new(p[0] / d, p[1] / d))
}

/// π_L(x) = x₁/(1−x₃) + j x₂/(1−x₃).
pub fn stereo_pi_l(p: &Vec3L) -> Result<ParaComplex> {
    check_desitter(p)?;
    let d = 1.0 - p[2];
    if d.abs() <= PROJ_EPS {
        return Err(Error::Pole {
            sign: '-',
            denom: d.abs(),
        });
    }
    Ok(ParaComplex::new(p[0] / d, p[1] / d))
}

fn inverse_denominator(z: ParaComplex, sign: char) -> Result<f64> {
    let d = 1.0 - z.sqmod();
    if d.abs() <= PROJ_EPS {
        return Err(Error::Pole { sign, denom: d.abs() });
    }
    Ok(d)
}

/// Inverse of [`stereo_pi`]: (2 Re z, 2 Im z, 1 + |z|²) / (1 − |z|²).
pub fn stereo_pi_inv(z: ParaComplex) -> Result<Vec3L> {
    let d = inverse_denominator(z, '+')?;
    Ok(Vec3L::new(2.0 * z.re / d, 2.0 * z.im / d, (1.0 + z.sqmod()) / d))
}

/// Inverse of [`stereo_pi_l`]: (2 Re z, 2 Im z, −(1 + |z|²)) / (1 − |z|²).
pub fn stereo_pi_l_inv(z: ParaComplex) -> Result<Vec3L> {
    let d = inverse_denominator(z, '-')?;
    Ok(Vec3L::new(2.0 * z.re / d, 2.0 * z.im / d, -(1.0 + z.sqmod()) / d))
}

// ---- O(2,1) -----------------------------------------------------------------

pub type Mat3 = [[f64; 3]; 3];

const ETA: [f64; 3] = [-1.0, 1.0, 1.0];

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Largest entry of |mᵀ η m − η|.
pub fn is_lorentz(m: &Mat3) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let g: f64 = (0..3).map(|k| m[k][i] * ETA[k] * m[k][j]).sum();
            let target = if i == j { ETA[i] } else { 0.0 };
            worst = worst.max((g - target).abs());
        }
    }
    worst
}

/// Chart of O(2,1): `F · R(φ) · Boost(χ) · R(ψ)`, where `R` rotates the
/// (x₂, x₃)-plane, `Boost` mixes x₁ and x₂, and `F` applies the optional
/// time reversal `diag(−1,1,1)` and spatial reflection `diag(1,1,−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorentzParams {
    pub phi: f64,
    pub chi: f64,
    pub psi: f64,
    pub time_reversal: bool,
    pub reflection: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzTransform {
    pub m: Mat3,
    pub params: LorentzParams,
}

fn rotation(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
}

fn boost(chi: f64) -> Mat3 {
    let (s, c) = (chi.sinh(), chi.cosh());
    [[c, s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

impl LorentzTransform {
    pub fn identity() -> LorentzTransform {
        LorentzTransform::from_params(LorentzParams::default())
    }

    pub fn from_params(p: LorentzParams) -> LorentzTransform {
        let mut m = mat_mul(&mat_mul(&rotation(p.phi), &boost(p.chi)), &rotation(p.psi));
        if p.time_reversal {
            for x in m[0].iter_mut() {
                *x = -*x;
            }
        }
        if p.reflection {
            for x in m[2].iter_mut() {
                *x = -*x;
            }
        }
        LorentzTransform { m, params: p }
    }

    pub fn boost(chi: f64) -> LorentzTransform {
        LorentzTransform::from_params(LorentzParams {
            chi,
            ..Default::default()
        })
    }

    pub fn rotation(phi: f64) -> LorentzTransform {
        LorentzTransform::from_params(LorentzParams {
            phi,
            ..Default::default()
        })
    }

    /// Validates a user-supplied matrix and recovers its chart parameters.
    pub fn from_matrix(m: Mat3) -> Result<LorentzTransform> {
        let scale = m.iter().flatten().fold(1.0f64, |a, x| a.max(x.abs()));
        let residual = is_lorentz(&m);
        if residual > LORENTZ_TOL * scale * scale {
            return Err(Error::NotLorentz { residual });
        }
        let time_reversal = m[0][0] < 0.0;
        let reflection = (mat_det(&m) < 0.0) != time_reversal;
        let mut p = m;
        if time_reversal {
            for x in p[0].iter_mut() {
                *x = -*x;
            }
        }
        if reflection {
            for x in p[2].iter_mut() {
                *x = -*x;
            }
        }
        // p = R(φ) B(χ) R(ψ): row 0 = (cosh χ, sinh χ cos ψ, −sinh χ sin ψ),
        // column 0 = (cosh χ, cos φ sinh χ, sin φ sinh χ).
        let chi = p[0][0].max(1.0).acosh();
        let (phi, psi) = if chi.sinh() > 1e-8 {
            (p[2][0].atan2(p[1][0]), (-p[0][2]).atan2(p[0][1]))
        } else {
            (p[2][1].atan2(p[1][1]), 0.0)
        };
        Ok(LorentzTransform::from_params(LorentzParams {
            phi,
            chi,
            psi,
            time_reversal,
            reflection,
        }))
    }

    pub fn det(&self) -> f64 {
        mat_det(&self.m)
    }

    pub fn is_orthochronous(&self) -> bool {
        self.m[0][0] > 0.0
    }

    pub fn apply(&self, v: &Vec3L) -> Vec3L {
        let m = &self.m;
        Vec3L(std::array::from_fn(|i| {
            m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2]
        }))
    }

    pub fn apply_jet(&self, v: &JetVec) -> JetVec {
        let m = &self.m;
        Vec3L(std::array::from_fn(|i| {
            &(&(&v.0[0] * m[i][0]) + &(&v.0[1] * m[i][1])) + &(&v.0[2] * m[i][2])
        }))
    }
}
