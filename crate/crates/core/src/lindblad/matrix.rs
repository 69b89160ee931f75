// SPDX-License-Identifier: Apache-2.0

//! Fixed-size 2×2 complex matrix used for qubit operators and states.
//!
//! Index 0 is the ground level |1⟩, index 1 the excited level |2⟩.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMat2 {
    pub entries: [[C64; 2]; 2],
}

impl ComplexMat2 {
    pub const fn new(entries: [[C64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub const fn zeros() -> Self {
        Self::new([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn from_real(entries: [[f64; 2]; 2]) -> Self {
        Self::new([
            [C64::new(entries[0][0], 0.0), C64::new(entries[0][1], 0.0)],
            [C64::new(entries[1][0], 0.0), C64::new(entries[1][1], 0.0)],
        ])
    }

    /// |i⟩⟨j| with 0-based indices.
    pub fn ket_bra(i: usize, j: usize) -> Self {
        let mut m = Self::zeros();
        m.entries[i][j] = ONE;
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i][j]
    }

    pub fn dagger(&self) -> Self {
        let e = &self.entries;
        Self::new([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Self {
        let e = &self.entries;
        Self::new([[e[0][0], e[1][0]], [e[0][1], e[1][1]]])
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|z| z.is_finite())
    }

    /// ‖A − A†‖_F
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).frobenius_norm()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    pub fn scale(&self, s: C64) -> Self {
        let e = &self.entries;
        Self::new([[e[0][0] * s, e[0][1] * s], [e[1][0] * s, e[1][1] * s]])
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let b = 0.5 * (self.entries[0][1] + self.entries[1][0].conj());
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }

    /// Column-stacking vectorization: [m00, m10, m01, m11].
    pub fn vec(&self) -> [C64; 4] {
        let e = &self.entries;
        [e[0][0], e[1][0], e[0][1], e[1][1]]
    }

    pub fn unvec(v: &[C64; 4]) -> Self {
        Self::new([[v[0], v[2]], [v[1], v[3]]])
    }
}

impl Default for ComplexMat2 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Neg for ComplexMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<f64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Mul<C64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}
