//! Minimal complex 3-vector and 3×3 matrix helpers.

use num_complex::Complex64;

pub type CVec3 = [Complex64; 3];
pub type CMat3 = [[Complex64; 3]; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Bilinear (non-conjugating) dot product.
pub fn dot(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Euclidean norm √(Σ|aᵢ|²).
pub fn norm(a: &CVec3) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn zeros() -> CMat3 {
    [[ZERO; 3]; 3]
}

pub fn identity() -> CMat3 {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

/// `c · a ⊗ b`.
pub fn dyad(c: Complex64, a: &CVec3, b: &CVec3) -> CMat3 {
    let mut m = zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = c * a[i] * b[j];
        }
    }
    m
}

pub fn add(a: &CMat3, b: &CMat3) -> CMat3 {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += b[i][j];
        }
    }
    m
}

pub fn sub(a: &CMat3, b: &CMat3) -> CMat3 {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] -= b[i][j];
        }
    }
    m
}

pub fn scale(c: Complex64, a: &CMat3) -> CMat3 {
    let mut m = *a;
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x *= c;
        }
    }
    m
}

pub fn matmul(a: &CMat3, b: &CMat3) -> CMat3 {
    let mut m = zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

pub fn apply(a: &CMat3, x: &CVec3) -> CVec3 {
    [dot(&a[0], x), dot(&a[1], x), dot(&a[2], x)]
}

/// Largest componentwise modulus of `a − b`.
pub fn max_deviation(a: &CMat3, b: &CMat3) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

pub fn max_abs(a: &CMat3) -> f64 {
    a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}
