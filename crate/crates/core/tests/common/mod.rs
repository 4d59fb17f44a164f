//! Shared helpers for integration tests.

use qjoule::{Complex64, ComplexMatrix};

/// Frobenius norm, computed entrywise with no library norm helpers.
pub fn frobenius(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut total = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            total += m.get(r, c).norm_sqr();
        }
    }
    total.sqrt()
}

/// Matrix exponential by scaling-and-squaring Taylor summation.
///
/// Deliberately avoids every spectral routine in the library — it relies
/// only on matrix multiplication and addition — so it can serve as an
/// independent oracle for `exp(i·generator)` reconstructions.
pub fn expm_taylor(m: &ComplexMatrix) -> ComplexMatrix {
    let mut scalings = 0u32;
    let mut norm = frobenius(m);
    while norm > 0.25 {
        norm *= 0.5;
        scalings += 1;
    }
    let scaled = m.scale(Complex64::new(1.0 / f64::powi(2.0, scalings as i32), 0.0));

    let mut result = ComplexMatrix::identity(m.dim());
    let mut term = ComplexMatrix::identity(m.dim());
    for k in 1..=60u64 {
        term = &term * &scaled;
        term = term.scale(Complex64::new(1.0 / k as f64, 0.0));
        result = &result + &term;
        if frobenius(&term) < 1e-20 {
            break;
        }
    }
    for _ in 0..scalings {
        result = &result * &result;
    }
    result
}

/// `exp(i·K)` through the Taylor oracle.
pub fn exp_i_taylor(k: &ComplexMatrix) -> ComplexMatrix {
    expm_taylor(&k.scale(Complex64::new(0.0, 1.0)))
}
