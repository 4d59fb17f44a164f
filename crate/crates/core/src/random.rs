//! Seeded random sampling: Haar-distributed states and unitaries, and the
//! stream-splitting scheme used by the Monte-Carlo verifier.
//!
//! Reproducibility contract: everything is driven by `ChaCha12` with an
//! explicit `u64` seed, and independent sampling tasks get independent
//! ChaCha *streams* of the same seed rather than consuming one shared
//! sequence. That keeps sample `m` identical no matter how many earlier
//! samples were drawn (or skipped), which is what makes reports
//! byte-reproducible across runs and platforms.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::state::StateVector;

/// The RNG used for every stochastic routine in the crate.
pub type CrateRng = ChaCha12Rng;

/// An RNG for a named sub-task of a seeded computation.
///
/// Stream 0 is reserved for shared draws (e.g. the probe states of the
/// Monte-Carlo verifier); per-sample work uses stream `m + 1` for sample `m`.
pub fn stream_rng(seed: u64, stream: u64) -> CrateRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One standard complex Gaussian draw (real and imaginary parts i.i.d.
/// `N(0, 1)`).
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// A Haar-distributed pure state of the given dimension: a complex Gaussian
/// vector, normalized.
pub fn haar_state(dim: usize, rng: &mut impl Rng) -> Result<StateVector> {
    let raw: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    StateVector::from_amplitudes(raw)?.normalized()
}

/// A Haar-distributed unitary of the given dimension: QR of a complex
/// Ginibre matrix with the R-diagonal phases absorbed into Q, which makes
/// the distribution exactly Haar rather than merely orthonormal.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let ginibre = nalgebra::DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = ginibre.qr();
    let r_diag: Vec<Complex64> = (0..dim).map(|i| qr.r()[(i, i)]).collect();
    let mut q = qr.q();
    for (j, r) in r_diag.iter().enumerate() {
        let phase = if r.norm() > 0.0 {
            r / Complex64::new(r.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_dmatrix(q).expect("QR preserves shape")
}
