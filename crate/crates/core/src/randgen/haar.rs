use nalgebra::{DMatrix, Matrix2, Matrix4};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::simcore::StateVector;
use crate::{Error, Result, C64};

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed `dim × dim` unitary: QR of a complex Ginibre matrix with
/// the phases of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DMatrix<C64>> {
    if dim < 1 {
        return Err(Error::InvalidArgument("unitary dimension must be at least 1".into()));
    }
    let ginibre = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = ginibre.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

pub fn haar_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    let u = haar_unitary(2, rng).expect("dimension 2 is valid");
    Matrix2::from_fn(|i, j| u[(i, j)])
}

pub fn haar_unitary4<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<C64> {
    let u = haar_unitary(4, rng).expect("dimension 4 is valid");
    Matrix4::from_fn(|i, j| u[(i, j)])
}

/// A Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn exact_random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<StateVector> {
    if n_qubits < 1 {
        return Err(Error::InvalidArgument("a register needs at least one qubit".into()));
    }
    let amps = (0..1usize << n_qubits).map(|_| complex_gaussian(rng)).collect();
    StateVector::normalized(amps)
}
