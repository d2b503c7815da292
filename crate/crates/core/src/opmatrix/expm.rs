//! Matrix exponential via scaling-and-squaring with a Padé(13) approximant.
//!
//! Standard algorithm: scale `A` by `2^{-s}` until its 1-norm is below the
//! Padé(13) threshold, form the [13/13] approximant with an LU solve, then
//! square `s` times.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

// Padé(13) numerator coefficients b_0 .. b_13.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm threshold above which scaling kicks in.
const THETA13: f64 = 5.371920351148152;

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` for a square complex matrix.
pub fn expm(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidArgument("expm needs a square matrix".into()));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(Error::Overflow("matrix exponential input".into()));
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|v| v / (2f64.powi(s as i32)));

    let eye = DMatrix::<Complex64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let c = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let u_poly = &a6 * &u_inner + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1);
    let u = &scaled * u_poly;
    let v_inner = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = &a6 * v_inner + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut f = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Linalg("singular Pade denominator in expm".into()))?;
    for _ in 0..s {
        f = &f * &f;
    }
    if f.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Overflow("matrix exponential result".into()));
    }
    Ok(f)
}
