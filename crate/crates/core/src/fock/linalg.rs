//! Matrix exponentials for the oracle.
//!
//! Both generators the oracle needs (squeeze and displacement) are
//! anti-Hermitian and, after a diagonal phase gauge, become `-i T` with `T`
//! real symmetric tridiagonal (per photon-number parity sector for the
//! squeeze). Their exponentials come from a real eigendecomposition of `T`.
//! [`expm`] is a general scaling-and-squaring Padé(13) exponential used to
//! cross-check that route.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `G exp(-i T) G†` with `T` the zero-diagonal real symmetric tridiagonal
/// matrix with subdiagonal `offdiag`, and `G = diag(e^{i k ψ})`.
///
/// The result has size `offdiag.len() + 1`.
pub fn gauged_tridiagonal_unitary(offdiag: &[f64], psi: f64) -> DMatrix<Complex64> {
    let n = offdiag.len() + 1;
    let t = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i == j + 1 {
            offdiag[j]
        } else if j == i + 1 {
            offdiag[i]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let q = &eig.eigenvectors;
    let cos = DVector::from_iterator(n, eig.eigenvalues.iter().map(|l| l.cos()));
    let sin = DVector::from_iterator(n, eig.eigenvalues.iter().map(|l| l.sin()));

    let mut qc = q.clone();
    let mut qs = q.clone();
    for (j, (c, s)) in cos.iter().zip(sin.iter()).enumerate() {
        qc.column_mut(j).scale_mut(*c);
        qs.column_mut(j).scale_mut(*s);
    }
    let re = &qc * q.transpose();
    let im = &qs * q.transpose();

    let phase: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, k as f64 * psi)).collect();
    DMatrix::from_fn(n, n, |i, j| {
        phase[i] * phase[j].conj() * Complex64::new(re[(i, j)], -im[(i, j)])
    })
}

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

// Higham (2005), Padé(13) numerator coefficients.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

/// General dense matrix exponential by scaling and squaring with a Padé(13)
/// rational approximant.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.map(|z| z / 2f64.powi(squarings));

    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let ident = DMatrix::<Complex64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (a6.map(|z| z * b(13)) + a4.map(|z| z * b(11)) + a2.map(|z| z * b(9)));
    let u_sum = u_inner + a6.map(|z| z * b(7)) + a4.map(|z| z * b(5)) + a2.map(|z| z * b(3)) + ident.map(|z| z * b(1));
    let u = &scaled * u_sum;
    let v_inner = &a6 * (a6.map(|z| z * b(12)) + a4.map(|z| z * b(10)) + a2.map(|z| z * b(8)));
    let v = v_inner + a6.map(|z| z * b(6)) + a4.map(|z| z * b(4)) + a2.map(|z| z * b(2)) + ident.map(|z| z * b(0));

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// Largest entry modulus of `a - b` on the top-left `block × block` square.
pub fn leading_block_max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, block: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..block {
        for i in 0..block {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// `max |(U†U - I)_{ij}|` over `i, j < block`.
pub fn leading_block_unitarity_defect(u: &DMatrix<Complex64>, block: usize) -> f64 {
    let cols = u.columns(0, block);
    let gram = cols.adjoint() * cols;
    let mut worst: f64 = 0.0;
    for j in 0..block {
        for i in 0..block {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub(crate) fn zeros(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_element(n, n, ZERO)
}
