//! Brute-force truncated Fock-space model of a single mode.
//!
//! Operators are dense `N × N` matrices on `{|0⟩, …, |N-1⟩}`. Truncation
//! corrupts the rows and columns near `N - 1`, so operator identities are
//! checked on the leading `⌊N/2⌋` block only.

pub mod linalg;
mod oracle;

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::closed_form::ModeParameters;
use crate::error::{Error, Result};
use crate::types::{CoherentAmplitude, DimensionlessTemperature, SqueezeParameter};

pub use oracle::{converge_statistics, oracle_statistics, oracle_statistics_dense, OracleConfig, TruncationReport};

/// Default cap on the squeeze magnitude the oracle accepts.
pub const DEFAULT_R_MAX: f64 = 2.0;
/// Leading-block unitarity tolerance for the squeeze and displacement
/// operators.
pub const UNITARITY_TOL: f64 = 1e-8;
/// `|α|²` may not exceed this fraction of the dimension.
pub const AMPLITUDE_FRACTION: f64 = 0.25;

/// Truncated mode with its ladder matrices.
#[derive(Debug, Clone)]
pub struct FockSpace {
    dim: usize,
    r_max: f64,
    annihilate: DMatrix<Complex64>,
    create: DMatrix<Complex64>,
}

/// Dense operator on a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    matrix: DMatrix<Complex64>,
}

/// Dense density matrix on a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        Self::with_r_max(dim, DEFAULT_R_MAX)
    }

    pub fn with_r_max(dim: usize, r_max: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::FockDimension(dim));
        }
        let annihilate = DMatrix::from_fn(
            dim,
            dim,
            |m, n| {
                if n == m + 1 {
                    real((n as f64).sqrt())
                } else {
                    real(0.0)
                }
            },
        );
        let create = annihilate.adjoint();
        Ok(Self {
            dim,
            r_max,
            annihilate,
            create,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size of the block on which truncation-sensitive checks are made.
    pub fn leading_block(&self) -> usize {
        self.dim / 2
    }

    pub fn annihilate(&self) -> &DMatrix<Complex64> {
        &self.annihilate
    }

    pub fn create(&self) -> &DMatrix<Complex64> {
        &self.create
    }

    /// `a†a = diag(0, 1, …, N-1)`.
    pub fn number(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(
            self.dim,
            self.dim,
            |i, j| {
                if i == j {
                    real(i as f64)
                } else {
                    real(0.0)
                }
            },
        )
    }

    fn checked_unitary(&self, operator: &'static str, matrix: DMatrix<Complex64>) -> Result<ModeOperator> {
        let defect = linalg::leading_block_unitarity_defect(&matrix, self.leading_block());
        if defect < UNITARITY_TOL {
            Ok(ModeOperator { matrix })
        } else {
            Err(Error::Unitarity {
                operator,
                defect,
                tolerance: UNITARITY_TOL,
                dim: self.dim,
            })
        }
    }

    /// `S(ζ) = exp(-(ζ/2) a†² + (ζ*/2) a²)`.
    pub fn squeeze_operator(&self, z: SqueezeParameter) -> Result<ModeOperator> {
        if z.r() > self.r_max {
            return Err(Error::SqueezeTooLarge {
                r: z.r(),
                r_max: self.r_max,
            });
        }
        // The generator only couples m and m + 2. In the gauge
        // |k⟩ → e^{ikψ}|k⟩ with ψ = φ - π/2 each parity sector becomes
        // -i T with T[k+1][k] = (r/2) √((m+1)(m+2)), m = 2k + parity.
        let psi = z.phi() - FRAC_PI_2;
        let mut matrix = linalg::zeros(self.dim);
        for parity in 0..2 {
            let levels: Vec<usize> = (parity..self.dim).step_by(2).collect();
            if levels.len() == 1 {
                matrix[(levels[0], levels[0])] = real(1.0);
                continue;
            }
            let offdiag: Vec<f64> = levels[..levels.len() - 1]
                .iter()
                .map(|&m| 0.5 * z.r() * (((m + 1) * (m + 2)) as f64).sqrt())
                .collect();
            let block = linalg::gauged_tridiagonal_unitary(&offdiag, psi);
            for (bj, &j) in levels.iter().enumerate() {
                for (bi, &i) in levels.iter().enumerate() {
                    matrix[(i, j)] = block[(bi, bj)];
                }
            }
        }
        self.checked_unitary("squeeze", matrix)
    }

    /// `D(α) = exp(α a† - α* a)`.
    pub fn displacement_operator(&self, alpha: CoherentAmplitude) -> Result<ModeOperator> {
        let amplitude_sq = alpha.mag().powi(2);
        if amplitude_sq > AMPLITUDE_FRACTION * self.dim as f64 {
            return Err(Error::AmplitudeTooLarge {
                amplitude_sq,
                dim: self.dim,
            });
        }
        // Gauge ψ = θ + π/2 makes the generator -i T with T[m+1][m] = |α| √(m+1).
        let offdiag: Vec<f64> = (1..self.dim).map(|n| alpha.mag() * (n as f64).sqrt()).collect();
        let matrix = linalg::gauged_tridiagonal_unitary(&offdiag, alpha.theta() + FRAC_PI_2);
        self.checked_unitary("displacement", matrix)
    }

    /// `B = cosh(r) a + e^{iφ} sinh(r) a† - α`, assembled from the ladder
    /// matrices.
    pub fn b_operator(&self, p: &ModeParameters) -> ModeOperator {
        let r = p.squeeze.r();
        let gamma = Complex64::from_polar(r.sinh(), p.squeeze.phi());
        let alpha = p.coherent.to_complex();
        let mut matrix = self.annihilate.map(|z| z * r.cosh()) + self.create.map(|z| z * gamma);
        for i in 0..self.dim {
            matrix[(i, i)] -= alpha;
        }
        ModeOperator { matrix }
    }

    /// `B = S(ζ) D(α) a D(-α) S(-ζ)` by explicit conjugation.
    ///
    /// `S(-ζ)` spreads `|j⟩` up to roughly `j·e^{2r}` quanta, so conjugating
    /// inside this space would corrupt most of the matrix. The product is
    /// formed in a larger working space (see [`conjugation_dim`]) and then
    /// projected back onto the first `N` levels.
    ///
    /// [`conjugation_dim`]: Self::conjugation_dim
    pub fn b_operator_by_conjugation(&self, p: &ModeParameters) -> Result<ModeOperator> {
        let work = FockSpace::with_r_max(self.conjugation_dim(p), self.r_max)?;
        let u = work.squeeze_displace(p)?;
        let full = &u * &work.annihilate * u.adjoint();
        Ok(ModeOperator {
            matrix: full.view((0, 0), (self.dim, self.dim)).into_owned(),
        })
    }

    /// Working dimension for [`b_operator_by_conjugation`]:
    /// `N·(1 + ⌈e^{2r}⌉) + ⌈4|α|²⌉`.
    ///
    /// [`b_operator_by_conjugation`]: Self::b_operator_by_conjugation
    pub fn conjugation_dim(&self, p: &ModeParameters) -> usize {
        let stretch = (2.0 * p.squeeze.r()).exp().ceil() as usize;
        self.dim * (1 + stretch) + (4.0 * p.coherent.mag().powi(2)).ceil() as usize
    }

    /// `U = S(ζ) D(α)`, the unitary taking the photon vacuum to the squeezed
    /// coherent vacuum.
    pub fn squeeze_displace(&self, p: &ModeParameters) -> Result<DMatrix<Complex64>> {
        let s = self.squeeze_operator(p.squeeze)?;
        let d = self.displacement_operator(p.coherent)?;
        Ok(s.matrix * d.matrix)
    }

    /// Thermal weights `e^{-x n} / Z_N`, `n < N`.
    pub fn thermal_weights(&self, x: DimensionlessTemperature) -> Vec<f64> {
        let raw: Vec<f64> = (0..self.dim).map(|n| (-x.value() * n as f64).exp()).collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / z).collect()
    }

    /// `ρ_a = exp(-x a†a) / Tr[…]`.
    pub fn thermal_density(&self, x: DimensionlessTemperature) -> DensityMatrix {
        let weights = self.thermal_weights(x);
        DensityMatrix {
            matrix: DMatrix::from_fn(
                self.dim,
                self.dim,
                |i, j| {
                    if i == j {
                        real(weights[i])
                    } else {
                        real(0.0)
                    }
                },
            ),
        }
    }

    /// `ρ_B = exp(-x B†B) / Tr[…]`, built as `U ρ_a U†` since
    /// `B†B = U a†a U†`.
    pub fn squeezed_thermal_density(&self, p: &ModeParameters) -> Result<DensityMatrix> {
        let u = self.squeeze_displace(p)?;
        let rho_a = self.thermal_density(p.x);
        Ok(DensityMatrix {
            matrix: &u * rho_a.matrix * u.adjoint(),
        })
    }
}

impl ModeOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> ModeOperator {
        ModeOperator {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `[A, A†]`.
    pub fn commutator_with_adjoint(&self) -> DMatrix<Complex64> {
        let ad = self.matrix.adjoint();
        &self.matrix * &ad - &ad * &self.matrix
    }

    pub fn leading_block_unitarity_defect(&self) -> f64 {
        linalg::leading_block_unitarity_defect(&self.matrix, self.dim() / 2)
    }
}

impl DensityMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `max |ρ - ρ†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        // Symmetrize so rounding-level anti-Hermitian parts do not leak in.
        let h = (&self.matrix + self.matrix.adjoint()).map(|z| z * 0.5);
        let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    /// `Tr(ρ O)`.
    pub fn expectation(&self, op: &DMatrix<Complex64>) -> Complex64 {
        (&self.matrix * op).trace()
    }
}
