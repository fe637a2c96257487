//! Single-photon rail states and the linear-optical elements acting on them.
//!
//! A photon spread over `n` optical rails is a normalized complex amplitude
//! vector; every passive element (beam splitter, phase shifter, rail swap)
//! is an `n × n` unitary. Rails are numbered from 1 in every public
//! signature.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Numerical tolerance for norms, unitarity and matrix comparisons.
pub const TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_rail(rail: usize, rails: usize) -> Result<usize> {
    if rail == 0 || rail > rails {
        return Err(Error::RailOutOfRange { rail, rails });
    }
    Ok(rail - 1)
}

fn check_pair(i: usize, j: usize, rails: usize) -> Result<(usize, usize)> {
    let a = check_rail(i, rails)?;
    let b = check_rail(j, rails)?;
    if a == b {
        return Err(Error::SameRail(i));
    }
    Ok((a, b))
}

/// Pure state of one photon over `rail_count` rails.
#[derive(Clone, Debug, PartialEq)]
pub struct RailState {
    amplitudes: DVector<Complex64>,
}

impl RailState {
    /// Builds a state from raw amplitudes, rejecting vectors whose norm is not 1.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                found: 0,
            });
        }
        let amplitudes = DVector::from_vec(amplitudes);
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes })
    }

    /// Convenience for real amplitude vectors.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Photon entirely on `rail` (1-indexed) of `rails`.
    pub fn basis(rail: usize, rails: usize) -> Result<Self> {
        let idx = check_rail(rail, rails)?;
        let mut amplitudes = DVector::from_element(rails, ZERO);
        amplitudes[idx] = ONE;
        Ok(Self { amplitudes })
    }

    pub fn rail_count(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    /// Amplitude on a 1-indexed rail.
    pub fn amplitude(&self, rail: usize) -> Complex64 {
        self.amplitudes[rail - 1]
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Photodiode probabilities `|a_i|²`, one per rail.
    pub fn detector_probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &RailState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Multiplies each rail amplitude by `e^{iθ_k}`. Cheaper than building a
    /// diagonal [`RailUnitary`] in hot loops.
    pub fn with_phases(&self, phases: &[f64]) -> Result<RailState> {
        if phases.len() != self.rail_count() {
            return Err(Error::Dimension {
                expected: self.rail_count(),
                found: phases.len(),
            });
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(phases)
            .map(|(a, &t)| a * Complex64::from_polar(1.0, t))
            .collect::<Vec<_>>();
        Ok(RailState {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }
}

/// Photon entirely on `rail` (1-indexed) of `n`.
pub fn basis_state(rail: usize, n: usize) -> Result<RailState> {
    RailState::basis(rail, n)
}

/// Detector probabilities of `s`; see [`RailState::detector_probabilities`].
pub fn detector_probabilities(s: &RailState) -> Vec<f64> {
    s.detector_probabilities()
}

/// True when `a` and `b` describe the same ray, i.e. `|⟨a|b⟩| ≥ 1 − tol`.
pub fn equal_up_to_global_phase(a: &RailState, b: &RailState, tol: f64) -> bool {
    a.rail_count() == b.rail_count() && a.inner(b).norm() >= 1.0 - tol
}

/// Reflectivity of a variable beam splitter built from a half-waveplate at
/// angle `theta` between two polarizing beam splitters.
pub fn waveplate_reflectivity(theta: f64) -> f64 {
    (2.0 * theta).sin().powi(2)
}

/// Unitary acting on the rails of a single photon.
#[derive(Clone, Debug, PartialEq)]
pub struct RailUnitary {
    matrix: DMatrix<Complex64>,
}

impl RailUnitary {
    /// Wraps a square matrix after checking `U†U = I` within [`TOL`].
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let u = Self { matrix };
        if !u.is_unitary(TOL) {
            return Err(Error::Noise("matrix is not unitary".into()));
        }
        Ok(u)
    }

    pub fn identity(rails: usize) -> Self {
        Self {
            matrix: DMatrix::identity(rails, rails),
        }
    }

    /// Beam splitter of reflectivity `r` between rails `i` and `j`.
    ///
    /// The `(i, j)` block is the real symmetric
    /// `[[√r, √(1−r)], [√(1−r), −√r]]`, so a 50/50 splitter is exactly a
    /// Hadamard on the two rails.
    pub fn beam_splitter(rails: usize, i: usize, j: usize, r: f64) -> Result<Self> {
        let (a, b) = check_pair(i, j, rails)?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Reflectivity(r));
        }
        let (rs, ts) = (r.sqrt(), (1.0 - r).sqrt());
        let mut m = DMatrix::identity(rails, rails);
        m[(a, a)] = Complex64::new(rs, 0.0);
        m[(a, b)] = Complex64::new(ts, 0.0);
        m[(b, a)] = Complex64::new(ts, 0.0);
        m[(b, b)] = Complex64::new(-rs, 0.0);
        Ok(Self { matrix: m })
    }

    /// Phase `e^{iθ}` on one rail.
    pub fn phase_shift(rails: usize, rail: usize, theta: f64) -> Result<Self> {
        let idx = check_rail(rail, rails)?;
        let mut m = DMatrix::identity(rails, rails);
        m[(idx, idx)] = Complex64::from_polar(1.0, theta);
        Ok(Self { matrix: m })
    }

    /// `diag(e^{iθ_1}, …, e^{iθ_n})`.
    pub fn diagonal_phases(phases: &[f64]) -> Self {
        let diag = DVector::from_iterator(
            phases.len(),
            phases.iter().map(|&t| Complex64::from_polar(1.0, t)),
        );
        Self {
            matrix: DMatrix::from_diagonal(&diag),
        }
    }

    /// Permutation exchanging rails `i` and `j`.
    pub fn rail_swap(rails: usize, i: usize, j: usize) -> Result<Self> {
        let (a, b) = check_pair(i, j, rails)?;
        let mut m = DMatrix::identity(rails, rails);
        m.swap_rows(a, b);
        Ok(Self { matrix: m })
    }

    /// Product of `stages` with the first element acting first.
    pub fn compose(stages: &[RailUnitary]) -> Result<Self> {
        let (first, rest) = stages.split_first().ok_or(Error::EmptyComposition)?;
        rest.iter()
            .try_fold(first.clone(), |acc, next| acc.then(next))
    }

    /// `next ∘ self`: apply `self`, then `next`.
    pub fn then(&self, next: &RailUnitary) -> Result<Self> {
        if next.rail_count() != self.rail_count() {
            return Err(Error::Dimension {
                expected: self.rail_count(),
                found: next.rail_count(),
            });
        }
        Ok(Self {
            matrix: &next.matrix * &self.matrix,
        })
    }

    pub fn apply(&self, s: &RailState) -> Result<RailState> {
        if s.rail_count() != self.rail_count() {
            return Err(Error::Dimension {
                expected: self.rail_count(),
                found: s.rail_count(),
            });
        }
        Ok(RailState {
            amplitudes: &self.matrix * &s.amplitudes,
        })
    }

    pub fn rail_count(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Matrix entry at 1-indexed `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row - 1, col - 1)]
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let n = self.rail_count();
        let product = self.matrix.adjoint() * &self.matrix;
        let id = DMatrix::<Complex64>::identity(n, n);
        (product - id).iter().all(|d| d.norm() <= tol)
    }

    /// Entrywise comparison within `tol`.
    pub fn approx_eq(&self, other: &RailUnitary, tol: f64) -> bool {
        self.matrix.shape() == other.matrix.shape()
            && self
                .matrix
                .iter()
                .zip(other.matrix.iter())
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Free-function form of [`RailUnitary::beam_splitter`].
pub fn beam_splitter(n: usize, i: usize, j: usize, r: f64) -> Result<RailUnitary> {
    RailUnitary::beam_splitter(n, i, j, r)
}

pub fn phase_shift(n: usize, rail: usize, theta: f64) -> Result<RailUnitary> {
    RailUnitary::phase_shift(n, rail, theta)
}

pub fn rail_swap(n: usize, i: usize, j: usize) -> Result<RailUnitary> {
    RailUnitary::rail_swap(n, i, j)
}

pub fn compose(stages: &[RailUnitary]) -> Result<RailUnitary> {
    RailUnitary::compose(stages)
}

pub fn apply(u: &RailUnitary, s: &RailState) -> Result<RailState> {
    u.apply(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_state(s: &RailState, expected: &[Complex64]) {
        assert_eq!(s.rail_count(), expected.len());
        for (a, b) in s.amplitudes().iter().zip(expected) {
            assert!(
                (a - b).norm() < TOL,
                "{:?} != {:?}",
                s.amplitudes(),
                expected
            );
        }
    }

    #[test]
    fn basis_states() {
        assert_state(
            &basis_state(2, 4).unwrap(),
            &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)],
        );
        assert_state(
            &basis_state(1, 4).unwrap(),
            &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)],
        );
        assert_state(
            &basis_state(4, 4).unwrap(),
            &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)],
        );
        assert!(matches!(
            basis_state(0, 4),
            Err(Error::RailOutOfRange { .. })
        ));
        assert!(matches!(
            basis_state(5, 4),
            Err(Error::RailOutOfRange { .. })
        ));
    }

    #[test]
    fn unnormalized_state_rejected() {
        assert!(matches!(
            RailState::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn fifty_fifty_split() {
        let bs = beam_splitter(4, 1, 3, 0.5).unwrap();
        let out = bs.apply(&basis_state(1, 4).unwrap()).unwrap();
        let h = FRAC_1_SQRT_2;
        assert_state(&out, &[c(h, 0.), c(0., 0.), c(h, 0.), c(0., 0.)]);
    }

    #[test]
    fn full_reflectivity() {
        let bs = beam_splitter(4, 1, 3, 1.0).unwrap();
        assert_eq!(bs.entry(1, 1), c(1., 0.));
        assert_eq!(bs.entry(3, 3), c(-1., 0.));
        let out = bs.apply(&basis_state(1, 4).unwrap()).unwrap();
        assert_state(&out, basis_state(1, 4).unwrap().amplitudes());
    }

    #[test]
    fn hadamard_involution() {
        let bs = beam_splitter(2, 1, 2, 0.5).unwrap();
        let twice = compose(&[bs.clone(), bs]).unwrap();
        assert!(twice.approx_eq(&RailUnitary::identity(2), TOL));
    }

    #[test]
    fn beam_splitter_rejects_bad_input() {
        assert!(matches!(
            beam_splitter(4, 2, 2, 0.5),
            Err(Error::SameRail(2))
        ));
        assert!(matches!(
            beam_splitter(4, 1, 2, 1.5),
            Err(Error::Reflectivity(_))
        ));
        assert!(matches!(
            beam_splitter(4, 1, 2, -0.1),
            Err(Error::Reflectivity(_))
        ));
        assert!(beam_splitter(4, 1, 5, 0.5).is_err());
    }

    #[test]
    fn phase_shifts() {
        let out = phase_shift(4, 2, PI)
            .unwrap()
            .apply(&basis_state(2, 4).unwrap())
            .unwrap();
        assert_state(&out, &[c(0., 0.), c(-1., 0.), c(0., 0.), c(0., 0.)]);

        assert!(phase_shift(4, 1, 0.0)
            .unwrap()
            .approx_eq(&RailUnitary::identity(4), 0.0));

        let out = phase_shift(4, 3, FRAC_PI_2)
            .unwrap()
            .apply(&basis_state(3, 4).unwrap())
            .unwrap();
        assert_state(&out, &[c(0., 0.), c(0., 0.), c(0., 1.), c(0., 0.)]);
        assert!(phase_shift(4, 9, 1.0).is_err());
    }

    #[test]
    fn swaps() {
        let out = rail_swap(4, 3, 4)
            .unwrap()
            .apply(&basis_state(3, 4).unwrap())
            .unwrap();
        assert_state(&out, basis_state(4, 4).unwrap().amplitudes());

        let s = rail_swap(4, 1, 2).unwrap();
        let twice = compose(&[s.clone(), s.clone()]).unwrap();
        assert_eq!(twice, RailUnitary::identity(4));

        let v = RailState::new(
            vec![c(0.1, 0.2), c(-0.4, 0.1), c(0.5, -0.3), c(0.2, 0.0)]
                .into_iter()
                .map(|a| a / (0.01f64 + 0.04 + 0.16 + 0.01 + 0.25 + 0.09 + 0.04).sqrt())
                .collect(),
        )
        .unwrap();
        let out = s.apply(&v).unwrap();
        let a = v.amplitudes();
        assert_state(&out, &[a[1], a[0], a[2], a[3]]);
        assert!(matches!(rail_swap(4, 1, 1), Err(Error::SameRail(1))));
    }

    #[test]
    fn compose_single_and_mismatch() {
        let u = beam_splitter(4, 1, 2, 0.3).unwrap();
        assert_eq!(compose(std::slice::from_ref(&u)).unwrap(), u);
        assert!(matches!(compose(&[]), Err(Error::EmptyComposition)));
        assert!(matches!(
            compose(&[u, RailUnitary::identity(3)]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn mach_zehnder_with_pi_arm_is_bit_flip() {
        // H · diag(1, -1) · H = X
        let chain = compose(&[
            beam_splitter(2, 1, 2, 0.5).unwrap(),
            phase_shift(2, 2, PI).unwrap(),
            beam_splitter(2, 1, 2, 0.5).unwrap(),
        ])
        .unwrap();
        let x = rail_swap(2, 1, 2).unwrap();
        assert!(chain.approx_eq(&x, TOL));
    }

    #[test]
    fn apply_identity_and_mismatch() {
        let s = basis_state(3, 4).unwrap();
        assert_eq!(RailUnitary::identity(4).apply(&s).unwrap(), s);
        assert!(RailUnitary::identity(3).apply(&s).is_err());
    }

    #[test]
    fn detector_probabilities_modulus_squared() {
        let h = FRAC_1_SQRT_2;
        let p = detector_probabilities(&RailState::from_real(&[h, -h, 0., 0.]).unwrap());
        assert_eq!(p.len(), 4);
        assert!((p[0] - 0.5).abs() < TOL && (p[1] - 0.5).abs() < TOL);
        assert_eq!(
            detector_probabilities(&basis_state(2, 4).unwrap()),
            vec![0., 1., 0., 0.]
        );
        let p = detector_probabilities(&RailState::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap());
        assert!(p.iter().all(|&x| (x - 0.25).abs() < TOL));
    }

    #[test]
    fn global_phase_equality() {
        let a = RailState::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap();
        let neg = RailState::new(a.amplitudes().iter().map(|x| -x).collect()).unwrap();
        let rot = RailState::new(a.amplitudes().iter().map(|x| x * c(0., 1.)).collect()).unwrap();
        assert!(equal_up_to_global_phase(&a, &neg, TOL));
        assert!(equal_up_to_global_phase(&a, &rot, TOL));
        assert!(!equal_up_to_global_phase(
            &basis_state(1, 4).unwrap(),
            &basis_state(2, 4).unwrap(),
            TOL
        ));
    }

    #[test]
    fn waveplate_law() {
        assert_eq!(waveplate_reflectivity(0.0), 0.0);
        assert!((waveplate_reflectivity(FRAC_PI_4) - 1.0).abs() < 1e-15);
        assert!((waveplate_reflectivity(FRAC_PI_8) - 0.5).abs() < 1e-15);
        assert!(
            (waveplate_reflectivity(0.3) - waveplate_reflectivity(0.3 + FRAC_PI_2)).abs() < 1e-12
        );
    }

    #[test]
    fn waveplate_matches_malus_projection() {
        // Rotate a horizontal Jones vector by 2θ and project onto vertical.
        for k in 0..64 {
            let theta = k as f64 * 0.05;
            let (h, v) = ((2.0 * theta).cos(), (2.0 * theta).sin());
            let transmitted_to_other_port = v * v / (h * h + v * v);
            assert!((waveplate_reflectivity(theta) - transmitted_to_other_port).abs() < 1e-12);
        }
    }

    #[test]
    fn with_phases_matches_diagonal_unitary() {
        let s = RailState::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap();
        let phases = [0.1, -2.0, 3.3, 0.7];
        let a = s.with_phases(&phases).unwrap();
        let b = RailUnitary::diagonal_phases(&phases).apply(&s).unwrap();
        assert_state(&a, b.amplitudes());
        assert!(s.with_phases(&[0.0; 3]).is_err());
    }
}
