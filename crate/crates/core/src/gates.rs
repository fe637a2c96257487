//! Two-qubit logic compiled onto four rails.
//!
//! Basis state `|query, signal⟩` lives on rail `2·query + signal + 1`, so
//! `|00⟩, |01⟩, |10⟩, |11⟩` occupy rails 1 to 4. Every gate is checked
//! against its textbook matrix in that ordered basis.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::optics::{RailUnitary, TOL};

pub const RAILS: usize = 4;

/// Rail carrying the logical basis state `|query, signal⟩`.
pub fn rail_of(query: bool, signal: bool) -> usize {
    2 * usize::from(query) + usize::from(signal) + 1
}

/// Inverse of [`rail_of`]. Panics on rails outside 1..=4.
pub fn logical_of(rail: usize) -> (bool, bool) {
    assert!((1..=RAILS).contains(&rail), "rail {rail} outside 1..=4");
    let idx = rail - 1;
    (idx & 2 != 0, idx & 1 != 0)
}

/// A one-bit boolean function `f`, identified by `(f(0), f(1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OracleSetting {
    pub f0: bool,
    pub f1: bool,
}

impl OracleSetting {
    pub const ALL: [OracleSetting; 4] = [
        OracleSetting::new(false, false),
        OracleSetting::new(false, true),
        OracleSetting::new(true, false),
        OracleSetting::new(true, true),
    ];

    pub const fn new(f0: bool, f1: bool) -> Self {
        Self { f0, f1 }
    }

    pub fn eval(&self, x: bool) -> bool {
        if x {
            self.f1
        } else {
            self.f0
        }
    }

    /// `f(0) ⊕ f(1)`: false for constant, true for balanced functions.
    pub fn is_balanced(&self) -> bool {
        self.f0 ^ self.f1
    }

    pub fn class_name(&self) -> &'static str {
        if self.is_balanced() {
            "balanced"
        } else {
            "constant"
        }
    }

    /// Two-character label such as `"10"`.
    pub fn label(&self) -> String {
        format!("{}{}", u8::from(self.f0), u8::from(self.f1))
    }

    pub fn parse(s: &str) -> Option<Self> {
        let b = |c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        };
        let mut chars = s.chars();
        let (f0, f1) = (b(chars.next()?)?, b(chars.next()?)?);
        if chars.next().is_some() {
            return None;
        }
        Some(Self::new(f0, f1))
    }
}

impl fmt::Display for OracleSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", u8::from(self.f0), u8::from(self.f1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicalGate {
    HadamardQuery,
    HadamardSignal,
    NotQuery,
    NotSignal,
    CnotQueryControlsSignal,
    /// `|x, y⟩ → |x, y ⊕ f(x)⟩`
    Oracle(OracleSetting),
}

impl LogicalGate {
    /// The five fixed gates followed by the four oracles.
    pub fn all() -> Vec<LogicalGate> {
        let mut gates = vec![
            LogicalGate::HadamardQuery,
            LogicalGate::HadamardSignal,
            LogicalGate::NotQuery,
            LogicalGate::NotSignal,
            LogicalGate::CnotQueryControlsSignal,
        ];
        gates.extend(OracleSetting::ALL.into_iter().map(LogicalGate::Oracle));
        gates
    }
}

fn swap(i: usize, j: usize) -> RailUnitary {
    RailUnitary::rail_swap(RAILS, i, j).expect("fixed rails are valid")
}

fn splitter(i: usize, j: usize) -> RailUnitary {
    RailUnitary::beam_splitter(RAILS, i, j, 0.5).expect("fixed rails are valid")
}

fn chain(stages: &[RailUnitary]) -> RailUnitary {
    if stages.is_empty() {
        return RailUnitary::identity(RAILS);
    }
    RailUnitary::compose(stages).expect("all stages are 4-rail")
}

/// Optical realization of a logical gate as rail swaps and 50/50 splitters.
pub fn compile_gate(g: LogicalGate) -> RailUnitary {
    match g {
        LogicalGate::NotQuery => chain(&[swap(1, 3), swap(2, 4)]),
        LogicalGate::NotSignal => chain(&[swap(1, 2), swap(3, 4)]),
        LogicalGate::CnotQueryControlsSignal => swap(3, 4),
        LogicalGate::HadamardQuery => chain(&[splitter(1, 3), splitter(2, 4)]),
        LogicalGate::HadamardSignal => chain(&[splitter(1, 2), splitter(3, 4)]),
        LogicalGate::Oracle(o) => {
            let mut stages = Vec::new();
            if o.f0 {
                stages.push(swap(1, 2));
            }
            if o.f1 {
                stages.push(swap(3, 4));
            }
            chain(&stages)
        }
    }
}

fn real(m: [[f64; 2]; 2]) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |r, c| Complex64::new(m[r][c], 0.0))
}

/// Permutation matrix sending basis label `(x, y)` to `map(x, y)`.
fn label_permutation(map: impl Fn(bool, bool) -> (bool, bool)) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(RAILS, RAILS);
    for col in 0..RAILS {
        let (x, y) = logical_of(col + 1);
        let (x2, y2) = map(x, y);
        m[(rail_of(x2, y2) - 1, col)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Textbook matrix of `g` in the ordered basis `|00⟩, |01⟩, |10⟩, |11⟩`,
/// built from tensor products and bit arithmetic without reference to rails.
pub fn logical_matrix(g: LogicalGate) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = real([[s, s], [s, -s]]);
    let x = real([[0.0, 1.0], [1.0, 0.0]]);
    let id = DMatrix::<Complex64>::identity(2, 2);
    match g {
        LogicalGate::HadamardQuery => h.kronecker(&id),
        LogicalGate::HadamardSignal => id.kronecker(&h),
        LogicalGate::NotQuery => x.kronecker(&id),
        LogicalGate::NotSignal => id.kronecker(&x),
        LogicalGate::CnotQueryControlsSignal => label_permutation(|q, t| (q, t ^ q)),
        LogicalGate::Oracle(o) => label_permutation(move |q, t| (q, t ^ o.eval(q))),
    }
}

/// True when `a = λ·b` entrywise within `tol` for some unit-modulus `λ`.
pub fn equal_up_to_global_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let Some((idx, pivot)) = b
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm().total_cmp(&y.norm()))
    else {
        return true;
    };
    if pivot.norm() <= tol {
        return a.iter().all(|x| x.norm() <= tol);
    }
    let ratio = a.as_slice()[idx] / pivot;
    if (ratio.norm() - 1.0).abs() > tol {
        return false;
    }
    let lambda = ratio / ratio.norm();
    a.iter()
        .zip(b.iter())
        .all(|(x, y)| (x - lambda * y).norm() <= tol)
}

/// Checks the compiled rail unitary against the logical matrix.
pub fn verify_compilation(g: LogicalGate) -> bool {
    equal_up_to_global_phase(compile_gate(g).matrix(), &logical_matrix(g), TOL)
}
