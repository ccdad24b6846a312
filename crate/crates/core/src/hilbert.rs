//! Truncated Fock-space and qubit operators, and the model Hamiltonians.
//!
//! Basis convention, fixed for the whole crate: joint index `k = 2n + s`
//! with the field occupation `n` outer and the atom index `s` inner
//! (`s = 0` is the ground state `|g>`, `s = 1` the excited state `|e>`).
//! All three Hamiltonians are real symmetric in this basis.
//!
//! Models (units of `ω`, with `ħ = 1`):
//!
//! * `ASYM_RABI`: `ω a†a ⊗ I + ½ω₀ I ⊗ σ_z + g (a+a†) ⊗ σ_x + ε I ⊗ σ_x`
//! * `RABI`: the same with `ε = 0` (identical matrix by construction)
//! * `JC`: coupling replaced by `g (a ⊗ σ₊ + a† ⊗ σ₋)`, no `ε` term

use crate::matrix::{Matrix, RealSymMatrix};
use crate::Error;

/// Which atom-field model to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Full Rabi model, counter-rotating terms included.
    Rabi,
    /// Jaynes-Cummings model (rotating-wave approximation).
    Jc,
    /// Rabi model with the parity-breaking `ε σ_x` term.
    AsymRabi,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Rabi => "rabi",
            ModelKind::Jc => "jc",
            ModelKind::AsymRabi => "asym_rabi",
        }
    }
}

/// Physical parameters of a model instance.
///
/// `omega` is the field frequency, `omega0` the atomic transition
/// frequency, `g` the atom-field coupling, and `epsilon` the strength of
/// the parity-breaking term (meaningful for [`ModelKind::AsymRabi`] only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub model: ModelKind,
    pub omega: f64,
    pub omega0: f64,
    pub g: f64,
    pub epsilon: f64,
}

impl ModelParams {
    /// Resonant (`ω₀ = ω = 1`) parameters with the given coupling.
    pub fn resonant(model: ModelKind, g: f64, epsilon: f64) -> Self {
        Self {
            model,
            omega: 1.0,
            omega0: 1.0,
            g,
            epsilon,
        }
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.omega.is_nan() || self.omega <= 0.0 {
            return Err(Error::NonPositiveFrequency {
                name: "omega",
                value: self.omega,
            });
        }
        if self.omega0.is_nan() || self.omega0 <= 0.0 {
            return Err(Error::NonPositiveFrequency {
                name: "omega0",
                value: self.omega0,
            });
        }
        // Only the asymmetric model carries the symmetry-breaking term.
        if self.epsilon != 0.0 && self.model != ModelKind::AsymRabi {
            return Err(Error::EpsilonNotAllowed {
                model: self.model.name(),
                epsilon: self.epsilon,
            });
        }
        Ok(())
    }
}

/// Fock-space truncation: the field ladder keeps levels `|0> .. |n_cut-1>`,
/// so the joint dimension is `d = 2 * n_cut`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockTruncation {
    n_cut: usize,
}

impl FockTruncation {
    pub fn new(n_cut: usize) -> Result<Self, Error> {
        if n_cut < 2 {
            return Err(Error::TruncationTooSmall(n_cut));
        }
        Ok(Self { n_cut })
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    /// Joint Hilbert-space dimension `2 * n_cut`.
    pub fn dim(&self) -> usize {
        2 * self.n_cut
    }
}

/// Annihilation operator on the truncated ladder: `(n-1, n) = sqrt(n)`.
pub fn annihilation(trunc: FockTruncation) -> Matrix {
    let n = trunc.n_cut();
    let mut a = Matrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = (k as f64).sqrt();
    }
    a
}

/// Field number operator `a†a` as an exact integer diagonal.
pub fn number_operator(trunc: FockTruncation) -> Matrix {
    Matrix::diagonal(&(0..trunc.n_cut()).map(|n| n as f64).collect::<Vec<_>>())
}

/// The 2x2 qubit operators in the `(|g>, |e>)` basis.
///
/// `sigma_y` is represented by its imaginary-part matrix (the real
/// antisymmetric factor of `σ_y = i * Im σ_y`), which is all the real
/// pipeline ever needs.
#[derive(Debug, Clone)]
pub struct QubitOperators {
    pub sigma_x: Matrix,
    pub sigma_y_imag: Matrix,
    pub sigma_z: Matrix,
    pub sigma_plus: Matrix,
    pub sigma_minus: Matrix,
}

pub fn qubit_operators() -> QubitOperators {
    QubitOperators {
        sigma_x: Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
        sigma_y_imag: Matrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]),
        sigma_z: Matrix::diagonal(&[-1.0, 1.0]),
        // sigma_plus = |e><g|: row e, column g.
        sigma_plus: Matrix::from_rows(&[&[0.0, 0.0], &[1.0, 0.0]]),
        sigma_minus: Matrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]),
    }
}

/// Assemble the Hamiltonian of the selected model as a dense real
/// symmetric matrix in the fixed `k = 2n + s` basis.
pub fn build_hamiltonian(p: &ModelParams, trunc: FockTruncation) -> Result<RealSymMatrix, Error> {
    p.validate()?;

    let q = qubit_operators();
    let a = annihilation(trunc);
    let id_field = Matrix::identity(trunc.n_cut());

    let mut h = number_operator(trunc)
        .scale(p.omega)
        .kron(&Matrix::identity(2));
    h = h.add(&id_field.kron(&q.sigma_z.scale(0.5 * p.omega0)));

    match p.model {
        ModelKind::Rabi | ModelKind::AsymRabi => {
            let x = a.add(&a.transpose());
            h = h.add(&x.kron(&q.sigma_x).scale(p.g));
            if p.epsilon != 0.0 {
                h = h.add(&id_field.kron(&q.sigma_x).scale(p.epsilon));
            }
        }
        ModelKind::Jc => {
            let coupling = a
                .kron(&q.sigma_plus)
                .add(&a.transpose().kron(&q.sigma_minus));
            h = h.add(&coupling.scale(p.g));
        }
    }

    RealSymMatrix::new(h)
}

/// Total excitation number `N = a†a + |e><e|`: diagonal entry `n + s`.
pub fn excitation_number(trunc: FockTruncation) -> RealSymMatrix {
    let d = trunc.dim();
    let entries: Vec<f64> = (0..d).map(|k| ((k / 2) + (k % 2)) as f64).collect();
    RealSymMatrix::new(Matrix::diagonal(&entries)).expect("diagonal is symmetric")
}

/// Coupling operator `(a + a†) ⊗ σ_x`, the `g`-derivative of the
/// Rabi-form Hamiltonians. Used for Hellmann-Feynman slope checks.
pub fn coupling_operator(trunc: FockTruncation) -> RealSymMatrix {
    let a = annihilation(trunc);
    let x = a.add(&a.transpose());
    RealSymMatrix::new(x.kron(&qubit_operators().sigma_x)).expect("kron of symmetric factors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trunc(n: usize) -> FockTruncation {
        FockTruncation::new(n).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)] // frozen expected values
    fn annihilation_entries() {
        let a = annihilation(trunc(4));
        assert_eq!(a[(0, 1)], 1.0);
        assert!((a[(1, 2)] - 1.4142135624).abs() < 1e-10);
        assert!((a[(2, 3)] - 1.7320508076).abs() < 1e-10);
        let nonzero = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| a[(i, j)] != 0.0)
            .count();
        assert_eq!(nonzero, 3);

        let a2 = annihilation(trunc(2));
        assert_eq!(a2[(0, 1)], 1.0);
        assert_eq!(a2[(1, 0)], 0.0);
    }

    #[test]
    fn truncation_rejects_tiny() {
        assert!(matches!(
            FockTruncation::new(1),
            Err(Error::TruncationTooSmall(1))
        ));
        assert!(FockTruncation::new(2).is_ok());
    }

    #[test]
    fn number_operator_identity() {
        let t = trunc(6);
        let a = annihilation(t);
        let n = a.transpose().matmul(&a);
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { i as f64 } else { 0.0 };
                assert!(
                    (n[(i, j)] - expect).abs() < 1e-12,
                    "a†a entry ({i},{j}) = {}",
                    n[(i, j)]
                );
            }
        }
    }

    #[test]
    fn qubit_operator_entries() {
        let q = qubit_operators();
        assert_eq!(q.sigma_x, Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        // sigma_z |g> = -|g>
        assert_eq!(q.sigma_z.matvec(&[1.0, 0.0]), vec![-1.0, 0.0]);
        // anticommutator sigma_+ sigma_- + sigma_- sigma_+ = I
        let anti = q
            .sigma_plus
            .matmul(&q.sigma_minus)
            .add(&q.sigma_minus.matmul(&q.sigma_plus));
        assert_eq!(anti, Matrix::identity(2));
    }

    #[test]
    fn uncoupled_rabi_is_diagonal() {
        let p = ModelParams::resonant(ModelKind::Rabi, 0.0, 0.0);
        let h = build_hamiltonian(&p, trunc(2)).unwrap();
        let expect = [-0.5, 0.5, 0.5, 1.5];
        for (k, &e) in expect.iter().enumerate() {
            assert_eq!(h[(k, k)], e);
        }
        assert_eq!(h.matrix().frobenius_norm(), {
            let s: f64 = expect.iter().map(|x| x * x).sum();
            s.sqrt()
        });
    }

    #[test]
    fn asym_rabi_atomic_block() {
        // At g = 0 the Hamiltonian is block diagonal in n; the n = 0
        // block is [[-1/2, eps], [eps, 1/2]].
        let p = ModelParams::resonant(ModelKind::AsymRabi, 0.0, 0.2);
        let h = build_hamiltonian(&p, trunc(2)).unwrap();
        assert_eq!(h[(0, 0)], -0.5);
        assert_eq!(h[(0, 1)], 0.2);
        assert_eq!(h[(1, 0)], 0.2);
        assert_eq!(h[(1, 1)], 0.5);
        // With g = 0.3 the same block entries survive; the coupling only
        // connects neighbouring n.
        let p = ModelParams::resonant(ModelKind::AsymRabi, 0.3, 0.2);
        let h = build_hamiltonian(&p, trunc(2)).unwrap();
        assert_eq!(h[(0, 1)], 0.2);
        assert_eq!(h[(0, 3)], 0.3);
    }

    #[test]
    fn jc_coupling_entry() {
        // <e,0| H |g,1> = g for any g.
        for &g in &[0.1, 0.5, 1.3] {
            let p = ModelParams::resonant(ModelKind::Jc, g, 0.0);
            let h = build_hamiltonian(&p, trunc(4)).unwrap();
            assert_eq!(h[(1, 2)], g);
            assert_eq!(h[(2, 1)], g);
        }
    }

    #[test]
    fn jc_rejects_epsilon() {
        let p = ModelParams::resonant(ModelKind::Jc, 0.5, 0.1);
        assert!(matches!(
            build_hamiltonian(&p, trunc(4)),
            Err(Error::EpsilonNotAllowed { .. })
        ));
    }

    #[test]
    fn rabi_rejects_epsilon() {
        let p = ModelParams::resonant(ModelKind::Rabi, 0.5, 0.1);
        assert!(build_hamiltonian(&p, trunc(4)).is_err());
    }

    #[test]
    fn rejects_nonpositive_frequencies() {
        let mut p = ModelParams::resonant(ModelKind::Rabi, 0.5, 0.0);
        p.omega = 0.0;
        assert!(build_hamiltonian(&p, trunc(4)).is_err());
        p.omega = 1.0;
        p.omega0 = -1.0;
        assert!(build_hamiltonian(&p, trunc(4)).is_err());
    }

    #[test]
    fn asym_with_zero_epsilon_equals_rabi_bitwise() {
        for &g in &[0.0, 0.4, 1.2] {
            let rabi = build_hamiltonian(&ModelParams::resonant(ModelKind::Rabi, g, 0.0), trunc(8))
                .unwrap();
            let asym =
                build_hamiltonian(&ModelParams::resonant(ModelKind::AsymRabi, g, 0.0), trunc(8))
                    .unwrap();
            assert_eq!(rabi, asym);
        }
    }

    #[test]
    fn excitation_number_entries_and_jc_conservation() {
        let t = trunc(2);
        let n = excitation_number(t);
        for (k, &e) in [0.0, 1.0, 1.0, 2.0].iter().enumerate() {
            assert_eq!(n[(k, k)], e);
        }

        let t = trunc(32);
        let n = excitation_number(t);
        let jc =
            build_hamiltonian(&ModelParams::resonant(ModelKind::Jc, 0.5, 0.0), t).unwrap();
        let comm = n.matrix().commutator(jc.matrix());
        assert!(comm.frobenius_norm() <= 1e-12 * jc.frobenius_norm());

        // Counter-rotating terms break the conservation law.
        let rabi =
            build_hamiltonian(&ModelParams::resonant(ModelKind::Rabi, 0.5, 0.0), t).unwrap();
        let comm = n.matrix().commutator(rabi.matrix());
        assert!(comm.frobenius_norm() > 1e-3);
    }

    #[test]
    fn trace_counts_field_quanta_only() {
        let t = trunc(24);
        let expected: f64 = (0..24).map(|n| 2.0 * 0.7 * n as f64).sum();
        for model in [ModelKind::Rabi, ModelKind::Jc, ModelKind::AsymRabi] {
            let p = ModelParams {
                model,
                omega: 0.7,
                omega0: 1.3,
                g: 0.9,
                epsilon: if model == ModelKind::AsymRabi { 0.4 } else { 0.0 },
            };
            let h = build_hamiltonian(&p, t).unwrap();
            assert!(
                (h.trace() - expected).abs() <= 1e-10 * expected.abs(),
                "trace {} vs {expected} for {model:?}",
                h.trace()
            );
        }
    }

    proptest! {
        #[test]
        fn hamiltonians_are_symmetric(
            g in 0.0f64..2.0,
            eps in -1.0f64..1.0,
            omega0 in 0.2f64..3.0,
            n_cut in 2usize..24,
            kind in 0usize..3,
        ) {
            let model = [ModelKind::Rabi, ModelKind::Jc, ModelKind::AsymRabi][kind];
            let p = ModelParams {
                model,
                omega: 1.0,
                omega0,
                g,
                epsilon: if model == ModelKind::AsymRabi { eps } else { 0.0 },
            };
            // RealSymMatrix::new enforces the symmetry invariant.
            let h = build_hamiltonian(&p, trunc(n_cut)).unwrap();
            prop_assert_eq!(h.dim(), 2 * n_cut);
        }
    }
}
