//! Lindblad generators and their superoperator form.
//!
//! A [`Generator`] is a Hamiltonian plus a list of [`LindbladTerm`]s and represents
//!
//! ```text
//! dρ/dt = −i[H, ρ] + Σ_k γ_k (A_k ρ A_k† − ½{A_k† A_k, ρ})
//! ```
//!
//! with ħ = 1, so `H` carries units of rate.

use crate::error::{Error, Result};

use super::density::CONSTRUCTION_TOL;
use super::matrix::{ComplexMatrix, I};

/// A jump operator together with its nonnegative rate.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladTerm {
    jump: ComplexMatrix,
    rate: f64,
}

impl LindbladTerm {
    pub fn new(jump: ComplexMatrix, rate: f64) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lindblad rate must be finite and >= 0, got {rate}"
            )));
        }
        Ok(Self { jump, rate })
    }

    pub fn jump(&self) -> &ComplexMatrix {
        &self.jump
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// `rate · (A ρ A† − ½{A†A, ρ})`.
pub fn dissipator(term: &LindbladTerm, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    term.jump.check_same_dim(rho)?;
    Ok(dissipator_unchecked(term, rho))
}

fn dissipator_unchecked(term: &LindbladTerm, rho: &ComplexMatrix) -> ComplexMatrix {
    let a = &term.jump;
    let a_dag = a.adjoint();
    let a_dag_a = &a_dag * a;
    let sandwich = &(a * rho) * &a_dag;
    let anti = a_dag_a.anticommutator(rho).scale_real(0.5);
    (sandwich - anti).scale_real(term.rate)
}

/// Right-hand side of a Lindblad master equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    hamiltonian: ComplexMatrix,
    terms: Vec<LindbladTerm>,
    // +1 except under the fault-injection hook.
    dissipator_sign: f64,
}

impl Generator {
    pub fn new(hamiltonian: ComplexMatrix, terms: Vec<LindbladTerm>) -> Result<Self> {
        let defect = hamiltonian.hermiticity_defect();
        if defect > CONSTRUCTION_TOL {
            return Err(Error::NonHermitianHamiltonian(defect));
        }
        for t in &terms {
            hamiltonian.check_same_dim(&t.jump)?;
        }
        Ok(Self {
            hamiltonian,
            terms,
            dissipator_sign: 1.0,
        })
    }

    /// `H = 0` with no dissipation: every state is stationary.
    pub fn zero(dim: usize) -> Self {
        Self {
            hamiltonian: ComplexMatrix::zeros(dim),
            terms: Vec::new(),
            dissipator_sign: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn terms(&self) -> &[LindbladTerm] {
        &self.terms
    }

    /// Largest rate scale present: max over term rates and Hamiltonian entries.
    pub fn max_rate(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.rate)
            .fold(self.hamiltonian.max_abs(), f64::max)
    }

    /// Flips the sign of every dissipator. Only exists so the validation suite can
    /// demonstrate that it catches a broken generator.
    #[doc(hidden)]
    pub fn with_inverted_dissipators(mut self) -> Self {
        self.dissipator_sign = -self.dissipator_sign;
        self
    }

    /// Applies the generator to an arbitrary square matrix (the map is linear, so `rho` need
    /// not be a valid state).
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.hamiltonian.check_same_dim(rho)?;
        let mut out = self.hamiltonian.commutator(rho).scale(-I);
        for term in &self.terms {
            out = out + dissipator_unchecked(term, rho).scale_real(self.dissipator_sign);
        }
        Ok(out)
    }

    /// The `N² × N²` superoperator acting on column-stacked states.
    ///
    /// Built from the identity `vec(A X B) = (Bᵀ ⊗ A) vec(X)`, independently of [`apply`](Self::apply).
    pub fn liouvillian(&self) -> ComplexMatrix {
        let n = self.dim();
        let id = ComplexMatrix::identity(n);
        let h = &self.hamiltonian;
        let mut l = (id.kron(h) - h.transpose().kron(&id)).scale(-I);
        for term in &self.terms {
            let a = &term.jump;
            let a_dag_a = &a.adjoint() * a;
            let part = a.conj().kron(a)
                - id.kron(&a_dag_a).scale_real(0.5)
                - a_dag_a.transpose().kron(&id).scale_real(0.5);
            l = l + part.scale_real(term.rate * self.dissipator_sign);
        }
        l
    }
}

pub fn generator_apply(gen: &Generator, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    gen.apply(rho)
}

pub fn vectorized_liouvillian(gen: &Generator) -> ComplexMatrix {
    gen.liouvillian()
}
