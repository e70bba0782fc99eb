//! Position-space wavefunctions.
//!
//! `Ψ(q) = Σ_ν a_ν Π_k φ_{ν_k}(Q̃_k)` with `Q̃ = Bᵀq` and `φ_ν` the normalized
//! eigenfunction of a 1D oscillator of mass `m` and angular frequency `Ω_k`.
//! The Gaussian part `Π_k (mΩ_k/π)^{1/4} exp(-mΩ_k Q̃_k²/2)` is common to all
//! terms and is accumulated as a logarithm; each term only contributes a
//! polynomial factor `Π_k φ_{ν_k}/φ_0`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::chain::{check_positive, ModeBasis};
use crate::error::{Error, Result};
use crate::fock::{energy_eigenvalue, FockState};

/// Physicists' Hermite polynomial `H_ν(x)` by the three-term recurrence.
pub fn hermite_phys(order: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if order == 0 {
        return prev;
    }
    for nu in 1..order {
        let next = 2.0 * x * cur - 2.0 * f64::from(nu) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[ν] = H_ν(ξ) / sqrt(2^ν ν!)` for `ν = 0..out.len()`, i.e. the
/// ratio `φ_ν / φ_0` at dimensionless position `ξ`. The scaled recurrence
/// stays bounded where the raw polynomials would overflow.
fn hermite_ratios(xi: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = std::f64::consts::SQRT_2 * xi;
    }
    for nu in 1..out.len() - 1 {
        let n = nu as f64;
        out[nu + 1] =
            (2.0 / (n + 1.0)).sqrt() * xi * out[nu] - (n / (n + 1.0)).sqrt() * out[nu - 1];
    }
}

/// Normalized 1D oscillator eigenfunction
/// `φ_ν(x) = (mΩ/π)^{1/4} (2^ν ν!)^{-1/2} H_ν(sqrt(mΩ) x) exp(-mΩx²/2)`.
pub fn eigenfunction_1d(order: u32, omega: f64, mass: f64, x: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("mass", mass)?;
    let mw = mass * omega;
    let xi = mw.sqrt() * x;
    let mut ratios = vec![0.0; order as usize + 1];
    hermite_ratios(xi, &mut ratios);
    Ok((mw / PI).powf(0.25) * ratios[order as usize] * (-0.5 * xi * xi).exp())
}

/// A wavefunction that can be sampled on `R^N`.
pub trait Wavefunction: Sync {
    fn n_dims(&self) -> usize;

    /// `Ψ(q)`; `q.len()` must equal [`Self::n_dims`].
    fn value(&self, q: &[f64]) -> Complex64;
}

/// `Ψ = value · exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln_scale: f64,
    pub value: Complex64,
}

impl LogValue {
    pub fn to_complex(self) -> Complex64 {
        self.value * self.ln_scale.exp()
    }
}

#[derive(Debug, Clone)]
struct CompiledTerm {
    amplitude: Complex64,
    /// `(mode offset, ν)` of the excited modes
    factors: Vec<(usize, u32)>,
}

/// A [`FockState`] prepared for repeated evaluation against one basis.
///
/// Immutable after construction; share it by reference across workers.
#[derive(Debug, Clone)]
pub struct EvalContext<'a> {
    basis: &'a ModeBasis,
    max_order: u32,
    sqrt_mw: Vec<f64>,
    ln_prefactor: f64,
    /// offset of each mode's ratio table in the scratch buffer
    table_offsets: Vec<usize>,
    table_len: usize,
    terms: Vec<CompiledTerm>,
}

impl<'a> EvalContext<'a> {
    pub fn new(state: &FockState, basis: &'a ModeBasis) -> Result<Self> {
        if state.params() != basis.params() {
            return Err(Error::ParamsMismatch);
        }
        let n = basis.n_sites();
        let mass = basis.params().mass();
        let mw: Vec<f64> = basis.frequencies().iter().map(|f| mass * f).collect();
        let ln_prefactor = mw.iter().map(|x| 0.25 * (x / PI).ln()).sum();

        let mut mode_orders = vec![0u32; n];
        let terms: Vec<CompiledTerm> = state
            .amplitudes()
            .map(|(occ, amplitude)| {
                let factors: Vec<(usize, u32)> = occ.excited().collect();
                for &(k, nu) in &factors {
                    mode_orders[k] = mode_orders[k].max(nu);
                }
                CompiledTerm { amplitude, factors }
            })
            .collect();
        let mut table_offsets = Vec::with_capacity(n);
        let mut table_len = 0;
        for &order in &mode_orders {
            table_offsets.push(table_len);
            table_len += order as usize + 1;
        }
        Ok(Self {
            basis,
            max_order: state.max_total(),
            sqrt_mw: mw.iter().map(|x| x.sqrt()).collect(),
            ln_prefactor,
            table_offsets,
            table_len,
            terms,
        })
    }

    pub fn basis(&self) -> &ModeBasis {
        self.basis
    }

    /// Highest total occupation over the state's terms.
    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// `Π_k (mΩ_k/π)^{1/4}`, the vacuum's value at `q = 0`.
    pub fn vacuum_peak(&self) -> f64 {
        self.ln_prefactor.exp()
    }

    pub fn evaluate_log(&self, q: &[f64]) -> Result<LogValue> {
        let n = self.basis.n_sites();
        if q.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: q.len(),
            });
        }
        Ok(self.evaluate_log_unchecked(q))
    }

    pub fn evaluate(&self, q: &[f64]) -> Result<Complex64> {
        self.evaluate_log(q).map(LogValue::to_complex)
    }

    fn evaluate_log_unchecked(&self, q: &[f64]) -> LogValue {
        let n = self.basis.n_sites();
        let mut normal = vec![0.0; n];
        self.basis.to_normal_into(q, &mut normal);

        let mut table = vec![0.0; self.table_len];
        let mut exponent = self.ln_prefactor;
        for k in 0..n {
            let xi = self.sqrt_mw[k] * normal[k];
            exponent -= 0.5 * xi * xi;
            let end = self
                .table_offsets
                .get(k + 1)
                .copied()
                .unwrap_or(self.table_len);
            hermite_ratios(xi, &mut table[self.table_offsets[k]..end]);
        }

        let mut sum = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let poly: f64 = term
                .factors
                .iter()
                .map(|&(k, nu)| table[self.table_offsets[k] + nu as usize])
                .product();
            sum += term.amplitude * poly;
        }
        LogValue {
            ln_scale: exponent,
            value: sum,
        }
    }
}

impl Wavefunction for EvalContext<'_> {
    fn n_dims(&self) -> usize {
        self.basis.n_sites()
    }

    fn value(&self, q: &[f64]) -> Complex64 {
        self.evaluate_log_unchecked(q).to_complex()
    }
}

/// One-shot `Ψ(q)`; prefer [`EvalContext`] when evaluating many points.
pub fn evaluate(state: &FockState, basis: &ModeBasis, q: &[f64]) -> Result<Complex64> {
    EvalContext::new(state, basis)?.evaluate(q)
}

/// Default finite-difference step `1e-3 · min_k (mΩ_k)^{-1/2}`.
pub fn default_fd_step(basis: &ModeBasis) -> f64 {
    1e-3 * basis.min_mode_width()
}

/// `|(ĤΨ)(q)/Ψ(q) - E(ν)|` for a single-occupation eigenstate, with the
/// kinetic term from fourth-order central second differences of step `h`
/// (five points per axis) and the potential `qᵀDq/2` from the coupling
/// matrix.
///
/// Points where `|Ψ(q)|` is below `1e-6 · |a| · Π_k (mΩ_k/π)^{1/4}` are
/// rejected with [`Error::BelowFloor`].
pub fn hamiltonian_residual(
    state: &FockState,
    basis: &ModeBasis,
    q: &[f64],
    h: f64,
) -> Result<f64> {
    if state.len() != 1 {
        return Err(Error::NotEigenstate(state.len()));
    }
    check_positive("finite-difference step", h)?;
    let ctx = EvalContext::new(state, basis)?;
    let n = basis.n_sites();
    let psi = ctx.evaluate(q)?;

    let (occupation, amplitude) = state.amplitudes().next().expect("one term");
    let floor = 1e-6 * amplitude.norm() * ctx.vacuum_peak();
    if psi.norm() < floor {
        return Err(Error::BelowFloor {
            value: psi.norm(),
            floor,
        });
    }

    let mut shifted = q.to_vec();
    let mut laplacian = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut at = |offset: f64| {
            shifted[i] = q[i] + offset;
            ctx.value(&shifted)
        };
        let (p1, m1, p2, m2) = (at(h), at(-h), at(2.0 * h), at(-2.0 * h));
        shifted[i] = q[i];
        laplacian += ((p1 + m1) * 16.0 - (p2 + m2) - psi * 30.0) / (12.0 * h * h);
    }
    let d = crate::chain::build_coupling_matrix(basis.params());
    let potential = 0.5 * quadratic_form(&d, q);
    let kinetic = laplacian * (-0.5 / basis.params().mass());
    let local_energy = kinetic / psi + potential;
    let energy = energy_eigenvalue(occupation, basis)?;
    Ok((local_energy - energy).norm())
}

fn quadratic_form(m: &Array2<f64>, q: &[f64]) -> f64 {
    m.rows()
        .into_iter()
        .zip(q)
        .map(|(row, &qi)| qi * row.iter().zip(q).map(|(a, b)| a * b).sum::<f64>())
        .sum()
}

/// Isotropic 2D oscillator `p²/2m + κ(q_1² + q_2²)/2`, `Ω = sqrt(κ/m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator2d {
    mass: f64,
    kappa: f64,
}

impl Oscillator2d {
    pub fn new(mass: f64, kappa: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("kappa", kappa)?;
        Ok(Self { mass, kappa })
    }

    pub fn omega(&self) -> f64 {
        (self.kappa / self.mass).sqrt()
    }

    /// Ground-state length scale `(mΩ)^{-1/2}`.
    pub fn width(&self) -> f64 {
        (self.mass * self.omega()).sqrt().recip()
    }

    pub fn state(&self, nu1: u32, nu2: u32) -> Oscillator2dState {
        Oscillator2dState {
            oscillator: *self,
            nu: [nu1, nu2],
        }
    }
}

/// Normalized eigenstate `Ψ_{ν1,ν2}(q) = φ_ν1(q_1) φ_ν2(q_2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator2dState {
    oscillator: Oscillator2d,
    nu: [u32; 2],
}

impl Oscillator2dState {
    pub fn quantum_numbers(&self) -> [u32; 2] {
        self.nu
    }

    pub fn oscillator(&self) -> &Oscillator2d {
        &self.oscillator
    }

    pub fn energy(&self) -> f64 {
        self.oscillator.omega() * (f64::from(self.nu[0] + self.nu[1]) + 1.0)
    }

    pub fn evaluate(&self, q: [f64; 2]) -> f64 {
        let (w, m) = (self.oscillator.omega(), self.oscillator.mass);
        // parameters were validated in Oscillator2d::new
        eigenfunction_1d(self.nu[0], w, m, q[0]).unwrap_or(0.0)
            * eigenfunction_1d(self.nu[1], w, m, q[1]).unwrap_or(0.0)
    }
}

impl Wavefunction for Oscillator2dState {
    fn n_dims(&self) -> usize {
        2
    }

    fn value(&self, q: &[f64]) -> Complex64 {
        Complex64::new(self.evaluate([q[0], q[1]]), 0.0)
    }
}
