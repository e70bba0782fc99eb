//! Occupation-number states of the chain and the creation operators
//! `a†_k` (plane-wave modes) and `b†_n` (site-localized).
//!
//! A [`FockState`] stores, for every occupation `ν`, the coefficient `c_ν` of
//! the operator monomial `Π_k (a†_k)^ν_k` acting on the vacuum. Applying a
//! creator only shifts the occupation, so the coefficient is untouched and
//! products of creators commute bit-for-bit. The normalized amplitude of the
//! orthonormal occupation state is `c_ν · sqrt(Π_k ν_k!)`, which reproduces
//! the usual `a†|ν⟩ = sqrt(ν+1)|ν+1⟩` ladder.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::chain::{ChainParams, ModeBasis, ModeIndex};
use crate::error::{Error, Result};

/// Quantum numbers `ν_k`, stored in mode order `k = -(N-1)/2 ..= (N-1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn vacuum(n_sites: usize) -> Self {
        Self(vec![0; n_sites])
    }

    /// Builds an occupation from quantum numbers in mode order.
    pub fn from_numbers(numbers: Vec<u32>) -> Self {
        Self(numbers)
    }

    pub fn numbers(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: ModeIndex) -> u32 {
        self.0[k.offset()]
    }

    /// Total particle number `Σ ν_k`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn raised(&self, k: ModeIndex) -> Self {
        let mut next = self.clone();
        next.0[k.offset()] += 1;
        next
    }

    /// `sqrt(Π_k ν_k!)`: converts a monomial coefficient into the amplitude
    /// of the normalized occupation state.
    pub fn ladder_norm(&self) -> f64 {
        let product: f64 = self
            .0
            .iter()
            .flat_map(|&nu| 2..=nu)
            .map(f64::from)
            .product();
        product.sqrt()
    }

    /// `(mode offset, ν)` for every excited mode.
    pub fn excited(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &nu)| nu > 0)
            .map(|(i, &nu)| (i, nu))
    }
}

/// Finite superposition of occupation states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    params: ChainParams,
    terms: BTreeMap<Occupation, Complex64>,
}

fn is_zero(c: Complex64) -> bool {
    c.re == 0.0 && c.im == 0.0
}

impl FockState {
    /// The ground state `Ψ0`.
    pub fn vacuum(params: &ChainParams) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            Occupation::vacuum(params.n_sites()),
            Complex64::new(1.0, 0.0),
        );
        Self {
            params: *params,
            terms,
        }
    }

    /// The normalized occupation state `|ν⟩`.
    pub fn eigenstate(params: &ChainParams, occupation: Occupation) -> Result<Self> {
        if occupation.len() != params.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: params.n_sites(),
                actual: occupation.len(),
            });
        }
        let coeff = Complex64::new(occupation.ladder_norm().recip(), 0.0);
        let mut terms = BTreeMap::new();
        terms.insert(occupation, coeff);
        Ok(Self {
            params: *params,
            terms,
        })
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Canonical term map: occupation to monomial coefficient.
    pub fn coefficients(&self) -> &BTreeMap<Occupation, Complex64> {
        &self.terms
    }

    /// `(occupation, normalized amplitude)` in canonical order.
    pub fn amplitudes(&self) -> impl Iterator<Item = (&Occupation, Complex64)> + '_ {
        self.terms
            .iter()
            .map(|(occ, &c)| (occ, c * occ.ladder_norm()))
    }

    /// Normalized amplitude of `|ν⟩`, zero if absent.
    pub fn amplitude(&self, occupation: &Occupation) -> Complex64 {
        self.terms
            .get(occupation)
            .map_or(Complex64::new(0.0, 0.0), |&c| c * occupation.ladder_norm())
    }

    /// Largest total occupation over all terms.
    pub fn max_total(&self) -> u32 {
        self.terms.keys().map(Occupation::total).max().unwrap_or(0)
    }

    /// Largest single-mode quantum number over all terms.
    pub fn max_quantum_number(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|occ| occ.numbers().iter().copied())
            .max()
            .unwrap_or(0)
    }

    fn check_mode(&self, k: ModeIndex) -> Result<()> {
        ModeIndex::new(k.k(), self.params.n_sites()).map(|_| ())
    }

    /// `a†_k Ψ`.
    pub fn apply_create(&self, k: ModeIndex) -> Result<Self> {
        self.check_mode(k)?;
        let terms = self
            .terms
            .iter()
            .map(|(occ, &c)| (occ.raised(k), c))
            .collect();
        Ok(Self {
            params: self.params,
            terms,
        })
    }

    /// `b†_n Ψ = Σ_k f̃^(k)_n a†_k Ψ` for 1-based site `n`.
    pub fn apply_create_local(&self, basis: &ModeBasis, site: i64) -> Result<Self> {
        if basis.params() != &self.params {
            return Err(Error::ParamsMismatch);
        }
        let site = self.params.check_site(site)? + 1;
        let n = self.params.n_sites();
        let weights: Vec<f64> = (0..n)
            .map(|offset| basis.entry(ModeIndex::from_offset(offset, n), site))
            .collect();
        let mut terms: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for (occ, &c) in &self.terms {
            for (offset, &w) in weights.iter().enumerate() {
                let k = ModeIndex::from_offset(offset, n);
                *terms.entry(occ.raised(k)).or_default() += c * w;
            }
        }
        terms.retain(|_, c| !is_zero(*c));
        Ok(Self {
            params: self.params,
            terms,
        })
    }

    /// `c · Ψ`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut terms: BTreeMap<Occupation, Complex64> = self
            .terms
            .iter()
            .map(|(occ, &a)| (occ.clone(), a * c))
            .collect();
        terms.retain(|_, a| !is_zero(*a));
        Self {
            params: self.params,
            terms,
        }
    }

    /// Complex-linear combination `Σ c_i Ψ_i`, exact zeros pruned.
    pub fn linear_combine(states: &[(Complex64, &FockState)]) -> Result<Self> {
        let Some((_, first)) = states.first() else {
            return Err(Error::InvalidSpec(
                "linear combination of zero states".into(),
            ));
        };
        let params = first.params;
        let mut terms: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for (c, state) in states {
            if state.params != params {
                return Err(Error::ParamsMismatch);
            }
            for (occ, &a) in &state.terms {
                *terms.entry(occ.clone()).or_default() += c * a;
            }
        }
        terms.retain(|_, c| !is_zero(*c));
        Ok(Self { params, terms })
    }

    /// `⟨a, b⟩` with the occupation states orthonormal.
    pub fn inner_product(a: &FockState, b: &FockState) -> Result<Complex64> {
        if a.params != b.params {
            return Err(Error::ParamsMismatch);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (occ, &ca) in &a.terms {
            if let Some(&cb) = b.terms.get(occ) {
                let w = occ.ladder_norm();
                sum += (ca * w).conj() * (cb * w);
            }
        }
        Ok(sum)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes()
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// One line per term: `re im ν_{-(N-1)/2} ... ν_{(N-1)/2}`, normalized
    /// amplitudes with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (occ, a) in self.amplitudes() {
            let _ = write!(out, "{:.16e} {:.16e}", a.re, a.im);
            for nu in occ.numbers() {
                let _ = write!(out, " {nu}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the [`Self::to_text`] format.
    pub fn from_text(params: &ChainParams, text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            what: "state dump",
            line,
            msg,
        };
        let mut terms: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for (i, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != params.n_sites() + 2 {
                return Err(err(
                    i + 1,
                    format!(
                        "expected {} fields, got {}",
                        params.n_sites() + 2,
                        fields.len()
                    ),
                ));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| err(i + 1, e.to_string()));
            let amp = Complex64::new(num(fields[0])?, num(fields[1])?);
            let numbers = fields[2..]
                .iter()
                .map(|s| s.parse::<u32>().map_err(|e| err(i + 1, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let occ = Occupation(numbers);
            let coeff = amp / occ.ladder_norm();
            *terms.entry(occ).or_default() += coeff;
        }
        terms.retain(|_, c| !is_zero(*c));
        Ok(Self {
            params: *params,
            terms,
        })
    }
}

/// `Σ_k Ω_k (ν_k + 1/2)` with `Ω_k = sqrt(ω_k/m)`.
pub fn energy_eigenvalue(occupation: &Occupation, basis: &ModeBasis) -> Result<f64> {
    if occupation.len() != basis.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: basis.n_sites(),
            actual: occupation.len(),
        });
    }
    Ok(occupation
        .numbers()
        .iter()
        .zip(basis.frequencies())
        .map(|(&nu, &freq)| freq * (f64::from(nu) + 0.5))
        .sum())
}
