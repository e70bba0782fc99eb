//! Periodic harmonic chain: coupling matrix, normal-mode spectrum and the
//! real orthonormal mode basis.
//!
//! Sites are labelled `1..=N`. Mode indices run over `-(N-1)/2..=(N-1)/2`
//! and basis columns are stored in that order, left to right.

use std::f64::consts::PI;
use std::fmt::Write as _;

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};

/// Physical configuration of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    n_sites: usize,
    mass: f64,
    kappa: f64,
    gamma: f64,
}

impl ChainParams {
    /// `n_sites` must be odd, `mass` and `kappa` positive, `gamma` non-negative.
    pub fn new(n_sites: usize, mass: f64, kappa: f64, gamma: f64) -> Result<Self> {
        if n_sites == 0 || n_sites.is_multiple_of(2) {
            return Err(Error::EvenOrZeroSites(n_sites));
        }
        check_positive("mass", mass)?;
        check_positive("kappa", kappa)?;
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                requirement: "finite and non-negative",
                value: gamma,
            });
        }
        Ok(Self {
            n_sites,
            mass,
            kappa,
            gamma,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Largest mode index, `(N-1)/2`.
    pub fn max_mode(&self) -> i64 {
        ((self.n_sites - 1) / 2) as i64
    }

    /// All mode indices in storage order.
    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> {
        let h = self.max_mode();
        let n = self.n_sites;
        (-h..=h).map(move |k| ModeIndex { k, n_sites: n })
    }

    pub fn mode(&self, k: i64) -> Result<ModeIndex> {
        ModeIndex::new(k, self.n_sites)
    }

    pub(crate) fn check_site(&self, site: i64) -> Result<usize> {
        if site >= 1 && site as usize <= self.n_sites {
            Ok(site as usize - 1)
        } else {
            Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            })
        }
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            requirement: "finite and positive",
            value,
        })
    }
}

/// Wave number `k` of a normal mode, validated against a chain length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    k: i64,
    n_sites: usize,
}

impl ModeIndex {
    pub fn new(k: i64, n_sites: usize) -> Result<Self> {
        let h = (n_sites.saturating_sub(1) / 2) as i64;
        if n_sites % 2 == 1 && k.abs() <= h {
            Ok(Self { k, n_sites })
        } else {
            Err(Error::ModeOutOfRange { k, n_sites })
        }
    }

    pub fn k(self) -> i64 {
        self.k
    }

    /// Column position in storage order (`k = -(N-1)/2` is column 0).
    pub fn offset(self) -> usize {
        (self.k + ((self.n_sites - 1) / 2) as i64) as usize
    }

    pub(crate) fn from_offset(offset: usize, n_sites: usize) -> Self {
        Self {
            k: offset as i64 - ((n_sites - 1) / 2) as i64,
            n_sites,
        }
    }
}

/// The circulant coupling matrix `D` with `H = p²/2m + qᵀDq/2`.
pub fn build_coupling_matrix(params: &ChainParams) -> Array2<f64> {
    let n = params.n_sites;
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        d[[i, i]] += params.kappa + 2.0 * params.gamma;
        // for N = 1 the neighbour is the site itself and the coupling cancels
        d[[i, (i + 1) % n]] -= params.gamma;
        d[[i, (i + n - 1) % n]] -= params.gamma;
    }
    d
}

/// Eigenvalue of `D` for mode `k`: `κ + 2γ(1 - cos(2πk/N))`.
pub fn mode_eigenvalue(params: &ChainParams, k: ModeIndex) -> f64 {
    if k.k == 0 {
        return params.kappa;
    }
    // |k| makes ω_k = ω_{-k} hold bit-for-bit
    let theta = 2.0 * PI * k.k.unsigned_abs() as f64 / params.n_sites as f64;
    params.kappa + 2.0 * params.gamma * (1.0 - theta.cos())
}

/// All eigenvalues `ω_k` in storage order.
pub fn mode_spectrum(params: &ChainParams) -> Vec<f64> {
    params.modes().map(|k| mode_eigenvalue(params, k)).collect()
}

/// Entry `f̃^(k)_n = (cos(2πkn/N) + sin(2πkn/N)) / √N` for 1-based site `n`.
pub fn real_mode_entry(n_sites: usize, k: i64, site: usize) -> f64 {
    let n = n_sites as i64;
    // reduce kn mod N before scaling so the angle stays small and exact
    let phase = (k * site as i64).rem_euclid(n);
    let theta = 2.0 * PI * phase as f64 / n_sites as f64;
    (theta.cos() + theta.sin()) / (n_sites as f64).sqrt()
}

/// Spectrum together with the real orthonormal mode basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    params: ChainParams,
    omegas: Vec<f64>,
    frequencies: Vec<f64>,
    /// rows are sites `1..=N`, columns are modes in storage order
    basis: Array2<f64>,
}

/// Builds the [`ModeBasis`] for a chain.
pub fn real_mode_basis(params: &ChainParams) -> ModeBasis {
    ModeBasis::new(params)
}

impl ModeBasis {
    pub fn new(params: &ChainParams) -> Self {
        let n = params.n_sites;
        let h = params.max_mode();
        let omegas = mode_spectrum(params);
        let frequencies = omegas.iter().map(|w| (w / params.mass).sqrt()).collect();
        let basis = Array2::from_shape_fn((n, n), |(row, col)| {
            real_mode_entry(n, col as i64 - h, row + 1)
        });
        Self {
            params: *params,
            omegas,
            frequencies,
            basis,
        }
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn n_sites(&self) -> usize {
        self.params.n_sites
    }

    /// `ω_k` in storage order.
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Angular frequencies `Ω_k = sqrt(ω_k / m)` in storage order.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn omega(&self, k: ModeIndex) -> f64 {
        self.omegas[k.offset()]
    }

    pub fn frequency(&self, k: ModeIndex) -> f64 {
        self.frequencies[k.offset()]
    }

    /// Length scale `(mΩ_k)^(-1/2)` of mode `k`'s ground state.
    pub fn mode_width(&self, k: ModeIndex) -> f64 {
        (self.params.mass * self.frequency(k)).sqrt().recip()
    }

    pub fn max_mode_width(&self) -> f64 {
        self.params
            .modes()
            .map(|k| self.mode_width(k))
            .fold(0.0, f64::max)
    }

    pub fn min_mode_width(&self) -> f64 {
        self.params
            .modes()
            .map(|k| self.mode_width(k))
            .fold(f64::INFINITY, f64::min)
    }

    /// The orthonormal basis matrix; column `k` is `f̃^(k)`.
    pub fn matrix(&self) -> &Array2<f64> {
        &self.basis
    }

    /// `f̃^(k)_n` for 1-based site `n`.
    pub fn entry(&self, k: ModeIndex, site: usize) -> f64 {
        self.basis[[site - 1, k.offset()]]
    }

    pub fn column(&self, k: ModeIndex) -> ArrayView1<'_, f64> {
        self.basis.column(k.offset())
    }

    /// `Q̃ = Bᵀ q`.
    pub fn to_normal_coords(&self, q: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        self.check_len(q.len())?;
        Ok(self.basis.t().dot(&q))
    }

    /// `q = B Q̃`.
    pub fn from_normal_coords(&self, normal: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        self.check_len(normal.len())?;
        Ok(self.basis.dot(&normal))
    }

    /// Slice version of [`Self::to_normal_coords`] writing into `out`,
    /// used on the per-sample hot path.
    pub(crate) fn to_normal_into(&self, q: &[f64], out: &mut [f64]) {
        let n = self.n_sites();
        debug_assert_eq!(q.len(), n);
        out.iter_mut().for_each(|x| *x = 0.0);
        for (row, &qn) in self.basis.rows().into_iter().zip(q) {
            for (o, &b) in out.iter_mut().zip(row.iter()) {
                *o += b * qn;
            }
        }
    }

    fn check_len(&self, actual: usize) -> Result<()> {
        let expected = self.n_sites();
        if actual == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, actual })
        }
    }

    /// Plain-text dump for debugging: a comment header, the `ω_k` row,
    /// then the basis matrix row-major, all with 17 significant digits.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# mode basis N={} m={:?} kappa={:?} gamma={:?} columns k={}..={}",
            p.n_sites,
            p.mass,
            p.kappa,
            p.gamma,
            -p.max_mode(),
            p.max_mode()
        );
        let fmt_row = |row: &mut dyn Iterator<Item = f64>| {
            row.map(|x| format!("{x:.16e}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "{}", fmt_row(&mut self.omegas.iter().copied()));
        for row in self.basis.rows() {
            let _ = writeln!(out, "{}", fmt_row(&mut row.iter().copied()));
        }
        out
    }
}
