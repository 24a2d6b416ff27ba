//! Named example maps and seeded generators of preservers with known
//! structure.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::jordan::DzpCertificate;
use crate::linalg::{Field, FieldDesc, Mat};
use crate::linmap::LinMap;
use crate::nilspace::{generate_pattern_subspace, PatternSpec};
use crate::rng::{derive_seed, random_invertible, seeded};
use crate::structure::{verify_certificate, StructureCertificate};

/// `[[a, b], [c, d]] ↦ [[0, b - c], [0, 0]]`.
pub fn example_symmetric_killer<F: Field>(field: &F) -> LinMap<F> {
    LinMap::from_fn(field.clone(), 2, 2, |i, j| match (i, j) {
        (0, 1) => Mat::unit(field.clone(), 2, 0, 1),
        (1, 0) => -&Mat::unit(field.clone(), 2, 0, 1),
        _ => Mat::zeros(field.clone(), 2, 2),
    })
}

/// `A` on the first block superdiagonal of a `k x k` grid of `n x n` blocks,
/// i.e. `A ↦ J_k ⊗ A` with `J_k` the nilpotent shift.
pub fn example_band_nilpotent<F: Field>(field: &F, n: usize, k: usize) -> Result<LinMap<F>, Error<F>> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("band example needs n, k >= 1".into()));
    }
    let shift = Mat::from_fn(field.clone(), k, k, |a, b| if b == a + 1 { field.one() } else { field.zero() });
    Ok(LinMap::from_fn(field.clone(), n, n * k, |i, j| shift.kron(&Mat::unit(field.clone(), n, i, j))))
}

/// The first row of `A` placed in row 1, columns 2..=n+1, and the last
/// column of `A` placed in column n+2, rows 2..=n+1 (1-based).
pub fn example_ors<F: Field>(field: &F, n: usize, r: usize) -> Result<LinMap<F>, Error<F>> {
    if n < 2 || r < n + 2 {
        return Err(Error::Precondition(format!("needs n >= 2 and r >= n + 2, got n = {n}, r = {r}")));
    }
    Ok(LinMap::from_fn(field.clone(), n, r, |i, j| {
        let mut m = Mat::zeros(field.clone(), r, r);
        if i == 0 {
            m.set(0, j + 1, field.one());
        }
        if j == n - 1 {
            m.set(i + 1, n + 1, field.one());
        }
        m
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Phi0Mode {
    None,
    /// Images spread over a generated pattern subspace, with `Φ₀(I) = 0`.
    TrivialMult(PatternSpec),
    /// The band example `J_kband ⊗ A`, nil index `k_band`.
    Band { k_band: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub field: FieldDesc,
    pub seed: u64,
    pub phi0_mode: Phi0Mode,
}

impl GenSpec {
    /// Size of the block carrying the structured part of `Φ₀`; the rest of
    /// `M_(r - nk)` is padded with zeros.
    fn phi0_core(&self) -> usize {
        match self.phi0_mode {
            Phi0Mode::None => 0,
            Phi0Mode::TrivialMult(p) => p.l(),
            Phi0Mode::Band { k_band } => self.n * k_band,
        }
    }

    pub fn validate<F: Field>(&self) -> Result<(), Error<F>> {
        if self.n < 2 {
            return Err(Error::Precondition("generator needs n >= 2".into()));
        }
        if self.r < self.n * self.k + self.phi0_core() {
            return Err(Error::Precondition(format!(
                "r = {} is smaller than nk + {} = {}",
                self.r,
                self.phi0_core(),
                self.n * self.k + self.phi0_core()
            )));
        }
        match self.phi0_mode {
            Phi0Mode::TrivialMult(p) => p.validate(),
            Phi0Mode::Band { k_band } if k_band < 2 => Err(Error::Precondition("k_band must be at least 2".into())),
            _ => Ok(()),
        }
    }

    /// Expected certificate `nu` for maps drawn from this spec.
    pub fn expected_nu(&self) -> usize {
        match self.phi0_mode {
            Phi0Mode::Band { k_band } => k_band,
            _ => 0,
        }
    }
}

fn check_field<F: Field>(field: &F, desc: FieldDesc) -> Result<(), Error<F>> {
    if field.desc() != desc {
        return Err(Error::Precondition(format!("spec is over {desc}, field is {}", field.desc())));
    }
    Ok(())
}

fn random_phi0<F: Field>(field: &F, spec: &GenSpec) -> Result<LinMap<F>, Error<F>> {
    let n = spec.n;
    let m = spec.r - spec.n * spec.k;
    let core = spec.phi0_core();
    let mut rng = seeded(derive_seed(spec.seed, 2));
    let structured = match spec.phi0_mode {
        Phi0Mode::None => return Ok(LinMap::zero(field.clone(), n, m)),
        Phi0Mode::Band { k_band } => example_band_nilpotent(field, n, k_band)?,
        Phi0Mode::TrivialMult(pattern) => {
            let basis = generate_pattern_subspace(field, pattern, 3, derive_seed(spec.seed, 3))?;
            let mut images: Vec<Mat<F>> = (0..n * n)
                .map(|_| {
                    basis
                        .iter()
                        .fold(Mat::zeros(field.clone(), core, core), |acc, z| &acc + &z.scale(&field.sample(&mut rng)))
                })
                .collect();
            // Φ₀(E_nn) = -Σ_{i<n} Φ₀(E_ii) so that Φ₀(I) = 0
            let diag_sum = (0..n - 1).fold(Mat::zeros(field.clone(), core, core), |acc, i| &acc + &images[i * n + i]);
            images[n * n - 1] = -&diag_sum;
            LinMap::new(field.clone(), n, core, images)?
        }
    };
    Ok(structured.direct_sum(&LinMap::zero(field.clone(), n, m - core))?)
}

/// A zero-product preserver `S ((R1 ⊗ A) ⊕ Φ₀(A)) S⁻¹` and its ground-truth
/// certificate.
pub fn random_zpp_map<F: Field>(field: &F, spec: &GenSpec) -> Result<(LinMap<F>, StructureCertificate<F>), Error<F>> {
    check_field(field, spec.field)?;
    spec.validate()?;
    let s = random_invertible(field, spec.r, &mut seeded(derive_seed(spec.seed, 0)));
    let r1 = random_invertible(field, spec.k, &mut seeded(derive_seed(spec.seed, 1)));
    let phi0 = random_phi0(field, spec)?;
    let mut cert = StructureCertificate { s, k: spec.k, r1, phi0, nu: spec.expected_nu(), verified: false };
    let phi = cert.reconstruct()?;
    verify_certificate(&phi, &mut cert)?;
    Ok((phi, cert))
}

/// `S ((I_k1 ⊗ A) ⊕ (I_k2 ⊗ Aᵗ) ⊕ 0_t) S⁻¹`.
pub fn random_jordan_map<F: Field>(
    field: &F,
    n: usize,
    r: usize,
    k1: usize,
    k2: usize,
    seed: u64,
) -> Result<LinMap<F>, Error<F>> {
    Ok(random_dzp_parts(field, n, r, k1, k2, seed, false)?.1)
}

/// `S ((R1 ⊗ A) ⊕ (R2 ⊗ Aᵗ) ⊕ 0_t) S⁻¹` with random invertible `R1`, `R2`,
/// and its ground-truth certificate.
pub fn random_dzp_map<F: Field>(
    field: &F,
    n: usize,
    r: usize,
    k1: usize,
    k2: usize,
    seed: u64,
) -> Result<(LinMap<F>, DzpCertificate<F>), Error<F>> {
    let (cert, phi) = random_dzp_parts(field, n, r, k1, k2, seed, true)?;
    Ok((phi, cert))
}

fn random_dzp_parts<F: Field>(
    field: &F,
    n: usize,
    r: usize,
    k1: usize,
    k2: usize,
    seed: u64,
    scaled: bool,
) -> Result<(DzpCertificate<F>, LinMap<F>), Error<F>> {
    if n == 0 || n * (k1 + k2) > r {
        return Err(Error::Precondition(format!("needs n(k1 + k2) <= r, got n = {n}, k1 = {k1}, k2 = {k2}, r = {r}")));
    }
    let s = random_invertible(field, r, &mut seeded(derive_seed(seed, 0)));
    let factor = |k: usize, idx: u64| {
        if scaled {
            random_invertible(field, k, &mut seeded(derive_seed(seed, idx)))
        } else {
            Mat::identity(field.clone(), k)
        }
    };
    let cert = DzpCertificate {
        s,
        k1,
        k2,
        r1: factor(k1, 1),
        r2: factor(k2, 2),
        phi0: LinMap::zero(field.clone(), n, r - n * (k1 + k2)),
        nu: 0,
    };
    let phi = cert.reconstruct()?;
    Ok((cert, phi))
}
