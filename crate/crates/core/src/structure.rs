//! Canonical decomposition of zero-product preservers.
//!
//! A zero-product preserver `Φ: M_n → M_r` (n ≥ 2) is written as
//! `Φ(A) = S ((R1 ⊗ A) ⊕ Φ₀(A)) S⁻¹` with `R1` invertible and `Φ₀(I)` nilpotent.

use serde_json::{json, Value};

use crate::error::Error;
use crate::linalg::json::{field_from_json, mat_from_json, mat_to_json, usize_field};
use crate::linalg::{fitting_decompose, perfect_shuffle, Field, FittingDecomposition, LinalgError, Mat};
use crate::linmap::LinMap;
use crate::verify::{check_ring_hom, check_trivial_mult, check_zpp, Property};

#[derive(Clone, Debug, PartialEq)]
pub struct StructureCertificate<F: Field> {
    pub s: Mat<F>,
    pub k: usize,
    /// `k x k`, invertible; `0 x 0` when `k = 0`.
    pub r1: Mat<F>,
    /// `M_n → M_(r - nk)`; a map into `M_0` when vacuous.
    pub phi0: LinMap<F>,
    /// Nil index of `Φ₀(I)`, with the convention `nu = 0` iff `Φ₀(I) = 0`
    /// (including the vacuous case).
    pub nu: usize,
    /// Set only after the reconstruction identity has been checked.
    pub verified: bool,
}

/// `nu` convention shared by certificates: 0 when `m` is zero, else the
/// least `e` with `m^e = 0`. `m` must be nilpotent.
pub(crate) fn certificate_nu<F: Field>(m: &Mat<F>) -> usize {
    let mut e = 0;
    let mut acc = m.clone();
    while !acc.is_zero() {
        acc = &acc * m;
        e += 1;
        assert!(e <= m.rows(), "certificate_nu of a non-nilpotent matrix");
    }
    if e == 0 { 0 } else { e + 1 }
}

impl<F: Field> StructureCertificate<F> {
    pub fn n(&self) -> usize {
        self.phi0.n()
    }

    pub fn r(&self) -> usize {
        self.s.rows()
    }

    /// `Φ(E_ij) = S ((R1 ⊗ E_ij) ⊕ Φ₀(E_ij)) S⁻¹`.
    pub fn reconstruct(&self) -> Result<LinMap<F>, Error<F>> {
        let n = self.n();
        let r = self.r();
        let field = self.s.field().clone();
        if !self.s.is_square() || self.r1.shape() != (self.k, self.k) || n * self.k + self.phi0.r() != r {
            return Err(Error::Precondition(format!(
                "certificate dimensions inconsistent: r = {r}, n = {n}, k = {}, phi0 into M_{}",
                self.k,
                self.phi0.r()
            )));
        }
        let inv = self.s.inverse()?;
        let head = LinMap::from_fn(field.clone(), n, n * self.k, |i, j| {
            self.r1.kron(&Mat::unit(field.clone(), n, i, j))
        });
        Ok(head.direct_sum(&self.phi0)?.similarity(&self.s, &inv))
    }

    /// Whether the range of `Φ₀` has trivial multiplications.
    pub fn phi0_trivial_mult(&self) -> bool {
        check_trivial_mult(&self.phi0).holds
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.s.field().desc().to_string(),
            "n": self.n(),
            "r": self.r(),
            "S": mat_to_json(&self.s),
            "k": self.k,
            "R1": mat_to_json(&self.r1),
            "phi0": if self.phi0.r() == 0 { Value::Null } else { self.phi0.to_json() },
            "nu": self.nu,
            "phi0_trivial_mult": self.phi0_trivial_mult(),
            "verified": self.verified,
        })
    }

    /// Reads a certificate document. The `"verified"` flag is not trusted:
    /// the result is unverified until [`verify_certificate`] runs.
    pub fn from_json(field: &F, v: &Value) -> Result<Self, LinalgError> {
        let declared = field_from_json(v)?;
        if declared != field.desc() {
            return Err(LinalgError::FieldMismatch(field.desc(), declared));
        }
        let n = usize_field(v, "n")?;
        let get = |key: &str| v.get(key).ok_or_else(|| LinalgError::Parse(format!("certificate needs {key:?}")));
        let s = mat_from_json(field, get("S")?)?;
        let k = usize_field(v, "k")?;
        let r1 = mat_from_json(field, get("R1")?)?;
        let nu = usize_field(v, "nu")?;
        let phi0 = match get("phi0")? {
            Value::Null => LinMap::zero(field.clone(), n, 0),
            doc => LinMap::from_json(field, doc)?,
        };
        if phi0.n() != n {
            return Err(LinalgError::Shape("phi0 domain differs from certificate n".into()));
        }
        Ok(StructureCertificate { s, k, r1, phi0, nu, verified: false })
    }
}

/// Checks every certificate invariant against `phi` and marks it verified.
pub fn verify_certificate<F: Field>(
    phi: &LinMap<F>,
    cert: &mut StructureCertificate<F>,
) -> Result<(), Error<F>> {
    cert.verified = false;
    let rebuilt = cert.reconstruct()?;
    if let Some((i, j)) = rebuilt.first_difference(phi) {
        return Err(Error::Internal(format!("reconstruction differs at E_{}{}", i + 1, j + 1)));
    }
    if !cert.r1.is_invertible() {
        return Err(Error::Internal("R1 is singular".into()));
    }
    if !check_zpp(&cert.phi0).holds {
        return Err(Error::Internal("phi0 does not preserve zero products".into()));
    }
    let nil = cert.phi0.at_identity();
    let nu_ok = if cert.nu == 0 { nil.is_zero() } else { nil.pow(cert.nu).is_zero() && !nil.pow(cert.nu - 1).is_zero() };
    if !nu_ok {
        return Err(Error::Internal(format!("phi0(I) does not have nil index {}", cert.nu)));
    }
    cert.verified = true;
    Ok(())
}

fn require_square_domain<F: Field>(phi: &LinMap<F>) -> Result<(), Error<F>> {
    if phi.n() < 2 {
        return Err(Error::Precondition("this operation needs n >= 2".into()));
    }
    Ok(())
}

/// For a unital ring homomorphism `Ψ: M_n → M_s`, finds `S1` and `k` with
/// `s = nk` and `Ψ(A) = S1 (I_k ⊗ A) S1⁻¹`.
pub fn canonicalize_unital_hom<F: Field>(psi: &LinMap<F>) -> Result<(Mat<F>, usize), Error<F>> {
    let n = psi.n();
    let s = psi.r();
    let field = psi.field().clone();
    if !psi.at_identity().is_identity() {
        return Err(Error::Precondition("map is not unital".into()));
    }
    let hom = check_ring_hom(psi);
    if !hom.holds {
        return Err(Error::not_preserver(Property::RingHom, hom));
    }
    let not_hom = || Error::NotPreserver { property: Property::RingHom, witness: None };
    if s == 0 {
        return Ok((Mat::zeros(field, 0, 0), 0));
    }

    // (1) the diagonal idempotents split F^s into n summands
    let bases: Vec<Mat<F>> = (0..n).map(|i| psi.image(i, i).column_basis()).collect();
    let k = bases[0].cols();
    if bases.iter().any(|b| b.cols() != k) || n * k != s {
        return Err(not_hom());
    }
    let refs: Vec<&Mat<F>> = bases.iter().collect();
    let sa = Mat::hstack(field.clone(), s, &refs);
    let conj = psi.conjugate(&sa).map_err(|_| not_hom())?;

    // (2)-(3) normalise the first block row of the off-diagonal units
    let mut d_blocks = vec![Mat::identity(field.clone(), k)];
    for j in 1..n {
        let b = conj.image(0, j).block(0, j * k, k, k);
        d_blocks.push(b.inverse().map_err(|_| not_hom())?);
    }
    let d_refs: Vec<&Mat<F>> = d_blocks.iter().collect();
    let d = Mat::block_diag(field.clone(), &d_refs);

    // (4) now Ψ(E_ij) = E_ij ⊗ I_k; (5) shuffle to I_k ⊗ E_ij
    let pi = perfect_shuffle(field.clone(), n, k);
    let s1 = &(&sa * &d) * &pi;
    let canon = psi.conjugate(&s1)?;
    let target = LinMap::from_fn(field.clone(), n, s, |i, j| {
        Mat::identity(field.clone(), k).kron(&Mat::unit(field.clone(), n, i, j))
    });
    if canon.first_difference(&target).is_some() {
        return Err(not_hom());
    }
    Ok((s1, k))
}

/// Reads `R1` off a matrix `C = R1 ⊗ I_n` that commutes with every
/// `I_k ⊗ E_ij`.
pub fn extract_tensor_factor<F: Field>(c: &Mat<F>, n: usize, k: usize) -> Result<Mat<F>, Error<F>> {
    let field = c.field().clone();
    if c.shape() != (n * k, n * k) {
        return Err(Error::Precondition(format!("expected a {0}x{0} matrix", n * k)));
    }
    let id_k = Mat::identity(field.clone(), k);
    for i in 0..n {
        for j in 0..n {
            let e = id_k.kron(&Mat::unit(field.clone(), n, i, j));
            if !c.commutes_with(&e) {
                return Err(Error::Precondition(format!(
                    "matrix does not commute with I_k ⊗ E_{}{}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let r1 = Mat::from_fn(field.clone(), k, k, |a, b| c.get(a * n, b * n).clone());
    if r1.kron(&Mat::identity(field, n)) != *c {
        return Err(Error::Precondition("a block is not a scalar matrix".into()));
    }
    Ok(r1)
}

/// Reads `(Φ₁', Φ₀)` off `S0⁻¹ Φ S0` when every image is block-diagonal
/// with blocks `s`, `r - s`.
pub(crate) fn split_blocks<F: Field>(conj: &LinMap<F>, s: usize) -> Result<(LinMap<F>, LinMap<F>), Error<F>> {
    let r = conj.r();
    for i in 0..conj.n() {
        for j in 0..conj.n() {
            if !conj.image(i, j).is_block_diagonal(&[s, r - s]) {
                return Err(Error::Internal(format!(
                    "image of E_{}{} is not block diagonal after the Fitting split",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok((conj.compress(0, s), conj.compress(s, r - s)))
}

/// Full decomposition of a zero-product preserver on `M_n`, `n ≥ 2`. The
/// certificate is checked against `phi` before it is returned.
pub fn decompose_zpp<F: Field>(phi: &LinMap<F>) -> Result<StructureCertificate<F>, Error<F>> {
    require_square_domain(phi)?;
    let verdict = check_zpp(phi);
    if !verdict.holds {
        return Err(Error::not_preserver(Property::Zpp, verdict));
    }
    let n = phi.n();
    let r = phi.r();
    let field = phi.field().clone();

    let fd = fitting_decompose(&phi.at_identity());
    let s = fd.core_size;
    let conj = phi.conjugate(&fd.conjugator)?;
    let (head, phi0) = split_blocks(&conj, s)?;
    if !s.is_multiple_of(n) {
        return Err(Error::Internal(format!("invertible part of size {s} is not a multiple of n = {n}")));
    }

    let r_inv = fd.core.inverse()?;
    let psi = head.map_images(s, |m| &r_inv * m);
    let (s1, k) = canonicalize_unital_hom(&psi).map_err(|e| match e {
        Error::Precondition(m) => Error::Internal(format!("normalised part: {m}")),
        Error::NotPreserver { .. } => Error::Internal("normalised part is not a ring homomorphism".into()),
        other => other,
    })?;
    let s1_inv = s1.inverse()?;
    let r1 = extract_tensor_factor(&(&(&s1_inv * &fd.core) * &s1), n, k)
        .map_err(|e| Error::Internal(format!("invertible part: {e}")))?;

    let conjugator = &fd.conjugator * &s1.direct_sum(&Mat::identity(field, r - s));
    let nu = certificate_nu(&fd.nilpotent);
    let mut cert = StructureCertificate { s: conjugator, k, r1, phi0, nu, verified: false };
    verify_certificate(phi, &mut cert)?;
    Ok(cert)
}

/// For maps on `M_1`, where every linear map preserves zero products: the
/// Fitting data of `Φ(1)`.
pub fn classify_scalar_domain<F: Field>(phi: &LinMap<F>) -> Result<FittingDecomposition<F>, Error<F>> {
    if phi.n() != 1 {
        return Err(Error::Precondition("scalar-domain classification needs n = 1".into()));
    }
    Ok(fitting_decompose(&phi.at_identity()))
}

pub fn fitting_to_json<F: Field>(fd: &FittingDecomposition<F>) -> Value {
    json!({
        "field": fd.conjugator.field().desc().to_string(),
        "n": 1,
        "r": fd.conjugator.rows(),
        "zpp": true,
        "S": mat_to_json(&fd.conjugator),
        "s": fd.core_size,
        "R": mat_to_json(&fd.core),
        "N": mat_to_json(&fd.nilpotent),
        "nu": fd.nil_index,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmallCodomainForm<F: Field> {
    /// `Φ(E_ij) = α S (E_ij ⊕ 0_(r-n)) S⁻¹`.
    ScalarInner { alpha: F::Elem, s: Mat<F> },
    /// The range has trivial multiplications.
    TrivialRange,
}

impl<F: Field> SmallCodomainForm<F> {
    pub fn to_json(&self, field: &F) -> Value {
        match self {
            SmallCodomainForm::ScalarInner { alpha, s } => json!({
                "variant": "scalar_inner",
                "alpha": field.elem_to_json(alpha),
                "S": mat_to_json(s),
            }),
            SmallCodomainForm::TrivialRange => json!({ "variant": "trivial_range" }),
        }
    }
}

/// Classifies zero-product preservers `M_n → M_r` with `r ≤ n + 1`.
pub fn small_codomain_classify<F: Field>(phi: &LinMap<F>) -> Result<SmallCodomainForm<F>, Error<F>> {
    require_square_domain(phi)?;
    let (n, r) = (phi.n(), phi.r());
    if r > n + 1 {
        return Err(Error::Precondition(format!("codomain size {r} exceeds n + 1 = {}", n + 1)));
    }
    let verdict = check_zpp(phi);
    if !verdict.holds {
        return Err(Error::not_preserver(Property::Zpp, verdict));
    }
    if phi.at_identity().pow(r).is_zero() {
        if !check_trivial_mult(phi).holds {
            return Err(Error::Internal("nilpotent small-codomain preserver with nontrivial products".into()));
        }
        return Ok(SmallCodomainForm::TrivialRange);
    }
    let cert = decompose_zpp(phi)?;
    if cert.k != 1 || !cert.phi0.is_zero() {
        return Err(Error::Internal(format!("small codomain gave k = {} and nonzero phi0", cert.k)));
    }
    let field = phi.field().clone();
    let alpha = cert.r1.get(0, 0).clone();
    let inv = cert.s.inverse()?;
    let pad = Mat::zeros(field.clone(), r - n, r - n);
    let scaled = LinMap::from_fn(field.clone(), n, r, |i, j| {
        Mat::unit(field.clone(), n, i, j).scale(&alpha).direct_sum(&pad)
    });
    if scaled.similarity(&cert.s, &inv).first_difference(phi).is_some() {
        return Err(Error::Internal("scalar form does not reconstruct the map".into()));
    }
    Ok(SmallCodomainForm::ScalarInner { alpha, s: cert.s })
}
