//! Jordan homomorphisms: splitting into homomorphism and anti-homomorphism
//! parts, their canonical form, and the double-zero-product decomposition.

use serde_json::{json, Value};

use crate::error::{require_odd_characteristic, Error};
use crate::linalg::json::mat_to_json;
use crate::linalg::{fitting_decompose, Field, Mat};
use crate::linmap::LinMap;
use crate::par;
use crate::structure::{canonicalize_unital_hom, extract_tensor_factor, split_blocks};
use crate::verify::{check_jordan, check_ring_hom, check_zpp, idempotent_probes, Property, Verdict, Witness};

/// `θ = h + g` with `h` a homomorphism supported on `P` and `g` an
/// anti-homomorphism supported on `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanSplit<F: Field> {
    pub p: Mat<F>,
    pub q: Mat<F>,
    pub h: LinMap<F>,
    pub g: LinMap<F>,
}

impl<F: Field> JordanSplit<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "P": mat_to_json(&self.p),
            "Q": mat_to_json(&self.q),
            "h": self.h.to_json(),
            "g": self.g.to_json(),
            "verified": true,
        })
    }
}

fn require_jordan<F: Field>(theta: &LinMap<F>) -> Result<(), Error<F>> {
    require_odd_characteristic(theta.field())?;
    if theta.n() < 2 {
        return Err(Error::Precondition("Jordan operations need n >= 2".into()));
    }
    let v = check_jordan(theta)?;
    if !v.holds {
        return Err(Error::not_preserver(Property::Jordan, v));
    }
    Ok(())
}

/// Splits a Jordan homomorphism. From `θ(A)θ(B) = h(AB) + g(BA)`:
/// `h(E_il) = θ(E_ii)θ(E_il)` for `i ≠ l`, and `h(E_ii) = h(E_ij)h(E_ji)`.
pub fn split_jordan<F: Field>(theta: &LinMap<F>) -> Result<JordanSplit<F>, Error<F>> {
    require_jordan(theta)?;
    let n = theta.n();
    let r = theta.r();
    let field = theta.field().clone();
    let off = |i: usize, l: usize| theta.image(i, i) * theta.image(i, l);
    let h = LinMap::from_fn(field.clone(), n, r, |i, l| {
        if i != l {
            off(i, l)
        } else {
            let j = (i + 1) % n;
            &off(i, j) * &off(j, i)
        }
    });
    let g = theta.try_sub(&h)?;
    let p = h.at_identity();
    let q = g.at_identity();
    let split = JordanSplit { p, q, h, g };
    check_split(theta, &split)?;
    Ok(split)
}

fn check_split<F: Field>(theta: &LinMap<F>, sp: &JordanSplit<F>) -> Result<(), Error<F>> {
    let fail = |what: &str| Err(Error::Internal(format!("Jordan split: {what}")));
    let (p, q) = (&sp.p, &sp.q);
    if &(p * p) != p || &(q * q) != q || !(p * q).is_zero() || !(q * p).is_zero() {
        return fail("P and Q are not disjoint idempotents");
    }
    if p + q != theta.at_identity() {
        return fail("P + Q differs from θ(I)");
    }
    if !check_ring_hom(&sp.h).holds {
        return fail("h is not multiplicative");
    }
    if !check_ring_hom(&sp.g.precompose_transpose()).holds {
        return fail("g is not anti-multiplicative");
    }
    let n = theta.n();
    for i in 0..n {
        for j in 0..n {
            let t = theta.image(i, j);
            let h = sp.h.image(i, j);
            if &(p * t) != h || &(t * p) != h {
                return fail("P θ(E) P differs from h(E)");
            }
        }
    }
    let cross = par::find_map_first(n.pow(4), |idx| {
        let (a, b) = (idx / (n * n), idx % (n * n));
        let ha = sp.h.image(a / n, a % n);
        let gb = sp.g.image(b / n, b % n);
        (!(ha * gb).is_zero() || !(gb * ha).is_zero()).then_some(())
    });
    if cross.is_some() {
        return fail("h and g have nonzero cross products");
    }
    Ok(())
}

/// `θ(E_ij) = S ((I_k1 ⊗ E_ij) ⊕ (I_k2 ⊗ E_ji) ⊕ 0_t) S⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanCanonicalForm<F: Field> {
    pub s: Mat<F>,
    pub k1: usize,
    pub k2: usize,
    pub t: usize,
}

/// `A ↦ (R1 ⊗ A) ⊕ (R2 ⊗ Aᵗ)` on `M_n`.
pub fn hom_antihom_sum<F: Field>(field: &F, n: usize, r1: &Mat<F>, r2: &Mat<F>) -> LinMap<F> {
    let size = n * (r1.rows() + r2.rows());
    LinMap::from_fn(field.clone(), n, size, |i, j| {
        r1.kron(&Mat::unit(field.clone(), n, i, j)).direct_sum(&r2.kron(&Mat::unit(field.clone(), n, j, i)))
    })
}

impl<F: Field> JordanCanonicalForm<F> {
    pub fn reconstruct(&self, n: usize) -> Result<LinMap<F>, Error<F>> {
        let field = self.s.field().clone();
        let model = hom_antihom_sum(&field, n, &Mat::identity(field.clone(), self.k1), &Mat::identity(field.clone(), self.k2))
            .direct_sum(&LinMap::zero(field.clone(), n, self.t))?;
        if model.r() != self.s.rows() {
            return Err(Error::Precondition("canonical form dimensions do not match S".into()));
        }
        Ok(model.similarity(&self.s, &self.s.inverse()?))
    }

    pub fn to_json(&self) -> Value {
        json!({ "S": mat_to_json(&self.s), "k1": self.k1, "k2": self.k2, "t": self.t, "verified": true })
    }
}

/// Canonical form of a Jordan homomorphism `θ: M_n → M_r`, `n ≥ 2`.
pub fn jordan_canonical_form<F: Field>(theta: &LinMap<F>) -> Result<JordanCanonicalForm<F>, Error<F>> {
    require_jordan(theta)?;
    let n = theta.n();
    let r = theta.r();
    let field = theta.field().clone();

    // (1) θ(I) is idempotent; move it to I_s ⊕ 0_t
    let e = theta.at_identity();
    if &e * &e != e {
        return Err(Error::Internal("θ(I) is not idempotent".into()));
    }
    let fd = fitting_decompose(&e);
    let s = fd.core_size;
    let (corner, tail) = split_blocks(&theta.conjugate(&fd.conjugator)?, s)?;
    if !tail.is_zero() {
        return Err(Error::Internal("θ has a component outside θ(I)".into()));
    }

    // (2)-(4) split the corner and canonicalise both halves
    let sp = split_jordan(&corner)?;
    let pb = sp.p.column_basis();
    let qb = sp.q.column_basis();
    let c = Mat::hstack(field.clone(), s, &[&pb, &qb]);
    let (a, b) = (pb.cols(), qb.cols());
    let internal = |e: Error<F>| match e {
        Error::CharacteristicTwo => e,
        other => Error::Internal(format!("canonicalising a Jordan part: {other}")),
    };
    let h = sp.h.conjugate(&c)?.compress(0, a);
    let g = sp.g.conjugate(&c)?.compress(a, b);
    let (sh, k1) = canonicalize_unital_hom(&h).map_err(internal)?;
    let (sg, k2) = canonicalize_unital_hom(&g.precompose_transpose()).map_err(internal)?;

    // (5) assemble and verify
    let inner = &c * &sh.direct_sum(&sg);
    let conjugator = &fd.conjugator * &inner.direct_sum(&Mat::identity(field, r - s));
    let form = JordanCanonicalForm { s: conjugator, k1, k2, t: r - s };
    if let Some((i, j)) = form.reconstruct(n)?.first_difference(theta) {
        return Err(Error::Internal(format!("Jordan form differs at E_{}{}", i + 1, j + 1)));
    }
    Ok(form)
}

/// `Φ(E_ij) = S ((R1 ⊗ E_ij) ⊕ (R2 ⊗ E_ji) ⊕ Φ₀(E_ij)) S⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct DzpCertificate<F: Field> {
    pub s: Mat<F>,
    pub k1: usize,
    pub k2: usize,
    pub r1: Mat<F>,
    pub r2: Mat<F>,
    pub phi0: LinMap<F>,
    /// Nil index of the nilpotent part of `Φ(I)` (0 when vacuous).
    pub nu: usize,
}

impl<F: Field> DzpCertificate<F> {
    pub fn reconstruct(&self) -> Result<LinMap<F>, Error<F>> {
        let field = self.s.field().clone();
        let n = self.phi0.n();
        let model = hom_antihom_sum(&field, n, &self.r1, &self.r2).direct_sum(&self.phi0)?;
        if model.r() != self.s.rows() {
            return Err(Error::Precondition("certificate dimensions do not match S".into()));
        }
        Ok(model.similarity(&self.s, &self.s.inverse()?))
    }

    /// With a nonvacuous `Φ₀`, the certificate reduces double-zero-product
    /// preservation of `Φ` to that of `Φ₀` rather than proving it.
    pub fn reduced_to_phi0(&self) -> bool {
        self.phi0.r() > 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.s.field().desc().to_string(),
            "n": self.phi0.n(),
            "r": self.s.rows(),
            "S": mat_to_json(&self.s),
            "k1": self.k1,
            "k2": self.k2,
            "R1": mat_to_json(&self.r1),
            "R2": mat_to_json(&self.r2),
            "phi0": if self.phi0.r() == 0 { Value::Null } else { self.phi0.to_json() },
            "nu": self.nu,
            "reduced_to_phi0": self.reduced_to_phi0(),
            "verified": true,
        })
    }
}

/// The pair `(P, I − P)` as a double-zero witness, when `Φ` fails on it.
fn complementary_pair<F: Field>(phi: &LinMap<F>, p: &Mat<F>) -> Option<Witness<F>> {
    let q = &Mat::identity(p.field().clone(), p.rows()) - p;
    let (pa, pb) = (phi.apply(p).ok()?, phi.apply(&q).ok()?);
    let ab = &pa * &pb;
    if !ab.is_zero() {
        return Some(Witness::ZeroPair { a: p.clone(), b: q, double: true, reversed: false, product: ab });
    }
    let ba = &pb * &pa;
    (!ba.is_zero()).then_some(Witness::ZeroPair { a: p.clone(), b: q, double: true, reversed: true, product: ba })
}

/// Idempotents tried by the double-zero gates: `E_ii`, `E_ii + E_ij`,
/// `E_ii + E_jj`, and the rank-one probes.
fn gate_idempotents<F: Field>(field: &F, n: usize) -> Vec<Mat<F>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut p = Mat::unit(field.clone(), n, i, i);
            if j != i {
                p.set(i, j, field.one());
            }
            out.push(p);
        }
        for j in i + 1..n {
            out.push(&Mat::unit(field.clone(), n, i, i) + &Mat::unit(field.clone(), n, j, j));
        }
    }
    out.extend(idempotent_probes(field, n, 0));
    out
}

fn not_dzp<F: Field>(witness: Option<Witness<F>>) -> Error<F> {
    Error::NotPreserver { property: Property::Dzp, witness: witness.map(Box::new) }
}

/// Decomposes a double-zero-product preserver, `n ≥ 2`, characteristic ≠ 2.
/// Failed gates are reported as "not a double zero product preserver", with
/// an explicit pair `(P, I − P)` whenever one is found.
pub fn decompose_dzp<F: Field>(phi: &LinMap<F>) -> Result<DzpCertificate<F>, Error<F>> {
    require_odd_characteristic(phi.field())?;
    let n = phi.n();
    if n < 2 {
        return Err(Error::Precondition("decompose_dzp needs n >= 2".into()));
    }
    let r = phi.r();
    let field = phi.field().clone();
    let probes = gate_idempotents(&field, n);
    let find_pair = || par::find_map_first(probes.len(), |t| complementary_pair(phi, &probes[t]));

    // gate: Φ(I) commutes with the whole range
    let phi_i = phi.at_identity();
    if phi.images().iter().any(|m| !m.commutes_with(&phi_i)) {
        return Err(not_dzp(find_pair()));
    }

    let fd = fitting_decompose(&phi_i);
    let s = fd.core_size;
    let (head, phi0) = split_blocks(&phi.conjugate(&fd.conjugator)?, s)?;
    let r_inv = fd.core.inverse()?;
    let psi = head.map_images(s, |m| m * &r_inv);
    if !check_jordan(&psi)?.holds {
        return Err(not_dzp(find_pair()));
    }

    let jcf = if s == 0 {
        JordanCanonicalForm { s: Mat::zeros(field.clone(), 0, 0), k1: 0, k2: 0, t: 0 }
    } else {
        jordan_canonical_form(&psi)?
    };
    if jcf.t != 0 {
        return Err(Error::Internal("normalised part is not unital".into()));
    }
    let (a, b) = (n * jcf.k1, n * jcf.k2);
    let c = &(&jcf.s.inverse()? * &fd.core) * &jcf.s;
    if !c.is_block_diagonal(&[a, b]) {
        return Err(Error::Internal("invertible part mixes the two Jordan halves".into()));
    }
    let internal = |e: Error<F>| Error::Internal(format!("invertible part: {e}"));
    let r1 = extract_tensor_factor(&c.block(0, 0, a, a), n, jcf.k1).map_err(internal)?;
    let r2 = extract_tensor_factor(&c.block(a, a, b, b), n, jcf.k2).map_err(internal)?;

    let conjugator = &fd.conjugator * &jcf.s.direct_sum(&Mat::identity(field.clone(), r - s));
    let cert = DzpCertificate { s: conjugator, k1: jcf.k1, k2: jcf.k2, r1, r2, phi0, nu: fd.nil_index };
    if let Some((i, j)) = cert.reconstruct()?.first_difference(phi) {
        return Err(Error::Internal(format!("reconstruction differs at E_{}{}", i + 1, j + 1)));
    }

    // Φ₀(P)^(ν+1) = 0 on every probe idempotent; a failure pins (P, I − P)
    let bad = par::find_map_first(probes.len(), |t| {
        let img = cert.phi0.apply(&probes[t]).ok()?;
        (!img.pow(cert.nu + 1).is_zero()).then_some(t)
    });
    if let Some(t) = bad {
        return Err(not_dzp(complementary_pair(phi, &probes[t])));
    }
    Ok(cert)
}

/// The three verdicts behind "Jordan and zero-product preserving implies
/// homomorphism"; `holds` is the implication.
#[derive(Clone, Debug, PartialEq)]
pub struct PromotionReport<F: Field> {
    pub jordan: Verdict<F>,
    pub zpp: Verdict<F>,
    pub ring: Verdict<F>,
    pub holds: bool,
}

impl<F: Field> PromotionReport<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "jordan": self.jordan.to_json(),
            "zpp": self.zpp.to_json(),
            "ring": self.ring.to_json(),
        })
    }
}

pub fn check_zpp_jordan_promotion<F: Field>(theta: &LinMap<F>) -> Result<PromotionReport<F>, Error<F>> {
    let jordan = check_jordan(theta)?;
    let zpp = check_zpp(theta);
    let ring = check_ring_hom(theta);
    let holds = !(jordan.holds && zpp.holds) || ring.holds;
    Ok(PromotionReport { jordan, zpp, ring, holds })
}
