//! Exact decision procedures and seeded falsifiers for preserver properties.
//!
//! All unit-basis checks rest on bilinearity: a bilinear identity holds on
//! `M_n` iff it holds on every pair of matrix units.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{require_odd_characteristic, Error};
use crate::linalg::json::mat_to_json;
use crate::linalg::{Field, Mat};
use crate::linmap::LinMap;
use crate::par;
use crate::rng::{derive_seed, random_mat, random_of_rank, seeded};

/// Enumeration budget for rank-one idempotents.
pub const IDEMPOTENT_BUDGET: u64 = 1_000_000;
/// Sample size when the enumeration budget is exceeded or the field is infinite.
pub const IDEMPOTENT_SAMPLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Zpp,
    Dzp,
    Jordan,
    RingHom,
    Idempotent,
    TrivialMult,
    PairwiseZero,
    PowerBound,
}

impl Property {
    /// Short name used on the command line and in JSON.
    pub fn key(self) -> &'static str {
        match self {
            Property::Zpp => "zpp",
            Property::Dzp => "dzp",
            Property::Jordan => "jordan",
            Property::RingHom => "ring",
            Property::Idempotent => "idem",
            Property::TrivialMult => "trivial",
            Property::PairwiseZero => "pairwise-zero",
            Property::PowerBound => "power-bound",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Zpp => "zero product preserver",
            Property::Dzp => "double zero product preserver",
            Property::Jordan => "Jordan homomorphism",
            Property::RingHom => "ring homomorphism",
            Property::Idempotent => "idempotent preserver",
            Property::TrivialMult => "map with trivial multiplications",
            Property::PairwiseZero => "family with pairwise zero products",
            Property::PowerBound => "map obeying the nil-index product bound",
        })
    }
}

impl FromStr for Property {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "zpp" => Property::Zpp,
            "dzp" => Property::Dzp,
            "jordan" => Property::Jordan,
            "ring" => Property::RingHom,
            "idem" => Property::Idempotent,
            "trivial" => Property::TrivialMult,
            other => return Err(format!("unknown property {other:?}")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Randomized,
}

/// Evidence that a property fails. Every variant can be re-evaluated
/// independently of the routine that produced it.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness<F: Field> {
    /// A unit-basis identity of `relation` fails at `(E_ij, E_kl)`, with
    /// `units = [i, j, k, l]` (0-based).
    Identity { relation: Property, units: [usize; 4], lhs: Mat<F>, rhs: Mat<F> },
    /// `AB = 0` (and `BA = 0` when `double`) but `product`, which is
    /// `Φ(A)Φ(B)` or `Φ(B)Φ(A)` when `reversed`, is nonzero.
    ZeroPair { a: Mat<F>, b: Mat<F>, double: bool, reversed: bool, product: Mat<F> },
    /// `P` is idempotent but `Φ(P)² ≠ Φ(P)`.
    Idempotent { p: Mat<F>, image: Mat<F>, square: Mat<F> },
    /// Basis elements `i, j` with `B_i B_j ≠ 0`.
    BasisProduct { indices: [usize; 2], product: Mat<F> },
    /// `Φ(A_1)···Φ(A_m) ≠ 0`.
    PowerProduct { factors: Vec<Mat<F>>, product: Mat<F> },
}

fn unit<F: Field>(field: &F, n: usize, i: usize, j: usize) -> Mat<F> {
    Mat::unit(field.clone(), n, i, j)
}

fn decode_quad(q: usize, n: usize) -> [usize; 4] {
    [q / (n * n * n), (q / (n * n)) % n, (q / n) % n, q % n]
}

/// Both sides of the unit identity for `relation`; `None` for relations
/// that have no unit identity.
fn identity_sides<F: Field>(
    phi: &LinMap<F>,
    relation: Property,
    [i, j, k, l]: [usize; 4],
    phi_i: &Mat<F>,
) -> Option<(Mat<F>, Mat<F>)> {
    let field = phi.field();
    let zero = || Mat::zeros(field.clone(), phi.r(), phi.r());
    let a = phi.image(i, j);
    let b = phi.image(k, l);
    Some(match relation {
        Property::Zpp => (a * b, if j == k { phi_i * phi.image(i, l) } else { zero() }),
        Property::RingHom => (a * b, if j == k { phi.image(i, l).clone() } else { zero() }),
        Property::TrivialMult => (a * b, zero()),
        Property::Jordan => {
            let mut rhs = zero();
            if j == k {
                rhs = &rhs + phi.image(i, l);
            }
            if l == i {
                rhs = &rhs + phi.image(k, j);
            }
            (&(a * b) + &(b * a), rhs)
        }
        _ => return None,
    })
}

impl<F: Field> Witness<F> {
    /// Re-evaluates the witness against `phi`; true iff it is a genuine
    /// violation with the recorded values.
    pub fn recheck(&self, phi: &LinMap<F>) -> bool {
        let n = phi.n();
        match self {
            Witness::Identity { relation, units, lhs, rhs } => {
                if units.iter().any(|&u| u >= n) {
                    return false;
                }
                match identity_sides(phi, *relation, *units, &phi.at_identity()) {
                    Some((l, r)) => &l == lhs && &r == rhs && l != r,
                    None => false,
                }
            }
            Witness::ZeroPair { a, b, double, reversed, product } => {
                if a.shape() != (n, n) || b.shape() != (n, n) {
                    return false;
                }
                if !(a * b).is_zero() || (*double && !(b * a).is_zero()) {
                    return false;
                }
                let (Ok(pa), Ok(pb)) = (phi.apply(a), phi.apply(b)) else {
                    return false;
                };
                let got = if *reversed { &pb * &pa } else { &pa * &pb };
                &got == product && !got.is_zero()
            }
            Witness::Idempotent { p, image, square } => {
                if p.shape() != (n, n) || &(p * p) != p {
                    return false;
                }
                let Ok(got) = phi.apply(p) else { return false };
                let sq = &got * &got;
                &got == image && &sq == square && sq != got
            }
            Witness::BasisProduct { .. } => false,
            Witness::PowerProduct { factors, product } => {
                let mut acc = Mat::identity(phi.field().clone(), phi.r());
                for a in factors {
                    let Ok(img) = phi.apply(a) else { return false };
                    acc = &acc * &img;
                }
                &acc == product && !acc.is_zero()
            }
        }
    }

    /// Re-evaluates a [`Witness::BasisProduct`] against the basis it came from.
    pub fn recheck_basis(&self, basis: &[Mat<F>]) -> bool {
        match self {
            Witness::BasisProduct { indices: [i, j], product } => match (basis.get(*i), basis.get(*j)) {
                (Some(a), Some(b)) if a.shape() == b.shape() && a.is_square() => {
                    let got = a * b;
                    &got == product && !got.is_zero()
                }
                _ => false,
            },
            _ => false,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Witness::Identity { relation, units, lhs, rhs } => json!({
                "kind": "identity",
                "relation": relation.key(),
                "units": units.iter().map(|u| u + 1).collect::<Vec<_>>(),
                "lhs": mat_to_json(lhs),
                "rhs": mat_to_json(rhs),
            }),
            Witness::ZeroPair { a, b, double, reversed, product } => json!({
                "kind": "zero_pair",
                "A": mat_to_json(a),
                "B": mat_to_json(b),
                "double": double,
                "order": if *reversed { "BA" } else { "AB" },
                "product": mat_to_json(product),
            }),
            Witness::Idempotent { p, image, square } => json!({
                "kind": "idempotent",
                "P": mat_to_json(p),
                "image": mat_to_json(image),
                "square": mat_to_json(square),
            }),
            Witness::BasisProduct { indices, product } => json!({
                "kind": "basis_product",
                "indices": indices.iter().map(|u| u + 1).collect::<Vec<_>>(),
                "product": mat_to_json(product),
            }),
            Witness::PowerProduct { factors, product } => json!({
                "kind": "power_product",
                "factors": factors.iter().map(mat_to_json).collect::<Vec<_>>(),
                "product": mat_to_json(product),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<F: Field> {
    pub holds: bool,
    pub witness: Option<Witness<F>>,
    pub mode: Mode,
    /// Number of random trials; `None` for exact checks.
    pub trials: Option<u64>,
}

impl<F: Field> Verdict<F> {
    pub fn exact(witness: Option<Witness<F>>) -> Self {
        Verdict { holds: witness.is_none(), witness, mode: Mode::Exact, trials: None }
    }

    pub fn randomized(trials: u64, witness: Option<Witness<F>>) -> Self {
        Verdict { holds: witness.is_none(), witness, mode: Mode::Randomized, trials: Some(trials) }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "witness": self.witness.as_ref().map_or(Value::Null, Witness::to_json),
            "mode": match self.mode { Mode::Exact => "exact", Mode::Randomized => "randomized" },
            "trials": self.trials,
        })
    }
}

/// A pair of `n x n` matrices, typically with `AB = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatPair<F: Field> {
    pub a: Mat<F>,
    pub b: Mat<F>,
}

/// First quadruple in lexicographic order where `relation`'s identity fails.
fn scan_identity<F: Field>(
    phi: &LinMap<F>,
    relation: Property,
    filter: impl Fn([usize; 4]) -> bool + Sync + Send,
) -> Option<Witness<F>> {
    let n = phi.n();
    let phi_i = phi.at_identity();
    par::find_map_first(n.pow(4), |q| {
        let units = decode_quad(q, n);
        if !filter(units) {
            return None;
        }
        let (lhs, rhs) = identity_sides(phi, relation, units, &phi_i)?;
        (lhs != rhs).then_some(Witness::Identity { relation, units, lhs, rhs })
    })
}

/// The idempotents `E_ii` and `E_ii + E_ij` (`i ≠ j`); they span `M_n`.
fn spanning_idempotents<F: Field>(field: &F, n: usize) -> Vec<Mat<F>> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut p = unit(field, n, i, i);
            if j != i {
                p.set(i, j, field.one());
            }
            out.push(p);
        }
    }
    out
}

/// Searches the zero-product pairs `(X(I−P), PY)` and `(XP, (I−P)Y)` over
/// units `X, Y` and spanning idempotents `P`. If all of them are preserved,
/// the identity `Φ(A)Φ(B) = Φ(I)Φ(AB)` follows, so after an identity failure
/// this search always returns a pair.
fn explicit_zero_pair<F: Field>(phi: &LinMap<F>) -> Option<Witness<F>> {
    let n = phi.n();
    let field = phi.field();
    let idems = spanning_idempotents(field, n);
    let id = Mat::identity(field.clone(), n);
    let n2 = n * n;
    par::find_map_first(idems.len() * n2 * n2 * 2, |idx| {
        let side = idx % 2;
        let rest = idx / 2;
        let y = rest % n2;
        let x = (rest / n2) % n2;
        let p = &idems[rest / (n2 * n2)];
        let q = &id - p;
        let xm = unit(field, n, x / n, x % n);
        let ym = unit(field, n, y / n, y % n);
        let (a, b) = if side == 0 { (&xm * &q, p * &ym) } else { (&xm * p, &q * &ym) };
        if a.is_zero() || b.is_zero() {
            return None;
        }
        let product = &phi.apply(&a).ok()? * &phi.apply(&b).ok()?;
        (!product.is_zero()).then_some(Witness::ZeroPair { a, b, double: false, reversed: false, product })
    })
}

/// Exact zero-product-preservation decision.
///
/// For `n ≥ 2`, `Φ` preserves zero products iff
/// `Φ(E_ij)Φ(E_kl) = Φ(I)Φ(E_ij E_kl)` for all units. Failures are always
/// reported as an explicit pair `(A, B)` with `AB = 0`; unit pairs with
/// `j ≠ k` are tried first.
pub fn check_zpp<F: Field>(phi: &LinMap<F>) -> Verdict<F> {
    let n = phi.n();
    if n == 1 {
        return Verdict::exact(None);
    }
    let field = phi.field();
    let direct = scan_identity(phi, Property::Zpp, |[_, j, k, _]| j != k);
    if let Some(Witness::Identity { units: [i, j, k, l], lhs, .. }) = direct {
        return Verdict::exact(Some(Witness::ZeroPair {
            a: unit(field, n, i, j),
            b: unit(field, n, k, l),
            double: false,
            reversed: false,
            product: lhs,
        }));
    }
    match scan_identity(phi, Property::Zpp, |[_, j, k, _]| j == k) {
        None => Verdict::exact(None),
        Some(w) => Verdict::exact(Some(explicit_zero_pair(phi).unwrap_or(w))),
    }
}

/// `Φ(E_ij)Φ(E_kl) = δ_jk Φ(E_il)` for all units.
pub fn check_ring_hom<F: Field>(phi: &LinMap<F>) -> Verdict<F> {
    Verdict::exact(scan_identity(phi, Property::RingHom, |_| true))
}

/// Jordan identity on all unit pairs. Characteristic 2 is rejected.
pub fn check_jordan<F: Field>(phi: &LinMap<F>) -> Result<Verdict<F>, Error<F>> {
    require_odd_characteristic(phi.field())?;
    let n = phi.n();
    // symmetric in the two arguments: scan pairs with (i, j) <= (k, l)
    Ok(Verdict::exact(scan_identity(phi, Property::Jordan, move |[i, j, k, l]| i * n + j <= k * n + l)))
}

/// `Φ(E_ij)Φ(E_kl) = 0` for all units.
pub fn check_trivial_mult<F: Field>(phi: &LinMap<F>) -> Verdict<F> {
    Verdict::exact(scan_identity(phi, Property::TrivialMult, |_| true))
}

/// Rank-one idempotents `x yᵗ` with `yᵗx = 1`, each listed once (`x` scaled
/// so its first nonzero entry is 1). Returns `None` when the field is
/// infinite or there are more than `budget` candidates.
pub fn rank_one_idempotents<F: Field>(field: &F, n: usize, budget: u64) -> Option<Vec<Mat<F>>> {
    let p = field.order()?;
    let exp = u32::try_from(2 * n - 2).ok()?;
    if p.checked_pow(exp).is_none_or(|c| c > budget) {
        return None;
    }
    let total = p.checked_pow(n as u32)?;
    let vectors: Vec<Vec<F::Elem>> = (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = idx % p;
                    idx /= p;
                    field.nth_element(d)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for x in &vectors {
        match x.iter().find(|e| !field.is_zero(e)) {
            Some(first) if field.is_one(first) => {}
            _ => continue,
        }
        for y in &vectors {
            let dot = x.iter().zip(y).fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)));
            if field.is_one(&dot) {
                out.push(Mat::from_fn(field.clone(), n, n, |i, j| field.mul(&x[i], &y[j])));
            }
        }
    }
    Some(out)
}

/// A random rank-one idempotent `x yᵗ` with `yᵗx = 1`.
pub fn sample_rank_one_idempotent<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Mat<F> {
    loop {
        let x = random_mat(field, n, 1, rng);
        let y = random_mat(field, n, 1, rng);
        let dot = (&y.transpose() * &x).get(0, 0).clone();
        if let Some(inv) = field.inv(&dot) {
            return &x * &y.transpose().scale(&inv);
        }
    }
}

/// Rank-one idempotents used for cross-checks: the full list when within
/// budget, otherwise a fixed-seed sample.
pub(crate) fn idempotent_probes<F: Field>(field: &F, n: usize, seed: u64) -> Vec<Mat<F>> {
    rank_one_idempotents(field, n, IDEMPOTENT_BUDGET).unwrap_or_else(|| {
        let mut rng = seeded(seed);
        (0..IDEMPOTENT_SAMPLES).map(|_| sample_rank_one_idempotent(field, n, &mut rng)).collect()
    })
}

fn first_non_idempotent_image<F: Field>(phi: &LinMap<F>, probes: &[Mat<F>]) -> Option<Witness<F>> {
    par::find_map_first(probes.len(), |t| {
        let p = &probes[t];
        let image = phi.apply(p).ok()?;
        let square = &image * &image;
        (square != image).then(|| Witness::Idempotent { p: p.clone(), image, square })
    })
}

/// Idempotent preservation, decided through the Jordan identity
/// (characteristic ≠ 2) and cross-checked against rank-one idempotents.
/// A disagreement between the two is reported as an internal error.
pub fn check_idempotent_preserver<F: Field>(phi: &LinMap<F>) -> Result<Verdict<F>, Error<F>> {
    let jordan = check_jordan(phi)?;
    let probes = idempotent_probes(phi.field(), phi.n(), 0);
    let found = first_non_idempotent_image(phi, &probes);
    match (jordan.holds, found) {
        (true, None) => Ok(Verdict::exact(None)),
        (true, Some(_)) => Err(Error::Internal(
            "Jordan identity holds but an idempotent maps to a non-idempotent".into(),
        )),
        (false, Some(w)) => Ok(Verdict::exact(Some(w))),
        (false, None) => Ok(jordan),
    }
}

/// A pair with `AB = 0` (and `BA = 0` when `double`): `A` has rank drawn
/// uniformly from `0..=n`, and `B` is uniform on the solution space of the
/// linear constraints.
pub fn sample_zero_pair<F: Field>(field: &F, n: usize, seed: u64, double: bool) -> MatPair<F> {
    let mut rng = seeded(seed);
    let rank = rng.random_range(0..=n);
    let a = random_of_rank(field, n, n, rank, &mut rng);
    let right = a.kernel_matrix();
    let b = if double {
        let left = a.transpose().kernel_matrix();
        let w = random_mat(field, right.cols(), left.cols(), &mut rng);
        &(&right * &w) * &left.transpose()
    } else {
        let w = random_mat(field, right.cols(), n, &mut rng);
        &right * &w
    };
    MatPair { a, b }
}

/// Randomized falsifier for zero-product (`Zpp`) or double-zero-product
/// (`Dzp`) preservation. `holds` only means no counterexample was found.
pub fn fuzz_preserver<F: Field>(
    phi: &LinMap<F>,
    property: Property,
    trials: u64,
    seed: u64,
) -> Result<Verdict<F>, Error<F>> {
    let double = match property {
        Property::Zpp => false,
        Property::Dzp => true,
        other => return Err(Error::Precondition(format!("cannot fuzz property {}", other.key()))),
    };
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let trials_usize = usize::try_from(trials).map_err(|_| Error::Precondition("too many trials".into()))?;
    let field = phi.field();
    let n = phi.n();
    let witness = par::find_map_first(trials_usize, |t| {
        let MatPair { a, b } = sample_zero_pair(field, n, derive_seed(seed, t as u64), double);
        let pa = phi.apply(&a).ok()?;
        let pb = phi.apply(&b).ok()?;
        let ab = &pa * &pb;
        if !ab.is_zero() {
            return Some(Witness::ZeroPair { a, b, double, reversed: false, product: ab });
        }
        if double {
            let ba = &pb * &pa;
            if !ba.is_zero() {
                return Some(Witness::ZeroPair { a, b, double, reversed: true, product: ba });
            }
        }
        None
    });
    Ok(Verdict::randomized(trials, witness))
}

/// Checks that products of `nu + 1` images of random matrices vanish, for a
/// zero-product preserver with `Φ(I)^nu = 0`. A nonzero product contradicts
/// the theory and is reported as an internal error.
pub fn check_power_products<F: Field>(
    phi: &LinMap<F>,
    nu: usize,
    tuples: u64,
    seed: u64,
) -> Result<Verdict<F>, Error<F>> {
    if !phi.at_identity().pow(nu).is_zero() {
        return Err(Error::Precondition(format!("Φ(I)^{nu} is not zero")));
    }
    let zpp = check_zpp(phi);
    if !zpp.holds {
        return Err(Error::not_preserver(Property::Zpp, zpp));
    }
    let count = usize::try_from(tuples).map_err(|_| Error::Precondition("too many tuples".into()))?;
    let field = phi.field();
    let n = phi.n();
    let bad = par::find_map_first(count, |t| {
        let mut rng = seeded(derive_seed(seed, t as u64));
        let factors: Vec<Mat<F>> = (0..=nu).map(|_| random_mat(field, n, n, &mut rng)).collect();
        let mut product = Mat::identity(field.clone(), phi.r());
        for a in &factors {
            product = &product * &phi.apply(a).ok()?;
        }
        (!product.is_zero()).then_some(Witness::PowerProduct { factors, product })
    });
    match bad {
        None => Ok(Verdict::randomized(tuples, None)),
        Some(w) => {
            debug_assert!(w.recheck(phi));
            Err(Error::Internal(format!("a product of {} images is nonzero", nu + 1)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};
    use crate::rng::random_invertible;
    use proptest::prelude::*;

    fn symmetric_killer<F: Field>(f: F) -> LinMap<F> {
        // [[a,b],[c,d]] -> [[0, b - c],[0,0]]
        LinMap::from_fn(f.clone(), 2, 2, |i, j| match (i, j) {
            (0, 1) => Mat::unit(f.clone(), 2, 0, 1),
            (1, 0) => Mat::unit(f.clone(), 2, 0, 1).scale(&f.from_i64(-1)),
            _ => Mat::zeros(f.clone(), 2, 2),
        })
    }

    #[test]
    fn zpp_examples() {
        let q = Rationals;
        assert!(check_zpp(&LinMap::identity(q, 3)).holds);
        let t = LinMap::transpose_map(q, 2);
        let v = check_zpp(&t);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(w.recheck(&t));
        assert!(matches!(w, Witness::ZeroPair { .. }));

        // the pair (E_12, E_11) is a counterexample as well
        let hand = Witness::ZeroPair {
            a: Mat::unit(q, 2, 0, 1),
            b: Mat::unit(q, 2, 0, 0),
            double: false,
            reversed: false,
            product: Mat::unit(q, 2, 1, 0),
        };
        assert!(hand.recheck(&t));

        // every map on M_1 preserves zero products
        let f = PrimeField::new(5).unwrap();
        let one = LinMap::from_fn(f, 1, 2, |_, _| Mat::from_i64_rows(f, &[&[1, 2], &[3, 4]]));
        assert!(check_zpp(&one).holds);
        assert!(check_zpp(&symmetric_killer(q)).holds);
    }

    #[test]
    fn identity_only_failures_become_explicit_pairs() {
        // Φ(E_ii) = 2E_ii, Φ(E_ij) = E_ij otherwise: unit products with j != k
        // still vanish, but Φ(E_12)Φ(E_21) = E_11 while Φ(I)Φ(E_11) = 4E_11.
        let q = Rationals;
        let phi = LinMap::from_fn(q, 2, 2, |i, j| {
            let e = Mat::unit(q, 2, i, j);
            if i == j { e.scale(&q.from_i64(2)) } else { e }
        });
        let direct = scan_identity(&phi, Property::Zpp, |[_, j, k, _]| j != k);
        assert!(direct.is_none());
        let v = check_zpp(&phi);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(matches!(w, Witness::ZeroPair { .. }));
        assert!(w.recheck(&phi));
    }

    #[test]
    fn ring_and_jordan_examples() {
        let q = Rationals;
        let id = LinMap::identity(q, 2);
        assert!(check_ring_hom(&id).holds);
        let double = id.map_images(2, |m| m.scale(&q.from_i64(2)));
        let v = check_ring_hom(&double);
        assert!(!v.holds);
        assert!(v.witness.unwrap().recheck(&double));
        let tensor = LinMap::from_fn(q, 2, 4, |i, j| Mat::identity(q, 2).kron(&Mat::unit(q, 2, i, j)));
        assert!(check_ring_hom(&tensor).holds);

        let t = LinMap::transpose_map(q, 3);
        assert!(check_jordan(&t).unwrap().holds);
        assert!(!check_ring_hom(&t).holds);
        assert!(check_jordan(&id).unwrap().holds);
        let sk = symmetric_killer(q);
        let v = check_jordan(&sk).unwrap();
        assert!(!v.holds);
        assert!(v.witness.unwrap().recheck(&sk));

        let f2 = PrimeField::new(2).unwrap();
        assert!(matches!(check_jordan(&LinMap::identity(f2, 2)), Err(Error::CharacteristicTwo)));
    }

    #[test]
    fn jordan_violation_in_killer_is_found_by_exhaustive_pair_scan() {
        let q = Rationals;
        let sk = symmetric_killer(q);
        let mut violations = 0;
        for a in 0..4 {
            for b in 0..4 {
                let (ea, eb) = (Mat::unit(q, 2, a / 2, a % 2), Mat::unit(q, 2, b / 2, b % 2));
                let lhs = sk.apply(&(&(&ea * &eb) + &(&eb * &ea))).unwrap();
                let (pa, pb) = (sk.apply(&ea).unwrap(), sk.apply(&eb).unwrap());
                if lhs != &(&pa * &pb) + &(&pb * &pa) {
                    violations += 1;
                }
            }
        }
        assert!(violations > 0);
    }

    #[test]
    fn idempotent_examples() {
        let f = PrimeField::new(3).unwrap();
        let sk = symmetric_killer(f);
        let v = check_idempotent_preserver(&sk).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(matches!(w, Witness::Idempotent { .. }));
        assert!(w.recheck(&sk));

        assert!(check_idempotent_preserver(&LinMap::zero(f, 2, 3)).unwrap().holds);

        let f7 = PrimeField::new(7).unwrap();
        let mut rng = seeded(5);
        let s = random_invertible(&f7, 4, &mut rng);
        let sum = LinMap::identity(f7, 2).direct_sum(&LinMap::transpose_map(f7, 2)).unwrap();
        let conj = sum.conjugate(&s).unwrap();
        assert!(check_idempotent_preserver(&conj).unwrap().holds);
        assert!(check_idempotent_preserver(&LinMap::identity(Rationals, 2)).unwrap().holds);
    }

    #[test]
    fn rank_one_idempotent_enumeration() {
        let f = PrimeField::new(3).unwrap();
        let list = rank_one_idempotents(&f, 2, IDEMPOTENT_BUDGET).unwrap();
        // brute force over all 81 matrices
        let brute: Vec<Mat<PrimeField>> = (0..81u64)
            .map(|mut c| {
                Mat::from_fn(f, 2, 2, |_, _| {
                    let d = c % 3;
                    c /= 3;
                    d
                })
            })
            .filter(|m| m.rank() == 1 && &(m * m) == m)
            .collect();
        assert_eq!(list.len(), brute.len());
        assert!(brute.iter().all(|m| list.contains(m)));
        assert!(rank_one_idempotents(&Rationals, 2, IDEMPOTENT_BUDGET).is_none());
        assert!(rank_one_idempotents(&f, 20, IDEMPOTENT_BUDGET).is_none());
    }

    #[test]
    fn trivial_mult_examples() {
        let q = Rationals;
        assert!(check_trivial_mult(&symmetric_killer(q)).holds);
        assert!(check_trivial_mult(&LinMap::zero(q, 3, 2)).holds);
        let id = LinMap::identity(q, 1);
        let v = check_trivial_mult(&id);
        assert!(!v.holds && v.witness.unwrap().recheck(&id));
    }

    #[test]
    fn zero_pair_support_matches_brute_force() {
        let f = PrimeField::new(2).unwrap();
        let all: Vec<Mat<PrimeField>> = (0..16u64)
            .map(|c| Mat::from_fn(f, 2, 2, |i, j| (c >> (2 * i + j)) & 1))
            .collect();
        let mut brute = std::collections::BTreeSet::new();
        for (x, a) in all.iter().enumerate() {
            for (y, b) in all.iter().enumerate() {
                if (a * b).is_zero() {
                    brute.insert((x, y));
                }
            }
        }
        let index = |m: &Mat<PrimeField>| all.iter().position(|c| c == m).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for t in 0..10_000 {
            let pair = sample_zero_pair(&f, 2, t, false);
            assert!((&pair.a * &pair.b).is_zero());
            seen.insert((index(&pair.a), index(&pair.b)));
        }
        assert_eq!(seen, brute);
    }

    #[test]
    fn fuzz_examples() {
        let f = PrimeField::new(3).unwrap();
        let id = LinMap::identity(f, 2);
        assert!(fuzz_preserver(&id, Property::Dzp, 1000, 0).unwrap().holds);
        let t = LinMap::transpose_map(f, 2);
        let v = fuzz_preserver(&t, Property::Zpp, 500, 0).unwrap();
        assert!(!v.holds);
        assert!(v.witness.unwrap().recheck(&t));
        let sum = id.direct_sum(&t).unwrap();
        assert!(fuzz_preserver(&sum, Property::Dzp, 1000, 1).unwrap().holds);
        assert!(fuzz_preserver(&id, Property::Jordan, 10, 0).is_err());
        assert!(fuzz_preserver(&id, Property::Zpp, 0, 0).is_err());
    }

    #[test]
    fn power_product_examples() {
        let q = Rationals;
        assert!(matches!(
            check_power_products(&LinMap::identity(q, 2), 0, 10, 0),
            Err(Error::Precondition(_))
        ));
        let killer = symmetric_killer(q);
        assert!(check_power_products(&killer, 1, 50, 0).unwrap().holds);
    }

    #[test]
    fn verdict_json_shape() {
        let q = Rationals;
        let v = check_zpp(&LinMap::transpose_map(q, 2));
        let doc = v.to_json();
        assert_eq!(doc["holds"], false);
        assert_eq!(doc["mode"], "exact");
        assert_eq!(doc["witness"]["kind"], "zero_pair");
        assert!(doc["trials"].is_null());
    }

    proptest! {
        #[test]
        fn double_pairs_annihilate_both_ways(seed: u64, n in 1usize..5) {
            let f = PrimeField::new(5).unwrap();
            let p = sample_zero_pair(&f, n, seed, true);
            prop_assert!((&p.a * &p.b).is_zero());
            prop_assert!((&p.b * &p.a).is_zero());
        }

        #[test]
        fn hom_implies_jordan_implies_idempotent(seed: u64) {
            let f = PrimeField::new(5).unwrap();
            let mut rng = seeded(seed);
            let s = random_invertible(&f, 4, &mut rng);
            let id = LinMap::identity(f, 2);
            let candidates = [
                id.direct_sum(&id).unwrap().conjugate(&s).unwrap(),
                id.direct_sum(&LinMap::transpose_map(f, 2)).unwrap().conjugate(&s).unwrap(),
                LinMap::from_fn(f, 2, 4, |_, _| random_mat(&f, 4, 4, &mut rng)),
            ];
            for phi in &candidates {
                let ring = check_ring_hom(phi).holds;
                let jordan = check_jordan(phi).unwrap().holds;
                let idem = check_idempotent_preserver(phi).unwrap().holds;
                prop_assert!(!ring || jordan);
                prop_assert!(!jordan || idem);
            }
        }

        #[test]
        fn false_verdicts_recheck(seed: u64, r in 1usize..4) {
            let f = PrimeField::new(3).unwrap();
            let mut rng = seeded(seed);
            let phi = LinMap::from_fn(f, 2, r, |_, _| random_mat(&f, r, r, &mut rng));
            for v in [check_zpp(&phi), check_ring_hom(&phi), check_jordan(&phi).unwrap(), check_trivial_mult(&phi)] {
                if let Some(w) = v.witness {
                    prop_assert!(w.recheck(&phi));
                }
            }
        }
    }
}
