//! Subspaces of `M_l` with trivial multiplication (`XY = 0` for all `X, Y`)
//! and their block-pattern canonical form.
//!
//! In the canonical basis every element has the shape
//!
//! ```text
//! [ 0_p  Z12  Z13 ]      Z13 supported in its top-left u x v corner,
//! [ 0    0_p  0   ]      Z32 supported in its bottom-right (q-v) x (p-u) corner.
//! [ 0    Z32  0_q ]
//! ```

use rand::Rng;
use serde_json::{json, Value};

use crate::error::Error;
use crate::linalg::json::{field_from_json, mat_from_json, mat_to_json, usize_field};
use crate::linalg::{Field, LinalgError, Mat};
use crate::linmap::LinMap;
use crate::par;
use crate::rng::{derive_seed, random_mat, seeded};
use crate::verify::{sample_rank_one_idempotent, Verdict, Witness};

/// Combination budget for the exhaustive maximal-rank search.
pub const EXHAUSTIVE_BUDGET: u64 = 1_000_000;
/// Random trials per `l * dim` in the maximal-rank search.
pub const TRIALS_PER_CELL: usize = 16;

/// Block sizes of the canonical pattern; `l = 2p + q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PatternSpec {
    pub p: usize,
    pub q: usize,
    pub u: usize,
    pub v: usize,
}

impl PatternSpec {
    pub fn l(&self) -> usize {
        2 * self.p + self.q
    }

    pub fn validate<F: Field>(&self) -> Result<(), Error<F>> {
        if self.u > self.p || self.v > self.q {
            return Err(Error::Precondition(format!(
                "pattern needs u <= p and v <= q, got p={} q={} u={} v={}",
                self.p, self.q, self.u, self.v
            )));
        }
        Ok(())
    }

    /// Whether `m` (already in canonical coordinates) fits the pattern.
    pub fn matches<F: Field>(&self, m: &Mat<F>) -> bool {
        let PatternSpec { p, q, u, v } = *self;
        if m.shape() != (self.l(), self.l()) {
            return false;
        }
        let f = m.field();
        // block index and offset of each coordinate
        let locate = |x: usize| if x < p { (0, x) } else if x < 2 * p { (1, x - p) } else { (2, x - 2 * p) };
        (0..m.rows()).all(|i| {
            (0..m.cols()).all(|j| {
                let allowed = match (locate(i), locate(j)) {
                    ((0, _), (1, _)) => true,
                    ((0, a), (2, b)) => a < u && b < v,
                    ((2, a), (1, b)) => a >= v && b >= u,
                    _ => false,
                };
                allowed || f.is_zero(m.get(i, j))
            })
        }) && q == self.l() - 2 * p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrivialMultForm<F: Field> {
    pub s0: Mat<F>,
    pub spec: PatternSpec,
}

impl<F: Field> TrivialMultForm<F> {
    /// Whether `S0⁻¹ Z S0` fits the pattern for every `Z` in `basis`.
    pub fn check_pattern(&self, basis: &[Mat<F>]) -> bool {
        let Ok(inv) = self.s0.inverse() else { return false };
        basis.iter().all(|z| self.spec.matches(&(&(&inv * z) * &self.s0)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.s0.field().desc().to_string(),
            "l": self.s0.rows(),
            "S0": mat_to_json(&self.s0),
            "p": self.spec.p,
            "q": self.spec.q,
            "u": self.spec.u,
            "v": self.spec.v,
            "verified": true,
        })
    }
}

pub fn subspace_to_json<F: Field>(field: &F, l: usize, basis: &[Mat<F>]) -> Value {
    json!({
        "field": field.desc().to_string(),
        "l": l,
        "basis": basis.iter().map(mat_to_json).collect::<Vec<_>>(),
    })
}

pub fn subspace_from_json<F: Field>(field: &F, v: &Value) -> Result<(usize, Vec<Mat<F>>), LinalgError> {
    let declared = field_from_json(v)?;
    if declared != field.desc() {
        return Err(LinalgError::FieldMismatch(field.desc(), declared));
    }
    let l = usize_field(v, "l")?;
    let basis = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| LinalgError::Parse("subspace needs a \"basis\" array".into()))?
        .iter()
        .map(|m| mat_from_json(field, m))
        .collect::<Result<Vec<_>, _>>()?;
    if basis.iter().any(|m| m.shape() != (l, l)) {
        return Err(LinalgError::Shape(format!("basis elements must be {l}x{l}")));
    }
    Ok((l, basis))
}

/// `B_i B_j = 0` for all ordered pairs, `i = j` included.
pub fn check_pairwise_zero<F: Field>(basis: &[Mat<F>]) -> Verdict<F> {
    let d = basis.len();
    Verdict::exact(par::find_map_first(d * d, |idx| {
        let (i, j) = (idx / d, idx % d);
        let product = &basis[i] * &basis[j];
        (!product.is_zero()).then_some(Witness::BasisProduct { indices: [i, j], product })
    }))
}

fn combine<F: Field>(field: &F, l: usize, basis: &[Mat<F>], coeffs: &[F::Elem]) -> Mat<F> {
    basis
        .iter()
        .zip(coeffs)
        .fold(Mat::zeros(field.clone(), l, l), |acc, (z, c)| &acc + &z.scale(c))
}

/// Element of maximal rank in the span: exhaustive over projective
/// coefficient vectors when within budget, otherwise the best of
/// `16 · l · dim` random combinations. Ties go to the largest
/// [`kernel_spread`], then to the first candidate.
pub fn max_rank_element<F: Field>(field: &F, l: usize, basis: &[Mat<F>], seed: u64) -> Mat<F> {
    let d = basis.len();
    let exhaustive = field
        .order()
        .and_then(|p| u32::try_from(d).ok().and_then(|d| p.checked_pow(d)))
        .filter(|&count| count <= EXHAUSTIVE_BUDGET);
    let coeffs_at = |idx: usize| -> Option<Vec<F::Elem>> {
        match (exhaustive, field.order()) {
            (Some(_), Some(p)) => {
                let mut rest = idx as u64;
                let digits: Vec<u64> = (0..d)
                    .map(|_| {
                        let digit = rest % p;
                        rest /= p;
                        digit
                    })
                    .collect();
                // projective representatives: first nonzero coefficient is 1
                (digits.iter().find(|&&c| c != 0) == Some(&1))
                    .then(|| digits.iter().map(|&c| field.nth_element(c)).collect())
            }
            _ => {
                let mut rng = seeded(derive_seed(seed, idx as u64));
                Some((0..d).map(|_| field.sample_wide(&mut rng)).collect())
            }
        }
    };
    let count = exhaustive.map_or(TRIALS_PER_CELL * l * d, |c| c as usize);
    let ranks = par::map_collect(count, |idx| coeffs_at(idx).map(|c| combine(field, l, basis, &c).rank()));
    let Some(top) = ranks.iter().flatten().copied().max() else {
        return Mat::zeros(field.clone(), l, l);
    };
    let ties: Vec<usize> = (0..count).filter(|&i| ranks[i] == Some(top)).collect();
    let spreads = par::map_collect(ties.len(), |t| {
        let coeffs = coeffs_at(ties[t]).unwrap_or_default();
        kernel_spread(basis, &combine(field, l, basis, &coeffs))
    });
    let mut best = 0;
    for (t, spread) in spreads.iter().enumerate() {
        if *spread > spreads[best] {
            best = t;
        }
    }
    combine(field, l, basis, &coeffs_at(ties[best]).unwrap_or_default())
}

/// `dim Σ_i B_i(ker Y)`: the `u` that `Y` would produce. Generic maximal-rank
/// elements attain the largest value; special ones can fall short.
pub fn kernel_spread<F: Field>(basis: &[Mat<F>], y: &Mat<F>) -> usize {
    let kernel = y.kernel_matrix();
    let images: Vec<Mat<F>> = basis.iter().map(|z| z * &kernel).collect();
    let refs: Vec<&Mat<F>> = images.iter().collect();
    Mat::hstack(y.field().clone(), y.rows(), &refs).rank()
}

/// `S0 = [Yw | w | K']` bringing a square-zero `Y` to `[[0, I_p, 0], 0, 0]`.
fn square_zero_basis<F: Field>(y: &Mat<F>) -> Result<(Mat<F>, usize), Error<F>> {
    let field = y.field().clone();
    let l = y.rows();
    let pivots = y.pivot_columns();
    let p = pivots.len();
    let w = Mat::identity(field.clone(), l).select_columns(&pivots);
    let yw = y * &w;
    let kernel = y.kernel_matrix();
    let span = Mat::hstack(field.clone(), l, &[&yw, &kernel]);
    let cols = span.pivot_columns();
    if cols.len() != l - p || cols.iter().take(p).copied().ne(0..p) {
        return Err(Error::Internal("maximal-rank element is not square-zero".into()));
    }
    let rest = span.select_columns(&cols[p..]);
    let s0 = Mat::hstack(field, l, &[&yw, &w, &rest]);
    Ok((s0, p))
}

/// Tries `γY + βZ_i + Z_j` (and `γY + Z_j`) for small scalars and returns
/// the first combination of larger rank than `y`.
fn improve<F: Field>(field: &F, y: &Mat<F>, basis: &[Mat<F>]) -> Option<Mat<F>> {
    let target = y.rank();
    let scalars: Vec<F::Elem> = (0..(y.rows() as u64 + 3))
        .take_while(|&i| field.order().is_none_or(|o| i < o))
        .map(|i| field.nth_element(i))
        .collect();
    let d = basis.len();
    let mut combos: Vec<(usize, Option<usize>)> = (0..d).map(|j| (j, None)).collect();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                combos.push((j, Some(i)));
            }
        }
    }
    let per = scalars.len() * scalars.len();
    par::find_map_first(combos.len() * per, |idx| {
        let (j, extra) = combos[idx / per];
        let gamma = &scalars[(idx % per) / scalars.len()];
        let beta = &scalars[idx % scalars.len()];
        if extra.is_none() && idx % scalars.len() != 0 {
            return None;
        }
        let mut m = &y.scale(gamma) + &basis[j];
        if let Some(i) = extra {
            m = &m + &basis[i].scale(beta);
        }
        (m.rank() > target).then_some(m)
    })
}

/// Canonicalises a trivial-multiplication subspace given by a spanning list.
pub fn canonicalize_trivial_mult<F: Field>(basis: &[Mat<F>], field: &F, l: usize, seed: u64) -> Result<TrivialMultForm<F>, Error<F>> {
    if basis.iter().any(|m| m.shape() != (l, l)) {
        return Err(Error::Precondition(format!("basis elements must be {l}x{l}")));
    }
    let verdict = check_pairwise_zero(basis);
    if !verdict.holds {
        return Err(Error::not_preserver(crate::verify::Property::PairwiseZero, verdict));
    }
    if let Some(order) = field.order() {
        if 2 * order <= l as u64 + 2 {
            return Err(Error::FieldTooSmall(format!(
                "need more than {} elements for l = {l}, field has {order}",
                (l as f64 + 2.0) / 2.0
            )));
        }
    }
    let degenerate = || TrivialMultForm {
        s0: Mat::identity(field.clone(), l),
        spec: PatternSpec { p: 0, q: l, u: 0, v: 0 },
    };
    if basis.iter().all(Mat::is_zero) {
        return Ok(degenerate());
    }

    let mut y = max_rank_element(field, l, basis, seed);
    loop {
        // (2) Y -> [[0, I_p, 0], 0, 0]
        let (s0, p) = square_zero_basis(&y)?;
        let q = l - 2 * p;
        let inv = s0.inverse()?;
        let conj: Vec<Mat<F>> = basis.iter().map(|z| &(&inv * z) * &s0).collect();

        // (3) only Z12, Z13, Z32 may be nonzero; a nonzero Z33 means Y was not maximal
        let coarse = PatternSpec { p, q, u: p, v: 0 };
        let shape_ok = conj.iter().all(|m| {
            let z33 = m.block(2 * p, 2 * p, q, q);
            z33.is_zero() && {
                let mut cleared = m.clone();
                cleared.set_block(2 * p, p, &Mat::zeros(field.clone(), q, p));
                cleared.set_block(0, 2 * p, &Mat::zeros(field.clone(), p, q));
                coarse.matches(&cleared)
            }
        });

        if shape_ok {
            // (4) column and row spaces of the Z13 blocks
            let z13: Vec<Mat<F>> = conj.iter().map(|m| m.block(0, 2 * p, p, q)).collect();
            let refs: Vec<&Mat<F>> = z13.iter().collect();
            let cols = Mat::hstack(field.clone(), p, &refs).column_basis();
            let rows = Mat::vstack(field.clone(), q, &refs).transpose().column_basis();
            let (u, v) = (cols.cols(), rows.cols());
            let pm = cols.extend_to_basis()?;
            let qm = rows.extend_to_basis()?.transpose();
            let t = Mat::block_diag(field.clone(), &[&pm, &pm, &qm.inverse()?]);
            let form = TrivialMultForm { s0: &s0 * &t, spec: PatternSpec { p, q, u, v } };
            // (5) the Z32 blocks must land in the complementary corner
            if form.check_pattern(basis) {
                return Ok(form);
            }
        }
        y = improve(field, &y, basis).ok_or_else(|| {
            Error::Inconclusive(format!(
                "rank-{} element does not yield the block pattern and no higher-rank combination was found",
                y.rank()
            ))
        })?;
    }
}

/// `dim` random elements of the pattern `spec` (pairwise products vanish).
/// The `Z12` blocks have a zero lower-left `(p-u) x u` corner, which keeps
/// the maximal rank in the span at `p`.
pub fn generate_pattern_subspace<F: Field>(
    field: &F,
    spec: PatternSpec,
    dim: usize,
    seed: u64,
) -> Result<Vec<Mat<F>>, Error<F>> {
    spec.validate()?;
    if dim == 0 {
        return Err(Error::Precondition("dim must be at least 1".into()));
    }
    let mut rng = seeded(seed);
    Ok((0..dim).map(|_| pattern_element(field, spec, &mut rng)).collect())
}

fn pattern_element<F: Field, R: Rng + ?Sized>(field: &F, spec: PatternSpec, rng: &mut R) -> Mat<F> {
    let PatternSpec { p, q, u, v } = spec;
    let l = spec.l();
    let mut m = Mat::zeros(field.clone(), l, l);
    let mut z12 = random_mat(field, p, p, rng);
    z12.set_block(u, 0, &Mat::zeros(field.clone(), p - u, u));
    m.set_block(0, p, &z12);
    m.set_block(0, 2 * p, &random_mat(field, u, v, rng));
    m.set_block(2 * p + v, p + u, &random_mat(field, q - v, p - u, rng));
    m
}

/// Smallest `dim` for which [`generate_full_support_subspace`] can succeed.
pub fn min_full_support_dim(spec: PatternSpec) -> usize {
    let PatternSpec { p, q, u, v } = spec;
    let ratio = |a: usize, b: usize| if a * b == 0 { 1 } else { a.max(b).div_ceil(a.min(b)) };
    [ratio(u, v), 1 + u.div_ceil(v.max(1)), (u + v).div_ceil(u.max(1)), ratio(q - v, p - u), (p + v).div_ceil(p.max(1))]
        .into_iter()
        .max()
        .unwrap_or(1)
}

/// Like [`generate_pattern_subspace`], resampling until the `Z13` corners
/// jointly have full column and row support (`u` and `v`), the `Z32`
/// corners have full support as well, and the span contains an element of
/// rank `p`, with a generic rank-`p` element giving [`kernel_spread`] `u`.
/// Requires `u = 0` exactly when `v = 0`. These are the conditions under which the canonical parameters
/// are recovered exactly.
pub fn generate_full_support_subspace<F: Field>(
    field: &F,
    spec: PatternSpec,
    dim: usize,
    seed: u64,
) -> Result<Vec<Mat<F>>, Error<F>> {
    spec.validate()?;
    let PatternSpec { p, q, u, v } = spec;
    if (u == 0) != (v == 0) {
        return Err(Error::Precondition("an empty Z13 corner needs u = v = 0".into()));
    }
    let need = min_full_support_dim(spec);
    if dim < need {
        return Err(Error::Precondition(format!("dim {dim} too small for full-support corners, need {need}")));
    }
    for attempt in 0..1000u64 {
        let basis = generate_pattern_subspace(field, spec, dim, derive_seed(seed, attempt))?;
        let corner13: Vec<Mat<F>> = basis.iter().map(|m| m.block(0, 2 * p, u, v)).collect();
        let corner32: Vec<Mat<F>> = basis.iter().map(|m| m.block(2 * p + v, p + u, q - v, p - u)).collect();
        let full = |blocks: &[Mat<F>], rows: usize, cols: usize| {
            if rows * cols == 0 {
                return true;
            }
            let refs: Vec<&Mat<F>> = blocks.iter().collect();
            Mat::hstack(field.clone(), rows, &refs).rank() == rows
                && Mat::vstack(field.clone(), cols, &refs).rank() == cols
        };
        let rank_p = basis.iter().any(|m| m.rank() == p);
        let mut rng = seeded(derive_seed(seed, u64::MAX - attempt));
        let generic: Vec<F::Elem> = (0..dim).map(|_| field.sample_wide(&mut rng)).collect();
        let y = combine(field, spec.l(), &basis, &generic);
        let spread = y.rank() == p && kernel_spread(&basis, &y) == u;
        // the common kernel has dimension p + q - v in any canonical basis
        let refs: Vec<&Mat<F>> = basis.iter().collect();
        let kernel = p + q - v == spec.l() - Mat::vstack(field.clone(), spec.l(), &refs).rank();
        if full(&corner13, u, v) && full(&corner32, q - v, p - u) && rank_p && spread && kernel {
            return Ok(basis);
        }
    }
    Err(Error::Inconclusive("could not draw full-support corners".into()))
}

/// `Φ(αE)² = 0` for rank-one idempotents `E` (enumerated or sampled) and
/// random scalars `α`. For zero-product preservers this matches trivial
/// multiplication of the range.
pub fn rank_one_squares_vanish<F: Field>(phi: &LinMap<F>, samples: usize, seed: u64) -> bool {
    let field = phi.field();
    let n = phi.n();
    let mut probes = crate::verify::idempotent_probes(field, n, seed);
    let mut rng = seeded(seed);
    for _ in 0..samples {
        probes.push(sample_rank_one_idempotent(field, n, &mut rng));
    }
    let alphas: Vec<F::Elem> = (0..probes.len()).map(|_| field.sample_nonzero(&mut rng)).collect();
    par::find_map_first(probes.len(), |t| {
        let img = phi.apply(&probes[t].scale(&alphas[t])).ok()?;
        (!(&img * &img).is_zero()).then_some(())
    })
    .is_none()
}
