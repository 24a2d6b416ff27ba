//! Exact scalar fields: the prime fields GF(p) and the rationals.
//!
//! Matrices are generic over [`Field`], a small runtime context that knows
//! how to do arithmetic on its element type. `PrimeField` stores residues as
//! `u64` in `[0, p)`; `Rationals` stores reduced `BigRational`s.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;

use super::LinalgError;

/// Runtime description of a supported field, as written in JSON documents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Prime(u64),
    Rationals,
}

impl FieldDesc {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDesc::Prime(p) => *p,
            FieldDesc::Rationals => 0,
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Prime(p) => write!(f, "GF({p})"),
            FieldDesc::Rationals => f.write_str("Q"),
        }
    }
}

impl FromStr for FieldDesc {
    type Err = LinalgError;

    /// Accepts `"Q"`, `"QQ"`, `"rationals"`, `"GF(p)"`, `"F_p"` and a bare prime `"p"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if matches!(t, "Q" | "QQ" | "rationals" | "Rationals") {
            return Ok(FieldDesc::Rationals);
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("F_"))
            .unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| LinalgError::Parse(format!("unrecognised field {s:?}")))?;
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(FieldDesc::Prime(p))
    }
}

impl serde::Serialize for FieldDesc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for FieldDesc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Arithmetic context for an exact field.
///
/// Every method takes `&self` because GF(p) needs its modulus at runtime.
/// Elements handed to these methods must already be canonical for this field.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn desc(&self) -> FieldDesc;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// 0 for the rationals.
    fn characteristic(&self) -> u64 {
        self.desc().characteristic()
    }

    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;

    /// The `index`-th element in a fixed enumeration of a finite field.
    /// Only meaningful for `index < order()`.
    fn nth_element(&self, index: u64) -> Self::Elem;

    /// Entry distribution used by the random generators: uniform over GF(p),
    /// small integers in `[-4, 4]` over the rationals.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Coefficient distribution for Schwartz–Zippel style searches: uniform
    /// over GF(p), integers in `[-2^16, 2^16]` over the rationals.
    fn sample_wide<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Size of the support of [`Field::sample_wide`].
    fn wide_support(&self) -> f64;

    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.sample(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// Reduces a row-major `rows x cols` matrix to reduced row echelon form
    /// in place and returns the pivot columns.
    fn reduce_rows(&self, data: &mut [Self::Elem], rows: usize, cols: usize) -> Vec<usize> {
        gauss_jordan(self, data, rows, cols)
    }

    /// Row-major product of an `n x m` and an `m x p` matrix.
    fn mul_matrices(&self, a: &[Self::Elem], b: &[Self::Elem], n: usize, m: usize, p: usize) -> Vec<Self::Elem> {
        let mut out = vec![self.zero(); n * p];
        for i in 0..n {
            for k in 0..m {
                let x = &a[i * m + k];
                if self.is_zero(x) {
                    continue;
                }
                for (o, y) in out[i * p..(i + 1) * p].iter_mut().zip(&b[k * p..(k + 1) * p]) {
                    if !self.is_zero(y) {
                        *o = self.add(o, &self.mul(x, y));
                    }
                }
            }
        }
        out
    }

    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem, LinalgError>;
    fn fmt_elem(&self, a: &Self::Elem) -> String;
}

/// Plain Gauss–Jordan elimination; the default row reduction.
pub(crate) fn gauss_jordan<F: Field>(
    field: &F,
    data: &mut [F::Elem],
    rows: usize,
    cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(sel) = (row..rows).find(|&i| !field.is_zero(&data[i * cols + col])) else {
            continue;
        };
        if sel != row {
            for j in 0..cols {
                data.swap(sel * cols + j, row * cols + j);
            }
        }
        let inv = field.inv(&data[row * cols + col]).expect("nonzero pivot");
        for j in col..cols {
            data[row * cols + j] = field.mul(&data[row * cols + j], &inv);
        }
        for i in 0..rows {
            if i == row || field.is_zero(&data[i * cols + col]) {
                continue;
            }
            let factor = data[i * cols + col].clone();
            for j in col..cols {
                let t = field.mul(&factor, &data[row * cols + j]);
                data[i * cols + j] = field.sub(&data[i * cols + j], &t);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// GF(p) for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn desc(&self) -> FieldDesc {
        FieldDesc::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        // Fermat: a^(p-2)
        (*a != 0).then(|| pow_mod(*a, self.p - 2, self.p))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn order(&self) -> Option<u64> {
        Some(self.p)
    }
    fn nth_element(&self, index: u64) -> u64 {
        index % self.p
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }
    fn sample_wide<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }
    fn wide_support(&self) -> f64 {
        self.p as f64
    }
    fn elem_to_json(&self, a: &u64) -> Value {
        Value::from(*a)
    }
    fn elem_from_json(&self, v: &Value) -> Result<u64, LinalgError> {
        match v {
            Value::Number(n) => {
                if let Some(u) = n.as_u64() {
                    if u < self.p {
                        return Ok(u);
                    }
                    return Err(LinalgError::Parse(format!(
                        "entry {u} is not a residue in [0, {})",
                        self.p
                    )));
                }
                Err(LinalgError::Parse(format!(
                    "entry {n} is not a residue in [0, {})",
                    self.p
                )))
            }
            other => Err(LinalgError::Parse(format!(
                "expected an integer entry for GF({}), found {other}",
                self.p
            ))),
        }
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

const SMALL_RANGE: i64 = 4;
const WIDE_RANGE: i64 = 1 << 16;

impl Field for Rationals {
    type Elem = BigRational;

    fn desc(&self) -> FieldDesc {
        FieldDesc::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn nth_element(&self, index: u64) -> BigRational {
        // 0, 1, -1, 2, -2, ...
        let k = index.div_ceil(2) as i64;
        self.from_i64(if index % 2 == 1 { k } else { -k })
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.random_range(-SMALL_RANGE..=SMALL_RANGE))
    }
    fn sample_wide<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.random_range(-WIDE_RANGE..=WIDE_RANGE))
    }
    fn wide_support(&self) -> f64 {
        (2 * WIDE_RANGE + 1) as f64
    }

    fn reduce_rows(&self, data: &mut [BigRational], rows: usize, cols: usize) -> Vec<usize> {
        bareiss_rref(data, rows, cols)
    }

    /// Clears denominators row-wise in `a` and column-wise in `b`, multiplies
    /// over the integers and reduces each entry once.
    fn mul_matrices(&self, a: &[BigRational], b: &[BigRational], n: usize, m: usize, p: usize) -> Vec<BigRational> {
        let lcm_of = |it: &mut dyn Iterator<Item = &BigRational>| it.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let row_den: Vec<BigInt> = (0..n).map(|i| lcm_of(&mut a[i * m..(i + 1) * m].iter())).collect();
        let col_den: Vec<BigInt> = (0..p).map(|j| lcm_of(&mut (0..m).map(|k| &b[k * p + j]))).collect();
        let scaled = |x: &BigRational, d: &BigInt| x.numer() * (d / x.denom());
        let ai: Vec<BigInt> = (0..n * m).map(|idx| scaled(&a[idx], &row_den[idx / m])).collect();
        let bi: Vec<BigInt> = (0..m * p).map(|idx| scaled(&b[idx], &col_den[idx % p])).collect();
        let mut out = vec![BigInt::zero(); n * p];
        for i in 0..n {
            for k in 0..m {
                let x = &ai[i * m + k];
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out[i * p..(i + 1) * p].iter_mut().zip(&bi[k * p..(k + 1) * p]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(idx, num)| {
                if num.is_zero() {
                    BigRational::zero()
                } else {
                    BigRational::new(num, &row_den[idx / p] * &col_den[idx % p])
                }
            })
            .collect()
    }

    fn elem_to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            if let Some(v) = a.numer().to_i64() {
                return Value::from(v);
            }
        }
        Value::from(a.to_string())
    }

    fn elem_from_json(&self, v: &Value) -> Result<BigRational, LinalgError> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|i| self.from_i64(i))
                .or_else(|| n.as_u64().map(|u| BigRational::from_integer(BigInt::from(u))))
                .ok_or_else(|| LinalgError::Parse(format!("non-integer JSON number {n}; write fractions as \"num/den\""))),
            Value::String(s) => parse_rational(s),
            other => Err(LinalgError::Parse(format!("expected a rational entry, found {other}"))),
        }
    }

    fn fmt_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, LinalgError> {
    let bad = || LinalgError::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(LinalgError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// Fraction-free Gauss–Jordan elimination over the integers.
///
/// Rows are first scaled to integers. Every update
/// `a_ij <- (p * a_ij - a_ic * a_kj) / p_prev` is an exact division (entries
/// stay minors of the scaled input), so intermediate coefficients grow
/// linearly in the bit size instead of exponentially. Pivot rows are divided
/// by their pivots at the end.
fn bareiss_rref(data: &mut [BigRational], rows: usize, cols: usize) -> Vec<usize> {
    let mut m: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = &data[i * cols..(i + 1) * cols];
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        m.extend(row.iter().map(|x| x.numer() * (&lcm / x.denom())));
    }

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(sel) = (row..rows).find(|&i| !m[i * cols + col].is_zero()) else {
            continue;
        };
        if sel != row {
            for j in 0..cols {
                m.swap(sel * cols + j, row * cols + j);
            }
        }
        let pivot = m[row * cols + col].clone();
        for i in 0..rows {
            if i == row {
                continue;
            }
            let factor = m[i * cols + col].clone();
            for j in 0..cols {
                let v = &pivot * &m[i * cols + j] - &factor * &m[row * cols + j];
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero(), "inexact fraction-free division");
                m[i * cols + j] = q;
            }
        }
        prev = pivot;
        pivots.push(col);
        row += 1;
    }

    for i in 0..rows {
        let lead = pivots
            .get(i)
            .map(|&c| m[i * cols + c].clone())
            .unwrap_or_else(BigInt::one);
        for j in 0..cols {
            let v = std::mem::take(&mut m[i * cols + j]);
            data[i * cols + j] = BigRational::new(v, lead.clone());
        }
    }
    pivots
}
