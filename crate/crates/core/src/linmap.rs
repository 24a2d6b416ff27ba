//! Linear maps `M_n(F) -> M_r(F)` stored as the `n²` images of the matrix
//! units `E_ij`.
//!
//! Indices are 0-based in the Rust API. JSON documents use 1-based `"i,j"`
//! keys to match the usual `E_ij` notation.

use serde_json::{Map, Value};

use crate::linalg::json::{field_from_json, mat_from_json, mat_to_json, usize_field};
use crate::linalg::{Field, LinalgError, Mat};

#[derive(Clone, Debug)]
pub struct LinMap<F: Field> {
    field: F,
    n: usize,
    r: usize,
    images: Vec<Mat<F>>,
}

impl<F: Field> PartialEq for LinMap<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.r == other.r && self.images == other.images
    }
}

impl<F: Field> Eq for LinMap<F> {}

impl<F: Field> LinMap<F> {
    /// Validated constructor; `images[i * n + j]` is the image of `E_ij`.
    pub fn new(field: F, n: usize, r: usize, images: Vec<Mat<F>>) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::Shape("domain size n must be positive".into()));
        }
        if images.len() != n * n {
            return Err(LinalgError::Shape(format!(
                "{} images for n = {n}, expected {}",
                images.len(),
                n * n
            )));
        }
        for m in &images {
            if m.field() != &field {
                return Err(LinalgError::FieldMismatch(field.desc(), m.field().desc()));
            }
            if m.shape() != (r, r) {
                return Err(LinalgError::Shape(format!(
                    "image of shape {}x{}, expected {r}x{r}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(LinMap { field, n, r, images })
    }

    pub fn from_fn(field: F, n: usize, r: usize, mut f: impl FnMut(usize, usize) -> Mat<F>) -> Self {
        let mut images = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                images.push(f(i, j));
            }
        }
        Self::new(field, n, r, images).expect("from_fn produced inconsistent images")
    }

    pub fn identity(field: F, n: usize) -> Self {
        Self::from_fn(field.clone(), n, n, |i, j| Mat::unit(field.clone(), n, i, j))
    }

    pub fn zero(field: F, n: usize, r: usize) -> Self {
        Self::from_fn(field.clone(), n, r, |_, _| Mat::zeros(field.clone(), r, r))
    }

    /// `A ↦ Aᵗ`.
    pub fn transpose_map(field: F, n: usize) -> Self {
        Self::identity(field, n).precompose_transpose()
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn images(&self) -> &[Mat<F>] {
        &self.images
    }

    /// `Φ(E_ij)`.
    pub fn image(&self, i: usize, j: usize) -> &Mat<F> {
        &self.images[i * self.n + j]
    }

    /// `Φ(I_n)`.
    pub fn at_identity(&self) -> Mat<F> {
        (0..self.n).fold(Mat::zeros(self.field.clone(), self.r, self.r), |acc, i| &acc + self.image(i, i))
    }

    /// `Σ a_ij Φ(E_ij)`.
    pub fn apply(&self, a: &Mat<F>) -> Result<Mat<F>, LinalgError> {
        if a.field() != &self.field {
            return Err(LinalgError::FieldMismatch(self.field.desc(), a.field().desc()));
        }
        if a.shape() != (self.n, self.n) {
            return Err(LinalgError::Shape(format!(
                "argument is {}x{}, map domain is M_{}",
                a.rows(),
                a.cols(),
                self.n
            )));
        }
        let mut acc = Mat::zeros(self.field.clone(), self.r, self.r);
        for i in 0..self.n {
            for j in 0..self.n {
                let c = a.get(i, j);
                if self.field.is_zero(c) {
                    continue;
                }
                acc = &acc + &self.image(i, j).scale(c);
            }
        }
        Ok(acc)
    }

    pub fn map_images(&self, r: usize, f: impl FnMut(&Mat<F>) -> Mat<F>) -> Self {
        let images = self.images.iter().map(f).collect();
        Self::new(self.field.clone(), self.n, r, images).expect("image transform changed shapes inconsistently")
    }

    /// `A ↦ S⁻¹ Φ(A) S`.
    pub fn conjugate(&self, s: &Mat<F>) -> Result<Self, LinalgError> {
        if s.shape() != (self.r, self.r) {
            return Err(LinalgError::Shape(format!("conjugator must be {0}x{0}", self.r)));
        }
        let inv = s.inverse()?;
        Ok(self.map_images(self.r, |m| &(&inv * m) * s))
    }

    /// `A ↦ S Φ(A) S⁻¹` with both factors supplied.
    pub(crate) fn similarity(&self, s: &Mat<F>, s_inv: &Mat<F>) -> Self {
        self.map_images(s.rows(), |m| &(s * m) * s_inv)
    }

    /// `A ↦ Φ(Aᵗ)`.
    pub fn precompose_transpose(&self) -> Self {
        let n = self.n;
        let images = (0..n * n).map(|idx| self.images[(idx % n) * n + idx / n].clone()).collect();
        LinMap { field: self.field.clone(), n, r: self.r, images }
    }

    /// `A ↦ Φ(A) ⊕ Ψ(A)`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field.desc(), other.field.desc()));
        }
        if self.n != other.n {
            return Err(LinalgError::Shape(format!("direct sum of maps on M_{} and M_{}", self.n, other.n)));
        }
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a.direct_sum(b)).collect();
        Self::new(self.field.clone(), self.n, self.r + other.r, images)
    }

    /// `A ↦ Φ(A) + Ψ(A)`.
    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.n != other.n || self.r != other.r {
            return Err(LinalgError::Shape("sum of maps with different shapes".into()));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_, _>>()?;
        Self::new(self.field.clone(), self.n, self.r, images)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.n != other.n || self.r != other.r {
            return Err(LinalgError::Shape("difference of maps with different shapes".into()));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<_, _>>()?;
        Self::new(self.field.clone(), self.n, self.r, images)
    }

    /// Diagonal block `[start, start + size)` of every image.
    pub fn compress(&self, start: usize, size: usize) -> Self {
        self.map_images(size, |m| m.block(start, start, size, size))
    }

    /// First unit `(i, j)` where the two maps differ, if any.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.n != other.n || self.r != other.r || self.field != other.field {
            return Some((0, 0));
        }
        (0..self.n * self.n)
            .find(|&idx| self.images[idx] != other.images[idx])
            .map(|idx| (idx / self.n, idx % self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Mat::is_zero)
    }

    pub fn to_json(&self) -> Value {
        let mut images = Map::new();
        for i in 0..self.n {
            for j in 0..self.n {
                images.insert(format!("{},{}", i + 1, j + 1), mat_to_json(self.image(i, j)));
            }
        }
        let mut doc = Map::new();
        doc.insert("field".into(), Value::from(self.field.desc().to_string()));
        doc.insert("n".into(), Value::from(self.n));
        doc.insert("r".into(), Value::from(self.r));
        doc.insert("images".into(), Value::Object(images));
        Value::Object(doc)
    }

    /// Parses a map document; the document's `"field"` must describe `field`.
    pub fn from_json(field: &F, v: &Value) -> Result<Self, LinalgError> {
        let declared = field_from_json(v)?;
        if declared != field.desc() {
            return Err(LinalgError::FieldMismatch(field.desc(), declared));
        }
        let n = usize_field(v, "n")?;
        let r = usize_field(v, "r")?;
        let images = v
            .get("images")
            .and_then(Value::as_object)
            .ok_or_else(|| LinalgError::Parse("map needs an \"images\" object".into()))?;
        if images.len() != n * n {
            return Err(LinalgError::Shape(format!("{} image keys for n = {n}", images.len())));
        }
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let key = format!("{},{}", i + 1, j + 1);
                let m = images
                    .get(&key)
                    .ok_or_else(|| LinalgError::Parse(format!("missing image key {key:?}")))?;
                out.push(mat_from_json(field, m)?);
            }
        }
        Self::new(field.clone(), n, r, out)
    }
}
