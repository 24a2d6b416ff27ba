use super::field::Field;
use super::mat::Mat;
use super::LinalgError;

impl<F: Field> Mat<F> {
    /// Kronecker product: the `(i, j)` block of the result is `a_ij * other`.
    pub fn kron(&self, other: &Mat<F>) -> Mat<F> {
        self.try_kron(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_kron(&self, other: &Mat<F>) -> Result<Mat<F>, LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch(self.field().desc(), other.field().desc()));
        }
        let f = self.field();
        let (p, q) = other.shape();
        Ok(Mat::from_fn(f.clone(), self.rows() * p, self.cols() * q, |i, j| {
            f.mul(self.get(i / p, j / q), other.get(i % p, j % q))
        }))
    }
}

/// The permutation `Π` of size `nk` with `Πᵗ (A ⊗ B) Π = B ⊗ A` for every
/// `A` in `M_n` and `B` in `M_k`.
///
/// Coordinate `a·k + b` of `A ⊗ B` is sent to coordinate `b·n + a` of `B ⊗ A`.
pub fn perfect_shuffle<F: Field>(field: F, n: usize, k: usize) -> Mat<F> {
    let mut pi = Mat::zeros(field.clone(), n * k, n * k);
    for a in 0..n {
        for b in 0..k {
            pi.set(a * k + b, b * n + a, field.one());
        }
    }
    pi
}
