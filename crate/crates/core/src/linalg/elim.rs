//! Rank, kernels and inverses by exact elimination.
//!
//! All of these go through [`Field::reduce_rows`], which is plain
//! Gauss–Jordan over GF(p) and fraction-free elimination over the rationals.

use super::field::Field;
use super::mat::Mat;
use super::LinalgError;

impl<F: Field> Mat<F> {
    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut r = self.clone();
        let (rows, cols) = r.shape();
        let field = r.field().clone();
        let pivots = field.reduce_rows(r.data_mut(), rows, cols);
        (r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Indices of the first linearly independent columns, in natural order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// The first linearly independent columns of `self`, as a matrix.
    pub fn column_basis(&self) -> Mat<F> {
        self.select_columns(&self.pivot_columns())
    }

    /// Basis of the right null space as column vectors; empty iff the
    /// columns are independent.
    pub fn kernel_basis(&self) -> Vec<Mat<F>> {
        let (r, pivots) = self.rref();
        let cols = self.cols();
        let field = self.field();
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = Mat::zeros(field.clone(), cols, 1);
                v.set(free, 0, field.one());
                for (row, &pc) in pivots.iter().enumerate() {
                    v.set(pc, 0, field.neg(r.get(row, free)));
                }
                v
            })
            .collect()
    }

    /// Kernel basis packed as the columns of one matrix (`cols x nullity`).
    pub fn kernel_matrix(&self) -> Mat<F> {
        let basis = self.kernel_basis();
        let refs: Vec<&Mat<F>> = basis.iter().collect();
        Mat::hstack(self.field().clone(), self.cols(), &refs)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    pub fn inverse(&self) -> Result<Mat<F>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Shape(format!(
                "inverse of a {}x{} matrix",
                self.rows(),
                self.cols()
            )));
        }
        let n = self.rows();
        let field = self.field().clone();
        let aug = Mat::hstack(field.clone(), n, &[self, &Mat::identity(field, n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.get(n.wrapping_sub(1)).is_some_and(|&p| p != n - 1) {
            return Err(LinalgError::Singular);
        }
        Ok(r.block(0, n, n, n))
    }

    /// An invertible square matrix whose leading columns are the (independent)
    /// columns of `self`, completed with standard basis vectors in order.
    pub fn extend_to_basis(&self) -> Result<Mat<F>, LinalgError> {
        let n = self.rows();
        let field = self.field().clone();
        let aug = Mat::hstack(field.clone(), n, &[self, &Mat::identity(field, n)]);
        let pivots = aug.pivot_columns();
        if pivots.iter().take(self.cols()).copied().ne(0..self.cols()) {
            return Err(LinalgError::Singular);
        }
        Ok(aug.select_columns(&pivots))
    }
}
