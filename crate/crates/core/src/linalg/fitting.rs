use super::field::Field;
use super::mat::Mat;

/// Similarity splitting `S⁻¹ A S = R ⊕ N` of a square matrix into an
/// invertible core `R` and a nilpotent part `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct FittingDecomposition<F: Field> {
    /// `S`, columns: a basis of `im A^m` followed by a basis of `ker A^m`.
    pub conjugator: Mat<F>,
    /// Size `s` of the invertible block.
    pub core_size: usize,
    pub core: Mat<F>,
    pub nilpotent: Mat<F>,
    /// Least `e` with `N^e = 0`; 0 only when `N` is the empty matrix.
    pub nil_index: usize,
}

impl<F: Field> FittingDecomposition<F> {
    /// `S (R ⊕ N) S⁻¹`.
    pub fn recompose(&self) -> Mat<F> {
        let inv = self.conjugator.inverse().expect("conjugator is invertible");
        &(&self.conjugator * &self.core.direct_sum(&self.nilpotent)) * &inv
    }
}

/// Core–nilpotent decomposition by rank stabilisation of powers.
///
/// With `m` the first exponent where `rank A^m = rank A^(m+1)`, the space
/// splits as `im A^m ⊕ ker A^m`, both `A`-invariant; `A` is invertible on
/// the first summand and nilpotent on the second.
pub fn fitting_decompose<F: Field>(a: &Mat<F>) -> FittingDecomposition<F> {
    assert!(a.is_square(), "fitting decomposition of a non-square matrix");
    let field = a.field().clone();
    let r = a.rows();

    let mut power = Mat::identity(field.clone(), r);
    let mut rank = r;
    loop {
        let next = &power * a;
        let next_rank = next.rank();
        if next_rank == rank {
            break;
        }
        power = next;
        rank = next_rank;
    }

    let image = power.column_basis();
    let kernel = power.kernel_matrix();
    let s = image.cols();
    debug_assert_eq!(s + kernel.cols(), r);
    let conjugator = Mat::hstack(field.clone(), r, &[&image, &kernel]);
    let inv = conjugator.inverse().expect("image and kernel of A^m are complementary");
    let split = &(&inv * a) * &conjugator;
    debug_assert!(split.is_block_diagonal(&[s, r - s]));

    let core = split.block(0, 0, s, s);
    let nilpotent = split.block(s, s, r - s, r - s);
    let mut nil_index = 0;
    let mut acc = Mat::identity(field, r - s);
    while !acc.is_zero() {
        acc = &acc * &nilpotent;
        nil_index += 1;
    }

    FittingDecomposition { conjugator, core_size: s, core, nilpotent, nil_index }
}
