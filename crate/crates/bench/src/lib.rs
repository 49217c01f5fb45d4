//! Fixed instances shared by the criterion benchmarks.

use resqpass::experiments::{gen_contact, gen_random_ls, gen_tuneable, RandomLsMode};
use resqpass::{BvlsProblem, SparseMatrixCsr};

pub fn unconstrained(m: usize, n: usize) -> BvlsProblem<SparseMatrixCsr> {
    gen_random_ls(m, n, 0.04, RandomLsMode::Ex24, 0).expect("valid shape").problem
}

pub fn tuneable(i_max: usize) -> BvlsProblem<SparseMatrixCsr> {
    gen_tuneable(500, 300, 0.04, i_max, 0).expect("valid shape").problem
}

pub fn contact(grid: usize) -> BvlsProblem<SparseMatrixCsr> {
    gen_contact(grid, 4.0, 0.1).expect("grid ≥ 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use resqpass::LinearOperator;

    #[test]
    fn shapes() {
        assert_eq!((unconstrained(40, 20).a.nrows(), unconstrained(40, 20).ncols()), (40, 20));
        assert_eq!(tuneable(4).ncols(), 300);
        assert_eq!(contact(5).ncols(), 25);
    }
}
