use super::RngStream;
use crate::error::{Error, Result};
use crate::operators::{laplacian_2d, Ilut, SparseMatrixCsr};
use crate::resqpass::BvlsProblem;

/// How the sparse random matrix is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomLsMode {
    /// Standard normal values at positions kept with probability `density`.
    Ex24,
    /// Dense standard normal draws with every value outside `(0, 0.1]`
    /// zeroed, which leaves about 3.98% of the entries. `density` is unused.
    S41,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub problem: BvlsProblem<SparseMatrixCsr>,
    /// Vector used to build the right-hand side, `b = A·x_true`.
    pub x_true: Vec<f64>,
}

fn check_density(density: f64) -> Result<()> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!("density must lie in (0, 1], got {density}")));
    }
    Ok(())
}

fn sparse_pattern(
    m: usize,
    n: usize,
    density: f64,
    rng: &mut RngStream,
    mut value: impl FnMut(&mut RngStream) -> f64,
) -> Result<SparseMatrixCsr> {
    let mut trip = Vec::new();
    for j in 0..n {
        for i in 0..m {
            if rng.bernoulli(density) {
                trip.push((i, j, value(rng)));
            }
        }
    }
    if trip.is_empty() {
        return Err(Error::InvalidArgument(format!("density {density} leaves a {m}×{n} matrix empty")));
    }
    SparseMatrixCsr::from_triplets(m, n, &trip)
}

/// Unconstrained sparse random least-squares problem with a consistent
/// right-hand side.
pub fn gen_random_ls(m: usize, n: usize, density: f64, mode: RandomLsMode, seed: u64) -> Result<Instance> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!("empty shape {m}×{n}")));
    }
    let mut rng = RngStream::new(seed);
    let a = match mode {
        RandomLsMode::Ex24 => {
            check_density(density)?;
            sparse_pattern(m, n, density, &mut rng, RngStream::normal)?
        }
        RandomLsMode::S41 => {
            let mut trip = Vec::new();
            for j in 0..n {
                for i in 0..m {
                    let v = rng.normal();
                    if v > 0.0 && v <= 0.1 {
                        trip.push((i, j, v));
                    }
                }
            }
            if trip.is_empty() {
                return Err(Error::InvalidArgument(format!("thresholding left a {m}×{n} matrix empty")));
            }
            SparseMatrixCsr::from_triplets(m, n, &trip)?
        }
    };
    let x_true = rng.normals(n);
    let b = a.matvec(&x_true)?;
    Ok(Instance { problem: BvlsProblem::unconstrained(a, b)?, x_true })
}

/// BVLS instance with a tunable number of bounded variables.
///
/// `A` is a 0/1 matrix of the given density; `x_true` has `⌊n/2⌋` zeros and
/// `±1` elsewhere in random order; `b = A·x_true`. The first `i_max`
/// variables get `|xᵢ| ≤ |x_true,ᵢ|/2 + 0.01`, the rest are free.
pub fn gen_tuneable(m: usize, n: usize, density: f64, i_max: usize, seed: u64) -> Result<Instance> {
    if i_max > n {
        return Err(Error::InvalidArgument(format!("i_max = {i_max} exceeds n = {n}")));
    }
    check_density(density)?;
    let mut rng = RngStream::new(seed);
    let a = sparse_pattern(m, n, density, &mut rng, |_| 1.0)?;
    let mut x_true: Vec<f64> = (0..n)
        .map(|i| {
            if i < n / 2 {
                0.0
            } else if rng.bernoulli(0.5) {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    rng.shuffle(&mut x_true);
    let b = a.matvec(&x_true)?;
    let mut lower = vec![f64::NEG_INFINITY; n];
    let mut upper = vec![f64::INFINITY; n];
    for i in 0..i_max {
        let w = 0.5 * x_true[i].abs() + 0.01;
        lower[i] = -w;
        upper[i] = w;
    }
    Ok(Instance { problem: BvlsProblem::new(a, b, lower, upper)?, x_true })
}

/// Membrane contact problem on a `g × g` grid: the scaled 5-point Laplacian,
/// a constant load and the bounds `0 ≤ x ≤ ubound`.
pub fn gen_contact(g: usize, pressure: f64, ubound: f64) -> Result<BvlsProblem<SparseMatrixCsr>> {
    let a = laplacian_2d(g)?;
    let n = g * g;
    BvlsProblem::new(a, vec![pressure; n], vec![0.0; n], vec![ubound; n])
}

/// ILUT of `AᵀA` for a contact instance.
pub fn contact_preconditioner(problem: &BvlsProblem<SparseMatrixCsr>, tau: f64) -> Result<Ilut> {
    Ilut::factor(&problem.a.normal_matrix(), tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_fraction_close_to_density() {
        let inst = gen_random_ls(200, 100, 0.04, RandomLsMode::Ex24, 5).unwrap();
        let fill = inst.problem.a.nnz() as f64 / 20_000.0;
        assert!((fill - 0.04).abs() < 0.004, "fill {fill}");
    }

    #[test]
    fn thresholded_fill() {
        let inst = gen_random_ls(200, 120, 1.0, RandomLsMode::S41, 1).unwrap();
        let fill = inst.problem.a.nnz() as f64 / 24_000.0;
        assert!((fill - 0.0398).abs() < 0.00398, "fill {fill}");
        assert!(inst.problem.a.values().iter().all(|&v| v > 0.0 && v <= 0.1));
    }

    #[test]
    fn rejects_bad_density() {
        assert!(gen_random_ls(10, 10, 0.0, RandomLsMode::Ex24, 0).is_err());
        assert!(gen_random_ls(10, 10, 1.5, RandomLsMode::Ex24, 0).is_err());
        assert!(gen_random_ls(2, 2, 1e-12, RandomLsMode::Ex24, 0).is_err());
    }

    #[test]
    fn tuneable_bounds() {
        let inst = gen_tuneable(100, 60, 0.04, 0, 3).unwrap();
        assert!(inst.problem.lower.iter().all(|l| l.is_infinite()));
        let inst = gen_tuneable(100, 60, 0.04, 20, 3).unwrap();
        let zeros = inst.x_true.iter().filter(|&&v| v == 0.0).count();
        assert_eq!(zeros, 30);
        for i in 0..60 {
            if i < 20 {
                let w = 0.5 * inst.x_true[i].abs() + 0.01;
                assert_eq!((inst.problem.lower[i], inst.problem.upper[i]), (-w, w));
                if inst.x_true[i] != 0.0 {
                    assert!(inst.x_true[i].abs() > w);
                }
            } else {
                assert!(inst.problem.upper[i].is_infinite());
            }
        }
        assert!(inst.problem.a.values().iter().all(|&v| v == 1.0));
        assert!(gen_tuneable(10, 5, 0.5, 6, 0).is_err());
    }

    #[test]
    fn deterministic() {
        let a = gen_tuneable(50, 30, 0.1, 5, 9).unwrap();
        let b = gen_tuneable(50, 30, 0.1, 5, 9).unwrap();
        assert_eq!(a.problem.a, b.problem.a);
        assert_eq!(a.problem.b, b.problem.b);
    }

    #[test]
    fn contact_shape() {
        let p = gen_contact(4, 4.0, 0.1).unwrap();
        assert_eq!(p.a.shape(), (16, 16));
        assert_eq!(p.upper, vec![0.1; 16]);
        assert!(gen_contact(1, 4.0, 0.1).is_err());
    }
}
