//! Fractal circulant matrices: construction, exact corank by elimination,
//! corank by the cyclotomic divisibility form of the DFT criterion, and the
//! slicing-vector characterization at prime order.
//!
//! The DFT coefficient `a_hat(u) = sum_v a_v zeta_m^(u.v)` vanishes iff the
//! m-th cyclotomic polynomial divides `P_u(x) = sum_v a_v x^(u.v mod m)`,
//! which keeps the whole module free of floating point.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::poly::special::cyclotomic;
use crate::poly::{RatPoly, RatScalar};

/// Largest supported matrix side (`order^depth`).
pub const MAX_SIDE: usize = 3125;

/// Generator table of a fractal circulant matrix of the given order and
/// depth, indexed by `(Z/mZ)^d` in lexicographic order.
#[derive(Clone, Debug)]
pub struct FractalCirculant {
    order: u32,
    depth: u32,
    gens: Vec<RatScalar>,
}

impl FractalCirculant {
    pub fn new(order: u32, depth: u32, gens: Vec<RatScalar>) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidInput("order must be >= 2".into()));
        }
        if depth < 1 {
            return Err(Error::InvalidInput("depth must be >= 1".into()));
        }
        let side = (order as u64).checked_pow(depth).filter(|&s| s <= MAX_SIDE as u64);
        let side = side.ok_or_else(|| {
            Error::InvalidInput(format!("matrix side exceeds the cap {}", MAX_SIDE))
        })? as usize;
        if gens.len() != side {
            return Err(Error::InvalidInput(format!(
                "generator table has {} entries, expected {}",
                gens.len(),
                side
            )));
        }
        Ok(FractalCirculant { order, depth, gens })
    }

    pub fn from_integers(order: u32, depth: u32, gens: &[i64]) -> Result<Self> {
        Self::new(
            order,
            depth,
            gens.iter()
                .map(|&x| RatScalar::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn side(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[RatScalar] {
        &self.gens
    }

    fn decode(&self, mut idx: usize) -> Vec<u32> {
        let m = self.order as usize;
        let mut digits = vec![0u32; self.depth as usize];
        for slot in (0..self.depth as usize).rev() {
            digits[slot] = (idx % m) as u32;
            idx /= m;
        }
        digits
    }

    fn encode(&self, digits: &[u32]) -> usize {
        let m = self.order as usize;
        digits.iter().fold(0usize, |acc, &d| acc * m + d as usize)
    }

    /// Sum over the whole generator table.
    pub fn total_sum(&self) -> RatScalar {
        self.gens.iter().sum()
    }

    /// The dense matrix with entry `a_(v-u)` at row `u`, column `v`, rows
    /// and columns in lexicographic index order.
    pub fn build_matrix(&self) -> Vec<Vec<RatScalar>> {
        let side = self.side();
        let m = self.order;
        let mut rows = Vec::with_capacity(side);
        for u in 0..side {
            let ud = self.decode(u);
            let mut row = Vec::with_capacity(side);
            for v in 0..side {
                let vd = self.decode(v);
                let diff: Vec<u32> = vd
                    .iter()
                    .zip(&ud)
                    .map(|(&a, &b)| (a + m - b) % m)
                    .collect();
                row.push(self.gens[self.encode(&diff)].clone());
            }
            rows.push(row);
        }
        rows
    }

    /// Corank by fraction-free Gaussian elimination, exact.
    pub fn corank_exact(&self) -> usize {
        let mat = self.build_matrix();
        // Per-row denominator clearing preserves the rank.
        let int_rows: Vec<Vec<BigInt>> = mat
            .iter()
            .map(|row| {
                let mut lcm = BigInt::one();
                for x in row {
                    lcm = num_integer::Integer::lcm(&lcm, x.denom());
                }
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect();
        self.side() - bareiss_rank(int_rows)
    }

    /// Corank as the count of vanishing DFT coefficients, decided exactly by
    /// cyclotomic divisibility.
    pub fn corank_dft(&self) -> usize {
        let side = self.side();
        let m = self.order as usize;
        let phi = cyclotomic(self.order as u64).to_rat();
        let mut count = 0;
        for u in 0..side {
            let ud = self.decode(u);
            let mut folded = vec![RatScalar::zero(); m];
            for v in 0..side {
                let vd = self.decode(v);
                let dot: u32 = ud.iter().zip(&vd).map(|(&a, &b)| a * b).sum::<u32>() % self.order;
                folded[dot as usize] += &self.gens[v];
            }
            let pu = RatPoly::new(folded);
            if pu.is_zero() || pu.div_rem(&phi).1.is_zero() {
                count += 1;
            }
        }
        count
    }

    fn require_prime(&self) -> Result<u32> {
        if is_prime_u64(self.order as u64) {
            Ok(self.order)
        } else {
            Err(Error::InvalidInput(format!(
                "slicing is defined for prime order only, got {}",
                self.order
            )))
        }
    }

    /// All nonzero vectors whose hyperplane sections slice the generator sum
    /// into equal parts (prime order only).
    pub fn slicing_vectors(&self) -> Result<Vec<Vec<u32>>> {
        let p = self.require_prime()?;
        let side = self.side();
        let mut out = Vec::new();
        for u in 1..side {
            let ud = self.decode(u);
            let mut sums = vec![RatScalar::zero(); p as usize];
            for v in 0..side {
                let vd = self.decode(v);
                let dot: u32 = ud.iter().zip(&vd).map(|(&a, &b)| a * b).sum::<u32>() % p;
                sums[dot as usize] += &self.gens[v];
            }
            if sums.windows(2).all(|w| w[0] == w[1]) {
                out.push(ud);
            }
        }
        Ok(out)
    }

    /// Count of projective classes of slicing vectors: each class has exactly
    /// one representative whose first nonzero coordinate is 1.
    pub fn slicing_number(&self) -> Result<usize> {
        let vectors = self.slicing_vectors()?;
        Ok(vectors
            .iter()
            .filter(|u| u.iter().find(|&&x| x != 0) == Some(&1))
            .count())
    }

    /// Corank from the slicing number: `(p-1) s(M)`, plus one when the total
    /// generator sum vanishes.
    pub fn corank_via_slicing(&self) -> Result<usize> {
        let p = self.require_prime()? as usize;
        let s = self.slicing_number()?;
        let w_zero = self.total_sum().is_zero();
        Ok((p - 1) * s + usize::from(w_zero))
    }
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let n_rows = rows.len();
    if n_rows == 0 {
        return 0;
    }
    let n_cols = rows[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..n_cols {
        if row >= n_rows {
            break;
        }
        let pivot = (row..n_rows).find(|&r| !rows[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        rows.swap(row, pivot);
        for r in row + 1..n_rows {
            for c in col + 1..n_cols {
                let num = &rows[r][c] * &rows[row][col] - &rows[r][col] * &rows[row][c];
                let (q, rem) = num_integer::Integer::div_rem(&num, &prev);
                debug_assert!(rem.is_zero());
                rows[r][c] = q;
            }
            rows[r][col] = BigInt::zero();
        }
        prev = rows[row][col].clone();
        row += 1;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// The 9x9 order-3 depth-2 example with generators (4,-1,2,1,2,3,-3,0,5).
    fn example_matrix() -> FractalCirculant {
        FractalCirculant::from_integers(3, 2, &[4, -1, 2, 1, 2, 3, -3, 0, 5]).unwrap()
    }

    fn int_rows(m: &[Vec<RatScalar>]) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        m.iter()
            .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn example_matrix_rows() {
        let rows = int_rows(&example_matrix().build_matrix());
        assert_eq!(rows[0], vec![4, -1, 2, 1, 2, 3, -3, 0, 5]);
        assert_eq!(rows[1], vec![2, 4, -1, 3, 1, 2, 5, -3, 0]);
        assert_eq!(rows[2], vec![-1, 2, 4, 2, 3, 1, 0, 5, -3]);
        assert_eq!(rows[3], vec![-3, 0, 5, 4, -1, 2, 1, 2, 3]);
        assert_eq!(rows[8], vec![2, 3, 1, 0, 5, -3, -1, 2, 4]);
    }

    #[test]
    fn identity_and_constant_generators() {
        // a_0 = 1, rest 0: identity matrix, corank 0.
        let mut gens = vec![0i64; 9];
        gens[0] = 1;
        let fc = FractalCirculant::from_integers(3, 2, &gens).unwrap();
        assert_eq!(fc.corank_exact(), 0);
        assert_eq!(fc.corank_dft(), 0);
        assert_eq!(fc.corank_via_slicing().unwrap(), 0);

        // All-equal nonzero generators: rank-1 matrix.
        let fc = FractalCirculant::from_integers(3, 2, &[7; 9]).unwrap();
        assert_eq!(fc.corank_exact(), 8);
        assert_eq!(fc.corank_dft(), 8);
        assert_eq!(fc.corank_via_slicing().unwrap(), 8);
        assert_eq!(fc.slicing_number().unwrap(), 4); // (3^2-1)/(3-1)

        // Zero table: corank = side.
        let fc = FractalCirculant::from_integers(3, 1, &[0, 0, 0]).unwrap();
        assert_eq!(fc.corank_exact(), 3);
        assert_eq!(fc.corank_dft(), 3);
        assert_eq!(fc.corank_via_slicing().unwrap(), 3);
    }

    #[test]
    fn no_slicing_vector_example() {
        let fc = FractalCirculant::from_integers(3, 1, &[1, 0, 0]).unwrap();
        assert!(fc.slicing_vectors().unwrap().is_empty());
        assert_eq!(fc.slicing_number().unwrap(), 0);
        assert_eq!(fc.corank_exact(), 0);
    }

    #[test]
    fn example_three_way_equality() {
        let fc = example_matrix();
        let exact = fc.corank_exact();
        assert_eq!(exact, fc.corank_dft());
        assert_eq!(exact, fc.corank_via_slicing().unwrap());
    }

    #[test]
    fn composite_order_rejects_slicing() {
        let fc = FractalCirculant::from_integers(4, 1, &[1, 2, 3, 4]).unwrap();
        assert!(fc.slicing_vectors().is_err());
        assert_eq!(fc.corank_exact(), fc.corank_dft());
    }

    #[test]
    fn random_three_way_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..120 {
            let order = *[2u32, 3, 4, 5].get(rng.random_range(0..4)).unwrap();
            let depth = rng.random_range(1..=2u32);
            let side = (order as usize).pow(depth);
            let gens: Vec<i64> = (0..side).map(|_| rng.random_range(-5..=5)).collect();
            let fc = FractalCirculant::from_integers(order, depth, &gens).unwrap();
            let exact = fc.corank_exact();
            assert_eq!(exact, fc.corank_dft(), "dft mismatch for {:?}", gens);
            if is_prime_u64(order as u64) {
                assert_eq!(
                    exact,
                    fc.corank_via_slicing().unwrap(),
                    "slicing mismatch for order {} gens {:?}",
                    order,
                    gens
                );
            }
        }
    }

    #[test]
    fn slicing_matches_dft_vanishing() {
        // Lemma-style property: u slices iff Phi_p | P_u, for every nonzero u.
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..40 {
            let p = *[2u32, 3, 5].get(rng.random_range(0..3)).unwrap();
            let depth = rng.random_range(1..=2u32);
            let side = (p as usize).pow(depth);
            let gens: Vec<i64> = (0..side).map(|_| rng.random_range(-4..=4)).collect();
            let fc = FractalCirculant::from_integers(p, depth, &gens).unwrap();
            let slicing = fc.slicing_vectors().unwrap();
            let w_zero = fc.total_sum().is_zero();
            // corank_dft counts u = 0 exactly when the total sum vanishes.
            assert_eq!(
                fc.corank_dft(),
                slicing.len() + usize::from(w_zero),
                "gens {:?}",
                gens
            );
            // Projective closure: j*u slices whenever u does.
            for u in &slicing {
                for j in 2..p {
                    let ju: Vec<u32> = u.iter().map(|&x| (x * j) % p).collect();
                    assert!(slicing.contains(&ju));
                }
            }
        }
    }

    #[test]
    fn slicing_bound_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..40 {
            let p = *[2u32, 3, 5].get(rng.random_range(0..3)).unwrap();
            let depth = rng.random_range(1..=3u32);
            let side = (p as usize).pow(depth);
            if side > 125 {
                continue;
            }
            let gens: Vec<i64> = (0..side).map(|_| rng.random_range(-5..=5)).collect();
            let fc = FractalCirculant::from_integers(p, depth, &gens).unwrap();
            let s = fc.slicing_number().unwrap();
            let max = (side - 1) / (p as usize - 1);
            assert!(s <= max, "s = {} exceeds bound {}", s, max);
        }
    }

    #[test]
    fn input_validation() {
        assert!(FractalCirculant::from_integers(1, 1, &[1]).is_err());
        assert!(FractalCirculant::from_integers(3, 0, &[1]).is_err());
        assert!(FractalCirculant::from_integers(3, 2, &[1, 2, 3]).is_err());
        assert!(FractalCirculant::from_integers(5, 6, &[]).is_err());
    }
}
