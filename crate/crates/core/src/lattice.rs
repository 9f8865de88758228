//! Integer lattices in canonical column Hermite normal form: HNF reduction,
//! kernels of constraint maps with congruence conditions, trivial-lattice
//! bases and multiplicity lifting.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::div_floor_big;
use crate::error::{Error, Result};
use crate::poly::RatScalar;

/// Basis of a sublattice of Z^dim, stored in column Hermite normal form:
/// each column's first nonzero entry (its pivot) is positive, pivot rows are
/// strictly increasing left to right, and every entry to the left of a pivot
/// in its row is reduced into `[0, pivot)`. Equal lattices have identical
/// representations.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: usize,
    cols: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn empty(dim: usize) -> Self {
        LatticeBasis { dim, cols: Vec::new() }
    }

    /// HNF basis of the span of arbitrary integer columns.
    pub fn from_columns(dim: usize, cols: Vec<Vec<BigInt>>) -> Self {
        for c in &cols {
            assert_eq!(c.len(), dim, "column length mismatch");
        }
        LatticeBasis { dim, cols: hnf_columns(dim, cols) }
    }

    pub fn from_i64_columns(dim: usize, cols: &[Vec<i64>]) -> Self {
        Self::from_columns(
            dim,
            cols.iter()
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn columns(&self) -> &[Vec<BigInt>] {
        &self.cols
    }

    /// Index `[Z^dim : L]` for a full-rank lattice (product of pivots).
    pub fn index_in_ambient(&self) -> Option<BigInt> {
        if self.rank() != self.dim {
            return None;
        }
        let mut det = BigInt::one();
        for (j, col) in self.cols.iter().enumerate() {
            det *= &col[j];
        }
        Some(det)
    }

    /// Exact membership test by back-substitution along pivot rows.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        let pivots: Vec<usize> = self.cols.iter().map(|c| pivot_row(c).unwrap()).collect();
        for (col, &pr) in self.cols.iter().zip(&pivots) {
            if v[pr].is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&v[pr], &col[pr]);
            if !r.is_zero() {
                return false;
            }
            for i in pr..self.dim {
                let t = &q * &col[i];
                v[i] -= t;
            }
        }
        v.iter().all(Zero::is_zero)
    }

    /// Smallest lattice containing both operands.
    pub fn join(&self, other: &LatticeBasis) -> LatticeBasis {
        assert_eq!(self.dim, other.dim);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        LatticeBasis::from_columns(self.dim, cols)
    }

    /// True when `other`'s span is contained in `self`'s span.
    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.cols.iter().all(|c| self.contains(c))
    }
}

impl std::fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LatticeBasis(dim={}, cols=[", self.dim)?;
        for (i, c) in self.cols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in c.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x)?;
            }
            write!(f, ")")?;
        }
        write!(f, "])")
    }
}

fn pivot_row(col: &[BigInt]) -> Option<usize> {
    col.iter().position(|x| !x.is_zero())
}

/// Column HNF of the span of `cols`, dropping zero columns. Top rows are
/// eliminated first, so pivot rows come out strictly increasing.
fn hnf_columns(dim: usize, cols: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let (placed, _) = hnf_eliminate(dim, cols, dim);
    placed
}

/// Eliminate rows `0..row_limit` by unimodular column operations. Returns
/// `(placed, remaining)`: `placed` are pivot columns in canonical HNF shape,
/// `remaining` are columns that are zero in all eliminated rows.
fn hnf_eliminate(
    dim: usize,
    cols: Vec<Vec<BigInt>>,
    row_limit: usize,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut work: Vec<Vec<BigInt>> = cols.into_iter().filter(|c| pivot_row(c).is_some()).collect();
    let mut placed: Vec<Vec<BigInt>> = Vec::new();
    for row in 0..row_limit.min(dim) {
        // Combine columns until at most one has a nonzero entry in this row.
        loop {
            let mut nz: Vec<usize> = (0..work.len()).filter(|&j| !work[j][row].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            // Pair the two columns with the smallest entries to limit growth.
            nz.sort_by_key(|&j| work[j][row].abs());
            let (ja, jb) = (nz[0], nz[1]);
            let a = work[ja][row].clone();
            let b = work[jb][row].clone();
            let ext = num_integer::Integer::extended_gcd(&a, &b);
            let (g, s, t) = (ext.gcd, ext.x, ext.y);
            let (au, bu) = (&a / &g, &b / &g);
            let (lo, hi) = (ja.min(jb), ja.max(jb));
            let (head, tail) = work.split_at_mut(hi);
            let (ca, cb) = if ja < jb {
                (&mut head[lo], &mut tail[0])
            } else {
                (&mut tail[0], &mut head[lo])
            };
            for (x, y) in ca.iter_mut().zip(cb.iter_mut()) {
                let (xv, yv) = (x.clone(), y.clone());
                *x = &s * &xv + &t * &yv;
                *y = -&bu * xv + &au * yv;
            }
            debug_assert_eq!(work[ja][row], g);
            debug_assert!(work[jb][row].is_zero());
        }
        if let Some(j) = (0..work.len()).find(|&j| !work[j][row].is_zero()) {
            let mut col = work.swap_remove(j);
            if col[row].is_negative() {
                for x in col.iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            // Reduce the entries of already-placed columns in this row.
            for pc in placed.iter_mut() {
                let q = div_floor_big(&pc[row], &col[row]);
                if !q.is_zero() {
                    for i in 0..dim {
                        let t = &q * &col[i];
                        pc[i] -= t;
                    }
                }
            }
            placed.push(col);
            work.retain(|c| pivot_row(c).is_some());
        }
    }
    (placed, work)
}

/// Column Hermite normal form of an integer matrix given as columns.
pub fn hnf(dim: usize, columns: Vec<Vec<BigInt>>) -> LatticeBasis {
    LatticeBasis::from_columns(dim, columns)
}

/// Constraint system for `kernel_with_congruence`:
/// `{ v in Z^n : (require_zero_sum => sum v_i = 0) and sum a_i v_i = 0 mod modulus }`.
#[derive(Clone, Debug)]
pub struct CongruenceSpec {
    pub weights: Vec<BigInt>,
    pub modulus: BigInt,
    pub require_zero_sum: bool,
}

impl CongruenceSpec {
    pub fn new(weights: Vec<BigInt>, modulus: BigInt, require_zero_sum: bool) -> Result<Self> {
        if modulus < BigInt::one() {
            return Err(Error::InvalidInput("modulus must be >= 1".into()));
        }
        if weights.is_empty() {
            return Err(Error::InvalidInput("empty weight vector".into()));
        }
        let weights = weights
            .into_iter()
            .map(|w| num_integer::Integer::mod_floor(&w, &modulus))
            .collect();
        Ok(CongruenceSpec { weights, modulus, require_zero_sum })
    }

    pub fn from_u64(weights: &[u64], modulus: u64, require_zero_sum: bool) -> Result<Self> {
        Self::new(
            weights.iter().map(|&w| BigInt::from(w)).collect(),
            BigInt::from(modulus),
            require_zero_sum,
        )
    }

    pub fn satisfied_by(&self, v: &[BigInt]) -> bool {
        if self.require_zero_sum && !v.iter().sum::<BigInt>().is_zero() {
            return false;
        }
        let t: BigInt = self.weights.iter().zip(v).map(|(a, x)| a * x).sum();
        num_integer::Integer::mod_floor(&t, &self.modulus).is_zero()
    }
}

/// Basis of the solution lattice of a `CongruenceSpec`. The congruence row is
/// lifted with an auxiliary unknown multiplying the modulus; the auxiliary
/// coordinate is projected away after kernel extraction.
pub fn kernel_with_congruence(spec: &CongruenceSpec) -> LatticeBasis {
    let n = spec.weights.len();
    let rows = if spec.require_zero_sum { 2 } else { 1 };
    let stacked_dim = rows + n + 1;
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut col = vec![BigInt::zero(); stacked_dim];
        let mut r = 0;
        if spec.require_zero_sum {
            col[r] = BigInt::one();
            r += 1;
        }
        col[r] = spec.weights[j].clone();
        col[rows + j] = BigInt::one();
        cols.push(col);
    }
    // Auxiliary column: modulus in the congruence row only.
    let mut aux = vec![BigInt::zero(); stacked_dim];
    aux[rows - 1] = spec.modulus.clone();
    aux[rows + n] = BigInt::one();
    cols.push(aux);

    let (_, kernel_cols) = hnf_eliminate(stacked_dim, cols, rows);
    let projected: Vec<Vec<BigInt>> = kernel_cols
        .into_iter()
        .map(|c| c[rows..rows + n].to_vec())
        .collect();
    LatticeBasis::from_columns(n, projected)
}

/// Basis of a lattice known to be trivial (all coordinates of every vector
/// equal), by case analysis on the constant term of the monic normalization.
pub fn trivial_basis(n: usize, constant_term: &RatScalar) -> Result<LatticeBasis> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be >= 1".into()));
    }
    if constant_term.is_zero() {
        return Err(Error::InvalidInput("constant term must be nonzero".into()));
    }
    let one = RatScalar::from_integer(BigInt::one());
    let sign = if n.is_multiple_of(2) { constant_term.clone() } else { -constant_term.clone() };
    let scale: Option<i64> = if sign == one {
        Some(1)
    } else if sign == -one.clone() {
        Some(2)
    } else {
        None
    };
    Ok(match scale {
        None => LatticeBasis::empty(n),
        Some(s) => LatticeBasis::from_columns(n, vec![vec![BigInt::from(s); n]]),
    })
}

/// Lift a basis over the distinct values to the full multiplicity layout:
/// original vectors are zero-extended and one difference vector is adjoined
/// per repeated slot (`-1` at the distinct slot, `+1` at the copy slot).
pub fn lift_multiplicity(basis: &LatticeBasis, multiplicities: &[u32]) -> Result<LatticeBasis> {
    let n = basis.dim();
    if multiplicities.len() != n {
        return Err(Error::InvalidInput(format!(
            "multiplicity vector length {} does not match dimension {}",
            multiplicities.len(),
            n
        )));
    }
    let extra: usize = multiplicities.iter().map(|&l| l as usize).sum();
    let big_n = n + extra;
    let mut cols: Vec<Vec<BigInt>> = basis
        .columns()
        .iter()
        .map(|c| {
            let mut v = c.clone();
            v.resize(big_n, BigInt::zero());
            v
        })
        .collect();
    let mut offset = n;
    for (i, &l) in multiplicities.iter().enumerate() {
        for j in 0..l as usize {
            let mut v = vec![BigInt::zero(); big_n];
            v[i] = BigInt::from(-1);
            v[offset + j] = BigInt::one();
            cols.push(v);
        }
        offset += l as usize;
    }
    Ok(LatticeBasis::from_columns(big_n, cols))
}
