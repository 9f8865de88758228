//! The fast exponent-lattice pipeline: factorization gate, branch dispatch
//! between the root-of-rational and pair-product-criterion cases, trivial
//! basis construction, multiplicity lifting, canonical root ordering and
//! 100-digit numeric verification of every emitted basis vector.

use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::deadline;
use crate::error::{Error, Result};
use crate::factor::factor_over_q;
use crate::lattice::{lift_multiplicity, trivial_basis, LatticeBasis};
use crate::pairprod::decide_two_homogeneous;
use crate::poly::{IntPoly, RatScalar};
use crate::ror::{analyze_root_of_rational, is_root_of_rational_poly, ror_lattice_basis};
use crate::roots::{isolate_roots_with_ceiling, RootEnclosure};
use crate::roots_order::sort_canonical;

#[derive(Clone, Debug)]
pub struct FastBasisConfig {
    /// Cap on the input degree; the pair-product polynomial has degree
    /// n(n-1)/2, so large inputs get expensive quickly.
    pub max_degree: usize,
    /// Decimal digits at which every emitted basis vector is verified.
    pub verify_digits: u32,
    /// Ceiling of the numeric precision ladder, in bits.
    pub precision_ceiling: u32,
    /// Optional cooperative deadline for the whole call.
    pub deadline: Option<Instant>,
}

impl Default for FastBasisConfig {
    fn default() -> Self {
        FastBasisConfig {
            max_degree: 30,
            verify_digits: 100,
            precision_ceiling: crate::roots::DEFAULT_PRECISION_CEILING,
            deadline: None,
        }
    }
}

/// Which branch produced the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// All roots are roots of rationals; lattice from congruence kernels.
    RationalRoots,
    /// Pair-product criterion certified a trivial lattice.
    TwoHomogeneous,
    /// Degree-2 shortcut: the pair-product polynomial is linear, so the
    /// criterion holds without any computation.
    QuadraticShortcut,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::RationalRoots => "rational-roots",
            Branch::TwoHomogeneous => "two-homogeneous",
            Branch::QuadraticShortcut => "quadratic-shortcut",
        }
    }
}

/// Witness for membership of the input in the tractable class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EWitness {
    DivisibleByX,
    MultipleCoprimeFactors,
    RationalRoots,
    PairProductIrreducible,
    PairProductNotIrreducible,
}

impl EWitness {
    pub fn in_class(&self) -> bool {
        matches!(self, EWitness::RationalRoots | EWitness::PairProductIrreducible)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EWitness::DivisibleByX => "x divides f",
            EWitness::MultipleCoprimeFactors => "two or more coprime irreducible factors",
            EWitness::RationalRoots => "all roots are roots of rationals",
            EWitness::PairProductIrreducible => "pair-product polynomial is irreducible",
            EWitness::PairProductNotIrreducible => "pair-product polynomial is not irreducible",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Timings {
    pub factor: Duration,
    pub roots: Duration,
    pub branch: Duration,
    pub lattice: Duration,
    pub verify: Duration,
    pub total: Duration,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Basis {
        basis: LatticeBasis,
        /// Canonical root order fixing the meaning of basis coordinates:
        /// distinct roots sorted by (Re, Im), then one block of copies per
        /// repeated root.
        roots: Vec<RootEnclosure>,
        branch: Branch,
        witness: EWitness,
    },
    /// Definitive verdict that the input is outside the tractable class.
    NotInClass { witness: EWitness },
}

#[derive(Clone, Debug)]
pub struct BasisResult {
    pub outcome: Outcome,
    pub timings: Timings,
}

impl BasisResult {
    pub fn is_basis(&self) -> bool {
        matches!(self.outcome, Outcome::Basis { .. })
    }

    pub fn basis(&self) -> Option<&LatticeBasis> {
        match &self.outcome {
            Outcome::Basis { basis, .. } => Some(basis),
            Outcome::NotInClass { .. } => None,
        }
    }
}

pub fn fast_basis(f: &IntPoly) -> Result<BasisResult> {
    fast_basis_with(f, &FastBasisConfig::default())
}

pub fn fast_basis_with(f: &IntPoly, config: &FastBasisConfig) -> Result<BasisResult> {
    run_pipeline(f, config, true)
}

/// Exact membership test for the tractable class, with a witness naming the
/// decisive condition. Consistent with `fast_basis`: a basis is returned iff
/// this reports true.
pub fn check_e(f: &IntPoly) -> Result<(bool, EWitness)> {
    check_e_with(f, &FastBasisConfig::default())
}

pub fn check_e_with(f: &IntPoly, config: &FastBasisConfig) -> Result<(bool, EWitness)> {
    let r = run_pipeline(f, config, false)?;
    Ok(match r.outcome {
        Outcome::Basis { witness, .. } => (true, witness),
        Outcome::NotInClass { witness } => (false, witness),
    })
}

/// Canonical root order for `g^k`: the distinct roots of `g` sorted by
/// (Re asc, Im asc), followed by `k - 1` copies of each in per-root blocks.
pub fn canonical_root_order(g: &IntPoly, k: u32) -> Result<Vec<RootEnclosure>> {
    let config = FastBasisConfig::default();
    let mut distinct = isolate_roots_with_ceiling(g, 64, config.precision_ceiling)?;
    sort_canonical(g, &mut distinct)?;
    Ok(with_multiplicity_blocks(&distinct, k))
}

fn with_multiplicity_blocks(distinct: &[RootEnclosure], k: u32) -> Vec<RootEnclosure> {
    let mut full = distinct.to_vec();
    for e in distinct {
        for _ in 1..k {
            full.push(e.clone());
        }
    }
    full
}

fn run_pipeline(f: &IntPoly, config: &FastBasisConfig, build: bool) -> Result<BasisResult> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::InvalidInput(
            "input must be a nonconstant polynomial".into(),
        ));
    }
    if f.deg() > config.max_degree {
        return Err(Error::DegreeCap { degree: f.deg(), cap: config.max_degree });
    }
    let _guard = deadline::set_deadline(config.deadline);
    let t_start = Instant::now();
    let mut timings = Timings::default();

    // Factorization gate.
    let t = Instant::now();
    if f.constant_term().is_zero() {
        timings.factor = t.elapsed();
        timings.total = t_start.elapsed();
        return Ok(BasisResult {
            outcome: Outcome::NotInClass { witness: EWitness::DivisibleByX },
            timings,
        });
    }
    let ff = factor_over_q(f)?;
    timings.factor = t.elapsed();
    if ff.factors.len() != 1 {
        timings.total = t_start.elapsed();
        return Ok(BasisResult {
            outcome: Outcome::NotInClass { witness: EWitness::MultipleCoprimeFactors },
            timings,
        });
    }
    let (g, k) = (&ff.factors[0].0, ff.factors[0].1);
    let n = g.deg();
    deadline::check()?;

    // Certified enclosures of the distinct roots. Canonical sorting is
    // deferred until a branch actually consumes the order, so inputs
    // rejected by the branch tests never pay for (or fail on) ordering.
    let t = Instant::now();
    let mut distinct = isolate_roots_with_ceiling(g, 64, config.precision_ceiling)?;
    timings.roots = t.elapsed();
    deadline::check()?;

    // Branch dispatch.
    let t = Instant::now();
    let is_ror = n == 1
        || (!moduli_provably_distinct(&distinct) && is_root_of_rational_poly(g)?);
    let (branch, witness, basis_g) = if is_ror {
        let basis_g = if build {
            sort_canonical(g, &mut distinct)?;
            let data = analyze_root_of_rational(g, &mut distinct)?;
            Some(ror_lattice_basis(g, &data)?)
        } else {
            None
        };
        (Branch::RationalRoots, EWitness::RationalRoots, basis_g)
    } else if n == 2 {
        let basis_g = if build { Some(trivial_basis(n, &monic_constant(g))?) } else { None };
        (Branch::QuadraticShortcut, EWitness::PairProductIrreducible, basis_g)
    } else {
        let report = decide_two_homogeneous(g)?;
        if !report.criterion_holds() {
            timings.branch = t.elapsed();
            timings.total = t_start.elapsed();
            return Ok(BasisResult {
                outcome: Outcome::NotInClass { witness: EWitness::PairProductNotIrreducible },
                timings,
            });
        }
        let basis_g = if build { Some(trivial_basis(n, &monic_constant(g))?) } else { None };
        (Branch::TwoHomogeneous, EWitness::PairProductIrreducible, basis_g)
    };
    timings.branch = t.elapsed();
    deadline::check()?;

    let basis_g = match basis_g {
        Some(b) => b,
        None => {
            timings.total = t_start.elapsed();
            return Ok(BasisResult {
                outcome: Outcome::Basis {
                    basis: LatticeBasis::empty(0),
                    roots: Vec::new(),
                    branch,
                    witness,
                },
                timings,
            });
        }
    };
    if branch != Branch::RationalRoots {
        // The rational-roots branch sorted before exponent identification;
        // the trivial-lattice branches only need the order for the output.
        sort_canonical(g, &mut distinct)?;
    }

    // Lift to the full multiplicity layout.
    let t = Instant::now();
    let basis = lift_multiplicity(&basis_g, &vec![k - 1; n])?;
    timings.lattice = t.elapsed();

    // Verify every emitted column numerically before reporting it.
    let t = Instant::now();
    verify_columns(g, &mut distinct, &basis, n, k, config.verify_digits)?;
    timings.verify = t.elapsed();

    let roots = with_multiplicity_blocks(&distinct, k);
    timings.total = t_start.elapsed();
    Ok(BasisResult {
        outcome: Outcome::Basis { basis, roots, branch, witness },
        timings,
    })
}

fn monic_constant(g: &IntPoly) -> RatScalar {
    RatScalar::new(g.constant_term(), g.lc().clone())
}

/// Can two roots be told apart by modulus alone? A sound fast negative for
/// the root-of-rational test (conjugates of a root of rational all share one
/// modulus).
fn moduli_provably_distinct(encs: &[RootEnclosure]) -> bool {
    let bounds: Vec<(num_bigint::BigInt, num_bigint::BigInt, u32)> = encs
        .iter()
        .map(|e| {
            let d = &e.re * &e.re + &e.im * &e.im;
            let lo = crate::arith::isqrt_floor(&d) - &e.rad - 1;
            let hi = crate::arith::isqrt_ceil(&d) + &e.rad + 1;
            (lo, hi, e.prec)
        })
        .collect();
    for i in 0..bounds.len() {
        for j in i + 1..bounds.len() {
            let p = bounds[i].2.max(bounds[j].2);
            let (ref lo_i, ref hi_i, pi) = bounds[i];
            let (ref lo_j, ref hi_j, pj) = bounds[j];
            let scale_i = p - pi;
            let scale_j = p - pj;
            if (hi_i << scale_i) < (lo_j << scale_j) || (hi_j << scale_j) < (lo_i << scale_i) {
                return true;
            }
        }
    }
    false
}

fn verify_columns(
    g: &IntPoly,
    distinct: &mut [RootEnclosure],
    basis: &LatticeBasis,
    n: usize,
    k: u32,
    digits: u32,
) -> Result<()> {
    use num_traits::ToPrimitive;
    for col in basis.columns() {
        deadline::check()?;
        let mut folded = vec![0i64; n];
        for (coord, x) in col.iter().enumerate() {
            let xi = x
                .to_i64()
                .ok_or_else(|| Error::Internal("basis entry overflows i64".into()))?;
            let slot = if coord < n {
                coord
            } else {
                (coord - n) / (k as usize - 1)
            };
            folded[slot] += xi;
        }
        let verdict = crate::oracle::verify_relation(g, distinct, &folded, digits)?;
        if !verdict.holds() {
            return Err(Error::Internal(format!(
                "emitted basis vector failed {}-digit verification",
                digits
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn schinzel_gets_f_verdict() {
        let f = p(&[1, 0, -2, -6, -2, 0, 1]);
        let r = fast_basis(&f).unwrap();
        assert!(!r.is_basis());
        match r.outcome {
            Outcome::NotInClass { witness } => {
                assert_eq!(witness, EWitness::PairProductNotIrreducible)
            }
            _ => panic!("expected F"),
        }
    }

    #[test]
    fn multiplicity_golden_case() {
        let f = p(&[-1, -3, 1]).pow(2);
        let r = fast_basis(&f).unwrap();
        let expect = LatticeBasis::from_i64_columns(
            4,
            &[vec![2, 2, 0, 0], vec![-1, 0, 1, 0], vec![0, -1, 0, 1]],
        );
        match r.outcome {
            Outcome::Basis { basis, roots, branch, .. } => {
                assert_eq!(basis, expect);
                assert_eq!(branch, Branch::QuadraticShortcut);
                assert_eq!(roots.len(), 4);
                // Layout (b1, b2, b1, b2): repeats alias the distinct slots.
                assert!((roots[0].re_f64() - roots[2].re_f64()).abs() < 1e-12);
                assert!((roots[1].re_f64() - roots[3].re_f64()).abs() < 1e-12);
                assert!((roots[0].re_f64() + 0.30278).abs() < 1e-4);
            }
            _ => panic!("expected basis"),
        }
    }

    #[test]
    fn cube_root_two_rational_branch() {
        let r = fast_basis(&p(&[-2, 0, 0, 1])).unwrap();
        match r.outcome {
            Outcome::Basis { basis, branch, .. } => {
                assert_eq!(branch, Branch::RationalRoots);
                assert_eq!(basis.rank(), 2);
            }
            _ => panic!("expected basis"),
        }
    }

    #[test]
    fn coprime_factors_get_f() {
        let r = fast_basis(&p(&[-1, 0, 1])).unwrap();
        match r.outcome {
            Outcome::NotInClass { witness } => {
                assert_eq!(witness, EWitness::MultipleCoprimeFactors)
            }
            _ => panic!("expected F"),
        }
        let r = fast_basis(&p(&[0, -1, 1])).unwrap();
        match r.outcome {
            Outcome::NotInClass { witness } => assert_eq!(witness, EWitness::DivisibleByX),
            _ => panic!("expected F"),
        }
    }

    #[test]
    fn scaling_invariance() {
        let f = p(&[-1, -3, 1]);
        let a = fast_basis(&f).unwrap();
        let b = fast_basis(&f.mul_scalar(&BigInt::from(-7))).unwrap();
        match (a.outcome, b.outcome) {
            (Outcome::Basis { basis: ba, .. }, Outcome::Basis { basis: bb, .. }) => {
                assert_eq!(ba, bb)
            }
            _ => panic!("expected bases"),
        }
    }

    #[test]
    fn check_e_examples() {
        let (in_e, w) = check_e(&p(&[-1, -3, 1]).pow(2)).unwrap();
        assert!(in_e);
        assert_eq!(w, EWitness::PairProductIrreducible);

        let (in_e, w) = check_e(&p(&[1, 0, -2, -6, -2, 0, 1])).unwrap();
        assert!(!in_e);
        assert_eq!(w, EWitness::PairProductNotIrreducible);

        let (in_e, w) = check_e(&p(&[0, -1, 1])).unwrap();
        assert!(!in_e);
        assert_eq!(w, EWitness::DivisibleByX);

        let (in_e, w) = check_e(&p(&[-2, 0, 0, 1])).unwrap();
        assert!(in_e);
        assert_eq!(w, EWitness::RationalRoots);
    }

    #[test]
    fn trivial_basis_dispatch_cases() {
        // Case (i): f(0) = 3 outside {1,-1} -> empty basis.
        let r = fast_basis(&p(&[3, -1, 1])).unwrap();
        match r.outcome {
            Outcome::Basis { basis, .. } => assert!(basis.is_empty()),
            _ => panic!("expected basis"),
        }
        // Case (ii): (-1)^2 * 1 = 1 -> all-ones.
        let r = fast_basis(&p(&[1, -3, 1])).unwrap();
        match r.outcome {
            Outcome::Basis { basis, .. } => {
                assert_eq!(basis, LatticeBasis::from_i64_columns(2, &[vec![1, 1]]))
            }
            _ => panic!("expected basis"),
        }
        // Case (iii): (-1)^2 * (-1) = -1 -> doubled all-ones.
        let r = fast_basis(&p(&[-1, -3, 1])).unwrap();
        match r.outcome {
            Outcome::Basis { basis, .. } => {
                assert_eq!(basis, LatticeBasis::from_i64_columns(2, &[vec![2, 2]]))
            }
            _ => panic!("expected basis"),
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(matches!(fast_basis(&IntPoly::zero()), Err(Error::InvalidInput(_))));
        assert!(matches!(fast_basis(&p(&[7])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn degree_cap_respected() {
        let cfg = FastBasisConfig { max_degree: 4, ..Default::default() };
        let f = IntPoly::x_pow_minus(5, 2);
        assert!(matches!(
            fast_basis_with(&f, &cfg),
            Err(Error::DegreeCap { degree: 5, cap: 4 })
        ));
    }

    #[test]
    fn canonical_order_examples() {
        let order = canonical_root_order(&p(&[1, 0, 1]), 1).unwrap();
        assert!(order[0].im_f64() < 0.0 && order[1].im_f64() > 0.0);

        let order = canonical_root_order(&p(&[-1, -3, 1]), 1).unwrap();
        assert!((order[0].re_f64() + 0.30278).abs() < 1e-4);
        assert!((order[1].re_f64() - 3.30278).abs() < 1e-4);

        let order = canonical_root_order(&p(&[-2, 0, 0, 1]), 2).unwrap();
        assert_eq!(order.len(), 6);
    }

    #[test]
    fn fifth_root_family() {
        let r = fast_basis(&IntPoly::x_pow_minus(5, 2)).unwrap();
        match r.outcome {
            Outcome::Basis { basis, branch, .. } => {
                assert_eq!(branch, Branch::RationalRoots);
                assert_eq!(basis.rank(), 4);
                assert_eq!(
                    basis,
                    crate::oracle::brute_force_relations(&IntPoly::x_pow_minus(5, 2), 4, 80)
                        .unwrap()
                );
            }
            _ => panic!("expected basis"),
        }
    }
}
