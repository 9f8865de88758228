//! Numeric relation oracle: rigorous verification of candidate relations in
//! ball arithmetic, and a bounded brute-force relation finder used as an
//! independent cross-check of the exact pipeline.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::deadline;
use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::poly::euclid::squarefree_part;
use crate::poly::special::squarefree_decompose;
use crate::poly::IntPoly;
use crate::roots::ball::Ball;
use crate::roots::{
    isolate_roots_with_ceiling, refine_enclosure, RootEnclosure, DEFAULT_PRECISION_CEILING,
};

/// Outcome of a numeric relation check. A `FailsAtPrecision` verdict is a
/// proof (the value ball excludes 1); `HoldsAtPrecision` is evidence at the
/// stated residual, not a symbolic proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationVerdict {
    HoldsAtPrecision { bits: u32, residual_bits: u32 },
    FailsAtPrecision { bits: u32 },
    Inconclusive { bits: u32 },
}

impl RelationVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, RelationVerdict::HoldsAtPrecision { .. })
    }
}

/// Hard cap on the degree accepted by the brute-force oracle.
pub const ORACLE_DEGREE_CAP: usize = 12;
/// Hard cap on the exponent bound accepted by the brute-force oracle.
pub const ORACLE_BOUND_CAP: i64 = 4;

fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// Evaluate `prod roots_i ^ v_i` in ball arithmetic and compare against 1 at
/// roughly `digits` decimal digits. Enclosures are refined in place as the
/// precision ladder climbs; `defining` is the squarefree polynomial the
/// enclosures certify roots of.
pub fn verify_relation(
    defining: &IntPoly,
    roots: &mut [RootEnclosure],
    v: &[i64],
    digits: u32,
) -> Result<RelationVerdict> {
    if roots.len() != v.len() {
        return Err(Error::InvalidInput("exponent length mismatch".into()));
    }
    let eps_bits = digits_to_bits(digits);
    let df = defining.derivative();
    let weight: u32 = v.iter().map(|x| x.unsigned_abs() as u32).sum::<u32>().max(1);
    let mut rel_bits = eps_bits + 2 * weight + 64;
    loop {
        let prec = rel_bits + 64;
        for (enc, &e) in roots.iter_mut().zip(v) {
            if e != 0 {
                refine_enclosure(defining, &df, enc, rel_bits, DEFAULT_PRECISION_CEILING)?;
            }
        }
        let mut acc = Ball::one(prec);
        let mut failed_inverse = false;
        for (enc, &e) in roots.iter().zip(v) {
            if e == 0 {
                continue;
            }
            let b = enc.ball().to_prec(prec);
            match b.pow(e) {
                Ok(p) => acc = acc.mul(&p),
                Err(_) => {
                    // Ball still straddles zero; needs more refinement.
                    failed_inverse = true;
                    break;
                }
            }
        }
        if !failed_inverse {
            let one = BigInt::one();
            if acc.excludes_int(&one) {
                return Ok(RelationVerdict::FailsAtPrecision { bits: prec });
            }
            if acc.within_of_int(&one, eps_bits) {
                return Ok(RelationVerdict::HoldsAtPrecision { bits: prec, residual_bits: eps_bits });
            }
        }
        if rel_bits >= DEFAULT_PRECISION_CEILING {
            return Ok(RelationVerdict::Inconclusive { bits: rel_bits });
        }
        rel_bits *= 2;
    }
}

/// Root data for the oracle: distinct roots of the squarefree part in
/// canonical order, then one block of copies per repeated root, mirroring
/// the multiplicity layout of the exact pipeline.
pub struct OracleRoots {
    pub defining: IntPoly,
    pub distinct: Vec<RootEnclosure>,
    /// Index into `distinct` for each of the `n` coordinates.
    pub layout: Vec<usize>,
}

pub fn oracle_roots(f: &IntPoly) -> Result<OracleRoots> {
    let sf = squarefree_part(f)?;
    let mut distinct = isolate_roots_with_ceiling(&sf, 64, DEFAULT_PRECISION_CEILING)?;
    crate::roots_order::sort_canonical(&sf, &mut distinct)?;
    let mults = root_multiplicities(f, &sf, &mut distinct)?;
    let n = distinct.len();
    let mut layout: Vec<usize> = (0..n).collect();
    for (i, &m) in mults.iter().enumerate() {
        for _ in 1..m {
            layout.push(i);
        }
    }
    Ok(OracleRoots { defining: sf, distinct, layout })
}

/// Multiplicity of each distinct root of `f`, by isolating the roots of each
/// squarefree level and matching every one to the unique distinct enclosure
/// it overlaps.
fn root_multiplicities(
    f: &IntPoly,
    sf: &IntPoly,
    distinct: &mut [RootEnclosure],
) -> Result<Vec<u32>> {
    if sf.deg() == f.deg() {
        return Ok(vec![1; distinct.len()]);
    }
    let dec = squarefree_decompose(f)?;
    let mut mults = vec![0u32; distinct.len()];
    let df_sf = sf.derivative();
    for (part, k) in &dec.parts {
        let mut part_roots = isolate_roots_with_ceiling(part, 64, DEFAULT_PRECISION_CEILING)?;
        let dpart = part.derivative();
        for pr in part_roots.iter_mut() {
            let mut rel = 64u32;
            let slot = loop {
                let hits: Vec<usize> = (0..distinct.len())
                    .filter(|&i| pr.overlaps(&distinct[i]))
                    .collect();
                if hits.len() == 1 {
                    break hits[0];
                }
                if rel >= DEFAULT_PRECISION_CEILING {
                    return Err(Error::PrecisionExhausted(rel));
                }
                rel *= 2;
                refine_enclosure(part, &dpart, pr, rel, DEFAULT_PRECISION_CEILING)?;
                for e in distinct.iter_mut() {
                    refine_enclosure(sf, &df_sf, e, rel, DEFAULT_PRECISION_CEILING)?;
                }
            };
            if mults[slot] != 0 {
                return Err(Error::Internal("root matched twice in layout".into()));
            }
            mults[slot] = *k;
        }
    }
    if mults.contains(&0) {
        return Err(Error::Internal("unmatched root in multiplicity layout".into()));
    }
    Ok(mults)
}

/// Brute-force relation search: enumerate all exponent vectors with
/// `|v_i| <= bound` in graded lexicographic order, filter with fast floating
/// residuals, skip anything already in the span of accepted vectors, and
/// verify the rest rigorously at `digits` digits. Returns the HNF of the
/// span of everything accepted (numeric-grade evidence).
pub fn brute_force_relations(f: &IntPoly, bound: i64, digits: u32) -> Result<LatticeBasis> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::InvalidInput("oracle needs degree >= 1".into()));
    }
    if f.deg() > ORACLE_DEGREE_CAP {
        return Err(Error::DegreeCap { degree: f.deg(), cap: ORACLE_DEGREE_CAP });
    }
    if !(1..=ORACLE_BOUND_CAP).contains(&bound) {
        return Err(Error::InvalidInput(format!("oracle bound {} out of range", bound)));
    }
    if f.constant_term().is_zero() {
        return Err(Error::InvalidInput("oracle requires f(0) != 0".into()));
    }
    let mut or = oracle_roots(f)?;
    let n = or.layout.len();
    debug_assert_eq!(n, f.deg());

    // High-accuracy f64 data: refine to ~2^-90 first so logs/args carry full
    // f64 precision.
    let df = or.defining.derivative();
    for enc in or.distinct.iter_mut() {
        refine_enclosure(&or.defining, &df, enc, 90, DEFAULT_PRECISION_CEILING)?;
    }
    let logs: Vec<f64> = or
        .layout
        .iter()
        .map(|&i| {
            let e = &or.distinct[i];
            e.re_f64().hypot(e.im_f64()).ln()
        })
        .collect();
    let args: Vec<f64> = or
        .layout
        .iter()
        .map(|&i| {
            let e = &or.distinct[i];
            e.im_f64().atan2(e.re_f64())
        })
        .collect();

    let mut search = Search {
        n,
        bound,
        logs,
        args,
        log_tail: suffix_weights(&or.layout, bound, |i| {
            let e = &or.distinct[i];
            e.re_f64().hypot(e.im_f64()).ln().abs()
        }),
        arg_tail: suffix_weights(&or.layout, bound, |i| {
            let e = &or.distinct[i];
            e.im_f64().atan2(e.re_f64()).abs()
        }),
        accepted: LatticeBasis::empty(n),
        tri: TriangularCache::empty(n),
        defining: or.defining.clone(),
        distinct: or.distinct,
        layout: or.layout,
        digits,
        v: vec![0i64; n],
        tick: 0,
    };
    // Small boxes: pure graded-lexicographic enumeration. Large boxes:
    // graded discovery of the low-weight generators, then one tight
    // lexicographic sweep for completeness (the accepted span is
    // order-independent, so the result is identical).
    let box_size = (2.0 * bound as f64 + 1.0).powi(n as i32);
    if box_size <= 3.0e7 {
        for grade in 0..=(n as i64 * bound) {
            search.dfs(0, grade, 0.0, 0.0)?;
        }
    } else {
        for grade in 0..=(2 * bound + 4).min(n as i64 * bound) {
            search.dfs(0, grade, 0.0, 0.0)?;
        }
        search.lex_sweep()?;
    }
    Ok(search.accepted)
}

fn suffix_weights<F: Fn(usize) -> f64>(layout: &[usize], bound: i64, w: F) -> Vec<f64> {
    let n = layout.len();
    let mut tail = vec![0.0; n + 1];
    for k in (0..n).rev() {
        tail[k] = tail[k + 1] + bound as f64 * w(layout[k]);
    }
    tail
}

/// i64 back-substitution cache of the accepted-lattice HNF for the hot
/// membership test, with a one-linear-form shortcut for full-rank lattices
/// of prime index; falls back to exact BigInt when entries are large enough
/// that overflow is conceivable.
struct TriangularCache {
    dim: usize,
    cols: Option<Vec<Vec<i64>>>,
    pivots: Vec<usize>,
    scratch: Vec<i64>,
    /// `(w, d)` with membership equivalent to `w . v = 0 mod d`.
    form: Option<(Vec<i64>, i64)>,
}

/// Entry bound under which `dim` rounds of back-substitution on a
/// `bound`-box candidate provably stay far inside i64.
const TRI_SMALL_LIMIT: i64 = 1 << 18;

impl TriangularCache {
    fn empty(dim: usize) -> Self {
        TriangularCache {
            dim,
            cols: Some(Vec::new()),
            pivots: Vec::new(),
            scratch: vec![0; dim],
            form: None,
        }
    }

    fn rebuild(&mut self, basis: &LatticeBasis) {
        self.cols = Some(Vec::new());
        self.form = None;
        self.pivots = basis
            .columns()
            .iter()
            .map(|c| c.iter().position(|x| !x.is_zero()).unwrap())
            .collect();
        let mut cols = Vec::with_capacity(basis.rank());
        for c in basis.columns() {
            let mut v = Vec::with_capacity(self.dim);
            for x in c {
                match x.to_i64() {
                    Some(y) if y.abs() < TRI_SMALL_LIMIT => v.push(y),
                    _ => {
                        self.cols = None;
                        return;
                    }
                }
            }
            cols.push(v);
        }
        if let Some(f) = prime_index_form(&cols, self.dim) {
            self.form = Some(f);
        }
        self.cols = Some(cols);
    }

    /// Fast exact membership when the cache is valid; `None` means caller
    /// must use the BigInt path. Intermediate values are bounded by
    /// `bound * limit^2 * dim`, far below i64 for cached entries.
    fn contains(&mut self, v: &[i64]) -> Option<bool> {
        if let Some((w, d)) = &self.form {
            if *d == 1 {
                return Some(true);
            }
            let dot: i64 = w.iter().zip(v).map(|(a, b)| a * b).sum();
            return Some(dot.rem_euclid(*d) == 0);
        }
        let cols = self.cols.as_ref()?;
        let w = &mut self.scratch;
        w.copy_from_slice(v);
        for (col, &pr) in cols.iter().zip(&self.pivots) {
            let lead = w[pr];
            if lead == 0 {
                continue;
            }
            let p = col[pr];
            if lead % p != 0 {
                return Some(false);
            }
            let q = lead / p;
            if q.abs() >= TRI_SMALL_LIMIT {
                return None;
            }
            for i in pr..self.dim {
                w[i] -= q * col[i];
            }
        }
        Some(w.iter().all(|&x| x == 0))
    }
}

/// For a full-rank lattice of index 1 or prime index `D` (given by its HNF
/// columns as a lower-triangular matrix), membership reduces to a single
/// congruence: any row `w` of `D * H^-1` that is nonzero mod `D` satisfies
/// `w . h = 0 mod D` for every column `h`, so its kernel contains the
/// lattice, and equal prime index forces equality.
fn prime_index_form(cols: &[Vec<i64>], dim: usize) -> Option<(Vec<i64>, i64)> {
    if cols.len() != dim || dim == 0 {
        return None;
    }
    let mut d: i128 = 1;
    for (j, col) in cols.iter().enumerate() {
        d = d.checked_mul(col[j] as i128)?;
    }
    let d = i64::try_from(d).ok()?;
    if d == 1 {
        return Some((vec![0; dim], 1));
    }
    if !crate::arith::is_prime_u64(u64::try_from(d).ok()?) || d >= TRI_SMALL_LIMIT {
        return None;
    }
    // Solve w_i . H = d * e_i backwards (H lower triangular); each row of
    // the adjugate-scaled inverse is integral.
    for i in 0..dim {
        let mut w = vec![0i128; dim];
        let mut ok = true;
        for j in (0..dim).rev() {
            let mut rhs: i128 = if i == j { d as i128 } else { 0 };
            for (r, wr) in w.iter().enumerate().skip(j + 1) {
                rhs -= wr * cols[j][r] as i128;
            }
            if rhs % cols[j][j] as i128 != 0 {
                ok = false;
                break;
            }
            w[j] = rhs / cols[j][j] as i128;
        }
        if !ok {
            continue;
        }
        let w: Vec<i64> = w
            .iter()
            .map(|&x| (x.rem_euclid(d as i128)) as i64)
            .collect();
        if w.iter().any(|&x| x != 0) {
            return Some((w, d));
        }
    }
    None
}

struct Search {
    n: usize,
    bound: i64,
    logs: Vec<f64>,
    args: Vec<f64>,
    log_tail: Vec<f64>,
    arg_tail: Vec<f64>,
    accepted: LatticeBasis,
    tri: TriangularCache,
    defining: IntPoly,
    distinct: Vec<RootEnclosure>,
    layout: Vec<usize>,
    digits: u32,
    v: Vec<i64>,
    tick: u32,
}

const RESIDUAL_TOL: f64 = 1e-7;

impl Search {
    /// Depth-first enumeration of vectors with exact L1 norm `budget`
    /// remaining, coordinates ascending (graded lexicographic overall).
    fn dfs(&mut self, k: usize, budget: i64, logsum: f64, argsum: f64) -> Result<()> {
        if k == self.n {
            if budget == 0 {
                self.leaf(logsum, argsum)?;
            }
            return Ok(());
        }
        if k + 2 == self.n {
            deadline::check_every(&mut self.tick, 4096)?;
        }
        // Remaining coordinates cannot absorb the budget.
        if budget > self.bound * (self.n - k) as i64 {
            return Ok(());
        }
        // Residual pruning: the rest of the vector cannot cancel the sums.
        if k > 0 {
            if logsum.abs() > self.log_tail[k] + RESIDUAL_TOL {
                return Ok(());
            }
            let wrapped = dist_to_multiple_of_2pi(argsum);
            if wrapped > self.arg_tail[k] + RESIDUAL_TOL {
                return Ok(());
            }
        }
        let m = self.bound.min(budget);
        for x in -m..=m {
            self.v[k] = x;
            self.dfs(
                k + 1,
                budget - x.abs(),
                logsum + x as f64 * self.logs[k],
                argsum + x as f64 * self.args[k],
            )?;
        }
        self.v[k] = 0;
        Ok(())
    }

    /// Iterative odometer over the whole box with incremental prefix sums
    /// and an unrolled innermost coordinate; candidates surviving the
    /// floating filter go through the same span skip and rigorous
    /// verification as the graded walk.
    fn lex_sweep(&mut self) -> Result<()> {
        let n = self.n;
        let b = self.bound;
        if n == 1 {
            for x in -b..=b {
                self.v[0] = x;
                self.leaf(x as f64 * self.logs[0], x as f64 * self.args[0])?;
            }
            return Ok(());
        }
        let last = n - 1;
        let (llog, larg) = (self.logs[last], self.args[last]);
        let mut v = vec![-b; last];
        let mut plog = vec![0.0f64; last + 1];
        let mut parg = vec![0.0f64; last + 1];
        for k in 0..last {
            plog[k + 1] = plog[k] + (-b) as f64 * self.logs[k];
            parg[k + 1] = parg[k] + (-b) as f64 * self.args[k];
        }
        let mut tick = 0u32;
        loop {
            let (pl, pa) = (plog[last], parg[last]);
            for x in -b..=b {
                let ls = pl + x as f64 * llog;
                let ar = pa + x as f64 * larg;
                if ls.abs() <= RESIDUAL_TOL && dist_to_multiple_of_2pi(ar) <= RESIDUAL_TOL {
                    self.v[..last].copy_from_slice(&v);
                    self.v[last] = x;
                    self.handle_candidate()?;
                }
            }
            deadline::check_every(&mut tick, 1 << 16)?;
            let mut k = last;
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                if v[k] < b {
                    v[k] += 1;
                    break;
                }
                v[k] = -b;
            }
            for i in k..last {
                plog[i + 1] = plog[i] + v[i] as f64 * self.logs[i];
                parg[i + 1] = parg[i] + v[i] as f64 * self.args[i];
            }
        }
    }

    fn leaf(&mut self, logsum: f64, argsum: f64) -> Result<()> {
        if logsum.abs() > RESIDUAL_TOL || dist_to_multiple_of_2pi(argsum) > RESIDUAL_TOL {
            return Ok(());
        }
        self.handle_candidate()
    }

    /// Span-skip plus rigorous verification of a filter-surviving candidate
    /// already stored in `self.v`.
    fn handle_candidate(&mut self) -> Result<()> {
        if self.v.iter().all(|&x| x == 0) {
            return Ok(());
        }
        // Span skip: products of accepted relations are relations.
        match self.tri.contains(&self.v) {
            Some(true) => return Ok(()),
            Some(false) => {}
            None => {
                let vb: Vec<BigInt> = self.v.iter().map(|&x| BigInt::from(x)).collect();
                if self.accepted.contains(&vb) {
                    return Ok(());
                }
            }
        }
        // Rigorous verification on the distinct roots (copies folded in).
        let mut folded = vec![0i64; self.distinct.len()];
        for (coord, &slot) in self.layout.iter().enumerate() {
            folded[slot] += self.v[coord];
        }
        let verdict = verify_relation(&self.defining, &mut self.distinct, &folded, self.digits)?;
        if verdict.holds() {
            let vb: Vec<BigInt> = self.v.iter().map(|&x| BigInt::from(x)).collect();
            self.accepted = self.accepted.join(&LatticeBasis::from_columns(self.n, vec![vb]));
            self.tri.rebuild(&self.accepted);
        }
        Ok(())
    }
}

fn dist_to_multiple_of_2pi(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = x - (x / tau).round() * tau;
    r.abs()
}
