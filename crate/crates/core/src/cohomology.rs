//! Second Hochschild cohomology of a finite-dimensional commutative Hopf
//! algebra with trivial coefficients, in two flavors: symmetric cochains on
//! the quotient S²(H⁺) and full cochains on (H⁺)⊗².
//!
//! Two independent routes are kept deliberately separate:
//!  * the cochain route (`second_cohomology`) materializes the degree-2
//!    differential as one batch matrix and reads cocycles, coboundaries and
//!    representatives off its reduced form;
//!  * the chain route (`mu_data`) accumulates the images of the degree-2
//!    boundary incrementally inside Ker of the induced multiplication,
//!    with the associativity bound as an early exit.
//! Their dimensions must agree (that equality is the duality check the
//! smoothness report records in `consistent`).

use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, RowSpan, Subspace};
use crate::hopf::{AugmentationIdeal, HopfTable};
use serde::{Deserialize, Serialize};

/// Hard cap on dim H⁺ for cohomology computations (the degree-2 boundary
/// has |H⁺|³ generating triples).
pub const MAX_PLUS_DIM: usize = 40;

/// Which degree-2 cochain space to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Cochains on the symmetric quotient S²(H⁺) (unordered pairs).
    Symmetric,
    /// Cochains on the full tensor square (H⁺)⊗².
    Full,
}

impl Flavor {
    pub fn token(self) -> &'static str {
        match self {
            Flavor::Symmetric => "symmetric",
            Flavor::Full => "full",
        }
    }

    pub fn parse_token(s: &str) -> Result<Self> {
        match s {
            "symmetric" | "sym" => Ok(Flavor::Symmetric),
            "full" => Ok(Flavor::Full),
            other => Err(Error::InvalidInput(format!("unknown flavor `{other}`"))),
        }
    }
}

/// Index arithmetic for the degree-2 chain space.
#[derive(Clone, Debug)]
pub struct PairIndexer {
    pub d: usize,
    pub flavor: Flavor,
    row_start: Vec<usize>,
}

impl PairIndexer {
    pub fn new(d: usize, flavor: Flavor) -> Self {
        let row_start = match flavor {
            Flavor::Symmetric => {
                let mut rs = Vec::with_capacity(d);
                let mut acc = 0usize;
                for i in 0..d {
                    rs.push(acc);
                    acc += d - i;
                }
                rs
            }
            Flavor::Full => (0..d).map(|i| i * d).collect(),
        };
        PairIndexer { d, flavor, row_start }
    }

    pub fn dim(&self) -> usize {
        match self.flavor {
            Flavor::Symmetric => self.d * (self.d + 1) / 2,
            Flavor::Full => self.d * self.d,
        }
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        match self.flavor {
            Flavor::Symmetric => {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                self.row_start[a] + (b - a)
            }
            Flavor::Full => i * self.d + j,
        }
    }

    pub fn decode(&self, idx: usize) -> (usize, usize) {
        match self.flavor {
            Flavor::Symmetric => {
                let mut i = 0;
                while i + 1 < self.d && self.row_start[i + 1] <= idx {
                    i += 1;
                }
                (i, i + (idx - self.row_start[i]))
            }
            Flavor::Full => (idx / self.d, idx % self.d),
        }
    }
}

/// The augmentation ideal H⁺ with its induced multiplication table
/// (a non-unital algebra: products of augmentation-ideal elements stay in
/// the ideal).
#[derive(Clone)]
pub struct PlusAlgebra<K: Field> {
    pub field: K,
    pub dim: usize,
    pub aug: AugmentationIdeal<K>,
    mult: Vec<K::Elem>,
}

impl<K: Field> PlusAlgebra<K> {
    pub fn new(h: &HopfTable<K>) -> Result<Self> {
        let f = h.field().clone();
        let aug = h.augmentation_ideal();
        let d = aug.dim;
        if d > MAX_PLUS_DIM {
            return Err(Error::TooLarge { dim: d, max: MAX_PLUS_DIM });
        }
        let dim_h = h.dim();
        let incl_col = |j: usize| -> Vec<K::Elem> {
            (0..dim_h).map(|r| aug.inclusion.get(r, j).clone()).collect()
        };
        let cols: Vec<Vec<K::Elem>> = (0..d).map(incl_col).collect();
        let mut mult = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                let prod = h.alg.mul_vec(&cols[i], &cols[j]);
                let coords = aug.projection.mul_vec(&prod)?;
                mult.extend(coords);
            }
        }
        Ok(PlusAlgebra { field: f, dim: d, aug, mult })
    }

    /// Coordinates of b_i · b_j in the H⁺ basis.
    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> &[K::Elem] {
        let base = (i * self.dim + j) * self.dim;
        &self.mult[base..base + self.dim]
    }

    /// Degree-1 differential as a matrix: entry [pair, u] is the
    /// coefficient of b_u in the product of the pair. Acting on a
    /// 1-cochain f it yields the 2-cochain (f ∘ multiplication); read as
    /// columns it is the induced multiplication pair-space → H⁺.
    pub fn d1_matrix(&self, pairs: &PairIndexer) -> Matrix<K> {
        let f = &self.field;
        let mut m = Matrix::zero(f.clone(), pairs.dim(), self.dim);
        for i in 0..self.dim {
            let js = match pairs.flavor {
                Flavor::Symmetric => i..self.dim,
                Flavor::Full => 0..self.dim,
            };
            for j in js {
                let r = pairs.index(i, j);
                for (u, c) in self.mul_basis(i, j).iter().enumerate() {
                    if !f.is_zero(c) {
                        m.set(r, u, c.clone());
                    }
                }
            }
        }
        m
    }

    /// Write the degree-2 boundary of the triple (a, b, c) — the pair-space
    /// vector (ab)⊙c − a⊙(bc) — into `row` (not cleared first).
    pub fn add_delta2_row(&self, pairs: &PairIndexer, a: usize, b: usize, c: usize, row: &mut [K::Elem]) {
        let f = &self.field;
        for (u, cu) in self.mul_basis(a, b).iter().enumerate() {
            if !f.is_zero(cu) {
                let idx = pairs.index(u, c);
                row[idx] = f.add(&row[idx], cu);
            }
        }
        for (u, cu) in self.mul_basis(b, c).iter().enumerate() {
            if !f.is_zero(cu) {
                let idx = pairs.index(a, u);
                row[idx] = f.sub(&row[idx], cu);
            }
        }
    }

    /// Iterate the generating triples for the degree-2 boundary. In the
    /// symmetric flavor the boundary of (c, b, a) is the negative of the
    /// boundary of (a, b, c), so triples with a ≤ c suffice.
    pub fn for_each_triple<Fn0: FnMut(usize, usize, usize) -> bool>(
        &self,
        flavor: Flavor,
        mut visit: Fn0,
    ) {
        let d = self.dim;
        for a in 0..d {
            let c_lo = match flavor {
                Flavor::Symmetric => a,
                Flavor::Full => 0,
            };
            for c in c_lo..d {
                for b in 0..d {
                    if !visit(a, b, c) {
                        return;
                    }
                }
            }
        }
    }
}

/// Result of the chain-side route: kernel of the induced multiplication
/// and the accumulated image of the degree-2 boundary inside it.
#[derive(Clone, Debug)]
pub struct MuData<K: Field> {
    pub flavor: Flavor,
    pub plus_dim: usize,
    pub pair_dim: usize,
    pub ker_delta1: Subspace<K>,
    pub im_delta2: Subspace<K>,
    /// dim Ker δ₁ − dim Im δ₂.
    pub ker_mu_dim: usize,
    /// True when the image saturated the associativity bound before all
    /// triples were visited.
    pub early_exit: bool,
}

pub fn mu_data<K: Field>(h: &HopfTable<K>, flavor: Flavor) -> Result<MuData<K>> {
    let plus = PlusAlgebra::new(h)?;
    mu_data_from_plus(&plus, flavor)
}

pub fn mu_data_from_plus<K: Field>(plus: &PlusAlgebra<K>, flavor: Flavor) -> Result<MuData<K>> {
    let f = plus.field.clone();
    let d = plus.dim;
    let pairs = PairIndexer::new(d, flavor);
    let pair_dim = pairs.dim();
    // kernel of the induced multiplication, as a map pair-space → H⁺
    let mu_map = plus.d1_matrix(&pairs).transpose();
    let ker_delta1 = mu_map.kernel_basis();
    let bound = ker_delta1.dim();

    let mut span = RowSpan::new(f.clone(), pair_dim);
    let mut early_exit = false;
    let mut row = vec![f.zero(); pair_dim];
    plus.for_each_triple(flavor, |a, b, c| {
        for v in row.iter_mut() {
            *v = f.zero();
        }
        plus.add_delta2_row(&pairs, a, b, c, &mut row);
        if row.iter().any(|v| !f.is_zero(v)) {
            span.insert(row.clone());
        }
        if span.rank() >= bound {
            early_exit = true;
            return false;
        }
        true
    });
    let im_delta2 = span.into_subspace();
    let ker_mu_dim = bound - im_delta2.dim();
    Ok(MuData {
        flavor,
        plus_dim: d,
        pair_dim,
        ker_delta1,
        im_delta2,
        ker_mu_dim,
        early_exit,
    })
}

/// Result of the cochain-side route.
#[derive(Clone, Debug)]
pub struct CohomologyData<K: Field> {
    pub flavor: Flavor,
    pub plus_dim: usize,
    /// dim of the degree-2 cochain space.
    pub pair_dim: usize,
    /// Degree-1 differential matrix (pair_dim × plus_dim).
    pub d1: Matrix<K>,
    pub rank_d1: usize,
    /// Coboundary space B² = image of d¹ inside the cochain space.
    pub coboundaries: Subspace<K>,
    /// Cocycle space Z² = kernel of d².
    pub cocycles: Subspace<K>,
    /// Cocycle representatives spanning Z² modulo B², each reduced against
    /// the coboundary echelon.
    pub representatives: Vec<Vec<K::Elem>>,
    pub h2_dim: usize,
}

pub fn second_cohomology<K: Field>(h: &HopfTable<K>, flavor: Flavor) -> Result<CohomologyData<K>> {
    let plus = PlusAlgebra::new(h)?;
    second_cohomology_from_plus(&plus, flavor)
}

pub fn second_cohomology_from_plus<K: Field>(
    plus: &PlusAlgebra<K>,
    flavor: Flavor,
) -> Result<CohomologyData<K>> {
    let f = plus.field.clone();
    let d = plus.dim;
    let pairs = PairIndexer::new(d, flavor);
    let pair_dim = pairs.dim();
    let d1 = plus.d1_matrix(&pairs);
    let coboundaries = d1.column_space();
    let rank_d1 = coboundaries.dim();

    // batch-reduce the full stack of degree-2 boundary rows
    let mut rows: Vec<Vec<K::Elem>> = Vec::new();
    let mut scratch = vec![f.zero(); pair_dim];
    plus.for_each_triple(flavor, |a, b, c| {
        for v in scratch.iter_mut() {
            *v = f.zero();
        }
        plus.add_delta2_row(&pairs, a, b, c, &mut scratch);
        if scratch.iter().any(|v| !f.is_zero(v)) {
            rows.push(scratch.clone());
        }
        true
    });
    let cocycles = if rows.is_empty() {
        Subspace::full_space(f.clone(), pair_dim)
    } else {
        let mut big = Matrix::from_rows(f.clone(), rows)?;
        let pivots = big.rref_in_place();
        let rank = pivots.len();
        let mut compact = Matrix::zero(f.clone(), rank, pair_dim);
        for r in 0..rank {
            for (j, v) in big.row(r).iter().enumerate() {
                if !f.is_zero(v) {
                    compact.set(r, j, v.clone());
                }
            }
        }
        compact.kernel_basis()
    };

    // representatives: cocycle basis reduced modulo the coboundary echelon
    let mut span = RowSpan::new(f.clone(), pair_dim);
    for i in 0..coboundaries.dim() {
        span.insert(coboundaries.basis_row(i).to_vec());
    }
    let mut representatives = Vec::new();
    for i in 0..cocycles.dim() {
        let mut v = cocycles.basis_row(i).to_vec();
        span.reduce_in_place(&mut v);
        if v.iter().any(|x| !f.is_zero(x)) {
            representatives.push(v.clone());
            span.insert(v);
        }
    }
    let h2_dim = cocycles.dim() - rank_d1;
    debug_assert_eq!(h2_dim, representatives.len());
    Ok(CohomologyData {
        flavor,
        plus_dim: d,
        pair_dim,
        d1,
        rank_d1,
        coboundaries,
        cocycles,
        representatives,
        h2_dim,
    })
}

/// First triple (a, b, c) on which the 2-cochain fails the cocycle
/// condition s(ab ⊙ c) = s(a ⊙ bc), or None if it is a cocycle.
pub fn cocycle_failure<K: Field>(
    plus: &PlusAlgebra<K>,
    flavor: Flavor,
    s: &[K::Elem],
) -> Option<(usize, usize, usize)> {
    let f = &plus.field;
    let pairs = PairIndexer::new(plus.dim, flavor);
    let mut row = vec![f.zero(); pairs.dim()];
    let mut bad = None;
    plus.for_each_triple(flavor, |a, b, c| {
        for v in row.iter_mut() {
            *v = f.zero();
        }
        plus.add_delta2_row(&pairs, a, b, c, &mut row);
        let mut acc = f.zero();
        for (rv, sv) in row.iter().zip(s.iter()) {
            if !f.is_zero(rv) && !f.is_zero(sv) {
                acc = f.add(&acc, &f.mul(rv, sv));
            }
        }
        if !f.is_zero(&acc) {
            bad = Some((a, b, c));
            return false;
        }
        true
    });
    bad
}

/// A 1-cochain f with d¹f = s1 − s2, if the two cocycles are cohomologous.
pub fn cohomologous<K: Field>(
    coh: &CohomologyData<K>,
    s1: &[K::Elem],
    s2: &[K::Elem],
) -> Result<Option<Vec<K::Elem>>> {
    let f = coh.d1.field();
    if s1.len() != coh.pair_dim || s2.len() != coh.pair_dim {
        return Err(Error::DimensionMismatch { expected: coh.pair_dim, got: s1.len().max(s2.len()) });
    }
    let diff: Vec<K::Elem> = s1.iter().zip(s2.iter()).map(|(a, b)| f.sub(a, b)).collect();
    match coh.d1.solve(&diff) {
        Ok(sol) => Ok(Some(sol)),
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Coordinates of the class of cocycle `z` in the representative basis,
/// or None when `z` is not a cocycle (not in Z² = span(reps) + B²).
pub fn class_coordinates<K: Field>(
    coh: &CohomologyData<K>,
    z: &[K::Elem],
) -> Result<Option<Vec<K::Elem>>> {
    let f = coh.d1.field().clone();
    let r = coh.representatives.len();
    let b = coh.coboundaries.dim();
    let mut m = Matrix::zero(f.clone(), coh.pair_dim, r + b);
    for (j, rep) in coh.representatives.iter().enumerate() {
        for (i, v) in rep.iter().enumerate() {
            if !f.is_zero(v) {
                m.set(i, j, v.clone());
            }
        }
    }
    for jb in 0..b {
        for (i, v) in coh.coboundaries.basis_row(jb).iter().enumerate() {
            if !f.is_zero(v) {
                m.set(i, r + jb, v.clone());
            }
        }
    }
    match m.solve(z) {
        Ok(sol) => Ok(Some(sol[..r].to_vec())),
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Ker of the induced multiplication vanishes (chain-side verdict).
pub fn condition_kernel_mu<K: Field>(h: &HopfTable<K>) -> Result<bool> {
    Ok(mu_data(h, Flavor::Symmetric)?.ker_mu_dim == 0)
}

/// The algebra is reduced (zero nilradical).
pub fn condition_reduced<K: Field>(h: &HopfTable<K>) -> Result<bool> {
    Ok(h.alg.nilradical()?.dim() == 0)
}

/// Frobenius is injective; None over characteristic 0 where the verdict
/// does not apply.
pub fn condition_frobenius_injective<K: Field>(h: &HopfTable<K>) -> Result<Option<bool>> {
    if h.field().characteristic() == 0 {
        return Ok(None);
    }
    let frob = h.alg.frobenius_matrix()?;
    Ok(Some(frob.rank() == h.dim()))
}

/// Combined smoothness verdicts plus the cohomological dimensions, with a
/// cross-route consistency flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub condition_d: bool,
    pub condition_e: bool,
    pub condition_f: Option<bool>,
    pub h2s_dim: usize,
    pub h2_full_dim: usize,
    pub ker_mu_dim: usize,
    pub consistent: bool,
}

pub fn smoothness_report<K: Field>(h: &HopfTable<K>) -> Result<SmoothnessReport> {
    let plus = PlusAlgebra::new(h)?;
    let sym = second_cohomology_from_plus(&plus, Flavor::Symmetric)?;
    let full = second_cohomology_from_plus(&plus, Flavor::Full)?;
    let mu = mu_data_from_plus(&plus, Flavor::Symmetric)?;
    let condition_d = mu.ker_mu_dim == 0;
    let condition_e = condition_reduced(h)?;
    let condition_f = condition_frobenius_injective(h)?;
    let vanishing = sym.h2_dim == 0;
    let mut verdicts = vec![condition_d, condition_e, vanishing];
    if let Some(fv) = condition_f {
        verdicts.push(fv);
    }
    let agree = verdicts.iter().all(|&v| v == verdicts[0]);
    let consistent = agree && sym.h2_dim == mu.ker_mu_dim;
    Ok(SmoothnessReport {
        condition_d,
        condition_e,
        condition_f,
        h2s_dim: sym.h2_dim,
        h2_full_dim: full.h2_dim,
        ker_mu_dim: mu.ker_mu_dim,
        consistent,
    })
}

/// Restriction of 2-cochains along a Hopf algebra inclusion J → H.
#[derive(Clone, Debug)]
pub struct RestrictionData<K: Field> {
    /// H⁺ coordinates of the image of each J⁺ basis vector
    /// (dim H⁺ × dim J⁺).
    pub plus_map: Matrix<K>,
    /// Pullback on degree-2 cochains (pair_dim(J) × pair_dim(H)):
    /// a cochain on H restricts to `pullback · s`.
    pub pullback: Matrix<K>,
    pub flavor: Flavor,
}

pub fn restriction_data<K: Field>(
    h: &HopfTable<K>,
    j: &HopfTable<K>,
    inclusion: &Matrix<K>,
    flavor: Flavor,
) -> Result<RestrictionData<K>> {
    let f = h.field().clone();
    if inclusion.rows() != h.dim() || inclusion.cols() != j.dim() {
        return Err(Error::ShapeMismatch(format!(
            "inclusion is {}x{}, expected {}x{}",
            inclusion.rows(),
            inclusion.cols(),
            h.dim(),
            j.dim()
        )));
    }
    let aug_h = h.augmentation_ideal();
    let aug_j = j.augmentation_ideal();
    let plus_map = aug_h.projection.mul(inclusion)?.mul(&aug_j.inclusion)?;
    let dh = aug_h.dim;
    let dj = aug_j.dim;
    let pairs_h = PairIndexer::new(dh, flavor);
    let pairs_j = PairIndexer::new(dj, flavor);
    let mut pullback = Matrix::zero(f.clone(), pairs_j.dim(), pairs_h.dim());
    for a in 0..dj {
        let b_lo = match flavor {
            Flavor::Symmetric => a,
            Flavor::Full => 0,
        };
        for b in b_lo..dj {
            let r = pairs_j.index(a, b);
            for u in 0..dh {
                let cu = plus_map.get(u, a);
                if f.is_zero(cu) {
                    continue;
                }
                for v in 0..dh {
                    let cv = plus_map.get(v, b);
                    if f.is_zero(cv) {
                        continue;
                    }
                    let idx = pairs_h.index(u, v);
                    let add = f.mul(cu, cv);
                    let cur = pullback.get(r, idx).clone();
                    pullback.set(r, idx, f.add(&cur, &add));
                }
            }
        }
    }
    Ok(RestrictionData { plus_map, pullback, flavor })
}

/// Matrix of the induced map on second cohomology, target classes ×
/// source classes: column i holds the class coordinates of the pullback
/// of the i-th source representative.
pub fn induced_class_map<K: Field>(
    res: &RestrictionData<K>,
    source: &CohomologyData<K>,
    target: &CohomologyData<K>,
) -> Result<Matrix<K>> {
    if source.flavor != res.flavor || target.flavor != res.flavor {
        return Err(Error::ShapeMismatch("restriction and cohomology flavors differ".into()));
    }
    let f = res.pullback.field().clone();
    let mut m = Matrix::zero(f.clone(), target.h2_dim, source.h2_dim);
    for (col, rep) in source.representatives.iter().enumerate() {
        let pulled = res.pullback.mul_vec(rep)?;
        let coords = class_coordinates(target, &pulled)?.ok_or_else(|| {
            Error::ShapeMismatch("pullback of a cocycle failed the cocycle test".into())
        })?;
        for (i, v) in coords.iter().enumerate() {
            if !f.is_zero(v) {
                m.set(i, col, v.clone());
            }
        }
    }
    Ok(m)
}
