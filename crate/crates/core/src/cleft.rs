//! Cleft extensions of a commutative Hopf algebra H by the dual numbers
//! k[τ] (τ² = 0), and the exact correspondence between such extensions and
//! symmetric 2-cocycles on H⁺.
//!
//! A cleft extension is carried as an algebra A of dimension 2·dim H with
//! an H-comodule-algebra structure, a colinear unital section φ: H → A and
//! the multiplication-by-τ operator. Building an extension from a cocycle
//! is the twisted product; extracting the cocycle inverts it relative to
//! the stored section, using the counit to collapse the twisting term.

use crate::algebra::{
    dual_chained_power_table, dual_group_table, AlgebraTable, AugmentedAlgebra, MAX_TABLE_DIM,
};
use crate::cohomology::{cocycle_failure, Flavor, PairIndexer, PlusAlgebra};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::hopf::{chained_power_hopf, group_hopf, CoproductTerms, HopfTable, NormalizedSubgroup};

/// The dual numbers k[τ]/(τ²) with basis {1, τ}.
pub fn dual_numbers<K: Field>(field: &K) -> Result<AlgebraTable<K>> {
    let f = field.clone();
    let mut mult = vec![f.zero(); 8];
    mult[0] = f.one(); // 1·1 = 1
    mult[0 * 4 + 1 * 2 + 1] = f.one(); // 1·τ = τ
    mult[1 * 4 + 0 * 2 + 1] = f.one(); // τ·1 = τ
    AlgebraTable::from_structure_constants(f, vec!["1".into(), "tau".into()], {
        let mut u = vec![field.zero(); 2];
        u[0] = field.one();
        u
    }, mult)
}

/// A symmetric 2-cochain on H⁺ in unordered-pair coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricCocycle<K: Field> {
    pub plus_dim: usize,
    /// Length plus_dim·(plus_dim+1)/2, indexed by `PairIndexer::Symmetric`.
    pub values: Vec<K::Elem>,
}

impl<K: Field> SymmetricCocycle<K> {
    pub fn new(plus_dim: usize, values: Vec<K::Elem>) -> Result<Self> {
        let want = plus_dim * (plus_dim + 1) / 2;
        if values.len() != want {
            return Err(Error::DimensionMismatch { expected: want, got: values.len() });
        }
        Ok(SymmetricCocycle { plus_dim, values })
    }

    /// The symmetric matrix of values on H⁺ × H⁺.
    pub fn matrix(&self, field: &K) -> Matrix<K> {
        let pairs = PairIndexer::new(self.plus_dim, Flavor::Symmetric);
        let mut m = Matrix::zero(field.clone(), self.plus_dim, self.plus_dim);
        for i in 0..self.plus_dim {
            for j in 0..self.plus_dim {
                m.set(i, j, self.values[pairs.index(i, j)].clone());
            }
        }
        m
    }
}

/// Check the cocycle identity; reports the first failing triple.
pub fn validate_symmetric_cocycle<K: Field>(
    plus: &PlusAlgebra<K>,
    s: &SymmetricCocycle<K>,
) -> Result<()> {
    if s.plus_dim != plus.dim {
        return Err(Error::DimensionMismatch { expected: plus.dim, got: s.plus_dim });
    }
    if let Some((a, b, c)) = cocycle_failure(plus, Flavor::Symmetric, &s.values) {
        return Err(Error::BadCocycle(format!(
            "cocycle identity fails at basis triple ({a}, {b}, {c})"
        )));
    }
    Ok(())
}

/// A cleft extension of H by the dual numbers.
#[derive(Clone)]
pub struct CleftExtension<K: Field> {
    pub hopf: HopfTable<K>,
    /// The carrier algebra A (dimension 2·dim H) with its augmentation.
    pub carrier: AugmentedAlgebra<K>,
    /// Coaction ρ: A → A ⊗ H as sparse triples (coeff, A-index, H-index).
    pub coaction: Vec<CoproductTerms<K>>,
    /// Colinear unital section φ: H → A (dim A × dim H).
    pub section: Matrix<K>,
    /// Multiplication by τ on A (dim A × dim A).
    pub tau_action: Matrix<K>,
}

impl<K: Field> std::fmt::Debug for CleftExtension<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CleftExtension(H dim {}, carrier dim {})", self.hopf.dim(), self.carrier.alg.dim())
    }
}

impl<K: Field> CleftExtension<K> {
    pub fn carrier_dim(&self) -> usize {
        self.carrier.alg.dim()
    }

    /// Full structural validation: comodule-algebra axioms, section
    /// properties, τ behavior, two-dimensional coinvariants and the
    /// normal-basis (cleftness) condition.
    pub fn validate(&self) -> Result<()> {
        let f = self.hopf.field().clone();
        let a = &self.carrier.alg;
        let h = &self.hopf;
        let da = a.dim();
        let dh = h.dim();
        if self.coaction.len() != da {
            return Err(Error::DimensionMismatch { expected: da, got: self.coaction.len() });
        }
        if self.section.rows() != da || self.section.cols() != dh {
            return Err(Error::ShapeMismatch(format!(
                "section is {}x{}, expected {da}x{dh}",
                self.section.rows(),
                self.section.cols()
            )));
        }
        if self.tau_action.rows() != da || self.tau_action.cols() != da {
            return Err(Error::ShapeMismatch("tau action must be square on A".into()));
        }
        for terms in &self.coaction {
            for (_, ai, hi) in terms {
                if *ai >= da || *hi >= dh {
                    return Err(Error::InvalidInput("coaction index out of range".into()));
                }
            }
        }

        // (id ⊗ ε)ρ = id
        for r in 0..da {
            let mut acc = vec![f.zero(); da];
            for (c, ai, hi) in &self.coaction[r] {
                acc[*ai] = f.add(&acc[*ai], &f.mul(c, &h.counit[*hi]));
            }
            for t in 0..da {
                let want = if t == r { f.one() } else { f.zero() };
                if acc[t] != want {
                    return Err(Error::InvalidInput(format!(
                        "coaction counit law fails on carrier basis {r}"
                    )));
                }
            }
        }

        // comodule coassociativity: (ρ⊗id)ρ = (id⊗Δ)ρ
        for r in 0..da {
            let mut lhs: Vec<((usize, usize, usize), K::Elem)> = Vec::new();
            let mut rhs: Vec<((usize, usize, usize), K::Elem)> = Vec::new();
            for (c, ai, hi) in &self.coaction[r] {
                for (c2, aj, hj) in &self.coaction[*ai] {
                    lhs.push(((*aj, *hj, *hi), f.mul(c, c2)));
                }
                for (c2, h1, h2) in &h.coproduct[*hi] {
                    rhs.push(((*ai, *h1, *h2), f.mul(c, c2)));
                }
            }
            canonical_merge(&f, &mut lhs);
            canonical_merge(&f, &mut rhs);
            if lhs != rhs {
                return Err(Error::InvalidInput(format!(
                    "coaction coassociativity fails on carrier basis {r}"
                )));
            }
        }

        // ρ is an algebra map on basis pairs, and ρ(1) = 1⊗1
        for r1 in 0..da {
            for r2 in 0..da {
                let mut lhs: Vec<((usize, usize), K::Elem)> = Vec::new();
                let mut rhs: Vec<((usize, usize), K::Elem)> = Vec::new();
                for (u, cu) in a.mul_basis(r1, r2).iter().enumerate() {
                    if f.is_zero(cu) {
                        continue;
                    }
                    for (c, ai, hi) in &self.coaction[u] {
                        lhs.push(((*ai, *hi), f.mul(cu, c)));
                    }
                }
                for (c1, a1, h1) in &self.coaction[r1] {
                    for (c2, a2, h2) in &self.coaction[r2] {
                        let c = f.mul(c1, c2);
                        for (u, cu) in a.mul_basis(*a1, *a2).iter().enumerate() {
                            if f.is_zero(cu) {
                                continue;
                            }
                            let cc = f.mul(&c, cu);
                            for (v, cv) in h.alg.mul_basis(*h1, *h2).iter().enumerate() {
                                if f.is_zero(cv) {
                                    continue;
                                }
                                rhs.push(((u, v), f.mul(&cc, cv)));
                            }
                        }
                    }
                }
                canonical_merge(&f, &mut lhs);
                canonical_merge(&f, &mut rhs);
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!(
                        "coaction is not multiplicative at carrier pair ({r1}, {r2})"
                    )));
                }
            }
        }
        {
            let mut img: Vec<((usize, usize), K::Elem)> = Vec::new();
            for (r, cr) in a.unit().iter().enumerate() {
                if f.is_zero(cr) {
                    continue;
                }
                for (c, ai, hi) in &self.coaction[r] {
                    img.push(((*ai, *hi), f.mul(cr, c)));
                }
            }
            let mut want: Vec<((usize, usize), K::Elem)> = Vec::new();
            for (i, ci) in a.unit().iter().enumerate() {
                if f.is_zero(ci) {
                    continue;
                }
                for (j, cj) in h.alg.unit().iter().enumerate() {
                    if !f.is_zero(cj) {
                        want.push(((i, j), f.mul(ci, cj)));
                    }
                }
            }
            canonical_merge(&f, &mut img);
            canonical_merge(&f, &mut want);
            if img != want {
                return Err(Error::InvalidInput("coaction of the unit is not 1⊗1".into()));
            }
        }

        // section: unital, colinear, augmentation-compatible
        let unit_a = a.unit().to_vec();
        let phi_unit = self.section.mul_vec(h.alg.unit())?;
        if phi_unit != unit_a {
            return Err(Error::InvalidInput("section does not preserve the unit".into()));
        }
        for m in 0..dh {
            let col: Vec<K::Elem> = (0..da).map(|r| self.section.get(r, m).clone()).collect();
            let mut lhs: Vec<((usize, usize), K::Elem)> = Vec::new();
            for (r, cr) in col.iter().enumerate() {
                if f.is_zero(cr) {
                    continue;
                }
                for (c, ai, hi) in &self.coaction[r] {
                    lhs.push(((*ai, *hi), f.mul(cr, c)));
                }
            }
            let mut rhs: Vec<((usize, usize), K::Elem)> = Vec::new();
            for (c, h1, h2) in &h.coproduct[m] {
                for r in 0..da {
                    let v = self.section.get(r, *h1);
                    if !f.is_zero(v) {
                        rhs.push(((r, *h2), f.mul(c, v)));
                    }
                }
            }
            canonical_merge(&f, &mut lhs);
            canonical_merge(&f, &mut rhs);
            if lhs != rhs {
                return Err(Error::InvalidInput(format!(
                    "section is not colinear at basis element {m}"
                )));
            }
            let eps_a = self.carrier.counit_of(&col);
            if eps_a != h.counit[m] {
                return Err(Error::InvalidInput(format!(
                    "section does not intertwine the augmentations at basis element {m}"
                )));
            }
        }

        // τ: square zero, correct action matrix, coinvariant
        let tau = self.tau_action.mul_vec(&unit_a)?;
        if !a.mul_vec(&tau, &tau).iter().all(|v| f.is_zero(v)) {
            return Err(Error::InvalidInput("τ² is not zero".into()));
        }
        if a.left_mult_matrix(&tau) != self.tau_action {
            return Err(Error::InvalidInput(
                "tau action does not match multiplication by τ·1".into(),
            ));
        }

        // coinvariants = k·1 ⊕ k·τ exactly
        let mut lmap = Matrix::zero(f.clone(), da * dh, da);
        for r in 0..da {
            for (c, ai, hi) in &self.coaction[r] {
                let cur = lmap.get(*ai * dh + *hi, r).clone();
                lmap.set(*ai * dh + *hi, r, f.add(&cur, c));
            }
            // subtract r ⊗ 1
            for (j, cj) in h.alg.unit().iter().enumerate() {
                if f.is_zero(cj) {
                    continue;
                }
                let cur = lmap.get(r * dh + j, r).clone();
                lmap.set(r * dh + j, r, f.sub(&cur, cj));
            }
        }
        let coinv = lmap.kernel_basis();
        if coinv.dim() != 2 {
            return Err(Error::InvalidInput(format!(
                "coinvariants have dimension {}, expected 2",
                coinv.dim()
            )));
        }
        if !coinv.contains(&unit_a) || !coinv.contains(&tau) {
            return Err(Error::InvalidInput(
                "coinvariants do not contain the unit and τ".into(),
            ));
        }

        // normal-basis condition: {φ(e_m), τφ(e_m)} is a basis of A
        let psi = self.normal_basis_matrix()?;
        if psi.rank() != da {
            return Err(Error::InvalidInput(
                "section does not give a normal basis over the dual numbers".into(),
            ));
        }
        Ok(())
    }

    /// The square matrix with columns φ(e_0), …, φ(e_{dh−1}),
    /// τφ(e_0), …, τφ(e_{dh−1}).
    pub fn normal_basis_matrix(&self) -> Result<Matrix<K>> {
        let f = self.hopf.field().clone();
        let da = self.carrier_dim();
        let dh = self.hopf.dim();
        let tau_phi = self.tau_action.mul(&self.section)?;
        let mut psi = Matrix::zero(f.clone(), da, 2 * dh);
        for m in 0..dh {
            for r in 0..da {
                let v = self.section.get(r, m);
                if !f.is_zero(v) {
                    psi.set(r, m, v.clone());
                }
                let w = tau_phi.get(r, m);
                if !f.is_zero(w) {
                    psi.set(r, dh + m, w.clone());
                }
            }
        }
        Ok(psi)
    }

    /// Replace the section by φ'(h) = φ(h) + f̃(h₍₁₎)·τφ(h₍₂₎) where f̃ is
    /// the given 1-cochain on H⁺ precomposed with the canonical projection.
    /// The new section is again colinear and unital, so the result is the
    /// same extension presented relative to a shifted section.
    pub fn with_shifted_section(&self, f_plus: &[K::Elem]) -> Result<CleftExtension<K>> {
        let f = self.hopf.field().clone();
        let aug = self.hopf.augmentation_ideal();
        if f_plus.len() != aug.dim {
            return Err(Error::DimensionMismatch { expected: aug.dim, got: f_plus.len() });
        }
        let dh = self.hopf.dim();
        let da = self.carrier_dim();
        // f̃(e_a) = Σ_u f_plus[u]·projection[u, a]
        let ftilde: Vec<K::Elem> = (0..dh)
            .map(|a| {
                let mut acc = f.zero();
                for (u, fv) in f_plus.iter().enumerate() {
                    if !f.is_zero(fv) {
                        acc = f.add(&acc, &f.mul(fv, aug.projection.get(u, a)));
                    }
                }
                acc
            })
            .collect();
        let tau_phi = self.tau_action.mul(&self.section)?;
        let mut section = self.section.clone();
        for m in 0..dh {
            for (c, h1, h2) in &self.hopf.coproduct[m] {
                let coeff = f.mul(c, &ftilde[*h1]);
                if f.is_zero(&coeff) {
                    continue;
                }
                for r in 0..da {
                    let add = f.mul(&coeff, tau_phi.get(r, *h2));
                    if !f.is_zero(&add) {
                        let cur = section.get(r, m).clone();
                        section.set(r, m, f.add(&cur, &add));
                    }
                }
            }
        }
        Ok(CleftExtension { section, ..self.clone() })
    }
}

fn canonical_merge<Key: Ord + Copy, K: Field>(f: &K, terms: &mut Vec<(Key, K::Elem)>) {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(Key, K::Elem)> = Vec::with_capacity(terms.len());
    for (key, c) in terms.drain(..) {
        match out.last_mut() {
            Some((lk, lc)) if *lk == key => *lc = f.add(lc, &c),
            _ => out.push((key, c)),
        }
    }
    out.retain(|(_, c)| !f.is_zero(c));
    *terms = out;
}

/// Extend a cocycle on H⁺ to the normalized bilinear table on all of H
/// (zero against the unit): s̃ = Pᵀ·S⁺·P with P the augmentation
/// projection. Entry (i, j) is the cocycle's value on the basis monomial
/// pair (e_i, e_j), independent of the internal H⁺ coordinate choice.
pub fn monomial_cocycle_matrix<K: Field>(
    h: &HopfTable<K>,
    s: &SymmetricCocycle<K>,
) -> Result<Matrix<K>> {
    let f = h.field().clone();
    let aug = h.augmentation_ideal();
    if s.plus_dim != aug.dim {
        return Err(Error::DimensionMismatch { expected: aug.dim, got: s.plus_dim });
    }
    aug.projection.transpose().mul(&s.matrix(&f))?.mul(&aug.projection)
}

/// Build the crossed product k[τ] #_s H for a symmetric 2-cocycle s on H⁺.
/// Carrier basis: index δ·dim H + m stands for τ^δ ⊗ e_m. The cocycle is
/// validated first; carrier construction re-checks associativity, which is
/// exactly the cocycle identity.
pub fn crossed_product_from_cocycle<K: Field>(
    h: &HopfTable<K>,
    s: &SymmetricCocycle<K>,
) -> Result<CleftExtension<K>> {
    let f = h.field().clone();
    let plus = PlusAlgebra::new(h)?;
    validate_symmetric_cocycle(&plus, s)?;
    let dh = h.dim();
    let da = 2 * dh;
    if da > MAX_TABLE_DIM {
        return Err(Error::TooLarge { dim: da, max: MAX_TABLE_DIM });
    }

    let sh = monomial_cocycle_matrix(h, s)?;

    let labels_h = h.alg.labels();
    let mut labels = labels_h.to_vec();
    for l in labels_h {
        labels.push(if l == "1" { "tau".to_string() } else { format!("tau*{l}") });
    }
    let mut unit = vec![f.zero(); da];
    for (m, c) in h.alg.unit().iter().enumerate() {
        unit[m] = c.clone();
    }

    let mut mult = vec![f.zero(); da * da * da];
    {
        let mut set_block = |r1: usize, r2: usize, delta: usize, coords: &[K::Elem]| {
            let base = (r1 * da + r2) * da + delta * dh;
            for (u, c) in coords.iter().enumerate() {
                if !f.is_zero(c) {
                    mult[base + u] = f.add(&mult[base + u], c);
                }
            }
        };
        for i in 0..dh {
            for j in 0..dh {
                // (1⊗e_i)(1⊗e_j) = 1⊗e_ie_j + Σ s̃(e_i₍₁₎, e_j₍₁₎) τ⊗e_i₍₂₎e_j₍₂₎
                set_block(i, j, 0, h.alg.mul_basis(i, j));
                for (c1, a, b) in &h.coproduct[i] {
                    for (c2, x, y) in &h.coproduct[j] {
                        let sv = sh.get(*a, *x);
                        if f.is_zero(sv) {
                            continue;
                        }
                        let coeff = f.mul(&f.mul(c1, c2), sv);
                        let prod = h.alg.mul_basis(*b, *y);
                        let scaled: Vec<K::Elem> = prod.iter().map(|v| f.mul(&coeff, v)).collect();
                        set_block(i, j, 1, &scaled);
                    }
                }
                // (τ⊗e_i)(1⊗e_j) = (1⊗e_i)(τ⊗e_j) = τ⊗e_ie_j; (τ·)(τ·) = 0
                set_block(dh + i, j, 1, h.alg.mul_basis(i, j));
                set_block(i, dh + j, 1, h.alg.mul_basis(i, j));
            }
        }
    }
    let alg = AlgebraTable::from_structure_constants(f.clone(), labels, unit, mult).map_err(
        |e| match e {
            Error::NotAssociative { i, j, k } => Error::BadCocycle(format!(
                "carrier fails associativity at basis triple ({i}, {j}, {k})"
            )),
            other => other,
        },
    )?;
    let mut counit = vec![f.zero(); da];
    for m in 0..dh {
        counit[m] = h.counit[m].clone();
    }
    let carrier = AugmentedAlgebra::new_checked(alg, counit)?;

    let mut coaction = Vec::with_capacity(da);
    for delta in 0..2 {
        for m in 0..dh {
            let terms: CoproductTerms<K> = h.coproduct[m]
                .iter()
                .map(|(c, a, b)| (c.clone(), delta * dh + *a, *b))
                .collect();
            coaction.push(terms);
        }
    }
    let mut section = Matrix::zero(f.clone(), da, dh);
    for m in 0..dh {
        section.set(m, m, f.one());
    }
    let mut tau_action = Matrix::zero(f.clone(), da, da);
    for m in 0..dh {
        tau_action.set(dh + m, m, f.one());
    }
    Ok(CleftExtension { hopf: h.clone(), carrier, coaction, section, tau_action })
}

/// Recover the symmetric 2-cocycle on H⁺ presented by the stored section:
/// decompose φ(e_i)φ(e_j) − φ(e_i e_j) over the normal basis and collapse
/// the H-leg with the counit.
pub fn extract_cocycle<K: Field>(ext: &CleftExtension<K>) -> Result<SymmetricCocycle<K>> {
    let f = ext.hopf.field().clone();
    let h = &ext.hopf;
    let dh = h.dim();
    let da = ext.carrier_dim();
    if da != 2 * dh {
        return Err(Error::DimensionMismatch { expected: 2 * dh, got: da });
    }
    let psi = ext.normal_basis_matrix()?;
    let phi_cols: Vec<Vec<K::Elem>> = (0..dh)
        .map(|m| (0..da).map(|r| ext.section.get(r, m).clone()).collect())
        .collect();

    // right-hand sides: D_ij = φ(e_i)φ(e_j) − φ(e_i e_j)
    let mut dmat = Matrix::zero(f.clone(), da, dh * dh);
    for i in 0..dh {
        for j in 0..dh {
            let mut v = ext.carrier.alg.mul_vec(&phi_cols[i], &phi_cols[j]);
            let lifted = ext.section.mul_vec(h.alg.mul_basis(i, j))?;
            for (t, w) in lifted.into_iter().enumerate() {
                v[t] = f.sub(&v[t], &w);
            }
            for (t, w) in v.into_iter().enumerate() {
                if !f.is_zero(&w) {
                    dmat.set(t, i * dh + j, w);
                }
            }
        }
    }
    let coords = psi
        .solve_many(&dmat)
        .map_err(|col| Error::NotCleft { i: col / dh, j: col % dh })?;

    // the plain block must vanish: the defects live in τ·A
    for col in 0..dh * dh {
        for m in 0..dh {
            if !f.is_zero(coords.get(m, col)) {
                return Err(Error::NotCleft { i: col / dh, j: col % dh });
            }
        }
    }

    // s̃(e_i, e_j) = Σ_m coords[dh+m, (i,j)]·ε(e_m)
    let mut sh = Matrix::zero(f.clone(), dh, dh);
    for i in 0..dh {
        for j in 0..dh {
            let mut acc = f.zero();
            for m in 0..dh {
                let c = coords.get(dh + m, i * dh + j);
                if !f.is_zero(c) {
                    acc = f.add(&acc, &f.mul(c, &h.counit[m]));
                }
            }
            sh.set(i, j, acc);
        }
    }
    for i in 0..dh {
        for j in (i + 1)..dh {
            if sh.get(i, j) != sh.get(j, i) {
                return Err(Error::NotCleft { i, j });
            }
        }
    }

    // plug back: D_ij must equal Σ s̃(e_i₍₁₎, e_j₍₁₎)·τφ(e_i₍₂₎e_j₍₂₎)
    let tau_phi = ext.tau_action.mul(&ext.section)?;
    for i in 0..dh {
        for j in 0..dh {
            let mut expect = vec![f.zero(); da];
            for (c1, a, b) in &h.coproduct[i] {
                for (c2, x, y) in &h.coproduct[j] {
                    let sv = sh.get(*a, *x);
                    if f.is_zero(sv) {
                        continue;
                    }
                    let coeff = f.mul(&f.mul(c1, c2), sv);
                    let lifted = tau_phi.mul_vec(h.alg.mul_basis(*b, *y))?;
                    f.row_axpy(&mut expect, &coeff, &lifted);
                }
            }
            for t in 0..da {
                if &expect[t] != dmat.get(t, i * dh + j) {
                    return Err(Error::NotCleft { i, j });
                }
            }
        }
    }

    // restrict to H⁺: s⁺ = inclusionᵀ · s̃ · inclusion
    let plus = PlusAlgebra::new(h)?;
    let inc = &plus.aug.inclusion;
    let sp = inc.transpose().mul(&sh)?.mul(inc)?;
    let d = plus.dim;
    let pairs = PairIndexer::new(d, Flavor::Symmetric);
    let mut values = vec![f.zero(); pairs.dim()];
    for u in 0..d {
        for v in u..d {
            values[pairs.index(u, v)] = sp.get(u, v).clone();
        }
    }
    let s = SymmetricCocycle::new(d, values)?;
    validate_symmetric_cocycle(&plus, &s)?;
    Ok(s)
}

/// The extension of k[⊕ ℤ/o_i] with relations z_i^{o_i} = 1 + a_i·τ,
/// τ² = 0, carried on the τ-major monomial basis with section x^n ↦ z^n.
pub fn group_cleft_extension<K: Field>(
    field: &K,
    orders: &[u64],
    a: &[K::Elem],
) -> Result<CleftExtension<K>> {
    let (hopf, hbasis) = group_hopf(field, orders)?;
    let (alg, abasis) = dual_group_table(field, orders, a)?;
    let f = field.clone();
    let dh = hopf.dim();
    let da = alg.dim();
    let mut counit = vec![f.zero(); da];
    for idx in 0..da {
        let e = abasis.exps_of(idx);
        if e[0] == 0 {
            counit[idx] = f.one();
        }
    }
    let carrier = AugmentedAlgebra::new_checked(alg, counit)?;
    // ρ(τ^δ z^n) = τ^δ z^n ⊗ x^n
    let mut coaction = Vec::with_capacity(da);
    for idx in 0..da {
        let e = abasis.exps_of(idx);
        let hexp: Vec<u32> = e[1..].to_vec();
        coaction.push(vec![(f.one(), idx, hbasis.index_of(&hexp))]);
    }
    let mut section = Matrix::zero(f.clone(), da, dh);
    for m in 0..dh {
        section.set(m, m, f.one()); // τ-major: δ = 0 block is the z-box
    }
    let tau = {
        let mut e = vec![0u32; orders.len() + 1];
        e[0] = 1;
        abasis.index_of(&e)
    };
    let tau_vec = {
        let mut v = vec![f.zero(); da];
        v[tau] = f.one();
        v
    };
    let tau_action = carrier.alg.left_mult_matrix(&tau_vec);
    Ok(CleftExtension { hopf, carrier, coaction, section, tau_action })
}

/// The extension of the chained p-power Hopf algebra with relations
/// z_{i+1}^{p^{i+1}} = z_i^{p^i} − c_i·τ, z_1^{p^M} = 0, τ² = 0, with
/// binomial coaction and section y^e ↦ z^e.
pub fn chained_power_cleft_extension<K: Field>(
    field: &K,
    n: usize,
    m: u32,
    c: &[K::Elem],
) -> Result<CleftExtension<K>> {
    let (hopf, hbasis) = chained_power_hopf(field, n, m)?;
    let (alg, abasis) = dual_chained_power_table(field, n, m, c)?;
    let f = field.clone();
    let p = field.characteristic();
    let dh = hopf.dim();
    let da = alg.dim();
    let mut counit = vec![f.zero(); da];
    for idx in 0..da {
        if abasis.exps_of(idx).iter().all(|&e| e == 0) {
            counit[idx] = f.one();
        }
    }
    let carrier = AugmentedAlgebra::new_checked(alg, counit)?;
    // ρ(z^e τ^δ) = Σ_{f ≤ e} Π binom(e_i, f_i) · z^f τ^δ ⊗ y^{e−f}
    let mut coaction = Vec::with_capacity(da);
    for idx in 0..da {
        let e = abasis.exps_of(idx);
        let delta = e[0];
        let zexp: Vec<u32> = e[1..].to_vec();
        let mut terms: CoproductTerms<K> = Vec::new();
        for fexp in sub_boxes(&zexp) {
            let mut coeff = 1u64;
            for (&et, &ft) in zexp.iter().zip(fexp.iter()) {
                coeff = coeff * crate::hopf::binom_mod_p(et as u64, ft as u64, p) % p;
                if coeff == 0 {
                    break;
                }
            }
            if coeff == 0 {
                continue;
            }
            let mut aexp = vec![delta];
            aexp.extend_from_slice(&fexp);
            let hexp: Vec<u32> = zexp.iter().zip(fexp.iter()).map(|(&et, &ft)| et - ft).collect();
            terms.push((
                f.from_i64(coeff as i64),
                abasis.index_of(&aexp),
                hbasis.index_of(&hexp),
            ));
        }
        coaction.push(terms);
    }
    let mut section = Matrix::zero(f.clone(), da, dh);
    for mm in 0..dh {
        section.set(mm, mm, f.one());
    }
    let tau_vec = {
        let mut e = vec![0u32; n + 1];
        e[0] = 1;
        let mut v = vec![f.zero(); da];
        v[abasis.index_of(&e)] = f.one();
        v
    };
    let tau_action = carrier.alg.left_mult_matrix(&tau_vec);
    Ok(CleftExtension { hopf, carrier, coaction, section, tau_action })
}

fn sub_boxes(e: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; e.len()]];
    for (i, &ei) in e.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (ei as usize + 1));
        for prefix in &out {
            for v in 0..=ei {
                let mut w = prefix.clone();
                w[i] = v;
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// The integer restriction matrix attached to a normalized subgroup: entry
/// (i, j) is c_ij · ord(y_i) / o_j in the permuted ambient coordinates.
/// Row i expresses how the i-th generator's relation z^{ord(y_i)} unwinds
/// on the ambient relation parameters.
pub fn restriction_matrix_t(norm: &NormalizedSubgroup) -> Vec<Vec<u64>> {
    let r = norm.gens.len();
    let q = norm.ambient_orders.len();
    let mut t = vec![vec![0u64; q]; r];
    for i in 0..r {
        for j in 0..q {
            let c = norm.gens[i][j];
            debug_assert_eq!((c * norm.gen_orders[i]) % norm.ambient_orders[j], 0);
            t[i][j] = c * norm.gen_orders[i] / norm.ambient_orders[j];
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{
        class_coordinates, cohomologous, restriction_data, second_cohomology,
    };
    use crate::exactla::Fp;
    use crate::hopf::{hopf_subalgebra_from_subgroup, GroupData};

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }
    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn dual_numbers_square_to_zero() {
        let a = dual_numbers(&f3()).unwrap();
        assert!(a.mul_basis(1, 1).iter().all(|v| *v == 0));
    }

    #[test]
    fn group_extension_on_z2_extracts_the_relation_parameter() {
        let ext = group_cleft_extension(&f2(), &[2], &[1]).unwrap();
        ext.validate().unwrap();
        let s = extract_cocycle(&ext).unwrap();
        // H⁺ is one-dimensional with basis g−1; s(g−1 ⊙ g−1) = a₁ = 1
        assert_eq!(s.plus_dim, 1);
        assert_eq!(s.values, vec![1]);
    }

    #[test]
    fn crossed_product_round_trips_exactly() {
        let (h, _) = crate::hopf::group_hopf(&f2(), &[2, 2]).unwrap();
        let coh = second_cohomology(&h, crate::cohomology::Flavor::Symmetric).unwrap();
        for rep in &coh.representatives {
            let s = SymmetricCocycle::new(coh.plus_dim, rep.clone()).unwrap();
            let ext = crossed_product_from_cocycle(&h, &s).unwrap();
            ext.validate().unwrap();
            let back = extract_cocycle(&ext).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn chained_power_extension_hits_the_chain_parameter() {
        let ext = chained_power_cleft_extension(&f2(), 2, 1, &[1]).unwrap();
        ext.validate().unwrap();
        let s = extract_cocycle(&ext).unwrap();
        let sh = monomial_cocycle_matrix(&ext.hopf, &s).unwrap();
        let (_, hbasis) = crate::hopf::chained_power_hopf(&f2(), 2, 1).unwrap();
        let y1 = hbasis.index_of(&[1, 0]);
        let y2 = |t: u32| hbasis.index_of(&[0, t]);
        // s(y₂, y₂^r) = 0 below the top power, and the top-power values
        // differ by the chain constant: s(y₁, y₁) − s(y₂, y₂³) = c₁ = 1
        assert_eq!(*sh.get(y2(1), y2(1)), 0);
        assert_eq!(*sh.get(y2(1), y2(2)), 0);
        assert_eq!(*sh.get(y1, y1), 0);
        assert_eq!(*sh.get(y2(1), y2(3)), 1);
    }

    #[test]
    fn cyclic_four_extension_hits_the_relation_parameter() {
        let f = f2();
        let ext = group_cleft_extension(&f, &[4], &[1]).unwrap();
        let s = extract_cocycle(&ext).unwrap();
        let sh = monomial_cocycle_matrix(&ext.hopf, &s).unwrap();
        // s(x, x^t) = 0 for t < 3 and s(x, x³) = a₁ = 1; the table is
        // normalized against the unit
        assert_eq!(*sh.get(0, 2), 0);
        assert_eq!(*sh.get(1, 1), 0);
        assert_eq!(*sh.get(1, 2), 0);
        assert_eq!(*sh.get(1, 3), 1);
        assert_eq!(*sh.get(2, 3), 1);
    }

    #[test]
    fn trivial_parameters_give_a_coboundary_class() {
        let ext = chained_power_cleft_extension(&f2(), 2, 1, &[0]).unwrap();
        let s = extract_cocycle(&ext).unwrap();
        let coh = second_cohomology(&ext.hopf, Flavor::Symmetric).unwrap();
        let zero = vec![0u64; s.values.len()];
        let witness = cohomologous(&coh, &s.values, &zero).unwrap();
        assert!(witness.is_some());
    }

    #[test]
    fn non_cocycles_are_rejected_before_building() {
        let (h, _) = crate::hopf::group_hopf(&f2(), &[4]).unwrap();
        let coh = second_cohomology(&h, Flavor::Symmetric).unwrap();
        // find a pair-space unit vector outside Z²
        let mut bad = None;
        for i in 0..coh.pair_dim {
            let mut v = vec![0u64; coh.pair_dim];
            v[i] = 1;
            if !coh.cocycles.contains(&v) {
                bad = Some(v);
                break;
            }
        }
        let s = SymmetricCocycle::new(coh.plus_dim, bad.expect("some unit vector fails")).unwrap();
        let err = crossed_product_from_cocycle(&h, &s).unwrap_err();
        assert!(matches!(err, Error::BadCocycle(_)));
    }

    #[test]
    fn shifted_sections_extract_cohomologous_cocycles() {
        let ext = group_cleft_extension(&f2(), &[4], &[1]).unwrap();
        ext.validate().unwrap();
        let s = extract_cocycle(&ext).unwrap();
        let coh = second_cohomology(&ext.hopf, Flavor::Symmetric).unwrap();
        let mut fvec = vec![0u64; coh.plus_dim];
        fvec[1] = 1;
        let ext2 = ext.with_shifted_section(&fvec).unwrap();
        ext2.validate().unwrap();
        let s2 = extract_cocycle(&ext2).unwrap();
        // exact section-change law: s' = s − d¹f
        let shift = coh.d1.mul_vec(&fvec).unwrap();
        let f = f2();
        let expected: Vec<u64> =
            s.values.iter().zip(shift.iter()).map(|(a, b)| f.sub(a, b)).collect();
        assert_eq!(s2.values, expected);
        assert!(cohomologous(&coh, &s.values, &s2.values).unwrap().is_some());
    }

    #[test]
    fn restriction_matrix_of_index_two_subgroup() {
        let group = GroupData::new(vec![8, 2]).unwrap();
        let norm =
            crate::hopf::normalize_subgroup_generators(&group, &[vec![6, 0]], 2).unwrap();
        assert_eq!(restriction_matrix_t(&norm), vec![vec![1, 0]]);
    }

    #[test]
    fn order_matrix_restriction_matches_cohomological_restriction() {
        // G = ℤ/4 ⊇ F = ⟨2x₁⟩ ≅ ℤ/2 over F₂: the cocycle attached to a = 1
        // on G restricts to t·(cocycle attached to a = 1 on F) with t = 1
        let f = f2();
        let group = GroupData::new(vec![4]).unwrap();
        let ext_g = group_cleft_extension(&f, &[4], &[1]).unwrap();
        let s_g = extract_cocycle(&ext_g).unwrap();
        let emb = hopf_subalgebra_from_subgroup(&f, &group, &[vec![2]]).unwrap();
        assert_eq!(restriction_matrix_t(&emb.normalized), vec![vec![1]]);
        let res =
            restriction_data(&ext_g.hopf, &emb.sub, &emb.inclusion, Flavor::Symmetric).unwrap();
        let pulled = res.pullback.mul_vec(&s_g.values).unwrap();
        let ext_f = group_cleft_extension(&f, &[2], &[1]).unwrap();
        let s_f = extract_cocycle(&ext_f).unwrap();
        let coh_f = second_cohomology(&emb.sub, Flavor::Symmetric).unwrap();
        let witness = cohomologous(&coh_f, &pulled, &s_f.values).unwrap();
        assert!(witness.is_some());
        // and the class coordinates agree
        let ca = class_coordinates(&coh_f, &pulled).unwrap().unwrap();
        let cb = class_coordinates(&coh_f, &s_f.values).unwrap().unwrap();
        assert_eq!(ca, cb);
    }

    #[test]
    fn broken_coaction_fails_validation() {
        let mut ext = group_cleft_extension(&f2(), &[2], &[1]).unwrap();
        // point the z-coaction at the wrong group element
        ext.coaction[1] = vec![(1, 1, 0)];
        assert!(ext.validate().is_err());
    }
}
