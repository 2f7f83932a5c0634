//! Commutative Hopf algebras as validated tables: a structure-constant
//! algebra, a counit vector, a sparse coproduct and an antipode matrix.
//! Includes the standard constructors (group algebras, primitively
//! generated truncated algebras, the chained p-power family, functions on a
//! finite abelian group, tensor products) and group-theoretic subgroup
//! embeddings with canonical generator normalization.

use crate::algebra::{
    chained_power_table, group_algebra_table, truncated_primitive_table, AlgebraTable,
    AugmentedAlgebra, MonomialBasis,
};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use num::integer::{gcd, lcm};

/// Sparse coproduct of one basis element: Δ(e_i) = Σ c · e_j ⊗ e_k.
pub type CoproductTerms<K> = Vec<(<K as Field>::Elem, usize, usize)>;

/// Hopf algebra table. Fields are public so callers (in particular tests)
/// can assemble candidate structures and run `verify_axioms` on them;
/// `new_checked` is the validating constructor used everywhere else.
#[derive(Clone)]
pub struct HopfTable<K: Field> {
    pub alg: AlgebraTable<K>,
    pub counit: Vec<K::Elem>,
    pub coproduct: Vec<CoproductTerms<K>>,
    /// Antipode matrix; column j is S(e_j).
    pub antipode: Matrix<K>,
}

impl<K: Field> std::fmt::Debug for HopfTable<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HopfTable(dim {}, {:?})", self.alg.dim(), self.alg.field())
    }
}

impl<K: Field> HopfTable<K> {
    pub fn new_checked(
        alg: AlgebraTable<K>,
        counit: Vec<K::Elem>,
        coproduct: Vec<CoproductTerms<K>>,
        antipode: Matrix<K>,
    ) -> Result<Self> {
        let h = HopfTable { alg, counit, coproduct, antipode };
        h.verify_axioms()?;
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn field(&self) -> &K {
        self.alg.field()
    }

    /// Counit applied to a coefficient vector.
    pub fn counit_of(&self, v: &[K::Elem]) -> K::Elem {
        let f = self.alg.field();
        let mut acc = f.zero();
        for (c, e) in v.iter().zip(self.counit.iter()) {
            if !f.is_zero(c) {
                acc = f.add(&acc, &f.mul(c, e));
            }
        }
        acc
    }

    /// Check all Hopf axioms: counit is an algebra map, counit laws,
    /// coassociativity, Δ is an algebra map (including on the unit), and
    /// the antipode convolution identities on both sides.
    pub fn verify_axioms(&self) -> Result<()> {
        let f = self.alg.field().clone();
        let dim = self.alg.dim();
        if self.counit.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.counit.len() });
        }
        if self.coproduct.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.coproduct.len() });
        }
        if self.antipode.rows() != dim || self.antipode.cols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "antipode is {}x{}, expected {dim}x{dim}",
                self.antipode.rows(),
                self.antipode.cols()
            )));
        }
        for terms in &self.coproduct {
            for (_, j, k) in terms {
                if *j >= dim || *k >= dim {
                    return Err(Error::InvalidInput("coproduct index out of range".into()));
                }
            }
        }

        AugmentedAlgebra::new_checked(self.alg.clone(), self.counit.clone())
            .map_err(|_| Error::HopfAxiom { axiom: "counit is an algebra map", index: 0 })?;

        // counit laws: (ε⊗id)Δ = id = (id⊗ε)Δ
        for i in 0..dim {
            let mut left = vec![f.zero(); dim];
            let mut right = vec![f.zero(); dim];
            for (c, j, k) in &self.coproduct[i] {
                left[*k] = f.add(&left[*k], &f.mul(c, &self.counit[*j]));
                right[*j] = f.add(&right[*j], &f.mul(c, &self.counit[*k]));
            }
            for t in 0..dim {
                let want = if t == i { f.one() } else { f.zero() };
                if left[t] != want || right[t] != want {
                    return Err(Error::HopfAxiom { axiom: "counit law", index: i });
                }
            }
        }

        // coassociativity: (Δ⊗id)Δ = (id⊗Δ)Δ as merged triple lists
        for i in 0..dim {
            let mut lhs: Vec<((usize, usize, usize), K::Elem)> = Vec::new();
            let mut rhs: Vec<((usize, usize, usize), K::Elem)> = Vec::new();
            for (c, j, k) in &self.coproduct[i] {
                for (c2, a, b) in &self.coproduct[*j] {
                    lhs.push(((*a, *b, *k), f.mul(c, c2)));
                }
                for (c2, a, b) in &self.coproduct[*k] {
                    rhs.push(((*j, *a, *b), f.mul(c, c2)));
                }
            }
            merge_keyed(&f, &mut lhs);
            merge_keyed(&f, &mut rhs);
            if lhs != rhs {
                return Err(Error::HopfAxiom { axiom: "coassociativity", index: i });
            }
        }

        // Δ is an algebra map: Δ(e_i e_j) = Δ(e_i)Δ(e_j), plus Δ(1) = 1⊗1
        let mut acc = vec![f.zero(); dim * dim];
        let mut touched: Vec<usize> = Vec::new();
        let bump = |acc: &mut Vec<K::Elem>, touched: &mut Vec<usize>, idx: usize, v: K::Elem| {
            if f.is_zero(&acc[idx]) && !f.is_zero(&v) {
                touched.push(idx);
            }
            acc[idx] = f.add(&acc[idx], &v);
        };
        for i in 0..dim {
            for j in 0..dim {
                // accumulate Δ(e_i)Δ(e_j) − Δ(e_i e_j); expect zero
                for (c1, a, b) in &self.coproduct[i] {
                    for (c2, x, y) in &self.coproduct[j] {
                        let c = f.mul(c1, c2);
                        let first = self.alg.mul_basis(*a, *x);
                        let second = self.alg.mul_basis(*b, *y);
                        for (s, cs) in first.iter().enumerate() {
                            if f.is_zero(cs) {
                                continue;
                            }
                            let csc = f.mul(&c, cs);
                            for (t, ct) in second.iter().enumerate() {
                                if f.is_zero(ct) {
                                    continue;
                                }
                                bump(&mut acc, &mut touched, s * dim + t, f.mul(&csc, ct));
                            }
                        }
                    }
                }
                for (u, cu) in self.alg.mul_basis(i, j).iter().enumerate() {
                    if f.is_zero(cu) {
                        continue;
                    }
                    for (c, a, b) in &self.coproduct[u] {
                        bump(&mut acc, &mut touched, *a * dim + *b, f.neg(&f.mul(cu, c)));
                    }
                }
                let mut ok = true;
                for &t in &touched {
                    if !f.is_zero(&acc[t]) {
                        ok = false;
                    }
                    acc[t] = f.zero();
                }
                touched.clear();
                if !ok {
                    return Err(Error::HopfAxiom {
                        axiom: "coproduct is an algebra map",
                        index: i * dim + j,
                    });
                }
            }
        }
        {
            // Δ(1) = 1 ⊗ 1
            let unit = self.alg.unit().to_vec();
            for i in 0..dim {
                if f.is_zero(&unit[i]) {
                    continue;
                }
                for (c, a, b) in &self.coproduct[i] {
                    bump(&mut acc, &mut touched, *a * dim + *b, f.mul(&unit[i], c));
                }
            }
            for s in 0..dim {
                if f.is_zero(&unit[s]) {
                    continue;
                }
                for t in 0..dim {
                    if f.is_zero(&unit[t]) {
                        continue;
                    }
                    bump(&mut acc, &mut touched, s * dim + t, f.neg(&f.mul(&unit[s], &unit[t])));
                }
            }
            let mut ok = true;
            for &t in &touched {
                if !f.is_zero(&acc[t]) {
                    ok = false;
                }
                acc[t] = f.zero();
            }
            touched.clear();
            if !ok {
                return Err(Error::HopfAxiom { axiom: "coproduct of the unit", index: 0 });
            }
        }

        // antipode: Σ S(e_(1)) e_(2) = ε(e) 1 = Σ e_(1) S(e_(2))
        for i in 0..dim {
            let mut left = vec![f.zero(); dim];
            let mut right = vec![f.zero(); dim];
            for (c, j, k) in &self.coproduct[i] {
                let sj: Vec<K::Elem> = (0..dim).map(|r| self.antipode.get(r, *j).clone()).collect();
                let prod = self.alg.mul_vec_basis(&sj, *k);
                f.row_axpy(&mut left, c, &prod);
                let sk: Vec<K::Elem> = (0..dim).map(|r| self.antipode.get(r, *k).clone()).collect();
                let prod = self.alg.mul_basis_vec(*j, &sk);
                f.row_axpy(&mut right, c, &prod);
            }
            let unit = self.alg.unit();
            for t in 0..dim {
                let want = f.mul(&self.counit[i], &unit[t]);
                if left[t] != want || right[t] != want {
                    return Err(Error::HopfAxiom { axiom: "antipode convolution", index: i });
                }
            }
        }
        Ok(())
    }

    /// Tensor product of Hopf algebras, basis pairs second-factor-fastest.
    pub fn tensor(&self, other: &HopfTable<K>) -> Result<HopfTable<K>> {
        let f = self.alg.field().clone();
        let alg = self.alg.tensor_product(&other.alg)?;
        let da = self.dim();
        let db = other.dim();
        let dim = da * db;
        let mut counit = Vec::with_capacity(dim);
        for i in 0..da {
            for j in 0..db {
                counit.push(f.mul(&self.counit[i], &other.counit[j]));
            }
        }
        let mut coproduct = Vec::with_capacity(dim);
        for i in 0..da {
            for j in 0..db {
                let mut terms = Vec::new();
                for (c1, a, b) in &self.coproduct[i] {
                    for (c2, x, y) in &other.coproduct[j] {
                        terms.push((f.mul(c1, c2), a * db + x, b * db + y));
                    }
                }
                coproduct.push(terms);
            }
        }
        let mut antipode = Matrix::zero(f.clone(), dim, dim);
        for ca in 0..da {
            for cb in 0..db {
                for ra in 0..da {
                    for rb in 0..db {
                        let v = f.mul(&self.antipode.get(ra, ca), &other.antipode.get(rb, cb));
                        if !f.is_zero(&v) {
                            antipode.set(ra * db + rb, ca * db + cb, v);
                        }
                    }
                }
            }
        }
        HopfTable::new_checked(alg, counit, coproduct, antipode)
    }

    /// Augmentation ideal H⁺ = Ker ε with its canonical basis (reduced
    /// echelon kernel basis), as inclusion/projection matrices.
    pub fn augmentation_ideal(&self) -> AugmentationIdeal<K> {
        let f = self.alg.field().clone();
        let dim = self.dim();
        let mut eps = Matrix::zero(f.clone(), 1, dim);
        for j in 0..dim {
            eps.set(0, j, self.counit[j].clone());
        }
        let kernel = eps.kernel_basis();
        let d = kernel.dim();
        debug_assert_eq!(d, dim - 1);
        let mut inclusion = Matrix::zero(f.clone(), dim, d);
        for j in 0..d {
            for i in 0..dim {
                inclusion.set(i, j, kernel.basis_row(j)[i].clone());
            }
        }
        let mut projection = Matrix::zero(f.clone(), d, dim);
        let unit = self.alg.unit();
        for j in 0..dim {
            let mut v: Vec<K::Elem> = unit.iter().map(|u| f.neg(&f.mul(&self.counit[j], u))).collect();
            v[j] = f.add(&v[j], &f.one());
            let coords = kernel
                .solve_membership(&v)
                .expect("e_j - eps(e_j)·1 lies in the augmentation ideal");
            for (i, c) in coords.into_iter().enumerate() {
                projection.set(i, j, c);
            }
        }
        AugmentationIdeal { inclusion, projection, dim: d }
    }
}

/// Replace a keyed list by its canonical merge: sorted keys, summed
/// coefficients, zeros dropped.
fn merge_keyed<Key: Ord + Copy, K: Field>(f: &K, terms: &mut Vec<(Key, K::Elem)>) {
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

/// Canonical basis data for H⁺ = Ker ε.
#[derive(Clone, Debug)]
pub struct AugmentationIdeal<K: Field> {
    /// dim(H) × dim(H⁺); columns are the H⁺ basis vectors in H coordinates.
    pub inclusion: Matrix<K>,
    /// dim(H⁺) × dim(H); sends h to the H⁺ coordinates of h − ε(h)·1.
    pub projection: Matrix<K>,
    pub dim: usize,
}

fn multi_indices_below(e: &[u32]) -> Vec<Vec<u32>> {
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

/// Binomial coefficient mod p via the base-p digit product.
pub fn binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let small = |n: u64, k: u64| -> u64 {
        // n, k < p; exact product-quotient loop in u128
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        (acc % p as u128) as u64
    };
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = acc * small(ni, ki) % p;
        n /= p;
        k /= p;
    }
    acc
}

/// k[G] for G = ⊕ ℤ/orders_i with group-like basis monomials.
pub fn group_hopf<K: Field>(field: &K, orders: &[u64]) -> Result<(HopfTable<K>, MonomialBasis)> {
    let (alg, basis) = group_algebra_table(field, orders)?;
    let dim = alg.dim();
    let counit = vec![field.one(); dim];
    let coproduct = (0..dim).map(|i| vec![(field.one(), i, i)]).collect();
    let mut antipode = Matrix::zero(field.clone(), dim, dim);
    for j in 0..dim {
        let e = basis.exps_of(j);
        let inv: Vec<u32> = e
            .iter()
            .zip(basis.bounds.iter())
            .map(|(&ei, &b)| if ei == 0 { 0 } else { b - ei })
            .collect();
        antipode.set(basis.index_of(&inv), j, field.one());
    }
    let h = HopfTable::new_checked(alg, counit, coproduct, antipode)?;
    Ok((h, basis))
}

fn primitive_hopf_structure<K: Field>(
    field: &K,
    alg: AlgebraTable<K>,
    basis: &MonomialBasis,
) -> Result<HopfTable<K>> {
    let p = field.characteristic();
    let dim = alg.dim();
    let mut counit = vec![field.zero(); dim];
    counit[0] = field.one();
    let mut coproduct = Vec::with_capacity(dim);
    for i in 0..dim {
        let e = basis.exps_of(i);
        let mut terms = Vec::new();
        for f_idx in multi_indices_below(&e) {
            let mut coeff = 1u64;
            for (&et, &ft) in e.iter().zip(f_idx.iter()) {
                coeff = coeff * binom_mod_p(et as u64, ft as u64, p) % p;
                if coeff == 0 {
                    break;
                }
            }
            if coeff == 0 {
                continue;
            }
            let rest: Vec<u32> = e.iter().zip(f_idx.iter()).map(|(&et, &ft)| et - ft).collect();
            terms.push((field.from_i64(coeff as i64), basis.index_of(&f_idx), basis.index_of(&rest)));
        }
        coproduct.push(terms);
    }
    let mut antipode = Matrix::zero(field.clone(), dim, dim);
    for j in 0..dim {
        let e = basis.exps_of(j);
        let total: u32 = e.iter().sum();
        let sign = if total % 2 == 0 { field.one() } else { field.neg(&field.one()) };
        antipode.set(j, j, sign);
    }
    HopfTable::new_checked(alg, counit, coproduct, antipode)
}

/// k[x_1,…,x_r]/(x_i^{p^{e_i}}) with primitive generators, char p.
pub fn truncated_primitive_hopf<K: Field>(
    field: &K,
    exponents: &[u32],
) -> Result<(HopfTable<K>, MonomialBasis)> {
    let (alg, basis) = truncated_primitive_table(field, exponents)?;
    let h = primitive_hopf_structure(field, alg, &basis)?;
    Ok((h, basis))
}

/// k[y_1,…,y_n]/(y_i^{p^i} − y_1^p, y_1^{p^M}) with primitive generators.
pub fn chained_power_hopf<K: Field>(
    field: &K,
    n: usize,
    m: u32,
) -> Result<(HopfTable<K>, MonomialBasis)> {
    let (alg, basis) = chained_power_table(field, n, m)?;
    let h = primitive_hopf_structure(field, alg, &basis)?;
    Ok((h, basis))
}

/// Functions on G = ⊕ ℤ/orders_i: idempotent basis e_g, convolution
/// coproduct Δ(e_g) = Σ_{h+k=g} e_h ⊗ e_k.
pub fn etale_functions_hopf<K: Field>(
    field: &K,
    orders: &[u64],
) -> Result<(HopfTable<K>, GroupData)> {
    let group = GroupData::new(orders.to_vec())?;
    let dim = group.size();
    if dim > crate::algebra::MAX_TABLE_DIM {
        return Err(Error::TooLarge { dim, max: crate::algebra::MAX_TABLE_DIM });
    }
    let f = field.clone();
    let labels: Vec<String> = (0..dim)
        .map(|i| {
            let e = group.exps_of(i);
            if e.len() == 1 {
                format!("e{}", e[0])
            } else {
                let parts: Vec<String> = e.iter().map(|v| v.to_string()).collect();
                format!("e({})", parts.join(","))
            }
        })
        .collect();
    let unit = vec![f.one(); dim];
    let mut mult = vec![f.zero(); dim * dim * dim];
    for i in 0..dim {
        mult[(i * dim + i) * dim + i] = f.one();
    }
    let alg = AlgebraTable::from_structure_constants(f.clone(), labels, unit, mult)?;
    let mut counit = vec![f.zero(); dim];
    counit[0] = f.one();
    let mut coproduct = Vec::with_capacity(dim);
    for g in 0..dim {
        let ge = group.exps_of(g);
        let mut terms = Vec::new();
        for h in 0..dim {
            let he = group.exps_of(h);
            let ke = group.sub(&ge, &he);
            terms.push((f.one(), h, group.index_of(&ke)));
        }
        coproduct.push(terms);
    }
    let mut antipode = Matrix::zero(f.clone(), dim, dim);
    for g in 0..dim {
        let ge = group.exps_of(g);
        let neg = group.neg(&ge);
        antipode.set(group.index_of(&neg), g, f.one());
    }
    let h = HopfTable::new_checked(alg, counit, coproduct, antipode)?;
    Ok((h, group))
}

/// Finite abelian group ⊕ ℤ/orders_i with mixed-radix element indexing
/// (last factor fastest), matching the group-algebra basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupData {
    pub orders: Vec<u64>,
}

impl GroupData {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() || orders.iter().any(|&o| o < 2) {
            return Err(Error::InvalidPresentation("cyclic orders must be > 1".into()));
        }
        Ok(GroupData { orders })
    }

    pub fn size(&self) -> usize {
        self.orders.iter().map(|&o| o as usize).product()
    }

    pub fn index_of(&self, exps: &[u64]) -> usize {
        let mut idx = 0usize;
        for (&e, &o) in exps.iter().zip(self.orders.iter()) {
            idx = idx * o as usize + (e % o) as usize;
        }
        idx
    }

    pub fn exps_of(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            out[i] = (index % self.orders[i] as usize) as u64;
            index /= self.orders[i] as usize;
        }
        out
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b.iter())
            .zip(self.orders.iter())
            .map(|((&x, &y), &o)| (x + y) % o)
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b.iter())
            .zip(self.orders.iter())
            .map(|((&x, &y), &o)| (x % o + o - y % o) % o)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(self.orders.iter()).map(|(&x, &o)| (o - x % o) % o).collect()
    }

    pub fn scale(&self, k: u64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(self.orders.iter())
            .map(|(&x, &o)| (x % o).wrapping_mul(k % o) % o)
            .collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        let mut ord = 1u64;
        for (&x, &o) in a.iter().zip(self.orders.iter()) {
            ord = lcm(ord, o / gcd(o, x % o));
        }
        ord
    }
}

/// Normalized generating set for a subgroup of ⊕ ℤ/orders_i (all orders
/// powers of the same prime p): gens form an upper-triangular matrix in the
/// permuted coordinates, generator orders descend, and each diagonal entry
/// is exactly (ambient order)/(generator order).
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedSubgroup {
    /// Rows y_i as exponent vectors in the permuted ambient coordinates.
    pub gens: Vec<Vec<u64>>,
    /// Orders of the normalized generators, non-increasing.
    pub gen_orders: Vec<u64>,
    /// Ambient column permutation: permuted column c is original column
    /// `column_perm[c]`.
    pub column_perm: Vec<usize>,
    /// Ambient orders in the permuted coordinate order.
    pub ambient_orders: Vec<u64>,
}

impl NormalizedSubgroup {
    /// A generator row translated back to the original coordinates.
    pub fn gen_in_original_coords(&self, i: usize, q: usize) -> Vec<u64> {
        let mut out = vec![0u64; q];
        for (c, &v) in self.gens[i].iter().enumerate() {
            out[self.column_perm[c]] = v;
        }
        out
    }

    pub fn subgroup_size(&self) -> u64 {
        self.gen_orders.iter().product()
    }
}

fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    // extended Euclid
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(((t0 % m as i128 + m as i128) % m as i128) as u64)
}

/// Bring subgroup generators into the canonical triangular form. Requires
/// every ambient order to be a power of p.
pub fn normalize_subgroup_generators(
    group: &GroupData,
    rows: &[Vec<u64>],
    p: u64,
) -> Result<NormalizedSubgroup> {
    let q = group.orders.len();
    if !crate::exactla::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    for &o in &group.orders {
        let v = p_adic_valuation(o, p);
        if o != p.checked_pow(v).unwrap_or(0) {
            return Err(Error::BadSubgroup(format!(
                "ambient order {o} is not a power of {p}"
            )));
        }
    }
    for r in rows {
        if r.len() != q {
            return Err(Error::BadSubgroup(format!(
                "generator has {} coordinates, ambient group has {q}",
                r.len()
            )));
        }
    }
    let mut perm: Vec<usize> = (0..q).collect();
    let mut orders = group.orders.clone();
    let mut work: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().zip(orders.iter()).map(|(&x, &o)| x % o).collect())
        .collect();
    work.retain(|r| r.iter().any(|&x| x != 0));

    let mut level = 0usize;
    while level < work.len() {
        // pick the remaining row of maximal order
        let sub = GroupData { orders: orders.clone() };
        let mut best = level;
        let mut best_ord = 0u64;
        for (r, row) in work.iter().enumerate().skip(level) {
            let o = sub.element_order(row);
            if o > best_ord {
                best_ord = o;
                best = r;
            }
        }
        work.swap(level, best);
        // find a column (at or after `level`) where that order is attained
        let mut attain = None;
        for c in level..q {
            let x = work[level][c];
            if x == 0 {
                continue;
            }
            if orders[c] / gcd(orders[c], x) == best_ord {
                attain = Some(c);
                break;
            }
        }
        let attain = attain.ok_or_else(|| {
            Error::BadSubgroup("generator order not attained in available coordinates".into())
        })?;
        if attain != level {
            orders.swap(level, attain);
            perm.swap(level, attain);
            for row in work.iter_mut() {
                row.swap(level, attain);
            }
        }
        let o1 = orders[level];
        let c11 = work[level][level];
        let v = p_adic_valuation(c11, p);
        let m = c11 / p.pow(v);
        // rescale the pivot row by m⁻¹ so the diagonal entry becomes p^v
        let minv = inv_mod(m, o1).ok_or_else(|| Error::BadSubgroup("pivot not invertible".into()))?;
        {
            let row = work[level].clone();
            work[level] = GroupData { orders: orders.clone() }.scale(minv, &row);
        }
        debug_assert_eq!(work[level][level], p.pow(v));
        // clear the pivot column below
        for r in (level + 1)..work.len() {
            let cr = work[r][level];
            if cr == 0 {
                continue;
            }
            let vr = p_adic_valuation(cr, p);
            if vr < v {
                return Err(Error::BadSubgroup(
                    "maximal-order pivot failed to dominate a later generator".into(),
                ));
            }
            let lambda = cr / p.pow(v); // pivot entry is exactly p^v
            let sub = GroupData { orders: orders.clone() };
            let scaled = sub.scale(lambda, &work[level]);
            work[r] = sub.sub(&work[r], &scaled);
            debug_assert_eq!(work[r][level], 0);
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
        level += 1;
    }

    if work.is_empty() {
        return Err(Error::BadSubgroup("subgroup is trivial".into()));
    }
    let sub = GroupData { orders: orders.clone() };
    let gen_orders: Vec<u64> = work.iter().map(|r| sub.element_order(r)).collect();
    let result = NormalizedSubgroup {
        gens: work,
        gen_orders,
        column_perm: perm,
        ambient_orders: orders,
    };
    // validation by enumeration: the claimed |F| combinations are distinct
    let size = result.subgroup_size();
    if size > (1u64 << 20) {
        return Err(Error::BadSubgroup("subgroup too large to validate".into()));
    }
    let mut seen = std::collections::HashSet::new();
    let radices: Vec<u64> = result.gen_orders.clone();
    let r = radices.len();
    let mut counter = vec![0u64; r];
    loop {
        let mut elem = vec![0u64; q];
        for (i, &f) in counter.iter().enumerate() {
            let scaled = sub.scale(f, &result.gens[i]);
            elem = sub.add(&elem, &scaled);
        }
        if !seen.insert(elem) {
            return Err(Error::BadSubgroup("generator orders overcount the subgroup".into()));
        }
        let mut i = r;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            counter[i] += 1;
            if counter[i] < radices[i] {
                break;
            }
            counter[i] = 0;
        }
        if counter.iter().all(|&x| x == 0) {
            break;
        }
    }
    Ok(result)
}

/// A Hopf subalgebra presented as a smaller Hopf table plus the inclusion
/// matrix into the ambient one.
#[derive(Clone, Debug)]
pub struct HopfEmbedding<K: Field> {
    pub sub: HopfTable<K>,
    pub sub_basis: MonomialBasis,
    /// dim(H) × dim(J); column m is the image of the m-th subalgebra basis
    /// element.
    pub inclusion: Matrix<K>,
    pub normalized: NormalizedSubgroup,
}

/// Embed k[F] into k[G] for a subgroup F ≤ G given by generator rows.
/// Requires char(k) = p > 0 and all ambient orders powers of p.
pub fn hopf_subalgebra_from_subgroup<K: Field>(
    field: &K,
    group: &GroupData,
    sub_rows: &[Vec<u64>],
) -> Result<HopfEmbedding<K>> {
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::UnsupportedField {
            op: "hopf_subalgebra_from_subgroup",
            field: "Q".into(),
        });
    }
    let normalized = normalize_subgroup_generators(group, sub_rows, p)?;
    let (sub, sub_basis) = group_hopf(field, &normalized.gen_orders)?;
    let q = group.orders.len();
    let dim_h = group.size();
    let dim_j = sub.dim();
    let f = field.clone();
    let mut inclusion = Matrix::zero(f.clone(), dim_h, dim_j);
    for m in 0..dim_j {
        let fexp = sub_basis.exps_of(m);
        let mut elem = vec![0u64; q];
        for (i, &fi) in fexp.iter().enumerate() {
            let g = normalized.gen_in_original_coords(i, q);
            let scaled = group.scale(fi as u64, &g);
            elem = group.add(&elem, &scaled);
        }
        inclusion.set(group.index_of(&elem), m, f.one());
    }
    Ok(HopfEmbedding { sub, sub_basis, inclusion, normalized })
}
