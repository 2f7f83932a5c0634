//! Finite-dimensional commutative algebras as exact structure-constant
//! tables, plus the monomial presentations that generate every table used
//! by the engine (group algebras, truncated primitive algebras, the chained
//! p-power family, and their dual-number extensions).
//!
//! Tables are always validated on construction: commutativity, exhaustive
//! associativity and the unit law. For presented algebras the associativity
//! sweep doubles as an a-posteriori confluence certificate for the rewrite
//! rules.

use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, RowSpan, Subspace};

/// Largest supported table dimension (tables are dim³ scalars).
pub const MAX_TABLE_DIM: usize = 128;

/// Commutative associative unital algebra given by structure constants.
/// `mult` is flattened dim³, entry `((i*dim)+j)*dim+k` = coefficient of
/// basis k in e_i·e_j.
#[derive(Clone, PartialEq)]
pub struct AlgebraTable<K: Field> {
    field: K,
    dim: usize,
    labels: Vec<String>,
    unit: Vec<K::Elem>,
    mult: Vec<K::Elem>,
}

impl<K: Field> std::fmt::Debug for AlgebraTable<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgebraTable(dim {}, {:?})", self.dim, self.field)
    }
}

impl<K: Field> AlgebraTable<K> {
    /// Build and fully validate a table.
    pub fn from_structure_constants(
        field: K,
        labels: Vec<String>,
        unit: Vec<K::Elem>,
        mult: Vec<K::Elem>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidInput("algebra must have dimension >= 1".into()));
        }
        if dim > MAX_TABLE_DIM {
            return Err(Error::TooLarge { dim, max: MAX_TABLE_DIM });
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: unit.len() });
        }
        if mult.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, got: mult.len() });
        }
        let a = AlgebraTable { field, dim, labels, unit, mult };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let f = &self.field;
        // unit law
        for j in 0..self.dim {
            let mut acc = vec![f.zero(); self.dim];
            for i in 0..self.dim {
                if !f.is_zero(&self.unit[i]) {
                    f.row_axpy(&mut acc, &self.unit[i], self.mul_basis(i, j));
                }
            }
            for (k, v) in acc.iter().enumerate() {
                let want = if k == j { f.one() } else { f.zero() };
                if *v != want {
                    return Err(Error::BadUnit(j));
                }
            }
        }
        // commutativity
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.mul_basis(i, j) != self.mul_basis(j, i) {
                    return Err(Error::NotCommutative { i, j });
                }
            }
        }
        // associativity; by commutativity the associator is antisymmetric in
        // the outer arguments, so triples with i <= k suffice
        for i in 0..self.dim {
            for k in i..self.dim {
                for j in 0..self.dim {
                    let left = self.mul_vec_basis(self.mul_basis(i, j), k);
                    let right = self.mul_basis_vec(i, self.mul_basis(j, k));
                    if left != right {
                        return Err(Error::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[K::Elem] {
        &self.unit
    }

    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> &[K::Elem] {
        let base = (i * self.dim + j) * self.dim;
        &self.mult[base..base + self.dim]
    }

    /// v · e_k for a coefficient vector v.
    pub fn mul_vec_basis(&self, v: &[K::Elem], k: usize) -> Vec<K::Elem> {
        let f = &self.field;
        let mut acc = vec![f.zero(); self.dim];
        for (i, c) in v.iter().enumerate() {
            if !f.is_zero(c) {
                f.row_axpy(&mut acc, c, self.mul_basis(i, k));
            }
        }
        acc
    }

    /// e_i · v.
    pub fn mul_basis_vec(&self, i: usize, v: &[K::Elem]) -> Vec<K::Elem> {
        let f = &self.field;
        let mut acc = vec![f.zero(); self.dim];
        for (k, c) in v.iter().enumerate() {
            if !f.is_zero(c) {
                f.row_axpy(&mut acc, c, self.mul_basis(i, k));
            }
        }
        acc
    }

    pub fn mul_vec(&self, u: &[K::Elem], v: &[K::Elem]) -> Vec<K::Elem> {
        let f = &self.field;
        let mut acc = vec![f.zero(); self.dim];
        for (i, a) in u.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let c = f.mul(a, b);
                f.row_axpy(&mut acc, &c, self.mul_basis(i, j));
            }
        }
        acc
    }

    pub fn basis_vec(&self, i: usize) -> Vec<K::Elem> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn pow_vec(&self, v: &[K::Elem], n: u64) -> Vec<K::Elem> {
        let mut acc = self.unit.clone();
        let mut base = v.to_vec();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_vec(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul_vec(&base, &base);
            }
        }
        acc
    }

    /// Matrix of multiplication by v (columns v·e_j).
    pub fn left_mult_matrix(&self, v: &[K::Elem]) -> Matrix<K> {
        let mut m = Matrix::zero(self.field.clone(), self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec_basis(v, j);
            for (i, val) in col.into_iter().enumerate() {
                m.set(i, j, val);
            }
        }
        m
    }

    /// Matrix of h ↦ h^p (linear over F_p). Errors over ℚ.
    pub fn frobenius_matrix(&self) -> Result<Matrix<K>> {
        let p = self.field.characteristic();
        if p == 0 {
            return Err(Error::UnsupportedField { op: "frobenius_matrix", field: "Q".into() });
        }
        let mut m = Matrix::zero(self.field.clone(), self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.pow_vec(&self.basis_vec(j), p);
            for (i, val) in col.into_iter().enumerate() {
                m.set(i, j, val);
            }
        }
        Ok(m)
    }

    /// Nilradical. Over F_p: kernel of the m-fold Frobenius iterate with
    /// p^m ≥ dim. Over ℚ: radical of the trace bilinear form.
    pub fn nilradical(&self) -> Result<Ideal<K>> {
        let f = &self.field;
        let p = f.characteristic();
        let space = if p > 0 {
            let frob = self.frobenius_matrix()?;
            let mut iterates = 1u64;
            let mut bound = p;
            while (bound as usize) < self.dim {
                bound = bound.saturating_mul(p);
                iterates += 1;
            }
            let mut power = frob.clone();
            for _ in 1..iterates {
                power = power.mul(&frob)?;
            }
            power.kernel_basis()
        } else {
            // tr(L_{e_i e_j}) as a bilinear form; its radical is the
            // nilradical in characteristic zero
            let mut trvec = vec![f.zero(); self.dim];
            for u in 0..self.dim {
                let mut t = f.zero();
                for s in 0..self.dim {
                    t = f.add(&t, &self.mul_basis(u, s)[s]);
                }
                trvec[u] = t;
            }
            let mut gram = Matrix::zero(f.clone(), self.dim, self.dim);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let mut t = f.zero();
                    for (u, c) in self.mul_basis(i, j).iter().enumerate() {
                        if !f.is_zero(c) {
                            t = f.add(&t, &f.mul(c, &trvec[u]));
                        }
                    }
                    gram.set(i, j, t);
                }
            }
            gram.kernel_basis()
        };
        Ideal::new(self, space)
    }

    /// Quotient by a validated ideal. Returns the quotient table and the
    /// projection matrix (quotient coordinates of each ambient basis
    /// element); the quotient basis is the canonical complement (ambient
    /// basis vectors at the ideal's free columns).
    pub fn quotient_by_ideal(&self, ideal: &Ideal<K>) -> Result<(AlgebraTable<K>, Matrix<K>)> {
        let f = self.field.clone();
        let space = &ideal.space;
        if space.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: space.ambient_dim() });
        }
        let free = space.free_cols();
        let qdim = free.len();
        if qdim == 0 {
            return Err(Error::InvalidInput("quotient by the whole algebra is empty".into()));
        }
        let mut proj = Matrix::zero(f.clone(), qdim, self.dim);
        for j in 0..self.dim {
            let mut v = vec![f.zero(); self.dim];
            v[j] = f.one();
            let r = space.reduce(&v);
            for (qi, &fc) in free.iter().enumerate() {
                proj.set(qi, j, r[fc].clone());
            }
        }
        let class_of = |v: &[K::Elem]| -> Vec<K::Elem> {
            let r = space.reduce(v);
            free.iter().map(|&fc| r[fc].clone()).collect()
        };
        let labels: Vec<String> = free.iter().map(|&fc| self.labels[fc].clone()).collect();
        let unit = class_of(&self.unit);
        let mut mult = Vec::with_capacity(qdim * qdim * qdim);
        for &fi in &free {
            for &fj in &free {
                mult.extend(class_of(self.mul_basis(fi, fj)));
            }
        }
        let table = AlgebraTable::from_structure_constants(f, labels, unit, mult)?;
        Ok((table, proj))
    }

    /// Tensor product with basis pairs ordered second-factor-fastest.
    pub fn tensor_product(&self, other: &AlgebraTable<K>) -> Result<AlgebraTable<K>> {
        if self.field != other.field {
            return Err(Error::InvalidInput("tensor factors over different fields".into()));
        }
        let f = self.field.clone();
        let da = self.dim;
        let db = other.dim;
        let dim = da * db;
        if dim > MAX_TABLE_DIM {
            return Err(Error::TooLarge { dim, max: MAX_TABLE_DIM });
        }
        let join = |la: &str, lb: &str| -> String {
            match (la, lb) {
                ("1", "1") => "1".to_string(),
                (a, "1") => a.to_string(),
                ("1", b) => b.to_string(),
                (a, b) => format!("{a}*{b}"),
            }
        };
        let mut labels = Vec::with_capacity(dim);
        for i in 0..da {
            for j in 0..db {
                labels.push(join(&self.labels[i], &other.labels[j]));
            }
        }
        let mut unit = vec![f.zero(); dim];
        for i in 0..da {
            for j in 0..db {
                unit[i * db + j] = f.mul(&self.unit[i], &other.unit[j]);
            }
        }
        let mut mult = vec![f.zero(); dim * dim * dim];
        for i1 in 0..da {
            for j1 in 0..db {
                for i2 in 0..da {
                    for j2 in 0..db {
                        let pa = self.mul_basis(i1, i2);
                        let pb = other.mul_basis(j1, j2);
                        let row = i1 * db + j1;
                        let col = i2 * db + j2;
                        let base = (row * dim + col) * dim;
                        for (u, cu) in pa.iter().enumerate() {
                            if f.is_zero(cu) {
                                continue;
                            }
                            for (v, cv) in pb.iter().enumerate() {
                                if f.is_zero(cv) {
                                    continue;
                                }
                                mult[base + u * db + v] = f.mul(cu, cv);
                            }
                        }
                    }
                }
            }
        }
        AlgebraTable::from_structure_constants(f, labels, unit, mult)
    }

    /// Restrict the table to a multiplicatively closed subspace containing
    /// the unit. Returns the subalgebra table and the inclusion matrix
    /// (dim × subdim, columns = subalgebra basis in ambient coordinates).
    pub fn subalgebra_on(&self, space: &Subspace<K>) -> Result<(AlgebraTable<K>, Matrix<K>)> {
        let f = self.field.clone();
        let sdim = space.dim();
        if space.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: space.ambient_dim() });
        }
        if space.solve_membership(&self.unit).is_none() {
            return Err(Error::InvalidInput("subspace does not contain the unit".into()));
        }
        let unit = space.solve_membership(&self.unit).unwrap();
        let mut mult = Vec::with_capacity(sdim * sdim * sdim);
        for i in 0..sdim {
            for j in 0..sdim {
                let w = self.mul_vec(space.basis_row(i), space.basis_row(j));
                match space.solve_membership(&w) {
                    Some(coords) => mult.extend(coords),
                    None => {
                        return Err(Error::InvalidInput(format!(
                            "subspace not multiplicatively closed at basis pair ({i}, {j})"
                        )))
                    }
                }
            }
        }
        let labels = (0..sdim).map(|i| format!("b{i}")).collect();
        let mut incl = Matrix::zero(f.clone(), self.dim, sdim);
        for j in 0..sdim {
            for i in 0..self.dim {
                incl.set(i, j, space.basis_row(j)[i].clone());
            }
        }
        let table = AlgebraTable::from_structure_constants(f, labels, unit, mult)?;
        Ok((table, incl))
    }

    /// Chain of ideal powers I ⊇ I² ⊇ … for an ideal subspace I, stopping
    /// when it stabilizes. Used for nilpotency questions.
    pub fn ideal_power_chain(&self, space: &Subspace<K>) -> Vec<Subspace<K>> {
        let mut chain = vec![space.clone()];
        loop {
            let last = chain.last().unwrap();
            let mut next = RowSpan::new(self.field.clone(), self.dim);
            for i in 0..last.dim() {
                for j in 0..space.dim() {
                    let w = self.mul_vec(last.basis_row(i), space.basis_row(j));
                    next.insert(w);
                }
            }
            let next = next.into_subspace();
            if &next == last {
                chain.push(next);
                break;
            }
            let done = next.dim() == 0;
            chain.push(next);
            if done {
                break;
            }
        }
        chain
    }
}

/// Ideal of an algebra, held as a canonical subspace. Construction checks
/// multiplicative absorption.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal<K: Field> {
    pub space: Subspace<K>,
}

impl<K: Field> Ideal<K> {
    pub fn new(alg: &AlgebraTable<K>, space: Subspace<K>) -> Result<Self> {
        for v in 0..space.dim() {
            for by in 0..alg.dim() {
                let w = alg.mul_vec_basis(space.basis_row(v), by);
                if !space.contains(&w) {
                    return Err(Error::NotAnIdeal { vec: v, by });
                }
            }
        }
        Ok(Ideal { space })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Algebra together with an algebra map to k (an augmentation).
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedAlgebra<K: Field> {
    pub alg: AlgebraTable<K>,
    pub counit: Vec<K::Elem>,
}

impl<K: Field> AugmentedAlgebra<K> {
    pub fn new_checked(alg: AlgebraTable<K>, counit: Vec<K::Elem>) -> Result<Self> {
        let f = alg.field().clone();
        if counit.len() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), got: counit.len() });
        }
        let eval = |v: &[K::Elem]| -> K::Elem {
            let mut acc = f.zero();
            for (c, e) in v.iter().zip(counit.iter()) {
                if !f.is_zero(c) {
                    acc = f.add(&acc, &f.mul(c, e));
                }
            }
            acc
        };
        if eval(alg.unit()) != f.one() {
            return Err(Error::BadCounit("counit of the unit is not 1".into()));
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = eval(alg.mul_basis(i, j));
                let rhs = f.mul(&counit[i], &counit[j]);
                if lhs != rhs {
                    return Err(Error::BadCounit(format!(
                        "not multiplicative at basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(AugmentedAlgebra { alg, counit })
    }

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
}

/// Enumeration of a box of exponent vectors 0 ≤ e_i < bounds_i in
/// mixed-radix order (last generator fastest). Every presentation kind used
/// here has exactly this box as its normal-form basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialBasis {
    pub names: Vec<String>,
    pub bounds: Vec<u32>,
    strides: Vec<usize>,
    pub dim: usize,
}

impl MonomialBasis {
    pub fn new(names: Vec<String>, bounds: Vec<u32>) -> Result<Self> {
        let mut dim = 1usize;
        for &b in &bounds {
            if b == 0 {
                return Err(Error::InvalidPresentation("zero exponent bound".into()));
            }
            dim = dim
                .checked_mul(b as usize)
                .ok_or_else(|| Error::InvalidPresentation("basis too large".into()))?;
            if dim > MAX_TABLE_DIM {
                return Err(Error::TooLarge { dim, max: MAX_TABLE_DIM });
            }
        }
        let mut strides = vec![1usize; bounds.len()];
        for i in (0..bounds.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * bounds[i + 1] as usize;
        }
        Ok(MonomialBasis { names, bounds, strides, dim })
    }

    pub fn index_of(&self, exps: &[u32]) -> usize {
        exps.iter()
            .zip(self.strides.iter())
            .map(|(&e, &s)| e as usize * s)
            .sum()
    }

    pub fn exps_of(&self, mut index: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.bounds.len()];
        for (i, &s) in self.strides.iter().enumerate() {
            out[i] = (index / s) as u32;
            index %= s;
        }
        out
    }

    pub fn label(&self, index: usize) -> String {
        let exps = self.exps_of(index);
        let mut parts = Vec::new();
        for (name, &e) in self.names.iter().zip(exps.iter()) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Rewrite system for bounded monomial presentations: generator i satisfies
/// gen_i^bounds_i = rhs_i (a polynomial in normal form). Reduction replaces
/// the lowest-index maximal power until the exponent vector lies in the box.
pub struct RewriteSystem<K: Field> {
    pub field: K,
    pub basis: MonomialBasis,
    /// rhs polynomial per generator: list of (coefficient, exponent vector)
    pub rhs: Vec<Vec<(K::Elem, Vec<u32>)>>,
}

impl<K: Field> RewriteSystem<K> {
    /// Reduce coeff·gen^exps to normal form, accumulating into `out`
    /// (a dense coefficient vector over the monomial basis).
    pub fn reduce_into(&self, coeff: K::Elem, exps: Vec<u32>, out: &mut [K::Elem]) -> Result<()> {
        let f = &self.field;
        let budget_base: u64 = self.basis.bounds.iter().map(|&b| b as u64).sum();
        let mut budget = 10 * budget_base.max(1);
        let mut work = vec![(coeff, exps)];
        while let Some((c, e)) = work.pop() {
            if f.is_zero(&c) {
                continue;
            }
            let mut reducible = None;
            for (i, (&ei, &bi)) in e.iter().zip(self.basis.bounds.iter()).enumerate() {
                if ei >= bi {
                    reducible = Some(i);
                    break;
                }
            }
            match reducible {
                None => {
                    let idx = self.basis.index_of(&e);
                    out[idx] = f.add(&out[idx], &c);
                }
                Some(i) => {
                    if budget == 0 {
                        return Err(Error::RewriteBudgetExceeded);
                    }
                    budget -= 1;
                    let mut base = e;
                    base[i] -= self.basis.bounds[i];
                    for (rc, re) in &self.rhs[i] {
                        let mut merged = base.clone();
                        for (m, &r) in merged.iter_mut().zip(re.iter()) {
                            *m = m
                                .checked_add(r)
                                .ok_or_else(|| Error::InvalidPresentation("exponent overflow".into()))?;
                        }
                        work.push((f.mul(&c, rc), merged));
                    }
                }
            }
        }
        Ok(())
    }

    /// Build the full structure-constant table (validated).
    pub fn build_table(&self) -> Result<AlgebraTable<K>> {
        let f = self.field.clone();
        let dim = self.basis.dim;
        let labels: Vec<String> = (0..dim).map(|i| self.basis.label(i)).collect();
        let mut unit = vec![f.zero(); dim];
        unit[0] = f.one();
        let mut mult = vec![f.zero(); dim * dim * dim];
        for i in 0..dim {
            let ei = self.basis.exps_of(i);
            for j in 0..dim {
                let ej = self.basis.exps_of(j);
                let merged: Vec<u32> = ei.iter().zip(ej.iter()).map(|(a, b)| a + b).collect();
                let base = (i * dim + j) * dim;
                self.reduce_into(f.one(), merged, &mut mult[base..base + dim])?;
            }
        }
        AlgebraTable::from_structure_constants(f, labels, unit, mult)
    }
}

fn pow_u32(p: u64, e: u32) -> Result<u32> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(p);
        if acc > u32::MAX as u64 {
            return Err(Error::InvalidPresentation("p-power exponent too large".into()));
        }
    }
    Ok(acc as u32)
}

/// k[G] for G = ⊕ ℤ/orders_i, basis = exponent box, x_i^orders_i = 1.
pub fn group_algebra_table<K: Field>(field: &K, orders: &[u64]) -> Result<(AlgebraTable<K>, MonomialBasis)> {
    if orders.is_empty() {
        return Err(Error::InvalidPresentation("group needs at least one cyclic factor".into()));
    }
    if orders.iter().any(|&o| o < 2) {
        return Err(Error::InvalidPresentation("cyclic orders must be > 1".into()));
    }
    let names: Vec<String> = (1..=orders.len()).map(|i| format!("x{i}")).collect();
    let bounds: Vec<u32> = orders
        .iter()
        .map(|&o| u32::try_from(o).map_err(|_| Error::InvalidPresentation("order too large".into())))
        .collect::<Result<_>>()?;
    let basis = MonomialBasis::new(names, bounds)?;
    let rhs = orders
        .iter()
        .map(|_| vec![(field.one(), vec![0u32; orders.len()])])
        .collect();
    let rs = RewriteSystem { field: field.clone(), basis: basis.clone(), rhs };
    Ok((rs.build_table()?, basis))
}

/// k[x_1,…,x_r]/(x_i^{p^{e_i}}), char p. Basis bounds p^{e_i}.
pub fn truncated_primitive_table<K: Field>(
    field: &K,
    exponents: &[u32],
) -> Result<(AlgebraTable<K>, MonomialBasis)> {
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::UnsupportedField { op: "truncated_primitive", field: "Q".into() });
    }
    if exponents.is_empty() || exponents.iter().any(|&e| e == 0) {
        return Err(Error::InvalidPresentation("exponents must be positive".into()));
    }
    let names: Vec<String> = (1..=exponents.len()).map(|i| format!("x{i}")).collect();
    let bounds: Vec<u32> = exponents.iter().map(|&e| pow_u32(p, e)).collect::<Result<_>>()?;
    let basis = MonomialBasis::new(names, bounds)?;
    let rhs = exponents.iter().map(|_| Vec::new()).collect();
    let rs = RewriteSystem { field: field.clone(), basis: basis.clone(), rhs };
    Ok((rs.build_table()?, basis))
}

/// k[y_1,…,y_n]/(y_i^{p^i} − y_1^p for 2 ≤ i ≤ n, y_1^{p^M}), char p.
/// Normal-form bounds: y_1 < p^M, y_i < p^i.
pub fn chained_power_table<K: Field>(
    field: &K,
    n: usize,
    m: u32,
) -> Result<(AlgebraTable<K>, MonomialBasis)> {
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::UnsupportedField { op: "sample1_truncated", field: "Q".into() });
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidPresentation("need n >= 1 and M >= 1".into()));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let mut bounds = vec![pow_u32(p, m)?];
    for i in 2..=n {
        bounds.push(pow_u32(p, i as u32)?);
    }
    let basis = MonomialBasis::new(names, bounds)?;
    let mut rhs: Vec<Vec<(K::Elem, Vec<u32>)>> = vec![Vec::new()];
    for _i in 2..=n {
        let mut e = vec![0u32; n];
        e[0] = p as u32;
        rhs.push(vec![(field.one(), e)]);
    }
    let rs = RewriteSystem { field: field.clone(), basis: basis.clone(), rhs };
    Ok((rs.build_table()?, basis))
}

/// Dual-number extension of a group algebra: generators τ, z_1,…,z_q with
/// τ² = 0 and z_i^{o_i} = 1 + a_i·τ. Basis is τ-major (τ exponent is the
/// slowest-varying digit), so index δ·|G| + g matches the crossed-product
/// layout.
pub fn dual_group_table<K: Field>(
    field: &K,
    orders: &[u64],
    a: &[K::Elem],
) -> Result<(AlgebraTable<K>, MonomialBasis)> {
    if a.len() != orders.len() {
        return Err(Error::InvalidPresentation(format!(
            "expected {} cocycle parameters, got {}",
            orders.len(),
            a.len()
        )));
    }
    if orders.iter().any(|&o| o < 2) {
        return Err(Error::InvalidPresentation("cyclic orders must be > 1".into()));
    }
    let q = orders.len();
    let mut names = vec!["tau".to_string()];
    names.extend((1..=q).map(|i| format!("z{i}")));
    let mut bounds = vec![2u32];
    for &o in orders {
        bounds.push(u32::try_from(o).map_err(|_| Error::InvalidPresentation("order too large".into()))?);
    }
    let basis = MonomialBasis::new(names, bounds)?;
    let mut rhs: Vec<Vec<(K::Elem, Vec<u32>)>> = vec![Vec::new()]; // tau^2 = 0
    for ai in a {
        let one_mon = vec![0u32; q + 1];
        let mut tau_mon = vec![0u32; q + 1];
        tau_mon[0] = 1;
        let mut rules = vec![(field.one(), one_mon)];
        if !field.is_zero(ai) {
            rules.push((ai.clone(), tau_mon));
        }
        rhs.push(rules);
    }
    let rs = RewriteSystem { field: field.clone(), basis: basis.clone(), rhs };
    Ok((rs.build_table()?, basis))
}

/// Dual-number extension of the chained p-power algebra: generators
/// τ, z_1,…,z_n with τ² = 0, z_1^{p^M} = 0 and
/// z_{i+1}^{p^{i+1}} = z_i^{p^i} − c_i·τ. τ-major basis as above.
pub fn dual_chained_power_table<K: Field>(
    field: &K,
    n: usize,
    m: u32,
    c: &[K::Elem],
) -> Result<(AlgebraTable<K>, MonomialBasis)> {
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::UnsupportedField { op: "dual_number_extension", field: "Q".into() });
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidPresentation("need n >= 1 and M >= 1".into()));
    }
    if c.len() + 1 != n {
        return Err(Error::InvalidPresentation(format!(
            "expected {} chain parameters, got {}",
            n - 1,
            c.len()
        )));
    }
    let mut names = vec!["tau".to_string()];
    names.extend((1..=n).map(|i| format!("z{i}")));
    let mut bounds = vec![2u32, pow_u32(p, m)?];
    for i in 2..=n {
        bounds.push(pow_u32(p, i as u32)?);
    }
    let basis = MonomialBasis::new(names, bounds)?;
    let mut rhs: Vec<Vec<(K::Elem, Vec<u32>)>> = vec![Vec::new(), Vec::new()];
    for i in 2..=n {
        // z_i^{p^i} = z_{i-1}^{p^{i-1}} - c_{i-1} τ
        let mut prev = vec![0u32; n + 1];
        prev[i - 1] = pow_u32(p, (i - 1) as u32)?;
        let mut tau_mon = vec![0u32; n + 1];
        tau_mon[0] = 1;
        let ci = &c[i - 2];
        let mut rules = vec![(field.one(), prev)];
        if !field.is_zero(ci) {
            rules.push((field.neg(ci), tau_mon));
        }
        rhs.push(rules);
    }
    let rs = RewriteSystem { field: field.clone(), basis: basis.clone(), rhs };
    Ok((rs.build_table()?, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{Fp, Rationals};

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }
    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn group_algebra_z2_multiplies_by_exponent_addition() {
        let (a, _) = group_algebra_table(&f2(), &[2]).unwrap();
        assert_eq!(a.dim(), 2);
        // x * x = 1
        assert_eq!(a.mul_basis(1, 1), &[1u64, 0]);
    }

    #[test]
    fn group_algebra_over_q_has_expected_dim() {
        let (a, _) = group_algebra_table(&Rationals, &[3]).unwrap();
        assert_eq!(a.dim(), 3);
    }

    #[test]
    fn truncated_primitive_truncates() {
        let (a, basis) = truncated_primitive_table(&f2(), &[2]).unwrap();
        assert_eq!(a.dim(), 4);
        // x^2 * x^2 = x^4 = 0
        let i = basis.index_of(&[2]);
        assert!(a.mul_basis(i, i).iter().all(|v| *v == 0));
        // x * x^2 = x^3
        let x = basis.index_of(&[1]);
        let x3 = basis.index_of(&[3]);
        let prod = a.mul_basis(x, i);
        assert_eq!(prod[x3], 1);
        assert!(prod.iter().enumerate().all(|(k, v)| k == x3 || *v == 0));
    }

    #[test]
    fn chained_power_dimensions() {
        let (a, basis) = chained_power_table(&f2(), 2, 1).unwrap();
        assert_eq!(a.dim(), 8);
        assert_eq!(basis.bounds, vec![2, 4]);
        // y2^4 = y1^2 = 0
        let y2sq = basis.index_of(&[0, 2]);
        assert!(a.mul_basis(y2sq, y2sq).iter().all(|v| *v == 0));
        let (b, _) = chained_power_table(&f2(), 2, 2).unwrap();
        assert_eq!(b.dim(), 16);
    }

    #[test]
    fn rejects_broken_unit_row() {
        let f = f2();
        let (good, _) = group_algebra_table(&f, &[2]).unwrap();
        let mut mult: Vec<u64> = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                mult.extend_from_slice(good.mul_basis(i, j));
            }
        }
        mult[0] = 0; // 1·1 no longer equals 1
        let res = AlgebraTable::from_structure_constants(
            f,
            vec!["1".into(), "e".into()],
            vec![1, 0],
            mult,
        );
        assert!(matches!(res, Err(Error::BadUnit(_))));
    }

    #[test]
    fn detects_broken_associativity_with_witness() {
        let f = f3();
        // commutative but (a·a)·b = b·b = a while a·(a·b) = a·a = b
        let dim = 3;
        let mut mult = vec![0u64; dim * dim * dim];
        let mut set = |i: usize, j: usize, k: usize, v: u64| {
            mult[(i * dim + j) * dim + k] = v;
        };
        for t in 0..dim {
            set(0, t, t, 1);
            set(t, 0, t, 1);
        }
        set(1, 1, 2, 1);
        set(1, 2, 1, 1);
        set(2, 1, 1, 1);
        set(2, 2, 1, 1);
        let res = AlgebraTable::from_structure_constants(
            f,
            vec!["1".into(), "a".into(), "b".into()],
            vec![1, 0, 0],
            mult,
        );
        assert!(matches!(res, Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn nilradical_of_group_algebra_char_divides_order() {
        let (a, _) = group_algebra_table(&f2(), &[2]).unwrap();
        let nil = a.nilradical().unwrap();
        assert_eq!(nil.dim(), 1);
        // spanned by 1 + g
        assert_eq!(nil.space.basis_row(0), &[1u64, 1]);
    }

    #[test]
    fn nilradical_vanishes_in_char_zero() {
        let (a, _) = group_algebra_table(&Rationals, &[4]).unwrap();
        assert_eq!(a.nilradical().unwrap().dim(), 0);
    }

    #[test]
    fn nilradical_of_coprime_group_algebra_vanishes() {
        let (a, _) = group_algebra_table(&f3(), &[2]).unwrap();
        assert_eq!(a.nilradical().unwrap().dim(), 0);
    }

    #[test]
    fn quotient_by_nilradical_is_reduced() {
        let (a, _) = group_algebra_table(&f2(), &[4]).unwrap();
        let nil = a.nilradical().unwrap();
        assert_eq!(nil.dim(), 3);
        let (q, proj) = a.quotient_by_ideal(&nil).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(proj.rows(), 1);
        assert_eq!(q.nilradical().unwrap().dim(), 0);
    }

    #[test]
    fn frobenius_rank_of_truncated_line() {
        let (a, _) = truncated_primitive_table(&f3(), &[1]).unwrap();
        // k[x]/(x^3), Frobenius image = span{1}
        assert_eq!(a.frobenius_matrix().unwrap().rank(), 1);
    }

    #[test]
    fn frobenius_rejected_over_q() {
        let (a, _) = group_algebra_table(&Rationals, &[2]).unwrap();
        assert!(a.frobenius_matrix().is_err());
    }

    #[test]
    fn tensor_of_group_algebras_matches_product_group() {
        let f = f2();
        let (a, _) = group_algebra_table(&f, &[2]).unwrap();
        let t = a.tensor_product(&a).unwrap();
        let (g22, _) = group_algebra_table(&f, &[2, 2]).unwrap();
        assert_eq!(t.dim(), g22.dim());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(t.mul_basis(i, j), g22.mul_basis(i, j));
            }
        }
    }

    #[test]
    fn dual_group_extension_relations() {
        let f = f2();
        let (a, basis) = dual_group_table(&f, &[2], &[1]).unwrap();
        assert_eq!(a.dim(), 4);
        let z = basis.index_of(&[0, 1]);
        let tau = basis.index_of(&[1, 0]);
        // z^2 = 1 + tau
        let sq = a.mul_basis(z, z);
        assert_eq!(sq[0], 1);
        assert_eq!(sq[tau], 1);
        // tau^2 = 0
        assert!(a.mul_basis(tau, tau).iter().all(|v| *v == 0));
    }

    #[test]
    fn dual_chained_power_relations() {
        let f = f2();
        let (a, basis) = dual_chained_power_table(&f, 2, 1, &[1]).unwrap();
        assert_eq!(a.dim(), 16);
        // z2^2 squared = z2^4 = z1^2 - c tau = c tau (z1^2 = 0)
        let z2sq = basis.index_of(&[0, 0, 2]);
        let tau = basis.index_of(&[1, 0, 0]);
        let fourth = a.mul_basis(z2sq, z2sq);
        assert_eq!(fourth[tau], 1);
        assert!(fourth.iter().enumerate().all(|(k, v)| k == tau || *v == 0));
        // dual extension with c = 0 is the trivial extension: z2^4 = 0
        let (a0, basis0) = dual_chained_power_table(&f, 2, 1, &[0]).unwrap();
        let z2sq0 = basis0.index_of(&[0, 0, 2]);
        assert!(a0.mul_basis(z2sq0, z2sq0).iter().all(|v| *v == 0));
    }

    #[test]
    fn augmented_algebra_rejects_non_multiplicative_counit() {
        let (a, _) = group_algebra_table(&f2(), &[2]).unwrap();
        // ε(g) = 0 is not an algebra map on k[Z/2] (g² = 1 ⇒ ε(g)² = 1)
        let res = AugmentedAlgebra::new_checked(a.clone(), vec![1, 0]);
        assert!(res.is_err());
        let ok = AugmentedAlgebra::new_checked(a, vec![1, 1]);
        assert!(ok.is_ok());
    }

    #[test]
    fn ideal_power_chain_reaches_zero_for_nilpotent_ideal() {
        let (a, basis) = truncated_primitive_table(&f2(), &[2]).unwrap();
        // augmentation ideal of k[x]/(x^4)
        let rows: Vec<Vec<u64>> = (1..4)
            .map(|e| {
                let mut v = vec![0u64; 4];
                v[basis.index_of(&[e])] = 1;
                v
            })
            .collect();
        let space = crate::exactla::Subspace::from_spanning_rows(f2(), 4, rows);
        let chain = a.ideal_power_chain(&space);
        assert_eq!(chain.last().unwrap().dim(), 0);
        assert!(chain.len() <= 5);
    }
}
