//! Exact dense linear algebra over the prime fields F_p and over ℚ.
//!
//! Everything downstream (algebra tables, cohomology, the decomposition
//! algorithm) reduces to the operations here. Canonical forms matter more
//! than speed of any single call: `rref` produces the unique reduced row
//! echelon form (pivots 1, pivot columns otherwise zero, pivot columns
//! strictly increasing), so two `Subspace` values are equal as subspaces
//! if and only if they are equal as representations.

use crate::error::{Error, Result};
use num::BigRational;
use num::{One, Zero};
use std::fmt;
use std::str::FromStr;

/// Field of coefficients, passed by value as a context object. `Elem` is the
/// element representation: `u64` residues for F_p, exact reduced fractions
/// for ℚ.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    /// 0 for ℚ, p for F_p.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// y += c·x elementwise. Row-operation hot path; F_p overrides this.
    fn row_axpy(&self, y: &mut [Self::Elem], c: &Self::Elem, x: &[Self::Elem]) {
        debug_assert_eq!(y.len(), x.len());
        for (yi, xi) in y.iter_mut().zip(x.iter()) {
            *yi = self.add(yi, &self.mul(c, xi));
        }
    }

    /// row *= c elementwise.
    fn row_scale(&self, row: &mut [Self::Elem], c: &Self::Elem) {
        for v in row.iter_mut() {
            *v = self.mul(v, c);
        }
    }
}

/// Prime field F_p with residues in [0, p). Barrett reduction keeps the
/// elimination inner loops free of hardware division; p is capped well below
/// 2^31 so products of residues fit in u64.
#[derive(Clone, PartialEq, Eq)]
pub struct Fp {
    p: u64,
    // floor(2^64 / p)
    barrett: u64,
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidInput(format!("prime {p} too large (max 2^31)")));
        }
        let barrett = ((u128::from(u64::MAX) + 1) / u128::from(p)) as u64;
        Ok(Fp { p, barrett })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline(always)]
    fn reduce(&self, t: u64) -> u64 {
        // t < p^2 + p, so the Barrett quotient is off by at most 2.
        let q = ((u128::from(t) * u128::from(self.barrett)) >> 64) as u64;
        let mut r = t.wrapping_sub(q.wrapping_mul(self.p));
        while r >= self.p {
            r -= self.p;
        }
        r
    }
}

impl Field for Fp {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline(always)]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline(always)]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline(always)]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline(always)]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce(a * b)
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid on (a, p)
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut r, mut new_r): (i128, i128) = (self.p as i128, *a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        Ok(t.rem_euclid(self.p as i128) as u64)
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let v: i128 = s.trim().parse().map_err(|_| Error::BadScalar {
            text: s.to_string(),
            field: format!("F{}", self.p),
        })?;
        Ok(v.rem_euclid(self.p as i128) as u64)
    }

    #[inline]
    fn row_axpy(&self, y: &mut [u64], c: &u64, x: &[u64]) {
        let c = *c;
        if c == 0 {
            return;
        }
        let p = self.p;
        let barrett = self.barrett;
        for (yi, xi) in y.iter_mut().zip(x.iter()) {
            let t = *yi + c * *xi;
            let q = ((u128::from(t) * u128::from(barrett)) >> 64) as u64;
            let mut r = t.wrapping_sub(q.wrapping_mul(p));
            while r >= p {
                r -= p;
            }
            *yi = r;
        }
    }

    #[inline]
    fn row_scale(&self, row: &mut [u64], c: &u64) {
        let c = *c;
        for v in row.iter_mut() {
            *v = self.reduce(*v * c);
        }
    }
}

/// The rationals with exact `BigRational` arithmetic.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        BigRational::from_str(s.trim()).map_err(|_| Error::BadScalar {
            text: s.to_string(),
            field: "Q".to_string(),
        })
    }
}

/// Runtime field descriptor used at dispatch boundaries (CLI, JSON, corpus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn from_characteristic(c: u64) -> Result<Self> {
        if c == 0 {
            Ok(FieldSpec::Rationals)
        } else if is_prime(c) {
            Ok(FieldSpec::Prime(c))
        } else {
            Err(Error::NotPrime(c))
        }
    }

    /// Token form used by CLI presets: `Q` or `F<p>`.
    pub fn parse_token(tok: &str) -> Result<Self> {
        let t = tok.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t.strip_prefix('F').or_else(|| t.strip_prefix('f')).unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidInput(format!("cannot parse field token {tok:?}")))?;
        Self::from_characteristic(p)
    }

    pub fn token(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }
}

/// Dense row-major matrix over `K`.
#[derive(Clone, PartialEq)]
pub struct Matrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?} [", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| self.field.format(v)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<K: Field> Matrix<K> {
    pub fn zero(field: K, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: K, rows: Vec<Vec<K::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
            data.extend(row.iter().cloned());
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    /// Convenience for tests and fixtures: entries given as i64.
    pub fn from_i64(field: K, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            for &v in *row {
                data.push(field.from_i64(v));
            }
        }
        Matrix { field, rows: r, cols: c, data }
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [K::Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let field = self.field.clone();
        let mut out = Self::zero(field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).clone();
                if field.is_zero(&a) {
                    continue;
                }
                field.row_axpy(out.row_mut(i), &a, other.row(k));
            }
        }
        Ok(out)
    }

    /// M · v for a column vector v.
    pub fn mul_vec(&self, v: &[K::Elem]) -> Result<Vec<K::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = vec![self.field.zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = self.field.zero();
            for j in 0..self.cols {
                if !self.field.is_zero(&v[j]) {
                    acc = self.field.add(&acc, &self.field.mul(self.get(i, j), &v[j]));
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// vᵀ · M for a row vector v.
    pub fn vec_mul(&self, v: &[K::Elem]) -> Result<Vec<K::Elem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: v.len() });
        }
        let mut out = vec![self.field.zero(); self.cols];
        for i in 0..self.rows {
            if !self.field.is_zero(&v[i]) {
                self.field.row_axpy(&mut out, &v[i], self.row(i));
            }
        }
        Ok(out)
    }

    pub fn add_matrix(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("add".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = self.field.add(a, b);
        }
        Ok(out)
    }

    pub fn sub_matrix(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("sub".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = self.field.sub(a, b);
        }
        Ok(out)
    }

    /// In-place reduction to the canonical reduced row echelon form.
    /// Returns the pivot column indices. Zero rows end up at the bottom.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let field = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        let mut scratch = vec![field.zero(); self.cols];
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // find a pivot at or below row r
            let mut pr = None;
            for i in r..self.rows {
                if !field.is_zero(self.get(i, c)) {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in c..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = field
                .inv(self.get(r, c))
                .expect("pivot is nonzero by construction");
            field.row_scale(&mut self.row_mut(r)[c..], &inv);
            scratch[c..].clone_from_slice(&self.row(r)[c..]);
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if field.is_zero(&factor) {
                    continue;
                }
                let nf = field.neg(&factor);
                field.row_axpy(&mut self.row_mut(i)[c..], &nf, &scratch[c..]);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Self {
        let mut m = self.clone();
        m.rref_in_place();
        m
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Canonical basis of the right null space { v : M·v = 0 }.
    pub fn kernel_basis(&self) -> Subspace<K> {
        let field = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[f] = field.one();
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = field.neg(m.get(i, f));
            }
            basis.push(v);
        }
        Subspace::from_spanning_rows(field, self.cols, basis)
    }

    /// Canonical basis of the column space, as a subspace of k^rows.
    pub fn column_space(&self) -> Subspace<K> {
        let t = self.transpose();
        let rows: Vec<Vec<K::Elem>> = (0..t.rows()).map(|i| t.row(i).to_vec()).collect();
        Subspace::from_spanning_rows(self.field.clone(), self.rows, rows)
    }

    /// One solution of M·x = b with all free variables zero (the canonical
    /// echelon solution), or `NoSolution`.
    pub fn solve(&self, b: &[K::Elem]) -> Result<Vec<K::Elem>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let rhs = Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: 1,
            data: b.to_vec(),
        };
        self.solve_many(&rhs).map_err(|_| Error::NoSolution).map(|sols| {
            (0..self.cols).map(|i| sols.get(i, 0).clone()).collect()
        })
    }

    /// Solve M·X = RHS column by column (shared elimination). On failure
    /// returns the index of the first unsolvable right-hand column.
    pub fn solve_many(&self, rhs: &Matrix<K>) -> std::result::Result<Matrix<K>, usize> {
        assert_eq!(self.rows, rhs.rows, "solve_many shape mismatch");
        let field = self.field.clone();
        let n = self.cols;
        let k = rhs.cols;
        let mut aug = Matrix::zero(field.clone(), self.rows, n + k);
        for i in 0..self.rows {
            aug.row_mut(i)[..n].clone_from_slice(self.row(i));
            aug.row_mut(i)[n..].clone_from_slice(rhs.row(i));
        }
        // eliminate using pivots from the coefficient block only
        let mut pivots = Vec::new();
        let mut r = 0usize;
        let mut scratch = vec![field.zero(); n + k];
        for c in 0..n {
            if r == aug.rows {
                break;
            }
            let mut pr = None;
            for i in r..aug.rows {
                if !field.is_zero(aug.get(i, c)) {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in c..n + k {
                    aug.data.swap(pr * (n + k) + j, r * (n + k) + j);
                }
            }
            let inv = field.inv(aug.get(r, c)).expect("nonzero pivot");
            field.row_scale(&mut aug.row_mut(r)[c..], &inv);
            scratch[c..].clone_from_slice(&aug.row(r)[c..]);
            for i in 0..aug.rows {
                if i == r {
                    continue;
                }
                let factor = aug.get(i, c).clone();
                if field.is_zero(&factor) {
                    continue;
                }
                let nf = field.neg(&factor);
                field.row_axpy(&mut aug.row_mut(i)[c..], &nf, &scratch[c..]);
            }
            pivots.push(c);
            r += 1;
        }
        // rows past the last pivot must have zero right-hand side
        for i in r..aug.rows {
            for j in 0..k {
                if !field.is_zero(aug.get(i, n + j)) {
                    return Err(j);
                }
            }
        }
        let mut sols = Matrix::zero(field.clone(), n, k);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..k {
                sols.set(pc, j, aug.get(i, n + j).clone());
            }
        }
        Ok(sols)
    }

    /// Map every entry through the field's formatter (for JSON export).
    pub fn format_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| self.field.format(v)).collect())
            .collect()
    }
}

/// Subspace of k^ambient in canonical form: basis rows are a reduced row
/// echelon matrix with no zero rows. Representation equality coincides with
/// subspace equality.
#[derive(Clone, PartialEq)]
pub struct Subspace<K: Field> {
    ambient: usize,
    basis: Matrix<K>,
    pivots: Vec<usize>,
}

impl<K: Field> fmt::Debug for Subspace<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of k^{}) {:?}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

impl<K: Field> Subspace<K> {
    pub fn zero_space(field: K, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zero(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full_space(field: K, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_spanning_rows(field: K, ambient: usize, rows: Vec<Vec<K::Elem>>) -> Self {
        let mut span = RowSpan::new(field, ambient);
        for r in rows {
            span.insert(r);
        }
        span.into_subspace()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<K> {
        &self.basis
    }

    pub fn basis_row(&self, i: usize) -> &[K::Elem] {
        self.basis.row(i)
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns without a pivot: coordinates of the canonical complement.
    pub fn free_cols(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// v minus its span component: zero iff v lies in the subspace. The
    /// result has zeros in all pivot columns, so it is a canonical coset
    /// representative for v modulo this subspace.
    pub fn reduce(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(v.len(), self.ambient);
        let field = self.basis.field().clone();
        let mut out = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc].clone();
            if field.is_zero(&c) {
                continue;
            }
            let nf = field.neg(&c);
            field.row_axpy(&mut out[pc..], &nf, &self.basis.row(i)[pc..]);
        }
        out
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        let field = self.basis.field();
        self.reduce(v).iter().all(|x| field.is_zero(x))
    }

    /// Coordinates of v in the canonical basis, or None if v is outside.
    pub fn solve_membership(&self, v: &[K::Elem]) -> Option<Vec<K::Elem>> {
        if !self.contains(v) {
            return None;
        }
        // with rref basis rows, coordinates are read off at the pivot columns
        Some(self.pivots.iter().map(|&c| v[c].clone()).collect())
    }

    /// Direct sum basis with another subspace's spanning set (not required
    /// to be independent; result is the sum of the two subspaces).
    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        assert_eq!(self.ambient, other.ambient);
        let mut rows: Vec<Vec<K::Elem>> = (0..self.dim()).map(|i| self.basis_row(i).to_vec()).collect();
        rows.extend((0..other.dim()).map(|i| other.basis_row(i).to_vec()));
        Subspace::from_spanning_rows(self.basis.field().clone(), self.ambient, rows)
    }
}

/// Incremental row-space accumulator: rows are kept in pivot-sorted echelon
/// form with normalized pivots but are not back-reduced until extraction.
/// This is the workhorse for spans of large generated families (e.g. images
/// of a differential indexed by basis triples).
pub struct RowSpan<K: Field> {
    field: K,
    width: usize,
    rows: Vec<Vec<K::Elem>>,
    pivots: Vec<usize>,
}

impl<K: Field> RowSpan<K> {
    pub fn new(field: K, width: usize) -> Self {
        RowSpan { field, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduce v against the current echelon in place.
    pub fn reduce_in_place(&self, v: &mut [K::Elem]) {
        debug_assert_eq!(v.len(), self.width);
        for (row, &pc) in self.rows.iter().zip(self.pivots.iter()) {
            let c = v[pc].clone();
            if self.field.is_zero(&c) {
                continue;
            }
            let nf = self.field.neg(&c);
            self.field.row_axpy(&mut v[pc..], &nf, &row[pc..]);
        }
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<K::Elem>) -> bool {
        assert_eq!(v.len(), self.width);
        self.reduce_in_place(&mut v);
        let lead = v.iter().position(|x| !self.field.is_zero(x));
        let Some(lead) = lead else { return false };
        let inv = self.field.inv(&v[lead]).expect("leading entry nonzero");
        self.field.row_scale(&mut v[lead..], &inv);
        let pos = self.pivots.partition_point(|&p| p < lead);
        self.rows.insert(pos, v);
        self.pivots.insert(pos, lead);
        true
    }

    /// Back-reduce to the canonical subspace.
    pub fn into_subspace(mut self) -> Subspace<K> {
        let field = self.field.clone();
        let n = self.rows.len();
        for i in (0..n).rev() {
            let pc = self.pivots[i];
            let lower = self.rows[i].clone();
            for j in 0..i {
                let c = self.rows[j][pc].clone();
                if field.is_zero(&c) {
                    continue;
                }
                let nf = field.neg(&c);
                field.row_axpy(&mut self.rows[j][pc..], &nf, &lower[pc..]);
            }
        }
        let basis = Matrix::from_rows(field, self.rows).unwrap_or_else(|_| unreachable!());
        let mut basis = basis;
        if basis.rows() == 0 {
            basis = Matrix::zero(self.field.clone(), 0, self.width);
        }
        Subspace { ambient: self.width, basis, pivots: self.pivots }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }
    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    #[test]
    fn rref_normalizes_single_entry_over_f5() {
        let m = Matrix::from_i64(f5(), &[&[2]]);
        let r = m.rref();
        assert_eq!(r, Matrix::from_i64(f5(), &[&[1]]));
    }

    #[test]
    fn rref_leaves_zero_rows_at_bottom_over_f2() {
        let m = Matrix::from_i64(f2(), &[&[1, 1], &[1, 1]]);
        let r = m.rref();
        assert_eq!(r, Matrix::from_i64(f2(), &[&[1, 1], &[0, 0]]));
    }

    #[test]
    fn rank_reduces_entries_mod_char() {
        let m = Matrix::from_i64(f2(), &[&[2, 4], &[1, 2]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_sum_functional_over_f2() {
        let m = Matrix::from_i64(f2(), &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis_row(0), &[1u64, 1]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let q = Rationals;
        let m = Matrix::from_i64(q.clone(), &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        for i in 0..k.dim() {
            let img = m.mul_vec(k.basis_row(i)).unwrap();
            assert!(img.iter().all(|v| q.is_zero(v)));
        }
    }

    #[test]
    fn membership_coordinates_reconstruct_vector() {
        let f = Fp::new(3).unwrap();
        let s = Subspace::from_spanning_rows(
            f.clone(),
            3,
            vec![vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 1]],
        );
        assert_eq!(s.dim(), 2);
        let v = vec![2u64, 1, 0];
        match s.solve_membership(&v) {
            Some(coords) => {
                let mut acc = vec![0u64; 3];
                for (i, c) in coords.iter().enumerate() {
                    f.row_axpy(&mut acc, c, s.basis_row(i));
                }
                assert_eq!(acc, v);
            }
            None => {
                // if outside, reduction must be nonzero
                assert!(!s.contains(&v));
            }
        }
    }

    #[test]
    fn solve_returns_canonical_solution() {
        let f = f5();
        let m = Matrix::from_i64(f, &[&[1, 2, 0], &[0, 0, 1]]);
        let x = m.solve(&[3, 4]).unwrap();
        // free column 1 stays zero
        assert_eq!(x, vec![3, 0, 4]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f = f2();
        let m = Matrix::from_i64(f, &[&[1, 1], &[1, 1]]);
        assert!(m.solve(&[1, 0]).is_err());
    }

    #[test]
    fn subspace_equality_is_representation_equality() {
        let f = f5();
        let a = Subspace::from_spanning_rows(f.clone(), 3, vec![vec![1, 2, 3], vec![0, 1, 4]]);
        let b = Subspace::from_spanning_rows(
            f.clone(),
            3,
            vec![vec![2, 4, 6], vec![1, 3, 2], vec![1, 4, 1]],
        );
        assert_eq!(a.dim(), b.dim());
        assert_eq!(a, b);
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = Rationals;
        let third = q.parse("1/3").unwrap();
        let sum = q.add(&q.add(&third, &third), &third);
        assert_eq!(sum, q.one());
        assert_eq!(q.format(&third), "1/3");
        assert_eq!(q.format(&q.from_i64(-2)), "-2");
    }

    #[test]
    fn fp_inverse_round_trips() {
        let f = Fp::new(31).unwrap();
        for a in 1..31u64 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
    }

    #[test]
    fn row_span_matches_batch_rref() {
        let f = Fp::new(3).unwrap();
        let rows = vec![
            vec![1, 2, 0, 1],
            vec![2, 1, 1, 0],
            vec![0, 0, 1, 1],
            vec![1, 0, 2, 2],
        ];
        let via_span = Subspace::from_spanning_rows(f.clone(), 4, rows.clone());
        let m = Matrix::from_rows(f.clone(), rows).unwrap();
        let r = m.rref();
        for i in 0..via_span.dim() {
            assert_eq!(via_span.basis_row(i), r.row(i));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_rref_idempotent_f5(entries in proptest::collection::vec(0u64..5, 12)) {
            let f = f5();
            let m = Matrix { field: f, rows: 3, cols: 4, data: entries };
            let r = m.rref();
            prop_assert_eq!(r.clone().rref(), r);
        }

        #[test]
        fn prop_rank_nullity_f2(entries in proptest::collection::vec(0u64..2, 20)) {
            let f = f2();
            let m = Matrix { field: f, rows: 4, cols: 5, data: entries };
            prop_assert_eq!(m.rank() + m.kernel_basis().dim(), 5);
        }

        #[test]
        fn prop_kernel_annihilates_q(entries in proptest::collection::vec(-4i64..5, 12)) {
            let q = Rationals;
            let data: Vec<BigRational> = entries.iter().map(|&v| q.from_i64(v)).collect();
            let m = Matrix { field: q.clone(), rows: 3, cols: 4, data };
            let k = m.kernel_basis();
            for i in 0..k.dim() {
                let img = m.mul_vec(k.basis_row(i)).unwrap();
                prop_assert!(img.iter().all(|v| q.is_zero(v)));
            }
        }
    }
}
