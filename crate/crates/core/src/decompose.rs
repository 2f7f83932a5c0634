//! Constructive decomposition of a finite-dimensional local commutative
//! algebra over F_p into a tensor product of truncated polynomial algebras
//! k[x_1]/(x_1^{p^{e_1}}) ⊗ … ⊗ k[x_r]/(x_r^{p^{e_r}}).
//!
//! The generators are produced by descending along the image of the
//! Frobenius map F(v) = v^p (which is linear over a prime field): the image
//! is a smaller subalgebra of the same kind, its generators lift through F
//! with exponent bumped by one, and kernel vectors of F supply the missing
//! exponent-one generators. Everything the recursion claims is certified
//! afterwards: exponent bookkeeping, nilpotency of each generator, and
//! bijectivity plus multiplicativity of the induced monomial map.

use crate::algebra::{AugmentedAlgebra, MonomialBasis};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, RowSpan, Subspace};
use crate::hopf::HopfTable;

/// A certified presentation H ≅ ⊗_i k[x_i]/(x_i^{p^{e_i}}).
#[derive(Clone, Debug)]
pub struct TruncatedDecomposition<K: Field> {
    /// Generators in ambient coordinates, one per tensor factor, ordered by
    /// non-increasing exponent. Each satisfies g_i^{p^{e_i}} = 0.
    pub generators: Vec<Vec<K::Elem>>,
    /// e_1 ≥ e_2 ≥ … ≥ e_r with Π p^{e_i} = dim.
    pub exponents: Vec<u32>,
    /// dim × dim isomorphism: the column at box index (a_1, …, a_r)
    /// (bounds p^{e_i}, last index fastest) is the product Π g_i^{a_i}.
    pub iso: Matrix<K>,
    /// Index bookkeeping for the tensor-side monomial basis.
    pub box_basis: MonomialBasis,
}

/// The augmentation ideal as a subspace: the kernel of the counit row.
fn augmentation_kernel<K: Field>(aug: &AugmentedAlgebra<K>) -> Subspace<K> {
    let f = aug.alg.field().clone();
    let mut eps = Matrix::zero(f, 1, aug.alg.dim());
    for (j, c) in aug.counit.iter().enumerate() {
        eps.set(0, j, c.clone());
    }
    eps.kernel_basis()
}

/// Whether the augmentation ideal is nilpotent, i.e. the algebra is local
/// with the augmentation ideal as its maximal ideal.
pub fn is_local<K: Field>(aug: &AugmentedAlgebra<K>) -> bool {
    let plus = augmentation_kernel(aug);
    let chain = aug.alg.ideal_power_chain(&plus);
    chain.last().map(|s| s.dim() == 0).unwrap_or(true)
}

/// One recursion step: generators and exponents in the coordinates of
/// `aug`, without the final certificate (the top level adds that).
fn descend<K: Field>(aug: &AugmentedAlgebra<K>) -> Result<(Vec<Vec<K::Elem>>, Vec<u32>)> {
    let alg = &aug.alg;
    let f = alg.field().clone();
    let d = alg.dim();
    if d == 1 {
        return Ok((Vec::new(), Vec::new()));
    }
    let frob = alg.frobenius_matrix()?;
    let image = frob.column_space();
    if image.dim() == d {
        return Err(Error::DecompositionFailed(
            "Frobenius is bijective on a local algebra of dimension > 1".into(),
        ));
    }
    let (sub_alg, incl) = alg.subalgebra_on(&image)?;
    let sub_counit: Vec<K::Elem> = (0..sub_alg.dim())
        .map(|j| {
            let mut acc = f.zero();
            for (r, c) in aug.counit.iter().enumerate() {
                if !f.is_zero(c) {
                    acc = f.add(&acc, &f.mul(c, incl.get(r, j)));
                }
            }
            acc
        })
        .collect();
    let sub_aug = AugmentedAlgebra::new_checked(sub_alg, sub_counit)?;
    let (sub_gens, sub_exps) = descend(&sub_aug)?;

    let mut generators: Vec<Vec<K::Elem>> = Vec::new();
    let mut exponents: Vec<u32> = Vec::new();

    // Seed the independence tracker with (H⁺)², so a candidate survives
    // exactly when its class in H⁺/(H⁺)² is new.
    let plus = augmentation_kernel(aug);
    let mut seen = RowSpan::new(f.clone(), d);
    for i in 0..plus.dim() {
        for j in i..plus.dim() {
            seen.insert(alg.mul_vec(plus.basis_row(i), plus.basis_row(j)));
        }
    }

    // Lift the subalgebra generators through Frobenius: y with y^p = w.
    for (w, e) in sub_gens.iter().zip(sub_exps.iter()) {
        let w_here = incl.mul_vec(w)?;
        let y = frob.solve(&w_here).map_err(|_| {
            Error::DecompositionFailed("Frobenius image generator does not lift".into())
        })?;
        if !seen.insert(y.clone()) {
            return Err(Error::DecompositionFailed(
                "lifted generator is decomposable".into(),
            ));
        }
        generators.push(y);
        exponents.push(e + 1);
    }

    // Kernel vectors of Frobenius complete a minimal generating set; each
    // contributes a factor with exponent one. (Such vectors automatically
    // augment to zero: ε(z)^p = ε(z^p) = 0.)
    let kernel = frob.kernel_basis();
    for i in 0..kernel.dim() {
        let z = kernel.basis_row(i).to_vec();
        if seen.insert(z.clone()) {
            generators.push(z);
            exponents.push(1);
        }
    }

    // Together with (H⁺)² the generators must fill H⁺.
    if seen.rank() != d - 1 {
        return Err(Error::DecompositionFailed(format!(
            "generators and squares span {} of {} dimensions of the augmentation ideal",
            seen.rank(),
            d - 1
        )));
    }
    Ok((generators, exponents))
}

/// Check every claim in a decomposition against the algebra itself.
pub fn verify_decomposition<K: Field>(
    aug: &AugmentedAlgebra<K>,
    dec: &TruncatedDecomposition<K>,
) -> Result<()> {
    let alg = &aug.alg;
    let f = alg.field().clone();
    let p = f.characteristic();
    let d = alg.dim();
    if dec.generators.len() != dec.exponents.len() {
        return Err(Error::DecompositionFailed("generator/exponent mismatch".into()));
    }
    if dec.exponents.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::DecompositionFailed("exponents are not sorted".into()));
    }
    let mut total: u128 = 1;
    for &e in &dec.exponents {
        total = total.saturating_mul((p as u128).saturating_pow(e));
    }
    if total != d as u128 {
        return Err(Error::DecompositionFailed(format!(
            "exponents predict dimension {total}, algebra has {d}"
        )));
    }
    for (g, &e) in dec.generators.iter().zip(dec.exponents.iter()) {
        let order = (p as u128).pow(e);
        let gpow = alg.pow_vec(g, order as u64);
        if !gpow.iter().all(|c| f.is_zero(c)) {
            return Err(Error::DecompositionFailed(format!(
                "generator is not nilpotent of order p^{e}"
            )));
        }
    }
    if dec.iso.rows() != d || dec.iso.cols() != d || dec.iso.rank() != d {
        return Err(Error::DecompositionFailed(
            "monomial products do not form a basis".into(),
        ));
    }
    // Columns must be the stated monomials, and the monomial map must be
    // multiplicative: col(a)·col(b) = col(a+b), zero once any exponent
    // overflows its bound.
    let cols: Vec<Vec<K::Elem>> = (0..d)
        .map(|idx| (0..d).map(|r| dec.iso.get(r, idx).clone()).collect())
        .collect();
    for idx in 0..d {
        let exps = dec.box_basis.exps_of(idx);
        let mut v = alg.unit().to_vec();
        for (g, &a) in dec.generators.iter().zip(exps.iter()) {
            if a > 0 {
                v = alg.mul_vec(&v, &alg.pow_vec(g, a as u64));
            }
        }
        if v != cols[idx] {
            return Err(Error::DecompositionFailed(format!(
                "isomorphism column {idx} is not the stated monomial"
            )));
        }
    }
    let bounds: Vec<u32> = dec.exponents.iter().map(|&e| pow_u32_checked(p, e)).collect();
    for a in 0..d {
        let ea = dec.box_basis.exps_of(a);
        for b in 0..d {
            let eb = dec.box_basis.exps_of(b);
            let prod = alg.mul_vec(&cols[a], &cols[b]);
            let overflow = ea
                .iter()
                .zip(eb.iter())
                .zip(bounds.iter())
                .any(|((&x, &y), &bound)| x + y >= bound);
            if overflow {
                if !prod.iter().all(|c| f.is_zero(c)) {
                    return Err(Error::DecompositionFailed(format!(
                        "monomial product ({a}, {b}) should vanish"
                    )));
                }
            } else {
                let sum: Vec<u32> = ea.iter().zip(eb.iter()).map(|(&x, &y)| x + y).collect();
                if prod != cols[dec.box_basis.index_of(&sum)] {
                    return Err(Error::DecompositionFailed(format!(
                        "monomial map is not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
    }
    // Independent cross-check: iterated Frobenius ranks are determined by
    // the exponent profile alone, rank(F^m) = Π_i p^{max(e_i − m, 0)}.
    let frob = alg.frobenius_matrix()?;
    let mut power = frob.clone();
    let max_e = dec.exponents.first().copied().unwrap_or(0);
    for m in 1..=max_e {
        let mut expected: u128 = 1;
        for &e in &dec.exponents {
            if e > m {
                expected = expected.saturating_mul((p as u128).saturating_pow(e - m));
            }
        }
        if power.rank() as u128 != expected {
            return Err(Error::DecompositionFailed(format!(
                "Frobenius power {m} has rank {}, exponents predict {expected}",
                power.rank()
            )));
        }
        if m < max_e {
            power = power.mul(&frob)?;
        }
    }
    Ok(())
}

fn pow_u32_checked(p: u64, e: u32) -> u32 {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(p);
    }
    acc.min(u32::MAX as u64) as u32
}

/// Decompose a local augmented algebra over a prime field into truncated
/// polynomial factors, with a full certificate.
pub fn decompose_local_algebra<K: Field>(
    aug: &AugmentedAlgebra<K>,
) -> Result<TruncatedDecomposition<K>> {
    let alg = &aug.alg;
    let f = alg.field().clone();
    if f.characteristic() == 0 {
        return Err(Error::UnsupportedField { op: "decompose_local_algebra", field: "Q".into() });
    }
    if !is_local(aug) {
        return Err(Error::NotLocal);
    }
    let (mut generators, mut exponents) = descend(aug)?;
    let mut order: Vec<usize> = (0..generators.len()).collect();
    order.sort_by(|&a, &b| exponents[b].cmp(&exponents[a]));
    generators = order.iter().map(|&i| generators[i].clone()).collect();
    exponents = order.iter().map(|&i| exponents[i]).collect();

    let p = f.characteristic();
    let d = alg.dim();
    let bounds: Vec<u32> = exponents.iter().map(|&e| pow_u32_checked(p, e)).collect();
    let names: Vec<String> = (1..=generators.len()).map(|i| format!("x{i}")).collect();
    let box_basis = MonomialBasis::new(names, bounds)?;
    if box_basis.dim != d {
        return Err(Error::DecompositionFailed(format!(
            "exponents predict dimension {}, algebra has {d}",
            box_basis.dim
        )));
    }
    let mut iso = Matrix::zero(f.clone(), d, d);
    for idx in 0..d {
        let exps = box_basis.exps_of(idx);
        let mut v = alg.unit().to_vec();
        for (g, &a) in generators.iter().zip(exps.iter()) {
            if a > 0 {
                v = alg.mul_vec(&v, &alg.pow_vec(g, a as u64));
            }
        }
        for (r, c) in v.into_iter().enumerate() {
            if !f.is_zero(&c) {
                iso.set(r, idx, c);
            }
        }
    }
    let dec = TruncatedDecomposition { generators, exponents, iso, box_basis };
    verify_decomposition(aug, &dec)?;
    Ok(dec)
}

/// Decompose the algebra underlying a local Hopf algebra over a prime
/// field into truncated polynomial generators.
pub fn decompose_local_hopf<K: Field>(h: &HopfTable<K>) -> Result<TruncatedDecomposition<K>> {
    let aug = AugmentedAlgebra::new_checked(h.alg.clone(), h.counit.clone())?;
    decompose_local_algebra(&aug)
}
