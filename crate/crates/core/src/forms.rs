//! Alternating and symmetric forms: Pfaffians, hyperbolic bases, signatures,
//! isotypic signatures and hyperbolic decompositions.
//!
//! A bilinear form `h` on K^n is given by its Gram matrix `H` with
//! `h(x, y) = xᵀ H y`. For a basis `v_1, …, v_{2n}` the Pfaffian functional
//! is `Pf_h(v_1 ∧ … ∧ v_{2n}) = pf(h(v_i, v_j))`, so a hyperbolic basis with
//! `h(u_i, u_j') = δ_ij` ordered `u_1, u_1', u_2, u_2', …` has `Pf_h = 1`.

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{FiniteGroup, Rep};
use crate::matrix::Matrix;
use crate::rational::Rational;

/// Pfaffian by expansion over perfect matchings. Exponential; intended as an
/// oracle for small matrices.
pub fn pfaffian_matching<F: Field>(a: &Matrix<F>) -> Result<F> {
    if !a.is_alternating() {
        return Err(Error::NotAlternating);
    }
    if a.rows() % 2 == 1 {
        return Err(Error::dim("Pfaffian of an odd-dimensional matrix"));
    }
    let idx: Vec<usize> = (0..a.rows()).collect();
    Ok(matching_rec(a, &idx))
}

fn matching_rec<F: Field>(a: &Matrix<F>, idx: &[usize]) -> F {
    if idx.is_empty() {
        return F::one();
    }
    if idx.len() % 2 == 1 {
        return F::zero();
    }
    let first = idx[0];
    let mut acc = F::zero();
    for k in 1..idx.len() {
        let x = a.get(first, idx[k]);
        if x.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|&(p, _)| p != k - 1).map(|(_, &v)| v).collect();
        let term = x.mul_ref(&matching_rec(a, &rest));
        if (k - 1) % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

/// Pfaffian by skew-symmetric elimination with 2×2 pivot blocks.
pub fn pfaffian<F: Field>(a: &Matrix<F>) -> Result<F> {
    if !a.is_alternating() {
        return Err(Error::NotAlternating);
    }
    let mut m = a.clone();
    let n = m.rows();
    if n % 2 == 1 {
        return Err(Error::dim("Pfaffian of an odd-dimensional matrix"));
    }
    let mut pf = F::one();
    let mut k = 0;
    while k < n {
        let Some(p) = (k + 1..n).find(|&j| !m.get(k, j).is_zero()) else { return Ok(F::zero()) };
        if p != k + 1 {
            m.swap_rows(p, k + 1);
            m.swap_cols(p, k + 1);
            pf = -pf;
        }
        let piv = m.get(k, k + 1).clone();
        pf = pf.mul_ref(&piv);
        let inv = piv.inv().expect("nonzero pivot");
        // A'_ij = A_ij + (A_ik A_{k+1,j} - A_{i,k+1} A_kj) / a
        for i in k + 2..n {
            let aik = m.get(i, k).clone();
            let aik1 = m.get(i, k + 1).clone();
            if aik.is_zero() && aik1.is_zero() {
                continue;
            }
            for j in i + 1..n {
                let t = aik.mul_ref(m.get(k + 1, j)) - &aik1.mul_ref(m.get(k, j));
                if t.is_zero() {
                    continue;
                }
                let v = m.get(i, j).clone() + &t.mul_ref(&inv);
                m.set(j, i, -v.clone());
                m.set(i, j, v);
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// `Pf_h(v_1 ∧ … ∧ v_{2n})` for the columns `v_i` of `basis`.
pub fn pf_functional<F: Field>(h: &Matrix<F>, basis: &Matrix<F>) -> Result<F> {
    pfaffian(&h.congruence(basis))
}

/// Pfaffian of a κ-self-adjoint operator: `pf_κ(A) = Pf_{κ_A} / Pf_κ` where
/// `κ_A(x, y) = κ(Ax, y)`.
pub fn pfaffian_selfadjoint<F: Field>(a: &Matrix<F>, kappa: &Matrix<F>) -> Result<F> {
    let lhs = a.transpose().mul(kappa);
    if lhs != kappa.mul(a) {
        return Err(Error::pre("operator is not self-adjoint for the form"));
    }
    let den = pfaffian(kappa)?;
    if den.is_zero() {
        return Err(Error::Degenerate);
    }
    pfaffian(&lhs)?.div_ref(&den)
}

/// Hyperbolic basis of a nondegenerate alternating form by symplectic
/// Gram–Schmidt. Columns are `u_1, u_1', u_2, u_2', …` with `h(u_i, u_j') = δ_ij`.
pub fn hyperbolic_basis<F: Field>(h: &Matrix<F>) -> Result<Matrix<F>> {
    if !h.is_alternating() {
        return Err(Error::NotAlternating);
    }
    let n = h.rows();
    let form = |x: &[F], y: &[F]| h.bilinear(x, y);
    let mut pool: Vec<Vec<F>> = Matrix::<F>::identity(n).columns();
    let mut out: Vec<Vec<F>> = Vec::with_capacity(n);
    while out.len() < n {
        pool.retain(|v| v.iter().any(|x| !x.is_zero()));
        let mut found = None;
        'outer: for (a, u) in pool.iter().enumerate() {
            for (b, v) in pool.iter().enumerate() {
                let c = form(u, v);
                if !c.is_zero() {
                    found = Some((a, b, c));
                    break 'outer;
                }
            }
        }
        let Some((a, b, c)) = found else { return Err(Error::Degenerate) };
        let u = pool[a].clone();
        let inv = c.inv().expect("nonzero");
        let up: Vec<F> = pool[b].iter().map(|x| x.mul_ref(&inv)).collect();
        // Project the pool onto the orthogonal complement of span(u, u').
        for w in pool.iter_mut() {
            let alpha = form(&up, w);
            let beta = -form(&u, w);
            for k in 0..n {
                let t = alpha.mul_ref(&u[k]) + &beta.mul_ref(&up[k]);
                w[k] += &t;
            }
        }
        out.push(u);
        out.push(up);
    }
    Ok(Matrix::from_columns(n, &out))
}

/// Gram matrix of the standard alternating form: blocks `[[0,1],[-1,0]]`.
pub fn standard_alternating<F: Field>(n: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m.set(2 * i, 2 * i + 1, F::one());
        m.set(2 * i + 1, 2 * i, -F::one());
    }
    m
}

/// Signature data of a real symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn value(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Signature by congruence diagonalisation with 1×1 and hyperbolic 2×2 pivots.
/// Entries must be real; their signs are decided exactly.
pub fn signature<F: Field>(s: &Matrix<F>) -> Result<Signature> {
    if !s.is_symmetric() {
        return Err(Error::pre("signature of a non-symmetric matrix"));
    }
    let mut m = s.clone();
    let n = m.rows();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if let Some(p) = (k..n).find(|&i| !m.get(i, i).is_zero()) {
            m.swap_rows(p, k);
            m.swap_cols(p, k);
            let d = m.get(k, k).clone();
            match d.real_sign()? {
                1 => pos += 1,
                _ => neg += 1,
            }
            let inv = d.inv().expect("nonzero");
            for i in k + 1..n {
                let f = m.get(i, k).mul_ref(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let t = f.mul_ref(m.get(k, j));
                    if !t.is_zero() {
                        *m.get_mut(i, j) -= &t;
                    }
                }
            }
            for i in k + 1..n {
                m.set(i, k, F::zero());
                m.set(k, i, F::zero());
            }
            k += 1;
            continue;
        }
        // Zero diagonal: look for a hyperbolic pair.
        let Some((i, j)) = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !m.get(i, j).is_zero())
        else {
            return Ok(Signature { positive: pos, negative: neg, zero: n - k });
        };
        m.swap_rows(i, k);
        m.swap_cols(i, k);
        let j = if j == k { i } else { j };
        m.swap_rows(j, k + 1);
        m.swap_cols(j, k + 1);
        let b = m.get(k, k + 1).clone();
        let inv = b.inv().expect("nonzero");
        pos += 1;
        neg += 1;
        for r in k + 2..n {
            for c in k + 2..n {
                let t = m.get(r, k).mul_ref(m.get(k + 1, c)) + &m.get(r, k + 1).mul_ref(m.get(k, c));
                if !t.is_zero() {
                    *m.get_mut(r, c) -= &t.mul_ref(&inv);
                }
            }
        }
        for r in k + 2..n {
            for c in [k, k + 1] {
                m.set(r, c, F::zero());
                m.set(c, r, F::zero());
            }
        }
        k += 2;
    }
    Ok(Signature { positive: pos, negative: neg, zero: 0 })
}

/// Gram matrix `[[0, I],[I, 0]]` of the hyperbolic form on V ⊕ V*.
pub fn make_hyp<F: Field>(n: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.set_block(0, n, &Matrix::identity(n));
    m.set_block(n, 0, &Matrix::identity(n));
    m
}

/// Action of G on Hyp(V) = V ⊕ V*.
pub fn hyp_rep<F: Field>(g: &FiniteGroup, rep: &Rep<F>) -> Rep<F> {
    rep.direct_sum(&g.dual_rep(rep))
}

fn average_projection<F: Field>(rep: Option<&Rep<F>>, g: Option<&FiniteGroup>, p: &Matrix<F>) -> Result<Matrix<F>> {
    let (Some(rep), Some(g)) = (rep, g) else { return Ok(p.clone()) };
    let mut acc = Matrix::<F>::zeros(p.rows(), p.cols());
    for x in 0..g.order() {
        acc = acc.add(&rep.mats[x].mul(p).mul(&rep.mats[g.inv(x)]));
    }
    Ok(acc.scale_rational(&Rational::new(1, g.order() as i64)))
}

/// Projection of the ambient space onto span(cols) along a coordinate complement.
fn coordinate_projection<F: Field>(cols: &Matrix<F>) -> Matrix<F> {
    let n = cols.rows();
    let extra = cols.completion_indices();
    let basis = Matrix::hstack(&[cols.clone(), Matrix::<F>::identity(n).select_columns(&extra)]);
    let inv = basis.inverse().expect("completed basis");
    let k = cols.cols();
    let mut keep = Matrix::<F>::zeros(n, n);
    for i in 0..k {
        keep.set(i, i, F::one());
    }
    basis.mul(&keep).mul(&inv)
}

/// Projection onto span(cols) commuting with the action (the span must be stable).
pub fn stable_projection<F: Field>(g: &FiniteGroup, rep: &Rep<F>, cols: &Matrix<F>) -> Matrix<F> {
    if cols.cols() == 0 {
        return Matrix::zeros(cols.rows(), cols.rows());
    }
    average_projection(Some(rep), Some(g), &coordinate_projection(cols)).expect("averaging")
}

fn span_contains<F: Field>(span: &Matrix<F>, v: &Matrix<F>) -> bool {
    span.solve(v).is_some()
}

/// Result of splitting off a hyperbolic summand.
#[derive(Clone, Debug)]
pub struct HypDecomposition<F: Field> {
    /// Basis of the isotropic submodule W (as given).
    pub w: Matrix<F>,
    /// Dual isotropic basis W' with σ(w_i, w'_j) = δ_ij.
    pub w_dual: Matrix<F>,
    /// Basis of the orthogonal complement U ≅ W^⊥/W.
    pub u: Matrix<F>,
    /// Gram matrix of σ on U.
    pub u_gram: Matrix<F>,
}

impl<F: Field> HypDecomposition<F> {
    /// Change of basis `P = [W | W' | U]`; `Pᵀ σ P` is block diagonal
    /// `diag([[0, I],[I, 0]], u_gram)`.
    pub fn basis(&self) -> Matrix<F> {
        Matrix::hstack(&[self.w.clone(), self.w_dual.clone(), self.u.clone()])
    }

    pub fn target_gram(&self) -> Matrix<F> {
        Matrix::block_diag(&[make_hyp(self.w.cols()), self.u_gram.clone()])
    }
}

/// Split `(V, σ) ≅ Hyp(W) ⊥ (W^⊥/W, σ̄)` for an isotropic subspace W; when a
/// group action is supplied W must be stable and all chosen complements are
/// stable as well.
pub fn hyp_decompose<F: Field>(
    sigma: &Matrix<F>,
    w: &Matrix<F>,
    action: Option<(&FiniteGroup, &Rep<F>)>,
) -> Result<HypDecomposition<F>> {
    let n = sigma.rows();
    if !sigma.is_symmetric() {
        return Err(Error::pre("form is not symmetric"));
    }
    if w.rank() != w.cols() {
        return Err(Error::pre("W basis is not linearly independent"));
    }
    if !sigma.congruence(w).is_zero() {
        return Err(Error::pre("W is not isotropic"));
    }
    let (g, rep) = match action {
        Some((g, r)) => (Some(g), Some(r)),
        None => (None, None),
    };
    if let Some(rep) = rep {
        if rep.mats.iter().any(|m| !span_contains(w, &m.mul(w))) {
            return Err(Error::pre("W is not G-stable"));
        }
        if !rep.preserves(sigma) {
            return Err(Error::pre("form is not G-invariant"));
        }
    }
    let k = w.cols();
    // W^⊥ = ker(Wᵀ σ).
    let w_perp = w.transpose().mul(sigma).kernel();
    // Stable complement U of W inside W^⊥.
    let pw = average_projection(rep, g, &coordinate_projection(w))?;
    let u_full = Matrix::<F>::identity(n).sub(&pw).mul(&w_perp);
    let u = u_full.column_basis();
    if u.cols() + k != w_perp.cols() {
        return Err(Error::Invariant("complement of W in W^⊥ has the wrong dimension".into()));
    }
    // Stable complement W'' of W^⊥ in V.
    let pp = average_projection(rep, g, &coordinate_projection(&w_perp))?;
    let wc = Matrix::<F>::identity(n).sub(&pp).column_basis();
    if wc.cols() != k {
        return Err(Error::Degenerate);
    }
    // Make W'' orthogonal to U.
    let u_gram = sigma.congruence(&u);
    let wc = if u.cols() > 0 {
        let c_inv = u_gram.inverse().map_err(|_| Error::Degenerate)?;
        let coef = c_inv.mul(&u.transpose().mul(sigma).mul(&wc));
        wc.sub(&u.mul(&coef))
    } else {
        wc
    };
    // Make W'' isotropic: replace by W'' + W X with Eᵀ X = -D/2.
    let e = w.transpose().mul(sigma).mul(&wc);
    let d = sigma.congruence(&wc);
    let e_inv = e.inverse().map_err(|_| Error::Degenerate)?;
    let x = e_inv.transpose().mul(&d).scale_rational(&Rational::new(-1, 2));
    let wc = wc.add(&w.mul(&x));
    // Normalise to the dual basis of W.
    let e = w.transpose().mul(sigma).mul(&wc);
    let w_dual = wc.mul(&e.inverse().map_err(|_| Error::Degenerate)?);
    let out = HypDecomposition { w: w.clone(), w_dual, u, u_gram };
    if sigma.congruence(&out.basis()) != out.target_gram() {
        return Err(Error::Invariant("hyperbolic decomposition does not realise the isometry".into()));
    }
    Ok(out)
}

/// For an increasing filtration F_{-m} ⊆ … ⊆ F_{-1} ⊆ F_0 ⊆ … with
/// `F_i^⊥ = F_{-i-1}`, realise `(V, σ) ≅ ⊕_{i<0} Hyp(Gr_i) ⊥ Gr_0`.
///
/// `steps[k]` is a basis of F_{-m+k} for k = 0..m (so the last entry is F_{-1});
/// the returned blocks are the dimensions of Gr_{-m}, …, Gr_{-1}.
pub fn filtered_decompose<F: Field>(
    sigma: &Matrix<F>,
    steps: &[Matrix<F>],
    action: Option<(&FiniteGroup, &Rep<F>)>,
) -> Result<(HypDecomposition<F>, Vec<usize>)> {
    let n = sigma.rows();
    let Some(top) = steps.last() else {
        let empty = Matrix::<F>::zeros(n, 0);
        return Ok((
            HypDecomposition { w: empty.clone(), w_dual: empty, u: Matrix::identity(n), u_gram: sigma.clone() },
            vec![],
        ));
    };
    // Check F_i^⊥ = F_{-i-1} for the negative steps against their partners.
    for (k, f) in steps.iter().enumerate() {
        if f.rank() != f.cols() {
            return Err(Error::pre("filtration step is not a basis"));
        }
        if k > 0 && !span_contains(f, &steps[k - 1]) {
            return Err(Error::pre("filtration is not increasing"));
        }
        let perp = f.transpose().mul(sigma).kernel();
        // F_{-1-j}^⊥ has dimension n - dim F_{-1-j}; it must contain F_{-1}.
        if !span_contains(&perp, top) && k == steps.len() - 1 {
            return Err(Error::pre("F_{-1} is not isotropic"));
        }
    }
    // Adapted basis of F_{-1}: stable complements of each step in the next.
    let (g, rep) = match action {
        Some((g, r)) => (Some(g), Some(r)),
        None => (None, None),
    };
    let mut adapted = steps[0].clone();
    let mut blocks = vec![steps[0].cols()];
    for k in 1..steps.len() {
        let prev = &steps[k - 1];
        let p = average_projection(rep, g, &coordinate_projection(prev))?;
        let c = Matrix::<F>::identity(n).sub(&p).mul(&steps[k]).column_basis();
        blocks.push(c.cols());
        adapted = Matrix::hstack(&[adapted, c]);
    }
    let dec = hyp_decompose(sigma, &adapted, action)?;
    Ok((dec, blocks))
}

/// Real projector e_χ (χ real) or e_χ + e_χ̄ acting on a representation.
pub fn real_isotypic_projector<F: Field>(g: &FiniteGroup, rep: &Rep<F>, chi: &[Cyclo]) -> Matrix<Cyclo> {
    let n = g.order();
    let conj: Vec<Cyclo> = chi.iter().map(|c| c.conj()).collect();
    let real = conj == chi;
    let d = rep.dim();
    let mut acc = Matrix::<Cyclo>::zeros(d, d);
    for x in 0..n {
        let mut c = chi[g.inv(x)].clone();
        if !real {
            c += &conj[g.inv(x)];
        }
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&rep.mats[x].map(|v| v.to_cyclo()).scale(&c));
    }
    acc.scale(&chi[0].scale(&Rational::new(1, n as i64)))
}

/// Signature of σ restricted to the real ψ-isotypic component, where ψ = χ
/// for real χ and ψ = χ + χ̄ otherwise. Also returns the multiplicities of χ
/// in the positive and negative parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsotypicSignature {
    pub signature: Signature,
    pub mult_positive: usize,
    pub mult_negative: usize,
}

pub fn isotypic_signature<F: Field>(
    g: &FiniteGroup,
    rep: &Rep<F>,
    sigma: &Matrix<F>,
    chi: &[Cyclo],
) -> Result<IsotypicSignature> {
    if !rep.preserves(sigma) {
        return Err(Error::pre("form is not G-invariant"));
    }
    let proj = real_isotypic_projector(g, rep, chi);
    let image = proj.column_basis();
    let conj: Vec<Cyclo> = chi.iter().map(|c| c.conj()).collect();
    let orbit = if conj == chi { 1 } else { 2 };
    let chi_m: Vec<Cyclo> = rep.character();
    let mult = g
        .inner_product(&chi_m, chi)
        .as_rational()
        .and_then(|q| q.to_i64())
        .ok_or_else(|| Error::pre("character inner product is not an integer"))? as usize;
    let deg = chi[0].as_rational().and_then(|q| q.to_i64()).unwrap_or(0) as usize;
    if image.cols() != mult * deg * orbit {
        return Err(Error::Invariant("projector rank inconsistent with character inner products".into()));
    }
    let restricted = sigma.map(|x| x.to_cyclo()).congruence(&image);
    let sig = signature(&restricted)?;
    if sig.zero != 0 {
        return Err(Error::Degenerate);
    }
    let unit = deg * orbit;
    if sig.positive % unit != 0 || sig.negative % unit != 0 {
        return Err(Error::Invariant("isotypic signature not divisible by the orbit dimension".into()));
    }
    Ok(IsotypicSignature { signature: sig, mult_positive: sig.positive / unit, mult_negative: sig.negative / unit })
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    fn alt(n: usize, upper: &[i64]) -> Matrix<Q> {
        let mut m = Matrix::<Q>::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, Q::from_int(upper[k]));
                m.set(j, i, Q::from_int(-upper[k]));
                k += 1;
            }
        }
        m
    }

    #[test]
    fn four_by_four_example() {
        let a = alt(4, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(pfaffian(&a).unwrap(), Q::from_int(8));
        assert_eq!(pfaffian_matching(&a).unwrap(), Q::from_int(8));
    }

    #[test]
    fn standard_block_has_pfaffian_one() {
        assert_eq!(pfaffian(&standard_alternating::<Q>(3)).unwrap(), Q::one());
        assert_eq!(pfaffian(&Matrix::<Q>::zeros(0, 0)).unwrap(), Q::one());
        assert!(matches!(pfaffian(&Matrix::<Q>::identity(2)), Err(Error::NotAlternating)));
        assert!(matches!(pfaffian(&Matrix::<Q>::zeros(3, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn selfadjoint_examples() {
        let k = standard_alternating::<Q>(1);
        let d = Matrix::<Q>::from_ints(2, 2, &[5, 0, 0, 5]);
        assert_eq!(pfaffian_selfadjoint(&d, &k).unwrap(), Q::from_int(5));
        let k2 = standard_alternating::<Q>(2);
        let c = Matrix::<Q>::identity(4).scale(&Q::from_int(3));
        assert_eq!(pfaffian_selfadjoint(&c, &k2).unwrap(), Q::from_int(9));
    }

    #[test]
    fn hyperbolic_basis_of_scaled_form() {
        let k = standard_alternating::<Q>(1).scale(&Q::from_int(7));
        let b = hyperbolic_basis(&k).unwrap();
        assert_eq!(b, Matrix::<Q>::from_fn(2, 2, |i, j| if i == j { if i == 0 { Q::one() } else { Q::new(1, 7) } } else { Q::zero() }));
        assert_eq!(pf_functional(&k, &b).unwrap(), Q::one());
        let e = Matrix::<Q>::zeros(2, 2);
        assert!(matches!(hyperbolic_basis(&e), Err(Error::Degenerate)));
    }

    #[test]
    fn signatures() {
        let s = Matrix::<Q>::from_ints(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, -2]);
        assert_eq!(signature(&s).unwrap(), Signature { positive: 1, negative: 2, zero: 0 });
        let h = make_hyp::<Q>(2);
        assert_eq!(signature(&h).unwrap().value(), 0);
        let z = Matrix::<Q>::from_ints(2, 2, &[1, 1, 1, 1]);
        assert_eq!(signature(&z).unwrap(), Signature { positive: 1, negative: 0, zero: 1 });
    }

    #[test]
    fn hyperbolic_split_of_small_form() {
        // σ = diag(1, -1, 3) with isotropic line spanned by e0 + e1.
        let s = Matrix::<Q>::from_ints(3, 3, &[1, 0, 0, 0, -1, 0, 0, 0, 3]);
        let w = Matrix::<Q>::from_ints(3, 1, &[1, 1, 0]);
        let d = hyp_decompose(&s, &w, None).unwrap();
        assert_eq!(d.u_gram, Matrix::from_ints(1, 1, &[3]));
        let bad = Matrix::<Q>::from_ints(3, 1, &[1, 0, 0]);
        assert!(hyp_decompose(&s, &bad, None).is_err());
    }
}
