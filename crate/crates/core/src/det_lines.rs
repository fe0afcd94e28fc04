//! Graded determinant lines, B/H/U splittings of complexes and the
//! determinant-of-cohomology isomorphism ξ.
//!
//! Lines are tracked as scalars relative to declared basis wedges. A graded
//! line (L, n) only matters through the parity of n, which enters the Koszul
//! sign (-1)^{mn} whenever two factors are exchanged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::pfaffian;
use crate::matrix::Matrix;

/// `(-1)^{ab}` for graded lines of grades a and b.
pub fn koszul_sign(a: i64, b: i64) -> i8 {
    if (a * b).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Coordinate of an element of a graded line relative to a reference wedge.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedLineElement<F: Field> {
    pub scalar: F,
    pub grade: i64,
    pub basis_tag: String,
}

impl<F: Field> GradedLineElement<F> {
    pub fn new(scalar: F, grade: i64, basis_tag: impl Into<String>) -> Self {
        GradedLineElement { scalar, grade, basis_tag: basis_tag.into() }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        GradedLineElement {
            scalar: self.scalar.mul_ref(&other.scalar),
            grade: self.grade + other.grade,
            basis_tag: format!("{}⊗{}", self.basis_tag, other.basis_tag),
        }
    }

    /// The dual element l^{-1} with l^{-1}(l) = 1.
    pub fn inverse(&self) -> Result<Self> {
        Ok(GradedLineElement {
            scalar: self.scalar.inv().ok_or(Error::DivisionByZero)?,
            grade: -self.grade,
            basis_tag: format!("({})^-1", self.basis_tag),
        })
    }

    /// The flip L ⊗ M → M ⊗ L applied to x ⊗ y.
    pub fn swap_sign(&self, other: &Self) -> i8 {
        koszul_sign(self.grade, other.grade)
    }
}

/// Koszul sign of rearranging a word of graded atoms: `grades[k]` is the
/// grade of the atom at position k and `target[k]` the position it moves to.
pub fn permutation_sign(grades: &[i64], target: &[usize]) -> i8 {
    let mut s = 1i8;
    for a in 0..grades.len() {
        for b in a + 1..grades.len() {
            if target[a] > target[b] {
                s *= koszul_sign(grades[a], grades[b]);
            }
        }
    }
    s
}

/// A bounded cochain complex of finite-dimensional spaces,
/// `C^lo → C^{lo+1} → … → C^hi`, with boundaries acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<F: Field> {
    pub lo: i64,
    pub dims: Vec<usize>,
    /// `boundaries[k]` maps degree lo+k to lo+k+1 (shape dims[k+1] × dims[k]).
    pub boundaries: Vec<Matrix<F>>,
}

impl<F: Field> Complex<F> {
    pub fn new(lo: i64, dims: Vec<usize>, boundaries: Vec<Matrix<F>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::dim("complex without terms"));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::dim("need one boundary between consecutive terms"));
        }
        for (k, d) in boundaries.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(Error::dim(format!("boundary in degree {} has the wrong shape", lo + k as i64)));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k].mul(&boundaries[k - 1]).is_zero() {
                return Err(Error::NotAComplex(lo + k as i64 - 1));
            }
        }
        Ok(Complex { lo, dims, boundaries })
    }

    /// Complex with a single term in degree `deg`.
    pub fn concentrated(deg: i64, dim: usize) -> Self {
        Complex { lo: deg, dims: vec![dim], boundaries: vec![] }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    fn idx(&self, i: i64) -> Option<usize> {
        (i >= self.lo && i <= self.hi()).then(|| (i - self.lo) as usize)
    }

    pub fn dim(&self, i: i64) -> usize {
        self.idx(i).map(|k| self.dims[k]).unwrap_or(0)
    }

    /// ∂^i : C^i → C^{i+1} (a zero matrix outside the range).
    pub fn boundary(&self, i: i64) -> Matrix<F> {
        match self.idx(i) {
            Some(k) if k < self.boundaries.len() => self.boundaries[k].clone(),
            _ => Matrix::zeros(self.dim(i + 1), self.dim(i)),
        }
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims = (lo..=hi).map(|i| self.dim(i) + other.dim(i)).collect();
        let boundaries = (lo..hi).map(|i| Matrix::block_diag(&[self.boundary(i), other.boundary(i)])).collect();
        Complex { lo, dims, boundaries }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|i| if i.rem_euclid(2) == 0 { self.dim(i) as i64 } else { -(self.dim(i) as i64) }).sum()
    }
}

/// Per-degree bases (as matrix columns) with C^i = B^i ⊕ H^i ⊕ U^i,
/// B^i = Im ∂^{i-1}, H^i ⊂ ker ∂^i and ∂^i : U^i ≅ B^{i+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct BhuSplitting<F: Field> {
    pub lo: i64,
    pub b: Vec<Matrix<F>>,
    pub h: Vec<Matrix<F>>,
    pub u: Vec<Matrix<F>>,
}

impl<F: Field> BhuSplitting<F> {
    pub fn b(&self, i: i64) -> &Matrix<F> {
        &self.b[(i - self.lo) as usize]
    }
    pub fn h(&self, i: i64) -> &Matrix<F> {
        &self.h[(i - self.lo) as usize]
    }
    pub fn u(&self, i: i64) -> &Matrix<F> {
        &self.u[(i - self.lo) as usize]
    }
}

/// Columns of `cand` that extend the independent columns of `base`, chosen greedily.
pub fn extend_columns<F: Field>(base: &Matrix<F>, cand: &Matrix<F>) -> Matrix<F> {
    let all = Matrix::hstack(&[base.clone(), cand.clone()]);
    let (_, piv) = all.rref();
    let picked: Vec<usize> = piv.into_iter().filter(|&p| p >= base.cols()).map(|p| p - base.cols()).collect();
    cand.select_columns(&picked)
}

/// Splitting by row reduction: B from the image of the incoming boundary,
/// H as a complement of B in the kernel and U spanned by standard vectors
/// completing the kernel. Supplied `h` bases are used verbatim after a check.
pub fn bhu_splitting<F: Field>(c: &Complex<F>, h: Option<&[Matrix<F>]>) -> Result<BhuSplitting<F>> {
    let mut out = BhuSplitting { lo: c.lo, b: vec![], h: vec![], u: vec![] };
    for i in c.degrees() {
        let n = c.dim(i);
        let b = c.boundary(i - 1).column_basis();
        let z = c.boundary(i).kernel();
        let hh = match h {
            Some(hs) => {
                let hh = hs[(i - c.lo) as usize].clone();
                if hh.rows() != n || !c.boundary(i).mul(&hh).is_zero() {
                    return Err(Error::pre(format!("cohomology representatives in degree {i} are not cocycles")));
                }
                if Matrix::hstack(&[b.clone(), hh.clone()]).rank() != z.cols() || b.cols() + hh.cols() != z.cols() {
                    return Err(Error::pre(format!("cohomology representatives in degree {i} are not a basis")));
                }
                hh
            }
            None => extend_columns(&b, &z),
        };
        let u = extend_columns(&z, &Matrix::identity(n));
        out.b.push(b);
        out.h.push(hh);
        out.u.push(u);
    }
    Ok(out)
}

/// Result of ξ: `ξ(⊗_i (∧E_i)^{(-1)^i}) = scalar · ⊗_i (∧H^i)^{(-1)^i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiValue<F: Field> {
    pub scalar: F,
    pub h: Vec<Matrix<F>>,
}

/// The isomorphism ξ: det(C) ≅ det(H(C)) on the element ⊗_i (∧ wedges[i])^{(-1)^i}.
///
/// Each wedge is factored as x_B ⊗ x_H ⊗ x_U with x_{B^{i+1}} = det(∂^i) x_{U^i};
/// the U^i and B^{i+1} factors are moved next to each other (Koszul signs) and
/// cancelled, leaving the H factors in increasing degree.
pub fn xi<F: Field>(c: &Complex<F>, wedges: &[Matrix<F>], split: &BhuSplitting<F>) -> Result<XiValue<F>> {
    if wedges.len() != c.dims.len() {
        return Err(Error::dim("one wedge per degree required"));
    }
    let mut scalar = F::one();
    // Atom word: per degree B, H, U.
    let mut grades = Vec::new();
    let mut kinds = Vec::new();
    for i in c.degrees() {
        let k = (i - c.lo) as usize;
        let e = &wedges[k];
        if e.rows() != c.dim(i) || e.cols() != c.dim(i) {
            return Err(Error::dim(format!("wedge in degree {i} has the wrong shape")));
        }
        let b_img = if i > c.lo { c.boundary(i - 1).mul(split.u(i - 1)) } else { Matrix::zeros(c.dim(i), 0) };
        let m = Matrix::hstack(&[b_img.clone(), split.h(i).clone(), split.u(i).clone()]);
        if m.cols() != c.dim(i) {
            return Err(Error::Invariant(format!("splitting in degree {i} has the wrong size")));
        }
        let det_e = e.det();
        if det_e.is_zero() {
            return Err(Error::pre(format!("wedge in degree {i} is not a basis")));
        }
        let det_m = m.det();
        let ci = det_e.div_ref(&det_m)?;
        scalar = if i.rem_euclid(2) == 0 { scalar.mul_ref(&ci) } else { scalar.div_ref(&ci)? };
        for (kind, g) in [(0usize, b_img.cols()), (1, split.h(i).cols()), (2, split.u(i).cols())] {
            grades.push(g as i64);
            kinds.push((kind, i));
        }
    }
    // Target: H atoms in degree order, then the (U^i, B^{i+1}) pairs.
    let nh = (c.hi() - c.lo + 1) as usize;
    let target: Vec<usize> = kinds
        .iter()
        .map(|&(kind, i)| {
            let k = (i - c.lo) as usize;
            match kind {
                1 => k,
                2 => nh + 2 * k,
                _ => nh + 2 * k.saturating_sub(1) + 1,
            }
        })
        .collect();
    if permutation_sign(&grades, &target) < 0 {
        scalar = -scalar;
    }
    Ok(XiValue { scalar, h: split.h.clone() })
}

/// Ordering of degrees used by υ: 0, 2, -2, 4, -4, … then 1, -1, 3, -3, ….
pub fn upsilon_order(lo: i64, hi: i64) -> (Vec<i64>, Vec<i64>) {
    let m = lo.abs().max(hi.abs());
    let mut ev = vec![];
    let mut odd = vec![];
    for k in 0..=m {
        for t in if k == 0 { vec![0] } else { vec![k, -k] } {
            if t < lo || t > hi {
                continue;
            }
            if t.rem_euclid(2) == 0 {
                ev.push(t);
            } else {
                odd.push(t);
            }
        }
    }
    (ev, odd)
}

/// Koszul sign of υ: ⊗_i det(H^i)^{(-1)^i} (increasing i) →
/// det(H^0) ⊗ det(H^2) ⊗ det(H^{-2}) ⊗ … ⊗ det(H^1)^{-1} ⊗ det(H^{-1})^{-1} ⊗ ….
pub fn upsilon_sign(lo: i64, dims: &[usize]) -> i8 {
    let hi = lo + dims.len() as i64 - 1;
    let (ev, odd) = upsilon_order(lo, hi);
    let order: Vec<i64> = ev.into_iter().chain(odd).collect();
    let grades: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
    let target: Vec<usize> =
        (lo..=hi).map(|i| order.iter().position(|&t| t == i).expect("degree in order")).collect();
    permutation_sign(&grades, &target)
}

/// Concatenate per-degree matrices (columns) in υ order, split into even and odd parts.
pub fn upsilon_concat<F: Field>(lo: i64, per_degree: &[Matrix<F>]) -> (Matrix<F>, Matrix<F>) {
    let hi = lo + per_degree.len() as i64 - 1;
    let (ev, odd) = upsilon_order(lo, hi);
    let rows: usize = per_degree.iter().map(|m| m.rows()).sum();
    let offsets: Vec<usize> = per_degree
        .iter()
        .scan(0, |acc, m| {
            let o = *acc;
            *acc += m.rows();
            Some(o)
        })
        .collect();
    let embed = |ts: &[i64]| {
        let parts: Vec<Matrix<F>> = ts
            .iter()
            .map(|&t| {
                let k = (t - lo) as usize;
                let m = &per_degree[k];
                let mut big = Matrix::zeros(rows, m.cols());
                big.set_block(offsets[k], 0, m);
                big
            })
            .collect();
        if parts.is_empty() {
            Matrix::zeros(rows, 0)
        } else {
            Matrix::hstack(&parts)
        }
    };
    (embed(&ev), embed(&odd))
}

/// `Pf_h ∘ υ ∘ ξ` on ⊗_i (∧wedges[i])^{(-1)^i}, where `h_ev` and `h_odd` are
/// Gram matrices of alternating forms on H^ev and H^odd in the bases obtained
/// by concatenating `h_bases` in υ order.
pub fn pf_on_complex<F: Field>(
    c: &Complex<F>,
    h_bases: &[Matrix<F>],
    h_ev: &Matrix<F>,
    h_odd: &Matrix<F>,
    wedges: &[Matrix<F>],
) -> Result<F> {
    let split = bhu_splitting(c, Some(h_bases))?;
    let x = xi(c, wedges, &split)?;
    let hd: Vec<usize> = h_bases.iter().map(|m| m.cols()).collect();
    let (ev_dim, odd_dim) = upsilon_order(c.lo, c.hi());
    let ev_n: usize = ev_dim.iter().map(|&t| hd[(t - c.lo) as usize]).sum();
    let odd_n: usize = odd_dim.iter().map(|&t| hd[(t - c.lo) as usize]).sum();
    if h_ev.rows() != ev_n || h_odd.rows() != odd_n {
        return Err(Error::dim("cohomology forms do not match the cohomology dimensions"));
    }
    if ev_n % 2 == 1 || odd_n % 2 == 1 {
        return Err(Error::pre("odd-dimensional cohomology cannot carry a nondegenerate alternating form"));
    }
    let pe = pfaffian(h_ev)?;
    let po = pfaffian(h_odd)?;
    if pe.is_zero() || po.is_zero() {
        return Err(Error::Degenerate);
    }
    let mut v = x.scalar.mul_ref(&pe).div_ref(&po)?;
    if upsilon_sign(c.lo, &hd) < 0 {
        v = -v;
    }
    Ok(v)
}

/// Serialized form `{"lo", "hi", "ranks", "boundaries"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson<T> {
    pub lo: i64,
    pub hi: i64,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<T>>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational as Q;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(2, 4), 1);
        assert_eq!(koszul_sign(1, 1), -1);
        assert_eq!(koszul_sign(0, 7), 1);
        assert_eq!(koszul_sign(-3, 1), -1);
    }

    #[test]
    fn zero_boundaries_give_identity() {
        let c = Complex::<Q>::new(0, vec![2, 3], vec![Matrix::zeros(3, 2)]).unwrap();
        let split = bhu_splitting(&c, None).unwrap();
        let e = vec![Matrix::identity(2), Matrix::identity(3)];
        assert_eq!(xi(&c, &e, &split).unwrap().scalar, q(1));
    }

    #[test]
    fn single_cancellation() {
        let c = Complex::<Q>::new(0, vec![1, 1], vec![Matrix::from_ints(1, 1, &[5])]).unwrap();
        let split = bhu_splitting(&c, None).unwrap();
        let e = vec![Matrix::identity(1), Matrix::identity(1)];
        assert_eq!(xi(&c, &e, &split).unwrap().scalar, q(5));
    }

    #[test]
    fn kernel_before_complement() {
        // C^0 = Q^2 → C^1 = Q with ∂ = [1 0]; H^0 = <e_2>, U^0 = <e_1>.
        // The wedge e_1 ∧ e_2 = -(x_H ∧ x_U).
        let c = Complex::<Q>::new(0, vec![2, 1], vec![Matrix::from_ints(1, 2, &[1, 0])]).unwrap();
        let split = bhu_splitting(&c, None).unwrap();
        assert_eq!(split.h(0), &Matrix::from_ints(2, 1, &[0, 1]));
        let e = vec![Matrix::identity(2), Matrix::identity(1)];
        assert_eq!(xi(&c, &e, &split).unwrap().scalar, q(-1));
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let d0 = Matrix::<Q>::from_ints(1, 1, &[1]);
        let d1 = Matrix::<Q>::from_ints(1, 1, &[1]);
        assert!(matches!(Complex::new(-1, vec![1, 1, 1], vec![d0, d1]), Err(Error::NotAComplex(-1))));
    }

    #[test]
    fn upsilon_signs() {
        assert_eq!(upsilon_sign(-1, &[2, 4, 2]), 1);
        // H^{-1}, H^0 odd-dimensional: υ puts H^0 first.
        assert_eq!(upsilon_sign(-1, &[1, 1]), -1);
        assert_eq!(upsilon_sign(0, &[]), 1);
    }

    #[test]
    fn pf_on_shifted_complex() {
        let k = crate::forms::standard_alternating::<Q>(1);
        let c0 = Complex::<Q>::concentrated(0, 2);
        let id = vec![Matrix::identity(2)];
        assert_eq!(pf_on_complex(&c0, &id, &k, &Matrix::zeros(0, 0), &id).unwrap(), q(1));
        let c1 = Complex::<Q>::concentrated(1, 2);
        assert_eq!(pf_on_complex(&c1, &id, &Matrix::zeros(0, 0), &k, &id).unwrap(), q(1));
        // Acyclic with unimodular boundary and empty cohomology.
        let a = Complex::<Q>::new(0, vec![2, 2], vec![Matrix::identity(2)]).unwrap();
        let h = vec![Matrix::zeros(2, 0), Matrix::zeros(2, 0)];
        let e = vec![Matrix::identity(2), Matrix::identity(2)];
        assert_eq!(pf_on_complex(&a, &h, &Matrix::zeros(0, 0), &Matrix::zeros(0, 0), &e).unwrap(), q(1));
    }
}
