//! Fixed-point constructions: r_G bases, group-ring valued forms σ̃, the
//! equivariant complexes (P ⊗ W)^G and the evaluators comparing Pfaffians and
//! determinants computed on fixed spaces with those of T_W(σ̃).

use rand_chacha::ChaCha8Rng;

use crate::complex::{average_pairing, random_matrix, CohomologyPairing, GrMatrix, PerfectGComplex};
use crate::cyclo::Cyclo;
use crate::det_lines::Complex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::{isotypic_signature, pf_functional, pfaffian_selfadjoint};
use crate::group::{central_idempotent, left_mult_matrix, BasisItem, FiniteGroup, GroupRingElem, Rep};
use crate::matrix::Matrix;
use crate::rational::Rational;

type Q = Rational;

/// A representation carrying a form, used as the second tensor factor.
///
/// For a symplectic basis item the form is κ (bilinear) and the wedge is the
/// hyperbolic basis. For an ideal C[G]e_χ the basis is ν-orthogonal with
/// norms `norms`, the form is ν (sesquilinear) and the wedge is the identity.
#[derive(Clone, Debug)]
pub struct Target {
    pub name: String,
    pub rep: Rep<Cyclo>,
    pub form: Matrix<Cyclo>,
    pub hermitian: bool,
    pub wedge: Matrix<Cyclo>,
    pub norms: Vec<Cyclo>,
}

impl Target {
    pub fn symplectic(item: &BasisItem) -> Self {
        Target {
            name: item.name.clone(),
            rep: item.rep.clone(),
            form: item.kappa.clone(),
            hermitian: false,
            wedge: item.hyperbolic.clone(),
            norms: vec![],
        }
    }

    /// The two-sided ideal C[G]e_χ of the irreducible `idx` with a ν-orthogonal basis.
    pub fn ideal(g: &FiniteGroup, idx: usize) -> Result<Self> {
        let irr = &g.irreps()[idx];
        let e = central_idempotent(g, &irr.character);
        let span = left_mult_matrix(g, &e).column_basis();
        let order = Q::from_int(g.order() as i64);
        let nu = |x: &[Cyclo], y: &[Cyclo]| -> Cyclo {
            let mut acc = Cyclo::zero();
            for (a, b) in x.iter().zip(y) {
                acc += &a.mul_ref(&b.conj());
            }
            acc.scale(&order)
        };
        let mut basis: Vec<Vec<Cyclo>> = vec![];
        let mut norms: Vec<Cyclo> = vec![];
        for x in span.columns() {
            let mut v = x.clone();
            for (b, nb) in basis.iter().zip(&norms) {
                let c = nu(&x, b).div_ref(nb)?;
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= &c.mul_ref(bi);
                }
            }
            let nv = nu(&v, &v);
            if nv.is_zero() {
                return Err(Error::Invariant("isotropic vector for a definite form".into()));
            }
            basis.push(v);
            norms.push(nv);
        }
        let d = basis.len();
        if d != irr.degree() * irr.degree() {
            return Err(Error::Invariant(format!("ideal of {} has dimension {d}", irr.name)));
        }
        let mats = (0..g.order())
            .map(|h| {
                let lm = left_mult_matrix(g, &GroupRingElem::<Q>::basis(g, h)).map(|x| x.to_cyclo());
                Matrix::from_fn(d, d, |s, t| {
                    let img = lm.mul_vec(&basis[t]);
                    nu(&img, &basis[s]).div_ref(&norms[s]).expect("nonzero norm")
                })
            })
            .collect();
        let form = Matrix::from_fn(d, d, |s, t| if s == t { norms[s].clone() } else { Cyclo::zero() });
        Ok(Target { name: irr.name.clone(), rep: Rep { mats }, form, hermitian: true, wedge: Matrix::identity(d), norms })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Product of the ν-norms of the basis (1 for symplectic targets).
    pub fn norm_product(&self) -> Cyclo {
        self.norms.iter().fold(Cyclo::one(), |a, b| a.mul_ref(b))
    }

    fn wedge_block(&self, r: usize) -> Matrix<Cyclo> {
        Matrix::block_diag(&vec![self.wedge.clone(); r])
    }

    /// `xᵀ Ω y` or `xᵀ Ω conj(y)` according to the form type.
    pub fn pair(&self, x: &Matrix<Cyclo>, omega: &Matrix<Cyclo>, y: &Matrix<Cyclo>) -> Matrix<Cyclo> {
        let y = if self.hermitian { y.conj() } else { y.clone() };
        x.transpose().mul(omega).mul(&y)
    }
}

/// Vectors r_G(u_j ⊗ w_n) = Σ_g g·u_j ⊗ ρ(g) w_n in coordinates of
/// Q[G]^q ⊗ W (index `(j*|G| + g)*dim W + a`), ordered by j then n.
pub fn r_g_basis(g: &FiniteGroup, q: usize, rep: &Rep<Cyclo>, wedge: &Matrix<Cyclo>) -> Matrix<Cyclo> {
    let n = g.order();
    let d = rep.dim();
    let m = wedge.cols();
    let mut out = Matrix::zeros(q * n * d, q * m);
    for j in 0..q {
        for x in 0..n {
            let img = rep.mats[x].mul(wedge);
            out.set_block((j * n + x) * d, j * m, &img);
        }
    }
    out
}

/// Diagonal action on Q[G]^q ⊗ W.
pub fn tensor_action(g: &FiniteGroup, q: usize, rep: &Rep<Cyclo>) -> Rep<Cyclo> {
    let reg = g.regular_rep(q);
    Rep { mats: reg.mats.iter().zip(&rep.mats).map(|(a, b)| a.map(|x| x.to_cyclo()).kron(b)).collect() }
}

/// Gram matrix of σ ⊗ form between r_G(a_j ⊗ e_a) (rank r) and r_G(a'_k ⊗ e_b)
/// (rank r2), where `s` is the Q-gram of σ on the coordinates of the two free modules.
pub fn fixed_gram(g: &FiniteGroup, s: &Matrix<Q>, r: usize, r2: usize, t: &Target) -> Matrix<Cyclo> {
    let n = g.order();
    let d = t.dim();
    let left: Vec<Matrix<Cyclo>> = (0..n).map(|x| t.rep.mats[x].transpose().mul(&t.form)).collect();
    let right: Vec<Matrix<Cyclo>> = (0..n).map(|h| if t.hermitian { t.rep.mats[h].conj() } else { t.rep.mats[h].clone() }).collect();
    let mut out = Matrix::zeros(r * d, r2 * d);
    for j in 0..r {
        for k in 0..r2 {
            let mut blk = Matrix::<Cyclo>::zeros(d, d);
            for x in 0..n {
                let mut inner = Matrix::<Cyclo>::zeros(d, d);
                let mut any = false;
                for (h, rh) in right.iter().enumerate() {
                    let c = s.get(j * n + x, k * n + h);
                    if !c.is_zero() {
                        inner = inner.add(&rh.scale_rational(c));
                        any = true;
                    }
                }
                if any {
                    blk = blk.add(&left[x].mul(&inner));
                }
            }
            out.set_block(j * d, k * d, &blk);
        }
    }
    out
}

/// σ̃(u_i, u_j) = Σ_g σ(g u_i, u_j) g^{-1} for a G-invariant σ on Q[G]^q.
pub fn group_ring_form(g: &FiniteGroup, s: &Matrix<Q>, q: usize) -> Result<GrMatrix> {
    let n = g.order();
    if s.rows() != q * n || s.cols() != q * n {
        return Err(Error::dim("form does not match the free rank"));
    }
    if !g.regular_rep(q).preserves(s) {
        return Err(Error::pre("form is not G-invariant"));
    }
    let mut out = GrMatrix::zeros(g, q, q);
    for i in 0..q {
        for j in 0..q {
            for x in 0..n {
                out.entries[i][j].coeffs[g.inv(x)] = s.get(i * n + x, j * n).clone();
            }
        }
    }
    Ok(out)
}

/// σ̃(u_i, u_j) = involution(σ̃(u_j, u_i)) entrywise.
pub fn is_hermitian(g: &FiniteGroup, t: &GrMatrix) -> bool {
    (0..t.rows).all(|i| (0..t.cols).all(|j| t.entries[i][j] == t.entries[j][i].involution(g)))
}

/// κ^{(q)}(Ax, y) = κ^{(q)}(x, Ay) for A = T^{(q)}_W(t).
pub fn is_selfadjoint(t: &GrMatrix, item: &BasisItem) -> bool {
    let a = t.rep_image(&item.rep);
    let k = Matrix::block_diag(&vec![item.kappa.clone(); t.rows]);
    a.transpose().mul(&k) == k.mul(&a)
}

/// Pf of (σ ⊗ κ)^G on ∧_{in} |G|^{-1} r_G(u_i ⊗ w_n).
pub fn pf_fixed_space(g: &FiniteGroup, s: &Matrix<Q>, q: usize, item: &BasisItem) -> Result<Cyclo> {
    let n = g.order();
    let v = r_g_basis(g, q, &item.rep, &item.hyperbolic).scale_rational(&Q::new(1, n as i64));
    let full = s.map(|x| x.to_cyclo()).kron(&item.kappa);
    pf_functional(&full, &v)
}

/// pf_{κ^{(q)}}(|G|^{-1} T_W^{(q)}(σ̃)).
pub fn pf_group_ring(g: &FiniteGroup, s: &Matrix<Q>, q: usize, item: &BasisItem) -> Result<Cyclo> {
    let t = group_ring_form(g, s, q)?;
    let a = t.rep_image(&item.rep).scale_rational(&Q::new(1, g.order() as i64));
    let k = Matrix::block_diag(&vec![item.kappa.clone(); q]);
    pfaffian_selfadjoint(&a, &k)
}

/// Both sides of the determinant identity for an ideal V: the fixed-space
/// determinant |det((σ ⊗ ν)^G)| on the orthonormalised r_G basis and
/// |det(|G| T_V^{(q)}(σ̃))|.
pub fn metric_squares(g: &FiniteGroup, s: &Matrix<Q>, q: usize, v: &Target) -> Result<(Cyclo, Cyclo)> {
    let t = group_ring_form(g, s, q)?;
    let gram = fixed_gram(g, s, q, q, v);
    let lhs = abs_real(&gram.det())?.div_ref(&v.norm_product().pow(q as i64)?)?;
    let rhs = abs_real(&t.rep_image(&v.rep).scale_rational(&Q::from_int(g.order() as i64)).det())?;
    Ok((lhs, rhs))
}

pub fn abs_real(x: &Cyclo) -> Result<Cyclo> {
    Ok(if x.real_sign()? < 0 { -x.clone() } else { x.clone() })
}

/// Σ over constituents ψ of W of the multiplicity of ψ̄ in the positive
/// (resp. negative) part of σ, i.e. n^±(σ) = dim(U^± ⊗ W)^G.
pub fn isotypic_counts(g: &FiniteGroup, rep: &Rep<Q>, s: &Matrix<Q>, constituents: &[usize]) -> Result<(usize, usize)> {
    let mut plus = 0;
    let mut minus = 0;
    for &c in constituents {
        let chi: Vec<Cyclo> = g.irreps()[c].character.iter().map(|x| x.conj()).collect();
        if s.rows() == 0 {
            continue;
        }
        let sig = isotypic_signature(g, rep, s, &chi)?;
        plus += sig.mult_positive;
        minus += sig.mult_negative;
    }
    Ok((plus, minus))
}

/// Outcome of the sign comparison for one module and one basis character.
#[derive(Clone, Debug, PartialEq)]
pub struct SignCheck {
    pub n_plus: usize,
    pub n_minus: usize,
    pub pf_sign: i8,
    pub predicted: i8,
}

impl SignCheck {
    pub fn holds(&self) -> bool {
        self.n_plus.is_multiple_of(2) && self.n_minus.is_multiple_of(2) && self.pf_sign == self.predicted
    }
}

/// i^{n^-} for even n^-.
pub fn i_power(n_minus: i64) -> Result<i8> {
    if n_minus.rem_euclid(2) != 0 {
        return Err(Error::Invariant(format!("odd negative index {n_minus}")));
    }
    Ok(if (n_minus / 2).rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Sign of pf_{κ^{(q)}}(T_W^{(q)}(σ̃)) against i^{n^-} from isotypic signatures.
pub fn sign_check(g: &FiniteGroup, s: &Matrix<Q>, q: usize, item: &BasisItem) -> Result<SignCheck> {
    let (n_plus, n_minus) = isotypic_counts(g, &g.regular_rep(q), s, &item.constituents)?;
    let t = group_ring_form(g, s, q)?;
    let k = Matrix::block_diag(&vec![item.kappa.clone(); q]);
    let pf = pfaffian_selfadjoint(&t.rep_image(&item.rep), &k)?;
    let predicted = if n_minus % 2 == 0 { i_power(n_minus as i64)? } else { 0 };
    Ok(SignCheck { n_plus, n_minus, pf_sign: pf.real_sign()?, predicted })
}

/// |G|^{-1} r_G : W → (R[G] ⊗ W)^G is an isometry for ν ⊗ κ.
pub fn r_g_is_isometry(g: &FiniteGroup, item: &BasisItem) -> bool {
    let n = g.order();
    let d = item.dim();
    let v = r_g_basis(g, 1, &item.rep, &Matrix::identity(d)).scale_rational(&Q::new(1, n as i64));
    let nu = Matrix::<Cyclo>::identity(n).scale_rational(&Q::from_int(n as i64));
    nu.kron(&item.kappa).congruence(&v) == item.kappa
}

/// r_G(ρ(h) w) equals r_G(w) with h^{-1} acting on the right of the group factor.
pub fn r_g_transports_action(g: &FiniteGroup, item: &BasisItem) -> bool {
    let n = g.order();
    let d = item.dim();
    let base = r_g_basis(g, 1, &item.rep, &Matrix::identity(d));
    (0..n).all(|h| {
        let lhs = base.mul(&item.rep.mats[h]);
        let right = GrMatrix::scalar(GroupRingElem::basis(g, g.inv(h))).to_q(g).map(|x| x.to_cyclo());
        let rhs = right.kron(&Matrix::identity(d)).mul(&base);
        lhs == rhs
    })
}

/// Random nondegenerate G-invariant symmetric form on Q[G]^q.
pub fn random_invariant_form(g: &FiniteGroup, q: usize, rng: &mut ChaCha8Rng) -> Result<Matrix<Q>> {
    let rep = g.regular_rep(q);
    for _ in 0..100 {
        let x = random_matrix(rng, q * g.order(), q * g.order(), 3);
        let x = x.add(&x.transpose());
        let s = average_pairing(g, &rep, &rep, &x);
        if !s.det().is_zero() {
            return Ok(s);
        }
    }
    Err(Error::Degenerate)
}

/// The complex (P ⊗ W)^G in coordinates of the r_G(a_j ⊗ e_a), e_a the basis of the target.
pub fn fixed_complex(p: &PerfectGComplex, t: &Target) -> Result<Complex<Cyclo>> {
    let g = &p.group;
    let d = t.dim();
    let dims = p.degrees().map(|i| p.rank(i) * d).collect();
    let mut bs = vec![];
    for i in p.lo..p.hi() {
        let m = p.boundary(i);
        let mut out = Matrix::<Cyclo>::zeros(p.rank(i + 1) * d, p.rank(i) * d);
        for j in 0..m.rows {
            for k in 0..m.cols {
                out.set_block(k * d, j * d, &t.rep.apply(&m.entries[j][k].involution(g)));
            }
        }
        bs.push(out);
    }
    Complex::new(p.lo, dims, bs)
}

/// Basis wedges ∧_{jn} b_{jn} per degree, in fixed-complex coordinates.
pub fn fixed_wedges(p: &PerfectGComplex, t: &Target) -> Vec<Matrix<Cyclo>> {
    p.degrees().map(|i| t.wedge_block(p.rank(i))).collect()
}

/// Gram of σ ⊗ form between cocycle representatives of the fixed complex in
/// degrees t and u (columns of `x` and `y`).
pub fn cohomology_gram(
    p: &PerfectGComplex,
    pairing: &CohomologyPairing,
    target: &Target,
    t: i64,
    u: i64,
    x: &Matrix<Cyclo>,
    y: &Matrix<Cyclo>,
) -> Result<Matrix<Cyclo>> {
    if x.cols() == 0 || y.cols() == 0 {
        return Ok(Matrix::zeros(x.cols(), y.cols()));
    }
    let pt = pairing.class_map(p, t)?;
    let pu = pairing.class_map(p, u)?;
    let s = pt.transpose().mul(&pairing.block(t, u)).mul(&pu);
    let omega = fixed_gram(&p.group, &s, p.rank(t), p.rank(u), target);
    Ok(target.pair(x, &omega, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn q(n: i64) -> Cyclo {
        Cyclo::from_int(n)
    }

    #[test]
    fn trivial_group_scalar_form() {
        let g = FiniteGroup::catalog("trivial").unwrap();
        let item = &g.symplectic_basis().unwrap()[0];
        let s = Matrix::from_ints(1, 1, &[7]);
        assert_eq!(pf_fixed_space(&g, &s, 1, item).unwrap(), q(7));
        assert_eq!(pf_group_ring(&g, &s, 1, item).unwrap(), q(7));
    }

    #[test]
    fn c2_isotypic_scalars() {
        let g = FiniteGroup::catalog("C2").unwrap();
        let basis = g.symplectic_basis().unwrap();
        // σ̃ = 3e + σ: σ(u,u) = 3, σ(gu,u) = 1.
        let s = Matrix::from_ints(2, 2, &[3, 1, 1, 3]);
        let t = group_ring_form(&g, &s, 1).unwrap();
        assert_eq!(t.entries[0][0].coeffs, vec![Q::from_int(3), Q::from_int(1)]);
        let by_name = |n: &str| basis.iter().find(|b| b.name == n).unwrap();
        let sgn = by_name("2*chi1");
        let one = by_name("2*chi0");
        assert_eq!(pf_fixed_space(&g, &s, 1, sgn).unwrap(), q(1));
        assert_eq!(pf_group_ring(&g, &s, 1, sgn).unwrap(), q(1));
        assert_eq!(pf_fixed_space(&g, &s, 1, one).unwrap(), q(2));
        assert_eq!(pf_group_ring(&g, &s, 1, one).unwrap(), q(2));
    }

    #[test]
    fn trace_form_of_golden_ratio_field() {
        // Basis {α, σα} of Z[(1+√5)/2]: Tr(α²) = 3, Tr(α·σα) = -2.
        let g = FiniteGroup::catalog("C2").unwrap();
        let s = Matrix::from_ints(2, 2, &[3, -2, -2, 3]);
        let t = group_ring_form(&g, &s, 1).unwrap();
        assert_eq!(t.entries[0][0].coeffs, vec![Q::from_int(3), Q::from_int(-2)]);
        assert!(is_hermitian(&g, &t));
    }

    #[test]
    fn selfadjointness() {
        let g = FiniteGroup::catalog("Q8").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_invariant_form(&g, 2, &mut rng).unwrap();
        let t = group_ring_form(&g, &s, 2).unwrap();
        for item in g.symplectic_basis().unwrap() {
            assert!(is_selfadjoint(&t, &item));
            assert!(is_selfadjoint(&GrMatrix::identity(&g, 2), &item));
            let mut bad = GrMatrix::identity(&g, 2);
            bad.entries[0][1] = GroupRingElem::basis(&g, 2);
            assert!(!is_selfadjoint(&bad, &item), "{}", item.name);
        }
    }

    #[test]
    fn negative_definite_sign() {
        let g = FiniteGroup::catalog("C2").unwrap();
        let s = Matrix::from_ints(2, 2, &[-1, 0, 0, -1]);
        let one = g.symplectic_basis().unwrap().into_iter().find(|b| b.name == "2*chi0").unwrap();
        let c = sign_check(&g, &s, 1, &one).unwrap();
        assert_eq!((c.n_minus, c.pf_sign, c.predicted), (2, -1, -1));
    }

    #[test]
    fn fixed_space_identities_on_catalog() {
        for name in ["C3", "S3", "Q8"] {
            let g = FiniteGroup::catalog(name).unwrap();
            for item in g.symplectic_basis().unwrap() {
                assert!(r_g_is_isometry(&g, &item), "{name} {}", item.name);
                assert!(r_g_transports_action(&g, &item), "{name} {}", item.name);
                let b = r_g_basis(&g, 2, &item.rep, &item.hyperbolic);
                assert_eq!(b.cols(), 2 * item.dim());
                for m in &tensor_action(&g, 2, &item.rep).mats {
                    assert_eq!(m.mul(&b), b);
                }
            }
        }
    }

    #[test]
    fn ideal_metric_on_trivial_group() {
        let g = FiniteGroup::catalog("trivial").unwrap();
        let v = Target::ideal(&g, 0).unwrap();
        let s = Matrix::from_ints(1, 1, &[-3]);
        let (l, r) = metric_squares(&g, &s, 1, &v).unwrap();
        assert_eq!((l, r), (q(3), q(3)));
    }
}
