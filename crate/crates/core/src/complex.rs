//! Perfect complexes of free Q[G]-modules with pairings on their cohomology.
//!
//! Coordinates on Q[G]^r use index `j*|G| + g` for the vector g·a_j. A
//! Q[G]-linear map with a_j ↦ Σ_k M_jk a'_k is stored as the r×r'
//! group-ring matrix M; on coordinate columns it acts by `to_q`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cyclo::Cyclo;
use crate::det_lines::{bhu_splitting, extend_columns, upsilon_order, Complex};
use crate::error::{Error, Result};
use crate::forms::stable_projection;
use crate::group::{FiniteGroup, GroupRingElem, Rep};
use crate::matrix::Matrix;
use crate::rational::Rational;

type Q = Rational;

/// Matrix with entries in Q[G].
#[derive(Clone, Debug, PartialEq)]
pub struct GrMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<GroupRingElem<Q>>>,
}

impl GrMatrix {
    pub fn zeros(g: &FiniteGroup, rows: usize, cols: usize) -> Self {
        GrMatrix { rows, cols, entries: vec![vec![GroupRingElem::zero(g); cols]; rows] }
    }

    pub fn identity(g: &FiniteGroup, n: usize) -> Self {
        let mut m = Self::zeros(g, n, n);
        for i in 0..n {
            m.entries[i][i] = GroupRingElem::one(g);
        }
        m
    }

    pub fn scalar(x: GroupRingElem<Q>) -> Self {
        GrMatrix { rows: 1, cols: 1, entries: vec![vec![x]] }
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElem<Q> {
        &self.entries[i][j]
    }

    pub fn mul(&self, o: &Self, g: &FiniteGroup) -> Self {
        let mut out = Self::zeros(g, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let p = self.entries[i][k].mul(&o.entries[k][j], g);
                    out.entries[i][j] = out.entries[i][j].add(&p);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }

    pub fn block_diag(g: &FiniteGroup, a: &Self, b: &Self) -> Self {
        let mut out = Self::zeros(g, a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.entries[i][j] = a.entries[i][j].clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.entries[a.rows + i][a.cols + j] = b.entries[i][j].clone();
            }
        }
        out
    }

    /// Q-matrix of the module map on coordinate columns, shape (cols·|G|) × (rows·|G|).
    pub fn to_q(&self, g: &FiniteGroup) -> Matrix<Q> {
        let n = g.order();
        let mut out = Matrix::<Q>::zeros(self.cols * n, self.rows * n);
        for j in 0..self.rows {
            for k in 0..self.cols {
                for (h, c) in self.entries[j][k].coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for x in 0..n {
                        let e = out.get_mut(k * n + g.mul(x, h), j * n + x);
                        *e += c;
                    }
                }
            }
        }
        out
    }

    /// Block matrix with block (i, j) = ρ(M_ij).
    pub fn rep_image(&self, rep: &Rep<Cyclo>) -> Matrix<Cyclo> {
        let d = rep.dim();
        let mut out = Matrix::<Cyclo>::zeros(self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set_block(i * d, j * d, &rep.apply(&self.entries[i][j]));
            }
        }
        out
    }

    /// Det(M)(χ) = det T_χ(M) for a representation with character χ.
    pub fn det_rep(&self, rep: &Rep<Cyclo>) -> Cyclo {
        self.rep_image(rep).det()
    }
}

/// A bounded complex P^lo → … → P^hi of free Q[G]-modules with declared bases.
#[derive(Clone, Debug)]
pub struct PerfectGComplex {
    pub group: FiniteGroup,
    pub lo: i64,
    pub ranks: Vec<usize>,
    /// `boundaries[k]` is the r_k × r_{k+1} matrix of ∂^{lo+k}.
    pub boundaries: Vec<GrMatrix>,
    /// Optional λ^i per degree (identity when absent).
    pub transitions: Option<Vec<GrMatrix>>,
}

impl PerfectGComplex {
    pub fn new(group: FiniteGroup, lo: i64, ranks: Vec<usize>, boundaries: Vec<GrMatrix>) -> Result<Self> {
        if ranks.is_empty() || boundaries.len() + 1 != ranks.len() {
            return Err(Error::dim("need one boundary between consecutive terms"));
        }
        for (k, m) in boundaries.iter().enumerate() {
            if m.rows != ranks[k] || m.cols != ranks[k + 1] || m.entries.len() != m.rows {
                return Err(Error::dim(format!("boundary in degree {} has the wrong shape", lo + k as i64)));
            }
            if m.entries.iter().flatten().any(|x| x.coeffs.len() != group.order()) {
                return Err(Error::dim("group ring element of the wrong length"));
            }
        }
        let p = PerfectGComplex { group, lo, ranks, boundaries, transitions: None };
        p.q_complex()?;
        Ok(p)
    }

    pub fn with_transitions(mut self, lambdas: Vec<GrMatrix>) -> Result<Self> {
        if lambdas.len() != self.ranks.len() {
            return Err(Error::dim("one transition per degree"));
        }
        for (k, l) in lambdas.iter().enumerate() {
            let q = l.to_q(&self.group);
            if l.rows != self.ranks[k] || l.cols != self.ranks[k] || q.det().is_zero() {
                return Err(Error::pre(format!("transition in degree {} is not invertible", self.lo + k as i64)));
            }
        }
        self.transitions = Some(lambdas);
        Ok(self)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    pub fn dim(&self, i: i64) -> usize {
        self.rank(i) * self.group.order()
    }

    pub fn boundary(&self, i: i64) -> GrMatrix {
        if i >= self.lo && i < self.hi() {
            self.boundaries[(i - self.lo) as usize].clone()
        } else {
            GrMatrix::zeros(&self.group, self.rank(i), self.rank(i + 1))
        }
    }

    pub fn boundary_q(&self, i: i64) -> Matrix<Q> {
        self.boundary(i).to_q(&self.group)
    }

    /// The underlying complex of Q-vector spaces.
    pub fn q_complex(&self) -> Result<Complex<Q>> {
        let dims = self.degrees().map(|i| self.dim(i)).collect();
        let bs = (self.lo..self.hi()).map(|i| self.boundary_q(i)).collect();
        Complex::new(self.lo, dims, bs)
    }

    /// Σ (-1)^i rank P^i.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|i| if i.rem_euclid(2) == 0 { self.rank(i) as i64 } else { -(self.rank(i) as i64) }).sum()
    }

    pub fn action(&self, i: i64) -> Rep<Q> {
        self.group.regular_rep(self.rank(i))
    }

    pub fn transition(&self, i: i64) -> GrMatrix {
        match &self.transitions {
            Some(ls) if i >= self.lo && i <= self.hi() => ls[(i - self.lo) as usize].clone(),
            _ => GrMatrix::identity(&self.group, self.rank(i)),
        }
    }

    /// Degreewise direct sum; the bases of `self` come first.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let g = &self.group;
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        let ranks = (lo..=hi).map(|i| self.rank(i) + o.rank(i)).collect();
        let boundaries = (lo..hi).map(|i| GrMatrix::block_diag(g, &self.boundary(i), &o.boundary(i))).collect();
        let transitions = if self.transitions.is_some() || o.transitions.is_some() {
            Some((lo..=hi).map(|i| GrMatrix::block_diag(g, &self.transition(i), &o.transition(i))).collect())
        } else {
            None
        };
        PerfectGComplex { group: g.clone(), lo, ranks, boundaries, transitions }
    }

    /// Two-term complex Q[G] → Q[G] in degrees (t, t+1) with ∂(1) = x.
    pub fn cell(g: &FiniteGroup, t: i64, x: GroupRingElem<Q>) -> Self {
        PerfectGComplex { group: g.clone(), lo: t, ranks: vec![1, 1], boundaries: vec![GrMatrix::scalar(x)], transitions: None }
    }

    /// Q[G]^k in degree t with zero boundaries.
    pub fn concentrated(g: &FiniteGroup, t: i64, k: usize) -> Self {
        PerfectGComplex { group: g.clone(), lo: t, ranks: vec![k], boundaries: vec![], transitions: None }
    }

    /// New basis a' = L a in degree t (`l_inv` is L^{-1}).
    pub fn change_basis(&self, t: i64, l: &GrMatrix, l_inv: &GrMatrix) -> Result<Self> {
        let g = &self.group;
        let r = self.rank(t);
        if l.rows != r || l.cols != r || l.mul(l_inv, g) != GrMatrix::identity(g, r) {
            return Err(Error::pre("basis change is not invertible"));
        }
        let mut out = self.clone();
        if t > self.lo {
            let k = (t - 1 - self.lo) as usize;
            out.boundaries[k] = self.boundaries[k].mul(l_inv, g);
        }
        if t < self.hi() {
            let k = (t - self.lo) as usize;
            out.boundaries[k] = l.mul(&self.boundaries[k], g);
        }
        if let Some(ls) = &mut out.transitions {
            let k = (t - self.lo) as usize;
            ls[k] = ls[k].mul(l_inv, g);
        }
        Ok(out)
    }
}

/// Cocycle representatives of H^t in each degree together with G-invariant
/// symmetric forms σ^ev, σ^odd on the concatenations in υ order
/// (0, 2, -2, 4, … and 1, -1, 3, -3, …).
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyPairing {
    pub lo: i64,
    /// Columns in Q-coordinates of P^t.
    pub reps: Vec<Matrix<Q>>,
    pub sigma_ev: Matrix<Q>,
    pub sigma_odd: Matrix<Q>,
}

/// Offsets of each degree inside the even and odd concatenations.
pub fn parity_offsets(lo: i64, dims: &[usize]) -> Vec<(bool, usize)> {
    let hi = lo + dims.len() as i64 - 1;
    let (ev, odd) = upsilon_order(lo, hi);
    let mut out = vec![(true, 0); dims.len()];
    for (list, even) in [(ev, true), (odd, false)] {
        let mut off = 0;
        for t in list {
            let k = (t - lo) as usize;
            out[k] = (even, off);
            off += dims[k];
        }
    }
    out
}

impl CohomologyPairing {
    pub fn hi(&self) -> i64 {
        self.lo + self.reps.len() as i64 - 1
    }

    pub fn h_dim(&self, t: i64) -> usize {
        if t < self.lo || t > self.hi() {
            0
        } else {
            self.reps[(t - self.lo) as usize].cols()
        }
    }

    fn h_dims(&self) -> Vec<usize> {
        self.reps.iter().map(|m| m.cols()).collect()
    }

    /// Build σ^ev/σ^odd from a block function (t, t') ↦ h^t × h^{t'} gram.
    pub fn from_blocks(lo: i64, reps: Vec<Matrix<Q>>, mut f: impl FnMut(i64, i64) -> Matrix<Q>) -> Self {
        let dims: Vec<usize> = reps.iter().map(|m| m.cols()).collect();
        let offs = parity_offsets(lo, &dims);
        let ne: usize = offs.iter().zip(&dims).filter(|(o, _)| o.0).map(|(_, d)| d).sum();
        let no: usize = dims.iter().sum::<usize>() - ne;
        let mut ev = Matrix::zeros(ne, ne);
        let mut odd = Matrix::zeros(no, no);
        for (a, &(pa, oa)) in offs.iter().enumerate() {
            for (b, &(pb, ob)) in offs.iter().enumerate() {
                if pa != pb || dims[a] == 0 || dims[b] == 0 {
                    continue;
                }
                let blk = f(lo + a as i64, lo + b as i64);
                if pa {
                    ev.set_block(oa, ob, &blk);
                } else {
                    odd.set_block(oa, ob, &blk);
                }
            }
        }
        CohomologyPairing { lo, reps, sigma_ev: ev, sigma_odd: odd }
    }

    /// Gram block between the representatives of H^t and H^{t'}.
    pub fn block(&self, t: i64, u: i64) -> Matrix<Q> {
        let (dt, du) = (self.h_dim(t), self.h_dim(u));
        if dt == 0 || du == 0 || (t - u).rem_euclid(2) != 0 {
            return Matrix::zeros(dt, du);
        }
        let offs = parity_offsets(self.lo, &self.h_dims());
        let (even, ot) = offs[(t - self.lo) as usize];
        let (_, ou) = offs[(u - self.lo) as usize];
        let s = if even { &self.sigma_ev } else { &self.sigma_odd };
        s.block(ot, ou, dt, du)
    }

    pub fn scale(&self, c: &Q) -> Self {
        CohomologyPairing {
            lo: self.lo,
            reps: self.reps.clone(),
            sigma_ev: self.sigma_ev.scale(c),
            sigma_odd: self.sigma_odd.scale(c),
        }
    }

    /// `true` when σ only pairs H^t with H^{-t}.
    pub fn pairs_opposite_degrees(&self) -> bool {
        (self.lo..=self.hi()).all(|t| (self.lo..=self.hi()).all(|u| u == -t || self.block(t, u).is_zero()))
    }

    /// Re-express on a complex with a wider degree range (zero columns elsewhere).
    pub fn extend_to(&self, p: &PerfectGComplex) -> Self {
        let reps = p
            .degrees()
            .map(|t| {
                if t >= self.lo && t <= self.hi() {
                    let r = &self.reps[(t - self.lo) as usize];
                    let mut m = Matrix::zeros(p.dim(t), r.cols());
                    m.set_block(0, 0, r);
                    m
                } else {
                    Matrix::zeros(p.dim(t), 0)
                }
            })
            .collect();
        CohomologyPairing::from_blocks(p.lo, reps, |t, u| self.block(t, u))
    }

    /// Orthogonal sum for a direct sum of complexes (`p` first, `q` second).
    pub fn direct_sum(&self, p: &PerfectGComplex, o: &Self, q: &PerfectGComplex) -> Self {
        let s = p.direct_sum(q);
        let reps = s
            .degrees()
            .map(|t| {
                let a = if t >= self.lo && t <= self.hi() { self.reps[(t - self.lo) as usize].clone() } else { Matrix::zeros(p.dim(t), 0) };
                let b = if t >= o.lo && t <= o.hi() { o.reps[(t - o.lo) as usize].clone() } else { Matrix::zeros(q.dim(t), 0) };
                interleave(p, q, t, &a, &b)
            })
            .collect();
        CohomologyPairing::from_blocks(s.lo, reps, |t, u| Matrix::block_diag(&[self.block(t, u), o.block(t, u)]))
    }

    /// Representatives in the coordinates of a new basis a' = L a in degree t.
    pub fn change_basis(&self, p: &PerfectGComplex, t: i64, l_inv: &GrMatrix) -> Self {
        let mut out = self.clone();
        if t >= self.lo && t <= self.hi() {
            let k = (t - self.lo) as usize;
            out.reps[k] = l_inv.to_q(&p.group).mul(&self.reps[k]);
        }
        out
    }

    /// Coordinates of the class of a cocycle in the representative basis of H^t,
    /// as a matrix on all of P^t (it kills B^t and a complement of Z^t).
    pub fn class_map(&self, p: &PerfectGComplex, t: i64) -> Result<Matrix<Q>> {
        let n = p.dim(t);
        let h = if self.h_dim(t) == 0 { Matrix::zeros(n, 0) } else { self.reps[(t - self.lo) as usize].clone() };
        if n == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let b = p.boundary_q(t - 1).column_basis();
        let z = p.boundary_q(t).kernel();
        let u = extend_columns(&z, &Matrix::identity(n));
        let basis = Matrix::hstack(&[b.clone(), h.clone(), u]);
        if basis.cols() != n {
            return Err(Error::pre(format!("cohomology representatives in degree {t} are not a basis modulo boundaries")));
        }
        let inv = basis.inverse().map_err(|_| Error::pre(format!("cohomology representatives in degree {t} are dependent")))?;
        Ok(inv.block(b.cols(), 0, h.cols(), n))
    }

    /// Action of G on H^t in the representative basis.
    pub fn class_action(&self, p: &PerfectGComplex, t: i64) -> Result<Rep<Q>> {
        let pi = self.class_map(p, t)?;
        let k = self.h_dim(t);
        let rep = p.action(t);
        let h = if k == 0 { Matrix::zeros(p.dim(t), 0) } else { self.reps[(t - self.lo) as usize].clone() };
        Ok(Rep { mats: rep.mats.iter().map(|m| pi.mul(&m.mul(&h))).collect() })
    }

    /// Actions on H^ev and H^odd in υ order.
    pub fn parity_actions(&self, p: &PerfectGComplex) -> Result<(Rep<Q>, Rep<Q>)> {
        let (ev, odd) = upsilon_order(self.lo, self.hi());
        let n = p.group.order();
        let mut out = vec![];
        for list in [ev, odd] {
            let acts: Vec<Rep<Q>> = list.iter().map(|&t| self.class_action(p, t)).collect::<Result<_>>()?;
            let mats = (0..n).map(|g| Matrix::block_diag(&acts.iter().map(|a| a.mats[g].clone()).collect::<Vec<_>>())).collect();
            out.push(Rep { mats });
        }
        let odd = out.pop().expect("two parts");
        let ev = out.pop().expect("two parts");
        Ok((ev, odd))
    }

    /// Shape, cocycle, basis, symmetry, nondegeneracy and invariance checks.
    pub fn validate(&self, p: &PerfectGComplex) -> Result<()> {
        if self.lo != p.lo || self.reps.len() != p.ranks.len() {
            return Err(Error::dim("pairing degrees do not match the complex"));
        }
        let c = p.q_complex()?;
        let split = bhu_splitting(&c, None)?;
        for t in p.degrees() {
            let k = (t - p.lo) as usize;
            let r = &self.reps[k];
            if r.rows() != p.dim(t) {
                return Err(Error::dim(format!("representatives in degree {t} have the wrong length")));
            }
            if r.cols() != split.h[k].cols() {
                return Err(Error::pre(format!("expected {} representatives in degree {t}", split.h[k].cols())));
            }
            if !p.boundary_q(t).mul(r).is_zero() {
                return Err(Error::pre(format!("representatives in degree {t} are not cocycles")));
            }
            self.class_map(p, t)?;
        }
        let ne = self.sigma_ev.rows();
        let no = self.sigma_odd.rows();
        let (ev_rep, odd_rep) = self.parity_actions(p)?;
        for (s, rep, n, name) in [(&self.sigma_ev, &ev_rep, ne, "even"), (&self.sigma_odd, &odd_rep, no, "odd")] {
            if s.cols() != n || rep.mats.iter().any(|m| m.rows() != n) {
                return Err(Error::dim(format!("{name} form has the wrong size")));
            }
            if !s.is_symmetric() {
                return Err(Error::pre(format!("{name} form is not symmetric")));
            }
            if n > 0 && s.det().is_zero() {
                return Err(Error::Degenerate);
            }
            if !rep.preserves(s) {
                return Err(Error::pre(format!("{name} form is not G-invariant")));
            }
        }
        Ok(())
    }
}

fn interleave(p: &PerfectGComplex, q: &PerfectGComplex, t: i64, a: &Matrix<Q>, b: &Matrix<Q>) -> Matrix<Q> {
    let mut m = Matrix::zeros(p.dim(t) + q.dim(t), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(p.dim(t), a.cols(), b);
    m
}

/// Reynolds average Σ_g A_gᵀ X B_g / |G| of a bilinear pairing.
pub fn average_pairing(g: &FiniteGroup, a: &Rep<Q>, b: &Rep<Q>, x: &Matrix<Q>) -> Matrix<Q> {
    let mut acc = Matrix::zeros(x.rows(), x.cols());
    for k in 0..g.order() {
        acc = acc.add(&a.mats[k].transpose().mul(x).mul(&b.mats[k]));
    }
    acc.scale(&Q::new(1, g.order() as i64))
}

pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    Q::from_int(rng.gen_range(-bound..=bound))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Matrix<Q> {
    Matrix::from_fn(rows, cols, |_, _| random_rational(rng, bound))
}

/// Small random element of Q[G] with at most `support` nonzero coefficients.
pub fn random_group_ring(g: &FiniteGroup, rng: &mut ChaCha8Rng, support: usize) -> GroupRingElem<Q> {
    let mut x = GroupRingElem::zero(g);
    while x.is_zero() {
        for _ in 0..support.max(1) {
            let k = rng.gen_range(0..g.order());
            x.coeffs[k] = random_rational(rng, 2);
        }
    }
    x
}

/// Random invertible Q[G]-matrix built from elementary and ±g diagonal factors.
pub fn random_unimodular(g: &FiniteGroup, rng: &mut ChaCha8Rng, r: usize) -> (GrMatrix, GrMatrix) {
    let mut l = GrMatrix::identity(g, r);
    let mut li = GrMatrix::identity(g, r);
    for _ in 0..3 {
        let (f, fi) = if r >= 2 && rng.gen_bool(0.5) {
            let i = rng.gen_range(0..r);
            let j = (i + rng.gen_range(1..r)) % r;
            let x = random_group_ring(g, rng, 2);
            let mut f = GrMatrix::identity(g, r);
            let mut fi = GrMatrix::identity(g, r);
            f.entries[i][j] = x.clone();
            fi.entries[i][j] = x.scale(&-Q::one());
            (f, fi)
        } else {
            let i = rng.gen_range(0..r);
            let h = rng.gen_range(0..g.order());
            let s = if rng.gen_bool(0.5) { Q::one() } else { -Q::one() };
            let mut f = GrMatrix::identity(g, r);
            let mut fi = GrMatrix::identity(g, r);
            f.entries[i][i] = GroupRingElem::basis(g, h).scale(&s);
            fi.entries[i][i] = GroupRingElem::basis(g, g.inv(h)).scale(&s);
            (f, fi)
        };
        l = f.mul(&l, g);
        li = li.mul(&fi, g);
    }
    (l, li)
}

/// Options for `random_complex`.
#[derive(Clone, Copy, Debug)]
pub struct RandomComplexSpec {
    pub rank_max: usize,
    /// `Some(true)` forces χ ≠ 0, `Some(false)` forces χ = 0.
    pub euler_nonzero: Option<bool>,
    pub basis_changes: bool,
}

impl Default for RandomComplexSpec {
    fn default() -> Self {
        RandomComplexSpec { rank_max: 2, euler_nonzero: None, basis_changes: true }
    }
}

/// Random complex in degrees [-2, 2] assembled from mirrored cells, with
/// random invariant pairings σ^t : H^t × H^{-t} → Q.
pub fn random_complex(g: &FiniteGroup, rng: &mut ChaCha8Rng, spec: RandomComplexSpec) -> Result<(PerfectGComplex, CohomologyPairing)> {
    for _ in 0..200 {
        let mut parts: Vec<PerfectGComplex> = vec![];
        let k0 = rng.gen_range(0..=1usize);
        if k0 > 0 {
            parts.push(PerfectGComplex::concentrated(g, 0, k0));
        }
        let t = rng.gen_range(1..=2i64);
        if rng.gen_bool(0.5) {
            parts.push(PerfectGComplex::concentrated(g, t, 1));
            parts.push(PerfectGComplex::concentrated(g, -t, 1));
        }
        for (a, b) in [(0i64, -1i64), (1, -2)] {
            if rng.gen_bool(0.6) {
                let x = random_group_ring(g, rng, 2);
                parts.push(PerfectGComplex::cell(g, a, x.clone()));
                parts.push(PerfectGComplex::cell(g, b, x.involution(g)));
            }
        }
        if parts.is_empty() {
            continue;
        }
        let mut p = parts[0].clone();
        for q in &parts[1..] {
            p = p.direct_sum(q);
        }
        if p.ranks.iter().any(|&r| r > spec.rank_max) {
            continue;
        }
        match spec.euler_nonzero {
            Some(true) if p.euler_characteristic() == 0 => continue,
            Some(false) if p.euler_characteristic() != 0 => continue,
            _ => {}
        }
        if spec.basis_changes {
            for t in p.lo..=p.hi() {
                let r = p.rank(t);
                if r == 0 {
                    continue;
                }
                let (l, li) = random_unimodular(g, rng, r);
                p = p.change_basis(t, &l, &li)?;
            }
        }
        if let Ok(pairing) = random_pairing(&p, rng) {
            return Ok((p, pairing));
        }
    }
    Err(Error::Degenerate)
}

/// Random nondegenerate invariant pairings H^t × H^{-t} (symmetric at t = 0).
pub fn random_pairing(p: &PerfectGComplex, rng: &mut ChaCha8Rng) -> Result<CohomologyPairing> {
    let c = p.q_complex()?;
    let split = bhu_splitting(&c, None)?;
    let reps = split.h.clone();
    let skeleton = CohomologyPairing::from_blocks(p.lo, reps.clone(), |t, u| Matrix::zeros(split.h(t).cols(), split.h(u).cols()));
    let mut blocks = std::collections::BTreeMap::new();
    for t in 0..=p.lo.abs().max(p.hi().abs()) {
        let (dt, du) = (skeleton.h_dim(t), skeleton.h_dim(-t));
        if dt != du {
            return Err(Error::pre(format!("H^{t} and H^{} have different dimensions", -t)));
        }
        if dt == 0 {
            continue;
        }
        let at = skeleton.class_action(p, t)?;
        let au = skeleton.class_action(p, -t)?;
        let mut found = None;
        for _ in 0..50 {
            let mut x = random_matrix(rng, dt, du, 3);
            if t == 0 {
                x = x.add(&x.transpose());
            }
            let s = average_pairing(&p.group, &at, &au, &x);
            if !s.det().is_zero() {
                found = Some(s);
                break;
            }
        }
        let s = found.ok_or(Error::Degenerate)?;
        blocks.insert(t, s);
    }
    Ok(CohomologyPairing::from_blocks(p.lo, reps, |t, u| {
        if u != -t {
            Matrix::zeros(skeleton.h_dim(t), skeleton.h_dim(u))
        } else if t >= 0 {
            blocks[&t].clone()
        } else {
            blocks[&u].transpose()
        }
    }))
}

/// G-stable decomposition P^t = B^t ⊕ H^t ⊕ U^t with H^t spanned by
/// representatives of the given classes and B^{t+1} = ∂(U^t) column by column.
#[derive(Clone, Debug)]
pub struct StableSplitting {
    pub lo: i64,
    pub b: Vec<Matrix<Q>>,
    pub h: Vec<Matrix<Q>>,
    pub u: Vec<Matrix<Q>>,
}

impl StableSplitting {
    pub fn b(&self, t: i64) -> &Matrix<Q> {
        &self.b[(t - self.lo) as usize]
    }
    pub fn h(&self, t: i64) -> &Matrix<Q> {
        &self.h[(t - self.lo) as usize]
    }
    pub fn u(&self, t: i64) -> &Matrix<Q> {
        &self.u[(t - self.lo) as usize]
    }

    /// Inverse of [B | H | U]: rows give coordinates in the three summands.
    pub fn coords(&self, t: i64) -> Result<Matrix<Q>> {
        Matrix::hstack(&[self.b(t).clone(), self.h(t).clone(), self.u(t).clone()]).inverse()
    }
}

pub fn stable_splitting(p: &PerfectGComplex, pairing: &CohomologyPairing) -> Result<StableSplitting> {
    let g = &p.group;
    let mut out = StableSplitting { lo: p.lo, b: vec![], h: vec![], u: vec![] };
    let mut us: Vec<Matrix<Q>> = vec![];
    let mut hs: Vec<Matrix<Q>> = vec![];
    for t in p.degrees() {
        let n = p.dim(t);
        let rep = p.action(t);
        let z = p.boundary_q(t).kernel();
        let pz = stable_projection(g, &rep, &z);
        us.push(Matrix::<Q>::identity(n).sub(&pz).column_basis());
        let b = p.boundary_q(t - 1).column_basis();
        let pb = stable_projection(g, &rep, &b);
        let reps = if pairing.h_dim(t) == 0 { Matrix::zeros(n, 0) } else { pairing.reps[(t - p.lo) as usize].clone() };
        hs.push(Matrix::<Q>::identity(n).sub(&pb).mul(&reps));
    }
    for t in p.degrees() {
        let k = (t - p.lo) as usize;
        let b = if t > p.lo { p.boundary_q(t - 1).mul(&us[k - 1]) } else { Matrix::zeros(p.dim(t), 0) };
        out.b.push(b);
        out.h.push(hs[k].clone());
        out.u.push(us[k].clone());
        if out.coords(t).is_err() {
            return Err(Error::Invariant(format!("stable splitting failed in degree {t}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn right_multiplication_commutes_with_the_action() {
        let g = FiniteGroup::catalog("S3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_group_ring(&g, &mut rng, 3);
        let m = GrMatrix::scalar(x).to_q(&g);
        let rep = g.regular_rep(1);
        for a in &rep.mats {
            assert_eq!(a.mul(&m), m.mul(a));
        }
    }

    #[test]
    fn to_q_is_an_antihomomorphism() {
        let g = FiniteGroup::catalog("D4").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (l, li) = random_unimodular(&g, &mut rng, 2);
        assert_eq!(l.mul(&li, &g), GrMatrix::identity(&g, 2));
        let a = l.to_q(&g);
        let b = li.to_q(&g);
        assert_eq!(b.mul(&a), Matrix::identity(2 * g.order()));
    }

    #[test]
    fn random_complexes_validate() {
        for name in ["C2", "C3", "Q8"] {
            let g = FiniteGroup::catalog(name).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..4 {
                let (p, s) = random_complex(&g, &mut rng, RandomComplexSpec::default()).unwrap();
                s.validate(&p).unwrap();
                assert!(s.pairs_opposite_degrees());
                let st = stable_splitting(&p, &s).unwrap();
                for t in p.degrees() {
                    for m in &p.action(t).mats {
                        for x in [st.b(t), st.h(t), st.u(t)] {
                            assert!(x.solve(&m.mul(x)).is_some(), "summand not stable");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nonzero_square_names_the_degree() {
        let g = FiniteGroup::catalog("C2").unwrap();
        let one = GrMatrix::identity(&g, 1);
        let err = PerfectGComplex::new(g, 0, vec![1, 1, 1], vec![one.clone(), one]).unwrap_err();
        assert!(matches!(err, Error::NotAComplex(0)));
    }
}
