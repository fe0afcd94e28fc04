//! Serre-type duality data σ_{i,j}: H^{i,j} × H^{d-i,d-j} → Q and their
//! symmetrisation into forms σ^t on H^t = ⊕_{i+j-d=t} H^{i,j}.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{average_pairing, random_matrix};
use crate::equivariant::{isotypic_counts, random_invariant_form};
use crate::error::{Error, Result};
use crate::forms::hyp_decompose;
use crate::group::{FiniteGroup, Rep};
use crate::matrix::Matrix;
use crate::rational::Rational;

type Q = Rational;

/// Spaces H^{i,j} (0 ≤ i, j ≤ d) with G-actions and the pairings σ_{i,j},
/// stored as dims(i,j) × dims(d-i,d-j) matrices.
#[derive(Clone, Debug)]
pub struct DualityDatum {
    pub group: FiniteGroup,
    pub d: usize,
    pub actions: Vec<Vec<Rep<Q>>>,
    pub sigma: Vec<Vec<Matrix<Q>>>,
}

/// (-1)^{(d+1)(i+j)}.
pub fn duality_sign(d: usize, i: usize, j: usize) -> Q {
    if ((d + 1) * (i + j)).is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

impl DualityDatum {
    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.actions[i][j].dim()
    }

    /// σ_{i,j}(x,y) = (-1)^{(d+1)(i+j)} σ_{d-i,d-j}(y,x), invariance and nondegeneracy.
    pub fn validate(&self) -> Result<()> {
        let d = self.d;
        for i in 0..=d {
            for j in 0..=d {
                let s = &self.sigma[i][j];
                if s.rows() != self.dim(i, j) || s.cols() != self.dim(d - i, d - j) {
                    return Err(Error::dim(format!("σ_{{{i},{j}}} has the wrong shape")));
                }
                let partner = self.sigma[d - i][d - j].transpose().scale(&duality_sign(d, i, j));
                if *s != partner {
                    return Err(Error::pre(format!("σ_{{{i},{j}}} violates the duality commutation rule")));
                }
                let (a, b) = (&self.actions[i][j], &self.actions[d - i][d - j]);
                if a.mats.iter().zip(&b.mats).any(|(x, y)| x.transpose().mul(s).mul(y) != *s) {
                    return Err(Error::pre(format!("σ_{{{i},{j}}} is not G-invariant")));
                }
                if s.rows() > 0 && s.det().is_zero() {
                    return Err(Error::Degenerate);
                }
            }
        }
        Ok(())
    }

    /// Summands (i, j) of H^t, ordered by i.
    pub fn summands(&self, t: i64) -> Vec<(usize, usize)> {
        let d = self.d as i64;
        (0..=d)
            .filter_map(|i| {
                let j = t + d - i;
                (0..=d).contains(&j).then_some((i as usize, j as usize))
            })
            .collect()
    }
}

/// Symmetrised forms. `blocks[t]` is the gram of σ^t on H^t × H^{-t}; the
/// full symmetric form on ⊕_t H^t pairs t with -t.
#[derive(Clone, Debug)]
pub struct SymmetrizedPairing {
    pub d: usize,
    pub dims: Vec<usize>,
    pub actions: Vec<Rep<Q>>,
    pub blocks: Vec<Matrix<Q>>,
    pub sigma_ev: Matrix<Q>,
    pub sigma_odd: Matrix<Q>,
    pub action_ev: Rep<Q>,
    pub action_odd: Rep<Q>,
    /// Basis (columns) of ⊕_{t<0} H^t inside each parity, an isotropic half.
    pub half_ev: Matrix<Q>,
    pub half_odd: Matrix<Q>,
}

impl SymmetrizedPairing {
    fn idx(&self, t: i64) -> usize {
        (t + self.d as i64) as usize
    }

    pub fn block(&self, t: i64) -> &Matrix<Q> {
        &self.blocks[self.idx(t)]
    }

    pub fn h_dim(&self, t: i64) -> usize {
        self.dims[self.idx(t)]
    }
}

fn block_rep(g: &FiniteGroup, reps: &[&Rep<Q>]) -> Rep<Q> {
    Rep { mats: (0..g.order()).map(|k| Matrix::block_diag(&reps.iter().map(|r| r.mats[k].clone()).collect::<Vec<_>>())).collect() }
}

/// σ'_{d-i,d-j}(y,x) = σ_{i,j}(x,y); σ^t = ⊕ σ_{i,j} for t < 0, ⊕ σ'_{i,j}
/// for t > 0, and on H^0 σ_{i,d-i} for i < d/2, σ_{d/2,d/2}, σ'_{i,d-i} for i > d/2.
pub fn symmetrize_duality(dd: &DualityDatum) -> Result<SymmetrizedPairing> {
    dd.validate()?;
    let g = &dd.group;
    let d = dd.d as i64;
    let du = dd.d;
    let mut dims = vec![];
    let mut actions = vec![];
    for t in -d..=d {
        let s = dd.summands(t);
        dims.push(s.iter().map(|&(i, j)| dd.dim(i, j)).sum());
        actions.push(block_rep(g, &s.iter().map(|&(i, j)| &dd.actions[i][j]).collect::<Vec<_>>()));
    }
    let mut blocks = vec![];
    for t in -d..=d {
        let rows = dd.summands(t);
        let cols = dd.summands(-t);
        let mut m = Matrix::<Q>::zeros(dims[(t + d) as usize], dims[(d - t) as usize]);
        let mut ro = 0;
        for &(i, j) in &rows {
            // (i, j) pairs with (d-i, d-j) in H^{-t}
            let co: usize = cols.iter().take_while(|&&(a, _)| a != du - i).map(|&(a, b)| dd.dim(a, b)).sum();
            let primed = if t > 0 { true } else if t < 0 { false } else { 2 * i > du };
            let blk = if primed { dd.sigma[du - i][du - j].transpose() } else { dd.sigma[i][j].clone() };
            m.set_block(ro, co, &blk);
            ro += dd.dim(i, j);
        }
        blocks.push(m);
    }
    // Parity assembly: degrees in increasing order within each parity.
    let mut out = vec![];
    for parity in [0i64, 1] {
        let ts: Vec<i64> = (-d..=d).filter(|t| t.rem_euclid(2) == parity).collect();
        let offs: Vec<usize> = ts.iter().scan(0, |acc, &t| {
            let o = *acc;
            *acc += dims[(t + d) as usize];
            Some(o)
        }).collect();
        let total: usize = ts.iter().map(|&t| dims[(t + d) as usize]).sum();
        let mut m = Matrix::<Q>::zeros(total, total);
        let mut half = vec![];
        for (k, &t) in ts.iter().enumerate() {
            let partner = ts.iter().position(|&u| u == -t).expect("parity is symmetric");
            m.set_block(offs[k], offs[partner], &blocks[(t + d) as usize]);
            let n = dims[(t + d) as usize];
            if t < 0 {
                for c in 0..n {
                    half.push(offs[k] + c);
                }
            }
        }
        let mut hm = Matrix::<Q>::zeros(total, half.len());
        for (c, &r) in half.iter().enumerate() {
            hm.set(r, c, Q::one());
        }
        // On H^0 with d odd, i < d/2 is an isotropic half as well.
        if parity == 0 && d % 2 == 1 {
            let z = ts.iter().position(|&u| u == 0).expect("zero degree");
            let mut extra = vec![];
            let mut o = offs[z];
            for (i, j) in dd.summands(0) {
                if 2 * i < du {
                    extra.extend(o..o + dd.dim(i, j));
                }
                o += dd.dim(i, j);
            }
            let mut hm2 = Matrix::<Q>::zeros(total, half.len() + extra.len());
            hm2.set_block(0, 0, &hm);
            for (c, &r) in extra.iter().enumerate() {
                hm2.set(r, half.len() + c, Q::one());
            }
            hm = hm2;
        }
        let act = block_rep(g, &ts.iter().map(|&t| &actions[(t + d) as usize]).collect::<Vec<_>>());
        out.push((m, act, hm));
    }
    let (sigma_odd, action_odd, half_odd) = out.pop().expect("two parities");
    let (sigma_ev, action_ev, half_ev) = out.pop().expect("two parities");
    if !sigma_ev.is_symmetric() || !sigma_odd.is_symmetric() {
        return Err(Error::Invariant("symmetrised form is not symmetric".into()));
    }
    Ok(SymmetrizedPairing { d: du, dims, actions, blocks, sigma_ev, sigma_odd, action_ev, action_odd, half_ev, half_odd })
}

/// σ is congruent to Hyp(W) for the isotropic half W (no anisotropic residue).
fn is_hyperbolic(g: &FiniteGroup, s: &Matrix<Q>, rep: &Rep<Q>, half: &Matrix<Q>) -> Result<bool> {
    if s.rows() == 0 {
        return Ok(true);
    }
    if 2 * half.cols() != s.rows() {
        return Ok(false);
    }
    let dec = hyp_decompose(s, half, Some((g, rep)))?;
    Ok(dec.u.cols() == 0 && s.congruence(&dec.basis()) == dec.target_gram())
}

/// Verdict of the symmetrisation checks on one datum.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityVerdict {
    pub symmetric: bool,
    pub odd_hyperbolic: bool,
    /// Only asserted for odd d; `true` otherwise.
    pub even_hyperbolic_if_d_odd: bool,
    /// Per basis character: (n^+ - n^-)(σ^ev) - (n^+ - n^-)(σ^odd) and the same for σ_{d/2,d/2}.
    pub signature_reduction: Vec<(String, i64, i64)>,
}

impl DualityVerdict {
    pub fn holds(&self) -> bool {
        self.symmetric && self.odd_hyperbolic && self.even_hyperbolic_if_d_odd && self.signature_reduction.iter().all(|(_, a, b)| a == b)
    }
}

pub fn duality_check(dd: &DualityDatum) -> Result<DualityVerdict> {
    let sp = symmetrize_duality(dd)?;
    let g = &dd.group;
    let symmetric = (-(dd.d as i64)..=dd.d as i64).all(|t| *sp.block(t) == sp.block(-t).transpose());
    let odd_hyperbolic = is_hyperbolic(g, &sp.sigma_odd, &sp.action_odd, &sp.half_odd)?;
    let even_hyperbolic_if_d_odd = dd.d.is_multiple_of(2) || is_hyperbolic(g, &sp.sigma_ev, &sp.action_ev, &sp.half_ev)?;
    let mut signature_reduction = vec![];
    for item in g.symplectic_basis()? {
        let c = &item.constituents;
        let (pe, me) = isotypic_counts(g, &sp.action_ev, &sp.sigma_ev, c)?;
        let (po, mo) = isotypic_counts(g, &sp.action_odd, &sp.sigma_odd, c)?;
        let lhs = (pe as i64 - me as i64) - (po as i64 - mo as i64);
        let rhs = if dd.d.is_multiple_of(2) {
            let h = dd.d / 2;
            let (p, m) = isotypic_counts(g, &dd.actions[h][h], &dd.sigma[h][h], c)?;
            p as i64 - m as i64
        } else {
            0
        };
        signature_reduction.push((item.name.clone(), lhs, rhs));
    }
    Ok(DualityVerdict { symmetric, odd_hyperbolic, even_hyperbolic_if_d_odd, signature_reduction })
}

/// Random datum: each H^{i,j} is Q[G]^k with k ≤ `rank_max`; σ_{i,j} is a
/// random invariant pairing for (i,j) < (d-i,d-j), the partner is forced by
/// the commutation rule, and σ_{d/2,d/2} is a random invariant symmetric form.
pub fn random_duality_datum(g: &FiniteGroup, d: usize, rank_max: usize, rng: &mut ChaCha8Rng) -> Result<DualityDatum> {
    let mut ranks = vec![vec![0usize; d + 1]; d + 1];
    for i in 0..=d {
        for j in 0..=d {
            if (i, j) <= (d - i, d - j) {
                let k = rng.gen_range(0..=rank_max);
                ranks[i][j] = k;
                ranks[d - i][d - j] = k;
            }
        }
    }
    let actions: Vec<Vec<Rep<Q>>> = ranks.iter().map(|row| row.iter().map(|&k| g.regular_rep(k)).collect()).collect();
    let mut sigma = vec![vec![Matrix::<Q>::zeros(0, 0); d + 1]; d + 1];
    for i in 0..=d {
        for j in 0..=d {
            let (pi, pj) = (d - i, d - j);
            if (i, j) > (pi, pj) {
                continue;
            }
            let n = actions[i][j].dim();
            let s = if (i, j) == (pi, pj) {
                if n == 0 {
                    Matrix::zeros(0, 0)
                } else {
                    random_invariant_form(g, ranks[i][j], rng)?
                }
            } else {
                let mut s = None;
                for _ in 0..50 {
                    let x = average_pairing(g, &actions[i][j], &actions[pi][pj], &random_matrix(rng, n, n, 3));
                    if n == 0 || !x.det().is_zero() {
                        s = Some(x);
                        break;
                    }
                }
                s.ok_or(Error::Degenerate)?
            };
            sigma[pi][pj] = s.transpose().scale(&duality_sign(d, i, j));
            sigma[i][j] = s;
        }
    }
    let dd = DualityDatum { group: g.clone(), d, actions, sigma };
    dd.validate()?;
    Ok(dd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn sign_rule() {
        assert_eq!(duality_sign(1, 0, 1), Q::one());
        assert_eq!(duality_sign(2, 0, 1), -Q::one());
        assert_eq!(duality_sign(2, 1, 1), Q::one());
    }

    #[test]
    fn d_zero_is_unchanged() {
        let g = FiniteGroup::catalog("trivial").unwrap();
        let s = Matrix::from_ints(2, 2, &[3, 1, 1, -2]);
        let dd = DualityDatum { group: g.clone(), d: 0, actions: vec![vec![g.regular_rep(2)]], sigma: vec![vec![s.clone()]] };
        let sp = symmetrize_duality(&dd).unwrap();
        assert_eq!(sp.sigma_ev, s);
        assert_eq!(sp.sigma_odd.rows(), 0);
    }

    #[test]
    fn middle_only_in_dimension_two() {
        let g = FiniteGroup::catalog("trivial").unwrap();
        let d = 2;
        let mut actions = vec![vec![g.regular_rep(0); 3]; 3];
        actions[1][1] = g.regular_rep(2);
        let mut sigma = vec![vec![Matrix::<Q>::zeros(0, 0); 3]; 3];
        sigma[1][1] = Matrix::from_ints(2, 2, &[1, 4, 4, 0]);
        let dd = DualityDatum { group: g, d, actions, sigma: sigma.clone() };
        let sp = symmetrize_duality(&dd).unwrap();
        assert_eq!(sp.sigma_ev, sigma[1][1]);
        assert!(duality_check(&dd).unwrap().holds());
    }

    #[test]
    fn commutation_violation_is_rejected() {
        let g = FiniteGroup::catalog("trivial").unwrap();
        let mut actions = vec![vec![g.regular_rep(0); 2]; 2];
        actions[0][0] = g.regular_rep(1);
        actions[1][1] = g.regular_rep(1);
        let mut sigma = vec![vec![Matrix::<Q>::zeros(0, 0); 2]; 2];
        sigma[0][0] = Matrix::from_ints(1, 1, &[2]);
        sigma[1][1] = Matrix::from_ints(1, 1, &[3]);
        let dd = DualityDatum { group: g, d: 1, actions, sigma };
        assert!(symmetrize_duality(&dd).is_err());
    }

    #[test]
    fn random_data_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in ["C2", "S3"] {
            let g = FiniteGroup::catalog(name).unwrap();
            for d in 0..=4 {
                let dd = random_duality_datum(&g, d, 1, &mut rng).unwrap();
                let v = duality_check(&dd).unwrap();
                assert!(v.holds(), "{name} d={d}: {v:?}");
            }
        }
    }
}
