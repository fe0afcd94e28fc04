//! Class representatives: the hermitian Pfaffian coordinates, the Arakelov
//! metric coordinates, their sign/metric decomposition, and the comparison
//! with the class built from lifted pairings on B ⊕ H ⊕ U splittings.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{average_pairing, random_group_ring, random_matrix, random_unimodular, stable_splitting, CohomologyPairing, GrMatrix, PerfectGComplex};
use crate::cyclo::Cyclo;
use crate::det_lines::{bhu_splitting, pf_on_complex, upsilon_order, xi, Complex};
use crate::equivariant::{abs_real, cohomology_gram, fixed_complex, fixed_gram, fixed_wedges, group_ring_form, i_power, isotypic_counts, Target};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::pfaffian_selfadjoint;
use crate::group::{left_mult_matrix, BasisItem, FiniteGroup, GroupRingElem, Rep};
use crate::matrix::Matrix;
use crate::rational::Rational;

type Q = Rational;

/// Sign and exact squared magnitude of a real number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedMagnitude {
    pub sign: i8,
    pub magnitude_squared: Cyclo,
}

impl SignedMagnitude {
    pub fn of(x: &Cyclo) -> Result<Self> {
        Ok(SignedMagnitude { sign: x.real_sign()?, magnitude_squared: x.mul_ref(x) })
    }

    pub fn mul(&self, o: &Self) -> Self {
        SignedMagnitude { sign: self.sign * o.sign, magnitude_squared: self.magnitude_squared.mul_ref(&o.magnitude_squared) }
    }
}

/// One coordinate of a class representative. For metric coordinates the
/// stored `magnitude_squared` is the `root`-th power of the squared coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub character: String,
    #[serde(with = "crate::io::exact")]
    pub finite: Cyclo,
    pub arch_sign: i8,
    #[serde(with = "crate::io::exact")]
    pub arch_mag_sq: Cyclo,
    #[serde(default = "one_root")]
    pub root: usize,
}

fn one_root() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRepresentative {
    pub entries: Vec<ClassEntry>,
}

impl ClassRepresentative {
    pub fn get(&self, name: &str) -> Option<&ClassEntry> {
        self.entries.iter().find(|e| e.character == name)
    }

    /// Coordinatewise product (same characters in the same order).
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.entries.len() != o.entries.len() {
            return Err(Error::dim("representatives over different character sets"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| {
                if a.character != b.character || a.root != b.root {
                    return Err(Error::dim("representatives over different character sets"));
                }
                Ok(ClassEntry {
                    character: a.character.clone(),
                    finite: a.finite.mul_ref(&b.finite),
                    arch_sign: a.arch_sign * b.arch_sign,
                    arch_mag_sq: a.arch_mag_sq.mul_ref(&b.arch_mag_sq),
                    root: a.root,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ClassRepresentative { entries })
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(|e| e.finite.is_one() && e.arch_sign == 1 && e.arch_mag_sq.is_one())
    }
}

/// Values in {±1} per basis character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignClass {
    pub values: Vec<(String, i8)>,
}

/// Representative of the class built from lifted pairings: finite coordinate
/// and the Pfaffian coordinate per basis character.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HClRepresentative {
    pub entries: Vec<(String, Cyclo, Cyclo)>,
}

/// Π_i Det(λ^i)(χ)^{(-1)^i}.
pub fn finite_part(p: &PerfectGComplex, rep: &Rep<Cyclo>) -> Result<Cyclo> {
    let mut acc = Cyclo::one();
    if p.transitions.is_none() {
        return Ok(acc);
    }
    for i in p.degrees() {
        let d = p.transition(i).det_rep(rep);
        acc = if i.rem_euclid(2) == 0 { acc.mul_ref(&d) } else { acc.div_ref(&d)? };
    }
    Ok(acc)
}

/// Cohomology of the fixed complex with Gram matrices of the induced form on
/// H^ev and H^odd (υ order).
struct FixedCohomology {
    complex: Complex<Cyclo>,
    h: Vec<Matrix<Cyclo>>,
    ev: Matrix<Cyclo>,
    odd: Matrix<Cyclo>,
}

fn fixed_cohomology(p: &PerfectGComplex, pairing: &CohomologyPairing, t: &Target) -> Result<FixedCohomology> {
    let c = fixed_complex(p, t)?;
    let split = bhu_splitting(&c, None)?;
    let (ev, odd) = upsilon_order(p.lo, p.hi());
    let mut grams = vec![];
    for list in [ev, odd] {
        let dims: Vec<usize> = list.iter().map(|&d| split.h(d).cols()).collect();
        let total: usize = dims.iter().sum();
        let mut m = Matrix::<Cyclo>::zeros(total, total);
        let mut oa = 0;
        for (a, &ta) in list.iter().enumerate() {
            let mut ob = 0;
            for (b, &tb) in list.iter().enumerate() {
                let blk = cohomology_gram(p, pairing, t, ta, tb, split.h(ta), split.h(tb))?;
                m.set_block(oa, ob, &blk);
                ob += dims[b];
            }
            oa += dims[a];
        }
        grams.push(m);
    }
    let odd = grams.pop().expect("two grams");
    let ev = grams.pop().expect("two grams");
    Ok(FixedCohomology { complex: c, h: split.h.clone(), ev, odd })
}

/// Pf_{(σ⊗κ)^G}(ξ(⊗_i (∧_{jn} b_{jn}^i)^{(-1)^i})) for one basis character.
pub fn pfaffian_coordinate(p: &PerfectGComplex, pairing: &CohomologyPairing, item: &BasisItem) -> Result<Cyclo> {
    let t = Target::symplectic(item);
    let fc = fixed_cohomology(p, pairing, &t)?;
    pf_on_complex(&fc.complex, &fc.h, &fc.ev, &fc.odd, &fixed_wedges(p, &t))
}

/// χ_H^s(P, σ): finite coordinate from the transitions and the Pfaffian coordinate.
pub fn chi_hermitian(p: &PerfectGComplex, pairing: &CohomologyPairing) -> Result<ClassRepresentative> {
    pairing.validate(p)?;
    let mut entries = vec![];
    for item in p.group.symplectic_basis()? {
        let v = pfaffian_coordinate(p, pairing, &item)?;
        let sm = SignedMagnitude::of(&v)?;
        if sm.sign == 0 {
            return Err(Error::Degenerate);
        }
        entries.push(ClassEntry {
            character: item.name.clone(),
            finite: finite_part(p, &item.rep)?,
            arch_sign: sm.sign,
            arch_mag_sq: sm.magnitude_squared,
            root: 1,
        });
    }
    Ok(ClassRepresentative { entries })
}

/// Squared metric of ξ(⊗_i (∧ c^i)^{(-1)^i}) for the ideal C[G]e_χ: `raw` in
/// the ν-orthogonal basis, `normalised` after rescaling it to be orthonormal.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricValue {
    pub raw: Cyclo,
    pub normalised: Cyclo,
}

pub fn metric_coordinate(p: &PerfectGComplex, pairing: &CohomologyPairing, v: &Target) -> Result<MetricValue> {
    let fc = fixed_cohomology(p, pairing, v)?;
    let split = bhu_splitting(&fc.complex, Some(&fc.h))?;
    let s = xi(&fc.complex, &fixed_wedges(p, v), &split)?.scalar;
    let de = abs_real(&fc.ev.det())?;
    let dodd = abs_real(&fc.odd.det())?;
    if de.is_zero() || dodd.is_zero() {
        return Err(Error::Degenerate);
    }
    let raw = s.mul_ref(&s.conj()).mul_ref(&de).div_ref(&dodd)?;
    let normalised = raw.div_ref(&v.norm_product().pow(p.euler_characteristic())?)?;
    Ok(MetricValue { raw, normalised })
}

/// χ_A(P, h_σ) per irreducible character; `root` = χ(1).
pub fn chi_arakelov(p: &PerfectGComplex, pairing: &CohomologyPairing) -> Result<ClassRepresentative> {
    pairing.validate(p)?;
    let g = &p.group;
    let mut entries = vec![];
    for (idx, irr) in g.irreps().iter().enumerate() {
        let v = Target::ideal(g, idx)?;
        let m = metric_coordinate(p, pairing, &v)?;
        entries.push(ClassEntry {
            character: irr.name.clone(),
            finite: finite_part(p, &irr.rep)?,
            arch_sign: 1,
            arch_mag_sq: m.normalised,
            root: irr.degree(),
        });
    }
    Ok(ClassRepresentative { entries })
}

/// Split a representative into its metric part and its sign class.
pub fn decompose_sign(h: &ClassRepresentative) -> (ClassRepresentative, SignClass) {
    let mut metric = h.clone();
    let mut values = vec![];
    for e in &mut metric.entries {
        values.push((e.character.clone(), e.arch_sign));
        e.arch_sign = 1;
    }
    (metric, SignClass { values })
}

pub fn recombine(metric: &ClassRepresentative, s: &SignClass) -> ClassRepresentative {
    let mut out = metric.clone();
    for (e, (_, v)) in out.entries.iter_mut().zip(&s.values) {
        e.arch_sign *= v;
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sign and magnitude comparison for one basis character.
#[derive(Clone, Debug, PartialEq)]
pub struct SignVerdict {
    pub character: String,
    pub pf_sign: i8,
    pub n_minus_ev: usize,
    pub n_minus_odd: usize,
    pub predicted: i8,
    pub magnitude_matches: bool,
}

impl SignVerdict {
    pub fn holds(&self) -> bool {
        self.pf_sign == self.predicted && self.magnitude_matches
    }
}

/// χ_H^s · (χ_A^s)^{-1} is the sign class i^{n^-(σ^ev) - n^-(σ^odd)}:
/// signs are compared directly and magnitudes via |Pf|^{2L} = Π_r M_r^{a_r L/χ_r(1)}.
pub fn signature_sign_check(p: &PerfectGComplex, pairing: &CohomologyPairing) -> Result<Vec<SignVerdict>> {
    pairing.validate(p)?;
    let g = &p.group;
    let (ev_rep, odd_rep) = pairing.parity_actions(p)?;
    let mut metrics: Vec<Option<Cyclo>> = vec![None; g.irreps().len()];
    let mut out = vec![];
    for item in g.symplectic_basis()? {
        let pf = pfaffian_coordinate(p, pairing, &item)?;
        let (_, ne) = isotypic_counts(g, &ev_rep, &pairing.sigma_ev, &item.constituents)?;
        let (_, no) = isotypic_counts(g, &odd_rep, &pairing.sigma_odd, &item.constituents)?;
        let predicted = i_power(ne as i64 - no as i64)?;
        let l = item.constituents.iter().map(|&c| g.irreps()[c].degree()).fold(1, |a, b| a / gcd(a, b) * b);
        let mut rhs = Cyclo::one();
        for &c in &item.constituents {
            if metrics[c].is_none() {
                metrics[c] = Some(metric_coordinate(p, pairing, &Target::ideal(g, c)?)?.normalised);
            }
            let m = metrics[c].as_ref().expect("filled");
            rhs = rhs.mul_ref(&m.pow((l / g.irreps()[c].degree()) as i64)?);
        }
        let lhs = pf.mul_ref(&pf).pow(l as i64)?;
        out.push(SignVerdict {
            character: item.name.clone(),
            pf_sign: pf.real_sign()?,
            n_minus_ev: ne,
            n_minus_odd: no,
            predicted,
            magnitude_matches: lhs == rhs,
        });
    }
    Ok(out)
}

fn subspace_character(rep: &Rep<Q>, basis: &Matrix<Q>) -> Result<Vec<Q>> {
    rep.mats
        .iter()
        .map(|m| {
            if basis.cols() == 0 {
                return Ok(Q::zero());
            }
            basis.solve(&m.mul(basis)).map(|a| a.trace()).ok_or_else(|| Error::Invariant("subspace is not stable".into()))
        })
        .collect()
}

pub fn empty_pairing(p: &PerfectGComplex) -> CohomologyPairing {
    CohomologyPairing::from_blocks(p.lo, p.degrees().map(|t| Matrix::zeros(p.dim(t), 0)).collect(), |_, _| Matrix::zeros(0, 0))
}

/// Add identity cells Q[G] → Q[G] until U^j ≅ U^{-j-1} for every j ≥ 0.
pub fn balance(p: &PerfectGComplex, pairing: &CohomologyPairing) -> Result<(PerfectGComplex, CohomologyPairing)> {
    let g = &p.group;
    let n = g.order() as i64;
    let mut p = p.clone();
    let mut s = pairing.clone();
    let m = p.lo.abs().max(p.hi().abs());
    for j in 0..=m {
        let char_u = |p: &PerfectGComplex, t: i64| -> Result<Vec<Q>> {
            let rep = p.action(t);
            let z = subspace_character(&rep, &p.boundary_q(t).kernel())?;
            let full = rep.character();
            Ok(full.iter().zip(&z).map(|(a, b)| a.as_rational().expect("rational") - b.clone()).collect())
        };
        let a = char_u(&p, j)?;
        let b = char_u(&p, -j - 1)?;
        let diff: Vec<Q> = a.iter().zip(&b).map(|(x, y)| x.clone() - y).collect();
        if diff[1..].iter().any(|x| !x.is_zero()) || !(diff[0].clone() / &Q::from_int(n)).is_integer() {
            return Err(Error::pre(format!("U^{j} and U^{} differ by a non-free module", -j - 1)));
        }
        let c = (diff[0].clone() / &Q::from_int(n)).to_i64().expect("integer");
        let start = if c < 0 { j } else { -j - 1 };
        for _ in 0..c.abs() {
            let cell = PerfectGComplex::cell(g, start, GroupRingElem::one(g));
            let e = empty_pairing(&cell);
            s = s.direct_sum(&p, &e, &cell);
            p = p.direct_sum(&cell);
        }
    }
    Ok((p, s))
}

/// The lifted forms p^i (i ≥ 0): on P^0, and on P^i ⊕ P^{-i} for i > 0, as
/// Q-grams in the coordinates of the declared bases.
#[derive(Clone, Debug)]
pub struct LiftedForms {
    pub complex: PerfectGComplex,
    pub pairing: CohomologyPairing,
    /// (i, free rank q_i, gram).
    pub forms: Vec<(i64, usize, Matrix<Q>)>,
}

/// Build pairings on B ⊕ H ⊕ U lifting σ: p̄_H = σ, p̄_U^j for j ≥ 0 chosen
/// at random (invariant, nondegenerate), p̄_U^{-j-1}(u', ∂u) = p̄_U^j(u, ∂u')
/// and p̄_B^i(b, u) = p̄_U^{-i}(u, b).
pub fn lift_pairings(p: &PerfectGComplex, pairing: &CohomologyPairing, seed: u64) -> Result<LiftedForms> {
    pairing.validate(p)?;
    if !pairing.pairs_opposite_degrees() {
        return Err(Error::pre("σ must pair H^t with H^{-t}"));
    }
    let g = &p.group;
    let lo0 = p.lo.min(-p.hi());
    let hi0 = p.hi().max(-p.lo);
    // Symmetric degree range so that every P^{-i} exists.
    let pad = PerfectGComplex { group: g.clone(), lo: lo0, ranks: vec![0; (hi0 - lo0 + 1) as usize], boundaries: (lo0..hi0).map(|_| GrMatrix::zeros(g, 0, 0)).collect(), transitions: None };
    let sym = pairing.direct_sum(p, &empty_pairing(&pad), &pad);
    let (p, pairing) = balance(&p.direct_sum(&pad), &sym)?;
    let st = stable_splitting(&p, &pairing)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = p.lo.abs().max(p.hi().abs());
    let coords: Vec<Matrix<Q>> = p.degrees().map(|t| st.coords(t)).collect::<Result<_>>()?;
    let c = |t: i64| &coords[(t - p.lo) as usize];
    let dims = |t: i64| (st.b(t).cols(), st.h(t).cols(), st.u(t).cols());
    let restrict = |t: i64, off: usize, basis: &Matrix<Q>| -> Rep<Q> {
        let rows = basis.cols();
        Rep { mats: p.action(t).mats.iter().map(|a| c(t).block(off, 0, rows, p.dim(t)).mul(&a.mul(basis))).collect() }
    };
    // p̄_U^t for every t, as a matrix U^t × B^{-t}.
    let mut pu: std::collections::BTreeMap<i64, Matrix<Q>> = Default::default();
    for j in 0..=m {
        let (_, _, uj) = dims(j);
        let (bmj, _, _) = dims(-j);
        if uj != bmj {
            return Err(Error::Invariant(format!("U^{j} and B^{} have different dimensions after balancing", -j)));
        }
        if uj == 0 {
            pu.insert(j, Matrix::zeros(0, 0));
            pu.insert(-j - 1, Matrix::zeros(0, 0));
            continue;
        }
        let au = restrict(j, dims(j).0 + dims(j).1, st.u(j));
        let ab = restrict(-j, 0, st.b(-j));
        let mut found = None;
        for _ in 0..50 {
            let x = average_pairing(g, &au, &ab, &random_matrix(&mut rng, uj, bmj, 3));
            if !x.det().is_zero() {
                found = Some(x);
                break;
            }
        }
        let x = found.ok_or(Error::Degenerate)?;
        pu.insert(-j - 1, x.transpose());
        pu.insert(j, x);
    }
    let mut forms = vec![];
    for i in 0..=m {
        let (bi, hi_, ui) = dims(i);
        let (bm, hm, um) = dims(-i);
        let mut mm = Matrix::<Q>::zeros(bi + hi_ + ui, bm + hm + um);
        mm.set_block(0, bm + hm, &pu[&-i].transpose());
        mm.set_block(bi, bm, &pairing.block(i, -i));
        mm.set_block(bi + hi_, 0, &pu[&i]);
        let pm = c(i).transpose().mul(&mm).mul(c(-i));
        let gram = if i == 0 {
            pm
        } else {
            let (di, dm) = (p.dim(i), p.dim(-i));
            let mut full = Matrix::zeros(di + dm, di + dm);
            full.set_block(0, di, &pm);
            full.set_block(di, 0, &pm.transpose());
            full
        };
        let q = if i == 0 { p.rank(0) } else { p.rank(i) + p.rank(-i) };
        if !gram.is_symmetric() {
            return Err(Error::Invariant(format!("lifted form p^{i} is not symmetric")));
        }
        if !g.regular_rep(q).preserves(&gram) {
            return Err(Error::Invariant(format!("lifted form p^{i} is not invariant")));
        }
        forms.push((i, q, gram));
    }
    Ok(LiftedForms { complex: p, pairing, forms })
}

/// The class from lifted pairings: finite part times Π_{i≥0} pf(T_m(p̃^i))^{(-1)^i}.
pub fn lifted_pairing_class(p: &PerfectGComplex, pairing: &CohomologyPairing, seed: u64) -> Result<HClRepresentative> {
    let lf = lift_pairings(p, pairing, seed)?;
    let g = &p.group;
    let mut entries = vec![];
    for item in g.symplectic_basis()? {
        let mut acc = Cyclo::one();
        for (i, q, gram) in &lf.forms {
            if *q == 0 {
                continue;
            }
            let t = group_ring_form(g, gram, *q)?;
            let k = Matrix::block_diag(&vec![item.kappa.clone(); *q]);
            let v = pfaffian_selfadjoint(&t.rep_image(&item.rep), &k)?;
            acc = if i.rem_euclid(2) == 0 { acc.mul_ref(&v) } else { acc.div_ref(&v)? };
        }
        entries.push((item.name.clone(), finite_part(p, &item.rep)?, acc));
    }
    Ok(HClRepresentative { entries })
}

/// Outcome of the two-route comparison for one basis character.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteVerdict {
    pub character: String,
    pub hermitian: Cyclo,
    pub lifted_scaled: Cyclo,
    pub lifted_unscaled: Cyclo,
    pub scale_power: i64,
    /// χ_H^s coordinate = lifted class for |G|σ.
    pub routes_agree: bool,
    /// χ_H^s coordinate = |G|^{χθ(1)/2} × lifted class for σ.
    pub scale_factor_holds: bool,
    /// Σ (-1)^i n^-(p^i) = Σ (-1)^i n^-(σ^i).
    pub signatures_agree: bool,
}

impl RouteVerdict {
    pub fn holds(&self) -> bool {
        self.routes_agree && self.scale_factor_holds && self.signatures_agree
    }
}

/// Metric telescope: Π_{i≥0} |det Gram(p^i ⊗ ν)|^{(-1)^i} against the squared
/// metric of ξ(⊗ (∧c^i)^{(-1)^i}), both in the raw ν-orthogonal basis.
pub fn metric_telescope(lf: &LiftedForms, idx: usize) -> Result<(Cyclo, Cyclo)> {
    let g = &lf.complex.group;
    let v = Target::ideal(g, idx)?;
    let mut lhs = Cyclo::one();
    for (i, q, gram) in &lf.forms {
        if *q == 0 {
            continue;
        }
        let d = abs_real(&fixed_gram(g, gram, *q, *q, &v).det())?;
        lhs = if i.rem_euclid(2) == 0 { lhs.mul_ref(&d) } else { lhs.div_ref(&d)? };
    }
    let rhs = metric_coordinate(&lf.complex, &lf.pairing, &v)?.raw;
    Ok((lhs, rhs))
}

pub fn two_route_check(p: &PerfectGComplex, pairing: &CohomologyPairing, seed: u64) -> Result<(Vec<RouteVerdict>, Vec<bool>)> {
    let g = &p.group;
    let order = Q::from_int(g.order() as i64);
    let herm = chi_hermitian(p, pairing)?;
    let scaled = lifted_pairing_class(p, &pairing.scale(&order), seed)?;
    let lf = lift_pairings(p, pairing, seed)?;
    let unscaled = lifted_pairing_class(p, pairing, seed)?;
    let chi = p.euler_characteristic();
    // σ^i on H^i ⊕ H^{-i} for the signature comparison.
    let lp = &lf.pairing;
    let lc = &lf.complex;
    let mut out = vec![];
    for (k, item) in g.symplectic_basis()?.iter().enumerate() {
        let value = pfaffian_coordinate(p, pairing, item)?;
        let fin = finite_part(p, &item.rep)?;
        let coordinate = value.mul_ref(&fin);
        let (_, f1, v1) = &scaled.entries[k];
        let (_, f2, v2) = &unscaled.entries[k];
        let power = chi * item.degree() as i64;
        if power % 2 != 0 {
            return Err(Error::Invariant("odd exponent of |G|".into()));
        }
        let factor = Cyclo::rational(order.clone()).pow(power / 2)?;
        let mut lhs_n = 0i64;
        let mut rhs_n = 0i64;
        for (i, q, gram) in &lf.forms {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            if *q > 0 {
                let (_, nm) = isotypic_counts(g, &g.regular_rep(*q), gram, &item.constituents)?;
                lhs_n += sign * nm as i64;
            }
            let (s, rep) = sigma_i(lc, lp, *i)?;
            if s.rows() > 0 {
                let (_, nm) = isotypic_counts(g, &rep, &s, &item.constituents)?;
                rhs_n += sign * nm as i64;
            }
        }
        out.push(RouteVerdict {
            character: item.name.clone(),
            hermitian: coordinate.clone(),
            lifted_scaled: v1.mul_ref(f1),
            lifted_unscaled: v2.mul_ref(f2),
            scale_power: power / 2,
            routes_agree: *v1 == value && *f1 == fin,
            scale_factor_holds: value == factor.mul_ref(v2),
            signatures_agree: lhs_n == rhs_n,
        });
        let _ = herm.entries[k].arch_sign;
    }
    let metrics = (0..g.irreps().len())
        .map(|idx| metric_telescope(&lf, idx).map(|(a, b)| a == b))
        .collect::<Result<Vec<bool>>>()?;
    Ok((out, metrics))
}

/// σ^0 on H^0, or the symmetric form σ^i ⊕ σ^{-i} on H^i ⊕ H^{-i}, with the action.
fn sigma_i(p: &PerfectGComplex, s: &CohomologyPairing, i: i64) -> Result<(Matrix<Q>, Rep<Q>)> {
    if i == 0 {
        return Ok((s.block(0, 0), s.class_action(p, 0)?));
    }
    let (a, b) = (s.h_dim(i), s.h_dim(-i));
    let mut m = Matrix::zeros(a + b, a + b);
    m.set_block(0, a, &s.block(i, -i));
    m.set_block(a, 0, &s.block(-i, i));
    let ra = s.class_action(p, i)?;
    let rb = s.class_action(p, -i)?;
    let mats = ra.mats.iter().zip(&rb.mats).map(|(x, y)| Matrix::block_diag(&[x.clone(), y.clone()])).collect();
    Ok((m, Rep { mats }))
}

/// ±h as a unit of Q[G].
pub fn unit(g: &FiniteGroup, h: usize, negative: bool) -> GroupRingElem<Q> {
    let e = GroupRingElem::basis(g, h);
    if negative {
        e.scale(&-Q::one())
    } else {
        e
    }
}

/// Inverse in Q[G], if it exists.
pub fn invert_element(g: &FiniteGroup, x: &GroupRingElem<Q>) -> Option<GroupRingElem<Q>> {
    let m = left_mult_matrix(g, x);
    let e = Matrix::from_columns(g.order(), &[GroupRingElem::<Q>::one(g).coeffs]);
    m.solve(&e).map(|y| GroupRingElem { coeffs: y.column(0) })
}

/// Random invertible Q[G]-matrix that is not a product of units: a random
/// unimodular matrix times diag(x, 1, …, 1) with x invertible.
pub fn random_invertible(g: &FiniteGroup, rng: &mut ChaCha8Rng, r: usize) -> (GrMatrix, GrMatrix) {
    let (u, ui) = random_unimodular(g, rng, r);
    if r == 0 {
        return (u, ui);
    }
    loop {
        let x = random_group_ring(g, rng, 2).add(&GroupRingElem::one(g));
        if let Some(xi) = invert_element(g, &x) {
            let mut d = GrMatrix::identity(g, r);
            let mut di = GrMatrix::identity(g, r);
            d.entries[0][0] = x;
            di.entries[0][0] = xi;
            return (d.mul(&u, g), ui.mul(&di, g));
        }
    }
}

/// Outcome of changing the basis of P^t by L for one basis character.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceVerdict {
    pub character: String,
    pub degree: i64,
    pub det: Cyclo,
    /// Pfaffian coordinate after / before = Det(L)(θ)^{(-1)^t}.
    pub pfaffian_scales: bool,
    /// Finite coordinate after / before = Det(L)(θ)^{-(-1)^t}.
    pub finite_scales_inversely: bool,
}

impl CovarianceVerdict {
    pub fn holds(&self) -> bool {
        self.pfaffian_scales && self.finite_scales_inversely
    }
}

pub fn basis_change_check(p: &PerfectGComplex, s: &CohomologyPairing, t: i64, l: &GrMatrix, l_inv: &GrMatrix) -> Result<Vec<CovarianceVerdict>> {
    let g = &p.group;
    let base = p.clone().with_transitions(p.degrees().map(|u| p.transition(u)).collect())?;
    let q = base.change_basis(t, l, l_inv)?;
    let sq = s.change_basis(p, t, l_inv);
    let before = chi_hermitian(&base, s)?;
    let after = chi_hermitian(&q, &sq)?;
    let mut out = vec![];
    for (k, item) in g.symplectic_basis()?.iter().enumerate() {
        let det = l.det_rep(&item.rep);
        let (up, down) = if t.rem_euclid(2) == 0 { (det.clone(), det.inv().ok_or(Error::DivisionByZero)?) } else { (det.inv().ok_or(Error::DivisionByZero)?, det.clone()) };
        let (b, a) = (&before.entries[k], &after.entries[k]);
        let vb = pfaffian_coordinate(&base, s, item)?;
        let va = pfaffian_coordinate(&q, &sq, item)?;
        out.push(CovarianceVerdict {
            character: item.name.clone(),
            degree: t,
            pfaffian_scales: va == vb.mul_ref(&up),
            finite_scales_inversely: a.finite == b.finite.mul_ref(&down),
            det,
        });
    }
    Ok(out)
}

/// χ_H^s(P ⊕ C, σ ⊕ 0) = χ_H^s(P, σ) for an acyclic cell C: Q[G] → Q[G] with ∂(1) = ±h.
pub fn acyclic_summand_check(p: &PerfectGComplex, s: &CohomologyPairing, t: i64, h: usize, negative: bool) -> Result<bool> {
    let g = &p.group;
    let cell = PerfectGComplex::cell(g, t, unit(g, h, negative));
    let e = empty_pairing(&cell);
    let ps = p.direct_sum(&cell);
    let ss = s.direct_sum(p, &e, &cell);
    Ok(chi_hermitian(&ps, &ss)? == chi_hermitian(p, s)? && chi_arakelov(&ps, &ss)? == chi_arakelov(p, s)?)
}

/// χ_H^s(P₁ ⊕ P₂, σ₁ ⊕ σ₂) = χ_H^s(P₁, σ₁)·χ_H^s(P₂, σ₂).
pub fn direct_sum_check(p: &PerfectGComplex, s: &CohomologyPairing, q: &PerfectGComplex, r: &CohomologyPairing) -> Result<bool> {
    let sum = chi_hermitian(&p.direct_sum(q), &s.direct_sum(p, r, q))?;
    Ok(sum == chi_hermitian(p, s)?.mul(&chi_hermitian(q, r)?)?)
}

/// χ_H^s(C, 0) is trivial for a complex C that is acyclic over Z[G] (unimodular
/// boundaries); a boundary invertible only over Q[G] moves the Pfaffian
/// coordinate by its determinant, which the finite places absorb.
pub fn acyclic_zero_form_check(p: &PerfectGComplex) -> Result<bool> {
    let s = empty_pairing(p);
    Ok(chi_hermitian(p, &s)?.is_trivial() && chi_arakelov(p, &s)?.is_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{random_complex, RandomComplexSpec};

    fn trivial_pairing(p: &PerfectGComplex, s0: i64) -> CohomologyPairing {
        let reps = vec![Matrix::<Q>::identity(p.dim(0))];
        let k = p.dim(0);
        CohomologyPairing::from_blocks(0, reps, |_, _| Matrix::<Q>::identity(k).scale(&Q::from_int(s0)))
    }

    #[test]
    fn degree_zero_on_trivial_group() {
        let g = FiniteGroup::catalog("trivial").unwrap();
        let p = PerfectGComplex::concentrated(&g, 0, 1);
        let s = trivial_pairing(&p, 1);
        let h = chi_hermitian(&p, &s).unwrap();
        assert_eq!(h.entries[0].arch_sign, 1);
        assert!(h.entries[0].arch_mag_sq.is_one());
        let a = chi_arakelov(&p, &trivial_pairing(&p, 4)).unwrap();
        assert_eq!(a.entries[0].arch_mag_sq, Cyclo::from_int(4));
    }

    #[test]
    fn acyclic_with_zero_form_is_trivial() {
        let g = FiniteGroup::catalog("Q8").unwrap();
        let p = PerfectGComplex::cell(&g, 0, unit(&g, 3, true));
        let s = empty_pairing(&p);
        assert!(chi_hermitian(&p, &s).unwrap().is_trivial());
        assert!(chi_arakelov(&p, &s).unwrap().is_trivial());
    }

    #[test]
    fn sign_decomposition_round_trip() {
        let g = FiniteGroup::catalog("C2").unwrap();
        let p = PerfectGComplex::concentrated(&g, 0, 1);
        let s = CohomologyPairing::from_blocks(0, vec![Matrix::identity(2)], |_, _| Matrix::from_ints(2, 2, &[-1, 0, 0, -1]));
        let h = chi_hermitian(&p, &s).unwrap();
        let (m, sc) = decompose_sign(&h);
        assert!(m.entries.iter().all(|e| e.arch_sign == 1));
        assert_eq!(recombine(&m, &sc), h);
    }

    #[test]
    fn covariance_and_summands() {
        let g = FiniteGroup::catalog("C3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (p, s) = random_complex(&g, &mut rng, RandomComplexSpec::default()).unwrap();
        for t in p.degrees() {
            if p.rank(t) == 0 {
                continue;
            }
            let (l, li) = random_invertible(&g, &mut rng, p.rank(t));
            for v in basis_change_check(&p, &s, t, &l, &li).unwrap() {
                assert!(v.holds(), "{v:?}");
            }
        }
        assert!(acyclic_summand_check(&p, &s, -1, 2, true).unwrap());
        let (q, r) = random_complex(&g, &mut rng, RandomComplexSpec::default()).unwrap();
        assert!(direct_sum_check(&p, &s, &q, &r).unwrap());
        assert!(acyclic_zero_form_check(&PerfectGComplex::cell(&g, 1, unit(&g, 1, true))).unwrap());
        let (l, _) = random_unimodular(&g, &mut rng, 2);
        let c = PerfectGComplex::new(g.clone(), -1, vec![2, 2], vec![l]).unwrap();
        assert!(acyclic_zero_form_check(&c).unwrap());
    }

    #[test]
    fn two_routes_on_small_random_complexes() {
        let g = FiniteGroup::catalog("C2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let (p, s) = random_complex(&g, &mut rng, RandomComplexSpec::default()).unwrap();
            let (v, m) = two_route_check(&p, &s, 1).unwrap();
            for x in &v {
                assert!(x.holds(), "{x:?}");
            }
            assert!(m.iter().all(|&b| b));
            for x in signature_sign_check(&p, &s).unwrap() {
                assert!(x.holds(), "{x:?}");
            }
        }
    }
}
