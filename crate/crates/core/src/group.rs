//! Finite groups from a fixed catalog, their group algebras, representations
//! and the symplectic character basis.
//!
//! Element orderings are frozen:
//! * `C<n>`: g^k for k = 0..n.
//! * `D<n>` (order 2n, n >= 3): r^k for k = 0..n, then s·r^k, with s r s = r^{-1}.
//! * `Q8`: 1, -1, i, -i, j, -j, k, -k.
//! * `S3`: permutations of {0,1,2} in lexicographic order of their image
//!   words (012, 021, 102, 120, 201, 210), composed right to left.
//!
//! Element 0 is always the identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms;
use crate::matrix::Matrix;
use crate::rational::Rational;

/// A representation given by one matrix per group element.
#[derive(Clone, Debug, PartialEq)]
pub struct Rep<F: Field> {
    pub mats: Vec<Matrix<F>>,
}

impl<F: Field> Rep<F> {
    pub fn dim(&self) -> usize {
        self.mats[0].rows()
    }

    /// Trace of each representing matrix.
    pub fn character(&self) -> Vec<Cyclo> {
        self.mats.iter().map(|m| m.trace().to_cyclo()).collect()
    }

    pub fn to_cyclo(&self) -> Rep<Cyclo> {
        Rep { mats: self.mats.iter().map(|m| m.map(|x| x.to_cyclo())).collect() }
    }

    /// Σ a_g ρ(g).
    pub fn apply<E: Field>(&self, a: &GroupRingElem<E>) -> Matrix<Cyclo> {
        let d = self.dim();
        let mut out = Matrix::<Cyclo>::zeros(d, d);
        for (g, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_cyclo();
            out = out.add(&self.mats[g].map(|x| x.to_cyclo()).scale(&c));
        }
        out
    }

    /// Direct sum of two representations.
    pub fn direct_sum(&self, other: &Rep<F>) -> Rep<F> {
        Rep { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()])).collect() }
    }

    /// `true` when `ρ(g)ᵀ B ρ(g) = B` for every element.
    pub fn preserves(&self, b: &Matrix<F>) -> bool {
        self.mats.iter().all(|m| b.congruence(m) == *b)
    }
}

/// An irreducible representation from the catalog.
#[derive(Clone, Debug)]
pub struct Irrep {
    pub name: String,
    pub rep: Rep<Cyclo>,
    pub character: Vec<Cyclo>,
    /// Index of the irreducible with the complex-conjugate character.
    pub conj_index: usize,
    pub fs_indicator: i32,
}

impl Irrep {
    pub fn degree(&self) -> usize {
        self.rep.dim()
    }
}

/// How a symplectic basis item is realised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ItemKind {
    /// Irreducible with Frobenius–Schur indicator -1.
    Symplectic,
    /// Two copies of an orthogonal irreducible (indicator +1).
    DoubledOrthogonal,
    /// An irreducible of indicator 0 together with its dual.
    ConjugatePair,
}

/// One character θ_m of the symplectic basis with a realisation (W, κ) and
/// a hyperbolic basis of W.
#[derive(Clone, Debug)]
pub struct BasisItem {
    pub name: String,
    pub kind: ItemKind,
    /// Irreducible constituents with multiplicity.
    pub constituents: Vec<usize>,
    pub rep: Rep<Cyclo>,
    /// Gram matrix of the invariant alternating form κ in the representation basis.
    pub kappa: Matrix<Cyclo>,
    /// Columns u_1, u_1', u_2, u_2', … with κ(u_i, u_j') = δ_ij.
    pub hyperbolic: Matrix<Cyclo>,
    pub character: Vec<Cyclo>,
}

impl BasisItem {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Value of θ_m at the identity.
    pub fn degree(&self) -> usize {
        self.dim()
    }
}

/// A finite group with a verified multiplication table and catalog irreducibles.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    labels: Vec<String>,
    exponent: u32,
    irreps: Vec<Irrep>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

/// Wire format of a group.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GroupJson {
    pub name: String,
    pub order: usize,
    pub mult_table: Vec<Vec<usize>>,
}

fn z(n: u32, k: i64) -> Cyclo {
    Cyclo::zeta_pow(n, k).expect("catalog conductor within ceiling")
}

fn int(k: i64) -> Cyclo {
    Cyclo::from_int(k)
}

fn mat(rows: Vec<Vec<Cyclo>>) -> Matrix<Cyclo> {
    Matrix::from_rows(rows).expect("rectangular")
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FiniteGroup {
    /// Look up a catalog group: `C<n>` (n >= 1), `D<n>` (n >= 3), `Q8`, `S3`
    /// or `trivial`.
    pub fn catalog(name: &str) -> Result<FiniteGroup> {
        let t = name.trim();
        let upper = t.to_ascii_uppercase();
        if upper == "TRIVIAL" || upper == "1" {
            return Self::cyclic(1);
        }
        if upper == "Q8" {
            return Self::quaternion();
        }
        if upper == "S3" {
            return Self::symmetric3();
        }
        let parse = |s: &str| s.parse::<u32>().map_err(|_| Error::parse(format!("unknown group {t:?}")));
        if let Some(rest) = upper.strip_prefix('C') {
            return Self::cyclic(parse(rest)?);
        }
        if let Some(rest) = upper.strip_prefix('D') {
            return Self::dihedral(parse(rest)?);
        }
        Err(Error::parse(format!("unknown group {t:?}")))
    }

    pub fn cyclic(n: u32) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::parse("cyclic group of order 0"));
        }
        crate::cyclo::check_conductor(n)?;
        let nu = n as usize;
        let mult = (0..nu).map(|a| (0..nu).map(|b| (a + b) % nu).collect()).collect();
        let labels = (0..nu).map(|k| if k == 0 { "e".to_string() } else { format!("g^{k}") }).collect();
        let mats = |j: u32| -> Vec<Matrix<Cyclo>> {
            (0..n).map(|k| mat(vec![vec![z(n, (j as i64) * (k as i64))]])).collect()
        };
        let specs = (0..n).map(|j| (format!("chi{j}"), mats(j))).collect();
        let name = if n == 1 { "trivial".to_string() } else { format!("C{n}") };
        Self::build(name, mult, labels, specs)
    }

    pub fn dihedral(n: u32) -> Result<FiniteGroup> {
        if n < 3 {
            return Err(Error::parse("dihedral groups need n >= 3"));
        }
        crate::cyclo::check_conductor(n)?;
        let nu = n as usize;
        // index a*n + b  <->  s^a r^b
        let mult = (0..2 * nu)
            .map(|x| {
                (0..2 * nu)
                    .map(|y| {
                        let (a, b) = (x / nu, x % nu);
                        let (c, d) = (y / nu, y % nu);
                        let b2 = if c == 0 { b } else { (nu - b) % nu };
                        ((a + c) % 2) * nu + (b2 + d) % nu
                    })
                    .collect()
            })
            .collect();
        let labels = (0..2 * nu)
            .map(|x| match (x / nu, x % nu) {
                (0, 0) => "e".to_string(),
                (0, b) => format!("r^{b}"),
                (_, 0) => "s".to_string(),
                (_, b) => format!("s r^{b}"),
            })
            .collect();
        let one_dim = |r: i64, s: i64| -> Vec<Matrix<Cyclo>> {
            (0..2 * nu)
                .map(|x| {
                    let (a, b) = (x / nu, x % nu);
                    let v = if a == 1 { s } else { 1 } * if b % 2 == 1 { r } else { 1 };
                    mat(vec![vec![int(v)]])
                })
                .collect()
        };
        let mut specs = vec![("triv".to_string(), one_dim(1, 1)), ("sgn".to_string(), one_dim(1, -1))];
        if n.is_multiple_of(2) {
            specs.push(("eps_r".to_string(), one_dim(-1, 1)));
            specs.push(("eps_rs".to_string(), one_dim(-1, -1)));
        }
        for j in 1..=((n - 1) / 2) {
            let mats = (0..2 * nu)
                .map(|x| {
                    let (a, b) = (x / nu, (x % nu) as i64);
                    let rb = mat(vec![vec![z(n, j as i64 * b), int(0)], vec![int(0), z(n, -(j as i64) * b)]]);
                    if a == 0 {
                        rb
                    } else {
                        mat(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).mul(&rb)
                    }
                })
                .collect();
            specs.push((format!("rho{j}"), mats));
        }
        Self::build(format!("D{n}"), mult, labels, specs)
    }

    pub fn quaternion() -> Result<FiniteGroup> {
        crate::cyclo::check_conductor(4)?;
        let i = z(4, 1);
        let one = int(1);
        let zero = int(0);
        let mi = mat(vec![vec![i.clone(), zero.clone()], vec![zero.clone(), -i.clone()]]);
        let mj = mat(vec![vec![zero.clone(), -one.clone()], vec![one.clone(), zero.clone()]]);
        let mk = mi.mul(&mj);
        let id = Matrix::<Cyclo>::identity(2);
        let faithful = vec![id.clone(), id.neg(), mi.clone(), mi.neg(), mj.clone(), mj.neg(), mk.clone(), mk.neg()];
        let mult = table_from_faithful(&faithful)?;
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
        let one_dim = |a: i64, b: i64| -> Vec<Matrix<Cyclo>> {
            [1, 1, a, a, b, b, a * b, a * b].iter().map(|&v| mat(vec![vec![int(v)]])).collect()
        };
        let specs = vec![
            ("1".to_string(), one_dim(1, 1)),
            ("chi_i".to_string(), one_dim(1, -1)),
            ("chi_j".to_string(), one_dim(-1, 1)),
            ("chi_k".to_string(), one_dim(-1, -1)),
            ("theta".to_string(), faithful),
        ];
        Self::build("Q8".to_string(), mult, labels, specs)
    }

    pub fn symmetric3() -> Result<FiniteGroup> {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("permutation");
        let mult = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let (p, q) = (perms[a], perms[b]);
                        index([p[q[0]], p[q[1]], p[q[2]]])
                    })
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        let sign = |p: [usize; 3]| {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            if inv % 2 == 0 {
                1
            } else {
                -1
            }
        };
        // Action on the sum-zero plane with basis f1 = e0 - e1, f2 = e1 - e2.
        // A sum-zero vector (x0, x1, x2) equals x0 f1 - x2 f2.
        let standard = |p: [usize; 3]| {
            let image = |v: [i64; 3]| {
                let mut w = [0i64; 3];
                for k in 0..3 {
                    w[p[k]] += v[k];
                }
                (w[0], -w[2])
            };
            let (a1, b1) = image([1, -1, 0]);
            let (a2, b2) = image([0, 1, -1]);
            mat(vec![vec![int(a1), int(a2)], vec![int(b1), int(b2)]])
        };
        let specs = vec![
            ("triv".to_string(), perms.iter().map(|_| mat(vec![vec![int(1)]])).collect()),
            ("sgn".to_string(), perms.iter().map(|&p| mat(vec![vec![int(sign(p))]])).collect()),
            ("std".to_string(), perms.iter().map(|&p| standard(p)).collect()),
        ];
        Self::build("S3".to_string(), mult, labels, specs)
    }

    fn build(
        name: String,
        mult: Vec<Vec<usize>>,
        labels: Vec<String>,
        specs: Vec<(String, Vec<Matrix<Cyclo>>)>,
    ) -> Result<FiniteGroup> {
        let n = mult.len();
        let inv = verify_table(&mult)?;
        let mut exponent = 1u32;
        for g in 0..n {
            let mut k = 1u32;
            let mut x = g;
            while x != 0 {
                x = mult[x][g];
                k += 1;
            }
            exponent = exponent / gcd(exponent, k) * k;
        }
        let mut group = FiniteGroup { name, mult, inv, labels, exponent, irreps: Vec::new() };
        let mut irreps = Vec::new();
        for (nm, mats) in specs {
            let rep = Rep { mats };
            group.check_homomorphism(&rep).map_err(|e| Error::Invariant(format!("irrep {nm}: {e}")))?;
            let character = rep.character();
            irreps.push(Irrep { name: nm, rep, character, conj_index: 0, fs_indicator: 0 });
        }
        // Completeness and orthonormality of the catalog characters.
        let total: usize = irreps.iter().map(|r| r.degree() * r.degree()).sum();
        if total != n {
            return Err(Error::Invariant("irreducible degrees do not satisfy Σ d² = |G|".into()));
        }
        for a in 0..irreps.len() {
            for b in 0..irreps.len() {
                let ip = group.inner_product(&irreps[a].character, &irreps[b].character);
                let want = if a == b { Cyclo::one() } else { Cyclo::zero() };
                if ip != want {
                    return Err(Error::Invariant(format!("characters {a}, {b} not orthonormal")));
                }
            }
        }
        for a in 0..irreps.len() {
            let conj: Vec<Cyclo> = irreps[a].character.iter().map(|c| c.conj()).collect();
            irreps[a].conj_index = irreps.iter().position(|r| r.character == conj).expect("conjugate irreducible");
            irreps[a].fs_indicator = group.frobenius_schur(&irreps[a].character)?;
        }
        group.irreps = irreps;
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    /// Conjugacy classes as sorted index lists, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|x| self.mul(self.mul(x, a), self.inv(x))).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class);
        }
        out
    }

    /// Elements commuting with everything.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order()).filter(|&a| (0..self.order()).all(|x| self.mul(a, x) == self.mul(x, a))).collect()
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { name: self.name.clone(), order: self.order(), mult_table: self.mult.clone() }
    }

    /// Rebuild a catalog group from its wire format, checking the table.
    pub fn from_json(j: &GroupJson) -> Result<FiniteGroup> {
        let g = FiniteGroup::catalog(&j.name)?;
        if g.order() != j.order || g.mult != j.mult_table {
            return Err(Error::parse(format!("multiplication table does not match catalog group {}", j.name)));
        }
        Ok(g)
    }

    pub fn check_homomorphism<F: Field>(&self, rep: &Rep<F>) -> Result<()> {
        if rep.mats.len() != self.order() {
            return Err(Error::dim("one matrix per group element expected"));
        }
        for a in 0..self.order() {
            for b in 0..self.order() {
                if rep.mats[a].mul(&rep.mats[b]) != rep.mats[self.mult[a][b]] {
                    return Err(Error::Invariant(format!("ρ({a})ρ({b}) != ρ({a}{b})")));
                }
            }
        }
        Ok(())
    }

    /// ⟨χ, ψ⟩ = |G|^{-1} Σ χ(g) conj(ψ(g)).
    pub fn inner_product(&self, chi: &[Cyclo], psi: &[Cyclo]) -> Cyclo {
        let mut acc = Cyclo::zero();
        for (a, b) in chi.iter().zip(psi) {
            acc += &a.mul_ref(&b.conj());
        }
        acc.scale(&Rational::new(1, self.order() as i64))
    }

    /// |G|^{-1} Σ χ(g²).
    pub fn frobenius_schur(&self, chi: &[Cyclo]) -> Result<i32> {
        let mut acc = Cyclo::zero();
        for g in 0..self.order() {
            acc += &chi[self.mult[g][g]];
        }
        let v = acc.scale(&Rational::new(1, self.order() as i64));
        v.as_rational()
            .and_then(|r| r.to_i64())
            .map(|x| x as i32)
            .ok_or_else(|| Error::Invariant("Frobenius–Schur indicator is not an integer".into()))
    }

    /// Multiplicities of the catalog irreducibles in a character.
    pub fn decompose(&self, chi: &[Cyclo]) -> Result<Vec<usize>> {
        self.irreps
            .iter()
            .map(|r| {
                let ip = self.inner_product(chi, &r.character);
                ip.as_rational()
                    .and_then(|q| q.to_i64())
                    .filter(|&m| m >= 0)
                    .map(|m| m as usize)
                    .ok_or_else(|| Error::pre("character is not a genuine character"))
            })
            .collect()
    }

    /// Left regular action on the free module K[G]^q, basis index `i*|G| + g`
    /// standing for g·u_i.
    pub fn regular_rep(&self, q: usize) -> Rep<Rational> {
        let n = self.order();
        let mats = (0..n)
            .map(|h| {
                let mut m = Matrix::<Rational>::zeros(q * n, q * n);
                for i in 0..q {
                    for g in 0..n {
                        m.set(i * n + self.mult[h][g], i * n + g, Rational::one());
                    }
                }
                m
            })
            .collect();
        Rep { mats }
    }

    /// Contragredient representation g ↦ ρ(g^{-1})ᵀ.
    pub fn dual_rep<F: Field>(&self, rep: &Rep<F>) -> Rep<F> {
        Rep { mats: (0..self.order()).map(|g| rep.mats[self.inv[g]].transpose()).collect() }
    }

    /// The symplectic basis {θ_m}: each item realised with an invariant
    /// alternating form and a hyperbolic basis.
    pub fn symplectic_basis(&self) -> Result<Vec<BasisItem>> {
        let mut items = Vec::new();
        for (idx, r) in self.irreps.iter().enumerate() {
            let item = match r.fs_indicator {
                -1 => {
                    let forms = invariant_forms(&r.rep, FormSymmetry::Alternating)?;
                    let kappa = forms.into_iter().next().ok_or_else(|| Error::Invariant("no invariant alternating form".into()))?;
                    (r.name.clone(), ItemKind::Symplectic, vec![idx], r.rep.clone(), kappa)
                }
                1 => {
                    let forms = invariant_forms(&r.rep, FormSymmetry::Symmetric)?;
                    let b = forms.into_iter().next().ok_or_else(|| Error::Invariant("no invariant symmetric form".into()))?;
                    let d = r.degree();
                    let mut kappa = Matrix::<Cyclo>::zeros(2 * d, 2 * d);
                    kappa.set_block(0, d, &b);
                    kappa.set_block(d, 0, &b.transpose().neg());
                    (format!("2*{}", r.name), ItemKind::DoubledOrthogonal, vec![idx, idx], r.rep.direct_sum(&r.rep), kappa)
                }
                0 => {
                    if r.conj_index < idx {
                        continue;
                    }
                    let d = r.degree();
                    let dual = self.dual_rep(&r.rep);
                    let mut kappa = Matrix::<Cyclo>::zeros(2 * d, 2 * d);
                    kappa.set_block(0, d, &Matrix::identity(d));
                    kappa.set_block(d, 0, &Matrix::<Cyclo>::identity(d).neg());
                    let name = format!("{}+{}", r.name, self.irreps[r.conj_index].name);
                    (name, ItemKind::ConjugatePair, vec![idx, r.conj_index], r.rep.direct_sum(&dual), kappa)
                }
                other => return Err(Error::Invariant(format!("indicator {other}"))),
            };
            let (name, kind, constituents, rep, kappa) = item;
            if !rep.preserves(&kappa) || !kappa.is_alternating() {
                return Err(Error::Invariant(format!("form on {name} is not invariant and alternating")));
            }
            let hyperbolic = forms::hyperbolic_basis(&kappa)?;
            let character = rep.character();
            items.push(BasisItem { name, kind, constituents, rep, kappa, hyperbolic, character });
        }
        Ok(items)
    }
}

fn verify_table(mult: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = mult.len();
    if n == 0 || mult.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(Error::Invariant("multiplication table has the wrong shape".into()));
    }
    for a in 0..n {
        if mult[0][a] != a || mult[a][0] != a {
            return Err(Error::Invariant("element 0 is not the identity".into()));
        }
        for b in 0..n {
            for c in 0..n {
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(Error::Invariant(format!("table not associative at ({a},{b},{c})")));
                }
            }
        }
    }
    (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| mult[a][b] == 0 && mult[b][a] == 0)
                .ok_or_else(|| Error::Invariant(format!("element {a} has no inverse")))
        })
        .collect()
}

fn table_from_faithful(mats: &[Matrix<Cyclo>]) -> Result<Vec<Vec<usize>>> {
    mats.iter()
        .map(|a| {
            mats.iter()
                .map(|b| {
                    let p = a.mul(b);
                    mats.iter().position(|m| *m == p).ok_or_else(|| Error::Invariant("matrices not closed".into()))
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSymmetry {
    Symmetric,
    Alternating,
    Any,
}

/// Basis of the space of bilinear forms B with ρ(g)ᵀ B ρ(g) = B for all g,
/// restricted to the requested symmetry type.
pub fn invariant_forms<F: Field>(rep: &Rep<F>, sym: FormSymmetry) -> Result<Vec<Matrix<F>>> {
    let d = rep.dim();
    // Parameters: the free entries of B.
    let slots: Vec<(usize, usize)> = match sym {
        FormSymmetry::Any => (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect(),
        FormSymmetry::Symmetric => (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect(),
        FormSymmetry::Alternating => (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect(),
    };
    let basis_form = |k: usize| {
        let (i, j) = slots[k];
        let mut b = Matrix::<F>::zeros(d, d);
        b.set(i, j, F::one());
        match sym {
            FormSymmetry::Symmetric => b.set(j, i, F::one()),
            FormSymmetry::Alternating => b.set(j, i, -F::one()),
            FormSymmetry::Any => {}
        }
        b
    };
    let images: Vec<Matrix<F>> = (0..slots.len()).map(basis_form).collect();
    let mut rows = Vec::new();
    for m in &rep.mats {
        let diffs: Vec<Matrix<F>> = images.iter().map(|b| b.congruence(m).sub(b)).collect();
        for i in 0..d {
            for j in 0..d {
                rows.push(diffs.iter().map(|x| x.get(i, j).clone()).collect::<Vec<F>>());
            }
        }
    }
    let system = Matrix::from_rows(rows)?;
    let ker = system.kernel();
    Ok((0..ker.cols())
        .map(|c| {
            let mut b = Matrix::<F>::zeros(d, d);
            for (k, img) in images.iter().enumerate() {
                let coef = ker.get(k, c);
                if !coef.is_zero() {
                    b = b.add(&img.scale(coef));
                }
            }
            b
        })
        .collect())
}

/// Element Σ a_g g of the group algebra K[G].
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElem<F: Field> {
    pub coeffs: Vec<F>,
}

impl<F: Field> GroupRingElem<F> {
    pub fn zero(g: &FiniteGroup) -> Self {
        GroupRingElem { coeffs: vec![F::zero(); g.order()] }
    }

    pub fn one(g: &FiniteGroup) -> Self {
        Self::basis(g, 0)
    }

    pub fn basis(g: &FiniteGroup, k: usize) -> Self {
        let mut e = Self::zero(g);
        e.coeffs[k] = F::one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        GroupRingElem { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GroupRingElem { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() - b).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        GroupRingElem { coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect() }
    }

    /// Convolution product.
    pub fn mul(&self, o: &Self, g: &FiniteGroup) -> Self {
        let mut out = Self::zero(g);
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out.coeffs[g.mul(a, b)] += &x.mul_ref(y);
                }
            }
        }
        out
    }

    /// Σ a_g g ↦ Σ conj(a_g) g^{-1}.
    pub fn involution(&self, g: &FiniteGroup) -> Self {
        let mut out = Self::zero(g);
        for (a, x) in self.coeffs.iter().enumerate() {
            out.coeffs[g.inv(a)] = x.conj();
        }
        out
    }

    pub fn to_cyclo(&self) -> GroupRingElem<Cyclo> {
        GroupRingElem { coeffs: self.coeffs.iter().map(|c| c.to_cyclo()).collect() }
    }
}

/// Matrix of left multiplication by `a` on K[G] in the basis of group elements.
pub fn left_mult_matrix<F: Field>(g: &FiniteGroup, a: &GroupRingElem<F>) -> Matrix<F> {
    let n = g.order();
    let mut m = Matrix::<F>::zeros(n, n);
    for (h, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for k in 0..n {
            let t = m.get(g.mul(h, k), k).clone() + x;
            m.set(g.mul(h, k), k, t);
        }
    }
    m
}

/// Central idempotent e_χ = χ(1)/|G| Σ χ(g^{-1}) g.
pub fn central_idempotent(g: &FiniteGroup, chi: &[Cyclo]) -> GroupRingElem<Cyclo> {
    let n = g.order() as i64;
    let scale = Rational::new(1, n);
    let deg = chi[0].clone();
    GroupRingElem { coeffs: (0..g.order()).map(|x| chi[g.inv(x)].mul_ref(&deg).scale(&scale)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders_and_exponents() {
        for (name, order, exp) in [("C2", 2, 2), ("C6", 6, 6), ("D4", 8, 4), ("D5", 10, 10), ("Q8", 8, 4), ("S3", 6, 6), ("trivial", 1, 1)] {
            let g = FiniteGroup::catalog(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(g.exponent(), exp, "{name}");
        }
        assert!(FiniteGroup::catalog("X9").is_err());
        assert!(FiniteGroup::catalog("D2").is_err());
    }

    #[test]
    fn q8_two_dimensional_character() {
        let g = FiniteGroup::quaternion().unwrap();
        let theta = &g.irreps()[4];
        let vals: Vec<i64> = theta.character.iter().map(|c| c.as_rational().unwrap().to_i64().unwrap()).collect();
        assert_eq!(vals, vec![2, -2, 0, 0, 0, 0, 0, 0]);
        assert_eq!(theta.fs_indicator, -1);
    }

    #[test]
    fn class_counts_match_irreducibles() {
        for name in ["C4", "S3", "D4", "Q8", "D5"] {
            let g = FiniteGroup::catalog(name).unwrap();
            assert_eq!(g.conjugacy_classes().len(), g.irreps().len(), "{name}");
            let total: usize = g.irreps().iter().map(|r| r.degree() * r.degree()).sum();
            assert_eq!(total, g.order());
        }
        assert_eq!(FiniteGroup::quaternion().unwrap().center(), vec![0, 1]);
    }

    #[test]
    fn indicators() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let fs: Vec<i32> = c3.irreps().iter().map(|r| r.fs_indicator).collect();
        assert_eq!(fs, vec![1, 0, 0]);
        let s3 = FiniteGroup::symmetric3().unwrap();
        assert!(s3.irreps().iter().all(|r| r.fs_indicator == 1));
    }

    #[test]
    fn symplectic_basis_shapes() {
        let kinds = |name: &str| -> Vec<(String, ItemKind)> {
            FiniteGroup::catalog(name).unwrap().symplectic_basis().unwrap().into_iter().map(|i| (i.name, i.kind)).collect()
        };
        assert_eq!(
            kinds("C2"),
            vec![("2*chi0".into(), ItemKind::DoubledOrthogonal), ("2*chi1".into(), ItemKind::DoubledOrthogonal)]
        );
        assert_eq!(
            kinds("C3"),
            vec![("2*chi0".into(), ItemKind::DoubledOrthogonal), ("chi1+chi2".into(), ItemKind::ConjugatePair)]
        );
        let q8 = kinds("Q8");
        assert_eq!(q8.len(), 5);
        assert_eq!(q8[4], ("theta".into(), ItemKind::Symplectic));
    }

    #[test]
    fn involution_is_anti_multiplicative() {
        let g = FiniteGroup::dihedral(4).unwrap();
        let a = GroupRingElem::<Rational> { coeffs: (0..8).map(|k| Rational::from_int(k as i64 - 3)).collect() };
        let b = GroupRingElem::<Rational> { coeffs: (0..8).map(|k| Rational::from_int((k * k) as i64 % 5)).collect() };
        let lhs = a.mul(&b, &g).involution(&g);
        let rhs = b.involution(&g).mul(&a.involution(&g), &g);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroup::catalog("D4").unwrap();
        let s = serde_json::to_string(&g.to_json()).unwrap();
        let back: GroupJson = serde_json::from_str(&s).unwrap();
        assert_eq!(FiniteGroup::from_json(&back).unwrap().mult_table(), g.mult_table());
    }
}
