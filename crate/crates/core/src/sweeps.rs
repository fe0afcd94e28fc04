//! Seeded identity sweeps shared by the acceptance suite and the CLI.
//! Every sweep fans out with rayon and reports in input order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::class_group::{
    acyclic_summand_check, acyclic_zero_form_check, basis_change_check, direct_sum_check, random_invertible, signature_sign_check,
    two_route_check, unit,
};
use crate::complex::{random_complex, random_matrix, random_unimodular, PerfectGComplex, RandomComplexSpec};
use crate::demos::{hyperbolic_plane_demo, quadratic_parameters, quadratic_trace_demo};
use crate::duality::{duality_check, random_duality_datum};
use crate::equivariant::{isotypic_counts, metric_squares, pf_fixed_space, pf_group_ring, random_invariant_form, sign_check, Target};
use crate::error::Result;
use crate::forms::{pfaffian, pfaffian_matching};
use crate::group::FiniteGroup;
use crate::matrix::Matrix;
use crate::rational::Rational;

type Q = Rational;

pub const CATALOG: [&str; 7] = ["C2", "C3", "C4", "C6", "S3", "D4", "Q8"];

/// Number of checks run and the failures observed (first few kept verbatim).
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
    pub notes: Vec<String>,
}

impl Tally {
    pub fn pass(&self) -> bool {
        self.checked > 0 && self.failed == 0
    }

    pub fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.notes.len() < 5 {
                self.notes.push(note());
            }
        }
    }

    pub fn error(&mut self, e: impl std::fmt::Display) {
        self.record(false, || format!("error: {e}"));
    }

    pub fn merge(mut self, o: Tally) -> Tally {
        self.checked += o.checked;
        self.failed += o.failed;
        for n in o.notes {
            if self.notes.len() < 5 {
                self.notes.push(n);
            }
        }
        self
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} checks, {} failed", self.checked, self.failed);
        for n in &self.notes {
            s.push_str("; ");
            s.push_str(n);
        }
        s
    }
}

fn rng_for(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        h = h.wrapping_mul(0x100_0000_01b3).wrapping_add(p).rotate_left(17);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn merge_all(v: Vec<Tally>) -> Tally {
    v.into_iter().fold(Tally::default(), Tally::merge)
}

fn random_alternating(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Q> {
    let mut a = Matrix::<Q>::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = Q::new(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            a.set(j, i, -x.clone());
            a.set(i, j, x);
        }
    }
    a
}

/// pf² = det, pf(PᵀAP) = det(P)·pf(A), and matching expansion = elimination up to dim 8.
pub fn pfaffian_core(seed: u64, count: usize, max_dim: usize) -> Tally {
    merge_all(
        (0..count)
            .into_par_iter()
            .map(|k| {
                let mut t = Tally::default();
                let mut rng = rng_for(seed, &[k as u64]);
                let n = rng.gen_range(0..=max_dim);
                let a = random_alternating(&mut rng, n);
                let pf = match pfaffian(&a) {
                    Ok(x) => x,
                    Err(e) => {
                        if n % 2 == 1 {
                            t.record(true, String::new);
                        } else {
                            t.error(e);
                        }
                        return t;
                    }
                };
                t.record(pf.clone() * &pf == a.det(), || format!("pf² ≠ det at n={n}"));
                let p = random_matrix(&mut rng, n, n, 3);
                let pap = a.congruence(&p);
                match pfaffian(&pap) {
                    Ok(x) => t.record(x == p.det() * &pf, || format!("congruence rule fails at n={n}")),
                    Err(e) => t.error(e),
                }
                if n <= 8 {
                    match pfaffian_matching(&a) {
                        Ok(x) => t.record(x == pf, || format!("matching ≠ elimination at n={n}")),
                        Err(e) => t.error(e),
                    }
                }
                t
            })
            .collect(),
    )
}

/// Per group and rank q, `forms` random invariant forms, each checked at every
/// basis character by `check`.
fn form_sweep<F>(groups: &[&str], qs: &[usize], forms: usize, seed: u64, check: F) -> Tally
where
    F: Fn(&FiniteGroup, &Matrix<Q>, usize, &mut Tally) -> Result<()> + Sync,
{
    let jobs: Vec<(usize, usize, usize)> = (0..groups.len())
        .flat_map(|gi| qs.iter().flat_map(move |&q| (0..forms).map(move |k| (gi, q, k))))
        .collect();
    let cat: Vec<FiniteGroup> = groups.iter().map(|n| FiniteGroup::catalog(n).expect("catalog group")).collect();
    merge_all(
        jobs.into_par_iter()
            .map(|(gi, q, k)| {
                let g = &cat[gi];
                let mut t = Tally::default();
                let mut rng = rng_for(seed, &[gi as u64, q as u64, k as u64]);
                let r = random_invariant_form(g, q, &mut rng).and_then(|s| check(g, &s, q, &mut t));
                if let Err(e) = r {
                    t.error(format!("{} q={q}: {e}", g.name()));
                }
                t
            })
            .collect(),
    )
}

/// Fixed-space Pfaffian with the |G|^{-1}-scaled basis equals pf(|G|^{-1} T(σ̃)).
pub fn pfaffian_identity_sweep(groups: &[&str], qs: &[usize], forms: usize, seed: u64) -> Tally {
    form_sweep(groups, qs, forms, seed, |g, s, q, t| {
        for item in g.symplectic_basis()? {
            let l = pf_fixed_space(g, s, q, &item)?;
            let r = pf_group_ring(g, s, q, &item)?;
            t.record(l == r, || format!("{} {} q={q}: {l} vs {r}", g.name(), item.name));
        }
        Ok(())
    })
}

/// |det of the fixed-space gram| = |det(|G| T_V(σ̃))| for every irreducible ideal V.
pub fn metric_identity_sweep(groups: &[&str], qs: &[usize], forms: usize, seed: u64) -> Tally {
    form_sweep(groups, qs, forms, seed, |g, s, q, t| {
        for idx in 0..g.irreps().len() {
            let v = Target::ideal(g, idx)?;
            let (l, r) = metric_squares(g, s, q, &v)?;
            t.record(l == r, || format!("{} {} q={q}: {l} vs {r}", g.name(), v.name));
        }
        Ok(())
    })
}

/// sign(pf) = i^{n^-} with n^- from isotypic signatures, n^± even.
pub fn sign_formula_sweep(groups: &[&str], qs: &[usize], forms: usize, seed: u64) -> Tally {
    form_sweep(groups, qs, forms, seed, |g, s, q, t| {
        let rep = g.regular_rep(q);
        for item in g.symplectic_basis()? {
            let c = sign_check(g, s, q, &item)?;
            t.record(c.holds(), || format!("{} {} q={q}: {c:?}", g.name(), item.name));
            let (np, nm) = isotypic_counts(g, &rep, s, &item.constituents)?;
            t.record(np % 2 == 0 && nm % 2 == 0, || format!("{} {} q={q}: odd n± ({np}, {nm})", g.name(), item.name));
        }
        Ok(())
    })
}

fn complex_sweep<F>(groups: &[&str], count: usize, seed: u64, spec: impl Fn(usize) -> RandomComplexSpec + Sync, check: F) -> Tally
where
    F: Fn(&PerfectGComplex, &crate::complex::CohomologyPairing, &mut ChaCha8Rng, &mut Tally) -> Result<()> + Sync,
{
    let cat: Vec<FiniteGroup> = groups.iter().map(|n| FiniteGroup::catalog(n).expect("catalog group")).collect();
    let jobs: Vec<(usize, usize)> = (0..groups.len()).flat_map(|gi| (0..count).map(move |k| (gi, k))).collect();
    merge_all(
        jobs.into_par_iter()
            .map(|(gi, k)| {
                let g = &cat[gi];
                let mut t = Tally::default();
                let mut rng = rng_for(seed, &[gi as u64, k as u64, 44]);
                let r = random_complex(g, &mut rng, spec(k)).and_then(|(p, s)| check(&p, &s, &mut rng, &mut t));
                if let Err(e) = r {
                    t.error(format!("{} #{k}: {e}", g.name()));
                }
                t
            })
            .collect(),
    )
}

/// Sign part of χ_H^s·(χ_A^s)^{-1} is i^{n^-(σ^ev) - n^-(σ^odd)}; magnitudes agree.
pub fn sign_class_sweep(groups: &[&str], count: usize, seed: u64) -> Tally {
    complex_sweep(groups, count, seed, |_| RandomComplexSpec::default(), |p, s, _, t| {
        for v in signature_sign_check(p, s)? {
            t.record(v.holds(), || format!("{}: {v:?}", p.group.name()));
        }
        Ok(())
    })
}

/// Hermitian class = lifted-pairing class for |G|σ; the |G|^{χθ(1)/2} factor;
/// signature telescope; metric telescope. Odd-numbered instances have χ ≠ 0.
pub fn two_route_sweep(groups: &[&str], count: usize, seed: u64) -> (Tally, usize) {
    let nonzero = std::sync::atomic::AtomicUsize::new(0);
    let t = complex_sweep(
        groups,
        count,
        seed,
        |k| RandomComplexSpec { euler_nonzero: Some(k % 2 == 1), ..RandomComplexSpec::default() },
        |p, s, rng, t| {
            if p.euler_characteristic() != 0 {
                nonzero.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            }
            let (v, m) = two_route_check(p, s, rng.gen())?;
            for x in v {
                t.record(x.holds(), || format!("{}: {x:?}", p.group.name()));
            }
            for (i, ok) in m.into_iter().enumerate() {
                t.record(ok, || format!("{}: metric telescope fails at irreducible {i}", p.group.name()));
            }
            Ok(())
        },
    );
    (t, nonzero.into_inner())
}

/// Acyclic-with-zero-form triviality, direct sums, unit-cell summands, basis changes.
pub fn structural_sweep(groups: &[&str], count: usize, seed: u64) -> Tally {
    complex_sweep(groups, count, seed, |_| RandomComplexSpec::default(), |p, s, rng, t| {
        let g = &p.group;
        let h = rng.gen_range(0..g.order());
        let cell = PerfectGComplex::cell(g, rng.gen_range(-2..=1), unit(g, h, rng.gen()));
        t.record(acyclic_zero_form_check(&cell)?, || format!("{}: unit cell not trivial", g.name()));
        let (l, _) = random_unimodular(g, rng, 2);
        let c = PerfectGComplex::new(g.clone(), rng.gen_range(-2..=1), vec![2, 2], vec![l])?;
        t.record(acyclic_zero_form_check(&c)?, || format!("{}: unimodular acyclic complex not trivial", g.name()));
        let (q, r) = random_complex(g, rng, RandomComplexSpec::default())?;
        t.record(direct_sum_check(p, s, &q, &r)?, || format!("{}: direct sum not multiplicative", g.name()));
        t.record(acyclic_summand_check(p, s, rng.gen_range(-2..=1), h, rng.gen())?, || format!("{}: acyclic summand changes the class", g.name()));
        let deg = p.degrees().filter(|&d| p.rank(d) > 0).collect::<Vec<_>>();
        if !deg.is_empty() {
            let d = deg[rng.gen_range(0..deg.len())];
            let (l, li) = random_invertible(g, rng, p.rank(d));
            for v in basis_change_check(p, s, d, &l, &li)? {
                t.record(v.holds(), || format!("{}: {v:?}", g.name()));
            }
        }
        Ok(())
    })
}

/// Hyperbolic plane: scaled coordinate (-1)^{θ(1)/2}, central-involution
/// reading, and the printed closed form (-|G|)^{θ(1)/2} for the unscaled form.
pub struct HpSweep {
    pub scaled: Tally,
    pub printed: Tally,
    pub homogeneous: Tally,
    pub involution: Tally,
}

pub fn hyperbolic_plane_sweep(groups: &[&str]) -> HpSweep {
    let mut out = HpSweep { scaled: Tally::default(), printed: Tally::default(), homogeneous: Tally::default(), involution: Tally::default() };
    for name in groups {
        let g = FiniteGroup::catalog(name).expect("catalog group");
        match hyperbolic_plane_demo(&g) {
            Ok(rows) => {
                for r in rows {
                    let tag = format!("{name} {}", r.character);
                    out.scaled.record(r.scaled_matches(), || format!("{tag}: {} vs {}", r.scaled, r.closed_scaled));
                    out.printed.record(r.unscaled_matches_printed(), || format!("{tag}: {} vs {}", r.unscaled, r.closed_printed));
                    out.homogeneous.record(r.unscaled_matches_homogeneous(), || format!("{tag}: {} vs {}", r.unscaled, r.closed_homogeneous));
                    out.involution.record(r.involution_reading_agrees(), || format!("{tag}: involution reading differs"));
                }
            }
            Err(e) => out.scaled.error(e),
        }
    }
    out
}

/// Sign of the coordinate at 2φ equals sign(d) for all valid d with |d| ≤ bound,
/// and the coordinate for the |G|^{-1}-scaled trace form is exactly d.
pub fn quadratic_sweep(bound: i64) -> Tally {
    merge_all(
        quadratic_parameters(bound)
            .into_par_iter()
            .map(|d| {
                let mut t = Tally::default();
                match quadratic_trace_demo(d) {
                    Ok(r) => t.record(r.holds(), || format!("d={d}: sign {} coordinate {}", r.sign, r.coordinate)),
                    Err(e) => t.error(format!("d={d}: {e}")),
                }
                t
            })
            .collect(),
    )
}

/// Symmetrised duality data: symmetry, hyperbolicity, signature reduction.
pub fn duality_sweep(groups: &[&str], count: usize, seed: u64) -> Tally {
    let cat: Vec<FiniteGroup> = groups.iter().map(|n| FiniteGroup::catalog(n).expect("catalog group")).collect();
    merge_all(
        (0..count)
            .into_par_iter()
            .map(|k| {
                let mut t = Tally::default();
                let g = &cat[k % cat.len()];
                let mut rng = rng_for(seed, &[k as u64, 10]);
                let d = rng.gen_range(0..=4);
                match random_duality_datum(g, d, 1, &mut rng).and_then(|dd| duality_check(&dd)) {
                    Ok(v) => t.record(v.holds(), || format!("{} d={d}: {v:?}", g.name())),
                    Err(e) => t.error(format!("{} d={d}: {e}", g.name())),
                }
                t
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_bookkeeping() {
        let mut t = Tally::default();
        assert!(!t.pass());
        t.record(true, String::new);
        assert!(t.pass());
        t.record(false, || "x".into());
        assert!(!t.pass());
        assert_eq!(t.summary(), "2 checks, 1 failed; x");
    }

    #[test]
    fn small_sweeps_pass() {
        assert!(pfaffian_core(1, 20, 8).pass());
        assert!(pfaffian_identity_sweep(&["C2"], &[1], 2, 1).pass());
        assert!(quadratic_sweep(30).pass());
        assert!(duality_sweep(&["C2"], 5, 1).pass());
    }
}
