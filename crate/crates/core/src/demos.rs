//! End-to-end demos: the trace form of a tame real or imaginary quadratic
//! field as a Q[C2]-module, and the free hyperbolic plane over Q[G].

use serde::Serialize;

use crate::class_group::{chi_hermitian, pfaffian_coordinate, ClassRepresentative};
use crate::complex::{CohomologyPairing, PerfectGComplex};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::FiniteGroup;
use crate::matrix::Matrix;
use crate::rational::Rational;

type Q = Rational;

/// Q(√d) with α = (1+√d)/2 and the trace form on the normal basis {α, σα}.
#[derive(Clone, Debug)]
pub struct QuadraticFieldDatum {
    pub d: i64,
    pub gram: Matrix<Q>,
}

fn squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadraticFieldDatum {
    /// Requires d squarefree, d ≡ 1 (mod 4), d ≠ 1 so that 2 is unramified.
    pub fn new(d: i64) -> Result<Self> {
        if d == 1 || d.rem_euclid(4) != 1 || !squarefree(d) {
            return Err(Error::pre(format!("d = {d} is not a squarefree integer ≡ 1 mod 4 other than 1")));
        }
        // α² = α + (d-1)/4, Tr(α) = 1, N(α) = (1-d)/4
        let a = Q::new(d + 1, 2);
        let b = Q::new(1 - d, 2);
        let gram = Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![b, a]]);
        Ok(QuadraticFieldDatum { d, gram: gram? })
    }

    /// (α - σα)² = d, computed from the trace form: Tr((α-σα)²)/2.
    pub fn discriminant_from_trace(&self) -> Q {
        let g = &self.gram;
        (g.get(0, 0).clone() + g.get(1, 1) - g.get(0, 1).clone() - g.get(1, 0)) / &Q::from_int(2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticReport {
    pub d: i64,
    /// Pfaffian coordinate at 2φ for the trace form scaled by |G|^{-1}.
    #[serde(with = "crate::io::exact")]
    pub coordinate: Cyclo,
    /// Same for the unscaled trace form.
    #[serde(with = "crate::io::exact")]
    pub trace_coordinate: Cyclo,
    pub sign: i8,
    pub epsilon_infinity: i8,
    /// (α - σα)² recomputed from the trace form.
    pub discriminant: Q,
    /// coordinate / d.
    pub normalisation: Q,
    pub class: ClassRepresentative,
}

impl QuadraticReport {
    pub fn holds(&self) -> bool {
        self.sign == self.epsilon_infinity && self.normalisation.is_one() && self.discriminant == Q::from_int(self.d)
    }

    pub fn render(&self) -> String {
        format!(
            "d = {}\n(alpha - sigma alpha)^2 = {}\npf coordinate at 2*phi, |G|^-1 Tr: {}\npf coordinate at 2*phi, Tr: {}\nsign {} vs eps_inf {}: {}\nnormalisation coordinate/d = {}\n",
            self.d,
            self.discriminant,
            self.coordinate,
            self.trace_coordinate,
            self.sign,
            self.epsilon_infinity,
            if self.sign == self.epsilon_infinity { "PASS" } else { "FAIL" },
            self.normalisation
        )
    }
}

pub fn quadratic_trace_demo(d: i64) -> Result<QuadraticReport> {
    let qd = QuadraticFieldDatum::new(d)?;
    let g = FiniteGroup::catalog("C2")?;
    let p = PerfectGComplex::concentrated(&g, 0, 1);
    let half = Q::new(1, 2);
    let scaled = CohomologyPairing::from_blocks(0, vec![Matrix::identity(2)], |_, _| qd.gram.scale(&half));
    let full = CohomologyPairing::from_blocks(0, vec![Matrix::identity(2)], |_, _| qd.gram.clone());
    let phi = g
        .symplectic_basis()?
        .into_iter()
        .find(|b| b.constituents == vec![1, 1])
        .ok_or_else(|| Error::Invariant("2φ missing from the basis".into()))?;
    let coordinate = pfaffian_coordinate(&p, &scaled, &phi)?;
    let trace_coordinate = pfaffian_coordinate(&p, &full, &phi)?;
    let sign = coordinate.real_sign()?;
    let normalisation = coordinate
        .as_rational()
        .ok_or_else(|| Error::Invariant("irrational coordinate".into()))?
        / &Q::from_int(d);
    Ok(QuadraticReport {
        d,
        coordinate,
        trace_coordinate,
        sign,
        epsilon_infinity: if d > 0 { 1 } else { -1 },
        discriminant: qd.discriminant_from_trace(),
        normalisation,
        class: chi_hermitian(&p, &scaled)?,
    })
}

/// Valid discriminant parameters with 1 < |d| ≤ bound.
pub fn quadratic_parameters(bound: i64) -> Vec<i64> {
    (-bound..=bound).filter(|&d| d.abs() > 1 && d.rem_euclid(4) == 1 && squarefree(d)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct HpRow {
    pub character: String,
    pub theta_one: usize,
    /// Coordinate of (HP, |G|^{-1}σ).
    #[serde(with = "crate::io::exact")]
    pub scaled: Cyclo,
    /// Coordinate of (HP, σ).
    #[serde(with = "crate::io::exact")]
    pub unscaled: Cyclo,
    /// (-1)^{θ(1)/2}.
    pub closed_scaled: i64,
    /// (-|G|)^{θ(1)/2}, the printed closed form for (HP, σ).
    pub closed_printed: i64,
    /// |G|^{θ(1)}·(-1)^{θ(1)/2}, what scaling the form predicts for (HP, σ).
    pub closed_homogeneous: i64,
    /// (-1)^{θ(z)/2} for a central involution z, if G has one.
    pub central_involution_sign: Option<i64>,
}

impl HpRow {
    pub fn scaled_matches(&self) -> bool {
        self.scaled == Cyclo::from_int(self.closed_scaled)
    }

    pub fn unscaled_matches_printed(&self) -> bool {
        self.unscaled == Cyclo::from_int(self.closed_printed)
    }

    pub fn unscaled_matches_homogeneous(&self) -> bool {
        self.unscaled == Cyclo::from_int(self.closed_homogeneous)
    }

    pub fn involution_reading_agrees(&self) -> bool {
        self.central_involution_sign.is_none_or(|s| s == self.closed_scaled)
    }
}

fn neg_one_pow(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Hyp(Q[G]) = Q[G] ⊕ Q[G]^D in degree 0 with the evaluation pairing.
pub fn hyperbolic_plane(g: &FiniteGroup) -> (PerfectGComplex, CohomologyPairing) {
    let p = PerfectGComplex::concentrated(g, 0, 2);
    let n = g.order();
    let mut s = Matrix::<Q>::zeros(2 * n, 2 * n);
    s.set_block(0, n, &Matrix::identity(n));
    s.set_block(n, 0, &Matrix::identity(n));
    let pairing = CohomologyPairing::from_blocks(0, vec![Matrix::identity(2 * n)], |_, _| s.clone());
    (p, pairing)
}

pub fn hyperbolic_plane_demo(g: &FiniteGroup) -> Result<Vec<HpRow>> {
    let (p, s) = hyperbolic_plane(g);
    let order = g.order() as i64;
    let scaled = s.scale(&Q::new(1, order));
    let z = g.center().into_iter().find(|&z| z != 0 && g.mul(z, z) == 0);
    let mut rows = vec![];
    for item in g.symplectic_basis()? {
        let t1 = item.degree();
        let half = t1 / 2;
        let central_involution_sign = match z {
            Some(z) => {
                let tz = item.character[z]
                    .as_rational()
                    .and_then(|q| q.to_i64())
                    .ok_or_else(|| Error::Invariant("non-integral character value".into()))?;
                Some(if (tz / 2).rem_euclid(2) == 0 { 1 } else { -1 })
            }
            None => None,
        };
        rows.push(HpRow {
            character: item.name.clone(),
            theta_one: t1,
            scaled: pfaffian_coordinate(&p, &scaled, &item)?,
            unscaled: pfaffian_coordinate(&p, &s, &item)?,
            closed_scaled: neg_one_pow(half),
            closed_printed: (-order).pow(half as u32),
            closed_homogeneous: order.pow(t1 as u32) * neg_one_pow(half),
            central_involution_sign,
        });
    }
    Ok(rows)
}

pub fn render_hp(g: &FiniteGroup, rows: &[HpRow]) -> String {
    let mut out = format!("group {} (|G| = {})\n", g.name(), g.order());
    out.push_str("character  theta(1)  (HP,|G|^-1 s)  (-1)^(theta(1)/2)  (HP,s)  (-|G|)^(theta(1)/2)  |G|^theta(1)(-1)^(theta(1)/2)  theta(z) reading\n");
    for r in rows {
        out.push_str(&format!(
            "{:<10} {:>8}  {:>13}  {:>18}  {:>6}  {:>19}  {:>29}  {}\n",
            r.character,
            r.theta_one,
            r.scaled.to_string(),
            r.closed_scaled,
            r.unscaled.to_string(),
            r.closed_printed,
            r.closed_homogeneous,
            match r.central_involution_sign {
                Some(s) if s == r.closed_scaled => "agrees".to_string(),
                Some(s) => format!("differs ({s})"),
                None => "no central involution".to_string(),
            }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_signs() {
        for (d, s) in [(5, 1), (-7, -1), (-3, -1), (13, 1)] {
            let r = quadratic_trace_demo(d).unwrap();
            assert_eq!(r.sign, s);
            assert!(r.holds());
            assert_eq!(r.trace_coordinate, Cyclo::from_int(2 * d));
        }
        assert!(quadratic_trace_demo(9).is_err());
        assert!(quadratic_trace_demo(3).is_err());
        assert!(quadratic_trace_demo(1).is_err());
    }

    #[test]
    fn parameter_list() {
        let ds = quadratic_parameters(20);
        assert!(ds.contains(&5) && ds.contains(&-3) && ds.contains(&17) && ds.contains(&-19));
        assert!(!ds.contains(&1) && !ds.contains(&9));
    }

    #[test]
    fn hyperbolic_plane_scaled_signs() {
        for name in ["trivial", "C2", "Q8"] {
            let g = FiniteGroup::catalog(name).unwrap();
            for r in hyperbolic_plane_demo(&g).unwrap() {
                assert!(r.scaled_matches(), "{name} {r:?}");
                assert!(r.unscaled_matches_homogeneous(), "{name} {r:?}");
                assert!(r.involution_reading_agrees());
            }
        }
    }
}
